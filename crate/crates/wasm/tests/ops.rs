use miqf_wasm::ops;
use serde_json::Value;

const TOL: f64 = 1e-9;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn disk_membership() {
    let v = parse(&ops::disk_point(1, 0.3, -0.4, TOL).unwrap());
    assert_eq!(v["member"], true);
    assert!((v["min_pivot"].as_f64().unwrap() - 0.75).abs() < 1e-15);
    assert!(v["riemann_min_pivot"].as_f64().unwrap() > 0.0);
    let v = parse(&ops::disk_point(1, 0.6, 0.8, TOL).unwrap());
    assert_eq!(v["member"], false);
    assert!(v["riemann_min_pivot"].is_null());
    assert!(ops::disk_point(4, 0.0, 0.0, TOL).is_err());
}

#[test]
fn samples_are_inside() {
    for seed in 0..20 {
        let p = parse(&ops::sample_disk(seed).unwrap());
        let (re, im) = (p[0].as_f64().unwrap(), p[1].as_f64().unwrap());
        assert!(re * re + im * im < 1.0);
    }
}

#[test]
fn orbit_stays_in_the_disk() {
    let path = parse(&ops::disk_orbit(3, 0.2, 0.1, 7, 25, TOL).unwrap());
    let path = path.as_array().unwrap();
    assert_eq!(path.len(), 26);
    for p in path {
        let (re, im) = (p[0].as_f64().unwrap(), p[1].as_f64().unwrap());
        assert!(re * re + im * im < 1.0);
    }
    assert!(ops::disk_orbit(3, 1.0, 0.5, 7, 3, TOL).is_err());
}

#[test]
fn exterior_power_report() {
    let v = parse(&ops::exterior_power(2, 4, 2, 11, TOL).unwrap());
    assert_eq!((v["n_prime"].as_u64(), v["r_prime"].as_u64()), (Some(3), Some(6)));
    assert_eq!(v["signature"], serde_json::json!([3, 3]));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert_eq!(v["round_trip"], true);
    assert!(ops::exterior_power(2, 4, 4, 11, TOL).unwrap_err().contains("exterior degree"));
}
