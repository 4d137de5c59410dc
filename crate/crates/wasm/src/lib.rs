//! Browser bindings. The `ops` functions are plain Rust returning JSON so
//! they can be tested natively; the exported wrappers only convert errors.

use wasm_bindgen::prelude::*;

pub mod ops {
    use miqf::correspondence::{b_to_e, e_to_b_detailed, variety_build};
    use miqf::exterior::exterior_variety;
    use miqf::linalg::hermitian_signature_exact;
    use miqf::siegel::{gu_act, gu_random, siegel_contains, siegel_sample, SiegelPoint};
    use miqf::{validate_triple, CMatrix, FieldContext};
    use num_complex::Complex64;
    use serde::Serialize;

    #[derive(Serialize)]
    struct DiskPoint {
        re: f64,
        im: f64,
        member: bool,
        min_pivot: f64,
        riemann_min_pivot: Option<f64>,
    }

    #[derive(Serialize)]
    struct Check {
        name: String,
        passed: bool,
    }

    #[derive(Serialize)]
    struct Exterior {
        r: usize,
        k: usize,
        z: Vec<[f64; 2]>,
        n_prime: usize,
        r_prime: usize,
        signature: [usize; 2],
        z_prime: Vec<Vec<[f64; 2]>>,
        checks: Vec<Check>,
        round_trip: bool,
    }

    fn json<T: Serialize>(x: &T) -> String {
        serde_json::to_string(x).expect("plain data serializes")
    }

    fn field(delta: i64) -> Result<FieldContext, String> {
        FieldContext::new(delta).map_err(|e| e.to_string())
    }

    fn point(re: f64, im: f64) -> CMatrix {
        CMatrix::from_fn(1, 1, |_, _| Complex64::new(re, im))
    }

    /// Membership of `z = re + i·im` in the unit disk (the domain for
    /// signature (1, 1)), with the Riemann-form pivot when it is inside.
    pub fn disk_point(delta: i64, re: f64, im: f64, tol: f64) -> Result<String, String> {
        let z = point(re, im);
        let p = siegel_contains(&z, tol).map_err(|e| e.to_string())?;
        let riemann_min_pivot = if p.is_posdef {
            let v = variety_build(field(delta)?, 1, 2, &z, tol).map_err(|e| e.to_string())?;
            Some(v.riemann_form(tol).map_err(|e| e.to_string())?.posdef.min_pivot)
        } else {
            None
        };
        Ok(json(&DiskPoint {
            re,
            im,
            member: p.is_posdef,
            min_pivot: p.min_pivot,
            riemann_min_pivot,
        }))
    }

    pub fn sample_disk(seed: u64) -> Result<String, String> {
        let z = siegel_sample(1, 1, seed).map_err(|e| e.to_string())?;
        let c = z.z().get(0, 0);
        Ok(json(&[c.re, c.im]))
    }

    /// `z_0 = z`, `z_j = γ_j(z_{j−1})` for seeded random `γ_j ∈ GU(1,1)`.
    pub fn disk_orbit(delta: i64, re: f64, im: f64, seed: u64, steps: usize, tol: f64) -> Result<String, String> {
        let ctx = field(delta)?;
        let mut z = SiegelPoint::new(point(re, im), tol).map_err(|e| e.to_string())?;
        let mut path = vec![[re, im]];
        for j in 0..steps {
            let g = gu_random(ctx, 1, 1, seed.wrapping_add(j as u64), 2).map_err(|e| e.to_string())?;
            z = gu_act(&g, &z, tol).map_err(|e| e.to_string())?;
            let c = z.z().get(0, 0);
            path.push([c.re, c.im]);
        }
        Ok(json(&path))
    }

    /// `λᵏ` of the triple of a seeded point of the domain for signature (1, r−1).
    pub fn exterior_power(delta: i64, r: usize, k: usize, seed: u64, tol: f64) -> Result<String, String> {
        if !(2..=8).contains(&r) {
            return Err(format!("r = {r} outside the demo range 2..=8"));
        }
        let ctx = field(delta)?;
        let z = siegel_sample(1, r - 1, seed).map_err(|e| e.to_string())?;
        let v = variety_build(ctx, 1, r, z.z(), tol).map_err(|e| e.to_string())?;
        let e = b_to_e(&v).map_err(|e| e.to_string())?;
        let x = exterior_variety(&e, k, tol).map_err(|e| e.to_string())?;
        let sig = hermitian_signature_exact(x.gram()).map_err(|e| e.to_string())?;
        let zp = x.normalized_z(tol).map_err(|e| e.to_string())?;
        let report = validate_triple(&x, tol);
        Ok(json(&Exterior {
            r,
            k,
            z: z.z().to_rows()[0].iter().map(|c| [c.re, c.im]).collect(),
            n_prime: x.n(),
            r_prime: x.r(),
            signature: [sig.plus, sig.minus],
            z_prime: zp.to_rows().iter().map(|row| row.iter().map(|c| [c.re, c.im]).collect()).collect(),
            checks: report
                .checks
                .iter()
                .map(|c| Check {
                    name: c.name.clone(),
                    passed: c.passed,
                })
                .collect(),
            round_trip: e_to_b_detailed(&x, tol).is_ok(),
        }))
    }
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn disk_point(delta: i32, re: f64, im: f64, tol: f64) -> Result<String, JsValue> {
    js(ops::disk_point(delta.into(), re, im, tol))
}

#[wasm_bindgen]
pub fn sample_disk(seed: u32) -> Result<String, JsValue> {
    js(ops::sample_disk(seed.into()))
}

#[wasm_bindgen]
pub fn disk_orbit(delta: i32, re: f64, im: f64, seed: u32, steps: u32, tol: f64) -> Result<String, JsValue> {
    js(ops::disk_orbit(delta.into(), re, im, seed.into(), steps as usize, tol))
}

#[wasm_bindgen]
pub fn exterior_power(delta: i32, r: u32, k: u32, seed: u32, tol: f64) -> Result<String, JsValue> {
    js(ops::exterior_power(delta.into(), r as usize, k as usize, seed.into(), tol))
}
