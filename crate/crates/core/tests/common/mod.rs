use std::path::PathBuf;

pub struct GoldenCase {
    pub name: String,
    pub exit: i32,
    pub args: Vec<String>,
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn load_cases() -> Vec<GoldenCase> {
    let text = std::fs::read_to_string(golden_dir().join("cases.tsv")).expect("cases.tsv");
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut parts = l.splitn(3, '\t');
            let name = parts.next().unwrap().to_string();
            let exit = parts.next().unwrap().parse().expect("exit code");
            let args = parts.next().unwrap().split_whitespace().map(str::to_string).collect();
            GoldenCase { name, exit, args }
        })
        .collect()
}

/// Runs a case in-process; returns (exit code, stdout with the inputs path
/// replaced by `{dir}`).
pub fn run_case(case: &GoldenCase) -> (i32, String) {
    let dir = golden_dir().join("inputs");
    let dir = dir.to_str().unwrap();
    let args: Vec<String> = case.args.iter().map(|a| a.replace("{dir}", dir)).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = miqf::cli::run_cli(args, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap().replace(dir, "{dir}"))
}

pub fn expected_path(case: &GoldenCase) -> PathBuf {
    golden_dir().join("expected").join(format!("{}.out", case.name))
}

/// `Ok(())` when exit code and output match the checked-in file byte for byte.
pub fn check_case(case: &GoldenCase) -> Result<(), String> {
    let (code, out) = run_case(case);
    if code != case.exit {
        return Err(format!("{}: exit {code}, expected {}", case.name, case.exit));
    }
    let path = expected_path(case);
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if out != expected {
        return Err(format!("{}: output differs from {}", case.name, path.display()));
    }
    Ok(())
}
