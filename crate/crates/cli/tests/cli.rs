use std::process::Command;

fn sphkernel(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sphkernel")).args(args).env_remove("SPHKERNEL_CAP").env_remove("SPHKERNEL_CONFIG").output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn straighten_prints_normal_form() {
    let (code, out) = sphkernel(&["straighten", "--kind", "phi", "[-2,1]"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "(q^2 - q^3)*[1,0] + q^5*[2,1]");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sphkernel(&["verify", "--suite", "nope"]).0, 2);
    assert_eq!(sphkernel(&["straighten", "q^"]).0, 2);
    assert_eq!(sphkernel(&["verify", "--p", "9"]).0, 2);
    assert_eq!(sphkernel(&["frobnicate"]).0, 2);
}

#[test]
fn suite_passes_and_reports_are_reproducible() {
    let (code, a) = sphkernel(&["verify", "--suite", "confluence", "--samples", "40", "--seed", "5", "--json", "-"]);
    assert_eq!(code, 0);
    let (_, b) = sphkernel(&["verify", "--suite", "confluence", "--samples", "40", "--seed", "5", "--json", "-"]);
    assert_eq!(a, b);
    assert!(a.contains("\"schema_version\": 1"));
}

#[test]
fn cap_failure_exits_1() {
    // a census larger than the cap cannot be checked, which counts as a failure
    let (code, out) = sphkernel(&["--cap", "5", "verify", "--suite", "deltaphi"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("FAIL"));
}

#[test]
fn config_file_mirrors_flags() {
    let dir = std::env::temp_dir().join(format!("sphkernel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("caps.conf");
    std::fs::write(&path, "# oracle limits\ncap = 5\nrank_max = 2\n").unwrap();
    let (code, _) = sphkernel(&["--config", path.to_str().unwrap(), "verify", "--suite", "deltaphi"]);
    assert_eq!(code, 1);
    std::fs::write(&path, "cap = oops\n").unwrap();
    assert_eq!(sphkernel(&["--config", path.to_str().unwrap(), "verify", "--suite", "satake"]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
