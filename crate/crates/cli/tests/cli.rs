use std::process::{Command, Output};

use residua_cli::report::{decode_exact, ReportRecord};
use residua::Rational;

fn residua(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_residua")).args(args).env_remove("RESIDUA_SEED").output().unwrap()
}

fn report(out: &Output) -> ReportRecord {
    ReportRecord::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

#[test]
fn worked_example_vanishes() {
    let out = residua(&["ch-eval", "--factors", "z,z*w", "--weights", "3,1", "--testform", "z|dz^dw"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r.pass);
    assert_eq!(r.values["value"][0].q, "0/1");
    assert!(decode_exact(&r.values["value"]).unwrap().is_zero());
}

#[test]
fn reversed_example_is_four_pi_squared() {
    let out = residua(&["ch-eval", "--factors", "z*w,z", "--weights", "3,1", "--testform", "z|dz^dw"]);
    let r = report(&out);
    let v = &r.values["iterated"];
    assert_eq!((v[0].q.as_str(), v[0].pi, v[0].i), ("4/1", 2, 0));
    assert_eq!(v[0].rational(), Some(Rational::from_integer(4.into())));
}

#[test]
fn duality_failure_exits_one() {
    let out = residua(&["duality", "--ci", "z^2,w", "--g", "z"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!report(&out).pass);
    let out = residua(&["duality", "--ci", "z^2,w", "--g", "z^2*w"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn gamma_check_example() {
    let out = residua(&["gamma-check", "--alpha", "[[1,0],[1,1]]", "--p", "2", "--sigma", "id", "--mu", "3,1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.values["I=[1,2].curve"][0].q, "0/1");
    assert_eq!(r.values["I=[1,2].iterated"][0].q, "0/1");
    let out = residua(&["gamma-check", "--alpha", "[[1,0],[1,1]]", "--p", "2", "--sigma", "2,1", "--mu", "3,1"]);
    assert_eq!(report(&out).values["I=[1,2].curve"][0].q, "1/1");
}

#[test]
fn reports_are_deterministic() {
    let args = ["quad-compare", "--factors", "z", "--testform", "1|dz", "--deltas", "1e-2,1e-4", "--samples", "2", "--seed", "9"];
    let a = residua(&args);
    let b = residua(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r.seed, 9);
    assert_eq!(ReportRecord::from_json(&r.to_json()).unwrap(), r);
}

#[test]
fn env_seed_overrides_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_residua"))
        .args(["ch-eval", "--factors", "z", "--testform", "1|dz", "--seed", "3"])
        .env("RESIDUA_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(report(&out).seed, 17);
}

#[test]
fn csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = residua(&[
        "quad-compare", "--factors", "z,w", "--nu", "6,2", "--testform", "1|dz^dw", "--format", "csv",
        "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("delta,value_re,value_im,abs_err"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn unwritable_path_exits_two() {
    let out = residua(&["ch-eval", "--factors", "z", "--testform", "1|dz", "--output", "/nonexistent/dir/r.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(residua(&["ch-eval", "--factors", "x1^0", "--testform", "1|dz"]).status.code(), Some(2));
    assert_eq!(residua(&["ch-eval", "--factors", "z"]).status.code(), Some(2));
    assert_eq!(residua(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, r#"{"command":"ch-eval","factors":"z,z*w","weights":"3,1","testform":"z|dz^dw"}"#).unwrap();
    let out = residua(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out).input["factors"], "z,z*w");
    // explicit flags win over the file
    let out = residua(&["ch-eval", "--config", path.to_str().unwrap(), "--factors", "z*w,z"]);
    assert_eq!(report(&out).values["iterated"][0].q, "4/1");
}

#[test]
fn module_errors_are_recorded() {
    let out = residua(&["ch-eval", "--factors", "z,w", "--weights", "1,3", "--testform", "1|dz^dw"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert!(r.error.is_some());
}
