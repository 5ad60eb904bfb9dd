use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gsp4kit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gsp4kit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn suzuki_281_is_empty() {
    let out = run(&["suzuki", "--prime", "281", "--rmax", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["divisible_odd_r"], serde_json::json!([]));
    assert_eq!(v["formula_divisible_any_r"][0], 70);
}

#[test]
fn induce_reports_order_104() {
    let out = run(&["induce", "--p", "13", "--q", "5", "--ell", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["order"], 104);
    assert_eq!(v["irreducible"], true);
    assert_eq!(v["mackey"]["orbit"], serde_json::json!([1, 5, 12, 8]));
}

#[test]
fn induce_rejects_bad_congruence() {
    let out = run(&["induce", "--p", "13", "--q", "7", "--ell", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["code"], "bad_parameters");
}

#[test]
fn quad_with_281_dividing_n_is_usage_error() {
    let out = run(&["primes", "quad", "--N", "562"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["message"].as_str().unwrap().contains("281 divides N"));
}

#[test]
fn certificates_round_trip_through_verify() {
    for args in [&["primes", "pair", "--N", "30"][..], &["primes", "quad", "--N", "1", "--k", "1"][..]] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0));
        let path = scratch(&format!("{}.json", args[1]));
        std::fs::write(&path, &out.stdout).unwrap();
        let check = run(&["primes", "verify", "--cert", path.to_str().unwrap()]);
        assert_eq!(check.status.code(), Some(0));
        assert_eq!(json(&check)["valid"], true);
    }
}

#[test]
fn tampered_certificate_exits_one() {
    let out = run(&["primes", "quad", "--N", "1"]);
    let mut v = json(&out);
    v["q"] = Value::from(v["q"].as_i64().unwrap() + 2);
    let path = scratch("tampered.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let check = run(&["primes", "verify", "--cert", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(1));
    assert_eq!(json(&check)["valid"], false);
}

#[test]
fn classify_induced_generators() {
    let out = run(&["induce", "--p", "13", "--q", "5", "--ell", "3"]);
    let gens = json(&out)["generators"].clone();
    let path = scratch("gens.json");
    std::fs::write(&path, gens.to_string()).unwrap();
    let out = run(&["classify", "--generators", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["large_image"], false);
}

#[test]
fn classify_truncation_exits_one() {
    let out = run(&["induce", "--p", "13", "--q", "5", "--ell", "3"]);
    let path = scratch("gens-cap.json");
    std::fs::write(&path, json(&out)["generators"].to_string()).unwrap();
    let out = run(&["classify", "--generators", path.to_str().unwrap(), "--cap", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn screen_file_and_determinism() {
    let sys = gsp4::screener::make_symm3_system(&gsp4::screener::CONDUCTOR_15_CURVE, &[3, 5], 15, 0, 150);
    let path = scratch("system.json");
    std::fs::write(&path, serde_json::to_string(&sys.to_file()).unwrap()).unwrap();
    let args = ["screen", "--system", path.to_str().unwrap(), "--ell-min", "7", "--ell-max", "40"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    for e in v["entries"].as_array().unwrap() {
        assert!(e["flags"].as_array().unwrap().iter().any(|f| f == "PossiblySymm3"));
    }
}

#[test]
fn screen_rejects_broken_shape() {
    let mut file = gsp4::screener::trivial_system(0, 0, 30).to_file();
    file.frobenius.get_mut("7").unwrap()[3] += 1;
    let path = scratch("broken.json");
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let out = run(&["screen", "--system", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["code"], "shape_violation");
}

#[test]
fn seed_changes_generic_system_only_when_given() {
    let a = run(&["--seed", "9", "screen", "--system", "builtin:generic", "--ell-max", "30"]);
    let b = run(&["screen", "--system", "builtin:generic", "--ell-max", "30", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn table_output() {
    let out = run(&["--table", "screen", "--system", "builtin:trivial", "--ell-max", "20"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().contains("PossiblyReducible"));
}
