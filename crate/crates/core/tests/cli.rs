use std::process::Command;

use motivic::cli::run_args;
use motivic::Error;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_motivic"));
    c.env_remove("MOTIVIC_PRECISION").env_remove("MOTIVIC_T_DEGREE");
    c
}

fn json_of(out: &std::process::Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn zeta_command_echo_and_defaults() {
    let (cli, rep) = run_args(["motivic", "zeta", "--q", "2", "--n", "1", "--prec", "40"]).unwrap();
    assert_eq!(cli.common.q, Some(2));
    assert_eq!(cli.common.prec, 40);
    assert_eq!(rep.json["schema_version"], 1);
    assert_eq!(rep.json["context"]["q"], 2);
    assert_eq!(rep.json["results"]["precision"], 40);
    assert_eq!(rep.json["command"]["command"]["zeta"]["n"], 1);
    let (cli, _) = run_args(["motivic", "verify", "mellin", "--q", "3", "--n", "2", "--prec", "20"]).unwrap();
    assert_eq!(cli.common.t_degree, 64);
}

#[test]
fn bad_field_is_a_usage_error() {
    let e = run_args(["motivic", "zeta", "--q", "6", "--n", "1"]).unwrap_err();
    assert!(matches!(e, Error::Usage(ref m) if m.contains("--q")), "{e:?}");
    let out = bin().args(["zeta", "--q", "6", "--n", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["kind"], "Usage");
    let out = bin().args(["zeta", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(matches!(run_args(["motivic", "zeta", "--p", "4", "--n", "1"]), Err(Error::Usage(_))));
}

#[test]
fn log_coeffs_text() {
    let (_, rep) = run_args(["motivic", "log-coeffs", "--q", "2", "--n", "1", "--i", "1"]).unwrap();
    assert_eq!(rep.json["results"]["coefficients"][1]["text"][0][0], "(1)/(theta^2 + theta)");
}

#[test]
fn exit_codes() {
    let ok = bin().args(["verify", "mellin", "--q", "2", "--n", "1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v = json_of(&ok);
    assert_eq!(v["passed"], true);
    assert!(v["results"]["checks"][0]["agreement"].as_i64().unwrap() >= 40);

    let mzv = bin().args(["verify", "mzv-13", "--prec", "25"]).output().unwrap();
    assert_eq!(mzv.status.code(), Some(0));
    assert!(json_of(&mzv)["results"]["identity"].as_str().unwrap().contains("(theta^2 + theta) zeta_A(1,3)"));

    let diverges = bin().args(["log", "--n", "1", "--z", "theta^2"]).output().unwrap();
    assert_eq!(diverges.status.code(), Some(3));
    assert_eq!(json_of(&diverges)["error"]["kind"], "DivergentSeries");

    // residues with a pole of order above n are rejected as a computation error
    let high = bin().args(["verify", "residues", "--n", "1", "--order", "2"]).output().unwrap();
    assert_eq!(high.status.code(), Some(3));
}

#[test]
fn failing_verification_exits_one() {
    let dir = std::env::temp_dir().join(format!("motivic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    // H_1 = θ instead of 1 moves the special point
    let path = dir.join("h1.json");
    std::fs::write(&path, "[[0, 1]]").unwrap();
    let out = bin().args(["verify", "mellin", "--q", "2", "--n", "1", "--prec", "20"]).arg("--hn-file").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["passed"], false);
    std::fs::write(&path, "[[1]]").unwrap();
    let out = bin().args(["verify", "mellin", "--q", "2", "--n", "1", "--prec", "20"]).arg("--hn-file").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn env_precision_and_determinism() {
    let a = bin().env("MOTIVIC_PRECISION", "17").args(["zeta", "--n", "2", "--q", "3"]).output().unwrap();
    assert_eq!(json_of(&a)["results"]["precision"], 17);
    let b = bin().env("MOTIVIC_PRECISION", "17").args(["zeta", "--n", "2", "--q", "3"]).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let c1 = bin().args(["verify", "compose", "--n", "2", "--seed", "9", "--samples", "4"]).output().unwrap();
    let c2 = bin().args(["verify", "compose", "--n", "2", "--seed", "9", "--samples", "4"]).output().unwrap();
    assert_eq!(c1.status.code(), Some(0));
    assert_eq!(c1.stdout, c2.stdout);
}

#[test]
fn json_report_round_trips() {
    let (_, rep) = run_args(["motivic", "verify", "pairings", "--n", "2", "--l", "2"]).unwrap();
    let s = serde_json::to_string(&rep.json).unwrap();
    let back: Value = serde_json::from_str(&s).unwrap();
    assert_eq!(back, rep.json);
    let r: motivic::report::VerificationReport = serde_json::from_value(rep.json["results"].clone()).unwrap();
    assert_eq!(r, rep.reports[0]);
    assert!(r.passed);
}

#[test]
fn other_verbs() {
    for args in [
        vec!["verify", "func-eq", "--n", "3", "--i", "3"],
        vec!["verify", "invertibility", "--s", "1,3", "--i", "2"],
        vec!["verify", "logalg", "--n", "2"],
        vec!["verify", "logalg", "--instance", "agf", "--z", "1/theta"],
        vec!["verify", "residues", "--n", "2", "--pole-level", "2", "--order", "2", "--numerator", "theta,1"],
        vec!["gamma", "--n", "3", "--format", "text"],
        vec!["mzv", "--s", "1,2", "--prec", "12"],
        vec!["exp", "--n", "2", "--z", "1/theta,0", "--prec", "12"],
        vec!["exp-coeffs", "--q", "3", "--n", "2", "--i", "2"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
