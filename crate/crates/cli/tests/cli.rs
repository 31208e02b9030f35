// Report floats are rounded to 12 significant digits, so the expected values
// below are deliberately short approximations of well-known constants.
#![allow(clippy::approx_constant)]

use std::process::{Command, Output};

use serde_json::Value;

fn liegeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liegeo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

fn result<'a>(rec: &'a Value, label: &str) -> &'a Value {
    rec["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["label"] == label)
        .unwrap_or_else(|| panic!("no result {label}"))
}

#[test]
fn curvature_table_for_sl2_lorentz() {
    let out = liegeo(&["curvature", "--preset", "sl2-lorentz"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    for pair in ["X,Y", "X,Z", "Y,Z"] {
        let r = result(&recs[0], &format!("k_raw({pair})"));
        assert_eq!(r["exact"], serde_json::json!([-2, 1, 0, 1]));
        assert_eq!(r["float"], -2.0);
    }
    assert_eq!(recs[0]["pass"], true);
}

#[test]
fn normalized_column_is_opt_in() {
    let plain = records(&liegeo(&["curvature", "--preset", "rxsol2"]));
    assert!(plain[0]["results"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["label"].as_str().unwrap().starts_with("k_raw")));
    let out = liegeo(&["curvature", "--preset", "rxsol2", "--normalized"]);
    let recs = records(&out);
    assert_eq!(
        result(&recs[0], "K_normalized(X,Y)")["exact"],
        serde_json::json!([1, 2, 0, 1])
    );
    assert_eq!(
        result(&recs[0], "K_normalized(Y,Z)")["exact"],
        serde_json::json!([-1, 2, 0, 1])
    );
}

#[test]
fn usage_errors_exit_2_with_one_line() {
    for args in [
        vec!["curvature", "--preset", "nonexistent"],
        vec!["iwasawa", "--matrix", "1,2;3"],
        vec!["iwasawa", "--matrix", "2,0;0,2"],
        vec!["psi", "--rho", "-1", "--theta", "0", "--phi", "0"],
        vec!["scale", "--preset", "rxsol2", "--c", "0"],
        vec!["goedel", "components", "--point", "0,0,0", "--a", "1"],
        vec!["goedel", "components", "--point", "0,0,0,0", "--a", "-1"],
        vec!["maps", "check"],
        vec!["psi", "--verify-nak", "--samples", "10"],
        vec!["no-such-command"],
        vec![
            "geodesic", "--preset", "aff-r3", "--v", "1,0,0", "--steps", "0",
        ],
    ] {
        let out = liegeo(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn failed_checks_exit_1() {
    let dir = std::env::temp_dir().join(format!("liegeo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    // [e0,e1] = e1 and [e1,e2] = e0 violate the Jacobi identity.
    std::fs::write(
        &path,
        r#"{"dim":3,"labels":["e0","e1","e2"],
            "c":[[0,1,1,[1,1,0,1]],[1,2,0,[1,1,0,1]]],
            "gram":[[[1,1,0,1],[0,1,0,1],[0,1,0,1]],[[0,1,0,1],[1,1,0,1],[0,1,0,1]],[[0,1,0,1],[0,1,0,1],[1,1,0,1]]]}"#,
    )
    .unwrap();
    let out = liegeo(&["algebra", "check", "--preset-file", path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(records(&out)[0]["pass"], false);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec!["psi", "--verify-nak", "--samples", "200", "--seed", "7"],
        vec!["maps", "check", "--seed", "3"],
        vec!["goedel", "pullback-check", "--samples", "50", "--seed", "9"],
        vec![
            "geodesic",
            "--preset",
            "rxsol2",
            "--v",
            "0.3,0.8,0.6",
            "--steps",
            "400",
        ],
    ] {
        let a = liegeo(&args);
        let b = liegeo(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seeds_change_the_samples() {
    let a = records(&liegeo(&[
        "psi",
        "--verify-nak",
        "--samples",
        "50",
        "--seed",
        "1",
    ]));
    let b = records(&liegeo(&[
        "psi",
        "--verify-nak",
        "--samples",
        "50",
        "--seed",
        "2",
    ]));
    assert_ne!(a[0]["residuals"], b[0]["residuals"]);
    assert_eq!(a[0]["seed"], 1);
}

#[test]
fn verify_nak_batch() {
    let out = liegeo(&["psi", "--verify-nak", "--samples", "1000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = &records(&out)[0];
    assert!(rec["residuals"][0]["value"].as_f64().unwrap() < 1e-12);
    assert_eq!(rec["pass"], true);
}

#[test]
fn iwasawa_of_the_worked_example() {
    let out = liegeo(&[
        "iwasawa",
        "--matrix",
        "0,0.7071067811865476;-1.4142135623730951,0",
        "--order",
        "nak",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rec = &records(&out)[0];
    assert_eq!(result(rec, "K[0][1]")["float"], 1.0);
    assert_eq!(result(rec, "N[1][0]")["float"], 0.0);
    assert_eq!(result(rec, "A[1][1]")["float"], 1.41421356237);
}

#[test]
fn psi_inverse_and_eval() {
    let out = liegeo(&[
        "psi",
        "--inverse",
        "0,0.7071067811865476;-1.4142135623730951,0",
    ]);
    let rec = &records(&out)[0];
    assert_eq!(result(rec, "rho")["float"], 2.0);
    assert_eq!(result(rec, "phi")["float"], 1.57079632679);
    let out = liegeo(&[
        "psi",
        "--rho",
        "2",
        "--theta",
        "0",
        "--phi",
        "1.5707963267948966",
    ]);
    assert_eq!(
        result(&records(&out)[0], "Psi[1][0]")["float"],
        -1.41421356237
    );
}

#[test]
fn geodesic_trajectory_layout() {
    let out = liegeo(&[
        "geodesic",
        "--preset",
        "sl2-lorentz",
        "--v",
        "1,0,0",
        "--t",
        "1",
        "--steps",
        "10",
        "--stride",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let times: Vec<f64> = recs[..3]
        .iter()
        .map(|r| result(r, "t")["float"].as_f64().unwrap())
        .collect();
    assert_eq!(times, vec![0.0, 0.5, 1.0]);
    assert_eq!(recs.last().unwrap()["command"], "geodesic");
    let out = liegeo(&["geodesic", "--preset", "aff-r3", "--v", "1,0,0"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn goedel_subcommands() {
    let out = liegeo(&["goedel", "components", "--point", "0,0,0,0", "--a", "1"]);
    let rec = &records(&out)[0];
    assert_eq!(result(rec, "g[0][2]")["float"], 1.0);
    assert_eq!(result(rec, "g[2][2]")["float"], 0.5);
    assert_eq!(result(rec, "signature")["text"], "(1,3)");
    let out = liegeo(&["goedel", "christoffel", "--point", "0,0,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(result(&records(&out)[0], "Gamma^2_01")["float"], -1.0);
    let out = liegeo(&[
        "goedel",
        "pullback-check",
        "--params",
        "1,-0.5,2,3",
        "--samples",
        "20",
        "--seed",
        "1",
        "--fd",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn remaining_subcommands_pass_on_presets() {
    for args in [
        vec!["algebra", "check", "--preset", "goedel4"],
        vec!["connection", "--preset", "so2sol2-lorentz"],
        vec!["orthonormalize", "--preset", "g3-goedel"],
        vec!["scale", "--preset", "rxsol2", "--c", "1/4"],
        vec![
            "psi",
            "--rho",
            "1.5",
            "--theta",
            "0.3",
            "--phi",
            "4",
            "--pushforward",
        ],
        vec!["maps", "check", "--seed", "0"],
    ] {
        let out = liegeo(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(records(&out).iter().all(|r| r["pass"] == true));
    }
    let out = liegeo(&["orthonormalize", "--preset", "g3-goedel"]);
    let rec = &records(&out)[0];
    assert_eq!(
        result(rec, "v2[e0]")["exact"],
        serde_json::json!([0, 1, -1, 1])
    );
    assert_eq!(
        result(rec, "v2[e2]")["exact"],
        serde_json::json!([0, 1, 1, 1])
    );
}

#[test]
fn help_exits_cleanly() {
    let out = liegeo(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify-all"));
}
