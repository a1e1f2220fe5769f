//! Acceptance: byte-identical results for identical seeded runs, and the
//! documented exit-code contract of the binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn subdiff(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subdiff"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) {
    fs::write(dir.join(name), contents).unwrap();
}

const ROUNDTRIP_CONFIG: &str = r#"{
  "model": {"rho": 0.6, "alpha": 0.45, "t_final": 1.0, "xi0": 0.8},
  "spectrum": {"kind": "dirichlet", "modes": 8, "length": 3.141592653589793},
  "roundtrip": {"target": "source", "instances": 4, "xi_ratio": 0.5},
  "seed": 42
}"#;

#[test]
fn acceptance_8_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(dir, "rt.json", ROUNDTRIP_CONFIG);

    let a = subdiff(&["roundtrip", "rt.json", "--out", "a"], dir);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = subdiff(&["roundtrip", "rt.json", "--out", "b"], dir);
    assert!(b.status.success());
    let bytes_a = fs::read(dir.join("a/result.json")).unwrap();
    let bytes_b = fs::read(dir.join("b/result.json")).unwrap();
    assert_eq!(bytes_a, bytes_b, "same seed must give byte-identical results");

    // a different seed must actually change the drawn data
    let c = subdiff(&["roundtrip", "rt.json", "--out", "c", "--seed", "7"], dir);
    assert!(c.status.success());
    let bytes_c = fs::read(dir.join("c/result.json")).unwrap();
    assert_ne!(bytes_a, bytes_c);

    println!(
        "[PASS] criterion 8: repeated seeded roundtrip runs produced byte-identical \
         result.json ({} bytes)",
        bytes_a.len()
    );
}

#[test]
fn exit_code_contract() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();

    // 0: a well-posed forward run within tolerances
    write(
        dir,
        "ok.json",
        r#"{
          "problem": "forward",
          "model": {"rho": 0.5, "alpha": 0.3, "t_final": 1.0, "xi0": 0.8},
          "spectrum": {"kind": "dirichlet", "modes": 4, "length": 3.141592653589793},
          "phi": {"kind": "powerlaw", "exponent": 2.0, "amplitude": 0.5}
        }"#,
    );
    let out = subdiff(&["forward", "ok.json", "--out", "ok"], dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["result.json", "solution.csv", "residuals.json"] {
        assert!(dir.join("ok").join(name).exists(), "missing {name}");
    }
    let csv = fs::read_to_string(dir.join("ok/solution.csv")).unwrap();
    assert!(csv.starts_with("t,k,u_k\n"));

    // 5: non-orthogonal datum at an exactly critical weight
    write(
        dir,
        "orth.json",
        r#"{
          "problem": "forward",
          "model": {"rho": 0.5, "alpha": {"critical_mode": 2}, "t_final": 1.0, "xi0": 0.8},
          "spectrum": {"kind": "dirichlet", "modes": 8, "length": 3.141592653589793},
          "phi": {"kind": "basis", "index": 2, "amplitude": 0.5}
        }"#,
    );
    let out = subdiff(&["forward", "orth.json", "--out", "orth"], dir);
    assert_eq!(out.status.code(), Some(5), "{}", String::from_utf8_lossy(&out.stderr));

    // 4: observation at the coupling time is rejected while parsing
    write(
        dir,
        "geom.json",
        r#"{
          "problem": "invert-source",
          "model": {"rho": 0.5, "alpha": 0.3, "t_final": 1.0, "xi0": 0.5},
          "spectrum": {"kind": "dirichlet", "modes": 4, "length": 1.0},
          "xi1": 0.5,
          "phi": {"kind": "zero"},
          "observed": {"kind": "zero"}
        }"#,
    );
    let out = subdiff(&["invert-source", "geom.json", "--out", "geom"], dir);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));

    // 6: forced degenerate recovery geometry
    write(
        dir,
        "degen.json",
        r#"{
          "problem": "invert-source",
          "model": {"rho": 0.5, "alpha": 0.166964125404712865, "t_final": 1.2, "xi0": 0.5},
          "spectrum": {"kind": "explicit", "eigenvalues": [1.0]},
          "xi1": 1.0,
          "allow_reversed_observation": true,
          "phi": {"kind": "coeffs", "values": [0.3]},
          "observed": {"kind": "coeffs", "values": [0.2]}
        }"#,
    );
    let out = subdiff(&["invert-source", "degen.json", "--out", "degen"], dir);
    assert_eq!(out.status.code(), Some(6), "{}", String::from_utf8_lossy(&out.stderr));

    // 3: named range violation
    write(
        dir,
        "range.json",
        r#"{
          "model": {"rho": 1.5, "alpha": 0.3, "t_final": 1.0, "xi0": 1.0},
          "spectrum": {"kind": "dirichlet", "modes": 4, "length": 1.0}
        }"#,
    );
    let out = subdiff(&["verify", "range.json"], dir);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rho"));

    // 2: unreadable configuration
    let out = subdiff(&["forward", "missing.json"], dir);
    assert_eq!(out.status.code(), Some(2));

    println!("[PASS] exit-code contract: 0/2/3/4/5/6 as documented");
}

#[test]
fn ml_eval_prints_seventeen_digits() {
    let tmp = tempfile::tempdir().unwrap();
    let out = subdiff(&["ml-eval", "--rho", "0.5", "--z", "-1"], tmp.path());
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("4.2758357615580"), "unexpected output: {text}");
}

#[test]
fn sampled_source_and_datum_roundtrip() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();

    // forward run driven by a separable sampled source
    write(
        dir,
        "sampled.json",
        r#"{
          "problem": "forward",
          "model": {"rho": 0.6, "alpha": 0.4, "t_final": 1.0, "xi0": 0.7},
          "spectrum": {"kind": "dirichlet", "modes": 4, "length": 3.141592653589793},
          "phi": {"kind": "powerlaw", "exponent": 2.0, "amplitude": 0.5},
          "source": {
            "kind": "sampled",
            "coeffs": {"kind": "powerlaw", "exponent": 1.0, "amplitude": 0.4},
            "time": {"kind": "sin", "omega": 2.0},
            "steps": 256
          },
          "quad_intervals": 256,
          "verify_nodes": 128,
          "output_points": 9
        }"#,
    );
    let out = subdiff(&["forward", "sampled.json", "--out", "s"], dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    // datum recovery round trip with the observation past the coupling time
    write(
        dir,
        "rtphi.json",
        r#"{
          "model": {"rho": 0.55, "alpha": 0.35, "t_final": 1.0, "xi0": 0.6},
          "spectrum": {"kind": "dirichlet", "modes": 6, "length": 3.141592653589793},
          "roundtrip": {"target": "phi", "instances": 3, "xi_ratio": 1.5},
          "seed": 11
        }"#,
    );
    let out = subdiff(&["roundtrip", "rtphi.json", "--out", "p"], dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("p/result.json")).unwrap()).unwrap();
    assert!(doc["max_recovery_error"].as_f64().unwrap() <= 1e-8);
    assert_eq!(doc["target"], "phi");
}
