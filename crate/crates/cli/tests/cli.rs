use std::process::{Command, Output};

use serde_json::Value;

fn harmonic2v(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmonic2v")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn components(v: &Value) -> Vec<(u64, u64, u64, u64)> {
    v["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            (
                c["ladder"]["i"].as_u64().unwrap(),
                c["ladder"]["j"].as_u64().unwrap(),
                c["target"]["k"].as_u64().unwrap(),
                c["target"]["l"].as_u64().unwrap(),
            )
        })
        .collect()
}

#[test]
fn decompose_x1_u1() {
    let out = harmonic2v(&["decompose", "--m", "5", "--poly", "x1*u1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "harmonic2v/1");
    assert_eq!(v["m"], 5);
    assert_eq!(v["reconstruction_check"], "exact");
    // the H_{1,1} part of the symmetric tensor x1*u1 vanishes
    assert_eq!(components(&v), vec![(0, 1, 2, 0), (1, 0, 0, 0)]);
    assert_eq!(v["components"][1]["harmonic"][0]["coeff"], "1/5");
    assert_eq!(v["components"][1]["normalizer"], "1/5");
}

#[test]
fn decompose_mixed_tensor_has_three_components() {
    let v = json(&harmonic2v(&["decompose", "--m", "5", "--poly", "x1*u1 + x1*u2"]));
    assert_eq!(components(&v), vec![(0, 0, 1, 1), (0, 1, 2, 0), (1, 0, 0, 0)]);
}

#[test]
fn decompose_constant() {
    let v = json(&harmonic2v(&["decompose", "--m", "6", "--poly", "1"]));
    assert_eq!(components(&v), vec![(0, 0, 0, 0)]);
    let c = &v["components"][0];
    assert_eq!(c["fischer"]["a"], 0);
    assert_eq!(c["harmonic"][0]["monomial"], "1");
}

#[test]
fn strategies_agree() {
    let poly = "x1^2*u1*u2 + 3*x2*u1^2 - i*x1*x3*u2^2 + 1/2*x4^2*u5 + x1*x2*x3*u3 - (2+i)*u1*u4";
    let run = |s: &str| {
        let mut v = json(&harmonic2v(&["decompose", "--m", "6", "--poly", poly, "--strategy", s]));
        v.as_object_mut().unwrap().remove("strategy");
        v
    };
    let (direct, sequential) = (run("direct"), run("sequential"));
    assert_eq!(direct["reconstruction_check"], "exact");
    assert_eq!(direct, sequential);
}

#[test]
fn poly_file_and_text_format() {
    let dir = std::env::temp_dir().join(format!("harmonic2v-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.txt");
    std::fs::write(&path, "x1*u1 + x1*u2\n").unwrap();
    let out = harmonic2v(&["decompose", "--m", "5", "--poly-file", path.to_str().unwrap(), "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("C^1 S_u^0 H[0,0]"));
    assert!(text.trim_end().ends_with("reconstruction: exact"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn integrate_examples() {
    let v = json(&harmonic2v(&["integrate", "--m", "5", "--poly", "x1^2", "--manifold", "stiefel2"]));
    assert_eq!(v["value"], "1/5");
    assert!(v.get("monte_carlo").is_none());
    let v = json(&harmonic2v(&["integrate", "--m", "5", "--poly", "x1*u1"]));
    assert_eq!(v["value"], "0");
    let v = json(&harmonic2v(&["integrate", "--m", "4", "--poly", "1", "--manifold", "sphere"]));
    assert_eq!(v["value"], "2 * pi^2");
    assert_eq!(v["pi_power"], 2);
    let v = json(&harmonic2v(&["integrate", "--m", "6", "--poly", "x1^2*u2^2 - x1*x2*u1*u2"]));
    // (m+1)/((m-1)m(m+2)) + 1/((m-1)m(m+2)) at m = 6
    assert_eq!(v["value"], "1/30");
}

#[test]
fn integrate_with_monte_carlo() {
    let args = ["integrate", "--m", "5", "--poly", "x1^2", "--mc-samples", "20000", "--seed", "7"];
    let v = json(&harmonic2v(&args));
    let mc = &v["monte_carlo"];
    assert_eq!(mc["samples"], 20000);
    let (est, err) = (mc["estimate"].as_f64().unwrap(), mc["stderr"].as_f64().unwrap());
    assert!((est - 0.2).abs() < 5.0 * err, "{est} ± {err}");
    assert_eq!(harmonic2v(&args).stdout, harmonic2v(&args).stdout);
}

#[test]
fn verify_suites_pass() {
    for args in [
        vec!["verify", "--suite", "appendix", "--m", "5"],
        vec!["verify", "--suite", "relations", "--m", "6"],
        vec!["verify", "--suite", "ladder", "--m", "5"],
        vec!["verify", "--suite", "orthogonality", "--m", "7"],
        vec!["verify", "--suite", "pizzetti", "--m", "5", "--seed", "3"],
    ] {
        let out = harmonic2v(&args);
        let v = json(&out);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {v}");
        assert_eq!(v["passed"], true);
        assert!(v["summary"]["total"].as_u64().unwrap() > 0);
        assert_eq!(v["summary"]["failed"], 0);
    }
}

#[test]
fn vacuous_ladder() {
    let out = harmonic2v(&["verify", "--suite", "ladder", "--max-bidegree", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"]["total"], 0);
    assert_eq!(v["checks"], Value::Array(vec![]));
}

#[test]
fn output_is_deterministic_with_sorted_keys() {
    let args = ["verify", "--suite", "relations", "--m", "5", "--seed", "11"];
    let (a, b) = (harmonic2v(&args), harmonic2v(&args));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(harmonic2v(&["decompose", "--m", "5", "--poly", "x1"]).stdout).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && l.contains("\":"))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn errors_exit_with_two() {
    let out = harmonic2v(&["decompose", "--m", "5", "--poly", "x9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x9 out of range"));
    let out = harmonic2v(&["decompose", "--m", "5", "--poly", "x1 + * u1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 5"));
    assert_eq!(harmonic2v(&["decompose", "--m", "4", "--poly", "x1"]).status.code(), Some(2));
    assert_eq!(harmonic2v(&["integrate", "--m", "5", "--poly", "x1*u1", "--manifold", "sphere"]).status.code(), Some(2));
    assert_eq!(harmonic2v(&["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(harmonic2v(&["decompose", "--m", "5"]).status.code(), Some(2));
    assert_eq!(harmonic2v(&["decompose", "--m", "5", "--poly-file", "/nonexistent/p.txt"]).status.code(), Some(2));
}
