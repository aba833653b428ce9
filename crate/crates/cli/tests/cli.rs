use std::process::{Command, Output};

fn birat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_birat"))
        .args(args)
        .env_remove("BIRAT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn map_prints_three_images() {
    let o = birat(&["map", "--perm", "3,2,1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("# perm: 3,2,1"));
    assert!(s.contains("u[1,2] = (n[1,2]*n[1,3] + n[1,3]*n[2,3])/n[2,3]"));
    assert!(s.contains("u[1,3] = n[1,3]*n[2,3]"));
    assert!(s.contains("u[2,3] = n[2,3]"));
}

#[test]
fn map_output_parses_back() {
    let o = birat(&["map", "--perm", "4,2,3,1", "--format", "structured"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let images = doc["result"].as_object().unwrap();
    assert_eq!(images.len(), 5);
    for v in images.values() {
        let text = v.as_str().unwrap();
        let f = birational_core::ratfunc::parse(text).unwrap();
        assert_eq!(f.to_string(), text);
    }
}

#[test]
fn verify_rank_four() {
    let o = birat(&["verify", "--r", "4", "--parts", "ii,iii,iv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("24/24 pass"));
}

#[test]
fn gl2_direct_value() {
    let o = birat(&[
        "jacquet",
        "gl2",
        "--mu",
        "1",
        "--method",
        "direct",
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let re = doc["result"]["value"]["re"].as_f64().unwrap();
    let want = std::f64::consts::PI * (-2.0 * std::f64::consts::PI).exp();
    assert!((re - want).abs() / want < 1e-8);
    assert!((re - 5.8666e-3).abs() < 1e-6);
    assert!(doc["result"]["error"].as_f64().unwrap() < 1e-10);
}

#[test]
fn gl2_ibp_negative_mu() {
    let o = birat(&["jacquet", "gl2", "--mu", "-0.5", "--method", "ibp", "--k", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# k: 8"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(birat(&["map", "--perm", "3,3,1"]).status.code(), Some(2));
    assert_eq!(birat(&["map", "--perm", "3,2,1", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        birat(&["split", "--perm", "3,2,1", "--var", "2,1"]).status.code(),
        Some(2)
    );
    assert_eq!(birat(&["jacquet", "gl2", "--mu", "0.25"]).status.code(), Some(2));
    assert_eq!(birat(&["verify", "--r", "0"]).status.code(), Some(2));
}

#[test]
fn structured_output_is_reproducible() {
    let args = [
        "verify",
        "--r",
        "3",
        "--sample",
        "4",
        "--seed",
        "7",
        "--format",
        "structured",
        "--details",
    ];
    let a = birat(&args);
    let b = birat(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["config"]["seed"], "7");
    assert!(doc["result"]["reports"].is_array());
    let c = birat(&["verify", "--r", "3", "--format", "structured"]);
    let doc: serde_json::Value = serde_json::from_slice(&c.stdout).unwrap();
    assert!(doc["result"].get("reports").is_none());
}

#[test]
fn tex_output() {
    let o = birat(&["inverse", "--perm", "3,2,1", "--format", "tex"]);
    let s = stdout(&o);
    assert!(s.contains("\\begin{align*}"));
    assert!(s.contains("n_{1,2}"));
}

#[test]
fn bessel_on_voronoi_element_has_monomial_phase() {
    let o = birat(&["bessel", "--perm", "2,3,4,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("monomial phase: true"));
}

#[test]
fn thread_flag_is_recorded() {
    let o = birat(&["--threads", "2", "jacobian", "--perm", "2,3,1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("# threads: 2"));
    assert!(s.contains("det matches: true"));
}
