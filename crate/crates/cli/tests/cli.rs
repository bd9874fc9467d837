use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn opstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opstar")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Runs with `--out` and returns the exit code and parsed report.
fn report(args: &[&str]) -> (i32, Value, Output) {
    let dir = tempfile::tempdir().unwrap();
    let out: PathBuf = dir.path().join("report.json");
    let mut full: Vec<&str> = args.to_vec();
    let out_s = out.display().to_string();
    full.extend(["--out", &out_s]);
    let o = opstar(&full);
    let text = std::fs::read_to_string(&out).unwrap_or_else(|_| panic!("no report: {}", stderr(&o)));
    (o.status.code().unwrap(), serde_json::from_str(&text).unwrap(), o)
}

fn entry<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["results"].as_array().unwrap().iter().find(|e| e["name"] == name).unwrap_or_else(|| panic!("no entry {name}"))
}

fn real(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn counterexample_demo_table() {
    let (code, v, o) = report(&["demo", "counterexample"]);
    assert_eq!(code, 0);
    let row = stdout(&o).lines().find(|l| l.trim_start().starts_with("3 ")).unwrap().to_string();
    let cells: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(cells, ["3", "0.125", "1", "8"]);
    assert_eq!(real(&entry(&v, "|d(-n)|")["value"][2]), 0.125);
    assert!((real(&entry(&v, "|tau(d(-n))|")["value"][2]) - 1.0).abs() < 1e-12);
    assert_eq!(v["passed"], true);
}

#[test]
fn spectrum_of_diagonal() {
    let (code, v, _) = report(&["spectrum", &fixture("diag_1_3i.json")]);
    assert_eq!(code, 0);
    assert!((real(&entry(&v, "r_lambda (eigenvalues)")["value"]) - 3.0).abs() < 1e-12);
    assert!((real(&entry(&v, "r_sigma")["value"]) - 3.0).abs() < 1e-12);
    let sp = entry(&v, "spectrum")["value"].as_array().unwrap().clone();
    assert_eq!(sp.len(), 2);
}

#[test]
fn wiener_inverse_value() {
    let (code, v, _) = report(&["wiener", &fixture("wiener_2_cos.txt")]);
    assert_eq!(code, 0);
    let g0 = &entry(&v, "g(0)")["value"];
    assert!((real(&g0[0]) - 0.577350).abs() < 1e-6);
    assert!(real(&g0[1]).abs() < 1e-12);
}

#[test]
fn failing_checks_exit_one_with_bounds() {
    let (code, v, o) = report(&["validate", &fixture("broken_assoc.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    let fails: Vec<&Value> = v["results"].as_array().unwrap().iter().filter(|e| e["status"] == "fail").collect();
    assert!(!fails.is_empty());
    for f in fails {
        assert!(f["value"].is_number() && f["bound"].is_number() && f["relation"].is_string());
    }
    assert!(stderr(&o).contains("FAIL algebra axioms: associativity"));

    let (code, _, o) = report(&["gns", &fixture("m2.json"), &fixture("not_positive.json")]);
    assert_eq!(code, 1);
    assert!(stderr(&o).contains("min Gram eigenvalue"));
}

#[test]
fn input_errors_exit_two() {
    let cases: Vec<Vec<String>> = vec![
        vec!["spectral".into(), fixture("malformed.json"), "resolution".into()],
        vec!["spectral".into(), fixture("normal3.json"), "bogus".into()],
        vec!["spectral".into(), fixture("normal3.json"), "calculus:nope".into()],
        vec!["spectral".into(), fixture("not_hermitian.json"), "resolution".into()],
        vec!["evolve".into(), fixture("not_hermitian.json")],
        vec!["wiener".into(), fixture("vanishing.txt")],
        vec!["validate".into(), fixture("does_not_exist.json")],
        vec!["spectrum".into(), fixture("z3.json"), "nope".into()],
        vec!["spectrum".into(), fixture("z3.json")],
        vec!["demo".into(), "unknown".into()],
    ];
    for args in cases {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = opstar(&a);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name).display().to_string();
        let mut args = vec!["gelfand", "--out", &out];
        let z3 = fixture("z3.json");
        args.push(&z3);
        args.extend(extra);
        assert_eq!(opstar(&args).status.code(), Some(0));
        std::fs::read(&out).unwrap()
    };
    let a = run("a.json", &[]);
    let b = run("b.json", &[]);
    assert_eq!(a, b);
    let c = run("c.json", &["--seed", "7"]);
    let (va, vc): (Value, Value) = (serde_json::from_slice(&a).unwrap(), serde_json::from_slice(&c).unwrap());
    assert_eq!(va["inputs_digest"], vc["inputs_digest"]);
    assert_eq!(vc["seed"], 7);
    let t: Value = serde_json::from_slice(&run("t.json", &["--timing"])).unwrap();
    assert!(t["wall_time"].is_number());
    assert!(va.get("wall_time").is_none());
}

#[test]
fn digest_tracks_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let digest = |coeffs: &str| {
        let f = dir.path().join("f.txt");
        std::fs::write(&f, coeffs).unwrap();
        let (code, v, _) = report(&["wiener", &f.display().to_string()]);
        assert_eq!(code, 0);
        v["inputs_digest"].as_str().unwrap().to_string()
    };
    assert_ne!(digest("0 3 0\n1 1 0\n"), digest("0 3 0\n1 1.5 0\n"));
    assert_eq!(digest("0 3 0\n"), digest("0 3 0\n"));
}

#[test]
fn positivity_modes() {
    let m2 = fixture("m2.json");
    for (elem, mode) in [("positive2.json", "sqrt"), ("invertible2.json", "polar"), ("hermitian2.json", "parts")] {
        let e = format!("@{}", fixture(elem));
        let (code, v, _) = report(&["positivity", &m2, &e, "--mode", mode]);
        assert_eq!(code, 0, "{mode}: {v}");
    }
    let e = format!("@{}", fixture("hermitian2.json"));
    let (code, v, _) = report(&["positivity", &m2, &e]);
    assert_eq!(code, 1);
    assert!(real(&entry(&v, "min spectral point")["value"]) < -2.0);
}

#[test]
fn gns_purity() {
    let m2 = fixture("m2.json");
    let (code, v, _) = report(&["gns", &m2, &fixture("state_e11.json")]);
    assert_eq!(code, 0);
    assert_eq!(entry(&v, "pure")["value"], "yes");
    assert_eq!(entry(&v, "dim H")["value"], 2);
    let (code, v, _) = report(&["gns", &m2, &fixture("state_trace.json")]);
    assert_eq!(code, 0);
    assert_eq!(entry(&v, "pure")["value"], "no");
    let (code, v, _) = report(&["gns", &fixture("z3.json"), &fixture("z3_state.json")]);
    assert_eq!(code, 0);
    assert_eq!(entry(&v, "gram rank")["value"], 3);
}

#[test]
fn gelfand_with_bochner() {
    let (code, v, o) = report(&["gelfand", &fixture("z3.json"), "--bochner", &fixture("z3_state.json")]);
    assert_eq!(code, 0);
    let w: Vec<f64> = entry(&v, "bochner weights")["value"].as_array().unwrap().iter().map(real).collect();
    assert_eq!(w.len(), 3);
    assert!(w.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-12));
    assert!(stdout(&o).contains("character table"));
}

#[test]
fn spectral_modes() {
    let n3 = fixture("normal3.json");
    for mode in ["resolution", "commutant", "bicommutant", "fuglede", "calculus:exp", "calculus:sqrt", "calculus:conj"] {
        let (code, v, _) = report(&["spectral", &n3, mode]);
        assert_eq!(code, 0, "{mode}: {v}");
    }
    let (_, v, _) = report(&["spectral", &n3, "commutant"]);
    // diag(2, i, 2) commutes with M2 ⊕ C
    assert_eq!(entry(&v, "dimension")["value"], 5);
    let (code, _, _) = report(&["spectral", &fixture("hermitian2.json"), "calculus:inv"]);
    assert_eq!(code, 0);
}

#[test]
fn evolution_of_flip() {
    let (code, v, o) = report(&["evolve", &fixture("flip.json"), "--times", "-1,0,3.141592653589793", "--check-generator"]);
    assert_eq!(code, 0, "{}", stderr(&o));
    let u_pi = &entry(&v, "U(3.141592654)")["value"];
    assert!((real(&u_pi[0][0][0]) + 1.0).abs() < 1e-12);
    assert!(real(&u_pi[0][1][1]).abs() < 1e-12);
    assert!(stdout(&o).contains("generator recovery"));
}

#[test]
fn other_demos_pass() {
    for name in ["wiener", "raikov"] {
        let (code, v, _) = report(&["demo", name]);
        assert_eq!(code, 0, "{name}: {v}");
    }
}
