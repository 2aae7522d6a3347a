use std::path::Path;
use std::process::{Command, Output};

use metaplectic::distributions::TfGrid;
use metaplectic::grid::DiscreteSignal;
use metaplectic::{DynMatrix, RatMatrix, Rational, Scalar};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metaplectic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

fn read_rational(p: &str) -> RatMatrix {
    match DynMatrix::read(Path::new(p)).unwrap() {
        DynMatrix::Rational(m) => m,
        DynMatrix::Float(_) => panic!("expected a rational matrix in {p}"),
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (j, k) = (path(dir.path(), "j.json"), path(dir.path(), "k.json"));
    assert_eq!(run(&["symplectic", "named", "j", "--d", "2", "--out", &j]).status.code(), Some(0));
    assert_eq!(run(&["symplectic", "named", "k", "--out", &k]).status.code(), Some(0));

    let ok = run(&["symplectic", "check", &j]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("symplectic: true"));
    let not = run(&["symplectic", "check", &k]);
    assert_eq!(not.status.code(), Some(1));
    assert!(stdout(&not).contains("symplectic: false"));

    assert_eq!(run(&["symplectic", "frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let missing = run(&["symplectic", "check", &path(dir.path(), "nope.json")]);
    assert_ne!(missing.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("nope.json"));
}

#[test]
fn factorize_and_alpha_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "tau.json");
    assert!(run(&["symplectic", "named", "tau", "--tau", "1/2", "--out", &a]).status.success());
    let out = path(dir.path(), "f");
    assert!(run(&["symplectic", "factorize", &a, "--out-dir", &out]).status.success());

    let e = read_rational(&path(dir.path(), "f/E.json"));
    let c = read_rational(&path(dir.path(), "f/C.json"));
    let s = read_rational(&path(dir.path(), "f/S.json"));
    assert_eq!(e, RatMatrix::from_i64_rows(&[&[1, 0], &[0, 1]]).scale(&Rational::from_ratio(1, 2)));
    assert_eq!(c, RatMatrix::from_i64_rows(&[&[0, -1], &[-1, 0]]).scale(&Rational::from_ratio(1, 2)));
    assert_eq!(s, RatMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]));

    let back = path(dir.path(), "back.json");
    let args = ["symplectic", "alpha", "--e", &path(dir.path(), "f/E.json"), "--c", &path(dir.path(), "f/C.json")];
    assert!(run(&[&args[..], &["--s", &path(dir.path(), "f/S.json"), "--out", &back]].concat()).status.success());
    assert_eq!(read_rational(&back), read_rational(&a));

    let ft2 = path(dir.path(), "ft2.json");
    assert!(run(&["symplectic", "named", "ft2", "--out", &ft2]).status.success());
    let fail = run(&["symplectic", "factorize", &ft2, "--out-dir", &out]);
    assert_eq!(fail.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&fail.stderr).contains("shift-invertible"));
}

#[test]
fn distributions_and_norms() {
    let dir = tempfile::tempdir().unwrap();
    let (f, g, a) = (path(dir.path(), "f.csv"), path(dir.path(), "g.csv"), path(dir.path(), "st.json"));
    assert!(run(&["signal", "gaussian", "--n", "16", "--x0", "-0.5", "--out", &f]).status.success());
    assert!(run(&["signal", "gaussian", "--n", "16", "--out", &g]).status.success());
    assert!(run(&["symplectic", "named", "st", "--out", &a]).status.success());

    let w = path(dir.path(), "w.bin");
    let csv = path(dir.path(), "w.csv");
    assert!(run(&["wdist", "--matrix", &a, "--signal", &f, "--window", &g, "--out", &w, "--csv", &csv]).status.success());
    let grid = TfGrid::read_bin(Path::new(&w)).unwrap();
    assert_eq!(grid.spec().len(), 256);
    assert!(std::fs::metadata(&csv).unwrap().len() > 0);

    let fs = DiscreteSignal::read_csv(Path::new(&f)).unwrap();
    let gs = DiscreteSignal::read_csv(Path::new(&g)).unwrap();
    let expected = fs.norm() * gs.norm();
    let norm = run(&["norm", "mixed", "--in", &w, "--p", "2", "--q", "2"]);
    assert!(norm.status.success());
    let value: f64 = stdout(&norm).trim().parse().unwrap();
    assert!((value - expected).abs() < 1e-10, "{value} vs {expected}");
    let modulation = run(&["norm", "modulation", "--signal", &f, "--window", &g]);
    let m: f64 = stdout(&modulation).trim().parse().unwrap();
    assert!((m - value).abs() < 1e-10);

    let pgm = path(dir.path(), "w.pgm");
    assert!(run(&["plot", "--in", &w, "--out", &pgm]).status.success());
    assert!(std::fs::metadata(&pgm).unwrap().len() > 0);
}

#[test]
fn verify_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = path(dir.path(), "r.json");
    let ok = run(&["verify", "counterexample", "--p", "2", "--q", "1", "--report", &report]);
    assert_eq!(ok.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["pass"], serde_json::Value::Bool(true));

    let moyal = run(&["verify", "moyal", "--named", "tau", "--n", "32"]);
    assert_eq!(moyal.status.code(), Some(0), "{}", stdout(&moyal));

    // p != q with a non-triangular E_A: the hypothesis fails and so does the run
    let eq = run(&["verify", "equivalence", "--named", "ft2", "--p", "1", "--q", "2", "--n", "16", "--trials", "3"]);
    assert_eq!(eq.status.code(), Some(1));
}
