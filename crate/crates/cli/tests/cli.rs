use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const CROSS: &str = "3 6\n1 -1 0 0 0 0\n0 0 1 -1 0 0\n0 0 0 0 1 -1\n";
const SIMPLEX: &str = "3 4\n1 0 0 -1\n0 1 0 -1\n0 0 1 -1\n";

fn toric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric"))
        .args(args)
        .env_remove("RUST_BACKTRACE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn reflexive_and_points() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "cross.txt", CROSS);
    let o = toric(&["polytope", "reflexive", arg(&f)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "reflexive: true");
    let o = toric(&["polytope", "points", arg(&f)]);
    assert!(stdout(&o).contains("lattice points: 7"));
}

#[test]
fn normal_forms_detect_isomorphism() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", SIMPLEX);
    // The same simplex after the shear x -> x + 2y.
    let b = write(&dir, "b.txt", "4 3\n1 0 0\n2 1 0\n0 0 1\n-3 -1 -1\n");
    let c = write(&dir, "c.txt", CROSS);
    let iso = |x: &Path, y: &Path| stdout(&toric(&["polytope", "iso", arg(x), arg(y)]));
    assert!(iso(&a, &b).contains("isomorphic: true"));
    assert!(iso(&a, &c).contains("isomorphic: false"));
    let digest = |x: &Path| {
        let out = stdout(&toric(&["polytope", "nf", arg(x)]));
        out.lines()
            .find(|l| l.starts_with("digest: "))
            .unwrap()
            .to_string()
    };
    assert_eq!(digest(&a), digest(&b));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.txt", "3 4\n1 0 0 -1\n0 1 x -1\n0 0 1 -1\n");
    let o = toric(&["polytope", "reflexive", arg(&f)]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn weighted_projective_space() {
    let o = toric(&["wps", "delta", "1,1,1,1"]);
    assert!(stdout(&o).contains("lattice points: 35"));
    let o = toric(&["wps", "quasismooth", "(1:1:1:1)"]);
    assert!(stdout(&o).contains("criterion satisfied: true"));
    let o = toric(&["wps", "delta", "2,4"]);
    assert!(!o.status.success());
}

#[test]
fn reid_classification() {
    let o = toric(&["--jobs", "1", "reid", "classify"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("81 classes"));
    assert!(out.contains("group {14,28,45,51}"));
}

#[test]
fn bhk_fermat_quintic() {
    let dir = TempDir::new().unwrap();
    let rows: String = (0..5)
        .map(|i| {
            (0..5)
                .map(|j| if i == j { "5" } else { "0" })
                .collect::<Vec<_>>()
                .join(" ")
                + "\n"
        })
        .collect();
    let f = write(&dir, "fermat.txt", &format!("5 5\n{rows}"));
    let out = stdout(&toric(&["mirror", "bhk", arg(&f)]));
    assert!(out.contains("A calabi-yau: true"), "{out}");
    assert!(out.contains("A dual group: (5,5,5)"), "{out}");
    assert!(out.contains("A^T dual group: (5,5,5)"), "{out}");
}

#[test]
fn zero_jobs_is_rejected() {
    let o = toric(&["--jobs", "0", "reid", "classify"]);
    assert!(!o.status.success());
}
