use std::path::Path;
use std::process::{Command, Output};

fn geozero(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geozero"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn example_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = geozero(&["example", "pyramid", "--param", "h=2", "--out", "p.json"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("zero: true"));
    let o = geozero(&["verify", "p.json", "--format", "csv"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "mesh_id,vertices,faces,method,re,im,abs,normalized,seconds");
    assert!(lines.next().unwrap().starts_with("p,5,5,spin_sum,"));
}

#[test]
fn verify_fails_on_the_torus() {
    let dir = tempfile::tempdir().unwrap();
    let o = geozero(&["example", "torus", "--out", "t.json"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("zero: false"));
    assert_eq!(geozero(&["verify", "t.json"], dir.path()).status.code(), Some(1));
    assert!(geozero(&["verify", "t.json", "--allow-nonzero"], dir.path()).status.success());
}

#[test]
fn generate_and_signsearch() {
    let dir = tempfile::tempdir().unwrap();
    let o = geozero(&["generate", "--vertices", "6", "--seed", "2", "--rescale", "1:3", "--out", "g.json"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"accepted\": true"));
    let o = geozero(&["signsearch", "g.json"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("minimizer:").count(), 2);
    let o = geozero(&["signsearch", "g.json", "--format", "csv"], dir.path());
    assert_eq!(stdout(&o).lines().count(), 1 + 4096);
}

#[test]
fn campaign_writes_table_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["campaign", "--vertices", "7", "--seeds", "2", "--rescalings", "1", "--format", "csv", "--out", "c.csv"];
    assert!(geozero(&args, dir.path()).status.success());
    let first = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert_eq!(first.lines().count(), 5);
    assert!(dir.path().join("c.manifest.json").exists());
    assert!(geozero(&args, dir.path()).status.success());
    assert_eq!(first, std::fs::read_to_string(dir.path().join("c.csv")).unwrap());
}

#[test]
fn torus_reference_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = geozero(&["torus-sweep", "--param", "R", "--values", "3,4", "--check-reference", "--format", "csv"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn perturb_reports_slope() {
    let dir = tempfile::tempdir().unwrap();
    assert!(geozero(&["example", "nonconvex-9", "--out", "n.json"], dir.path()).status.success());
    let o = geozero(&["perturb", "n.json", "--draws", "5"], dir.path());
    let slope: f64 = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("slope: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 1.0).abs() < 0.2);
}

#[test]
fn bad_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(geozero(&["example", "nope"], dir.path()).status.code(), Some(2));
    assert_eq!(geozero(&["verify", "missing.json"], dir.path()).status.code(), Some(2));
    assert!(!geozero(&["generate", "--vertices", "6", "--rescale", "3"], dir.path()).status.success());
}
