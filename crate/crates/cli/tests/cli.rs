use std::path::PathBuf;
use std::process::Command;

fn swkb() -> Command {
    Command::new(env!("CARGO_BIN_EXE_swkb"))
}

fn scenarios() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

#[test]
fn validate_accepts_shipped_scenarios() {
    let out = swkb().arg("validate").arg(scenarios().join("all.scn")).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn validate_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.scn");
    std::fs::write(&f, "name = bad\nfamily = L\ng = 1\ndeformation = multi-indexed\ntype_ii = 2\n").unwrap();
    let out = swkb().arg("validate").arg(&f).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    std::fs::write(&f, "name = bad\nfamily = X\n").unwrap();
    let out = swkb().arg("validate").arg(&f).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn run_writes_csv_and_reports_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let out = swkb()
        .args(["run", "--threads", "2", "--out-dir"])
        .arg(dir.path())
        .arg(scenarios().join("undeformed-h.scn"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = std::fs::read_to_string(dir.path().join("undeformed-h.csv")).unwrap();
    assert!(csv.starts_with("n,breve_n,I_over_pi,err,interval_count\n"));
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn failing_threshold_gives_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("strict.scn");
    std::fs::write(
        &f,
        "name = strict\nfamily = L\ng = 3\ndeformation = multi-indexed\ntype_ii = 1\nn_max = 3\nexpect_err_below = 1e-9\n",
    )
    .unwrap();
    let out = swkb().arg("run").arg("--out-dir").arg(dir.path()).arg(&f).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn spectrum_of_deformed_potential() {
    let out = swkb()
        .args(["spectrum", "--levels", "4"])
        .arg(scenarios().join("fig4a.scn"))
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("PASS"));
}

#[test]
fn figure_three_writes_curve_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = swkb().args(["figure", "fig3", "--out-dir"]).arg(dir.path()).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let manifest = std::fs::read_to_string(dir.path().join("fig3/manifest.txt")).unwrap();
    assert!(manifest.contains("energy line: E = 2 * breve(1) = 2"));
    assert!(dir.path().join("fig3/fig3_w2.csv").exists());
}

#[test]
fn unknown_figure_is_an_error() {
    let out = swkb().args(["figure", "fig9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
