//! End-to-end checks of the command-line interface: artifacts, determinism,
//! exit codes, dry-run behavior.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_graphmass")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("graphmass-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("missing {}: {e}", path.display()))
}

#[test]
fn profile_writes_csv_with_header() {
    let out = tmp_dir("profile");
    let res = run(&["profile", "--out", out.to_str().unwrap(), "--set", "mass=1"]);
    assert!(res.status.success());
    let csv = read(&out.join("profile.csv"));
    assert!(csv.starts_with("radius,height,slope\n"));
    // S_1(2.5·...) sanity: the first row is the horizon with height 0
    let first = csv.lines().nth(1).unwrap();
    assert!(first.starts_with("2.00000000000e0,0.00000000000e0"));
}

#[test]
fn dry_run_prints_config_and_writes_nothing() {
    let out = tmp_dir("dry");
    let res = run(&[
        "mass",
        "--dry-run",
        "--out",
        out.to_str().unwrap(),
        "--set",
        "mass=0.25",
    ]);
    assert!(res.status.success());
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.contains("mass = 0.25"));
    assert!(stdout.contains("radii = 3,4,5"));
    assert!(!out.join("mass.csv").exists());
}

#[test]
fn unknown_key_is_rejected_with_exit_1() {
    let res = run(&["mass", "--set", "bogus=1"]);
    assert_eq!(res.status.code(), Some(1));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("unknown config key"));
}

#[test]
fn numerical_failure_exits_2() {
    // the hole collar plus the box margin leaves no node with a full
    // curvature stencil on this tiny grid
    let res = run(&[
        "curvature",
        "--out",
        tmp_dir("curv2").to_str().unwrap(),
        "--set",
        "family=schwarzschild",
        "--set",
        "mass=0.5",
        "--set",
        "r_max=1.5",
        "--set",
        "spacing=0.25",
    ]);
    assert_eq!(
        res.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
}

#[test]
fn glue_noncomplete_matches_enumeration() {
    let out = tmp_dir("glue");
    let res = run(&[
        "glue",
        "--exact",
        "--out",
        out.to_str().unwrap(),
        "--set",
        "k=4",
    ]);
    assert!(res.status.success());
    let rec = read(&out.join("glue.records"));
    assert!(rec.contains("epsilon = 7/8"), "{rec}");
    assert!(rec.contains("cauchy_tail = 1/4 1/8 1/16"), "{rec}");
    let glued = read(&out.join("glued.gs"));
    assert!(glued.starts_with("gluedspace v1\nmode = exact\n"));
}

#[test]
fn fixtures_roundtrip_through_glue_files() {
    let out = tmp_dir("fixtures");
    let res = run(&["fixtures", "--out", out.to_str().unwrap(), "--set", "k=3"]);
    assert!(res.status.success());
    let da = out.join("noncomplete_da.fm");
    let db = out.join("noncomplete_db.fm");
    assert!(da.exists() && db.exists());
    // feed them back through the file-based glue path
    let out2 = tmp_dir("glue-files");
    let res = run(&[
        "glue",
        "--exact",
        "--out",
        out2.to_str().unwrap(),
        "--set",
        "source=files",
        "--set",
        &format!("input_a={}", da.display()),
        "--set",
        &format!("input_b={}", db.display()),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let rec = read(&out2.join("glue.records"));
    assert!(rec.contains("epsilon = 3/4"), "{rec}");
}

#[test]
fn mass_output_is_byte_identical_across_runs() {
    let out_a = tmp_dir("det-a");
    let out_b = tmp_dir("det-b");
    for out in [&out_a, &out_b] {
        let res = run(&[
            "mass",
            "--out",
            out.to_str().unwrap(),
            "--set",
            "mass=0.25",
            "--set",
            "r_max=8",
            "--set",
            "radii=4,5,6",
        ]);
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    }
    assert_eq!(read(&out_a.join("mass.csv")), read(&out_b.join("mass.csv")));
    assert_eq!(
        read(&out_a.join("mass_summary.records")),
        read(&out_b.join("mass_summary.records"))
    );
}

#[test]
fn records_format_replaces_csv() {
    let out = tmp_dir("records");
    let res = run(&[
        "mass",
        "--format",
        "records",
        "--out",
        out.to_str().unwrap(),
        "--set",
        "mass=0.25",
        "--set",
        "r_max=8",
        "--set",
        "radii=4,5",
    ]);
    assert!(res.status.success());
    assert!(!out.join("mass.csv").exists());
    let rec = read(&out.join("mass.records"));
    assert!(rec.contains("radius = 4.00000000000e0"));
}

#[test]
fn h0_depth_pullback_run_on_small_fixture() {
    let out = tmp_dir("trio");
    let common: Vec<String> = [
        ("family", "schwarzschild"),
        ("mass", "0.5"),
        ("r0", "3"),
        ("spacing", "0.25"),
        ("r_max", "5"),
    ]
    .iter()
    .map(|(k, v)| format!("{k}={v}"))
    .collect();
    for sub in ["h0", "depth"] {
        let mut args = vec![sub.to_string(), "--out".into(), out.to_str().unwrap().to_string()];
        for s in &common {
            args.push("--set".into());
            args.push(s.clone());
        }
        let res = Command::new(bin()).args(&args).output().unwrap();
        assert!(
            res.status.success(),
            "{sub}: {}",
            String::from_utf8_lossy(&res.stderr)
        );
    }
    let h0 = read(&out.join("h0.records"));
    assert!(h0.contains("flag = Converged"), "{h0}");
    let mut args = vec![
        "pullback".to_string(),
        "--out".into(),
        out.to_str().unwrap().to_string(),
        "--set".into(),
        "radius=4".into(),
        "--set".into(),
        "angular_samples=12".into(),
    ];
    for s in &common {
        args.push("--set".into());
        args.push(s.clone());
    }
    let res = Command::new(bin()).args(&args).output().unwrap();
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let metric = read(&out.join("pullback_metric.fm"));
    assert!(metric.starts_with("finitemetric v1\nmode = float\n"));
}
