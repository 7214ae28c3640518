use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SMALL_BASIS: &str = r#"{"basis": {"custom": {"name": "small", "shells": [
    {"sigma": 0, "exponents": [0.5, 1.0]}, {"sigma": 1, "exponents": [0.5]}]}}}"#;

fn trapci(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trapci"))
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .args(args)
        .output()
        .unwrap()
}

fn table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn small_config(dir: &Path) {
    std::fs::write(dir.join("small.json"), SMALL_BASIS).unwrap();
}

#[test]
fn scatter_single_depth() {
    let d = TempDir::new().unwrap();
    let out = trapci(d.path(), &["scatter", "--De", "5", "--out", "s"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (h, rows) = table(&d.path().join("s/scattering.csv"));
    assert_eq!(h, ["De_hw", "as_dho"]);
    assert_eq!(rows.len(), 1);
    let a: f64 = rows[0][1].parse().unwrap();
    assert!((a - 2.758).abs() < 0.005, "{a}");
    let (h, rows) = table(&d.path().join("s/poles.csv"));
    assert_eq!(h, ["pole_index", "De_hw"]);
    assert!(rows.is_empty());
}

#[test]
fn scatter_range_finds_first_pole() {
    let d = TempDir::new().unwrap();
    std::fs::write(
        d.path().join("c.json"),
        r#"{"scatter": {"grid": {"linear": {"min": 0.5, "max": 6.0, "points": 12}}}}"#,
    )
    .unwrap();
    let out = trapci(d.path(), &["scatter", "--config", "c.json", "--out", "s"]);
    assert!(out.status.success());
    let (_, rows) = table(&d.path().join("s/scattering.csv"));
    assert_eq!(rows.len(), 12);
    let (_, poles) = table(&d.path().join("s/poles.csv"));
    assert_eq!(poles.len(), 1);
    let p: f64 = poles[0][1].parse().unwrap();
    assert!((p - 3.8).abs() < 0.1, "{p}");
}

#[test]
fn noninteracting_ci_ground_state() {
    let d = TempDir::new().unwrap();
    small_config(d.path());
    let out = trapci(
        d.path(),
        &["ci", "--config", "small.json", "--De", "0", "--out", "c"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (h, rows) = table(&d.path().join("c/spectrum.csv"));
    assert_eq!(
        h,
        [
            "De_hw",
            "as_dho",
            "inv_as",
            "state_index",
            "cluster_id",
            "L_guess",
            "E_hw"
        ]
    );
    let e0: f64 = rows[0][6].parse().unwrap();
    assert!((e0 - 3.0).abs() < 1e-10, "{e0}");
    assert_eq!(rows[0][5], "0");
    // first excited cluster: one quantum, threefold
    assert_eq!(rows.iter().filter(|r| r[4] == "1").count(), 3);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.path().join("c/ci_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["n_gto"], 5);
    assert_eq!(report["n_configurations"], 15);
    assert_eq!(report["nonzero_integrals"], 0);
}

#[test]
fn ci_output_is_deterministic() {
    let d = TempDir::new().unwrap();
    small_config(d.path());
    for o in ["a", "b"] {
        let out = trapci(
            d.path(),
            &[
                "ci",
                "--config",
                "small.json",
                "--De",
                "3",
                "--threads",
                "1",
                "--out",
                o,
            ],
        );
        assert!(out.status.success());
    }
    for f in ["spectrum.csv", "assignments.csv"] {
        let a = std::fs::read(d.path().join("a").join(f)).unwrap();
        let b = std::fs::read(d.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn sweep_reference_and_converge() {
    let d = TempDir::new().unwrap();
    std::fs::write(
        d.path().join("c.json"),
        r#"{"basis": {"custom": {"name": "small", "shells": [{"sigma": 0, "exponents": [0.5, 1.0]}]}},
            "sweep": {"values": [0.0, 3.0]},
            "converge": {"depths": [3.0], "sigma_max": 1, "extra": []}}"#,
    )
    .unwrap();
    for cmd in ["sweep", "reference", "converge"] {
        let out = trapci(d.path(), &[cmd, "--config", "c.json", "--out", "o"]);
        assert!(
            out.status.success(),
            "{cmd}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let (_, spectrum) = table(&d.path().join("o/spectrum.csv"));
    assert!(spectrum.iter().any(|r| r[0] == "0") && spectrum.iter().any(|r| r[0] == "3"));
    let (_, errors) = table(&d.path().join("o/sweep_errors.csv"));
    assert!(errors.is_empty());

    let (h, reference) = table(&d.path().join("o/reference.csv"));
    assert_eq!(h, ["De_hw", "label", "L", "E_hw"]);
    assert_eq!(reference.len(), 14);
    let mgs3: f64 = reference
        .iter()
        .find(|r| r[0] == "3" && r[1] == "MGS")
        .unwrap()[3]
        .parse()
        .unwrap();

    let (h, conv) = table(&d.path().join("o/convergence.csv"));
    assert_eq!(
        &h[..6],
        ["N_GTO", "De_hw", "as_dho", "E_hw", "E_ref_hw", "dE_hw"]
    );
    assert_eq!(conv.len(), 2);
    let e: Vec<f64> = conv.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(e[1] <= e[0]);
    assert!(e.iter().all(|&x| x > mgs3));
}

#[test]
fn density_by_index_and_name() {
    let d = TempDir::new().unwrap();
    let mut small: serde_json::Value = serde_json::from_str(SMALL_BASIS).unwrap();
    small["density"] = serde_json::json!({"grid": {"min": -2.0, "max": 2.0, "n": 21}});
    std::fs::write(d.path().join("small.json"), small.to_string()).unwrap();
    let out = trapci(
        d.path(),
        &[
            "density",
            "--config",
            "small.json",
            "--De",
            "0",
            "--state",
            "0",
            "--state",
            "MGS",
            "--out",
            "d",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (h, rows) = table(&d.path().join("d/density_0_ci.csv"));
    assert_eq!(h, ["z1_dho", "z2_dho", "density"]);
    assert_eq!(rows.len(), 21 * 21);
    assert!(d.path().join("d/density_MGS_ref.csv").exists());
    let (h, cuts) = table(&d.path().join("d/cuts_MGS.csv"));
    assert_eq!(h.len(), 5);
    assert_eq!(cuts.len(), 21);
    let (_, summary) = table(&d.path().join("d/density_summary.csv"));
    let overlap: f64 = summary[1][5].parse().unwrap();
    assert!(overlap > 0.999, "{overlap}");
}

#[test]
fn usage_errors_exit_with_two() {
    let d = TempDir::new().unwrap();
    small_config(d.path());
    std::fs::write(d.path().join("unknown.json"), r#"{"bogus": 1}"#).unwrap();
    std::fs::write(
        d.path().join("empty.json"),
        r#"{"sweep": {"linear": {"min": 2.0, "max": 1.0, "points": 4}}}"#,
    )
    .unwrap();
    let cases: [&[&str]; 6] = [
        &["ci", "--config", "unknown.json"],
        &["sweep", "--config", "empty.json"],
        &[
            "density",
            "--config",
            "small.json",
            "--De",
            "0",
            "--state",
            "XYZ",
        ],
        &["ci", "--basis", "STO-3G"],
        &["ci", "--threads", "0"],
        &["scatter", "--De", "-1"],
    ];
    for args in cases {
        let out = trapci(d.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = trapci(
        d.path(),
        &[
            "density",
            "--config",
            "small.json",
            "--De",
            "0",
            "--state",
            "XYZ",
        ],
    );
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("MGS") && msg.contains("TS3"), "{msg}");
}

#[test]
fn missing_config_is_an_error() {
    let d = TempDir::new().unwrap();
    let out = trapci(d.path(), &["ci", "--config", "nope.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn integral_cache_is_reused() {
    let d = TempDir::new().unwrap();
    let mut cfg: serde_json::Value = serde_json::from_str(SMALL_BASIS).unwrap();
    cfg["cache_dir"] = "cache".into();
    std::fs::write(d.path().join("c.json"), cfg.to_string()).unwrap();
    for o in ["a", "b"] {
        let out = trapci(
            d.path(),
            &["ci", "--config", "c.json", "--De", "5", "--out", o],
        );
        assert!(out.status.success());
    }
    assert_eq!(
        std::fs::read_dir(d.path().join("cache")).unwrap().count(),
        1
    );
    assert_eq!(
        std::fs::read(d.path().join("a/spectrum.csv")).unwrap(),
        std::fs::read(d.path().join("b/spectrum.csv")).unwrap()
    );
}
