use rmtlab::experiment::{run_experiment, ExperimentConfig};
use serde_json::Value;

fn run(json: &str) -> (Value, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::from_json(json).unwrap();
    let report = run_experiment(&config, &dir.path().join("out")).unwrap();
    (serde_json::to_value(&report).unwrap(), dir)
}

#[test]
fn wigner_histogram_tracks_the_semicircle() {
    let (report, _dir) = run(
        r#"{"kind": "esd", "seed": 1, "bins": 40,
            "ensemble": {"n": 2000, "law_intra": {"kind": "rademacher"}, "law_cross": {"kind": "rademacher"}}}"#,
    );
    let dev = report["results"]["max_density_deviation"].as_f64().unwrap();
    assert!(dev < 0.1, "{dev}");
    assert!((report["results"]["predicted_radius"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn hankel_run_reports_oracle_sequence_as_psd() {
    let (report, dir) = run(
        r#"{"kind": "hankel", "hankel": {"k": 3},
            "ensemble": {"n": 100, "fractions": [0.8, 0.1, 0.1],
                         "law_intra": {"kind": "constant_zero"}, "law_cross": {"kind": "rademacher"}}}"#,
    );
    let entries = report["results"]["entries"].as_array().unwrap();
    let oracle = entries
        .iter()
        .find(|e| e["provenance"] == "walk_oracle")
        .expect("oracle sequence present");
    assert_eq!(oracle["report"]["psd"], true);
    let table = std::fs::read_to_string(dir.path().join("out/hankel.csv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 4 * entries.len());
}

#[test]
fn charfn_run_finds_a_witness() {
    let (report, dir) = run(r#"{"kind": "charfn", "charfn": {"nuhat_sq": 0.3, "t_max": 20.0}}"#);
    let r = &report["results"];
    assert!(r["witness"].as_f64().is_some());
    assert!(r["witness_value"].as_f64().unwrap() < -1.0);
    assert!(r["minimum"].as_f64().unwrap() < -1.0);
    assert!(dir.path().join("out/charfn.csv").is_file());
}

#[test]
fn stieltjes_run_matches_semicircle() {
    let (report, _dir) = run(
        r#"{"kind": "stieltjes", "seed": 4, "replicates": 2, "z_grid": [[0.0, 0.5], [1.5, 0.2]],
            "ensemble": {"n": 800, "law_intra": {"kind": "rademacher"}, "law_cross": {"kind": "rademacher"}}}"#,
    );
    let points = report["results"]["points"].as_array().unwrap();
    assert_eq!(points.len(), 2);
    assert!(points.iter().all(|p| p["abs_diff"].as_f64().unwrap() < 0.01));
}

#[test]
fn walks_run_with_oracle_table() {
    let (report, dir) = run(
        r#"{"kind": "walks", "walks": {"k": 6},
            "ensemble": {"n": 6, "part_size": 2, "law_intra": {"kind": "rademacher"}, "law_cross": {"kind": "rademacher"}}}"#,
    );
    let r = &report["results"];
    assert!(r["catalan_identity"].as_array().unwrap().iter().all(|c| c["equal"] == true));
    assert!(!r["oracle"].as_array().unwrap().is_empty());
    assert!(dir.path().join("out/oracle.csv").is_file());
    assert!(dir.path().join("out/shapes.csv").is_file());
}
