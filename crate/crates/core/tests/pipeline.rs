use std::fs;

use curie_core::detectors::{CurieParams, DetectorConfig};
use curie_core::eval::{run_scheme, RunOptions, StreamMeta};
use curie_core::experiment::{self, suite_spec, CsvStream, ExperimentConfig, Metric, RunSettings};
use curie_core::learners::LearnerConfig;
use curie_core::snapshot::Snapshot;
use curie_core::stream::{export_csv, generate, DriftKind};
use curie_core::Instance;

fn short(family: &str, drift: DriftKind, order: u8, length: u64) -> curie_core::stream::StreamSpec {
    let mut s = suite_spec(family, drift, order, 0);
    let q = length / 4;
    s.positions = vec![q, 2 * q, 3 * q];
    s.length = length;
    s.width = q / 10;
    s
}

#[test]
fn curie_run_on_full_sine_stream() {
    let spec = suite_spec("Sine", DriftKind::Abrupt, 1, 1);
    let data = generate(&spec).unwrap();
    let r = run_scheme(
        &LearnerConfig::NaiveBayes,
        &DetectorConfig::Curie(CurieParams::default()),
        &data,
        &StreamMeta::of_spec(&spec),
        &RunOptions::default(),
    )
    .unwrap();
    assert_eq!(r.correct.len(), 39_950);
    assert!(r.detections.windows(2).all(|w| w[0] < w[1]));
    assert!(r.detections.iter().all(|&t| t >= 50));
}

#[test]
fn generate_preset_writes_twenty_files_deterministically() {
    let config = ExperimentConfig::paper_suite(vec![7]);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let entries = experiment::cmd_generate(&config, a.path()).unwrap();
    assert_eq!(entries.len(), 20);
    assert!(entries.iter().all(|e| e.rows == 40_000));
    let sine = fs::read_to_string(a.path().join("Sine_A_F1.csv")).unwrap();
    assert_eq!(sine.lines().count(), 40_001);
    assert_eq!(sine.lines().nth(1).unwrap().split(',').count(), 3);
    assert!(a.path().join(experiment::MANIFEST_JSON).is_file());

    let mut one = config.clone();
    one.preset = None;
    one.streams = vec![suite_spec("Stagger", DriftKind::Gradual, 2, 7)];
    experiment::cmd_generate(&one, b.path()).unwrap();
    assert_eq!(
        fs::read(a.path().join("Stagger_G_F2.csv")).unwrap(),
        fs::read(b.path().join("Stagger_G_F2.csv")).unwrap()
    );
}

#[test]
fn run_cross_product_and_outputs() {
    let config = ExperimentConfig {
        seeds: vec![1, 2],
        learners: vec![LearnerConfig::NaiveBayes, LearnerConfig::knn_default()],
        detectors: DetectorConfig::defaults(),
        streams: vec![short("Sine", DriftKind::Abrupt, 1, 4000), short("Mixed", DriftKind::Gradual, 2, 4000), short("Sea", DriftKind::Abrupt, 1, 4000)],
        metrics: Metric::ALL.to_vec(),
        ..Default::default()
    };
    let dir = tempfile::tempdir().unwrap();
    let report = experiment::cmd_run(&config, dir.path(), RunSettings::default()).unwrap();
    assert!(report.failures.is_empty());
    assert_eq!(report.rows.len(), 2 * 5 * 3 * 2);
    assert_eq!(report.tables.len(), Metric::ALL.len());
    for t in &report.tables {
        assert_eq!(t.detectors.len(), 5);
        assert!((t.mean_ranks.iter().sum::<f64>() - 15.0).abs() < 1e-9);
    }
    let rows = experiment::read_results(&dir.path().join(experiment::RESULTS_CSV)).unwrap();
    assert_eq!(rows, report.rows);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join(experiment::SUMMARY_JSON)).unwrap()).unwrap();
    assert_eq!(summary["runs"], 60);
    assert_eq!(summary["detectors"].as_array().unwrap().len(), 5);
    assert!(fs::read_to_string(dir.path().join(experiment::NEMENYI_TXT)).unwrap().contains("CD ="));
    assert!(!dir.path().join(experiment::FAILURES_JSON).exists());

    let ranked = experiment::cmd_rank(&dir.path().join(experiment::RESULTS_CSV), &Metric::ALL).unwrap();
    assert_eq!(ranked, report.tables);
}

#[test]
fn single_scheme_gives_one_row() {
    let config = ExperimentConfig {
        learners: vec![LearnerConfig::NaiveBayes],
        detectors: vec![DetectorConfig::Curie(CurieParams::default())],
        streams: vec![short("Sine", DriftKind::Abrupt, 2, 2000)],
        ..Default::default()
    };
    let dir = tempfile::tempdir().unwrap();
    let report = experiment::cmd_run(&config, dir.path(), RunSettings::default()).unwrap();
    assert_eq!(report.rows.len(), 1);
    assert!(report.tables.is_empty());
}

#[test]
fn failed_runs_are_listed_and_others_kept() {
    let dir = tempfile::tempdir().unwrap();
    // label 2 is outside CURIE's binary state alphabet
    let data: Vec<Instance> = (0..300).map(|t| Instance::new(t, vec![t as f64 / 300.0], (t % 3) as u32)).collect();
    let path = dir.path().join("three.csv");
    export_csv(&data, &path).unwrap();
    let config = ExperimentConfig {
        learners: vec![LearnerConfig::NaiveBayes],
        detectors: vec![DetectorConfig::Curie(CurieParams::default()), DetectorConfig::Ddm(Default::default())],
        csv_streams: vec![CsvStream { name: "three".into(), path, drift: DriftKind::Abrupt, positions: vec![150], concept_size: None, grid_bins: None }],
        ..Default::default()
    };
    let out = dir.path().join("out");
    let report = experiment::cmd_run(&config, &out, RunSettings::default()).unwrap();
    assert_eq!(report.failures.len(), 1);
    assert_eq!(report.rows.len(), 1);
    assert_eq!(report.rows[0].detector, "DDM");
    let failures = fs::read_to_string(out.join(experiment::FAILURES_JSON)).unwrap();
    assert!(failures.contains("CURIE"));
}

#[test]
fn snapshots_are_written_and_flag_the_trigger() {
    let config = ExperimentConfig {
        learners: vec![LearnerConfig::NaiveBayes],
        detectors: vec![DetectorConfig::Curie(CurieParams::default())],
        streams: vec![short("Sine", DriftKind::Abrupt, 1, 8000)],
        snapshot_every: Some(1000),
        ..Default::default()
    };
    let dir = tempfile::tempdir().unwrap();
    let report = experiment::cmd_run(&config, dir.path(), RunSettings::default()).unwrap();
    assert_eq!(report.failures.len(), 0);
    let snap_dir = fs::read_dir(dir.path().join("snapshots")).unwrap().next().unwrap().unwrap().path();
    let mut names: Vec<String> = fs::read_dir(&snap_dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert!(names.contains(&"t000999.snap".to_string()), "{names:?}");
    assert_eq!(names.iter().filter(|n| n.starts_with('t')).count(), 8);
    let drift = names.iter().find(|n| n.starts_with("drift_")).expect("at least one detection snapshot");
    let text = experiment::cmd_inspect(&snap_dir.join(drift)).unwrap();
    let snap = Snapshot::read(&snap_dir.join(drift)).unwrap();
    let ev = snap.detection.clone().unwrap();
    assert!(text.contains(&format!("[{}] at", ev.cell)) && text.contains("(trigger)"), "{text}");
    assert_eq!(text.matches("(counted)").count(), ev.mutant_neighbors.len());
    let grid_lines = text.lines().filter(|l| l.len() == 20 && !l.contains(' ')).count();
    assert_eq!(grid_lines, 20);
}

#[test]
fn config_file_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("s.csv");
    export_csv(&generate(&short("Sine", DriftKind::Abrupt, 1, 400)).unwrap(), &csv_path).unwrap();
    let mut config = ExperimentConfig::paper_suite(vec![1, 2]);
    config.csv_streams.push(CsvStream {
        name: "imported".into(),
        path: "s.csv".into(),
        drift: DriftKind::Abrupt,
        positions: vec![100, 200, 300],
        concept_size: Some(100),
        grid_bins: Some(20),
    });
    let path = dir.path().join("exp.toml");
    fs::write(&path, config.to_toml().unwrap()).unwrap();
    let loaded = ExperimentConfig::load(&path).unwrap();
    assert_eq!(loaded.csv_streams[0].path, csv_path);
    let mut expected = config.clone();
    expected.csv_streams[0].path = csv_path;
    assert_eq!(loaded, expected);

    fs::write(&path, config.to_toml().unwrap().replace("s.csv", "missing.csv")).unwrap();
    assert!(ExperimentConfig::load(&path).is_err());
}
