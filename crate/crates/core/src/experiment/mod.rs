//! Batch experiments: config files, stream presets and the runner behind
//! the command-line verbs.
//!
//! A run directory holds `results.csv` (one row per run), `detections.csv`,
//! `summary.json` (mean scores and mean ranks per detector),
//! `nemenyi.txt`/`nemenyi.csv`, an optional `failures.json`, and CURIE
//! snapshots under `snapshots/` when requested.

mod config;
mod presets;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{CsvStream, ExperimentConfig, Metric};
pub use presets::{
    paper_suite, suite_spec, ABRUPT_POSITIONS, FAMILIES, GRADUAL_POSITIONS, GRADUAL_WIDTH, PAPER_SUITE, RT_SEEDS,
    SEA_NOISE, SUITE_LENGTH,
};

use crate::eval::{friedman_nemenyi, run_with, RankTable, RunOptions, RunResult, SchemeDetector, StreamMeta};
use crate::snapshot::Snapshot;
use crate::stream::{export_csv, generate, import_csv};
use crate::{Error, Instance, Result};

pub const RESULTS_CSV: &str = "results.csv";
pub const DETECTIONS_CSV: &str = "detections.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const FAILURES_JSON: &str = "failures.json";
pub const NEMENYI_TXT: &str = "nemenyi.txt";
pub const NEMENYI_CSV: &str = "nemenyi.csv";
pub const MANIFEST_JSON: &str = "manifest.json";

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub rows: usize,
    pub seed: u64,
    pub spec: crate::stream::StreamSpec,
}

/// Writes one CSV per stream realisation and `manifest.json`.
pub fn cmd_generate(config: &ExperimentConfig, out: &Path) -> Result<Vec<ManifestEntry>> {
    config.validate()?;
    create_dir(out)?;
    let specs = config.realisations()?;
    let single_seed = config.seeds.len() <= 1;
    let entries = specs
        .par_iter()
        .map(|spec| {
            let file = if single_seed { format!("{}.csv", spec.name) } else { format!("{}_s{}.csv", spec.name, spec.seed) };
            let data = generate(spec)?;
            export_csv(&data, out.join(&file))?;
            Ok(ManifestEntry { file, rows: data.len(), seed: spec.seed, spec: spec.clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    let json = serde_json::to_string_pretty(&entries).expect("manifest serialises");
    write_file(&out.join(MANIFEST_JSON), json)?;
    Ok(entries)
}

/// One line of `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scheme: String,
    pub learner: String,
    pub detector: String,
    pub stream: String,
    pub seed: u64,
    pub pacc: f64,
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub precision: f64,
    pub recall: f64,
    pub mcc: f64,
    pub mu_d: f64,
    pub ram_hours: f64,
    pub wall_seconds: f64,
}

impl ResultRow {
    pub fn of_run(r: &RunResult) -> Self {
        let s = r.score();
        Self {
            scheme: r.scheme.clone(),
            learner: r.learner.clone(),
            detector: r.detector.clone(),
            stream: r.stream.clone(),
            seed: r.seed,
            pacc: r.pacc(),
            tp: s.tp,
            fp: s.fp,
            fn_: s.fn_,
            tn: s.tn,
            precision: s.precision,
            recall: s.recall,
            mcc: s.mcc,
            mu_d: s.mu_d,
            ram_hours: r.ram_hours(),
            wall_seconds: r.wall_seconds,
        }
    }

    pub fn metric(&self, m: Metric) -> f64 {
        match m {
            Metric::Pacc => self.pacc,
            Metric::Mcc => self.mcc,
            Metric::MuD => self.mu_d,
            Metric::RamHours => self.ram_hours,
            Metric::Precision => self.precision,
            Metric::Recall => self.recall,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Failure {
    pub scheme: String,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectorSummary {
    pub detector: String,
    pub runs: usize,
    pub means: BTreeMap<String, f64>,
    pub mean_ranks: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeSummary {
    pub learner: String,
    pub detector: String,
    pub runs: usize,
    pub means: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub runs: usize,
    pub failures: usize,
    pub detectors: Vec<DetectorSummary>,
    pub schemes: Vec<SchemeSummary>,
    pub critical_difference: BTreeMap<String, f64>,
}

pub struct RunReport {
    pub rows: Vec<ResultRow>,
    pub failures: Vec<Failure>,
    pub tables: Vec<RankTable>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunSettings {
    /// Worker threads; `None` uses all cores.
    pub parallel: Option<usize>,
    /// Overrides the config's snapshot cadence.
    pub snapshot_every: Option<u64>,
}

enum Source {
    Generated(crate::stream::StreamSpec),
    Csv(CsvStream),
}

impl Source {
    fn load(&self) -> Result<(Vec<Instance>, StreamMeta)> {
        match self {
            Source::Generated(spec) => Ok((generate(spec)?, StreamMeta::of_spec(spec))),
            Source::Csv(s) => {
                let data = import_csv(&s.path)?;
                let concept_size = s.concept_size.unwrap_or(data.len() as u64 / (s.positions.len() as u64 + 1));
                let meta = StreamMeta {
                    name: s.name.clone(),
                    true_drifts: s.positions.clone(),
                    drift_kind: s.drift,
                    concept_size,
                    grid_bins: s.grid_bins,
                    seed: 0,
                };
                Ok((data, meta))
            }
        }
    }

    fn label(&self) -> (&str, u64) {
        match self {
            Source::Generated(spec) => (&spec.name, spec.seed),
            Source::Csv(s) => (&s.name, 0),
        }
    }
}

fn snapshot_name(t: u64, at_detection: bool) -> String {
    if at_detection {
        format!("drift_t{t:06}.snap")
    } else {
        format!("t{t:06}.snap")
    }
}

/// Runs every scheme on every stream realisation and writes the run
/// directory. Failed runs are listed in the report and in `failures.json`;
/// the other results are still written.
pub fn cmd_run(config: &ExperimentConfig, out: &Path, settings: RunSettings) -> Result<RunReport> {
    config.validate_for_run()?;
    create_dir(out)?;
    let mut sources: Vec<Source> = config.realisations()?.into_iter().map(Source::Generated).collect();
    // imported streams are fixed data, so seeds do not multiply them
    sources.extend(config.csv_streams.iter().cloned().map(Source::Csv));

    let opts = RunOptions {
        prep_size: config.prep_size,
        mapping: config.signal,
        sample_every: config.sample_every,
        snapshot_every: settings.snapshot_every.or(config.snapshot_every),
    };
    let schemes: Vec<_> = config.learners.iter().flat_map(|l| config.detectors.iter().map(move |d| (l, d))).collect();

    let job = || -> Vec<Vec<std::result::Result<RunResult, Failure>>> {
        sources
            .par_iter()
            .map(|source| {
                let (name, seed) = source.label();
                let loaded = source.load();
                schemes
                    .par_iter()
                    .map(|&(learner, detector)| {
                        let scheme = crate::eval::scheme_id(learner.name(), detector.name(), name);
                        let fail = |e: Error| Failure { scheme: scheme.clone(), seed, error: e.to_string() };
                        let (data, meta) = loaded.as_ref().map_err(|e| fail(Error::Run { scheme: scheme.clone(), message: e.to_string() }))?;
                        let snap_dir = out.join("snapshots").join(format!("{scheme}_s{seed}"));
                        let mut sink = |t: u64, snap: &Snapshot, at_detection: bool| -> Result<()> {
                            create_dir(&snap_dir)?;
                            snap.write(&snap_dir.join(snapshot_name(t, at_detection)))
                        };
                        let dims = data.first().map_or(0, Instance::dims);
                        SchemeDetector::build(detector, dims, meta.grid_bins, &opts)
                            .and_then(|mut d| run_with(learner.name(), learner.build()?, &mut d, data, meta, &opts, &mut sink))
                            .map_err(fail)
                    })
                    .collect()
            })
            .collect()
    };
    let outcomes = match settings.parallel {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(job),
        None => job(),
    };

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut detections = csv::Writer::from_path(out.join(DETECTIONS_CSV))?;
    detections.write_record(["scheme", "seed", "t"])?;
    for outcome in outcomes.into_iter().flatten() {
        match outcome {
            Ok(r) => {
                for t in &r.detections {
                    detections.write_record([r.scheme.clone(), r.seed.to_string(), t.to_string()])?;
                }
                rows.push(ResultRow::of_run(&r));
            }
            Err(f) => {
                log::error!("{} (seed {}): {}", f.scheme, f.seed, f.error);
                failures.push(f);
            }
        }
    }
    detections.flush().map_err(|e| Error::io(out.join(DETECTIONS_CSV), e))?;
    write_results(&rows, &out.join(RESULTS_CSV))?;

    let tables = rank_tables(&rows, &config.metrics)?;
    write_rank_tables(&tables, out)?;
    let summary = summarise(&rows, failures.len(), &config.metrics, &tables);
    write_file(&out.join(SUMMARY_JSON), serde_json::to_string_pretty(&summary).expect("summary serialises"))?;
    let failures_path = out.join(FAILURES_JSON);
    if failures.is_empty() {
        if failures_path.exists() {
            fs::remove_file(&failures_path).map_err(|e| Error::io(&failures_path, e))?;
        }
    } else {
        write_file(&failures_path, serde_json::to_string_pretty(&failures).expect("failures serialise"))?;
    }
    Ok(RunReport { rows, failures, tables, summary })
}

pub fn write_results(rows: &[ResultRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for (i, rec) in r.deserialize().enumerate() {
        rows.push(rec.map_err(|e: csv::Error| Error::Parse {
            path: path.to_path_buf(),
            line: e.position().map_or(i as u64 + 2, |p| p.line()),
            message: e.to_string(),
        })?);
    }
    Ok(rows)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Detectors-by-streams score matrices, averaged over learners and seeds,
/// ranked per metric. Streams missing a detector's results are left out.
/// Returns no tables when fewer than two detectors or streams remain.
pub fn rank_tables(rows: &[ResultRow], metrics: &[Metric]) -> Result<Vec<RankTable>> {
    let mut detectors: Vec<String> = rows.iter().map(|r| r.detector.clone()).collect();
    detectors.sort();
    detectors.dedup();
    let mut streams: Vec<String> = rows.iter().map(|r| r.stream.clone()).collect();
    streams.sort();
    streams.dedup();
    let complete: Vec<String> = streams
        .into_iter()
        .filter(|s| {
            let ok = detectors.iter().all(|d| rows.iter().any(|r| &r.stream == s && &r.detector == d));
            if !ok {
                log::warn!("stream {s} lacks results for some detector, left out of the ranking");
            }
            ok
        })
        .collect();
    if detectors.len() < 2 || complete.len() < 2 {
        return Ok(Vec::new());
    }
    let mut tables = Vec::new();
    for &m in metrics {
        let scores: Vec<Vec<f64>> = detectors
            .iter()
            .map(|d| {
                complete
                    .iter()
                    .map(|s| {
                        let v: Vec<f64> = rows.iter().filter(|r| &r.detector == d && &r.stream == s).map(|r| r.metric(m)).collect();
                        mean(&v)
                    })
                    .collect()
            })
            .collect();
        tables.push(friedman_nemenyi(m.key(), &detectors, &complete, &scores, m.direction(), 0.05)?);
    }
    Ok(tables)
}

pub fn write_rank_tables(tables: &[RankTable], out: &Path) -> Result<()> {
    let text = if tables.is_empty() {
        "ranking needs at least two detectors and two streams\n".to_string()
    } else {
        tables.iter().map(RankTable::to_text).collect::<Vec<_>>().join("\n")
    };
    write_file(&out.join(NEMENYI_TXT), text)?;
    let mut csv_text = String::from("metric,detector,mean_rank\n");
    for t in tables {
        for (d, r) in t.detectors.iter().zip(&t.mean_ranks) {
            csv_text.push_str(&format!("{},{d},{r}\n", t.metric));
        }
        csv_text.push_str(&format!("{},CD,{}\n", t.metric, t.critical_difference));
    }
    write_file(&out.join(NEMENYI_CSV), csv_text)
}

pub fn summarise(rows: &[ResultRow], failures: usize, metrics: &[Metric], tables: &[RankTable]) -> Summary {
    let means_of = |subset: &[&ResultRow]| -> BTreeMap<String, f64> {
        Metric::ALL
            .iter()
            .map(|&m| (m.key().to_string(), mean(&subset.iter().map(|r| r.metric(m)).collect::<Vec<_>>())))
            .collect()
    };
    let mut by_detector: BTreeMap<&str, Vec<&ResultRow>> = BTreeMap::new();
    let mut by_scheme: BTreeMap<(&str, &str), Vec<&ResultRow>> = BTreeMap::new();
    for r in rows {
        by_detector.entry(&r.detector).or_default().push(r);
        by_scheme.entry((&r.learner, &r.detector)).or_default().push(r);
    }
    let detectors = by_detector
        .iter()
        .map(|(&d, subset)| DetectorSummary {
            detector: d.to_string(),
            runs: subset.len(),
            means: means_of(subset),
            mean_ranks: tables
                .iter()
                .filter(|t| metrics.iter().any(|m| m.key() == t.metric))
                .filter_map(|t| {
                    let i = t.detectors.iter().position(|x| x == d)?;
                    Some((t.metric.clone(), t.mean_ranks[i]))
                })
                .collect(),
        })
        .collect();
    let schemes = by_scheme
        .iter()
        .map(|(&(l, d), subset)| SchemeSummary { learner: l.to_string(), detector: d.to_string(), runs: subset.len(), means: means_of(subset) })
        .collect();
    Summary {
        runs: rows.len(),
        failures,
        detectors,
        schemes,
        critical_difference: tables.iter().map(|t| (t.metric.clone(), t.critical_difference)).collect(),
    }
}

/// Recomputes rank tables from an existing `results.csv`.
pub fn cmd_rank(results: &Path, metrics: &[Metric]) -> Result<Vec<RankTable>> {
    let rows = read_results(results)?;
    rank_tables(&rows, metrics)
}

/// Renders a CURIE snapshot file.
pub fn cmd_inspect(path: &Path) -> Result<String> {
    Ok(Snapshot::read(path)?.render())
}

/// Default output directory for a config: its `output_dir`, else `out`.
pub fn output_dir(config: &ExperimentConfig, flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| config.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out"))
}
