//! Benchmark scenarios: load-factor and key-count sweeps, positive-ratio
//! sweeps, build success rates and probe analysis.
//!
//! Every cell is seeded from the experiment seed and its own parameters, so a
//! sequential run is reproducible regardless of the order cells execute in.
//! Throughput numbers are recorded for local comparison only.

use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{make_config, threshold_from_pct, SecondaryPolicy, TableConfig, TableKind};
use crate::error::{Error, Result};
use crate::hashing::mix64;
use crate::keys::{generate_keys, generate_queries, Expected, KeySet};
use crate::metrics::{Op, ProbeStats};
use crate::table::{build, BuildMode};

pub const DEFAULT_TRIALS: usize = 10;
pub const DEFAULT_MAX_FAILURES: usize = 50;
pub const DEFAULT_SUCCESS_TRIALS: usize = 200;
pub const SUCCESS_TARGET: f64 = 0.99;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    LoadFactorSweep,
    KeyCountSweep,
    PositiveRatioSweep,
    SuccessRate,
    ProbeAnalysis,
}

/// One table variant and its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSetup {
    pub kind: TableKind,
    pub bucket_size: usize,
    /// Iceberg threshold as a percentage of the bucket size.
    #[serde(default)]
    pub threshold_pct: Option<u32>,
    #[serde(default)]
    pub secondary_policy: SecondaryPolicy,
}

impl TableSetup {
    pub fn new(kind: TableKind, bucket_size: usize) -> Self {
        TableSetup {
            kind,
            bucket_size,
            threshold_pct: (kind == TableKind::Iht).then_some(80),
            secondary_policy: SecondaryPolicy::default(),
        }
    }

    pub fn with_threshold_pct(mut self, pct: u32) -> Self {
        self.threshold_pct = Some(pct);
        self
    }

    pub fn with_secondary_policy(mut self, policy: SecondaryPolicy) -> Self {
        self.secondary_policy = policy;
        self
    }

    fn threshold(&self) -> Option<usize> {
        match self.kind {
            TableKind::Iht => Some(threshold_from_pct(self.threshold_pct.unwrap_or(80), self.bucket_size)),
            _ => None,
        }
    }

    fn pct_column(&self) -> Option<u32> {
        match self.kind {
            TableKind::Iht => Some(self.threshold_pct.unwrap_or(80)),
            _ => None,
        }
    }

    pub fn config(&self, n: usize, load_factor: f64, seed: u64, max_chain: Option<usize>) -> Result<TableConfig> {
        let config = make_config(self.kind, n, load_factor, self.bucket_size, self.threshold(), seed)?
            .with_secondary_policy(self.secondary_policy);
        Ok(match max_chain {
            Some(c) if self.kind.is_cuckoo() => config.with_max_chain(c),
            _ => config,
        })
    }

    fn seed_tag(&self) -> u64 {
        let kind = TableKind::ALL.iter().position(|&k| k == self.kind).unwrap() as u64;
        mix64(kind | (self.bucket_size as u64) << 8 | (self.threshold_pct.unwrap_or(0) as u64) << 16)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub scenario: Scenario,
    pub tables: Vec<TableSetup>,
    pub n_keys: Vec<usize>,
    pub load_factors: Vec<f64>,
    #[serde(default = "default_ratios")]
    pub positive_ratios: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_max_failures")]
    pub max_failures: usize,
    #[serde(default = "default_success_trials")]
    pub success_trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_mode")]
    pub mode: BuildMode,
    #[serde(default)]
    pub max_chain: Option<usize>,
}

fn default_ratios() -> Vec<f64> {
    vec![1.0, 0.5, 0.0]
}
fn default_trials() -> usize {
    DEFAULT_TRIALS
}
fn default_max_failures() -> usize {
    DEFAULT_MAX_FAILURES
}
fn default_success_trials() -> usize {
    DEFAULT_SUCCESS_TRIALS
}
fn default_mode() -> BuildMode {
    BuildMode::Sequential
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.tables.is_empty() {
            return bad("no tables requested");
        }
        if self.n_keys.is_empty() || self.n_keys.contains(&0) {
            return bad("key counts must be non-empty and positive");
        }
        if self.load_factors.is_empty() {
            return bad("no load factors requested");
        }
        if let Some(&lf) = self.load_factors.iter().find(|&&lf| !(lf > 0.0 && lf <= 1.0)) {
            return Err(Error::InvalidLoadFactor(lf));
        }
        if let Some(&r) = self.positive_ratios.iter().find(|&&r| !(0.0..=1.0).contains(&r)) {
            return Err(Error::InvalidRatio(r));
        }
        if self.trials == 0 || self.max_failures == 0 {
            return bad("trials and max_failures must be at least 1");
        }
        if self.scenario == Scenario::SuccessRate && self.success_trials == 0 {
            return bad("success_trials must be at least 1");
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: ExperimentSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }
}

/// One row of output. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub kind: TableKind,
    pub b: usize,
    pub threshold_pct: Option<u32>,
    pub n: usize,
    pub realized_lf: f64,
    /// `insert`, `find`, or `build` for success-rate rows.
    pub op: String,
    pub positive_ratio: Option<f64>,
    pub mean_probes: Option<f64>,
    pub ops_per_sec: Option<f64>,
    pub successes: usize,
    pub failures: usize,
    pub seed: u64,
}

pub const CSV_HEADER: &str =
    "kind,b,threshold_pct,n,realized_lf,op,positive_ratio,mean_probes,ops_per_sec,successes,failures,seed";

/// Parameters of one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub setup: TableSetup,
    pub n: usize,
    pub load_factor: f64,
    pub positive_ratios: Vec<f64>,
    pub trials: usize,
    pub max_failures: usize,
    pub seed: u64,
    pub mode: BuildMode,
    pub max_chain: Option<usize>,
}

impl Cell {
    pub fn new(setup: TableSetup, n: usize, load_factor: f64, seed: u64) -> Self {
        Cell {
            setup,
            n,
            load_factor,
            positive_ratios: default_ratios(),
            trials: DEFAULT_TRIALS,
            max_failures: DEFAULT_MAX_FAILURES,
            seed,
            mode: BuildMode::Sequential,
            max_chain: None,
        }
    }

    fn cell_seed(&self) -> u64 {
        mix64(self.seed ^ self.setup.seed_tag() ^ mix64(self.n as u64) ^ (self.load_factor * 1e6).round() as u64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub cell: Cell,
    pub realized_lf: f64,
    pub successes: usize,
    pub failures: usize,
    pub exhausted: bool,
    pub insert: ProbeStats,
    pub insert_time: Duration,
    /// One entry per requested positive ratio, in request order.
    pub finds: Vec<(f64, ProbeStats, Duration)>,
}

fn rate(ops: u64, time: Duration) -> Option<f64> {
    let secs = time.as_secs_f64();
    (ops > 0 && secs > 0.0).then(|| ops as f64 / secs)
}

impl TrialOutcome {
    pub fn insert_mean(&self) -> f64 {
        self.insert.mean()
    }

    pub fn find_mean(&self, ratio: f64) -> Option<f64> {
        self.finds.iter().find(|(r, _, _)| (*r - ratio).abs() < 1e-9).map(|(_, s, _)| s.mean())
    }

    pub fn records(&self) -> Vec<Record> {
        let setup = &self.cell.setup;
        let row = |op: Op, ratio: Option<f64>, stats: &ProbeStats, time: Duration| Record {
            kind: setup.kind,
            b: setup.bucket_size,
            threshold_pct: setup.pct_column(),
            n: self.cell.n,
            realized_lf: self.realized_lf,
            op: op.name().to_string(),
            positive_ratio: ratio,
            mean_probes: (stats.total_ops > 0).then(|| stats.mean()),
            ops_per_sec: rate(stats.total_ops, time),
            successes: self.successes,
            failures: self.failures,
            seed: self.cell.seed,
        };
        let mut out = vec![row(Op::Insert, None, &self.insert, self.insert_time)];
        for (ratio, stats, time) in &self.finds {
            out.push(row(Op::Find, Some(*ratio), stats, *time));
        }
        out
    }
}

/// Builds with fresh hash constants until `trials` builds succeed or
/// `max_failures` builds have failed, then runs each query workload against
/// every successful table. Probe means pool all successful trials.
pub fn run_trial(cell: &Cell) -> Result<TrialOutcome> {
    let base = cell.cell_seed();
    let mut outcome = TrialOutcome {
        cell: cell.clone(),
        realized_lf: 0.0,
        successes: 0,
        failures: 0,
        exhausted: false,
        insert: ProbeStats::new(Op::Insert),
        insert_time: Duration::ZERO,
        finds: cell.positive_ratios.iter().map(|&r| (r, ProbeStats::new(Op::Find), Duration::ZERO)).collect(),
    };
    let mut attempt = 0u64;
    while outcome.successes < cell.trials {
        let keys = generate_keys(mix64(base ^ outcome.successes as u64), cell.n);
        let config =
            cell.setup.config(cell.n, cell.load_factor, mix64(base ^ (attempt << 32) ^ 0xC0FFEE), cell.max_chain)?;
        attempt += 1;
        outcome.realized_lf = cell.n as f64 / config.capacity as f64;
        let start = Instant::now();
        let (table, built) = build(&keys, config, cell.mode)?;
        let elapsed = start.elapsed();
        if !built.success {
            outcome.failures += 1;
            if outcome.failures >= cell.max_failures {
                outcome.exhausted = true;
                break;
            }
            continue;
        }
        outcome.successes += 1;
        outcome.insert.merge(&built.probes);
        outcome.insert_time += elapsed;
        for (i, (ratio, stats, time)) in outcome.finds.iter_mut().enumerate() {
            let queries = generate_queries(&keys, *ratio, cell.n, mix64(base ^ attempt ^ (i as u64) << 48))?;
            let start = Instant::now();
            let mut wrong = 0;
            for q in &queries {
                let got = table.find(q.key, stats);
                let expected = match q.expected {
                    Expected::Present(v) => Some(v),
                    Expected::Absent => None,
                };
                wrong += (got != expected) as usize;
            }
            *time += start.elapsed();
            if wrong > 0 {
                return Err(Error::LookupMismatch(wrong));
            }
        }
    }
    Ok(outcome)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessPoint {
    pub load_factor: f64,
    pub realized_lf: f64,
    pub successes: usize,
    pub trials: usize,
    pub mean_insert_probes: Option<f64>,
}

impl SuccessPoint {
    pub fn fraction(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessRateReport {
    pub setup: TableSetup,
    pub n: usize,
    pub seed: u64,
    pub points: Vec<SuccessPoint>,
}

impl SuccessRateReport {
    /// Highest grid load factor reached before the success fraction first
    /// drops below 99%, scanning upward from the smallest load factor.
    pub fn max_load_factor(&self) -> Option<f64> {
        let mut points: Vec<_> = self.points.iter().collect();
        points.sort_by(|a, b| a.load_factor.total_cmp(&b.load_factor));
        points.into_iter().take_while(|p| p.fraction() >= SUCCESS_TARGET).last().map(|p| p.load_factor)
    }

    pub fn records(&self) -> Vec<Record> {
        self.points
            .iter()
            .map(|p| Record {
                kind: self.setup.kind,
                b: self.setup.bucket_size,
                threshold_pct: self.setup.pct_column(),
                n: self.n,
                realized_lf: p.realized_lf,
                op: "build".to_string(),
                positive_ratio: None,
                mean_probes: p.mean_insert_probes,
                ops_per_sec: None,
                successes: p.successes,
                failures: p.trials - p.successes,
                seed: self.seed,
            })
            .collect()
    }
}

/// For each load factor, builds the same key set `success_trials` times with
/// independent hash constants and counts the successes.
pub fn run_success_rate(
    setup: TableSetup,
    lf_grid: &[f64],
    success_trials: usize,
    n: usize,
    seed: u64,
    max_chain: Option<usize>,
) -> Result<SuccessRateReport> {
    let base = mix64(seed ^ setup.seed_tag() ^ mix64(n as u64));
    let keys = generate_keys(base, n);
    let points = lf_grid
        .iter()
        .map(|&lf| success_point(setup, &keys, lf, success_trials, base, max_chain))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuccessRateReport { setup, n, seed, points })
}

fn success_point(
    setup: TableSetup,
    keys: &KeySet,
    lf: f64,
    trials: usize,
    base: u64,
    max_chain: Option<usize>,
) -> Result<SuccessPoint> {
    let lf_tag = mix64((lf * 1e6).round() as u64);
    let results = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let config = setup.config(keys.len(), lf, mix64(base ^ lf_tag ^ (trial as u64) << 40), max_chain)?;
            let capacity = config.capacity;
            let (_, outcome) = build(keys, config, BuildMode::Sequential)?;
            Ok((capacity, outcome.success, outcome.probes))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut probes = ProbeStats::new(Op::Insert);
    let mut successes = 0;
    for (_, ok, p) in &results {
        if *ok {
            successes += 1;
            probes.merge(p);
        }
    }
    let capacity = results.first().map_or(1, |r| r.0);
    Ok(SuccessPoint {
        load_factor: lf,
        realized_lf: keys.len() as f64 / capacity as f64,
        successes,
        trials,
        mean_insert_probes: (successes > 0).then(|| probes.mean()),
    })
}

/// Walks `lf_grid` in increasing order and returns the highest load factor at
/// which [`run_trial`] completes its successes within the failure budget.
/// Stops at the first exhausted cell.
pub fn find_peak_load(
    setup: TableSetup,
    lf_grid: &[f64],
    n: usize,
    trials: usize,
    max_failures: usize,
    seed: u64,
) -> Result<Option<f64>> {
    let mut grid = lf_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let mut best = None;
    for lf in grid {
        let mut cell = Cell::new(setup, n, lf, seed);
        cell.positive_ratios.clear();
        cell.trials = trials;
        cell.max_failures = max_failures;
        if run_trial(&cell)?.exhausted {
            break;
        }
        best = Some(lf);
    }
    Ok(best)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentResult {
    pub records: Vec<Record>,
    /// Cells that exhausted their failure budget.
    pub exhausted: Vec<String>,
    /// Cells not run because a lower load factor already exhausted.
    pub skipped: Vec<String>,
    pub wall_clock: Duration,
}

impl ExperimentResult {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv(&self.records, out)
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Json<'a> {
            records: &'a [Record],
            exhausted: &'a [String],
            skipped: &'a [String],
            wall_clock_secs: f64,
        }
        serde_json::to_writer_pretty(
            out,
            &Json {
                records: &self.records,
                exhausted: &self.exhausted,
                skipped: &self.skipped,
                wall_clock_secs: self.wall_clock.as_secs_f64(),
            },
        )?;
        Ok(())
    }
}

pub fn write_csv<W: Write>(records: &[Record], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(CSV_HEADER.split(','))?;
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

fn label(setup: &TableSetup, n: usize, lf: f64) -> String {
    match setup.pct_column() {
        Some(t) => format!("{} b={} t={}% n={} lf={}", setup.kind, setup.bucket_size, t, n, lf),
        None => format!("{} b={} n={} lf={}", setup.kind, setup.bucket_size, n, lf),
    }
}

/// Probe means per kind across a load-factor grid, skipping load factors above
/// the first one a kind cannot build.
pub fn run_probe_analysis(
    setups: &[TableSetup],
    lf_grid: &[f64],
    n: usize,
    seed: u64,
    trials: usize,
    max_failures: usize,
) -> Result<ExperimentResult> {
    let spec = ExperimentSpec {
        scenario: Scenario::ProbeAnalysis,
        tables: setups.to_vec(),
        n_keys: vec![n],
        load_factors: lf_grid.to_vec(),
        positive_ratios: default_ratios(),
        trials,
        max_failures,
        success_trials: DEFAULT_SUCCESS_TRIALS,
        seed,
        mode: BuildMode::Sequential,
        max_chain: None,
    };
    run_experiment(&spec)
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let start = Instant::now();
    let mut result = ExperimentResult::default();
    if spec.scenario == Scenario::SuccessRate {
        for setup in &spec.tables {
            for &n in &spec.n_keys {
                let report =
                    run_success_rate(*setup, &spec.load_factors, spec.success_trials, n, spec.seed, spec.max_chain)?;
                result.records.extend(report.records());
            }
        }
        result.wall_clock = start.elapsed();
        return Ok(result);
    }
    let skip_above_failure = spec.scenario == Scenario::ProbeAnalysis;
    let mut lfs = spec.load_factors.clone();
    if skip_above_failure {
        lfs.sort_by(f64::total_cmp);
    }
    for setup in &spec.tables {
        for &n in &spec.n_keys {
            let mut dead = false;
            for &lf in &lfs {
                if dead {
                    result.skipped.push(label(setup, n, lf));
                    continue;
                }
                let cell = Cell {
                    setup: *setup,
                    n,
                    load_factor: lf,
                    positive_ratios: spec.positive_ratios.clone(),
                    trials: spec.trials,
                    max_failures: spec.max_failures,
                    seed: spec.seed,
                    mode: spec.mode,
                    max_chain: spec.max_chain,
                };
                let outcome = run_trial(&cell)?;
                if outcome.exhausted {
                    result.exhausted.push(label(setup, n, lf));
                    dead = skip_above_failure;
                }
                result.records.extend(outcome.records());
            }
        }
    }
    result.wall_clock = start.elapsed();
    Ok(result)
}

/// `a:b:step` inclusive range, or a single value.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.trim().parse::<f64>().map_err(|_| Error::InvalidConfig(format!("bad number `{p}` in `{s}`")));
    match parts.as_slice() {
        [single] => Ok(vec![num(single)?]),
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if step.is_nan() || step <= 0.0 || b < a {
                return Err(Error::InvalidConfig(format!("bad range `{s}`")));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize;
            // round to the step's precision so 0.6 + 3 * 0.01 prints as 0.63
            let scale = 1e9;
            Ok((0..=count).map(|i| ((a + i as f64 * step) * scale).round() / scale).collect())
        }
        _ => Err(Error::InvalidConfig(format!("expected VALUE or START:END:STEP, got `{s}`"))),
    }
}
