use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bucket_hash::config::{SecondaryPolicy, TableKind};
use bucket_hash::experiments::{
    parse_grid, run_experiment, run_success_rate, ExperimentResult, ExperimentSpec, Scenario, TableSetup,
};
use bucket_hash::keys::generate_keys;
use bucket_hash::metrics::{predict_sectors, Op, SectorModel};
use bucket_hash::oracle::{check_admissibility, check_membership};
use bucket_hash::table::{build, BuildMode};
use bucket_hash::Error;

#[derive(Parser)]
#[command(name = "bucket-hash", version, about = "Bucketed hash table probe-count benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and query across a grid of key counts and load factors.
    Bench(BenchArgs),
    /// Mean probes per operation across a load-factor grid.
    Probes(CommonArgs),
    /// Fraction of builds that succeed with independent hash constants.
    SuccessRate(CommonArgs),
    /// Sector-traffic estimate from probe counts.
    Sectors(SectorArgs),
    /// Build one table and check every lookup against the key set.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    #[value(name = "1cht")]
    OneCht,
    Bcht,
    Bp2ht,
    Iht,
}

impl From<TableArg> for TableKind {
    fn from(t: TableArg) -> Self {
        match t {
            TableArg::OneCht => TableKind::OneCht,
            TableArg::Bcht => TableKind::Bcht,
            TableArg::Bp2ht => TableKind::Bp2ht,
            TableArg::Iht => TableKind::Iht,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Seq,
    Par,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpArg {
    Insert,
    Find,
}

fn parse_ratio(s: &str) -> Result<u32, String> {
    match s {
        "100" | "50" | "0" => Ok(s.parse().unwrap()),
        _ => Err(format!("positive ratio must be one of 100, 50, 0 (got {s})")),
    }
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Table variant; repeat for several.
    #[arg(long = "table", value_enum, default_values = ["bcht"])]
    tables: Vec<TableArg>,
    /// Slots per bucket (1cht always uses 1).
    #[arg(long, default_value_t = 16)]
    bucket_size: usize,
    /// Iceberg threshold as a percentage of the bucket size.
    #[arg(long, default_value_t = 80, value_parser = clap::value_parser!(u32).range(1..=100))]
    threshold_pct: u32,
    /// Where iceberg inserts go once the primary bucket reaches the threshold:
    /// both-full, any-full or secondary-only.
    #[arg(long, default_value = "both-full")]
    secondary_policy: SecondaryPolicy,
    /// Number of keys; repeat for a key-count sweep.
    #[arg(long = "num-keys", default_values_t = [1_000_000usize])]
    num_keys: Vec<usize>,
    /// Load factor or START:END:STEP; repeatable.
    #[arg(long = "load-factor", default_values = ["0.8"])]
    load_factors: Vec<String>,
    /// Percentage of queries that hit; repeatable.
    #[arg(long = "positive-ratio", value_parser = parse_ratio, default_values = ["100", "50", "0"])]
    positive_ratios: Vec<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Successful builds averaged per cell.
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Failed builds tolerated per cell.
    #[arg(long, default_value_t = 50)]
    max_failures: usize,
    /// Builds per load factor for success-rate runs.
    #[arg(long, default_value_t = 200)]
    success_trials: usize,
    /// Override the eviction limit of cuckoo tables.
    #[arg(long)]
    max_chain: Option<usize>,
    #[arg(long, value_enum, default_value = "seq")]
    mode: ModeArg,
    #[arg(long, default_value_t = 8)]
    workers: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Read the whole experiment from a JSON file instead of flags.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct SectorArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Compute from this mean probe count instead of measuring.
    #[arg(long)]
    probes: Option<f64>,
    #[arg(long, value_enum, default_value = "find")]
    op: OpArg,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Absent keys to query.
    #[arg(long, default_value_t = 100_000)]
    negatives: usize,
    /// Write the raw slot array here.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Write the key set here as little-endian u32.
    #[arg(long)]
    save_keys: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Csv(_) | Error::LookupMismatch(_) | Error::BudgetExhausted { .. } => {
                Failure::Run(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl CommonArgs {
    fn setups(&self) -> Vec<TableSetup> {
        self.tables
            .iter()
            .map(|&t| {
                let kind = TableKind::from(t);
                let b = if kind == TableKind::OneCht { 1 } else { self.bucket_size };
                let setup = TableSetup::new(kind, b);
                if kind == TableKind::Iht {
                    setup.with_threshold_pct(self.threshold_pct).with_secondary_policy(self.secondary_policy)
                } else {
                    setup
                }
            })
            .collect()
    }

    fn load_factors(&self) -> Result<Vec<f64>, Error> {
        let mut out = Vec::new();
        for s in &self.load_factors {
            out.extend(parse_grid(s)?);
        }
        Ok(out)
    }

    fn mode(&self) -> BuildMode {
        match self.mode {
            ModeArg::Seq => BuildMode::Sequential,
            ModeArg::Par => BuildMode::Parallel(self.workers.max(1)),
        }
    }

    fn spec(&self, scenario: Scenario) -> Result<ExperimentSpec, Error> {
        let spec = ExperimentSpec {
            scenario,
            tables: self.setups(),
            n_keys: self.num_keys.clone(),
            load_factors: self.load_factors()?,
            positive_ratios: self.positive_ratios.iter().map(|&p| p as f64 / 100.0).collect(),
            trials: self.trials,
            max_failures: self.max_failures,
            success_trials: self.success_trials,
            seed: self.seed,
            mode: self.mode(),
            max_chain: self.max_chain,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn output(&self) -> Result<Box<dyn Write>, Failure> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn emit(&self, result: &ExperimentResult) -> Result<(), Failure> {
        let mut out = self.output()?;
        match self.format {
            Format::Csv => result.write_csv(&mut out)?,
            Format::Json => result.write_json(&mut out)?,
        }
        out.flush()?;
        for cell in &result.exhausted {
            eprintln!("budget exhausted: {cell}");
        }
        for cell in &result.skipped {
            eprintln!("skipped: {cell}");
        }
        Ok(())
    }
}

fn finish(result: &ExperimentResult) -> u8 {
    if result.exhausted.is_empty() {
        0
    } else {
        1
    }
}

fn bench(args: &BenchArgs) -> Result<u8, Failure> {
    let spec = match &args.spec {
        Some(path) => ExperimentSpec::from_json(&std::fs::read_to_string(path)?)?,
        None => args.common.spec(Scenario::LoadFactorSweep)?,
    };
    let result = run_experiment(&spec)?;
    args.common.emit(&result)?;
    Ok(finish(&result))
}

fn probes(args: &CommonArgs) -> Result<u8, Failure> {
    let result = run_experiment(&args.spec(Scenario::ProbeAnalysis)?)?;
    args.emit(&result)?;
    Ok(finish(&result))
}

fn success_rate(args: &CommonArgs) -> Result<u8, Failure> {
    let spec = args.spec(Scenario::SuccessRate)?;
    let mut result = ExperimentResult::default();
    let start = std::time::Instant::now();
    for setup in &spec.tables {
        for &n in &spec.n_keys {
            let report =
                run_success_rate(*setup, &spec.load_factors, spec.success_trials, n, spec.seed, spec.max_chain)?;
            match report.max_load_factor() {
                Some(lf) => {
                    eprintln!("{} b={} n={}: max load factor at 99% success = {lf}", setup.kind, setup.bucket_size, n)
                }
                None => eprintln!("{} b={} n={}: no grid point reaches 99% success", setup.kind, setup.bucket_size, n),
            }
            result.records.extend(report.records());
        }
    }
    result.wall_clock = start.elapsed();
    args.emit(&result)?;
    Ok(0)
}

fn sectors(args: &SectorArgs) -> Result<u8, Failure> {
    let model = SectorModel::default();
    let op = match args.op {
        OpArg::Insert => Op::Insert,
        OpArg::Find => Op::Find,
    };
    let mut out = args.common.output()?;
    if let Some(p) = args.probes {
        if p.is_nan() || p < 1.0 {
            return Err(Failure::Usage(format!("--probes must be at least 1, got {p}")));
        }
        writeln!(out, "kind,b,op,mean_probes,sectors_per_key")?;
        for setup in args.common.setups() {
            let s = predict_sectors(&model, setup.kind, setup.bucket_size, p, op);
            writeln!(out, "{},{},{},{},{}", setup.kind, setup.bucket_size, op.name(), p, s)?;
        }
        out.flush()?;
        return Ok(0);
    }
    let result = run_experiment(&args.common.spec(Scenario::ProbeAnalysis)?)?;
    writeln!(out, "kind,b,threshold_pct,n,realized_lf,op,positive_ratio,mean_probes,sectors_per_key")?;
    for r in &result.records {
        let Some(mean) = r.mean_probes else { continue };
        let rec_op = if r.op == "insert" { Op::Insert } else { Op::Find };
        let s = predict_sectors(&model, r.kind, r.b, mean, rec_op);
        let opt = |v: Option<String>| v.unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.kind,
            r.b,
            opt(r.threshold_pct.map(|t| t.to_string())),
            r.n,
            r.realized_lf,
            r.op,
            opt(r.positive_ratio.map(|p| p.to_string())),
            mean,
            s
        )?;
    }
    out.flush()?;
    Ok(finish(&result))
}

fn validate(args: &ValidateArgs) -> Result<u8, Failure> {
    let common = &args.common;
    let spec = common.spec(Scenario::LoadFactorSweep)?;
    let setup = spec.tables[0];
    let n = spec.n_keys[0];
    let lf = spec.load_factors[0];
    let keys = generate_keys(common.seed, n);
    if let Some(path) = &args.save_keys {
        keys.save(path)?;
    }
    let mut clean = true;
    for attempt in 0..common.max_failures as u64 {
        let config = setup.config(n, lf, common.seed.wrapping_add(attempt), common.max_chain)?;
        let (table, outcome) = build(&keys, config, spec.mode)?;
        if !outcome.success {
            continue;
        }
        let report = check_membership(&table, &keys, args.negatives, common.seed);
        let inadmissible = check_admissibility(&table);
        let mut out = common.output()?;
        writeln!(
            out,
            "kind={} b={} n={} load_factor={:.4} attempts={}",
            setup.kind,
            setup.bucket_size,
            n,
            table.load_factor().value(),
            attempt + 1
        )?;
        writeln!(out, "false_negatives={}", report.false_negatives)?;
        writeln!(out, "wrong_values={}", report.wrong_values)?;
        writeln!(out, "false_positives={}", report.false_positives)?;
        writeln!(out, "inadmissible={inadmissible}")?;
        out.flush()?;
        if let Some(path) = &args.dump {
            table.dump(path)?;
        }
        clean &= report.is_clean() && inadmissible == 0;
        return Ok(if clean { 0 } else { 1 });
    }
    eprintln!("no successful build in {} attempts", common.max_failures);
    Ok(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bench(a) => bench(a),
        Command::Probes(a) => probes(a),
        Command::SuccessRate(a) => success_rate(a),
        Command::Sectors(a) => sectors(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
