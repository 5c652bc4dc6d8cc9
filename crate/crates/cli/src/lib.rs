//! Command-line frontend for `fairineq`.
//!
//! Every command validates its inputs and computes all results before any
//! file is written. With `--out <dir>` the outputs land in `dir` together with
//! a `manifest.json` recording the command, resolved arguments, seed and input
//! digests; each file is written to a temporary name and renamed into place.

use std::collections::{BTreeMap, HashMap};
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use fairineq::analysis::{
    constrained_unfairness_track, default_tau_grid, format_number, nested_attribute_sets,
    share_by_attribute_sets, threshold_sweep, to_rounded_json, write_constraint_csv, write_shares_csv,
    write_sweep_csv,
};
use fairineq::benefit::{apply_scheme, BenefitScheme, PredictionSet};
use fairineq::dataio::{
    load_benefits, load_dataset, load_predictions, load_scores, split, split_with_seed, write_predictions,
    DatasetConfig, EncodedDataset, Standardizer,
};
use fairineq::fairtrain::{parse_factor_grid, parse_grid, ConstraintSpec, FairTrainParams};
use fairineq::fixtures::planted_disparity;
use fairineq::inequality::{
    coefficient_of_variation, decompose, generalized_entropy, gini, mean_log_deviation, theil,
};
use fairineq::model::{fit_logistic, oracle_scores, LogisticParams};
use fairineq::partition::{key_label, GroupPartition};
use fairineq::seed::derive_seed;
use fairineq::verify::run_all;

/// Seed stream for tie-breaking in threshold sweeps.
const TIE_STREAM: u64 = 1;

#[derive(Debug, Parser, Serialize)]
#[command(name = "fairineq", version, about = "Measure and decompose algorithmic unfairness with inequality indices")]
pub struct Cli {
    /// Generalized entropy parameter
    #[arg(long, global = true, default_value_t = 2.0)]
    pub alpha: f64,
    /// Base seed for splits and tie-breaking [default: 0, or the config's seed]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for output files and the run manifest
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Inequality indices of a benefit file with columns `id,benefit`
    Index(IndexArgs),
    /// Unfairness decomposition of a prediction file, written to audit.json
    Audit(AuditArgs),
    /// Ranked-threshold sweep over tau, written to sweep.csv
    Sweep(SweepArgs),
    /// Between-group share for several attribute sets, written to shares.csv
    Shares(SharesArgs),
    /// Train logistic regression and write test-set predictions
    Train(TrainArgs),
    /// Covariance-constrained training across a factor grid, written to constraint.csv
    Constrain(ConstrainArgs),
    /// Run the built-in checks of the theoretical results
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Ge,
    Theil,
    Mld,
    Cv,
    Gini,
    All,
}

#[derive(Debug, Args, Serialize)]
pub struct IndexArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "ge")]
    pub measure: Measure,
}

#[derive(Debug, Args, Serialize)]
pub struct AuditArgs {
    /// Prediction CSV (`id,y_true,y_pred,score,<attributes>...`)
    #[arg(long)]
    pub pred: PathBuf,
    /// Comma-separated grouping attributes; omit for a single group
    #[arg(long, value_delimiter = ',')]
    pub groups: Vec<String>,
    /// Benefit scheme: a builtin name or `name:tp,tn,fp,fn` with `x` for excluded
    #[arg(long, default_value = "individual")]
    pub notion: String,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub pred: PathBuf,
    /// External `id,score` file replacing the prediction file's scores
    #[arg(long, conflicts_with = "oracle")]
    pub scores: Option<PathBuf>,
    /// Use the true labels as scores
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, value_delimiter = ',')]
    pub groups: Vec<String>,
    #[arg(long, default_value = "individual")]
    pub notion: String,
    /// Tau grid as `start:stop:step` [default: 0:1:0.01]
    #[arg(long)]
    pub taus: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct SharesArgs {
    #[arg(long)]
    pub pred: PathBuf,
    /// Attribute sets separated by `;`, attributes within a set by `,`
    /// (`none` is the empty set) [default: every prefix of the file's attributes]
    #[arg(long)]
    pub sets: Option<String>,
    #[arg(long, default_value = "individual")]
    pub notion: String,
}

#[derive(Debug, Args, Serialize)]
pub struct DataArgs {
    /// Dataset config (JSON)
    #[arg(long, required_unless_present = "synthetic", conflicts_with = "synthetic")]
    pub config: Option<PathBuf>,
    /// Generate a planted-disparity dataset with this many rows instead
    #[arg(long)]
    pub synthetic: Option<usize>,
    /// Which train/test split to use
    #[arg(long, default_value_t = 0)]
    pub repeat: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 1e-4)]
    pub l2: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Sensitive attribute to binarize [default: race for synthetic data,
    /// else the config's first sensitive column]
    #[arg(long)]
    pub attribute: Option<String>,
    /// Category mapped to 1 [default: White for synthetic data, else the
    /// config's reference category for the attribute]
    #[arg(long)]
    pub reference: Option<String>,
    #[arg(long, default_value = "1.0:0.0:0.05")]
    pub factors: String,
    #[arg(long, default_value = "individual")]
    pub notion: String,
    #[arg(long, default_value_t = 1e-4)]
    pub l2: f64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: fairineq::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 usage, 3 data, 4 numerical or feasibility.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core { source, .. } if source.is_numerical() => 4,
            CliError::Core { .. } | CliError::Io { .. } => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> CliResult<T>;
}

impl<T> Context<T> for fairineq::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> CliResult<T> {
        self.map_err(|source| CliError::Core {
            context: what(),
            source,
        })
    }
}

fn scheme(text: &str) -> CliResult<BenefitScheme> {
    text.parse().map_err(|e: fairineq::Error| CliError::Usage(e.to_string()))
}

fn grid(text: &str, parse: fn(&str) -> fairineq::Result<Vec<f64>>) -> CliResult<Vec<f64>> {
    parse(text).map_err(|e| CliError::Usage(e.to_string()))
}

/// Files produced by a command, committed together after all computation.
struct Outputs {
    files: Vec<(String, Vec<u8>)>,
    inputs: Vec<PathBuf>,
    seed: u64,
}

impl Outputs {
    fn new(seed: u64) -> Self {
        Self {
            files: Vec::new(),
            inputs: Vec::new(),
            seed,
        }
    }

    fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    fn add_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let text = to_rounded_json(value).context(|| format!("serializing {name}"))?;
        self.add(name, text.into_bytes());
        Ok(())
    }

    fn input(&mut self, path: &Path) {
        self.inputs.push(path.to_path_buf());
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a Command,
    alpha: f64,
    seed: u64,
    inputs: BTreeMap<String, String>,
    outputs: Vec<&'a str>,
}

fn digest(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

fn write_atomically(dir: &Path, name: &str, bytes: &[u8]) -> CliResult<()> {
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    let io = |source| CliError::Io {
        path: target.clone(),
        source,
    };
    fs::write(&tmp, bytes).map_err(io)?;
    fs::rename(&tmp, &target).map_err(io)
}

fn commit(cli: &Cli, outputs: Outputs) -> CliResult<()> {
    let Some(dir) = &cli.out else {
        return Ok(());
    };
    let mut inputs = BTreeMap::new();
    for path in &outputs.inputs {
        inputs.insert(path.display().to_string(), digest(path)?);
    }
    let manifest = RunManifest {
        tool: "fairineq",
        version: env!("CARGO_PKG_VERSION"),
        command: &cli.command,
        alpha: cli.alpha,
        seed: outputs.seed,
        inputs,
        outputs: outputs.files.iter().map(|(n, _)| n.as_str()).collect(),
    };
    let manifest = to_rounded_json(&manifest).context(|| "serializing manifest".into())?;
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    for (name, bytes) in &outputs.files {
        write_atomically(dir, name, bytes)?;
    }
    write_atomically(dir, "manifest.json", manifest.as_bytes())
}

fn csv_bytes<F>(write: F) -> CliResult<Vec<u8>>
where
    F: FnOnce(&mut Vec<u8>) -> fairineq::Result<()>,
{
    let mut buf = Vec::new();
    write(&mut buf).context(|| "writing csv".into())?;
    Ok(buf)
}

fn read_predictions(path: &Path) -> CliResult<PredictionSet> {
    load_predictions(path).context(|| format!("reading {}", path.display()))
}

fn partition_for(preds: &PredictionSet, groups: &[String]) -> CliResult<GroupPartition> {
    if groups.is_empty() {
        Ok(GroupPartition::single(preds.ids()))
    } else {
        GroupPartition::from_attributes(preds, groups).context(|| "grouping".into())
    }
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<i32> {
    if !cli.alpha.is_finite() {
        return Err(CliError::Usage(format!("alpha {} is not finite", cli.alpha)));
    }
    match &cli.command {
        Command::Index(a) => cmd_index(cli, a),
        Command::Audit(a) => cmd_audit(cli, a),
        Command::Sweep(a) => cmd_sweep(cli, a),
        Command::Shares(a) => cmd_shares(cli, a),
        Command::Train(a) => cmd_train(cli, a),
        Command::Constrain(a) => cmd_constrain(cli, a),
        Command::Verify => cmd_verify(cli),
    }
}

#[derive(Serialize)]
struct IndexReport {
    alpha: f64,
    n: usize,
    mean: f64,
    values: BTreeMap<&'static str, Option<f64>>,
}

fn cmd_index(cli: &Cli, a: &IndexArgs) -> CliResult<i32> {
    let b = load_benefits(&a.input).context(|| format!("reading {}", a.input.display()))?;
    let measures: Vec<(&'static str, Measure)> = [
        ("generalized_entropy", Measure::Ge),
        ("theil", Measure::Theil),
        ("mean_log_deviation", Measure::Mld),
        ("coefficient_of_variation", Measure::Cv),
        ("gini", Measure::Gini),
    ]
    .into_iter()
    .filter(|(_, m)| a.measure == Measure::All || a.measure == *m)
    .collect();
    let mut values = BTreeMap::new();
    for (name, m) in &measures {
        let v = match m {
            Measure::Ge => generalized_entropy(&b, cli.alpha),
            Measure::Theil => theil(&b),
            Measure::Mld => mean_log_deviation(&b),
            Measure::Cv => coefficient_of_variation(&b),
            _ => gini(&b),
        };
        let v = match v {
            Ok(v) => Some(v),
            // with several measures, one undefined value should not hide the rest
            Err(_) if measures.len() > 1 => None,
            Err(e) => return Err(e).context(|| format!("computing {name}")),
        };
        values.insert(*name, v);
    }
    if measures.len() == 1 {
        println!("{}", values.values().next().copied().flatten().map_or_else(String::new, format_number));
    } else {
        for (name, v) in &values {
            println!("{name} {}", v.map_or_else(|| "undefined".to_string(), format_number));
        }
    }
    let mut out = Outputs::new(cli.seed.unwrap_or(0));
    out.input(&a.input);
    out.add_json(
        "index.json",
        &IndexReport {
            alpha: cli.alpha,
            n: b.len(),
            mean: b.mean(),
            values,
        },
    )?;
    commit(cli, out)?;
    Ok(0)
}

#[derive(Serialize)]
struct GroupRow {
    group: String,
    size: usize,
    mean: f64,
    between: f64,
    within: f64,
}

#[derive(Serialize)]
struct AuditReport {
    alpha: f64,
    notion: String,
    groups: Vec<String>,
    n: usize,
    excluded: usize,
    mean: f64,
    overall: f64,
    between: f64,
    within: f64,
    between_share: Option<f64>,
    group_terms: Vec<GroupRow>,
}

fn cmd_audit(cli: &Cli, a: &AuditArgs) -> CliResult<i32> {
    let scheme = scheme(&a.notion)?;
    let preds = read_predictions(&a.pred)?;
    let partition = partition_for(&preds, &a.groups)?;
    let b = apply_scheme(&preds, &scheme).context(|| format!("applying scheme `{scheme}`"))?;
    let d = decompose(&b, &partition.restrict(b.ids().iter().map(String::as_str)), cli.alpha)
        .context(|| "decomposing".into())?;
    let report = AuditReport {
        alpha: cli.alpha,
        notion: scheme.to_string(),
        groups: a.groups.clone(),
        n: b.len(),
        excluded: preds.len() - b.len(),
        mean: b.mean(),
        overall: d.overall,
        between: d.between,
        within: d.within,
        between_share: d.between_share().ok(),
        group_terms: d
            .group_terms
            .iter()
            .map(|t| GroupRow {
                group: key_label(&t.key),
                size: t.size,
                mean: t.mean,
                between: t.between,
                within: t.within,
            })
            .collect(),
    };
    println!("overall {}", format_number(report.overall));
    println!("between {}", format_number(report.between));
    println!("within {}", format_number(report.within));
    if let Some(s) = report.between_share {
        println!("between_share {}", format_number(s));
    }
    for g in &report.group_terms {
        println!(
            "group {} size {} mean {} within {}",
            g.group,
            g.size,
            format_number(g.mean),
            format_number(g.within)
        );
    }
    let mut out = Outputs::new(cli.seed.unwrap_or(0));
    out.input(&a.pred);
    out.add_json("audit.json", &report)?;
    commit(cli, out)?;
    Ok(0)
}

fn print_or_summarize(cli: &Cli, csv: &[u8], rows: usize, name: &str) {
    match &cli.out {
        Some(dir) => println!("wrote {rows} rows to {}", dir.join(name).display()),
        None => print!("{}", String::from_utf8_lossy(csv)),
    }
}

fn cmd_sweep(cli: &Cli, a: &SweepArgs) -> CliResult<i32> {
    let scheme = scheme(&a.notion)?;
    let taus = match &a.taus {
        Some(t) => grid(t, parse_grid)?,
        None => default_tau_grid(),
    };
    let seed = cli.seed.unwrap_or(0);
    let mut out = Outputs::new(seed);
    let mut preds = read_predictions(&a.pred)?;
    out.input(&a.pred);
    if let Some(path) = &a.scores {
        let scores = load_scores(path).context(|| format!("reading {}", path.display()))?;
        preds = preds.with_scores(&scores).context(|| "joining scores".into())?;
        out.input(path);
    } else if a.oracle {
        let ids = preds.ids();
        let scores: HashMap<String, f64> = ids.into_iter().zip(oracle_scores(&preds.labels())).collect();
        preds = preds.with_scores(&scores).context(|| "oracle scores".into())?;
    }
    let partition = partition_for(&preds, &a.groups)?;
    let rows = threshold_sweep(&preds, &partition, cli.alpha, &taus, &scheme, derive_seed(seed, TIE_STREAM))
        .context(|| "sweeping".into())?;
    let csv = csv_bytes(|w| write_sweep_csv(&rows, w))?;
    print_or_summarize(cli, &csv, rows.len(), "sweep.csv");
    out.add("sweep.csv", csv);
    out.add_json("sweep.json", &rows)?;
    commit(cli, out)?;
    Ok(0)
}

fn parse_sets(text: &str) -> Vec<Vec<String>> {
    text.split(';')
        .map(|set| {
            set.split(',')
                .map(str::trim)
                .filter(|a| !a.is_empty() && *a != "none")
                .map(String::from)
                .collect()
        })
        .collect()
}

fn cmd_shares(cli: &Cli, a: &SharesArgs) -> CliResult<i32> {
    let scheme = scheme(&a.notion)?;
    let preds = read_predictions(&a.pred)?;
    let sets = match &a.sets {
        Some(text) => parse_sets(text),
        None => nested_attribute_sets(preds.attribute_names()),
    };
    let rows = share_by_attribute_sets(&preds, &sets, cli.alpha, &scheme).context(|| "computing shares".into())?;
    let csv = csv_bytes(|w| write_shares_csv(&rows, w))?;
    print_or_summarize(cli, &csv, rows.len(), "shares.csv");
    let mut out = Outputs::new(cli.seed.unwrap_or(0));
    out.input(&a.pred);
    out.add("shares.csv", csv);
    out.add_json("shares.json", &rows)?;
    commit(cli, out)?;
    Ok(0)
}

/// Standardized train/test split plus the config (when one was used).
struct Prepared {
    train: EncodedDataset,
    test: EncodedDataset,
    config: Option<DatasetConfig>,
    seed: u64,
}

fn prepare(cli: &Cli, d: &DataArgs, out: &mut Outputs) -> CliResult<Prepared> {
    let (train, test, config, seed) = match (&d.config, d.synthetic) {
        (Some(path), _) => {
            let mut cfg = DatasetConfig::load(path).context(|| format!("reading {}", path.display()))?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            let (ds, report) = load_dataset(&cfg).context(|| format!("loading {}", cfg.path.display()))?;
            eprintln!(
                "loaded {} of {} rows ({} dropped for missing values, {} filtered), {} features",
                report.rows, report.rows_read, report.dropped_missing, report.dropped_filtered, report.features
            );
            let (train, test) = split(&ds, &cfg, d.repeat).context(|| "splitting".into())?;
            out.input(path);
            out.input(&cfg.path);
            let seed = cfg.seed;
            (train, test, Some(cfg), seed)
        }
        (None, Some(n)) => {
            let seed = cli.seed.unwrap_or(0);
            let ds = planted_disparity(n, seed);
            let (train, test) = split_with_seed(&ds, 0.7, derive_seed(seed, d.repeat as u64));
            (train, test, None, seed)
        }
        (None, None) => return Err(CliError::Usage("one of --config or --synthetic is required".into())),
    };
    let standardizer = Standardizer::fit(&train);
    out.seed = seed;
    Ok(Prepared {
        train: standardizer.apply(&train),
        test: standardizer.apply(&test),
        config,
        seed,
    })
}

#[derive(Serialize)]
struct ModelReport<'a> {
    feature_names: &'a [String],
    weights: &'a [f64],
    intercept: f64,
    iterations: usize,
    converged: bool,
    train_rows: usize,
    test_rows: usize,
    train_accuracy: f64,
    test_accuracy: f64,
    seed: u64,
}

fn accuracy_of(pred: &[u8], labels: &[u8]) -> f64 {
    let hits = pred.iter().zip(labels).filter(|(a, b)| a == b).count();
    hits as f64 / labels.len().max(1) as f64
}

fn cmd_train(cli: &Cli, a: &TrainArgs) -> CliResult<i32> {
    let mut out = Outputs::new(0);
    let data = prepare(cli, &a.data, &mut out)?;
    let params = LogisticParams {
        l2: a.l2,
        max_iters: a.max_iters,
        ..LogisticParams::default()
    };
    let fit = fit_logistic(&data.train, &params).context(|| "training".into())?;
    let train_pred = fit.model.predictions(&data.train).context(|| "predicting".into())?;
    let scores = fit.model.scores(&data.test).context(|| "scoring".into())?;
    let preds = data.test.to_predictions(&scores).context(|| "building predictions".into())?;
    let report = ModelReport {
        feature_names: &data.train.feature_names,
        weights: &fit.model.weights,
        intercept: fit.model.intercept,
        iterations: fit.iterations,
        converged: fit.converged,
        train_rows: data.train.len(),
        test_rows: data.test.len(),
        train_accuracy: accuracy_of(&train_pred, &data.train.labels),
        test_accuracy: accuracy_of(&preds.predictions().context(|| "predicting".into())?, &data.test.labels),
        seed: data.seed,
    };
    println!(
        "trained on {} rows in {} iterations; accuracy train {} test {}",
        report.train_rows,
        report.iterations,
        format_number(report.train_accuracy),
        format_number(report.test_accuracy)
    );
    let mut csv = Vec::new();
    write_predictions(&preds, &mut csv).context(|| "writing predictions".into())?;
    out.add("predictions.csv", csv);
    out.add_json("model.json", &report)?;
    commit(cli, out)?;
    Ok(0)
}

fn cmd_constrain(cli: &Cli, a: &ConstrainArgs) -> CliResult<i32> {
    let scheme = scheme(&a.notion)?;
    let factors = grid(&a.factors, parse_factor_grid)?;
    let mut out = Outputs::new(0);
    let data = prepare(cli, &a.data, &mut out)?;
    let (attribute, reference) = match &data.config {
        None => (
            a.attribute.clone().unwrap_or_else(|| "race".into()),
            a.reference.clone().unwrap_or_else(|| "White".into()),
        ),
        Some(cfg) => {
            let attribute = a
                .attribute
                .clone()
                .or_else(|| cfg.sensitive_columns.first().cloned())
                .ok_or_else(|| CliError::Usage("--attribute is required: the config has no sensitive columns".into()))?;
            let reference = a
                .reference
                .clone()
                .or_else(|| cfg.reference_categories.get(&attribute).cloned())
                .ok_or_else(|| CliError::Usage(format!("--reference is required for attribute `{attribute}`")))?;
            (attribute, reference)
        }
    };
    let spec = ConstraintSpec::new(&attribute, &reference, factors).map_err(|e| CliError::Usage(e.to_string()))?;
    let params = FairTrainParams {
        logistic: LogisticParams {
            l2: a.l2,
            ..LogisticParams::default()
        },
        ..FairTrainParams::default()
    };
    let rows = constrained_unfairness_track(&data.train, &data.test, &spec, cli.alpha, &scheme, &params)
        .context(|| "constrained training".into())?;
    let csv = csv_bytes(|w| write_constraint_csv(&rows, w))?;
    print_or_summarize(cli, &csv, rows.len(), "constraint.csv");
    out.add("constraint.csv", csv);
    out.add_json("constraint.json", &rows)?;
    commit(cli, out)?;
    Ok(0)
}

fn cmd_verify(cli: &Cli) -> CliResult<i32> {
    let results = run_all();
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:width$}  {}", r.name, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    let mut out = Outputs::new(cli.seed.unwrap_or(0));
    out.add_json("verify.json", &results)?;
    commit(cli, out)?;
    Ok(if failed == 0 { 0 } else { 4 })
}
