//! Command-line interface.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use mdpd_core::eval::{LearnerKind, SelectionMethod, SweepConfig, SweepReport};
use mdpd_core::learners::EmConfig;
use mdpd_core::one_coin::{generate, OneCoinModel};
use mdpd_core::GroundTruth;

use crate::grid::parse_grid;
use crate::ingest::{read_ground_truth, read_labels, write_ground_truth, write_labels, Dataset, IdMap, ParseOptions};
use crate::output::{mi_csv, scores_csv, sweep_csv, BestRow, DataSummary, Inputs, Manifest, RunConfig};
use crate::parallel::{self, with_threads};
use crate::{Error, Result};

pub const SWEEP_CSV: &str = "sweep.csv";
pub const SCORES_CSV: &str = "scores.csv";
pub const MANIFEST_JSON: &str = "manifest.json";

#[derive(Debug, Parser)]
#[command(name = "mdpd", version, about = "Worker selection and label aggregation for crowdsourced labels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate selection methods and learners over a grid of subset sizes.
    Sweep(SweepArgs),
    /// Write the pairwise mutual-information matrix and worker scores as CSV.
    Mi(MiArgs),
    /// Sample a label file and truth file from the one-coin model.
    GenOnecoin(GenArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Label file: one `item worker label` triple per line.
    #[arg(long)]
    pub labels: PathBuf,
    /// Number of classes C; defaults to the number of distinct labels.
    #[arg(long)]
    pub k: Option<usize>,
    /// Label tokens in class order, comma-separated; fixes the label numbering.
    #[arg(long, value_delimiter = ',')]
    pub classes: Option<Vec<String>>,
}

impl InputArgs {
    fn options(&self) -> ParseOptions {
        ParseOptions { classes: self.classes.clone(), n_classes: self.k }
    }
}

#[derive(Debug, Args)]
pub struct EmArgs {
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,
    /// Stop once the log-likelihood improves by less than this.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Pseudo-count added to every M-step count.
    #[arg(long, default_value_t = 1e-6)]
    pub smoothing: f64,
}

impl EmArgs {
    fn config(&self) -> Result<EmConfig> {
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::Usage("--tol must be a non-negative number".into()));
        }
        if !(self.smoothing.is_finite() && self.smoothing >= 0.0) {
            return Err(Error::Usage("--smoothing must be a non-negative number".into()));
        }
        Ok(EmConfig { max_iters: self.max_iters, tol: self.tol, smoothing: self.smoothing })
    }
}

fn parse_method(s: &str) -> std::result::Result<SelectionMethod, String> {
    SelectionMethod::from_name(s)
        .ok_or_else(|| format!("unknown selection `{s}` (score, submatrix, submatrix-exact, supervised)"))
}

fn parse_learner(s: &str) -> std::result::Result<LearnerKind, String> {
    LearnerKind::from_name(s).ok_or_else(|| format!("unknown learner `{s}` (mv, mv-em)"))
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Truth file: one `item label` pair per line.
    #[arg(long)]
    pub truth: PathBuf,
    /// Selection methods, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "score", value_parser = parse_method)]
    pub select: Vec<SelectionMethod>,
    /// Learners, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "mv", value_parser = parse_learner)]
    pub learner: Vec<LearnerKind>,
    /// Subset sizes: `all`, `log:N`, or a list of `L`, `A-B` and `A-B:S`.
    #[arg(long, default_value = "all", conflicts_with = "num_features")]
    pub l_grid: String,
    /// Evaluate a single subset size.
    #[arg(long)]
    pub num_features: Option<usize>,
    /// Output directory for sweep.csv, scores.csv and manifest.json.
    #[arg(long)]
    pub out: PathBuf,
    /// Add the Bethe goodness-of-fit column.
    #[arg(long)]
    pub report_gof: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub em: EmArgs,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct MiArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Number of classes K.
    #[arg(long)]
    pub k: usize,
    /// Worker abilities, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub abilities: Vec<f64>,
    #[arg(long)]
    pub items: usize,
    /// Probability that a label is dropped.
    #[arg(long, default_value_t = 0.0)]
    pub missing: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Label file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Truth file to write; defaults to the label path with `.truth` appended.
    #[arg(long)]
    pub truth_out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(args) => sweep(&args).map(|_| ()),
        Command::Mi(args) => mi(&args),
        Command::GenOnecoin(args) => gen_onecoin(&args),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn dedup<T: PartialEq + Copy>(values: &[T]) -> Vec<T> {
    let mut out = Vec::new();
    for &v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Runs a sweep and writes its reports into `args.out`.
pub fn sweep(args: &SweepArgs) -> Result<SweepReport> {
    let dataset = read_labels(&args.input.labels, &args.input.options())?;
    let truth = read_ground_truth(&args.truth, &dataset)?;
    let matrix = dataset.matrix();
    let spec = args.num_features.map_or_else(|| args.l_grid.clone(), |l| l.to_string());
    let grid = parse_grid(&spec, matrix.n_workers())?;
    let config = SweepConfig {
        methods: dedup(&args.select),
        learners: dedup(&args.learner),
        grid: grid.clone(),
        em: args.em.config()?,
        report_gof: args.report_gof,
        seed: args.seed,
    };

    let report = with_threads(args.threads, || parallel::run_sweep(matrix, &truth, &config))??;

    fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    write_file(&args.out.join(SWEEP_CSV), &sweep_csv(&report, dataset.workers(), args.report_gof)?)?;
    write_file(&args.out.join(SCORES_CSV), &scores_csv(&report.score_curve, dataset.workers())?)?;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: "sweep",
        inputs: Inputs { labels: args.input.labels.display().to_string(), truth: args.truth.display().to_string() },
        data: DataSummary {
            n_items: matrix.n_items(),
            n_workers: matrix.n_workers(),
            n_classes: matrix.n_classes(),
            n_entries: matrix.len(),
            n_truth: truth.covered(),
        },
        config: RunConfig {
            select: config.methods.iter().map(|m| m.name()).collect(),
            learner: config.learners.iter().map(|l| l.name()).collect(),
            l_grid: grid,
            max_iters: config.em.max_iters,
            tol: config.em.tol,
            smoothing: config.em.smoothing,
            report_gof: config.report_gof,
            seed: config.seed,
            threads: args.threads,
        },
        outputs: vec![SWEEP_CSV.into(), SCORES_CSV.into(), MANIFEST_JSON.into()],
        best: Manifest::best_rows(&report),
    };
    write_file(&args.out.join(MANIFEST_JSON), &manifest.to_json()?)?;

    for BestRow { method, learner, l, error_rate } in &manifest.best {
        println!("{method:>15} {learner:>6}  best L = {l:<4} error = {:.2}%", 100.0 * error_rate);
    }
    Ok(report)
}

fn mi(args: &MiArgs) -> Result<()> {
    let dataset = read_labels(&args.input.labels, &args.input.options())?;
    let stats = with_threads(args.threads, || parallel::mi_matrix(dataset.matrix()))??;
    write_file(&args.out, &mi_csv(&stats, dataset.workers())?)
}

fn gen_onecoin(args: &GenArgs) -> Result<()> {
    let model = OneCoinModel::new(args.k, args.abilities.clone())?;
    let (matrix, truth) = generate(&model, args.items, args.missing, args.seed)?;
    let names = |prefix: &str, n: usize| {
        IdMap::from_names((1..=n).map(|i| format!("{prefix}{i}"))).expect("distinct generated names")
    };
    let items = names("i", matrix.n_items());
    let workers = names("w", matrix.n_workers());
    let labels = names("", args.k);
    // only items that received a label appear in the label file
    let labelled = GroundTruth::new(
        matrix.n_items(),
        args.k,
        truth.iter().filter(|&(item, _)| !matrix.item_labels(item).is_empty()),
    )?;
    let dataset = Dataset::new(matrix, items, workers, labels)?;

    let truth_path = args.truth_out.clone().unwrap_or_else(|| {
        let mut p = args.out.clone().into_os_string();
        p.push(".truth");
        p.into()
    });
    write_file(&args.out, &write_labels(&dataset))?;
    write_file(&truth_path, &write_ground_truth(&dataset, &labelled))
}
