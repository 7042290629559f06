use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sag_dbscan::{
    generate_blobs, generate_shape_t, load_csv, plot_scatter, read_result, ring_centers,
    run_sag_dbscan, write_csv, write_result, Dataset, Error, Metric, MetricReport,
    PipelineOptions, PipelineReport, RegressionMode,
};

#[derive(Parser)]
#[command(name = "sag-dbscan", version, about = "Self-adaptive grey DBSCAN clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a CSV dataset and write the assignments.
    Run(RunArgs),
    /// Cluster a labeled dataset and score it against the labels.
    Bench(BenchArgs),
    /// Write a synthetic labeled dataset.
    #[command(subcommand)]
    Generate(GenerateCommand),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    input: PathBuf,
    /// 0-based column holding ground-truth labels.
    #[arg(long = "labels-col")]
    labels_col: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value = "euclidean", value_parser = ["euclidean", "grey"])]
    metric: String,
    /// Min-max scale every feature first.
    #[arg(long)]
    normalize: bool,
    #[arg(long, default_value = "ols", value_parser = ["ols", "l1"])]
    regression: String,
    /// Assignments CSV; defaults to `<input>.clusters.csv`.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long = "metrics-out")]
    metrics_out: Option<PathBuf>,
    /// SVG scatter plot (2-D data only).
    #[arg(long)]
    plot: Option<PathBuf>,
    #[arg(long = "dump-grey")]
    dump_grey: Option<PathBuf>,
    #[arg(long = "dump-rho")]
    dump_rho: Option<PathBuf>,
    #[arg(long = "dump-residuals")]
    dump_residuals: Option<PathBuf>,
    #[arg(long = "dump-dense")]
    dump_dense: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    run: RunArgs,
    /// `metric,target,tolerance` CSV to check the scores against.
    #[arg(long)]
    expected: Option<PathBuf>,
    /// Score this assignments file instead of running the pipeline.
    #[arg(long)]
    predictions: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Three clusters, one of them T-shaped.
    Shapet {
        #[arg(long, default_value_t = 10_000)]
        points: usize,
        #[arg(long = "noise-fraction", default_value_t = 0.0)]
        noise_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Gaussian blobs around centers spaced on a circle.
    Blobs {
        /// Number of centers.
        #[arg(long)]
        centers: usize,
        #[arg(long = "points-per-center", default_value_t = 100)]
        points_per_center: usize,
        #[arg(long, default_value_t = 1.0)]
        spread: f64,
        /// Radius of the circle the centers sit on.
        #[arg(long, default_value_t = 20.0)]
        radius: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
}

/// Failure split by exit code: 2 for usage/config problems, 1 for runtime.
enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::NonFiniteValue { .. }
            | Error::RaggedRows { .. }
            | Error::EmptyDataset(_)
            | Error::MissingLabels(_)
            | Error::InvalidSpread(_)
            | Error::TooFewPoints { .. }
            | Error::InvalidParams(_)
            | Error::Csv(_) => Failure::Config(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Generate(g) => cmd_generate(g),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn options(args: &RunArgs) -> Result<PipelineOptions, Failure> {
    Ok(PipelineOptions {
        k: args.k,
        m: args.m,
        metric: args.metric.parse::<Metric>()?,
        normalize: args.normalize,
        regression: args.regression.parse::<RegressionMode>()?,
    })
}

fn load(args: &RunArgs) -> Result<Dataset, Failure> {
    if !args.input.exists() {
        return Err(Failure::Config(format!(
            "{}: file not found",
            args.input.display()
        )));
    }
    Ok(load_csv(&args.input, args.labels_col)?)
}

fn default_output(input: &Path) -> PathBuf {
    input.with_extension("clusters.csv")
}

fn execute(args: &RunArgs, data: &Dataset) -> Result<PipelineReport, Failure> {
    let report = run_sag_dbscan(data, &options(args)?)?;
    let output = args.output.clone().unwrap_or_else(|| default_output(&args.input));
    write_result(&report.clustering, &output)?;
    if let Some(p) = &args.plot {
        plot_scatter(data, &report.clustering, p)?;
    }
    if let Some(p) = &args.dump_grey {
        report.grey.write_csv(p)?;
    }
    if let Some(p) = &args.dump_rho {
        report.density.write_csv(p)?;
    }
    if let Some(p) = &args.dump_residuals {
        report.split.write_residuals_csv(p)?;
    }
    if let Some(p) = &args.dump_dense {
        report.split.write_mask_csv(p)?;
    }

    let t = &report.timings;
    println!("clusters: {}", report.cluster_count);
    println!("dense subset: {} of {}", report.dense_size, data.n());
    println!("k: {}", report.params.k);
    println!("m: {}", report.params.m);
    println!("eps: {}", report.dbscan.eps);
    println!("split: {}", report.split.p_star);
    println!(
        "timings (ms): grey {:.1}, density {:.1}, dense subset {:.1}, dbscan {:.1}, assignment {:.1}",
        ms(t.grey),
        ms(t.density),
        ms(t.dense_subset),
        ms(t.dbscan),
        ms(t.assignment)
    );
    println!("assignments: {}", output.display());
    Ok(report)
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn cmd_run(args: &RunArgs) -> CmdResult {
    let data = load(args)?;
    let report = execute(args, &data)?;
    if let (Some(path), Some(truth)) = (&args.metrics_out, data.labels()) {
        let metrics = MetricReport::compute(report.clustering.assignments(), truth)?;
        write_metrics(&metrics, path)?;
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> CmdResult {
    let data = load(&args.run)?;
    let truth = data
        .labels()
        .ok_or_else(|| Error::MissingLabels(data.name().to_string()))?;
    let predicted = match &args.predictions {
        Some(path) => {
            let c = read_result(path)?;
            if c.len() != data.n() {
                return Err(Error::LengthMismatch {
                    left: data.n(),
                    right: c.len(),
                }
                .into());
            }
            c
        }
        None => execute(&args.run, &data)?.clustering,
    };
    let metrics = MetricReport::compute(predicted.assignments(), truth)?;
    println!("{:<10} {:>8}", "metric", "value");
    for (name, value) in metrics.rows() {
        if name == "clusters" {
            println!("{name:<10} {:>8}", metrics.clusters);
        } else {
            println!("{name:<10} {value:>8.4}");
        }
    }
    if let Some(path) = &args.run.metrics_out {
        write_metrics(&metrics, path)?;
    }
    if let Some(path) = &args.expected {
        let misses = check_expected(&metrics, path)?;
        if !misses.is_empty() {
            for m in &misses {
                eprintln!("{m}");
            }
            return Err(Failure::Runtime(format!(
                "{} metric(s) outside tolerance",
                misses.len()
            )));
        }
        println!("expected values: all within tolerance");
    }
    Ok(())
}

fn write_metrics(metrics: &MetricReport, path: &Path) -> Result<(), Failure> {
    let mut text = String::from("metric,value\n");
    for (name, value) in metrics.rows() {
        text.push_str(&format!("{name},{value}\n"));
    }
    std::fs::write(path, text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

/// Reads `metric,target,tolerance` rows and lists every metric outside its
/// tolerance.
fn check_expected(metrics: &MetricReport, path: &Path) -> Result<Vec<String>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let mut misses = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("metric")) {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || Failure::Config(format!("{}:{}: expected metric,target,tolerance", path.display(), lineno + 1));
        if fields.len() != 3 {
            return Err(bad());
        }
        let target: f64 = fields[1].parse().map_err(|_| bad())?;
        let tolerance: f64 = fields[2].parse().map_err(|_| bad())?;
        let actual = metrics
            .get(fields[0])
            .ok_or_else(|| Failure::Config(format!("unknown metric {:?}", fields[0])))?;
        let diff = (actual - target).abs();
        if diff > tolerance {
            misses.push(format!(
                "{}: actual {actual:.4}, target {target:.4}, diff {diff:.4} > tolerance {tolerance}",
                fields[0]
            ));
        }
    }
    Ok(misses)
}

fn cmd_generate(cmd: GenerateCommand) -> CmdResult {
    let (data, output) = match cmd {
        GenerateCommand::Shapet {
            points,
            noise_fraction,
            seed,
            output,
        } => (generate_shape_t(points, noise_fraction, seed)?, output),
        GenerateCommand::Blobs {
            centers,
            points_per_center,
            spread,
            radius,
            seed,
            output,
        } => {
            if centers == 0 {
                return Err(Failure::Config("--centers must be at least 1".into()));
            }
            let c = ring_centers(centers, radius);
            (generate_blobs(&c, points_per_center, spread, seed)?, output)
        }
    };
    write_csv(&data, &output)?;
    println!("wrote {} rows to {}", data.n(), output.display());
    Ok(())
}
