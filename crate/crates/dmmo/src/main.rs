use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dmmo::runner::{self, ConfigId, ExperimentSpec, RunSettings};
use dmmo::suite::DynamicProblem;
use dmmo::variants::AlgorithmVariant;
use dmmo::{io, stats};

#[derive(Parser)]
#[command(
    name = "dmmo",
    version,
    about = "Dynamic multimodal multiobjective optimization: benchmark suite, optimizers, and experiment harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute seeded runs and write runs.csv, curves.csv, records.json and
    /// summary.json into the output directory
    Run(RunArgs),
    /// Print the benchmark catalog
    ListProblems {
        /// Emit machine-readable JSON descriptors instead of a table
        #[arg(long)]
        json: bool,
    },
    /// Aggregate an existing runs.csv into summary.json
    Summarize {
        /// Path to a runs.csv produced by `dmmo run`
        #[arg(long)]
        input: PathBuf,
        /// Output directory (default: flag, then $DMMO_OUT, then ./dmmo-out)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the niche-decay sensitivity sweep over alpha = 0.1 .. 0.9
    SweepAlpha(SweepArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Problem id (repeatable): DMMF0 .. DMMF12
    #[arg(long = "problem", required = true)]
    problems: Vec<String>,
    /// Change schedule: C1, C2, C3 or C4
    #[arg(long, default_value = "C1")]
    config: String,
    /// Algorithm id (repeatable): CAE-AN, DNSGA2-A, CAE-AN_none, CAE-AN_noC,
    /// CAE-AN_noAE, CAE-AN_noadaptive
    #[arg(long = "algorithm", default_values_t = vec!["CAE-AN".to_string()])]
    algorithms: Vec<String>,
    /// Independent runs per problem/algorithm pair
    #[arg(long, default_value_t = 20)]
    runs: u32,
    /// Base seed; per-run seeds derive from it and the run coordinates
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Population size (default: 100 for two objectives, 150 for three)
    #[arg(long)]
    pop_size: Option<usize>,
    /// Niche decay/variance factor
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Initial niche radius (default: adaptive per problem and population)
    #[arg(long)]
    r0: Option<f64>,
    /// Cluster radius (default: 10% of the decision-space diagonal)
    #[arg(long)]
    epsilon: Option<f64>,
    /// Minimum points for a cluster core
    #[arg(long, default_value_t = 5)]
    eta: usize,
    /// Ridge strength of the transfer fit
    #[arg(long, default_value_t = 1e-3)]
    lambda: f64,
    /// Number of environments per run
    #[arg(long, default_value_t = 30)]
    num_changes: u32,
    /// Output directory (default: flag, then $DMMO_OUT, then ./dmmo-out)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for run-level parallelism
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// Problem id (repeatable)
    #[arg(long = "problem", default_values_t = vec!["DMMF7".to_string()])]
    problems: Vec<String>,
    #[arg(long, default_value = "C1")]
    config: String,
    #[arg(long, default_value_t = 20)]
    runs: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    pop_size: Option<usize>,
    #[arg(long, default_value_t = 30)]
    num_changes: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

enum CliError {
    /// Misuse: unknown ids or invalid arguments. Exit code 2.
    Usage(String),
    /// Failures while running or writing. Exit code 1.
    Runtime(dmmo::Error),
}

impl From<dmmo::Error> for CliError {
    fn from(e: dmmo::Error) -> Self {
        CliError::Runtime(e)
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => run_command(args),
        Command::ListProblems { json } => list_problems(json),
        Command::Summarize { input, out } => summarize_command(&input, out),
        Command::SweepAlpha(args) => sweep_command(args),
    }
}

fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("DMMO_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("dmmo-out"))
}

fn parse_config(value: &str) -> Result<ConfigId, CliError> {
    value
        .parse::<ConfigId>()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_algorithms(values: &[String]) -> Result<Vec<AlgorithmVariant>, CliError> {
    values
        .iter()
        .map(|v| {
            v.parse::<AlgorithmVariant>()
                .map_err(|e| CliError::Usage(e.to_string()))
        })
        .collect()
}

fn check_problems(values: &[String]) -> Result<(), CliError> {
    for id in values {
        if DynamicProblem::<f64>::by_id(id).is_none() {
            return Err(CliError::Usage(format!("unknown problem '{id}'")));
        }
    }
    Ok(())
}

fn write_outputs(dir: &std::path::Path, records: &[runner::RunRecord]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(dmmo::Error::from)?;
    io::write_runs_csv(&dir.join("runs.csv"), records)?;
    io::write_curves_csv(&dir.join("curves.csv"), records)?;
    io::write_records_json(&dir.join("records.json"), records)?;
    let summary = stats::summarize(records)?;
    io::write_summary_json(&dir.join("summary.json"), &summary)?;
    for group in &summary.groups {
        println!("{} / {}", group.problem, group.config);
        for cell in &group.cells {
            println!(
                "  {:<18} runs={:<3} MIGD {:.6} +/- {:.6}  MIGDx {:.6} +/- {:.6}",
                cell.algorithm,
                cell.runs,
                cell.migd_mean,
                cell.migd_std,
                cell.migdx_mean,
                cell.migdx_std
            );
        }
        for cmp in &group.comparisons {
            println!(
                "  {} vs {}: MIGD {} (p = {:.4})  MIGDx {} (p = {:.4})",
                cmp.a, cmp.b, cmp.migd_mark, cmp.migd_p, cmp.migdx_mark, cmp.migdx_p
            );
        }
    }
    Ok(())
}

fn run_command(args: RunArgs) -> Result<(), CliError> {
    check_problems(&args.problems)?;
    let spec = ExperimentSpec {
        problems: args.problems,
        config: parse_config(&args.config)?,
        algorithms: parse_algorithms(&args.algorithms)?,
        runs: args.runs,
        base_seed: args.seed,
        settings: RunSettings {
            pop_size: args.pop_size,
            num_changes: args.num_changes,
            alpha: args.alpha,
            r0: args.r0,
            epsilon: args.epsilon,
            eta: args.eta,
            lambda: args.lambda,
        },
        jobs: args.jobs,
    };
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let records = runner::run_experiment(&spec)?;
    let dir = out_dir(args.out);
    write_outputs(&dir, &records)?;
    println!("wrote {} runs to {}", records.len(), dir.display());
    Ok(())
}

fn list_problems(json: bool) -> Result<(), CliError> {
    let descriptors: Vec<_> = dmmo::suite::list_problems::<f64>()
        .iter()
        .map(|p| p.descriptor())
        .collect();
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&descriptors).map_err(dmmo::Error::from)?
        );
        return Ok(());
    }
    println!(
        "{:<8} {:>4} {:>5} {:<9} {:<20} {:<20} {:>8} {:>9} {:>6}",
        "id", "m", "dims", "class", "POF geometry", "POS geometry", "branches", "scalable", "local"
    );
    for d in &descriptors {
        println!(
            "{:<8} {:>4} {:>5} {:<9} {:<20} {:<20} {:>8} {:>9} {:>6}",
            d.id,
            d.objectives,
            d.decision_dims,
            d.class,
            d.pof_geometry,
            d.pos_geometry,
            d.branch_count,
            d.scalable_branches,
            d.coexisting_local_pos
        );
    }
    Ok(())
}

fn summarize_command(input: &std::path::Path, out: Option<PathBuf>) -> Result<(), CliError> {
    let rows = io::read_runs_csv(input)?;
    if rows.is_empty() {
        return Err(CliError::Usage(format!(
            "no rows in {}",
            input.display()
        )));
    }
    let records = io::records_from_rows(&rows);
    let summary = stats::summarize(&records)?;
    let dir = out_dir(out);
    std::fs::create_dir_all(&dir).map_err(dmmo::Error::from)?;
    io::write_summary_json(&dir.join("summary.json"), &summary)?;
    for group in &summary.groups {
        println!("{} / {}", group.problem, group.config);
        for cell in &group.cells {
            println!(
                "  {:<18} runs={:<3} MIGD {:.6}  MIGDx {:.6}",
                cell.algorithm, cell.runs, cell.migd_mean, cell.migdx_mean
            );
        }
    }
    println!("wrote summary to {}", dir.display());
    Ok(())
}

fn sweep_command(args: SweepArgs) -> Result<(), CliError> {
    check_problems(&args.problems)?;
    let spec = ExperimentSpec {
        problems: args.problems,
        config: parse_config(&args.config)?,
        algorithms: vec![AlgorithmVariant::CaeAn],
        runs: args.runs,
        base_seed: args.seed,
        settings: RunSettings {
            pop_size: args.pop_size,
            num_changes: args.num_changes,
            ..RunSettings::default()
        },
        jobs: args.jobs,
    };
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let sweep = runner::sweep_alpha(&spec, &runner::alpha_grid())?;
    let dir = out_dir(args.out);
    std::fs::create_dir_all(&dir).map_err(dmmo::Error::from)?;

    let mut writer = csv::Writer::from_writer(Vec::new());
    #[derive(serde::Serialize)]
    struct SweepRow {
        alpha: f64,
        problem: String,
        config: String,
        run_id: u32,
        migd: f64,
        migdx: f64,
    }
    println!("{:>5} {:>12} {:>12}", "alpha", "med MIGD", "med MIGDx");
    for (alpha, records) in &sweep {
        for r in records {
            writer
                .serialize(SweepRow {
                    alpha: *alpha,
                    problem: r.problem.clone(),
                    config: r.config.clone(),
                    run_id: r.run_index,
                    migd: r.migd,
                    migdx: r.migdx,
                })
                .map_err(dmmo::Error::from)?;
        }
        let mut migd: Vec<f64> = records.iter().map(|r| r.migd).collect();
        let mut migdx: Vec<f64> = records.iter().map(|r| r.migdx).collect();
        migd.sort_by(|a, b| a.partial_cmp(b).unwrap());
        migdx.sort_by(|a, b| a.partial_cmp(b).unwrap());
        println!(
            "{:>5.1} {:>12.6} {:>12.6}",
            alpha,
            migd[migd.len() / 2],
            migdx[migdx.len() / 2]
        );
    }
    let bytes = writer.into_inner().expect("in-memory writer");
    std::fs::write(dir.join("alpha_sweep.csv"), bytes).map_err(dmmo::Error::from)?;
    println!("wrote sweep to {}", dir.display());
    Ok(())
}
