use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fuds_bench::{
    check_instance, diversity_csv, histogram_csv, parse_config, results_csv, run_experiment, write_file,
    BenchError, ExperimentConfig,
};

#[derive(Parser)]
#[command(name = "fuds-bench", version, about = "Run deletion-scheme experiments and write CSV results")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every cell of a config file.
    Run {
        config: PathBuf,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Result CSV; overrides `output` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for `<config name>.csv` when no other output is given.
        #[arg(long, env = "FUDS_OUT_DIR")]
        out_dir: Option<PathBuf>,
    },
    /// Write a random-distance TSP instance.
    GenTsp {
        #[arg(long)]
        cities: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a config file and its instance without running.
    Validate { config: PathBuf },
}

fn load_config(path: &Path) -> Result<ExperimentConfig, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        context: format!("cannot read config {}", path.display()),
        source,
    })?;
    let mut cfg = parse_config(&text)?;
    cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
    Ok(cfg)
}

fn run_command(config: &Path, jobs: usize, out: Option<PathBuf>, out_dir: Option<PathBuf>) -> Result<(), BenchError> {
    let cfg = load_config(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    let result = pool.install(|| run_experiment(&cfg))?;
    let body = results_csv(&result);
    let target = out.or_else(|| cfg.output.clone()).or_else(|| {
        out_dir.map(|d| {
            let stem = config.file_stem().unwrap_or_default();
            d.join(stem).with_extension("csv")
        })
    });
    match &target {
        Some(path) => {
            write_file(path, &body)?;
            eprintln!(
                "{} runs in {} cells ({}) -> {}",
                result.runs.len(),
                result.cells.len(),
                cfg.problem.objective(),
                path.display()
            );
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|source| BenchError::Io {
                    context: "cannot write to stdout".into(),
                    source,
                })?;
        }
    }
    if let Some(path) = &cfg.diversity_output {
        write_file(path, &diversity_csv(&result))?;
    }
    if let Some(path) = &cfg.histogram_output {
        write_file(path, &histogram_csv(&result))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config, jobs, out, out_dir } => run_command(&config, jobs, out, out_dir),
        Command::GenTsp { cities, seed, out } => fuds::io::gen_random_tsp::<f64>(cities, seed)
            .map_err(|e| BenchError::Run(e.into()))
            .and_then(|inst| write_file(&out, &fuds::io::serialize_tsp(&inst))),
        Command::Validate { config } => load_config(&config).and_then(|cfg| {
            check_instance(&cfg)?;
            let cells = cfg.cells().len();
            println!(
                "ok: {} problem, {cells} cells x {} runs; objective is {}",
                cfg.problem.name(),
                cfg.repetitions,
                cfg.problem.objective()
            );
            Ok(())
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
