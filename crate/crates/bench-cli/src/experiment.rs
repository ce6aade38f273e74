//! Running a configured grid and writing its results.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use fuds::io::{gen_random_tsp, parse_dimacs_cnf, parse_orlib_scp, parse_tsp};
use fuds::{
    aggregate, diversity_curve, run, Deceptive2D, DiversityKind, DiversitySettings, MaxSat, Problem,
    RunSettings, RunTrace, ScpInstance, StopReason, TspInstance,
};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{Cell, DiversityCadence, ExperimentConfig, ProblemSpec, TspSource};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration:\n{0}")]
    Config(#[from] crate::config::ConfigErrors),
    #[error("cannot read instance {path}: {msg}")]
    Instance { path: PathBuf, msg: String },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("run failed: {0}")]
    Run(#[from] fuds::EvoError),
}

impl BenchError {
    /// 1 for configuration problems, 2 for unreadable instances.
    pub fn exit_code(&self) -> u8 {
        match self {
            BenchError::Instance { .. } => 2,
            _ => 1,
        }
    }
}

/// Fixed column order of the result CSV.
pub const RESULT_COLUMNS: &str = "kind,cell,scheme,capacity,level_count,run,seed,best_fitness,objective,cycles,generations,stop_reason,out_of_bounds,n,mean,stddev,stderr,ci95";

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub cell: usize,
    pub run: usize,
    pub trace: RunTrace<f64>,
    pub objective: f64,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub cells: Vec<Cell>,
    /// Cell-major, then run index.
    pub runs: Vec<RunRecord>,
}

enum Loaded {
    Deceptive(Deceptive2D<f64>),
    Tsp(TspInstance<f64>),
    Scp(ScpInstance<f64>),
    Sat(MaxSat<f64>),
}

fn read(path: &Path) -> Result<String, BenchError> {
    std::fs::read_to_string(path).map_err(|e| BenchError::Instance {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

fn bad_instance(path: &Path, e: impl ToString) -> BenchError {
    BenchError::Instance {
        path: path.to_path_buf(),
        msg: e.to_string(),
    }
}

fn load(spec: &ProblemSpec) -> Result<Loaded, BenchError> {
    Ok(match spec {
        ProblemSpec::Deceptive { a, b, delta } => Loaded::Deceptive(
            Deceptive2D::new(*a, *b, *delta).map_err(|e| BenchError::Run(e.into()))?,
        ),
        ProblemSpec::Tsp(TspSource::Random { cities, seed }) => {
            Loaded::Tsp(gen_random_tsp(*cities, *seed).map_err(|e| BenchError::Run(e.into()))?)
        }
        ProblemSpec::Tsp(TspSource::File(p)) => Loaded::Tsp(parse_tsp(&read(p)?).map_err(|e| bad_instance(p, e))?),
        ProblemSpec::Scp(p) => Loaded::Scp(parse_orlib_scp(&read(p)?).map_err(|e| bad_instance(p, e))?),
        ProblemSpec::Sat(p) => Loaded::Sat(MaxSat::new(parse_dimacs_cnf(&read(p)?).map_err(|e| bad_instance(p, e))?)),
    })
}

/// Loads the instance without running anything.
pub fn check_instance(cfg: &ExperimentConfig) -> Result<(), BenchError> {
    load(&cfg.problem).map(|_| ())
}

fn settings_for(cfg: &ExperimentConfig, cell: &Cell) -> RunSettings<f64> {
    let mut s = RunSettings::new(cell.capacity, cfg.stop);
    if let Some(n) = cfg.initial_size {
        s = s.with_initial_size(n);
    }
    if let Some(l) = cfg.level_count {
        s = s.with_level_count(l);
    }
    s.diversity = match cfg.diversity_every {
        DiversityCadence::Off => None,
        DiversityCadence::Auto => Some(DiversitySettings {
            every: None,
            band_width: cfg.top_band_width,
        }),
        DiversityCadence::Every(n) => Some(DiversitySettings {
            every: Some(n),
            band_width: cfg.top_band_width,
        }),
    };
    s
}

fn run_grid<P: Problem<Scalar = f64>>(
    cfg: &ExperimentConfig,
    problem: &P,
    objective: impl Fn(&RunTrace<f64>) -> f64 + Sync,
) -> Result<ExperimentResult, BenchError> {
    let cells = cfg.cells();
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..cfg.repetitions).map(move |r| (c, r)))
        .collect();
    // par_iter keeps job order, so the output does not depend on the pool size
    let runs = jobs
        .par_iter()
        .map(|&(c, r)| {
            let cell = &cells[c];
            let trace = run(problem, cell.scheme, settings_for(cfg, cell), cfg.seed(r))?;
            let objective = objective(&trace);
            Ok(RunRecord {
                cell: c,
                run: r,
                trace,
                objective,
            })
        })
        .collect::<Result<Vec<_>, fuds::EvoError>>()?;
    Ok(ExperimentResult { cells, runs })
}

/// Runs every cell `repetitions` times on the current rayon pool.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, BenchError> {
    match load(&cfg.problem)? {
        Loaded::Deceptive(p) => run_grid(cfg, &p, |t| t.generations()),
        Loaded::Tsp(p) => run_grid(cfg, &p, |t| 1.0 / t.best_fitness()),
        Loaded::Scp(p) => run_grid(cfg, &p, |t| 1.0 / t.best_fitness()),
        Loaded::Sat(p) => run_grid(cfg, &p, |t| t.best_fitness()),
    }
}

fn stop_name(r: StopReason) -> String {
    r.to_string()
}

/// Result CSV: one `run` row per run, then one `aggregate` row per cell.
pub fn results_csv(result: &ExperimentResult) -> String {
    let mut out = String::new();
    out.push_str(RESULT_COLUMNS);
    out.push('\n');
    for (c, cell) in result.cells.iter().enumerate() {
        let runs: Vec<&RunRecord> = result.runs.iter().filter(|r| r.cell == c).collect();
        let levels = runs.first().map(|r| r.trace.level_count.to_string()).unwrap_or_default();
        for r in &runs {
            let t = &r.trace;
            let _ = writeln!(
                out,
                "run,{},{},{},{},{},{},{},{},{},{},{},{},,,,,",
                cell.id(),
                cell.scheme,
                cell.capacity,
                t.level_count,
                r.run,
                t.seed,
                t.best_fitness(),
                r.objective,
                t.cycles,
                t.generations(),
                stop_name(t.stop_reason),
                t.out_of_bounds,
            );
        }
        let values: Vec<f64> = runs.iter().map(|r| r.objective).collect();
        let stats = match aggregate(&values) {
            Ok(s) => format!("{},{},{},{},{}", s.n_runs, s.mean, s.stddev, s.stderr, s.ci95),
            // a single run has a mean but no spread
            Err(_) => format!("{},{},,,", values.len(), values.first().copied().unwrap_or(f64::NAN)),
        };
        let _ = writeln!(
            out,
            "aggregate,{},{},{},{},,,,,,,,,{stats}",
            cell.id(),
            cell.scheme,
            cell.capacity,
            levels,
        );
    }
    out
}

/// Mean diversity against best fitness per cell, both kinds.
pub fn diversity_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("cell,scheme,capacity,kind,best_fitness,mean_diversity,runs\n");
    for (c, cell) in result.cells.iter().enumerate() {
        let traces: Vec<RunTrace<f64>> = result
            .runs
            .iter()
            .filter(|r| r.cell == c)
            .map(|r| r.trace.clone())
            .collect();
        for (kind, name) in [(DiversityKind::Total, "total"), (DiversityKind::TopBand, "top_band")] {
            for p in diversity_curve(&traces, kind) {
                let _ = writeln!(
                    out,
                    "{},{},{},{name},{},{},{}",
                    cell.id(),
                    cell.scheme,
                    cell.capacity,
                    p.best,
                    p.mean_diversity,
                    p.runs
                );
            }
        }
    }
    out
}

/// Final population occupancy per level for every run.
pub fn histogram_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("cell,scheme,capacity,run,seed,level,lower,upper,count\n");
    for r in &result.runs {
        let cell = &result.cells[r.cell];
        let h = &r.trace.histogram;
        for (level, &count) in h.counts.iter().enumerate() {
            let (lo, hi) = h.range(level);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{level},{lo},{hi},{count}",
                cell.id(),
                cell.scheme,
                cell.capacity,
                r.run,
                r.trace.seed,
            );
        }
    }
    out
}

pub fn write_file(path: &Path, body: &str) -> Result<(), BenchError> {
    let io = |context: String| move |source| BenchError::Io { context, source };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io(format!("cannot create {}", dir.display())))?;
    }
    std::fs::write(path, body).map_err(io(format!("cannot write {}", path.display())))
}
