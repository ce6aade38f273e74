//! Experiment configuration files.
//!
//! One `key = value` pair per line; `#` starts a comment. Lists are
//! comma-separated. Keys:
//!
//! | key | value | default |
//! |---|---|---|
//! | `problem` | `deceptive`, `tsp`, `scp` or `sat` | required |
//! | `instance` | instance file (relative to the config file) | required for `scp`, `sat` |
//! | `tsp_cities`, `tsp_seed` | random TSP instance when `instance` is absent | 20, 1 |
//! | `deceptive_delta` | band width | required for `deceptive` |
//! | `deceptive_a`, `deceptive_b` | band starts | centred |
//! | `tournament_sizes` | list of sizes; `rand` is uniform selection | required |
//! | `deletion` | list of `random`, `fuds` | `random, fuds` |
//! | `capacities` | list of population sizes | required |
//! | `initial_size` | `full` or a count | `full` |
//! | `crossover_prob`, `mutation_prob` | probabilities | 0.5, 0.5 |
//! | `level_count` | `auto` (round(sqrt(capacity))) or a count | `auto` |
//! | `max_generations`, `stall_generations`, `target_fitness` | stop clauses, at least one | none; deceptive targets 4 |
//! | `repetitions` | runs per cell | 1 |
//! | `base_seed` | run `i` uses `base_seed + i` | 0 |
//! | `diversity_every` | `auto` (capacity / 10), `off` or cycles | `auto` |
//! | `top_band_width` | fitness units | 20 |
//! | `output` | result CSV path | see the CLI |
//! | `diversity_output`, `histogram_output` | extra CSV paths | none |

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fuds::{Deletion, SchemeConfig, Selection, StopRule};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` is set twice (first on line {first})")]
    Duplicate { line: usize, first: usize, key: String },
    #[error("line {line}: `{key}`: {msg}")]
    Malformed { line: usize, key: String, msg: String },
    #[error("missing required key `{key}`")]
    Missing { key: String },
    #[error("{msg}")]
    Invalid { msg: String },
}

/// A list of problems found in one config file.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TspSource {
    File(PathBuf),
    Random { cities: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProblemSpec {
    Deceptive { a: f64, b: f64, delta: f64 },
    Tsp(TspSource),
    Scp(PathBuf),
    Sat(PathBuf),
}

impl ProblemSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemSpec::Deceptive { .. } => "deceptive",
            ProblemSpec::Tsp(_) => "tsp",
            ProblemSpec::Scp(_) => "scp",
            ProblemSpec::Sat(_) => "sat",
        }
    }

    /// What the `objective` column holds.
    pub fn objective(&self) -> &'static str {
        match self {
            ProblemSpec::Deceptive { .. } => "generations to optimum",
            ProblemSpec::Tsp(_) => "best tour length",
            ProblemSpec::Scp(_) => "best cover cost",
            ProblemSpec::Sat(_) => "clauses satisfied",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiversityCadence {
    Auto,
    Off,
    Every(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub selections: Vec<Selection>,
    pub deletions: Vec<Deletion>,
    pub capacities: Vec<usize>,
    /// `None` starts every run with a full population.
    pub initial_size: Option<usize>,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    /// `None` is `round(sqrt(capacity))`.
    pub level_count: Option<usize>,
    pub stop: StopRule<f64>,
    pub repetitions: usize,
    pub base_seed: u64,
    pub diversity_every: DiversityCadence,
    pub top_band_width: f64,
    pub output: Option<PathBuf>,
    pub diversity_output: Option<PathBuf>,
    pub histogram_output: Option<PathBuf>,
}

/// One point of the scheme grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub scheme: SchemeConfig,
    pub capacity: usize,
}

impl Cell {
    /// Stable identifier, e.g. `TOUR3-F@250`.
    pub fn id(&self) -> String {
        format!("{}@{}", self.scheme, self.capacity)
    }
}

impl ExperimentConfig {
    /// Capacity-major, then tournament size, then deletion scheme.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &capacity in &self.capacities {
            for &selection in &self.selections {
                for &deletion in &self.deletions {
                    cells.push(Cell {
                        scheme: SchemeConfig::new(selection, deletion)
                            .with_probs(self.crossover_prob, self.mutation_prob),
                        capacity,
                    });
                }
            }
        }
        cells
    }

    pub fn seed(&self, run_index: usize) -> u64 {
        self.base_seed.wrapping_add(run_index as u64)
    }

    /// Paths in the file are relative to `dir`.
    pub fn resolve_paths(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        match &mut self.problem {
            ProblemSpec::Tsp(TspSource::File(p)) | ProblemSpec::Scp(p) | ProblemSpec::Sat(p) => fix(p),
            _ => {}
        }
        for p in [&mut self.output, &mut self.diversity_output, &mut self.histogram_output]
            .into_iter()
            .flatten()
        {
            fix(p);
        }
    }
}

const KEYS: &[&str] = &[
    "problem",
    "instance",
    "tsp_cities",
    "tsp_seed",
    "deceptive_delta",
    "deceptive_a",
    "deceptive_b",
    "tournament_sizes",
    "deletion",
    "capacities",
    "initial_size",
    "crossover_prob",
    "mutation_prob",
    "level_count",
    "max_generations",
    "stall_generations",
    "target_fitness",
    "repetitions",
    "base_seed",
    "diversity_every",
    "top_band_width",
    "output",
    "diversity_output",
    "histogram_output",
];

struct Entries {
    values: HashMap<&'static str, (usize, String)>,
    errors: Vec<ConfigError>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.values.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn get<T: FromStr>(&mut self, key: &str) -> Option<T>
    where
        T::Err: fmt::Display,
    {
        let (line, v) = self.raw(key)?;
        match v.parse::<T>() {
            Ok(t) => Some(t),
            Err(e) => {
                let err = ConfigError::Malformed {
                    line,
                    key: key.to_string(),
                    msg: format!("`{v}`: {e}"),
                };
                self.errors.push(err);
                None
            }
        }
    }

    fn list<T>(&mut self, key: &str, item: impl Fn(&str) -> Result<T, String>) -> Option<Vec<T>> {
        let (line, v) = self.raw(key)?;
        let mut out = Vec::new();
        for part in v.split(',').map(str::trim) {
            match item(part) {
                Ok(t) => out.push(t),
                Err(msg) => {
                    let err = ConfigError::Malformed {
                        line,
                        key: key.to_string(),
                        msg,
                    };
                    self.errors.push(err);
                    return None;
                }
            }
        }
        Some(out)
    }

    fn malformed(&mut self, key: &str, msg: String) {
        let line = self.raw(key).map_or(0, |(l, _)| l);
        self.errors.push(ConfigError::Malformed {
            line,
            key: key.to_string(),
            msg,
        });
    }

    fn missing(&mut self, key: &str) {
        self.errors.push(ConfigError::Missing { key: key.to_string() });
    }
}

fn positive(v: &str) -> Result<usize, String> {
    match v.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("`{v}` is not a positive integer")),
    }
}

/// Parses and validates a config file, reporting every problem found.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigErrors> {
    let mut e = Entries {
        values: HashMap::new(),
        errors: Vec::new(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            e.errors.push(ConfigError::Syntax {
                line,
                text: content.to_string(),
            });
            continue;
        };
        let (k, v) = (k.trim(), v.trim());
        let Some(&key) = KEYS.iter().find(|&&known| known == k) else {
            e.errors.push(ConfigError::UnknownKey { line, key: k.to_string() });
            continue;
        };
        if let Some(&(first, _)) = e.values.get(key) {
            e.errors.push(ConfigError::Duplicate {
                line,
                first,
                key: key.to_string(),
            });
            continue;
        }
        if v.is_empty() {
            e.errors.push(ConfigError::Malformed {
                line,
                key: key.to_string(),
                msg: "empty value".into(),
            });
            continue;
        }
        e.values.insert(key, (line, v.to_string()));
    }

    let problem = build_problem(&mut e);

    let selections = e.list("tournament_sizes", |v| {
        if v.eq_ignore_ascii_case("rand") {
            Ok(Selection::Uniform)
        } else {
            positive(v).map(Selection::Tournament)
        }
    });
    if selections.is_none() && e.raw("tournament_sizes").is_none() {
        e.missing("tournament_sizes");
    }
    let deletions = if e.raw("deletion").is_some() {
        e.list("deletion", |v| match v.to_ascii_lowercase().as_str() {
            "random" | "r" => Ok(Deletion::Random),
            "fuds" | "f" => Ok(Deletion::Fuds),
            _ => Err(format!("`{v}` is not `random` or `fuds`")),
        })
    } else {
        Some(vec![Deletion::Random, Deletion::Fuds])
    };
    let capacities = e.list("capacities", positive);
    if capacities.is_none() && e.raw("capacities").is_none() {
        e.missing("capacities");
    }
    let initial_size = match e.raw("initial_size") {
        Some((_, "full")) | None => None,
        Some((_, v)) => match positive(v) {
            Ok(n) => Some(n),
            Err(msg) => {
                e.malformed("initial_size", msg);
                None
            }
        },
    };
    let mut prob = |key: &str| -> f64 {
        match e.get::<f64>(key) {
            Some(p) if (0.0..=1.0).contains(&p) => p,
            Some(p) => {
                e.malformed(key, format!("{p} is not a probability"));
                0.5
            }
            None => 0.5,
        }
    };
    let crossover_prob = prob("crossover_prob");
    let mutation_prob = prob("mutation_prob");
    let level_count = match e.raw("level_count") {
        Some((_, "auto")) | None => None,
        Some((_, v)) => match positive(v) {
            Ok(n) => Some(n),
            Err(msg) => {
                e.malformed("level_count", msg);
                None
            }
        },
    };

    let mut generations = |key: &str| -> Option<f64> {
        let g = e.get::<f64>(key)?;
        if g > 0.0 && g.is_finite() {
            Some(g)
        } else {
            e.malformed(key, format!("{g} is not a positive number of generations"));
            None
        }
    };
    let max_generations = generations("max_generations");
    let stall_generations = generations("stall_generations");
    let mut target_fitness = e.get::<f64>("target_fitness");
    if target_fitness.is_none() && matches!(problem, Some(ProblemSpec::Deceptive { .. })) {
        target_fitness = Some(4.0);
    }
    let stop = StopRule {
        max_generations,
        stall_generations,
        target_fitness,
    };
    if stop.max_generations.is_none()
        && stop.stall_generations.is_none()
        && stop.target_fitness.is_none()
        && ["max_generations", "stall_generations", "target_fitness"]
            .iter()
            .all(|k| e.raw(k).is_none())
    {
        e.missing("max_generations, stall_generations or target_fitness");
    }

    let repetitions = match e.raw("repetitions") {
        None => 1,
        Some((_, v)) => positive(v).unwrap_or_else(|msg| {
            e.malformed("repetitions", msg);
            1
        }),
    };
    let base_seed = e.get::<u64>("base_seed").unwrap_or(0);
    let diversity_every = match e.raw("diversity_every") {
        Some((_, "auto")) | None => DiversityCadence::Auto,
        Some((_, "off")) => DiversityCadence::Off,
        Some((_, v)) => match positive(v) {
            Ok(n) => DiversityCadence::Every(n as u64),
            Err(msg) => {
                e.malformed("diversity_every", msg);
                DiversityCadence::Auto
            }
        },
    };
    let top_band_width = match e.get::<f64>("top_band_width") {
        Some(w) if w >= 0.0 => w,
        Some(w) => {
            e.malformed("top_band_width", format!("{w} is negative"));
            20.0
        }
        None => 20.0,
    };
    let path = |key: &str| e.raw(key).map(|(_, v)| PathBuf::from(v));
    let output = path("output");
    let diversity_output = path("diversity_output");
    let histogram_output = path("histogram_output");

    if let (Some(n), Some(caps)) = (initial_size, &capacities) {
        if let Some(c) = caps.iter().find(|&&c| n > c) {
            e.errors.push(ConfigError::Invalid {
                msg: format!("initial_size {n} exceeds capacity {c}"),
            });
        }
    }

    if !e.errors.is_empty() {
        return Err(ConfigErrors(e.errors));
    }
    Ok(ExperimentConfig {
        problem: problem.expect("no errors"),
        selections: selections.expect("no errors"),
        deletions: deletions.expect("no errors"),
        capacities: capacities.expect("no errors"),
        initial_size,
        crossover_prob,
        mutation_prob,
        level_count,
        stop,
        repetitions,
        base_seed,
        diversity_every,
        top_band_width,
        output,
        diversity_output,
        histogram_output,
    })
}

fn build_problem(e: &mut Entries) -> Option<ProblemSpec> {
    let Some((_, kind)) = e.raw("problem") else {
        e.missing("problem");
        return None;
    };
    let kind = kind.to_ascii_lowercase();
    let instance = e.raw("instance").map(|(_, v)| PathBuf::from(v));
    match kind.as_str() {
        "deceptive" => {
            let Some(delta) = e.get::<f64>("deceptive_delta") else {
                if e.raw("deceptive_delta").is_none() {
                    e.missing("deceptive_delta");
                }
                return None;
            };
            if !(delta > 0.0 && delta < 1.0) {
                e.malformed("deceptive_delta", format!("{delta} is not in (0, 1)"));
                return None;
            }
            let centre = (1.0 - delta) / 2.0;
            let a = e.get::<f64>("deceptive_a").unwrap_or(centre);
            let b = e.get::<f64>("deceptive_b").unwrap_or(centre);
            if let Err(err) = fuds::Deceptive2D::new(a, b, delta) {
                e.errors.push(ConfigError::Invalid { msg: err.to_string() });
                return None;
            }
            Some(ProblemSpec::Deceptive { a, b, delta })
        }
        "tsp" => {
            if let Some(path) = instance {
                return Some(ProblemSpec::Tsp(TspSource::File(path)));
            }
            let cities = match e.raw("tsp_cities") {
                None => 20,
                Some((_, v)) => match v.parse::<usize>() {
                    Ok(n) if n >= 2 => n,
                    _ => {
                        e.malformed("tsp_cities", format!("`{v}` is not a city count of at least 2"));
                        return None;
                    }
                },
            };
            let seed = e.get::<u64>("tsp_seed").unwrap_or(1);
            Some(ProblemSpec::Tsp(TspSource::Random { cities, seed }))
        }
        "scp" | "sat" => {
            let Some(path) = instance else {
                e.missing("instance");
                return None;
            };
            Some(if kind == "scp" { ProblemSpec::Scp(path) } else { ProblemSpec::Sat(path) })
        }
        _ => {
            e.malformed("problem", format!("`{kind}` is not one of deceptive, tsp, scp, sat"));
            None
        }
    }
}
