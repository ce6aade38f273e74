//! Acceptance checks for the engine and the benchmark comparisons.
//!
//! Prints one `[PASS]` / `[FAIL]` line per criterion followed by the
//! measurements behind it, and exits non-zero if any criterion fails.
//! Criteria run on separate threads; runs inside a criterion use rayon.
//! Everything is seeded, so the output is the same on every invocation.

use std::process::ExitCode;
use std::time::Instant;

use fuds::io::{gen_random_tsp, parse_dimacs_cnf, parse_orlib_scp, parse_tsp, ParseError};
use fuds::problems::pmx::{pmx_crossover, random_cuts};
use fuds::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const UF150: &str = include_str!("fixtures/uf150-style.cnf");
const SCP4X: &str = include_str!("fixtures/scp4x-style.txt");

struct Outcome {
    id: u8,
    name: &'static str,
    pass: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new(id: u8, name: &'static str) -> Self {
        Outcome {
            id,
            name,
            pass: true,
            lines: Vec::new(),
        }
    }

    /// Records a sub-check; any failing sub-check fails the criterion.
    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.lines.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.lines.push(format!("     {line}"));
    }
}

fn sat_problem() -> MaxSat<f64> {
    MaxSat::new(parse_dimacs_cnf(UF150).expect("uf150 fixture"))
}

// 1 ---------------------------------------------------------------------

fn brute_level(f: f64, (lo, hi): (f64, f64), levels: usize) -> usize {
    if !(f > lo) {
        0
    } else if f >= hi {
        levels - 1
    } else {
        (((f - lo) * levels as f64 / (hi - lo)).floor() as usize).min(levels - 1)
    }
}

/// Steps a FUDS engine and checks every deletion against a recount.
fn deletion_violations<P: Problem<Scalar = f64>>(p: &P, capacity: usize, k: usize, seed: u64, steps: usize) -> usize {
    let scheme = SchemeConfig::tournament(k, Deletion::Fuds);
    let settings = RunSettings::new(capacity, StopRule::max_generations(1e9)).without_diversity();
    let mut e = Engine::new(p, scheme, settings, seed).expect("engine");
    let bounds = p.fitness_bounds();
    let levels = e.population().table().level_count();
    let mut bad = 0;
    for _ in 0..steps {
        let mut count = vec![0usize; levels];
        for f in e.population().fitnesses() {
            count[brute_level(f, bounds, levels)] += 1;
        }
        let top = *count.iter().max().unwrap();
        let want = count.iter().position(|&c| c == top).unwrap();
        let rec = e.step().expect("step");
        let d = rec.deleted.expect("population is full");
        if d.level != want || brute_level(d.fitness, bounds, levels) != want {
            bad += 1;
        }
    }
    bad
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new(1, "FUDS deletion matches brute-force level recount");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let steps = 1000;
    let dec = Deceptive2D::<f64>::centered(0.1).unwrap();
    let tsp: TspInstance<f64> = gen_random_tsp(15, rng.gen()).unwrap();
    let sat = sat_problem();
    let scp: ScpInstance<f64> = parse_orlib_scp(SCP4X).unwrap();
    let results = [
        ("deceptive", deletion_violations(&dec, rng.gen_range(20..80), 2, rng.gen(), steps)),
        ("tsp", deletion_violations(&tsp, rng.gen_range(20..80), 3, rng.gen(), steps)),
        ("sat", deletion_violations(&sat, rng.gen_range(20..80), 4, rng.gen(), steps)),
        ("scp", deletion_violations(&scp, rng.gen_range(10..30), 2, rng.gen(), steps)),
    ];
    for (name, bad) in results {
        out.check(bad == 0, format!("{name}: {bad} violations in {steps} deletions"));
    }
    out
}

// 2 ---------------------------------------------------------------------

const DECEPTIVE_CAP: f64 = 5000.0;

/// Generations to the optimum per run; `None` when the cap was hit.
fn deceptive_runs(delta: f64, k: usize, deletion: Deletion) -> Vec<Option<f64>> {
    let p = Deceptive2D::<f64>::centered(delta).unwrap();
    let scheme = SchemeConfig::tournament(k, deletion).with_probs(0.25, 0.5);
    (0..20u64)
        .into_par_iter()
        .map(|seed| {
            let settings = RunSettings::new(1000, StopRule::max_generations(DECEPTIVE_CAP).with_target(4.0))
                .with_initial_size(10)
                .without_diversity();
            let t = run(&p, scheme, settings, seed).expect("run");
            (t.stop_reason == StopReason::TargetReached).then(|| t.generations())
        })
        .collect()
}

/// Mean with capped runs counted at the cap.
fn capped_mean(runs: &[Option<f64>]) -> f64 {
    runs.iter().map(|g| g.unwrap_or(DECEPTIVE_CAP)).sum::<f64>() / runs.len() as f64
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new(2, "deceptive 2D: FUDS reaches the optimum sooner");
    let mut tour2_at_005 = (0.0, 0.0);
    for delta in [0.2, 0.1, 0.05] {
        let r2 = capped_mean(&deceptive_runs(delta, 2, Deletion::Random));
        let f2 = capped_mean(&deceptive_runs(delta, 2, Deletion::Fuds));
        out.check(f2 <= r2, format!("delta {delta}: TOUR2-F mean {f2:.2} <= TOUR2-R mean {r2:.2}"));
        if delta == 0.05 {
            tour2_at_005 = (r2, f2);
        }
    }
    let (r2, f2) = tour2_at_005;
    out.check(r2 >= 3.0 * f2, format!("delta 0.05: TOUR2-R / TOUR2-F = {:.2} >= 3", r2 / f2));

    let r3 = deceptive_runs(0.05, 3, Deletion::Random);
    let f3 = deceptive_runs(0.05, 3, Deletion::Fuds);
    let f3_done = f3.iter().filter(|g| g.is_some()).count();
    out.check(f3_done == 20, format!("delta 0.05: TOUR3-F solved {f3_done}/20 within {DECEPTIVE_CAP} generations"));
    let r3_capped = r3.iter().filter(|g| g.is_none()).count();
    let r3_max = r3.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    out.check(
        r3_capped * 4 >= 20,
        format!(
            "delta 0.05: TOUR3-R capped in {r3_capped}/20 runs (need >= 5); mean {:.1}, slowest solved {r3_max:.1}",
            capped_mean(&r3)
        ),
    );
    out
}

// 3 ---------------------------------------------------------------------

const TSP_SIZES: [usize; 5] = [3, 4, 6, 8, 12];

fn tsp_lengths(inst: &TspInstance<f64>, k: usize, deletion: Deletion, levels: Option<usize>) -> AggregateStats<f64> {
    let lengths: Vec<f64> = (0..20u64)
        .into_par_iter()
        .map(|seed| {
            let mut settings = RunSettings::new(250, StopRule::stall(40.0)).without_diversity();
            if let Some(l) = levels {
                settings = settings.with_level_count(l);
            }
            let t = run(inst, SchemeConfig::tournament(k, deletion), settings, seed).expect("run");
            1.0 / t.best_fitness()
        })
        .collect();
    aggregate(&lengths).expect("20 samples")
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new(3, "TSP: FUDS never worse, strictly better at TOUR3 and TOUR12");
    let inst: TspInstance<f64> = gen_random_tsp(20, 1).unwrap();
    // capacity 250 over 125 levels; see README
    let levels = Some(125);
    for k in TSP_SIZES {
        let r = tsp_lengths(&inst, k, Deletion::Random, levels);
        let f = tsp_lengths(&inst, k, Deletion::Fuds, levels);
        let summary = format!(
            "TOUR{k}: F {:.4} +- {:.4}, R {:.4} +- {:.4}",
            f.mean, f.ci95, r.mean, r.ci95
        );
        out.check(f.mean <= r.mean + r.ci95, format!("{summary}; F <= R + ci95"));
        if k == 3 || k == 12 {
            out.check(
                f.mean < r.mean && f.separated_from(&r),
                format!("TOUR{k}: intervals disjoint, FUDS lower"),
            );
        }
    }
    let mut default_rows = Vec::new();
    for k in TSP_SIZES {
        let r = tsp_lengths(&inst, k, Deletion::Random, None);
        let f = tsp_lengths(&inst, k, Deletion::Fuds, None);
        default_rows.push(format!(
            "TOUR{k} F {:.3}+-{:.3} R {:.3}+-{:.3}{}",
            f.mean,
            f.ci95,
            r.mean,
            r.ci95,
            if f.separated_from(&r) { " disjoint" } else { "" }
        ));
    }
    out.note(format!("for reference, default {} levels: {}", default_level_count(250), default_rows.join("; ")));
    out
}

// 4 and 5 ---------------------------------------------------------------

struct SatRun {
    trace: RunTrace<f64>,
    near_best: f64,
}

fn sat_runs(p: &MaxSat<f64>, k: usize, deletion: Deletion) -> Vec<SatRun> {
    (0..10u64)
        .into_par_iter()
        .map(|seed| {
            let settings = RunSettings::new(1000, StopRule::stall(40.0));
            let mut e = Engine::new(p, SchemeConfig::tournament(k, deletion), settings, seed).expect("engine");
            let trace = e.run_to_end().expect("run");
            let pop = e.population();
            let best = pop.fitnesses().fold(f64::NEG_INFINITY, f64::max);
            let near = pop.fitnesses().filter(|&f| f >= best - 20.0).count();
            SatRun {
                trace,
                near_best: near as f64 / pop.len() as f64,
            }
        })
        .collect()
}

fn criterion_4(p: &MaxSat<f64>) -> Outcome {
    let mut out = Outcome::new(4, "SAT: random deletion collapses, FUDS spreads out");
    let r = sat_runs(p, 4, Deletion::Random);
    let f = sat_runs(p, 4, Deletion::Fuds);
    let fmt = |runs: &[SatRun]| runs.iter().map(|s| format!("{:.2}", s.near_best)).collect::<Vec<_>>().join(" ");
    let r_ok = r.iter().filter(|s| s.near_best >= 0.9).count();
    let f_ok = f.iter().filter(|s| s.near_best <= 0.5).count();
    out.check(r_ok >= 8, format!("TOUR4-R fraction within 20 of best >= 0.9 in {r_ok}/10 runs [{}]", fmt(&r)));
    out.check(f_ok >= 8, format!("TOUR4-F fraction within 20 of best <= 0.5 in {f_ok}/10 runs [{}]", fmt(&f)));
    out
}

fn criterion_5(p: &MaxSat<f64>) -> Outcome {
    let mut out = Outcome::new(5, "SAT: FUDS keeps more total diversity");
    for k in [3, 12] {
        let traces = |d| sat_runs(p, k, d).into_iter().map(|s| s.trace).collect::<Vec<_>>();
        let r = diversity_vs_best_curve(&traces(Deletion::Random));
        let f = diversity_vs_best_curve(&traces(Deletion::Fuds));
        let mut common = 0;
        let mut worse = Vec::new();
        let mut min_gap = f64::INFINITY;
        for pf in &f {
            if let Some(pr) = r.iter().find(|pr| pr.best == pf.best) {
                common += 1;
                let gap = pf.mean_diversity - pr.mean_diversity;
                min_gap = min_gap.min(gap);
                if gap < 0.0 {
                    worse.push(format!("{}: {:.3} < {:.3}", pf.best, pf.mean_diversity, pr.mean_diversity));
                }
            }
        }
        let tail = |c: &[CurvePoint<f64>]| c.last().map(|p| format!("{} ({:.1})", p.best, p.mean_diversity)).unwrap_or_default();
        out.check(
            common > 0 && worse.is_empty(),
            format!(
                "TOUR{k}: FUDS >= random at {}/{common} common checkpoints (smallest margin {min_gap:.3}); curves end at F {} / R {}",
                common - worse.len(),
                tail(&f),
                tail(&r)
            ),
        );
        if !worse.is_empty() {
            out.note(format!("TOUR{k} below: {}", worse.join(", ")));
        }
    }
    out
}

// 6 ---------------------------------------------------------------------

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut all = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            all.push(q);
        }
    }
    all
}

fn random_scp(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ScpInstance<f64> {
    let cover: Vec<Vec<usize>> = (0..rows)
        .map(|_| {
            let mut r: Vec<usize> = (0..cols).filter(|_| rng.gen_bool(0.4)).collect();
            if r.is_empty() {
                r.push(rng.gen_range(0..cols));
            }
            r
        })
        .collect();
    let cost = (0..cols).map(|_| rng.gen_range(1..=20) as f64).collect();
    ScpInstance::new(cover, cost).expect("every row has a column")
}

fn scp_optimum(inst: &ScpInstance<f64>) -> f64 {
    let n = inst.columns();
    (0u32..1 << n)
        .map(|mask| (0..n).map(|j| mask >> j & 1 == 1).collect::<Vec<bool>>())
        .filter(|x| inst.is_cover(x))
        .map(|x| inst.selection_cost(&x))
        .fold(f64::INFINITY, f64::min)
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new(6, "small instances: engine finds the enumerated optimum");
    let settings = || RunSettings::new(20, StopRule::max_generations(50.0)).without_diversity();
    let scheme = SchemeConfig::tournament(2, Deletion::Fuds);

    let tours = permutations(4);
    let tsp_hits = (0..20u64)
        .filter(|&r| {
            let inst: TspInstance<f64> = gen_random_tsp(4, 500 + r).unwrap();
            let opt = tours.iter().map(|t| inst.tour_length(t)).fold(f64::INFINITY, f64::min);
            let t = run(&inst, scheme, settings(), r).expect("run");
            (1.0 / t.best_fitness() - opt).abs() <= 1e-12 * opt
        })
        .count();
    out.check(tsp_hits >= 19, format!("4-city TSP: optimum in {tsp_hits}/20 runs"));

    let scp_hits = (0..20u64)
        .filter(|&r| {
            let inst = random_scp(&mut ChaCha8Rng::seed_from_u64(700 + r), 4, 6);
            let opt = scp_optimum(&inst);
            let t = run(&inst, scheme, settings(), r).expect("run");
            (1.0 / t.best_fitness() - opt).abs() <= 1e-12 * opt
        })
        .count();
    out.check(scp_hits >= 19, format!("4x6 SCP: optimum in {scp_hits}/20 runs"));
    out
}

// 7 ---------------------------------------------------------------------

fn two_pass(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// The documented malformed inputs and the error each must produce.
fn malformed_inputs() -> Vec<(&'static str, Result<(), ParseError>, fn(&ParseError) -> bool)> {
    let cnf = |t: &str| parse_dimacs_cnf(t).map(|_| ());
    let scp = |t: &str| parse_orlib_scp::<f64>(t).map(|_| ());
    let tsp = |t: &str| parse_tsp::<f64>(t).map(|_| ());
    vec![
        ("cnf without problem line", cnf("c only a comment\n1 2 3 0\n"), |e| matches!(e, ParseError::MissingProblemLine { .. })),
        ("cnf with fewer clauses than declared", cnf("p cnf 3 2\n1 2 3 0\n"), |e| matches!(e, ParseError::ClauseCount { expected: 2, found: 1, .. })),
        ("cnf literal beyond variable count", cnf("p cnf 3 1\n1 -4 2 0\n"), |e| matches!(e, ParseError::VariableOutOfRange { lit: -4, .. })),
        ("cnf empty clause", cnf("p cnf 3 2\n1 2 3 0\n0\n"), |e| matches!(e, ParseError::EmptyClause { .. })),
        ("cnf clause of four literals", cnf("p cnf 4 1\n1 2 3 4 0\n"), |e| matches!(e, ParseError::ClauseTooLong { len: 4, .. })),
        ("scp column index 0", scp("2 3\n1 1 1\n1 0\n1 2\n"), |e| matches!(e, ParseError::ColumnOutOfRange { index: 0, .. })),
        ("scp row with no columns", scp("2 3\n1 1 1\n0\n1 2\n"), |e| matches!(e, ParseError::EmptyRow { row: 1, .. })),
        ("scp file cut short", scp("2 3\n1 1 1\n2 1 2\n"), |e| matches!(e, ParseError::Truncated { .. })),
        ("tsp asymmetric matrix", tsp("3\n0 0.1 0.2\n0.1 0 0.3\n0.2 0.4 0\n"), |e| matches!(e, ParseError::Asymmetric { .. })),
        ("tsp ragged row", tsp("3\n0 0.1 0.2\n0.1 0\n0.2 0.3 0\n"), |e| matches!(e, ParseError::RaggedRow { line: 3, .. })),
    ]
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new(7, "property suites");
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let mut bad_pmx = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(2..40);
        let mut a: Vec<usize> = (0..n).collect();
        let mut b = a.clone();
        a.shuffle(&mut rng);
        b.shuffle(&mut rng);
        let (c1, c2) = random_cuts(n, &mut rng);
        let mut child = pmx_crossover(&a, &b, c1, c2).expect("valid cuts");
        child.sort_unstable();
        bad_pmx += (child != (0..n).collect::<Vec<_>>()) as usize;
    }
    out.check(bad_pmx == 0, format!("PMX: {bad_pmx} non-permutations in 10000 crossovers"));

    let mut bad_scp = 0;
    for _ in 0..2000 {
        let (rows, cols) = (rng.gen_range(1..15), rng.gen_range(1..20));
        let inst = random_scp(&mut rng, rows, cols);
        let mut x: Vec<bool> = (0..inst.columns()).map(|_| rng.gen_bool(0.3)).collect();
        scp_repair(&mut x, &inst);
        let redundant = (0..x.len()).filter(|&j| x[j]).any(|j| {
            let mut y = x.clone();
            y[j] = false;
            inst.is_cover(&y)
        });
        bad_scp += (!inst.is_cover(&x) || redundant) as usize;
    }
    out.check(bad_scp == 0, format!("SCP repair: {bad_scp} infeasible or redundant covers in 2000 instances"));

    let fuzz: Vec<(&str, usize)> = vec![
        ("tsp", {
            let inst: TspInstance<f64> = gen_random_tsp(20, 3).unwrap();
            coherence_failures(&inst, 100, Deletion::Fuds, 100_000)
        }),
        ("deceptive", {
            let p = Deceptive2D::<f64>::centered(0.05).unwrap();
            coherence_failures(&p, 64, Deletion::Random, 100_000)
        }),
    ];
    for (name, bad) in fuzz {
        out.check(bad == 0, format!("level table coherent after each of 100000 cycles ({name}): {bad} failures"));
    }

    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.gen_range(2..300);
        let scale = 10f64.powi(rng.gen_range(-3..6));
        let offset = scale * rng.gen_range(-5.0..5.0);
        let x: Vec<f64> = (0..n).map(|_| offset + scale * rng.gen::<f64>()).collect();
        let s = aggregate(&x).expect("n >= 2");
        let (mean, sd) = two_pass(&x);
        worst = worst.max(rel(s.mean, mean)).max(rel(s.stddev, sd));
    }
    out.check(worst <= 1e-12, format!("aggregate vs two-pass: worst relative difference {worst:.2e}"));

    let fixtures = parse_dimacs_cnf(UF150).map(|i| (i.vars(), i.clause_count())).ok() == Some((150, 645))
        && parse_orlib_scp::<f64>(SCP4X).map(|i| (i.rows(), i.columns())).ok() == Some((200, 1000));
    out.check(fixtures, "fixtures parse: 150 vars / 645 clauses, 200 x 1000 cover".into());
    let cases = malformed_inputs();
    let rejected: Vec<&str> = cases
        .iter()
        .filter(|(_, r, want)| matches!(r, Err(e) if want(e)))
        .map(|(name, _, _)| *name)
        .collect();
    out.check(rejected.len() == cases.len(), format!("malformed inputs rejected with the expected error: {}/{}", rejected.len(), cases.len()));
    for (name, r, want) in &cases {
        if !matches!(r, Err(e) if want(e)) {
            out.note(format!("{name}: got {r:?}"));
        }
    }
    out
}

fn coherence_failures<P: Problem>(p: &P, capacity: usize, deletion: Deletion, cycles: usize) -> usize {
    let settings = RunSettings::new(capacity, StopRule::max_generations(1e9)).without_diversity();
    let mut e = Engine::new(p, SchemeConfig::tournament(3, deletion), settings, 17).expect("engine");
    let mut bad = 0;
    for _ in 0..cycles {
        e.step().expect("step");
        bad += e.population().check_coherence().is_err() as usize;
    }
    bad
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [fn() -> Outcome; 7] = [
        criterion_1,
        criterion_2,
        criterion_3,
        || criterion_4(&sat_problem()),
        || criterion_5(&sat_problem()),
        criterion_6,
        criterion_7,
    ];
    let outcomes: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&c| {
                s.spawn(move || {
                    let t = Instant::now();
                    let o = c();
                    (o, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });

    let mut failed = 0;
    for (o, secs) in &outcomes {
        println!("[{}] {}. {} ({secs:.1}s)", if o.pass { "PASS" } else { "FAIL" }, o.id, o.name);
        for line in &o.lines {
            println!("       {line}");
        }
        failed += !o.pass as usize;
    }
    println!(
        "acceptance: {} passed, {failed} failed ({:.1}s)",
        outcomes.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
