use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::record::{provenance_hash, write_csv, RunRecord};
use super::{
    CliError, CliResult, FamilyArg, Format, GenArgs, ProblemArgs, SolveArgs, SweepArgs, VerifyArgs, EXIT_OK,
    EXIT_VIOLATION,
};
use crate::algorithms::{solve as run_algorithm, AlgoConfig};
use crate::generators::{
    gen_clique_reduction, gen_counterexample, gen_cover_reduction, gen_gaussian, gen_greedy_hard,
    gen_independent_set_reduction, GeneratedInstance, Graph,
};
use crate::instance::Instance;
use crate::objective::{Algorithm, Problem, Schedule};
use crate::oracle::{brute_force_opt, RatioReport};
use crate::utility::Utility;

/// Simple-baseline guarantee `(e - 1) / (2e - 1)`.
pub const SIMPLE_BOUND: f64 = (std::f64::consts::E - 1.0) / (2.0 * std::f64::consts::E - 1.0);
const EXACT_SLACK: f64 = 1e-9;

pub(crate) fn read_to_string(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    let res = match out {
        Some(p) => std::fs::write(p, bytes),
        None => std::io::stdout().lock().write_all(bytes),
    };
    res.map_err(|e| CliError::parse(format!("cannot write output: {e}")))
}

pub(crate) fn json_line(value: &impl Serialize) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(value).expect("records serialize");
    s.push(b'\n');
    s
}

fn load_inputs(args: &ProblemArgs) -> CliResult<(Instance, Utility, Schedule)> {
    let schedule: Schedule = args.schedule.parse()?;
    let instance = Instance::from_json(&read_to_string(&args.instance)?)?;
    let utility = Utility::from_json(&read_to_string(&args.utility)?)?;
    Ok((instance, utility, schedule))
}

fn parse_algorithms(spec: &str) -> CliResult<Vec<Algorithm>> {
    let mut out = Vec::new();
    for name in spec.split(',').map(str::trim) {
        if name == "all" {
            out.extend(Algorithm::ALL);
        } else {
            out.push(name.parse()?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_list<T: std::str::FromStr>(what: &str, spec: &str) -> CliResult<Vec<T>> {
    spec.split(',')
        .map(|s| s.trim().parse().map_err(|_| CliError::parameter(format!("bad {what} `{s}`"))))
        .collect()
}

/// Comma-separated items, each a single `k` or an inclusive range
/// `start:stop:step`.
fn parse_k_list(spec: &str) -> CliResult<Vec<usize>> {
    let mut ks = Vec::new();
    for item in spec.split(',').map(str::trim) {
        if item.contains(':') {
            let parts: Vec<usize> = item
                .split(':')
                .map(|p| p.trim().parse().map_err(|_| CliError::parameter(format!("bad k range `{item}`"))))
                .collect::<CliResult<_>>()?;
            match parts[..] {
                [start, stop, step] if step > 0 => ks.extend((start..=stop).step_by(step)),
                _ => return Err(CliError::parameter(format!("k range `{item}` must be start:stop:step with step > 0"))),
            }
        } else {
            ks.push(item.parse().map_err(|_| CliError::parameter(format!("bad k `{item}`")))?);
        }
    }
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() {
        return Err(CliError::parameter("k list is empty"));
    }
    Ok(ks)
}

struct Cell<'a> {
    instance: &'a Instance,
    utility: &'a Utility,
    lambda: f64,
    k: usize,
    epsilon: f64,
    schedule: Schedule,
    config: AlgoConfig,
    timing: bool,
    hash: &'a str,
}

impl Cell<'_> {
    fn run(&self, algorithm: Algorithm) -> CliResult<RunRecord> {
        let problem = Problem::new(self.instance, self.utility, self.lambda, self.k)?
            .with_epsilon(self.epsilon)?
            .with_schedule(self.schedule);
        let start = Instant::now();
        let solution = run_algorithm(&problem, algorithm, &self.config)?;
        let ms = if self.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
        Ok(RunRecord::new(&solution, self.k, self.config.seed, ms, self.hash))
    }
}

pub(crate) fn solve(args: &SolveArgs) -> CliResult<u8> {
    let (instance, utility, schedule) = load_inputs(&args.problem)?;
    let algorithms = if args.algorithm == "all" {
        Algorithm::ALL.to_vec()
    } else {
        vec![args.algorithm.parse::<Algorithm>()?]
    };
    let utility = utility.with_cardinality(args.k)?;
    let hash = provenance_hash(&instance);
    let cell = Cell {
        instance: &instance,
        utility: &utility,
        lambda: args.problem.lambda,
        k: args.k,
        epsilon: args.problem.epsilon,
        schedule,
        config: AlgoConfig {
            seed: args.seed,
            parallel_thresholds: args.parallel,
            greedy_stop_on_negative: !args.greedy_all_steps,
        },
        timing: !args.no_timing,
        hash: &hash,
    };
    let records = algorithms.iter().map(|&a| cell.run(a)).collect::<CliResult<Vec<_>>>()?;
    let bytes = match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &records)?;
            buf
        }
        Format::Json if records.len() == 1 => json_line(&records[0]),
        Format::Json => json_line(&records),
    };
    emit(args.out.as_deref(), &bytes)?;
    Ok(EXIT_OK)
}

pub(crate) fn sweep(args: &SweepArgs) -> CliResult<u8> {
    let (instance, utility, schedule) = load_inputs(&args.problem)?;
    let ks = parse_k_list(&args.k_list)?;
    let algorithms = parse_algorithms(&args.algorithms)?;
    let mut seeds: Vec<u64> = parse_list("seed", &args.seeds)?;
    seeds.sort_unstable();
    seeds.dedup();
    for &k in &ks {
        if k == 0 || k > instance.len() {
            return Err(CliError::parameter(format!("k = {k} must satisfy 1 <= k <= n = {}", instance.len())));
        }
    }
    let utilities = ks.iter().map(|&k| utility.with_cardinality(k)).collect::<crate::Result<Vec<_>>>()?;
    let hash = provenance_hash(&instance);

    let mut cells = Vec::new();
    for (ki, &k) in ks.iter().enumerate() {
        for &a in &algorithms {
            for &seed in &seeds {
                cells.push((ki, k, a, seed));
            }
        }
    }
    let run = |&(ki, k, a, seed): &(usize, usize, Algorithm, u64)| {
        Cell {
            instance: &instance,
            utility: &utilities[ki],
            lambda: args.problem.lambda,
            k,
            epsilon: args.problem.epsilon,
            schedule,
            config: AlgoConfig { seed, parallel_thresholds: false, greedy_stop_on_negative: !args.greedy_all_steps },
            timing: !args.no_timing,
            hash: &hash,
        }
        .run(a)
    };
    let records: Vec<RunRecord> = if args.parallel {
        cells.par_iter().map(run).collect::<CliResult<_>>()?
    } else {
        cells.iter().map(run).collect::<CliResult<_>>()?
    };
    let mut buf = Vec::new();
    write_csv(&mut buf, &records)?;
    emit(args.out.as_deref(), &buf)?;
    Ok(EXIT_OK)
}

/// Proven lower bound on `f / OPT` for `algorithm`, if any.
pub fn guarantee(algorithm: Algorithm, utility: &Utility, epsilon: f64) -> Option<f64> {
    let submodular = utility.monotone_declared() && utility.submodular_declared();
    match algorithm {
        Algorithm::Gist if utility.is_linear() => Some(2.0 / 3.0 - epsilon),
        Algorithm::Gist if submodular => Some(0.5 - epsilon),
        Algorithm::GistExhaustive if utility.is_linear() => Some(2.0 / 3.0 - EXACT_SLACK),
        Algorithm::GistExhaustive if submodular => Some(0.5 - EXACT_SLACK),
        Algorithm::Simple if submodular => Some(SIMPLE_BOUND - EXACT_SLACK),
        Algorithm::BruteForce => Some(1.0 - EXACT_SLACK),
        _ => None,
    }
}

#[derive(Debug, Serialize)]
struct VerifyRow {
    algorithm: Algorithm,
    f: f64,
    selected: Vec<usize>,
    ratio: Option<f64>,
    bound: Option<f64>,
    pass: bool,
    /// Ratio below one half. Informational for algorithms without a bound.
    below_half: bool,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    instance_hash: String,
    k: usize,
    lambda: f64,
    epsilon: f64,
    opt_value: f64,
    witness: Vec<usize>,
    subsets_examined: u64,
    rows: Vec<VerifyRow>,
    violations: usize,
}

pub(crate) fn verify(args: &VerifyArgs) -> CliResult<u8> {
    let (instance, utility, schedule) = load_inputs(&args.problem)?;
    let utility = utility.with_cardinality(args.k)?;
    let problem = Problem::new(&instance, &utility, args.problem.lambda, args.k)?
        .with_epsilon(args.problem.epsilon)?
        .with_schedule(schedule);
    let exact = brute_force_opt(&problem)?;
    let config = AlgoConfig { seed: args.seed, ..AlgoConfig::default() };

    let mut rows = Vec::new();
    for algorithm in Algorithm::ALL {
        let sol = run_algorithm(&problem, algorithm, &config)?;
        let report = RatioReport::new(sol.f_value, exact.opt_value);
        // A geometric-schedule bound only applies when the problem uses that schedule.
        let bound = match (algorithm, schedule) {
            (Algorithm::Gist, Schedule::Exhaustive) => guarantee(Algorithm::GistExhaustive, &utility, problem.epsilon),
            _ => guarantee(algorithm, &utility, problem.epsilon),
        };
        let pass = match (bound, report.ratio) {
            (Some(b), Some(r)) => r >= b,
            _ => true,
        };
        let below_half = report.ratio.is_some_and(|r| r < 0.5);
        rows.push(VerifyRow {
            algorithm,
            f: sol.f_value,
            selected: sol.selected,
            ratio: report.ratio,
            bound,
            pass,
            below_half,
        });
    }
    let violations = rows.iter().filter(|r| !r.pass).count();
    for r in &rows {
        let ratio = r.ratio.map_or("-".to_string(), |x| format!("{x:.6}"));
        let bound = r.bound.map_or("none".to_string(), |x| format!("{x:.6}"));
        let flag = if r.pass { "ok" } else { "VIOLATION" };
        eprintln!("{:<16} f = {:<12.6} ratio = {ratio:<9} bound = {bound:<9} {flag}", r.algorithm.label(), r.f);
    }
    let report = VerifyReport {
        instance_hash: provenance_hash(&instance),
        k: args.k,
        lambda: args.problem.lambda,
        epsilon: problem.epsilon,
        opt_value: exact.opt_value,
        witness: exact.witness,
        subsets_examined: exact.subsets_examined,
        rows,
        violations,
    };
    emit(args.out.as_deref(), &json_line(&report))?;
    Ok(if violations == 0 { EXIT_OK } else { EXIT_VIOLATION })
}

#[derive(Deserialize)]
struct SetFamilyFile {
    sets: Vec<Vec<u64>>,
    #[serde(default)]
    groups: Option<Vec<usize>>,
}

fn graph_for(args: &GenArgs) -> CliResult<(Graph, Option<u64>)> {
    match &args.graph {
        Some(p) => Ok((serde_json::from_str(&read_to_string(p)?).map_err(crate::Error::from)?, None)),
        None => {
            let n = args.n.unwrap_or(10);
            Ok((Graph::random_bounded_degree(n, args.max_degree, args.p, args.seed), Some(args.seed)))
        }
    }
}

fn generate(args: &GenArgs) -> CliResult<GeneratedInstance> {
    let mut gen = match args.family {
        FamilyArg::Gaussian => {
            gen_gaussian(args.n.unwrap_or(1000), args.dim, args.seed)?.generated(
                args.alpha,
                args.beta,
                args.k.unwrap_or(25),
            )?
        }
        FamilyArg::GreedyHard => gen_greedy_hard(args.n.unwrap_or(8), args.k.unwrap_or(6), args.eps)?,
        FamilyArg::Counterexample => gen_counterexample(args.monotone)?,
        FamilyArg::Clique | FamilyArg::IndependentSet => {
            let (graph, seed) = graph_for(args)?;
            let k = args.k.unwrap_or(3);
            let mut gen = if args.family == FamilyArg::Clique {
                gen_clique_reduction(&graph, args.alpha, k)?
            } else {
                gen_independent_set_reduction(&graph, args.alpha, k)?
            };
            if let Some(seed) = seed {
                gen.params.insert("max_degree".into(), args.max_degree.into());
                gen.params.insert("p".into(), args.p.into());
                gen.seed = Some(seed);
            }
            gen
        }
        FamilyArg::Cover => {
            let path = args.sets.as_ref().ok_or_else(|| CliError::parameter("--sets is required for the cover family"))?;
            let file: SetFamilyFile = serde_json::from_str(&read_to_string(path)?).map_err(crate::Error::from)?;
            gen_cover_reduction(file.sets, file.groups, args.lambda)?
        }
    };
    if let Some(lambda) = args.lambda {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(CliError::parameter(format!("lambda = {lambda} must be a nonnegative real")));
        }
        gen.lambda = lambda;
    }
    Ok(gen)
}

fn with_provenance(mut value: Value, provenance: &Value) -> Value {
    if let Value::Object(map) = &mut value {
        map.insert("provenance".into(), provenance.clone());
    }
    value
}

pub(crate) fn gen(args: &GenArgs) -> CliResult<u8> {
    let gen = generate(args)?;
    let provenance = gen.provenance();
    let instance = serde_json::to_value(gen.instance.to_file()).map_err(crate::Error::from)?;
    let utility = serde_json::to_value(gen.utility.to_file()?).map_err(crate::Error::from)?;
    for (path, value) in [(&args.instance_out, instance), (&args.utility_out, utility)] {
        let mut bytes = serde_json::to_vec(&with_provenance(value, &provenance)).map_err(crate::Error::from)?;
        bytes.push(b'\n');
        emit(Some(path), &bytes)?;
    }
    Ok(EXIT_OK)
}
