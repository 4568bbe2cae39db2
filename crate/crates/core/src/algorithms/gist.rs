use rayon::prelude::*;

use super::independent_set::run;
use super::AlgoConfig;
use crate::error::Result;
use crate::objective::{Algorithm, Evaluation, Problem, Schedule, Solution};

/// Thresholds are split into this many contiguous blocks. Blocks are the unit
/// of parallelism, and the sequential path walks the same blocks so both
/// modes issue identical oracle queries.
pub const THRESHOLD_BLOCKS: usize = 16;

#[derive(Debug, Clone)]
struct Candidate {
    set: Vec<usize>,
    eval: Evaluation,
    threshold: Option<f64>,
}

impl Candidate {
    // Later candidates win ties, matching the non-strict update of the sweep.
    fn absorb(&mut self, other: Candidate) {
        if other.eval.f >= self.eval.f {
            *self = other;
        }
    }
}

/// GIST with the default configuration.
pub fn gist(problem: &Problem<'_>) -> Result<Solution> {
    gist_with(problem, &AlgoConfig::default())
}

/// Best of the `d = 0` greedy solution, a diametrical pair, and the greedy
/// independent set at every threshold of the problem's schedule.
///
/// Within a block, a run at threshold `d` is reused for every later
/// threshold up to the smallest distance it compared and kept, since those
/// thresholds make exactly the same decisions.
pub fn gist_with(problem: &Problem<'_>, config: &AlgoConfig) -> Result<Solution> {
    problem.validate()?;
    let label = match problem.schedule {
        Schedule::Geometric => Algorithm::Gist,
        Schedule::Exhaustive => Algorithm::GistExhaustive,
    };
    let (instance, utility, k) = (problem.instance, problem.utility, problem.k);

    let first = run(instance, utility, 0.0, k);
    let mut calls = first.queries + 1;
    let mut best = evaluate(problem, first.order, None);

    if k >= 2 {
        if let Some((u, v)) = instance.diameter().pair {
            calls += 1;
            let pair = evaluate(problem, vec![u, v], None);
            if pair.eval.f > best.eval.f {
                best = pair;
            }
        }
    }

    let thresholds = problem.thresholds();
    let block_len = thresholds.len().div_ceil(THRESHOLD_BLOCKS).max(1);
    let sweep = |block: &[f64]| -> (Option<Candidate>, u64) {
        let mut winner: Option<Candidate> = None;
        let mut calls = 0;
        let mut i = 0;
        while i < block.len() {
            let r = run(instance, utility, block[i], k);
            calls += r.queries + 1;
            let mut last = i;
            while last + 1 < block.len() && block[last + 1] <= r.stable_until {
                last += 1;
            }
            let cand = evaluate(problem, r.order, Some(block[last]));
            match &mut winner {
                Some(w) => w.absorb(cand),
                None => winner = Some(cand),
            }
            i = last + 1;
        }
        (winner, calls)
    };

    let blocks: Vec<(Option<Candidate>, u64)> = if config.parallel_thresholds {
        thresholds.par_chunks(block_len).map(sweep).collect()
    } else {
        thresholds.chunks(block_len).map(sweep).collect()
    };
    for (winner, block_calls) in blocks {
        calls += block_calls;
        if let Some(w) = winner {
            best.absorb(w);
        }
    }

    let mut sol = Solution::new(best.set, best.eval, label, calls);
    sol.winning_threshold = best.threshold;
    Ok(sol)
}

fn evaluate(problem: &Problem<'_>, mut set: Vec<usize>, threshold: Option<f64>) -> Candidate {
    set.sort_unstable();
    let eval = problem.evaluate_sorted(&set);
    Candidate { set, eval, threshold }
}
