//! Selection algorithms for max-min diversification with a utility term.
//!
//! Every algorithm breaks ties in marginal gain by taking the lowest index,
//! so identical inputs always give identical [`Solution`]s.

mod baselines;
mod gist;
mod independent_set;

pub use baselines::{classic_greedy, classic_greedy_with, random_baseline, simple_baseline};
pub use gist::{gist, gist_with, THRESHOLD_BLOCKS};
pub use independent_set::{greedy_independent_set, IndependentSet};

use crate::error::Result;
use crate::objective::{Algorithm, Problem, Schedule, Solution};
use crate::oracle::brute_force_opt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgoConfig {
    /// Seed for the random baseline.
    pub seed: u64,
    /// Sweep GIST threshold blocks on the rayon pool. Output is identical
    /// either way.
    pub parallel_thresholds: bool,
    /// Classic greedy stops once every remaining point has negative gain.
    pub greedy_stop_on_negative: bool,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        AlgoConfig {
            seed: 0,
            parallel_thresholds: false,
            greedy_stop_on_negative: true,
        }
    }
}

/// Runs `algorithm` on `problem`.
///
/// [`Algorithm::Gist`] uses the problem's schedule and
/// [`Algorithm::GistExhaustive`] forces the exhaustive one.
pub fn solve(problem: &Problem<'_>, algorithm: Algorithm, config: &AlgoConfig) -> Result<Solution> {
    match algorithm {
        Algorithm::Gist => gist_with(problem, config),
        Algorithm::GistExhaustive => gist_with(&problem.with_schedule(Schedule::Exhaustive), config),
        Algorithm::Simple => simple_baseline(problem),
        Algorithm::Greedy => classic_greedy_with(problem, config),
        Algorithm::Random => random_baseline(problem, config.seed),
        Algorithm::BruteForce => {
            let exact = brute_force_opt(problem)?;
            let eval = problem.evaluate_sorted(&exact.witness);
            Ok(Solution::new(exact.witness, eval, Algorithm::BruteForce, exact.subsets_examined + 1))
        }
    }
}
