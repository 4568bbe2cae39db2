//! Exhaustive solvers used as ground truth on small instances.
//!
//! Subsets are enumerated by size, then lexicographically. Among sets with
//! the same optimal value the witness is the largest one, and the
//! lexicographically smallest among those.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::objective::{Problem, Solution};
use crate::utility::Utility;

/// Refuse enumerations that would visit more subsets than this.
pub const MAX_SUBSETS: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactResult {
    pub opt_value: f64,
    pub witness: Vec<usize>,
    pub subsets_examined: u64,
}

/// Number of subsets of size `1..=k` of an `n`-set.
pub fn subsets_up_to(n: usize, k: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for s in 1..=k.min(n) {
        c = c * (n - s + 1) as u128 / s as u128;
        total += c;
    }
    total
}

fn guard(n: usize, k: usize) -> Result<()> {
    let subsets = subsets_up_to(n, k);
    if subsets > MAX_SUBSETS {
        return Err(Error::TooLarge { subsets, limit: MAX_SUBSETS });
    }
    Ok(())
}

// Visits every subset of size 1..=k in (size, lexicographic) order.
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    for size in 1..=k.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            visit(&idx);
            // Advance to the next combination.
            let mut i = size;
            while i > 0 && idx[i - 1] == n - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

struct Best {
    value: f64,
    witness: Vec<usize>,
}

impl Best {
    fn offer(&mut self, value: f64, set: &[usize]) {
        // Enumeration is size-major, so equal values from larger sets win.
        if value > self.value || (value == self.value && set.len() > self.witness.len()) {
            self.value = value;
            self.witness = set.to_vec();
        }
    }
}

/// `max_{1 <= |S| <= k} f(S)` by enumeration.
pub fn brute_force_opt(problem: &Problem<'_>) -> Result<ExactResult> {
    problem.validate()?;
    guard(problem.n(), problem.k)?;
    let mut best = Best { value: f64::NEG_INFINITY, witness: Vec::new() };
    let mut examined = 0u64;
    for_each_subset(problem.n(), problem.k, |s| {
        examined += 1;
        let f = problem.utility.value_sorted(s) + problem.lambda * problem.instance.div_unchecked(s);
        best.offer(f, s);
    });
    problem.utility.record_queries(examined);
    Ok(ExactResult { opt_value: best.value, witness: best.witness, subsets_examined: examined })
}

/// `max g(S)` over `1 <= |S| <= k` with `div(S) >= d`.
///
/// Singletons have diversity `d_max`, so they are feasible exactly when
/// `d <= d_max`; beyond that nothing is feasible and
/// [`Error::Infeasible`] is returned.
pub fn brute_force_constrained(instance: &Instance, utility: &Utility, d: f64, k: usize) -> Result<ExactResult> {
    let n = instance.len();
    if utility.len() != n {
        return Err(Error::Parameter(format!(
            "utility is defined on {} points but the instance has {n}",
            utility.len()
        )));
    }
    if k == 0 {
        return Err(Error::Parameter("k must be >= 1".into()));
    }
    guard(n, k)?;
    let mut best = Best { value: f64::NEG_INFINITY, witness: Vec::new() };
    let mut examined = 0u64;
    for_each_subset(n, k, |s| {
        if instance.div_unchecked(s) >= d {
            examined += 1;
            best.offer(utility.value_sorted(s), s);
        }
    });
    utility.record_queries(examined);
    if best.witness.is_empty() {
        return Err(Error::Infeasible(d));
    }
    Ok(ExactResult { opt_value: best.value, witness: best.witness, subsets_examined: examined })
}

/// Algorithm value relative to the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioReport {
    pub algorithm_value: f64,
    pub opt_value: f64,
    /// `None` when the optimum is zero but the algorithm value is not.
    pub ratio: Option<f64>,
}

impl RatioReport {
    pub fn new(algorithm_value: f64, opt_value: f64) -> Self {
        let ratio = if opt_value != 0.0 {
            Some(algorithm_value / opt_value)
        } else if algorithm_value == 0.0 {
            Some(1.0)
        } else {
            None
        };
        RatioReport { algorithm_value, opt_value, ratio }
    }

    pub fn is_degenerate(&self) -> bool {
        self.ratio.is_none()
    }
}

/// Compares `solution` against [`brute_force_opt`] on the same problem.
pub fn ratio_report(problem: &Problem<'_>, solution: &Solution) -> Result<RatioReport> {
    let opt = brute_force_opt(problem)?;
    Ok(RatioReport::new(solution.f_value, opt.opt_value))
}
