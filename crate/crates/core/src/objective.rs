//! The MDMS objective `f(S) = g(S) + lambda * div(S)` and the problem and
//! solution types shared by every algorithm.

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::instance::{canonical, Instance};
use crate::utility::Utility;

/// Which distance thresholds GIST sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// `(1+eps)^i * eps * d_max / 2` for `(1+eps)^i <= 2/eps`.
    #[default]
    Geometric,
    /// Half of every distinct pairwise distance.
    Exhaustive,
}

impl std::str::FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(Schedule::Geometric),
            "exhaustive" => Ok(Schedule::Exhaustive),
            _ => Err(Error::Parameter(format!("unknown schedule `{s}`"))),
        }
    }
}

impl std::fmt::Display for Schedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Schedule::Geometric => "geometric",
            Schedule::Exhaustive => "exhaustive",
        })
    }
}

/// A fully specified MDMS problem over borrowed data.
#[derive(Debug, Clone, Copy)]
pub struct Problem<'a> {
    pub instance: &'a Instance,
    pub utility: &'a Utility,
    pub lambda: f64,
    pub k: usize,
    pub epsilon: f64,
    pub schedule: Schedule,
}

impl<'a> Problem<'a> {
    /// Builds a problem with `epsilon = 0.1` and the geometric schedule.
    pub fn new(instance: &'a Instance, utility: &'a Utility, lambda: f64, k: usize) -> Result<Self> {
        let p = Problem {
            instance,
            utility,
            lambda,
            k,
            epsilon: 0.1,
            schedule: Schedule::Geometric,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        self.epsilon = epsilon;
        self.validate()?;
        Ok(self)
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.instance.len();
        if n == 0 {
            return Err(Error::Parameter("instance is empty".into()));
        }
        if self.utility.len() != n {
            return Err(Error::Parameter(format!(
                "utility is defined on {} points but the instance has {n}",
                self.utility.len()
            )));
        }
        if self.k == 0 || self.k > n {
            return Err(Error::Parameter(format!("k = {} must satisfy 1 <= k <= n = {n}", self.k)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Parameter(format!("epsilon = {} must lie in (0, 1)", self.epsilon)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::Parameter(format!("lambda = {} must be a nonnegative real", self.lambda)));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.instance.len()
    }

    /// Evaluates the objective on `set`. Counts one utility query.
    pub fn objective(&self, set: &[usize]) -> Result<Evaluation> {
        let set = canonical(set);
        for &i in set.iter() {
            check_index(i, self.n())?;
        }
        Ok(self.evaluate_sorted(&set))
    }

    pub(crate) fn evaluate_sorted(&self, set: &[usize]) -> Evaluation {
        self.utility.record_queries(1);
        let g = self.utility.value_sorted(set);
        let div = self.instance.div_unchecked(set);
        Evaluation { f: g + self.lambda * div, g, div }
    }

    pub fn thresholds(&self) -> Vec<f64> {
        distance_thresholds(self.instance, self.schedule, self.epsilon)
    }
}

/// `(f, g, div)` for one set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub f: f64,
    pub g: f64,
    pub div: f64,
}

/// Objective value of `set` with its decomposition. Counts one utility query.
pub fn objective(problem: &Problem<'_>, set: &[usize]) -> Result<Evaluation> {
    problem.objective(set)
}

/// Distance thresholds swept by GIST, strictly increasing.
///
/// Empty when the instance has fewer than two points or zero diameter.
pub fn distance_thresholds(instance: &Instance, schedule: Schedule, epsilon: f64) -> Vec<f64> {
    let d_max = instance.d_max();
    if instance.len() < 2 || d_max == 0.0 {
        return Vec::new();
    }
    match schedule {
        Schedule::Geometric => {
            let base = epsilon * d_max / 2.0;
            let limit = 2.0 / epsilon;
            let mut out = Vec::new();
            let mut i = 0i32;
            loop {
                let scale = (1.0 + epsilon).powi(i);
                if scale > limit {
                    break;
                }
                out.push(scale * base);
                i += 1;
            }
            out
        }
        Schedule::Exhaustive => {
            let mut out: Vec<f64> = instance.pairwise().into_iter().map(|d| d / 2.0).collect();
            out.sort_by(f64::total_cmp);
            out.dedup();
            out
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Gist,
    GistExhaustive,
    Simple,
    Greedy,
    Random,
    BruteForce,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Gist,
        Algorithm::Simple,
        Algorithm::Greedy,
        Algorithm::Random,
        Algorithm::GistExhaustive,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Gist => "gist",
            Algorithm::GistExhaustive => "gist-exhaustive",
            Algorithm::Simple => "simple",
            Algorithm::Greedy => "greedy",
            Algorithm::Random => "random",
            Algorithm::BruteForce => "brute-force",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Algorithm::Gist,
            Algorithm::GistExhaustive,
            Algorithm::Simple,
            Algorithm::Greedy,
            Algorithm::Random,
            Algorithm::BruteForce,
        ]
        .into_iter()
        .find(|a| a.label() == s)
        .ok_or_else(|| Error::Parameter(format!("unknown algorithm `{s}`")))
    }
}

/// Output of a selection algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    /// Selected points, ascending.
    pub selected: Vec<usize>,
    pub f_value: f64,
    pub g_value: f64,
    pub div_value: f64,
    /// Threshold whose candidate won, for GIST; `None` for the `d = 0` pass,
    /// the diametrical pair, and other algorithms.
    pub winning_threshold: Option<f64>,
    pub oracle_calls: u64,
    pub algorithm: Algorithm,
    pub seed: Option<u64>,
}

impl Solution {
    pub(crate) fn new(mut selected: Vec<usize>, eval: Evaluation, algorithm: Algorithm, oracle_calls: u64) -> Self {
        selected.sort_unstable();
        Solution {
            selected,
            f_value: eval.f,
            g_value: eval.g,
            div_value: eval.div,
            winning_threshold: None,
            oracle_calls,
            algorithm,
            seed: None,
        }
    }
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
