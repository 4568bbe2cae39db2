//! Subset selection that trades off a utility `g` against max-min
//! diversity: maximize `f(S) = g(S) + lambda * div(S)` subject to `|S| <= k`.
//!
//! The crate provides the GIST threshold-sweep algorithm, the baselines it is
//! compared against, exhaustive oracles for small instances, generators for
//! the structured instance families, and the `mdms` command-line tool.
//!
//! ```
//! use mdms::{gist, Instance, LinearUtility, Problem, Utility};
//!
//! let instance = Instance::euclidean(vec![vec![0.0], vec![1.0], vec![4.0]]).unwrap();
//! let utility: Utility = LinearUtility::new(vec![0.5, 2.0, 3.0]).unwrap().into();
//! let problem = Problem::new(&instance, &utility, 1.0, 2).unwrap();
//! let solution = gist(&problem).unwrap();
//! assert_eq!(solution.selected, vec![1, 2]);
//! ```

pub mod algorithms;
pub mod cli;
pub mod error;
pub mod generators;
pub mod instance;
pub mod objective;
pub mod oracle;
pub mod utility;

pub use algorithms::{
    classic_greedy, gist, greedy_independent_set, random_baseline, simple_baseline, solve, AlgoConfig,
};
pub use error::{Error, Result};
pub use instance::{Instance, Metric, SetDistance};
pub use objective::{distance_thresholds, objective, Algorithm, Evaluation, Problem, Schedule, Solution};
pub use oracle::{brute_force_constrained, brute_force_opt, ratio_report, ExactResult, RatioReport};
pub use utility::{
    check_exhaustive, check_monotone_submodular, BudgetAdditiveUtility, CoverageUtility, LinearUtility,
    MarginSimilarityUtility, PropertyReport, TabulatedUtility, Utility, UtilityKind,
};
