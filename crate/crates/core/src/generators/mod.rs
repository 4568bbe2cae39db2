//! Instance families: the synthetic Gaussian benchmark, adversarial
//! instances for the baselines, and the constructive reductions from clique,
//! bounded-degree independent set and set coverage.
//!
//! Every generator is a pure function of its parameters and seed.

mod graph;

pub use graph::{embed_graph, Graph};

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::objective::Problem;
use crate::utility::{BudgetAdditiveUtility, CoverageUtility, LinearUtility, TabulatedUtility, Utility};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gaussian,
    GreedyHard,
    Counterexample,
    CliqueReduction,
    IndependentSetReduction,
    CoverReduction,
}

/// Instance, utility and recommended `(lambda, k)` with their provenance.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub instance: Instance,
    pub utility: Utility,
    pub lambda: f64,
    pub k: usize,
    pub family: Family,
    pub params: BTreeMap<String, Value>,
    pub seed: Option<u64>,
}

impl GeneratedInstance {
    /// Problem with the recommended `lambda` and `k`.
    pub fn problem(&self) -> Result<Problem<'_>> {
        Problem::new(&self.instance, &self.utility, self.lambda, self.k)
    }

    pub fn provenance(&self) -> Value {
        json!({
            "family": self.family,
            "params": self.params,
            "seed": self.seed,
            "lambda": self.lambda,
            "k": self.k,
        })
    }
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn matrix_instance(n: usize, dist: impl Fn(usize, usize) -> f64) -> Result<Instance> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = dist(i, j);
            m[i * n + j] = d;
            m[j * n + i] = d;
        }
    }
    Instance::from_matrix(n, m)
}

/// Standard-normal points with uniform weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianData {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub seed: u64,
}

/// `n` i.i.d. `N(0, I_dim)` points and `n` i.i.d. `U[0, 1)` weights.
///
/// Draws come from ChaCha8 seeded with `seed`: all coordinates row by row
/// (ziggurat sampler for the normal), then all weights.
pub fn gen_gaussian(n: usize, dim: usize, seed: u64) -> Result<GaussianData> {
    if n == 0 || dim == 0 {
        return Err(Error::Parameter("gaussian generator needs n >= 1 and d >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
        .collect();
    let weights = (0..n).map(|_| rng.random::<f64>()).collect();
    Ok(GaussianData { points, weights, seed })
}

impl GaussianData {
    /// Packages the data with `g = alpha * min{(1/k) sum w, beta}` and
    /// `lambda = 1 - alpha`.
    pub fn generated(&self, alpha: f64, beta: f64, k: usize) -> Result<GeneratedInstance> {
        let instance = Instance::euclidean(self.points.clone())?;
        let utility = BudgetAdditiveUtility::new(self.weights.clone(), alpha, beta, k)?.into();
        Ok(GeneratedInstance {
            instance,
            utility,
            lambda: 1.0 - alpha,
            k,
            family: Family::Gaussian,
            params: params(&[
                ("n", json!(self.points.len())),
                ("d", json!(self.points[0].len())),
                ("alpha", json!(alpha)),
                ("beta", json!(beta)),
            ]),
            seed: Some(self.seed),
        })
    }
}

/// One pair `(0, 1)` at distance `2 + 2 eps`, all other pairs at `1 + eps`,
/// `g(S) = |S|`, `lambda = 1`. Greedy on `f` grabs the far pair and then
/// finds only negative gains.
pub fn gen_greedy_hard(n: usize, k: usize, eps: f64) -> Result<GeneratedInstance> {
    if k < 4 || n < k {
        return Err(Error::Parameter(format!("greedy-hard needs n >= k >= 4, got n = {n}, k = {k}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter(format!("eps = {eps} must lie in (0, 1)")));
    }
    let far = 2.0 + 2.0 * eps;
    let near = 1.0 + eps;
    let instance = matrix_instance(n, |i, j| if (i, j) == (0, 1) { far } else { near })?;
    Ok(GeneratedInstance {
        instance,
        utility: LinearUtility::uniform(n, 1.0)?.into(),
        lambda: 1.0,
        k,
        family: Family::GreedyHard,
        params: params(&[("n", json!(n)), ("k", json!(k)), ("eps", json!(eps))]),
        seed: None,
    })
}

/// Four collinear points `a = 0, b = 1, c = d = 2` with `lambda = 1` and
/// `g = 0`, or `g(S) = 2|S|` for the monotone variant.
pub fn gen_counterexample(monotone_variant: bool) -> Result<GeneratedInstance> {
    let instance = Instance::euclidean(vec![vec![0.0], vec![1.0], vec![2.0], vec![2.0]])?;
    let utility = if monotone_variant {
        LinearUtility::uniform(4, 2.0)?.into()
    } else {
        Utility::zero(4)
    };
    Ok(GeneratedInstance {
        instance,
        utility,
        lambda: 1.0,
        k: 4,
        family: Family::Counterexample,
        params: params(&[("monotone_variant", json!(monotone_variant))]),
        seed: None,
    })
}

/// `f(S) = g(S) + lambda * div(S)` tabulated over every subset, including
/// `f(∅) = g(∅) + lambda * d_max`.
pub fn tabulate_objective(problem: &Problem<'_>) -> Result<TabulatedUtility> {
    TabulatedUtility::from_fn(problem.n(), |s| {
        problem.utility.value_sorted(s) + problem.lambda * problem.instance.div_unchecked(s)
    })
}

fn check_alpha_k(alpha: f64, k: usize, n: usize) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Parameter(format!("alpha = {alpha} must lie in (0, 1]")));
    }
    if k == 0 || k > n {
        return Err(Error::Parameter(format!("k = {k} must satisfy 1 <= k <= n = {n}")));
    }
    Ok(())
}

/// Distance 2 across edges and 1 across non-edges, `w(v) = alpha / k`,
/// `lambda = 1 - alpha`. A `k`-clique scores `2 - alpha`.
pub fn gen_clique_reduction(graph: &Graph, alpha: f64, k: usize) -> Result<GeneratedInstance> {
    let n = graph.n();
    check_alpha_k(alpha, k, n)?;
    let instance = matrix_instance(n, |i, j| if graph.has_edge(i, j) { 2.0 } else { 1.0 })?;
    Ok(GeneratedInstance {
        instance,
        utility: LinearUtility::uniform(n, alpha / k as f64)?.into(),
        lambda: 1.0 - alpha,
        k,
        family: Family::CliqueReduction,
        params: params(&[("graph", serde_json::to_value(graph)?), ("alpha", json!(alpha)), ("k", json!(k))]),
        seed: None,
    })
}

/// [`embed_graph`] points under the Euclidean metric, `w(v) = alpha / k`,
/// `lambda = 1 - alpha`. An independent set of size `k` scores exactly 1.
pub fn gen_independent_set_reduction(graph: &Graph, alpha: f64, k: usize) -> Result<GeneratedInstance> {
    let n = graph.n();
    check_alpha_k(alpha, k, n)?;
    let instance = Instance::euclidean(embed_graph(graph))?;
    Ok(GeneratedInstance {
        instance,
        utility: LinearUtility::uniform(n, alpha / k as f64)?.into(),
        lambda: 1.0 - alpha,
        k,
        family: Family::IndependentSetReduction,
        params: params(&[("graph", serde_json::to_value(graph)?), ("alpha", json!(alpha)), ("k", json!(k))]),
        seed: None,
    })
}

/// One point per set with coverage utility. With `d = (1 - 1/e) * U` for
/// universe size `U`, two sets sit at distance `2d` when they are disjoint
/// and (if groups are given) in different groups, and at `d` otherwise.
/// `lambda` defaults to 1. The recommended `k` is the number of groups, or
/// `min(2, n)` without groups.
pub fn gen_cover_reduction(
    family: Vec<Vec<u64>>,
    groups: Option<Vec<usize>>,
    lambda_override: Option<f64>,
) -> Result<GeneratedInstance> {
    let n = family.len();
    if n == 0 {
        return Err(Error::Input("set family is empty".into()));
    }
    if let Some(g) = &groups {
        if g.len() != n {
            return Err(Error::Input(format!("{} group labels for {n} sets", g.len())));
        }
    }
    let sets: Vec<HashSet<u64>> = family.iter().map(|s| s.iter().copied().collect()).collect();
    let universe = sets.iter().flatten().collect::<HashSet<_>>().len();
    let d = (1.0 - (-1.0f64).exp()) * universe as f64;
    let instance = matrix_instance(n, |i, j| {
        let apart = groups.as_ref().is_none_or(|g| g[i] != g[j]);
        if apart && sets[i].is_disjoint(&sets[j]) {
            2.0 * d
        } else {
            d
        }
    })?;
    let k = match &groups {
        Some(g) => g.iter().collect::<HashSet<_>>().len(),
        None => n.min(2),
    };
    let lambda = lambda_override.unwrap_or(1.0);
    Ok(GeneratedInstance {
        instance,
        utility: CoverageUtility::new(family.clone())?.into(),
        lambda,
        k,
        family: Family::CoverReduction,
        params: params(&[
            ("sets", json!(family)),
            ("groups", json!(groups)),
            ("universe", json!(universe)),
            ("d", json!(d)),
        ]),
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::TRIANGLE_TOLERANCE;

    #[test]
    fn gaussian_is_seeded_and_centered() {
        let a = gen_gaussian(200, 16, 5).unwrap();
        assert_eq!(a, gen_gaussian(200, 16, 5).unwrap());
        assert_ne!(a.points, gen_gaussian(200, 16, 6).unwrap().points);
        let total = (200 * 16) as f64;
        let mean = a.points.iter().flatten().sum::<f64>() / total;
        assert!(mean.abs() < 5.0 / total.sqrt(), "mean {mean}");
        assert!(a.weights.iter().all(|w| (0.0..=1.0).contains(w)));
        assert!(gen_gaussian(0, 3, 0).is_err());
    }

    #[test]
    fn gaussian_packaging() {
        let g = gen_gaussian(30, 4, 1).unwrap().generated(0.95, 0.75, 5).unwrap();
        assert!((g.lambda - 0.05).abs() < 1e-15);
        assert_eq!(g.utility.name(), "budget_additive");
        assert_eq!(g.instance.len(), 30);
    }

    #[test]
    fn greedy_hard_structure() {
        let g = gen_greedy_hard(8, 6, 0.1).unwrap();
        assert_eq!(g.instance.dist(0, 1), 2.2);
        assert_eq!(g.instance.dist(1, 0), 2.2);
        assert_eq!(g.instance.dist(2, 7), 1.1);
        g.instance.validate_triangle(TRIANGLE_TOLERANCE).unwrap();
        assert!(gen_greedy_hard(8, 3, 0.1).is_err());
        assert!(gen_greedy_hard(5, 6, 0.1).is_err());
        assert!(gen_greedy_hard(8, 6, 1.0).is_err());
    }

    #[test]
    fn counterexample_points() {
        let g = gen_counterexample(false).unwrap();
        assert_eq!(g.instance.dist(2, 3), 0.0);
        assert_eq!(g.instance.d_max(), 2.0);
        assert_eq!(g.utility.name(), "zero");
        assert_eq!(gen_counterexample(true).unwrap().utility.evaluate(&[0, 1]).unwrap(), 4.0);
    }

    #[test]
    fn clique_reduction_distances() {
        let g = gen_clique_reduction(&Graph::path(3), 0.5, 2).unwrap();
        assert_eq!(g.instance.dist(0, 1), 2.0);
        assert_eq!(g.instance.dist(0, 2), 1.0);
        assert_eq!(g.lambda, 0.5);
        assert!(gen_clique_reduction(&Graph::path(3), 0.0, 2).is_err());
        assert!(gen_clique_reduction(&Graph::path(3), 0.5, 4).is_err());
    }

    #[test]
    fn cover_reduction_distances() {
        let fam = vec![vec![1, 2], vec![3, 4], vec![1, 3]];
        let g = gen_cover_reduction(fam.clone(), Some(vec![0, 1, 1]), None).unwrap();
        let d = (1.0 - (-1.0f64).exp()) * 4.0;
        assert_eq!(g.instance.dist(0, 1), 2.0 * d);
        assert_eq!(g.instance.dist(0, 2), d);
        assert_eq!(g.instance.dist(1, 2), d);
        assert_eq!(g.k, 2);

        // Same group: disjointness alone is not enough.
        let same = gen_cover_reduction(fam.clone(), Some(vec![0, 0, 1]), None).unwrap();
        assert_eq!(same.instance.dist(0, 1), d);
        let ungrouped = gen_cover_reduction(fam, None, Some(0.5)).unwrap();
        assert_eq!(ungrouped.instance.dist(0, 1), 2.0 * d);
        assert_eq!(ungrouped.lambda, 0.5);

        assert!(gen_cover_reduction(vec![], None, None).is_err());
        assert!(gen_cover_reduction(vec![vec![1]], Some(vec![0, 1]), None).is_err());
    }
}
