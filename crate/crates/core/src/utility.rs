//! Set-function utilities `g` and their value oracles.
//!
//! Every utility is wrapped in a [`Utility`], which owns the parameters and a
//! query counter. Algorithms do not call [`Utility::evaluate`] in their inner
//! loops; they open a [`UtilityState`] that tracks the current set and answers
//! marginal-gain queries incrementally. Each gain or value answered counts as
//! one oracle query.

use std::collections::HashMap;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::instance::canonical;

/// Largest ground set accepted by [`TabulatedUtility`].
pub const TABULATED_MAX_N: usize = 20;

/// Largest ground set for [`check_exhaustive`].
pub const EXHAUSTIVE_CHECK_MAX_N: usize = 10;

/// Violations kept per kind in a [`PropertyReport`]; the count is exact.
pub const MAX_RECORDED_VIOLATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearUtility {
    weights: Vec<f64>,
}

impl LinearUtility {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_nonnegative("weight", &weights)?;
        Ok(LinearUtility { weights })
    }

    /// `n` points of equal weight `w`.
    pub fn uniform(n: usize, w: f64) -> Result<Self> {
        Self::new(vec![w; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `g(T) = |union of family[i] for i in T|`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageUtility {
    family: Vec<Vec<u64>>,
    // Element ids remapped to 0..universe.
    dense: Vec<Vec<u32>>,
    universe: usize,
}

impl CoverageUtility {
    pub fn new(family: Vec<Vec<u64>>) -> Result<Self> {
        let mut ids: HashMap<u64, u32> = HashMap::new();
        let mut dense = Vec::with_capacity(family.len());
        for set in &family {
            let mut mapped: Vec<u32> = set
                .iter()
                .map(|e| {
                    let next = ids.len() as u32;
                    *ids.entry(*e).or_insert(next)
                })
                .collect();
            mapped.sort_unstable();
            mapped.dedup();
            dense.push(mapped);
        }
        Ok(CoverageUtility { family, dense, universe: ids.len() })
    }

    pub fn family(&self) -> &[Vec<u64>] {
        &self.family
    }

    /// Number of distinct elements across all sets.
    pub fn universe(&self) -> usize {
        self.universe
    }
}

/// `g(S) = alpha * min{ (1/k) * sum_{i in S} w_i, beta }`.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetAdditiveUtility {
    weights: Vec<f64>,
    alpha: f64,
    beta: f64,
    k: usize,
}

impl BudgetAdditiveUtility {
    pub fn new(weights: Vec<f64>, alpha: f64, beta: f64, k: usize) -> Result<Self> {
        check_nonnegative("weight", &weights)?;
        if let Some(w) = weights.iter().find(|w| **w > 1.0) {
            return Err(Error::Parameter(format!("budget-additive weight {w} is outside [0, 1]")));
        }
        for (name, x) in [("alpha", alpha), ("beta", beta)] {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::Parameter(format!("{name} = {x} is outside [0, 1]")));
            }
        }
        if k == 0 {
            return Err(Error::Parameter("budget-additive normalizer k must be >= 1".into()));
        }
        Ok(BudgetAdditiveUtility { weights, alpha, beta, k })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn value_from_sum(&self, sum: f64) -> f64 {
        self.alpha * (sum / self.k as f64).min(self.beta)
    }

    fn gain_from_sum(&self, sum: f64, w: f64) -> f64 {
        let k = self.k as f64;
        let current = sum / k;
        if current >= self.beta {
            0.0
        } else if (sum + w) / k <= self.beta {
            self.alpha * w / k
        } else {
            self.alpha * (self.beta - current)
        }
    }
}

/// Pairwise similarity used by [`MarginSimilarityUtility`].
#[derive(Debug, Clone, PartialEq)]
pub enum Similarity {
    /// Sparse undirected graph; `adjacency[i]` lists `(j, s(i, j))`.
    Edges { adjacency: Vec<Vec<(usize, f64)>> },
    /// Complete graph over unit embeddings, `s(i, j) = <e_i, e_j>`.
    Dense { embeddings: Vec<Vec<f64>> },
}

/// `g(S) = alpha * sum_{i in S} u_i - beta * sum_{i != j in S, i~j} s(i, j)`.
///
/// The pair sum runs over ordered pairs, so every undirected edge inside `S`
/// contributes `2 * s(i, j)`. The function is submodular when similarities
/// are nonnegative but not monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginSimilarityUtility {
    scores: Vec<f64>,
    alpha: f64,
    beta: f64,
    similarity: Similarity,
}

impl MarginSimilarityUtility {
    pub fn with_edges(scores: Vec<f64>, alpha: f64, beta: f64, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let n = scores.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for &(i, j, s) in edges {
            check_index(i, n)?;
            check_index(j, n)?;
            if i == j {
                return Err(Error::Input(format!("self-loop on node {i} in similarity edges")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::Input(format!("duplicate similarity edge ({i}, {j})")));
            }
            if !(-1.0..=1.0).contains(&s) {
                return Err(Error::Input(format!("similarity {s} on edge ({i}, {j}) is outside [-1, 1]")));
            }
            adjacency[i].push((j, s));
            adjacency[j].push((i, s));
        }
        adjacency.iter_mut().for_each(|a| a.sort_by_key(|&(j, _)| j));
        Self::new(scores, alpha, beta, Similarity::Edges { adjacency })
    }

    /// Complete similarity graph over unit-length embeddings.
    pub fn with_embeddings(scores: Vec<f64>, alpha: f64, beta: f64, embeddings: Vec<Vec<f64>>) -> Result<Self> {
        if embeddings.len() != scores.len() {
            return Err(Error::Input(format!(
                "{} embeddings for {} scores",
                embeddings.len(),
                scores.len()
            )));
        }
        Self::new(scores, alpha, beta, Similarity::Dense { embeddings })
    }

    fn new(scores: Vec<f64>, alpha: f64, beta: f64, similarity: Similarity) -> Result<Self> {
        if let Some(u) = scores.iter().find(|u| !(0.0..=2.0).contains(*u)) {
            return Err(Error::Input(format!("uncertainty score {u} is outside [0, 2]")));
        }
        for (name, x) in [("alpha_s", alpha), ("beta_s", beta)] {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::Parameter(format!("{name} = {x} must be a nonnegative real")));
            }
        }
        Ok(MarginSimilarityUtility { scores, alpha, beta, similarity })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn similarity(&self) -> &Similarity {
        &self.similarity
    }

    /// Undirected edge list `(i, j, s)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        match &self.similarity {
            Similarity::Edges { adjacency } => adjacency
                .iter()
                .enumerate()
                .flat_map(|(i, a)| a.iter().filter(move |(j, _)| i < *j).map(move |&(j, s)| (i, j, s)))
                .collect(),
            Similarity::Dense { embeddings } => {
                let n = embeddings.len();
                let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
                for i in 0..n {
                    for j in i + 1..n {
                        out.push((i, j, dot(&embeddings[i], &embeddings[j])));
                    }
                }
                out
            }
        }
    }

    fn value(&self, set: &[usize]) -> f64 {
        let utility: f64 = set.iter().map(|&i| self.scores[i]).sum();
        let mut pairs = 0.0;
        match &self.similarity {
            Similarity::Edges { adjacency } => {
                for &i in set {
                    for &(j, s) in &adjacency[i] {
                        if set.binary_search(&j).is_ok() {
                            pairs += s;
                        }
                    }
                }
            }
            Similarity::Dense { embeddings } => {
                for &i in set {
                    for &j in set {
                        if i != j {
                            pairs += dot(&embeddings[i], &embeddings[j]);
                        }
                    }
                }
            }
        }
        self.alpha * utility - self.beta * pairs
    }

    fn gain_from_acc(&self, v: usize, acc: f64) -> f64 {
        self.alpha * self.scores[v] - self.beta * 2.0 * acc
    }

    // Sum of s(v, t) over t in `set` adjacent to v.
    fn adjacent_sum(&self, v: usize, set: &[usize]) -> f64 {
        match &self.similarity {
            Similarity::Edges { adjacency } => adjacency[v]
                .iter()
                .filter(|(j, _)| set.binary_search(j).is_ok())
                .map(|(_, s)| s)
                .sum(),
            Similarity::Dense { embeddings } => set
                .iter()
                .filter(|&&j| j != v)
                .map(|&j| dot(&embeddings[v], &embeddings[j]))
                .sum(),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Explicit value per subset, indexed by bitmask (bit `i` = point `i`).
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedUtility {
    n: usize,
    values: Vec<f64>,
    monotone: bool,
    submodular: bool,
}

impl TabulatedUtility {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n > TABULATED_MAX_N {
            return Err(Error::Parameter(format!(
                "tabulated utilities support n <= {TABULATED_MAX_N}, got {n}"
            )));
        }
        if values.len() != 1 << n {
            return Err(Error::Input(format!(
                "tabulated utility over {n} points needs {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("tabulated values must be finite".into()));
        }
        Ok(TabulatedUtility { n, values, monotone: false, submodular: false })
    }

    /// Tabulates an arbitrary set function over all `2^n` subsets.
    pub fn from_fn(n: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        if n > TABULATED_MAX_N {
            return Err(Error::Parameter(format!(
                "tabulated utilities support n <= {TABULATED_MAX_N}, got {n}"
            )));
        }
        let values = (0..1usize << n).map(|mask| f(&mask_to_set(mask))).collect();
        Self::new(n, values)
    }

    pub fn declare(mut self, monotone: bool, submodular: bool) -> Self {
        self.monotone = monotone;
        self.submodular = submodular;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub(crate) fn mask_to_set(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| mask >> i & 1 == 1).collect()
}

fn set_to_mask(set: &[usize]) -> usize {
    set.iter().fold(0, |m, &i| m | 1 << i)
}

#[derive(Debug, Clone, PartialEq)]
pub enum UtilityKind {
    Linear(LinearUtility),
    Coverage(CoverageUtility),
    BudgetAdditive(BudgetAdditiveUtility),
    MarginSimilarity(MarginSimilarityUtility),
    Zero { n: usize },
    Tabulated(TabulatedUtility),
}

/// A utility function `g` over the ground set `{0, .., n-1}` with a value
/// oracle and a query counter.
#[derive(Debug)]
pub struct Utility {
    kind: UtilityKind,
    queries: AtomicU64,
}

impl Clone for Utility {
    fn clone(&self) -> Self {
        Utility::new(self.kind.clone())
    }
}

impl PartialEq for Utility {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl From<UtilityKind> for Utility {
    fn from(kind: UtilityKind) -> Self {
        Utility::new(kind)
    }
}

macro_rules! utility_from {
    ($($ty:ident => $variant:ident),*) => {$(
        impl From<$ty> for Utility {
            fn from(u: $ty) -> Self {
                Utility::new(UtilityKind::$variant(u))
            }
        }
    )*};
}

utility_from!(
    LinearUtility => Linear,
    CoverageUtility => Coverage,
    BudgetAdditiveUtility => BudgetAdditive,
    MarginSimilarityUtility => MarginSimilarity,
    TabulatedUtility => Tabulated
);

impl Utility {
    pub fn new(kind: UtilityKind) -> Self {
        Utility { kind, queries: AtomicU64::new(0) }
    }

    pub fn zero(n: usize) -> Self {
        Utility::new(UtilityKind::Zero { n })
    }

    pub fn kind(&self) -> &UtilityKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            UtilityKind::Linear(_) => "linear",
            UtilityKind::Coverage(_) => "coverage",
            UtilityKind::BudgetAdditive(_) => "budget_additive",
            UtilityKind::MarginSimilarity(_) => "margin_similarity",
            UtilityKind::Zero { .. } => "zero",
            UtilityKind::Tabulated(_) => "tabulated",
        }
    }

    /// Size of the ground set this utility is defined on.
    pub fn len(&self) -> usize {
        match &self.kind {
            UtilityKind::Linear(u) => u.weights.len(),
            UtilityKind::Coverage(u) => u.dense.len(),
            UtilityKind::BudgetAdditive(u) => u.weights.len(),
            UtilityKind::MarginSimilarity(u) => u.scores.len(),
            UtilityKind::Zero { n } => *n,
            UtilityKind::Tabulated(u) => u.n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn monotone_declared(&self) -> bool {
        match &self.kind {
            UtilityKind::MarginSimilarity(_) => false,
            UtilityKind::Tabulated(t) => t.monotone,
            _ => true,
        }
    }

    pub fn submodular_declared(&self) -> bool {
        match &self.kind {
            UtilityKind::Tabulated(t) => t.submodular,
            _ => true,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, UtilityKind::Linear(_) | UtilityKind::Zero { .. })
    }

    /// Copy prepared for cardinality `k`. Only the budget-additive average
    /// depends on `k`; every other kind is cloned unchanged.
    pub fn with_cardinality(&self, k: usize) -> Result<Utility> {
        match &self.kind {
            UtilityKind::BudgetAdditive(b) => {
                Ok(BudgetAdditiveUtility::new(b.weights.clone(), b.alpha, b.beta, k)?.into())
            }
            _ => Ok(self.clone()),
        }
    }

    /// Total value and marginal queries answered so far.
    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset_queries(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    pub(crate) fn record_queries(&self, count: u64) {
        self.queries.fetch_add(count, Ordering::Relaxed);
    }

    fn check_set<'a>(&self, set: &'a [usize]) -> Result<std::borrow::Cow<'a, [usize]>> {
        let set = canonical(set);
        for &i in set.iter() {
            check_index(i, self.len())?;
        }
        Ok(set)
    }

    /// `g(S)`. Counts one query.
    pub fn evaluate(&self, set: &[usize]) -> Result<f64> {
        let set = self.check_set(set)?;
        self.record_queries(1);
        Ok(self.value_sorted(&set))
    }

    pub(crate) fn value_sorted(&self, set: &[usize]) -> f64 {
        match &self.kind {
            UtilityKind::Linear(u) => set.iter().map(|&i| u.weights[i]).sum(),
            UtilityKind::Coverage(u) => {
                let mut covered = vec![false; u.universe];
                let mut count = 0usize;
                for &i in set {
                    for &e in &u.dense[i] {
                        if !std::mem::replace(&mut covered[e as usize], true) {
                            count += 1;
                        }
                    }
                }
                count as f64
            }
            UtilityKind::BudgetAdditive(u) => u.value_from_sum(set.iter().map(|&i| u.weights[i]).sum()),
            UtilityKind::MarginSimilarity(u) => u.value(set),
            UtilityKind::Zero { .. } => 0.0,
            UtilityKind::Tabulated(u) => u.values[set_to_mask(set)],
        }
    }

    /// `g(v | S) = g(S + v) - g(S)` through the per-kind fast path. Counts one query.
    pub fn marginal(&self, v: usize, set: &[usize]) -> Result<f64> {
        let set = self.check_set(set)?;
        check_index(v, self.len())?;
        if set.binary_search(&v).is_ok() {
            return Err(Error::AlreadySelected(v));
        }
        self.record_queries(1);
        Ok(match &self.kind {
            UtilityKind::Linear(u) => u.weights[v],
            UtilityKind::Coverage(u) => {
                let mut covered = vec![false; u.universe];
                for &i in set.iter() {
                    for &e in &u.dense[i] {
                        covered[e as usize] = true;
                    }
                }
                u.dense[v].iter().filter(|&&e| !covered[e as usize]).count() as f64
            }
            UtilityKind::BudgetAdditive(u) => {
                u.gain_from_sum(set.iter().map(|&i| u.weights[i]).sum(), u.weights[v])
            }
            UtilityKind::MarginSimilarity(u) => u.gain_from_acc(v, u.adjacent_sum(v, &set)),
            UtilityKind::Zero { .. } => 0.0,
            UtilityKind::Tabulated(u) => {
                let mask = set_to_mask(&set);
                u.values[mask | 1 << v] - u.values[mask]
            }
        })
    }

    /// `g(S + v) - g(S)` from two value queries.
    pub fn marginal_generic(&self, v: usize, set: &[usize]) -> Result<f64> {
        let set = self.check_set(set)?;
        check_index(v, self.len())?;
        if set.binary_search(&v).is_ok() {
            return Err(Error::AlreadySelected(v));
        }
        let mut with = set.to_vec();
        with.push(v);
        with.sort_unstable();
        Ok(self.evaluate(&with)? - self.evaluate(&set)?)
    }

    /// Opens an incremental evaluator starting from the empty set.
    pub fn state(&self) -> UtilityState<'_> {
        let inner = match &self.kind {
            UtilityKind::Coverage(u) => StateInner::Covered(vec![false; u.universe]),
            UtilityKind::BudgetAdditive(_) => StateInner::Sum(0.0),
            UtilityKind::MarginSimilarity(u) => StateInner::Adjacent(vec![0.0; u.scores.len()]),
            UtilityKind::Tabulated(_) => StateInner::Mask(0),
            UtilityKind::Linear(_) | UtilityKind::Zero { .. } => StateInner::Stateless,
        };
        let value = match &self.kind {
            UtilityKind::Tabulated(t) => t.values[0],
            _ => 0.0,
        };
        UtilityState { utility: self, inner, value, queries: 0 }
    }

    pub fn to_file(&self) -> Result<UtilityFile> {
        Ok(match &self.kind {
            UtilityKind::Linear(u) => UtilityFile::Linear { weights: u.weights.clone() },
            UtilityKind::Coverage(u) => UtilityFile::Coverage { sets: u.family.clone() },
            UtilityKind::BudgetAdditive(u) => UtilityFile::BudgetAdditive {
                weights: u.weights.clone(),
                alpha: u.alpha,
                beta: u.beta,
                k: u.k,
            },
            UtilityKind::MarginSimilarity(u) => UtilityFile::MarginSimilarity {
                scores: u.scores.clone(),
                alpha: u.alpha,
                beta: u.beta,
                edges: u.edges(),
            },
            UtilityKind::Zero { n } => UtilityFile::Zero { n: *n },
            UtilityKind::Tabulated(u) => UtilityFile::Tabulated {
                n: u.n,
                values: u.values.clone(),
                monotone: u.monotone,
                submodular: u.submodular,
            },
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file()?)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<UtilityFile>(s)?.into_utility()
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone)]
enum StateInner {
    Stateless,
    Covered(Vec<bool>),
    Sum(f64),
    // Sum of similarities from each point to the current set.
    Adjacent(Vec<f64>),
    Mask(usize),
}

/// Incremental evaluator for `g` along a growing set.
///
/// Queries are tallied locally and added to the owning [`Utility`] counter
/// when the state is dropped.
#[derive(Debug)]
pub struct UtilityState<'a> {
    utility: &'a Utility,
    inner: StateInner,
    value: f64,
    queries: u64,
}

impl UtilityState<'_> {
    /// `g(v | S)` for the current set `S`. `v` must not already be in `S`.
    #[inline]
    pub fn gain(&mut self, v: usize) -> f64 {
        self.queries += 1;
        self.peek_gain(v)
    }

    fn peek_gain(&self, v: usize) -> f64 {
        match (&self.utility.kind, &self.inner) {
            (UtilityKind::Linear(u), _) => u.weights[v],
            (UtilityKind::Coverage(u), StateInner::Covered(c)) => {
                u.dense[v].iter().filter(|&&e| !c[e as usize]).count() as f64
            }
            (UtilityKind::BudgetAdditive(u), StateInner::Sum(s)) => u.gain_from_sum(*s, u.weights[v]),
            (UtilityKind::MarginSimilarity(u), StateInner::Adjacent(acc)) => u.gain_from_acc(v, acc[v]),
            (UtilityKind::Tabulated(u), StateInner::Mask(m)) => u.values[m | 1 << v] - u.values[*m],
            (UtilityKind::Zero { .. }, _) => 0.0,
            _ => unreachable!("state does not match utility kind"),
        }
    }

    /// Adds `v` to the current set.
    pub fn insert(&mut self, v: usize) {
        self.value += self.peek_gain(v);
        match (&self.utility.kind, &mut self.inner) {
            (UtilityKind::Coverage(u), StateInner::Covered(c)) => {
                for &e in &u.dense[v] {
                    c[e as usize] = true;
                }
            }
            (UtilityKind::BudgetAdditive(u), StateInner::Sum(s)) => *s += u.weights[v],
            (UtilityKind::MarginSimilarity(u), StateInner::Adjacent(acc)) => match &u.similarity {
                Similarity::Edges { adjacency } => {
                    for &(j, s) in &adjacency[v] {
                        acc[j] += s;
                    }
                }
                Similarity::Dense { embeddings } => {
                    for (j, a) in acc.iter_mut().enumerate() {
                        if j != v {
                            *a += dot(&embeddings[v], &embeddings[j]);
                        }
                    }
                }
            },
            (UtilityKind::Tabulated(_), StateInner::Mask(m)) => *m |= 1 << v,
            _ => {}
        }
    }

    /// Running value of `g` on the current set (accumulated gains).
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }
}

impl Drop for UtilityState<'_> {
    fn drop(&mut self) {
        self.utility.record_queries(self.queries);
    }
}

/// On-disk utility description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UtilityFile {
    Linear {
        weights: Vec<f64>,
    },
    Coverage {
        sets: Vec<Vec<u64>>,
    },
    BudgetAdditive {
        weights: Vec<f64>,
        alpha: f64,
        beta: f64,
        k: usize,
    },
    /// `edges` are undirected `[i, j, s]` triples; each contributes twice.
    MarginSimilarity {
        scores: Vec<f64>,
        alpha: f64,
        beta: f64,
        #[serde(default)]
        edges: Vec<(usize, usize, f64)>,
    },
    Zero {
        n: usize,
    },
    Tabulated {
        n: usize,
        values: Vec<f64>,
        #[serde(default)]
        monotone: bool,
        #[serde(default)]
        submodular: bool,
    },
}

impl UtilityFile {
    pub fn into_utility(self) -> Result<Utility> {
        Ok(match self {
            UtilityFile::Linear { weights } => LinearUtility::new(weights)?.into(),
            UtilityFile::Coverage { sets } => CoverageUtility::new(sets)?.into(),
            UtilityFile::BudgetAdditive { weights, alpha, beta, k } => {
                BudgetAdditiveUtility::new(weights, alpha, beta, k)?.into()
            }
            UtilityFile::MarginSimilarity { scores, alpha, beta, edges } => {
                MarginSimilarityUtility::with_edges(scores, alpha, beta, &edges)?.into()
            }
            UtilityFile::Zero { n } => Utility::zero(n),
            UtilityFile::Tabulated { n, values, monotone, submodular } => {
                TabulatedUtility::new(n, values)?.declare(monotone, submodular).into()
            }
        })
    }
}

fn check_nonnegative(what: &str, xs: &[f64]) -> Result<()> {
    match xs.iter().position(|w| !w.is_finite() || *w < 0.0) {
        Some(i) => Err(Error::Input(format!("{what} {i} = {} is not a finite nonnegative real", xs[i]))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `g(S) > g(T)` for some `S ⊆ T`.
    Monotonicity,
    /// `g(x | S) < g(x | T)` for some `S ⊆ T`, `x ∉ T`.
    Submodularity,
}

/// A witness against monotonicity or submodularity.
///
/// For monotonicity `lhs = g(S) > rhs = g(T)`; for submodularity
/// `lhs = g(x | S) < rhs = g(x | T)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub x: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PropertyReport {
    pub checks: u64,
    pub monotonicity_violations: u64,
    pub submodularity_violations: u64,
    pub witnesses: Vec<Violation>,
}

impl PropertyReport {
    pub fn is_clean(&self) -> bool {
        self.monotonicity_violations == 0 && self.submodularity_violations == 0
    }

    pub fn find(&self, kind: ViolationKind, s: &[usize], t: &[usize], x: Option<usize>) -> Option<&Violation> {
        self.witnesses
            .iter()
            .find(|w| w.kind == kind && w.s == s && w.t == t && w.x == x)
    }

    fn consider(&mut self, kind: ViolationKind, s: &[usize], t: &[usize], x: Option<usize>, lhs: f64, rhs: f64) {
        self.checks += 1;
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        // Monotonicity wants g(S) <= g(T); submodularity wants g(x|S) >= g(x|T).
        let violated = match kind {
            ViolationKind::Monotonicity => lhs > rhs + 1e-9 * scale,
            ViolationKind::Submodularity => lhs < rhs - 1e-9 * scale,
        };
        if !violated {
            return;
        }
        match kind {
            ViolationKind::Monotonicity => self.monotonicity_violations += 1,
            ViolationKind::Submodularity => self.submodularity_violations += 1,
        }
        if self.witnesses.len() < MAX_RECORDED_VIOLATIONS {
            self.witnesses.push(Violation { kind, s: s.to_vec(), t: t.to_vec(), x, lhs, rhs });
        }
    }

    fn check_chain(&mut self, utility: &Utility, s: &[usize], t: &[usize], x: usize) {
        let gs = utility.value_sorted(s);
        let gt = utility.value_sorted(t);
        let sx = with_point(s, x);
        let tx = with_point(t, x);
        let gsx = utility.value_sorted(&sx);
        let gtx = utility.value_sorted(&tx);
        utility.record_queries(4);
        self.consider(ViolationKind::Monotonicity, s, t, None, gs, gt);
        self.consider(ViolationKind::Monotonicity, t, &tx, None, gt, gtx);
        self.consider(ViolationKind::Submodularity, s, t, Some(x), gsx - gs, gtx - gt);
    }
}

fn with_point(set: &[usize], x: usize) -> Vec<usize> {
    let mut out = set.to_vec();
    let pos = out.partition_point(|&i| i < x);
    out.insert(pos, x);
    out
}

/// Samples `trials` random chains `S ⊆ T`, `x ∉ T` and checks monotonicity
/// and diminishing returns on each. Deterministic for a fixed seed.
pub fn check_monotone_submodular(utility: &Utility, trials: usize, seed: u64) -> PropertyReport {
    let n = utility.len();
    let mut report = PropertyReport::default();
    if n == 0 {
        return report;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let x = rng.random_range(0..n);
        let t: Vec<usize> = (0..n).filter(|&i| i != x && rng.random_bool(0.5)).collect();
        let s: Vec<usize> = t.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        report.check_chain(utility, &s, &t, x);
    }
    report
}

/// Checks every chain `S ⊆ T`, `x ∉ T` on ground sets of at most
/// [`EXHAUSTIVE_CHECK_MAX_N`] points. Chains are visited with `T` in mask
/// order, then `S` in submask order, then `x` ascending.
pub fn check_exhaustive(utility: &Utility) -> Result<PropertyReport> {
    let n = utility.len();
    if n > EXHAUSTIVE_CHECK_MAX_N {
        return Err(Error::TooLarge {
            subsets: 3u128.pow(n as u32) * n as u128,
            limit: 3u128.pow(EXHAUSTIVE_CHECK_MAX_N as u32) * EXHAUSTIVE_CHECK_MAX_N as u128,
        });
    }
    let mut report = PropertyReport::default();
    let full = (1usize << n) - 1;
    for t_mask in 0..=full {
        let t = mask_to_set(t_mask);
        let mut s_masks: Vec<usize> = Vec::new();
        let mut sub = t_mask;
        loop {
            s_masks.push(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & t_mask;
        }
        s_masks.reverse();
        for s_mask in s_masks {
            let s = mask_to_set(s_mask);
            for x in (0..n).filter(|x| t_mask >> x & 1 == 0) {
                report.check_chain(utility, &s, &t, x);
            }
        }
    }
    Ok(report)
}
