//! Ground sets and their metrics.
//!
//! An [`Instance`] owns `n` points together with a distance oracle. Three
//! metric representations are supported: an explicit dense matrix, points in
//! Euclidean space, and unit vectors under cosine distance (`1 - <x, y>`).
//! Point metrics are materialized into a dense matrix on first use when the
//! instance is small enough, so repeated queries are table lookups.

use std::borrow::Cow;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};

/// Point metrics with at most this many points are cached as a dense matrix.
pub const DENSE_CACHE_LIMIT: usize = 4096;

/// Triangle-inequality validation is O(n^3) and refused above this size.
pub const TRIANGLE_CHECK_LIMIT: usize = 512;

/// Absolute slack allowed by [`Instance::validate_triangle`] by default.
pub const TRIANGLE_TOLERANCE: f64 = 1e-9;

/// Tolerance on `|‖x‖ - 1|` before cosine input is reported as renormalized.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    /// Row-major `n x n` distance matrix.
    Matrix(Vec<f64>),
    Euclidean(Vec<Vec<f64>>),
    /// Unit vectors; distance is `1 - dot`.
    Cosine(Vec<Vec<f64>>),
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Matrix(_) => "matrix",
            Metric::Euclidean(_) => "euclidean",
            Metric::Cosine(_) => "cosine",
        }
    }
}

/// Distance from a point to a set. The empty set is infinitely far away.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SetDistance {
    Unbounded,
    Finite(f64),
}

impl SetDistance {
    /// `dist(v, S) >= d`, exact floating-point comparison.
    pub fn at_least(self, d: f64) -> bool {
        match self {
            SetDistance::Unbounded => true,
            SetDistance::Finite(x) => x >= d,
        }
    }
}

/// Diameter of the ground set and the lexicographically first pair realizing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diameter {
    pub value: f64,
    pub pair: Option<(usize, usize)>,
}

#[derive(Debug)]
pub struct Instance {
    n: usize,
    metric: Metric,
    dense: OnceLock<Option<Vec<f64>>>,
    diameter: OnceLock<Diameter>,
}

impl Clone for Instance {
    fn clone(&self) -> Self {
        Instance {
            n: self.n,
            metric: self.metric.clone(),
            dense: self.dense.clone(),
            diameter: self.diameter.clone(),
        }
    }
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.metric == other.metric
    }
}

impl Instance {
    /// Builds an instance from a row-major distance matrix.
    ///
    /// Checks shape, finiteness, nonnegativity, a zero diagonal and exact
    /// symmetry. The triangle inequality is checked separately by
    /// [`Instance::validate_triangle`].
    pub fn from_matrix(n: usize, matrix: Vec<f64>) -> Result<Self> {
        if matrix.len() != n * n {
            return Err(Error::Input(format!(
                "matrix has {} entries, expected {n}x{n}",
                matrix.len()
            )));
        }
        for i in 0..n {
            if matrix[i * n + i] != 0.0 {
                return Err(Error::Metric(format!("dist({i},{i}) = {} != 0", matrix[i * n + i])));
            }
            for j in 0..n {
                let x = matrix[i * n + j];
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::Metric(format!("dist({i},{j}) = {x} is not a finite nonnegative real")));
                }
                if x != matrix[j * n + i] {
                    return Err(Error::Metric(format!("dist({i},{j}) != dist({j},{i})")));
                }
            }
        }
        Ok(Self::new(n, Metric::Matrix(matrix)))
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Input(format!("matrix row {i} has length {}, expected {n}", r.len())));
        }
        Self::from_matrix(n, rows.into_iter().flatten().collect())
    }

    pub fn euclidean(points: Vec<Vec<f64>>) -> Result<Self> {
        check_points(&points)?;
        Ok(Self::new(points.len(), Metric::Euclidean(points)))
    }

    /// Cosine-distance instance. Every vector is rescaled to unit length; the
    /// returned flag is true when any input norm was off by more than
    /// [`UNIT_NORM_TOLERANCE`].
    pub fn cosine(mut points: Vec<Vec<f64>>) -> Result<(Self, bool)> {
        check_points(&points)?;
        let mut renormalized = false;
        for (i, p) in points.iter_mut().enumerate() {
            let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::Input(format!("embedding {i} is the zero vector")));
            }
            if (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
                renormalized = true;
            }
            p.iter_mut().for_each(|x| *x /= norm);
        }
        Ok((Self::new(points.len(), Metric::Cosine(points)), renormalized))
    }

    fn new(n: usize, metric: Metric) -> Self {
        Instance {
            n,
            metric,
            dense: OnceLock::new(),
            diameter: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    fn dense(&self) -> Option<&[f64]> {
        self.dense
            .get_or_init(|| match &self.metric {
                Metric::Matrix(_) => None,
                _ if self.n > DENSE_CACHE_LIMIT => None,
                _ => {
                    let n = self.n;
                    let mut m = vec![0.0; n * n];
                    for i in 0..n {
                        for j in i + 1..n {
                            let d = self.compute(i, j);
                            m[i * n + j] = d;
                            m[j * n + i] = d;
                        }
                    }
                    Some(m)
                }
            })
            .as_deref()
    }

    // Callers pass i < j so both orientations share one rounding.
    fn compute(&self, i: usize, j: usize) -> f64 {
        match &self.metric {
            Metric::Matrix(m) => m[i * self.n + j],
            Metric::Euclidean(p) => p[i]
                .iter()
                .zip(&p[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            Metric::Cosine(p) => {
                let dot: f64 = p[i].iter().zip(&p[j]).map(|(a, b)| a * b).sum();
                (1.0 - dot).max(0.0)
            }
        }
    }

    /// Distance between two points. Panics on out-of-range indices; use
    /// [`Instance::checked_dist`] for untrusted input.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        if let Metric::Matrix(m) = &self.metric {
            return m[i * self.n + j];
        }
        match self.dense() {
            Some(m) => m[i * self.n + j],
            None => self.compute(i.min(j), i.max(j)),
        }
    }

    pub fn checked_dist(&self, i: usize, j: usize) -> Result<f64> {
        check_index(i, self.n)?;
        check_index(j, self.n)?;
        Ok(self.dist(i, j))
    }

    /// `dist(v, S) = min_{s in S} dist(v, s)`, unbounded for the empty set.
    pub fn dist_to_set(&self, v: usize, set: &[usize]) -> SetDistance {
        set.iter()
            .map(|&s| self.dist(v, s))
            .fold(SetDistance::Unbounded, |acc, d| match acc {
                SetDistance::Unbounded => SetDistance::Finite(d),
                SetDistance::Finite(x) => SetDistance::Finite(x.min(d)),
            })
    }

    pub fn diameter(&self) -> Diameter {
        *self.diameter.get_or_init(|| {
            let mut best = Diameter { value: 0.0, pair: None };
            for i in 0..self.n {
                for j in i + 1..self.n {
                    let d = self.dist(i, j);
                    if best.pair.is_none() || d > best.value {
                        best = Diameter { value: d, pair: Some((i, j)) };
                    }
                }
            }
            best
        })
    }

    pub fn d_max(&self) -> f64 {
        self.diameter().value
    }

    /// Max-min diversity: the minimum pairwise distance for `|S| >= 2`, the
    /// diameter of the ground set otherwise.
    pub fn div(&self, set: &[usize]) -> Result<f64> {
        let set = canonical(set);
        for &i in set.iter() {
            check_index(i, self.n)?;
        }
        Ok(self.div_unchecked(&set))
    }

    /// [`Instance::div`] for a set already known to be valid and duplicate-free.
    pub(crate) fn div_unchecked(&self, set: &[usize]) -> f64 {
        if set.len() <= 1 {
            return self.d_max();
        }
        let mut min = f64::INFINITY;
        for (a, &i) in set.iter().enumerate() {
            for &j in &set[a + 1..] {
                min = min.min(self.dist(i, j));
            }
        }
        min
    }

    /// Checks `dist(i,k) <= dist(i,j) + dist(j,k) + tol` for every triple.
    pub fn validate_triangle(&self, tol: f64) -> Result<()> {
        if self.n > TRIANGLE_CHECK_LIMIT {
            return Err(Error::TooLarge {
                subsets: (self.n as u128).pow(3),
                limit: (TRIANGLE_CHECK_LIMIT as u128).pow(3),
            });
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let dij = self.dist(i, j);
                for k in 0..self.n {
                    if self.dist(i, k) > dij + self.dist(j, k) + tol {
                        return Err(Error::Metric(format!(
                            "triangle inequality fails: d({i},{k}) = {} > d({i},{j}) + d({j},{k}) = {}",
                            self.dist(i, k),
                            dij + self.dist(j, k)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// All pairwise distances `dist(u, v)` for `u < v`.
    pub fn pairwise(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push(self.dist(i, j));
            }
        }
        out
    }

    pub fn to_file(&self) -> InstanceFile {
        match &self.metric {
            Metric::Matrix(m) => InstanceFile {
                n: self.n,
                metric: MetricKind::Matrix,
                points: None,
                matrix: Some(m.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()),
            },
            Metric::Euclidean(p) => InstanceFile {
                n: self.n,
                metric: MetricKind::Euclidean,
                points: Some(p.clone()),
                matrix: None,
            },
            Metric::Cosine(p) => InstanceFile {
                n: self.n,
                metric: MetricKind::Cosine,
                points: Some(p.clone()),
                matrix: None,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("instance serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<InstanceFile>(s)?.into_instance()
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn check_points(points: &[Vec<f64>]) -> Result<()> {
    if let Some(first) = points.first() {
        let dim = first.len();
        if dim == 0 {
            return Err(Error::Input("points must have dimension >= 1".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Input(format!(
                    "point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::Input(format!("point {i} has a non-finite coordinate")));
            }
        }
    }
    Ok(())
}

/// Sorted, duplicate-free view of an index set.
pub fn canonical(set: &[usize]) -> Cow<'_, [usize]> {
    if set.windows(2).all(|w| w[0] < w[1]) {
        Cow::Borrowed(set)
    } else {
        let mut v = set.to_vec();
        v.sort_unstable();
        v.dedup();
        Cow::Owned(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Euclidean,
    Cosine,
    Matrix,
}

/// On-disk instance description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub metric: MetricKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance> {
        let inst = match (self.metric, self.points, self.matrix) {
            (MetricKind::Matrix, None, Some(rows)) => Instance::from_rows(rows)?,
            (MetricKind::Euclidean, Some(p), None) => Instance::euclidean(p)?,
            (MetricKind::Cosine, Some(p), None) => Instance::cosine(p)?.0,
            (kind, _, _) => {
                let want = if kind == MetricKind::Matrix { "matrix" } else { "points" };
                return Err(Error::Input(format!(
                    "metric {kind:?} requires exactly the `{want}` field"
                )));
            }
        };
        if inst.len() != self.n {
            return Err(Error::Input(format!(
                "declared n = {} but found {} points",
                self.n,
                inst.len()
            )));
        }
        Ok(inst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> Instance {
        Instance::euclidean(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn div_of_collinear_triple() {
        let inst = line(&[0.0, 1.0, 2.0]);
        assert_eq!(inst.div(&[0, 1, 2]).unwrap(), 1.0);
        assert_eq!(inst.div(&[0, 2]).unwrap(), 2.0);
    }

    #[test]
    fn small_sets_take_the_diameter() {
        let inst = line(&[0.0, 1.0, 2.0, 2.0]);
        assert_eq!(inst.d_max(), 2.0);
        assert_eq!(inst.div(&[]).unwrap(), 2.0);
        for i in 0..4 {
            assert_eq!(inst.div(&[i]).unwrap(), 2.0);
        }
    }

    #[test]
    fn duplicate_points_have_zero_diversity() {
        let inst = line(&[0.0, 1.0, 2.0, 2.0]);
        assert_eq!(inst.dist(2, 3), 0.0);
        assert_eq!(inst.div(&[0, 2, 3]).unwrap(), 0.0);
        assert_eq!(inst.div(&[0, 2]).unwrap(), 2.0);
    }

    #[test]
    fn div_rejects_bad_index() {
        let inst = line(&[0.0, 1.0]);
        assert!(matches!(inst.div(&[0, 5]), Err(Error::IndexOutOfRange { index: 5, n: 2 })));
    }

    #[test]
    fn diametrical_pair_is_lexicographically_first() {
        let inst = Instance::from_rows(vec![
            vec![0.0, 3.0, 1.0, 3.0],
            vec![3.0, 0.0, 3.0, 1.0],
            vec![1.0, 3.0, 0.0, 3.0],
            vec![3.0, 1.0, 3.0, 0.0],
        ])
        .unwrap();
        assert_eq!(inst.diameter(), Diameter { value: 3.0, pair: Some((0, 1)) });
    }

    #[test]
    fn set_distance_to_empty_is_unbounded() {
        let inst = line(&[0.0, 5.0]);
        assert_eq!(inst.dist_to_set(0, &[]), SetDistance::Unbounded);
        assert!(inst.dist_to_set(0, &[]).at_least(f64::MAX));
        assert_eq!(inst.dist_to_set(0, &[1]), SetDistance::Finite(5.0));
        assert!(inst.dist_to_set(0, &[1]).at_least(5.0));
        assert!(!inst.dist_to_set(0, &[1]).at_least(5.0 + 1e-12));
    }

    #[test]
    fn matrix_validation() {
        assert!(matches!(
            Instance::from_rows(vec![vec![0.0, 1.0], vec![2.0, 0.0]]),
            Err(Error::Metric(_))
        ));
        assert!(matches!(
            Instance::from_rows(vec![vec![1.0, 1.0], vec![1.0, 0.0]]),
            Err(Error::Metric(_))
        ));
        assert!(matches!(
            Instance::from_rows(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]),
            Err(Error::Metric(_))
        ));
        assert!(matches!(Instance::from_rows(vec![vec![0.0, 1.0]]), Err(Error::Input(_))));
    }

    #[test]
    fn triangle_check_flags_violation() {
        let bad = Instance::from_rows(vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(matches!(bad.validate_triangle(TRIANGLE_TOLERANCE), Err(Error::Metric(_))));
        let ok = line(&[0.0, 1.0, 3.0, 7.5]);
        ok.validate_triangle(TRIANGLE_TOLERANCE).unwrap();
    }

    #[test]
    fn cosine_normalizes_and_measures() {
        let (inst, renorm) = Instance::cosine(vec![vec![2.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(renorm);
        assert_eq!(inst.dist(0, 1), 2.0);
        assert!((inst.dist(0, 2) - 1.0).abs() < 1e-15);
        assert!(Instance::cosine(vec![vec![0.0, 0.0]]).is_err());
    }

    #[test]
    fn json_round_trip_and_schema_errors() {
        let inst = line(&[0.0, 1.5, 4.0]);
        let back = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back, inst);

        let m = Instance::from_json(r#"{"n":2,"metric":"matrix","matrix":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(m.dist(0, 1), 1.0);

        for bad in [
            r#"{"n":2,"metric":"matrix","points":[[0],[1]]}"#,
            r#"{"n":2,"metric":"euclidean","points":[[0],[1]],"matrix":[[0,1],[1,0]]}"#,
            r#"{"n":3,"metric":"euclidean","points":[[0],[1]]}"#,
            r#"{"n":2,"metric":"hamming","points":[[0],[1]]}"#,
        ] {
            assert!(Instance::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn dense_cache_matches_direct_computation() {
        let pts: Vec<Vec<f64>> = (0..20).map(|i| vec![(i as f64).sin(), (i as f64 * 0.7).cos(), i as f64 * 0.1]).collect();
        let inst = Instance::euclidean(pts).unwrap();
        for i in 0..20 {
            for j in 0..20 {
                let direct = if i == j { 0.0 } else { inst.compute(i.min(j), i.max(j)) };
                assert_eq!(inst.dist(i, j), direct);
                assert_eq!(inst.dist(i, j), inst.dist(j, i));
            }
        }
    }
}
