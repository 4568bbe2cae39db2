use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::utility::Utility;

/// Output of [`greedy_independent_set`].
#[derive(Debug, Clone, PartialEq)]
pub struct IndependentSet {
    /// Points in the order they were selected.
    pub order: Vec<usize>,
    pub oracle_calls: u64,
}

impl IndependentSet {
    /// Selected points, ascending.
    pub fn sorted(&self) -> Vec<usize> {
        let mut s = self.order.clone();
        s.sort_unstable();
        s
    }
}

pub(crate) struct Run {
    pub order: Vec<usize>,
    pub queries: u64,
    /// Smallest distance compared against `d` that passed. Every threshold in
    /// `(d, stable_until]` replays the same comparisons and so the same run.
    pub stable_until: f64,
}

/// Greedy maximal independent set of the intersection graph `G_d(V)`.
///
/// Starting from the empty set, repeatedly adds the point with the largest
/// marginal gain among those at distance `>= d` from everything selected so
/// far, until `k` points are chosen or no candidate remains. Gains are
/// compared exactly and ties go to the lowest index.
pub fn greedy_independent_set(instance: &Instance, utility: &Utility, d: f64, k: usize) -> Result<IndependentSet> {
    if k == 0 {
        return Err(Error::Parameter("k must be >= 1".into()));
    }
    if d.is_nan() || d < 0.0 {
        return Err(Error::Parameter(format!("threshold d = {d} must be nonnegative")));
    }
    if utility.len() != instance.len() {
        return Err(Error::Parameter(format!(
            "utility is defined on {} points but the instance has {}",
            utility.len(),
            instance.len()
        )));
    }
    let run = run(instance, utility, d, k);
    Ok(IndependentSet { order: run.order, oracle_calls: run.queries })
}

pub(crate) fn run(instance: &Instance, utility: &Utility, d: f64, k: usize) -> Run {
    let n = instance.len();
    let mut state = utility.state();
    // Selected points and points within distance d of a selected point.
    let mut blocked = vec![false; n];
    let mut order = Vec::with_capacity(k.min(n));
    let mut stable_until = f64::INFINITY;

    while order.len() < k {
        let mut best: Option<(f64, usize)> = None;
        for v in (0..n).filter(|&v| !blocked[v]) {
            let gain = state.gain(v);
            if best.is_none_or(|(b, _)| gain > b) {
                best = Some((gain, v));
            }
        }
        let Some((_, t)) = best else { break };
        state.insert(t);
        blocked[t] = true;
        order.push(t);
        if order.len() == k || d == 0.0 {
            continue;
        }
        for (v, b) in blocked.iter_mut().enumerate().filter(|(_, b)| !**b) {
            let dv = instance.dist(v, t);
            if dv < d {
                *b = true;
            } else if dv < stable_until {
                stable_until = dv;
            }
        }
    }
    // d = 0 blocks nothing regardless of distances, but the run is not
    // comparable with positive thresholds.
    if d == 0.0 {
        stable_until = 0.0;
    }
    Run { order, queries: state.queries(), stable_until }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::utility::{CoverageUtility, LinearUtility};

    fn line(xs: &[f64]) -> Instance {
        Instance::euclidean(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn collinear_threshold_example() {
        let inst = line(&[0.0, 1.0, 2.0]);
        let g: Utility = LinearUtility::uniform(3, 1.0).unwrap().into();
        let s = greedy_independent_set(&inst, &g, 1.5, 3).unwrap();
        assert_eq!(s.order, vec![0, 2]);
        // First scan sees 3 candidates, second sees only point 2.
        assert_eq!(s.oracle_calls, 4);
    }

    #[test]
    fn coverage_with_zero_threshold() {
        let inst = line(&[0.0, 1.0, 2.0]);
        let g: Utility = CoverageUtility::new(vec![vec![1, 2], vec![2, 3], vec![3, 4]]).unwrap().into();
        let s = greedy_independent_set(&inst, &g, 0.0, 2).unwrap();
        assert_eq!(s.order, vec![0, 2]);
        assert_eq!(g.evaluate(&s.sorted()).unwrap(), 4.0);
    }

    #[test]
    fn single_pick_is_lowest_index_argmax() {
        let inst = line(&[0.0, 1.0, 2.0, 3.0]);
        let g: Utility = LinearUtility::new(vec![1.0, 3.0, 0.5, 3.0]).unwrap().into();
        for d in [0.0, 0.5, 10.0] {
            assert_eq!(greedy_independent_set(&inst, &g, d, 1).unwrap().order, vec![1]);
        }
    }

    #[test]
    fn stops_when_graph_is_exhausted() {
        let inst = line(&[0.0, 0.1, 0.2, 5.0]);
        let g: Utility = LinearUtility::uniform(4, 1.0).unwrap().into();
        let s = greedy_independent_set(&inst, &g, 1.0, 4).unwrap();
        assert_eq!(s.order, vec![0, 3]);
    }

    #[test]
    fn threshold_is_inclusive() {
        let inst = line(&[0.0, 1.0]);
        let g: Utility = LinearUtility::uniform(2, 1.0).unwrap().into();
        assert_eq!(greedy_independent_set(&inst, &g, 1.0, 2).unwrap().order, vec![0, 1]);
        assert_eq!(greedy_independent_set(&inst, &g, 1.0 + 1e-12, 2).unwrap().order, vec![0]);
    }

    #[test]
    fn rejects_bad_parameters() {
        let inst = line(&[0.0, 1.0]);
        let g = Utility::zero(2);
        assert!(greedy_independent_set(&inst, &g, 0.0, 0).is_err());
        assert!(greedy_independent_set(&inst, &g, -1.0, 1).is_err());
        assert!(greedy_independent_set(&inst, &g, f64::NAN, 1).is_err());
        assert!(greedy_independent_set(&inst, &Utility::zero(3), 0.0, 1).is_err());
    }

    #[test]
    fn stable_interval_reproduces_run() {
        let inst = line(&[0.0, 0.7, 1.1, 2.5, 3.0, 4.4]);
        let g: Utility = LinearUtility::new(vec![0.3, 0.9, 0.2, 0.8, 0.5, 0.1]).unwrap().into();
        for d in [0.3, 0.45, 0.6, 1.2, 1.6] {
            let r = run(&inst, &g, d, 4);
            let probe = if r.stable_until.is_finite() { r.stable_until } else { d * 3.0 };
            assert_eq!(run(&inst, &g, probe, 4).order, r.order, "d = {d}");
        }
    }
}
