use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::independent_set::run;
use super::AlgoConfig;
use crate::error::Result;
use crate::instance::Instance;
use crate::objective::{Algorithm, Problem, Solution};

/// Better of the classic greedy solution for `g` and a diametrical pair.
///
/// The pair only replaces the greedy set when strictly better.
pub fn simple_baseline(problem: &Problem<'_>) -> Result<Solution> {
    problem.validate()?;
    let first = run(problem.instance, problem.utility, 0.0, problem.k);
    let mut set = first.order;
    set.sort_unstable();
    let mut eval = problem.evaluate_sorted(&set);
    let mut calls = first.queries + 1;

    if problem.k >= 2 {
        if let Some((u, v)) = problem.instance.diameter().pair {
            calls += 1;
            let pair = problem.evaluate_sorted(&[u, v]);
            if pair.f > eval.f {
                set = vec![u, v];
                eval = pair;
            }
        }
    }
    Ok(Solution::new(set, eval, Algorithm::Simple, calls))
}

/// Running max-min diversity of a growing set.
struct Spread<'a> {
    instance: &'a Instance,
    members: Vec<usize>,
    // Distance from each point to the nearest member; meaningless while empty.
    nearest: Vec<f64>,
    min_pair: f64,
}

impl<'a> Spread<'a> {
    fn new(instance: &'a Instance) -> Self {
        Spread {
            instance,
            members: Vec::new(),
            nearest: vec![0.0; instance.len()],
            min_pair: 0.0,
        }
    }

    fn div(&self) -> f64 {
        if self.members.len() <= 1 {
            self.instance.d_max()
        } else {
            self.min_pair
        }
    }

    /// `div(S + v)` without modifying `S`.
    fn div_with(&self, v: usize) -> f64 {
        match self.members.len() {
            0 => self.instance.d_max(),
            1 => self.nearest[v],
            _ => self.min_pair.min(self.nearest[v]),
        }
    }

    fn insert(&mut self, v: usize) {
        self.min_pair = self.div_with(v);
        if self.members.is_empty() {
            for (u, near) in self.nearest.iter_mut().enumerate() {
                *near = self.instance.dist(u, v);
            }
        } else {
            for (u, near) in self.nearest.iter_mut().enumerate() {
                *near = near.min(self.instance.dist(u, v));
            }
        }
        self.members.push(v);
    }
}

// Index of the best prefix length (1-based); later prefixes win ties.
fn best_prefix(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &f) in values.iter().enumerate() {
        if f >= values[best] {
            best = i;
        }
    }
    best + 1
}

/// Classic greedy on `f` with the default configuration.
pub fn classic_greedy(problem: &Problem<'_>) -> Result<Solution> {
    classic_greedy_with(problem, &AlgoConfig::default())
}

/// Adds the point with the largest marginal gain in `f` (ties to the lowest
/// index) up to `k` times and returns the best prefix.
///
/// With `config.greedy_stop_on_negative` the loop ends as soon as the best
/// available gain is negative; otherwise it always runs `k` steps.
pub fn classic_greedy_with(problem: &Problem<'_>, config: &AlgoConfig) -> Result<Solution> {
    problem.validate()?;
    let (instance, lambda) = (problem.instance, problem.lambda);
    let n = instance.len();
    let mut state = problem.utility.state();
    let mut spread = Spread::new(instance);
    let mut chosen = vec![false; n];
    let mut prefix_f = Vec::with_capacity(problem.k);

    for _ in 0..problem.k {
        let current_div = spread.div();
        let mut best: Option<(f64, usize)> = None;
        for v in (0..n).filter(|&v| !chosen[v]) {
            let delta = state.gain(v) + lambda * (spread.div_with(v) - current_div);
            if best.is_none_or(|(b, _)| delta > b) {
                best = Some((delta, v));
            }
        }
        let Some((delta, t)) = best else { break };
        if config.greedy_stop_on_negative && delta < 0.0 && !spread.members.is_empty() {
            break;
        }
        state.insert(t);
        spread.insert(t);
        chosen[t] = true;
        prefix_f.push(state.value() + lambda * spread.div());
    }

    let keep = best_prefix(&prefix_f);
    let mut set = spread.members[..keep].to_vec();
    set.sort_unstable();
    let eval = problem.evaluate_sorted(&set);
    let calls = state.queries() + 1;
    Ok(Solution::new(set, eval, Algorithm::Greedy, calls))
}

/// Samples `k` points uniformly without replacement, orders them randomly
/// and returns the best prefix. Deterministic for a fixed seed.
pub fn random_baseline(problem: &Problem<'_>, seed: u64) -> Result<Solution> {
    problem.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = rand::seq::index::sample(&mut rng, problem.n(), problem.k).into_vec();
    order.shuffle(&mut rng);

    let mut state = problem.utility.state();
    let mut spread = Spread::new(problem.instance);
    let mut prefix_f = Vec::with_capacity(order.len());
    for &v in &order {
        state.gain(v);
        state.insert(v);
        spread.insert(v);
        prefix_f.push(state.value() + problem.lambda * spread.div());
    }
    let keep = best_prefix(&prefix_f);
    let mut set = order[..keep].to_vec();
    set.sort_unstable();
    let eval = problem.evaluate_sorted(&set);
    let mut sol = Solution::new(set, eval, Algorithm::Random, state.queries() + 1);
    sol.seed = Some(seed);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::utility::{LinearUtility, Utility};

    fn line(xs: &[f64]) -> Instance {
        Instance::euclidean(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn best_prefix_prefers_longer_on_ties() {
        assert_eq!(best_prefix(&[1.0, 3.0, 2.0]), 2);
        assert_eq!(best_prefix(&[1.0, 3.0, 3.0]), 3);
        assert_eq!(best_prefix(&[5.0]), 1);
    }

    #[test]
    fn spread_tracks_min_distance() {
        let inst = line(&[0.0, 4.0, 1.0, 9.0]);
        let mut s = Spread::new(&inst);
        assert_eq!(s.div(), 9.0);
        assert_eq!(s.div_with(1), 9.0);
        s.insert(0);
        assert_eq!(s.div(), 9.0);
        assert_eq!(s.div_with(1), 4.0);
        s.insert(1);
        assert_eq!(s.div(), 4.0);
        assert_eq!(s.div_with(2), 1.0);
        assert_eq!(s.div_with(3), 4.0);
        s.insert(3);
        assert_eq!(s.div(), 4.0);
    }

    #[test]
    fn simple_takes_pair_when_utility_vanishes() {
        let inst = line(&[0.0, 1.0, 2.5, 7.0]);
        let g = Utility::zero(4);
        let p = Problem::new(&inst, &g, 1.0, 3).unwrap();
        let s = simple_baseline(&p).unwrap();
        assert_eq!(s.f_value, 7.0);
        assert_eq!(s.selected, vec![0, 3]);
    }

    #[test]
    fn simple_skips_pair_for_k_one() {
        let inst = line(&[0.0, 1.0, 2.5, 7.0]);
        let g = Utility::zero(4);
        let p = Problem::new(&inst, &g, 1.0, 1).unwrap();
        assert_eq!(simple_baseline(&p).unwrap().selected, vec![0]);
    }

    #[test]
    fn greedy_single_point() {
        let inst = line(&[3.0]);
        let g: Utility = LinearUtility::new(vec![0.5]).unwrap().into();
        let p = Problem::new(&inst, &g, 1.0, 1).unwrap();
        let s = classic_greedy(&p).unwrap();
        assert_eq!(s.selected, vec![0]);
        assert_eq!(s.f_value, 0.5);
    }

    #[test]
    fn greedy_variants_differ_on_negative_gains() {
        // Points 0 and 1 are far apart; everything else is close together.
        let inst = Instance::from_rows(vec![
            vec![0.0, 2.2, 1.1, 1.1],
            vec![2.2, 0.0, 1.1, 1.1],
            vec![1.1, 1.1, 0.0, 1.1],
            vec![1.1, 1.1, 1.1, 0.0],
        ])
        .unwrap();
        let g: Utility = LinearUtility::uniform(4, 1.0).unwrap().into();
        let p = Problem::new(&inst, &g, 1.0, 4).unwrap();
        let stop = classic_greedy(&p).unwrap();
        assert_eq!(stop.selected, vec![0, 1]);
        let all = classic_greedy_with(&p, &AlgoConfig { greedy_stop_on_negative: false, ..Default::default() }).unwrap();
        assert_eq!(all.selected, vec![0, 1, 2, 3]);
        assert!((all.f_value - 5.1).abs() < 1e-12);
    }

    #[test]
    fn random_is_seeded() {
        let inst = line(&[0.0, 1.0, 2.0, 3.5, 6.0, 6.5]);
        let g: Utility = LinearUtility::new(vec![0.2, 0.4, 0.1, 0.9, 0.3, 0.6]).unwrap().into();
        let p = Problem::new(&inst, &g, 0.3, 4).unwrap();
        let a = random_baseline(&p, 11).unwrap();
        assert_eq!(a, random_baseline(&p, 11).unwrap());
        assert_eq!(a.seed, Some(11));
        assert!(a.selected.len() <= 4);
    }
}
