//! Random instance generators, property suites for the operator-space
//! characterizations, and the fixed named instances.
//!
//! Every suite is a pure function of `(trials, seed)`: trial `i` draws from a
//! generator seeded with [`trial_seed`]`(seed, i)`, so a failure can be
//! replayed from the seed recorded next to it.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{norm2, Matrix};
use crate::operator::LinearOperator;
use crate::space::SpaceSpec;
use crate::{GeomError, Result};

mod named;
mod suites;

pub use named::{
    cube_pair, reproduce_examples, square_pair, stadium_pair, truncated_shift, l1_idempotent_pair,
    l1_nilpotent, SUBCHECKS,
};
pub use suites::{
    check_birkhoff_oracles, check_idempotent_ranges, check_monotone_transfer, check_nilpotent_nonparallel,
    check_orthogonality_split, check_parallel_attainment, check_strict_convexity_parallelism,
    range_intersection_dim,
};

/// A counterexample, replayable from `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    /// Human-readable dump of the instance and the values that disagreed.
    pub instance: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite_name: String,
    pub trials: usize,
    pub passes: usize,
    /// Trials whose only disagreement sits inside a tolerance band.
    pub marginal: usize,
    /// Sorted by trial index.
    pub failures: Vec<Failure>,
    pub seed: u64,
    /// Wall-clock time, filled in by callers that have a clock.
    pub elapsed: Option<Duration>,
    /// Suite-specific tallies, such as how many instances fell on each branch.
    pub counters: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Outcome {
    Pass,
    Marginal,
    Fail,
}

impl SuiteReport {
    pub fn new(suite_name: &str, seed: u64) -> Self {
        SuiteReport {
            suite_name: suite_name.to_string(),
            trials: 0,
            passes: 0,
            marginal: 0,
            failures: Vec::new(),
            seed,
            elapsed: None,
            counters: BTreeMap::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn marginal_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.marginal as f64 / self.trials as f64
        }
    }

    pub(crate) fn bump(&mut self, key: &str) {
        *self.counters.entry(key.to_string()).or_insert(0) += 1;
    }

    pub(crate) fn record(&mut self, trial: usize, seed: u64, outcome: Outcome, instance: impl FnOnce() -> String) {
        self.trials += 1;
        match outcome {
            Outcome::Pass => self.passes += 1,
            Outcome::Marginal => self.marginal += 1,
            Outcome::Fail => self.failures.push(Failure { trial, seed, instance: instance() }),
        }
    }

    /// Records a trial that errored as a failure carrying the error text.
    pub(crate) fn record_result(&mut self, trial: usize, seed: u64, result: Result<(Outcome, String)>) {
        match result {
            Ok((o, dump)) => self.record(trial, seed, o, || dump),
            Err(e) => self.record(trial, seed, Outcome::Fail, || alloc::format!("error: {e}")),
        }
    }

    pub(crate) fn finish(mut self) -> Self {
        self.failures.sort_by_key(|f| f.trial);
        self
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index` in a suite run with `seed`.
pub fn trial_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(index as u64))
}

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn uniform_matrix(rng: &mut impl Rng, rows: usize, cols: usize, scale: f64) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(-scale..=scale)).collect();
    Matrix::new(rows, cols, data).expect("shape matches data")
}

pub(crate) fn random_operator(
    rng: &mut impl Rng,
    domain: &SpaceSpec,
    codomain: &SpaceSpec,
    scale: f64,
) -> Result<LinearOperator> {
    loop {
        let m = uniform_matrix(rng, codomain.dim(), domain.dim(), scale);
        if m.max_abs() > 0.0 {
            return LinearOperator::new(m, domain.clone(), codomain.clone());
        }
    }
}

/// Gaussian vector.
pub(crate) fn random_vector(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| crate::space::gaussian(rng)).collect();
        if norm2(&v) > 1e-3 {
            return v;
        }
    }
}

/// A nonzero scalar with magnitude in `[lo, hi]` and random sign.
pub(crate) fn signed(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    let m = rng.gen_range(lo..=hi);
    if rng.gen::<bool>() {
        m
    } else {
        -m
    }
}

/// Operator with i.i.d. entries uniform on `[-entry_scale, entry_scale]`.
pub fn gen_operator(seed: u64, domain: &SpaceSpec, codomain: &SpaceSpec, entry_scale: f64) -> Result<LinearOperator> {
    if !(entry_scale > 0.0) || !entry_scale.is_finite() {
        return Err(GeomError::OutOfRange("entry scale must be positive and finite"));
    }
    random_operator(&mut rng_for(seed), domain, codomain, entry_scale)
}

pub(crate) fn nilpotent(rng: &mut impl Rng, n: usize) -> Result<LinearOperator> {
    if n < 2 {
        return Err(GeomError::OutOfRange("nilpotent generator needs n >= 2"));
    }
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            data[i * n + j] = if j == i + 1 { signed(rng, 0.1, 1.0) } else { rng.gen_range(-1.0..=1.0) };
        }
    }
    let space = SpaceSpec::l2(n);
    LinearOperator::new(Matrix::new(n, n, data)?, space.clone(), space)
}

/// Strictly upper-triangular operator on ℓ₂ⁿ with superdiagonal entries of
/// magnitude at least 0.1, so that Aⁿ = 0 while Aʲ ≠ 0 for j < n.
pub fn gen_nilpotent(seed: u64, n: usize) -> Result<LinearOperator> {
    nilpotent(&mut rng_for(seed), n)
}

/// V P V⁻¹ with P the projection onto the first `rank` coordinates and V
/// well conditioned. `shared` forces V's first column.
pub(crate) fn idempotent(rng: &mut impl Rng, n: usize, rank: usize, shared: Option<&[f64]>) -> Result<Matrix> {
    for _ in 0..1000 {
        let mut v = uniform_matrix(rng, n, n, 1.0);
        if let Some(col) = shared {
            for (i, &c) in col.iter().enumerate() {
                v[(i, 0)] = c;
            }
        }
        if !(v.condition_number() <= 100.0) {
            continue;
        }
        let inv = v.inverse()?;
        let mut p = Matrix::zeros(n, n);
        for i in 0..rank {
            p[(i, i)] = 1.0;
        }
        let a = v.mul(&p)?.mul(&inv)?;
        if a.mul(&a)?.sub(&a)?.max_abs() <= 1e-10 {
            return Ok(a);
        }
    }
    Err(GeomError::ConstructionFailed("no well-conditioned idempotent found".into()))
}

pub(crate) fn idempotent_pair(
    rng: &mut impl Rng,
    n: usize,
    shared_range: bool,
) -> Result<(LinearOperator, LinearOperator)> {
    if n < 2 {
        return Err(GeomError::OutOfRange("idempotent generator needs n >= 2"));
    }
    let space = SpaceSpec::l2(n);
    let shared = shared_range.then(|| random_vector(rng, n));
    let ra = rng.gen_range(1..n);
    let rb = rng.gen_range(1..n);
    let a = idempotent(rng, n, ra, shared.as_deref())?;
    let b = idempotent(rng, n, rb, shared.as_deref())?;
    Ok((LinearOperator::new(a, space.clone(), space.clone())?, LinearOperator::new(b, space.clone(), space)?))
}

/// Two idempotents A = V P V⁻¹, B = W Q W⁻¹ on ℓ₂ⁿ with P, Q coordinate
/// projections of ranks in [1, n−1] and cond(V), cond(W) ≤ 100.
pub fn gen_idempotent_pair(seed: u64, n: usize) -> Result<(LinearOperator, LinearOperator)> {
    idempotent_pair(&mut rng_for(seed), n, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_generator_is_deterministic() {
        let x = SpaceSpec::l1(3);
        let a = gen_operator(7, &x, &x, 1.0).unwrap();
        assert_eq!(a, gen_operator(7, &x, &x, 1.0).unwrap());
        assert!(a.flat().iter().all(|v| v.abs() <= 1.0));
        let mut seen: Vec<Vec<f64>> = Vec::new();
        for s in 0..100 {
            let m = gen_operator(s, &x, &x, 1.0).unwrap().flat().to_vec();
            assert!(!seen.contains(&m));
            seen.push(m);
        }
        assert!(gen_operator(1, &x, &x, 0.0).is_err());
    }

    #[test]
    fn nilpotent_hypotheses() {
        for s in 0..100 {
            for n in [2usize, 3, 4] {
                let a = gen_nilpotent(s, n).unwrap();
                assert_eq!(a.pow(n as u32).unwrap().matrix().max_abs(), 0.0);
                assert!(a.pow(n as u32 - 1).unwrap().matrix().max_abs() > 0.0);
            }
        }
    }

    #[test]
    fn idempotent_pairs() {
        for s in 0..20 {
            let (a, b) = gen_idempotent_pair(s, 3).unwrap();
            for m in [a.matrix(), b.matrix()] {
                assert!(m.mul(m).unwrap().sub(m).unwrap().max_abs() <= 1e-10);
                let r = m.rank(1e-8);
                assert!((1..3).contains(&r));
            }
        }
    }

    #[test]
    fn trial_seeds_differ() {
        assert_ne!(trial_seed(1, 0), trial_seed(1, 1));
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
    }
}
