//! Seeded random inputs for the property sweeps.

use divbound_core::thermo::MarkovSystem;
use divbound_core::{DiscreteDist, MomentSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

pub const MAX_SUPPORT: usize = 8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the simplex, with each coordinate zeroed with
/// probability `p_zero` (at least one coordinate stays positive).
pub fn simplex<R: Rng>(rng: &mut R, n: usize, p_zero: f64) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..n)
            .map(|_| {
                let e: f64 = rng.sample(Exp1);
                if rng.random::<f64>() < p_zero { 0.0 } else { e }
            })
            .collect();
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            return w.into_iter().map(|x| x / total).collect();
        }
    }
}

/// Sorted distinct points drawn uniformly from `[-3, 3]`.
pub fn support<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let mut xs: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        xs.sort_by(f64::total_cmp);
        if xs.windows(2).all(|w| w[0] < w[1]) {
            return xs;
        }
    }
}

/// Two distributions on a common random support of 1 to [`MAX_SUPPORT`]
/// points. About a fifth of the masses are zero, so disjoint and partially
/// overlapping supports occur.
pub fn dist_pair<R: Rng>(rng: &mut R) -> (DiscreteDist, DiscreteDist) {
    let n = rng.random_range(1..=MAX_SUPPORT);
    let xs = support(rng, n);
    let p = simplex(rng, n, 0.2);
    let q = simplex(rng, n, 0.2);
    (
        DiscreteDist::new(xs.clone(), p).expect("sampled masses are valid"),
        DiscreteDist::new(xs, q).expect("sampled masses are valid"),
    )
}

/// `(m_P, m_Q, σ)` with means in `[-2, 2]` and `σ ∈ [0.2, 2]`.
pub fn equal_variance_spec<R: Rng>(rng: &mut R) -> MomentSpec {
    let mp = rng.random_range(-2.0..2.0);
    let mq = rng.random_range(-2.0..2.0);
    let sigma = rng.random_range(0.2..2.0);
    MomentSpec::equal_variance(mp, mq, sigma).expect("sampled moments are valid")
}

/// Fully connected system with 3 to 5 states, rates in `[0.1, 5]` and a
/// random initial distribution.
pub fn markov_system<R: Rng>(rng: &mut R, tau: f64, dt: f64) -> MarkovSystem {
    let n = rng.random_range(3..=5);
    let mut rates = vec![vec![0.0; n]; n];
    for (i, row) in rates.iter_mut().enumerate() {
        for (j, r) in row.iter_mut().enumerate() {
            if i != j {
                *r = rng.random_range(0.1..=5.0);
            }
        }
    }
    let p0 = simplex(rng, n, 0.0);
    MarkovSystem::from_off_diagonal(rates, p0, tau, dt).expect("sampled system is valid")
}
