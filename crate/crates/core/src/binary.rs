//! Binary f-divergences `g(t) = D_f(R_t || R_t†)` and the sufficient
//! condition that `g'(t)/t` is non-decreasing.
//!
//! With `u = (1+t)/(1-t)` and `v = 1/u`,
//!
//! ```text
//! g(t)   = ((1-t)/2) f(u) + ((1+t)/2) f(v)
//! g'(t)  = ½(f(v) - f(u)) + f'(u)/(1-t) - f'(v)/(1+t)
//! g''(t) = 2 f''(u)/(1-t)³ + 2 f''(v)/(1+t)³
//! ```
//!
//! `g` is strictly increasing for strictly convex `f`, so its inverse `G` is
//! found by bisection. The condition `t g''(t) - g'(t) ≥ 0` is equivalent to
//! concavity of `G(T)²`.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fgen::Generator;
use crate::math::cos;

/// Distance from 1 at which grids over `(0, 1)` stop.
pub const EDGE_EPS: f64 = 1e-9;
/// Default tolerance on the condition margin.
pub const TOL_COND: f64 = 1e-9;
/// Residual tolerance of [`inverse_g`].
pub const TOL_INV: f64 = 1e-12;
/// Iteration cap for bisection.
pub const MAX_BISECTION: usize = 200;
/// Grid size the bound operations use when certifying a binary divergence.
pub const DEFAULT_GRID: usize = 1000;

/// A scalar function on `[0, 1]` playing the role of `g`.
pub trait BinaryFunction {
    fn g(&self, t: f64) -> f64;
    fn g1(&self, t: f64) -> f64;
    fn g2(&self, t: f64) -> f64;
    /// `lim_{t→1-} g(t)`, possibly `+∞`.
    fn g_at_1(&self) -> f64;
}

impl<B: BinaryFunction + ?Sized> BinaryFunction for &B {
    fn g(&self, t: f64) -> f64 {
        (**self).g(t)
    }
    fn g1(&self, t: f64) -> f64 {
        (**self).g1(t)
    }
    fn g2(&self, t: f64) -> f64 {
        (**self).g2(t)
    }
    fn g_at_1(&self) -> f64 {
        (**self).g_at_1()
    }
}

/// The binary divergence of a generator.
#[derive(Debug, Clone)]
pub struct BinaryDivergence<G> {
    gen: G,
    g_at_1: f64,
}

/// Builds `g` for `gen`. The limit at 1 is `slope_at_inf + f_at_0`.
pub fn make_binary<G: Generator>(gen: G) -> BinaryDivergence<G> {
    let g_at_1 = gen.slope_at_inf() + gen.f_at_0();
    BinaryDivergence { gen, g_at_1 }
}

impl<G: Generator> BinaryDivergence<G> {
    pub fn generator(&self) -> &G {
        &self.gen
    }

    /// `(1/(1+t)) (f'(v(-t)) - f'(v(t)))`, the strict lower bound on `g'(t)`.
    pub fn g1_lower_bound(&self, t: f64) -> f64 {
        let (u, v) = ratios(t);
        (self.gen.f1(u) - self.gen.f1(v)) / (1.0 + t)
    }
}

#[inline]
fn ratios(t: f64) -> (f64, f64) {
    ((1.0 + t) / (1.0 - t), (1.0 - t) / (1.0 + t))
}

/// Central difference of `d` at `t`, staying inside `(0, 1)`.
fn central_difference(d: impl Fn(f64) -> f64, t: f64) -> f64 {
    let h = (1e-5f64).max(1e-5 * t).min(0.5 * t).min(0.5 * (1.0 - t));
    (d(t + h) - d(t - h)) / (2.0 * h)
}

impl<G: Generator> BinaryFunction for BinaryDivergence<G> {
    fn g(&self, t: f64) -> f64 {
        if t >= 1.0 {
            return self.g_at_1;
        }
        let (u, v) = ratios(t);
        0.5 * (1.0 - t) * self.gen.f(u) + 0.5 * (1.0 + t) * self.gen.f(v)
    }

    fn g1(&self, t: f64) -> f64 {
        let (u, v) = ratios(t);
        let f = &self.gen;
        0.5 * (f.f(v) - f.f(u)) + f.f1(u) / (1.0 - t) - f.f1(v) / (1.0 + t)
    }

    fn g2(&self, t: f64) -> f64 {
        let (u, v) = ratios(t);
        match (self.gen.f2(u), self.gen.f2(v)) {
            (Some(a), Some(b)) => {
                let m = 1.0 - t;
                let p = 1.0 + t;
                2.0 * a / (m * m * m) + 2.0 * b / (p * p * p)
            }
            _ => central_difference(|s| self.g1(s), t),
        }
    }

    fn g_at_1(&self) -> f64 {
        self.g_at_1
    }
}

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A binary function given directly by closures, for exercising the checkers
/// on functions that do not come from a generator.
pub struct SyntheticBinary {
    g: RealFn,
    g1: RealFn,
    g2: Option<RealFn>,
    g_at_1: f64,
}

impl SyntheticBinary {
    pub fn new<F, F1>(g: F, g1: F1, g_at_1: f64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        F1: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        SyntheticBinary {
            g: Box::new(g),
            g1: Box::new(g1),
            g2: None,
            g_at_1,
        }
    }

    pub fn with_g2<F2>(mut self, g2: F2) -> Self
    where
        F2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.g2 = Some(Box::new(g2));
        self
    }
}

impl core::fmt::Debug for SyntheticBinary {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SyntheticBinary")
            .field("g_at_1", &self.g_at_1)
            .finish_non_exhaustive()
    }
}

impl BinaryFunction for SyntheticBinary {
    fn g(&self, t: f64) -> f64 {
        if t >= 1.0 {
            self.g_at_1
        } else {
            (self.g)(t)
        }
    }
    fn g1(&self, t: f64) -> f64 {
        (self.g1)(t)
    }
    fn g2(&self, t: f64) -> f64 {
        match &self.g2 {
            Some(g2) => g2(t),
            None => central_difference(|s| (self.g1)(s), t),
        }
    }
    fn g_at_1(&self) -> f64 {
        self.g_at_1
    }
}

/// `G = g⁻¹` on `[0, ∞]` by bisection over `[0, 1]`.
///
/// Returns 1 once `T` reaches `g(1)`. Bisection runs until the bracket
/// stops shrinking or [`MAX_BISECTION`] iterations, so the result is as
/// close to the true preimage as floating point allows.
pub fn inverse_g<B: BinaryFunction + ?Sized>(bd: &B, target: f64) -> Result<f64> {
    if target.is_nan() || target < 0.0 {
        return Err(Error::Domain {
            what: "T",
            value: target,
        });
    }
    if target == 0.0 {
        return Ok(0.0);
    }
    if target >= bd.g_at_1() {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..MAX_BISECTION {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if bd.g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // pick the bracket end with the smaller residual
    let (rl, rh) = ((bd.g(lo) - target).abs(), (bd.g(hi) - target).abs());
    Ok(if rl <= rh { lo } else { hi })
}

/// Evidence for (or against) `t g''(t) - g'(t) ≥ 0` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCertificate {
    pub satisfied: bool,
    pub grid: Vec<f64>,
    /// `min_t t g''(t) - g'(t)` over the grid.
    pub min_margin: f64,
    /// Grid point attaining `min_margin`.
    pub witness: f64,
    /// Whether `g'(t)/t` is non-decreasing between consecutive grid points
    /// (relative tolerance 1e-9).
    pub ratio_monotone: bool,
    pub tolerance: f64,
}

/// Chebyshev nodes on `(0, 1 - EDGE_EPS)`, increasing.
pub fn chebyshev_grid(size: usize) -> Vec<f64> {
    let b = 1.0 - EDGE_EPS;
    (0..size)
        .map(|k| {
            let theta = PI * (2 * k + 1) as f64 / (2 * size) as f64;
            0.5 * b * (1.0 - cos(theta))
        })
        .collect()
}

pub fn check_condition<B: BinaryFunction + ?Sized>(
    bd: &B,
    grid_size: usize,
) -> Result<ConditionCertificate> {
    check_condition_with_tol(bd, grid_size, TOL_COND)
}

pub fn check_condition_with_tol<B: BinaryFunction + ?Sized>(
    bd: &B,
    grid_size: usize,
    tolerance: f64,
) -> Result<ConditionCertificate> {
    if grid_size < 100 {
        return Err(Error::Precondition("grid_size must be at least 100"));
    }
    let grid = chebyshev_grid(grid_size);
    let mut min_margin = f64::INFINITY;
    let mut witness = grid[0];
    let mut ratios = Vec::with_capacity(grid.len());
    for &t in &grid {
        let g1 = bd.g1(t);
        let g2 = bd.g2(t);
        if !g2.is_finite() || !g1.is_finite() {
            return Err(Error::Evaluation { t });
        }
        let margin = t * g2 - g1;
        if margin < min_margin {
            min_margin = margin;
            witness = t;
        }
        ratios.push(g1 / t);
    }
    let ratio_monotone = ratios
        .windows(2)
        .all(|w| w[1] >= w[0] - 1e-9 * (1.0 + w[0].abs()));
    Ok(ConditionCertificate {
        satisfied: min_margin >= -tolerance,
        grid,
        min_margin,
        witness,
        ratio_monotone,
        tolerance,
    })
}

/// Certifies `bd` on the default grid, failing with the certificate attached.
pub(crate) fn require_condition<B: BinaryFunction + ?Sized>(bd: &B) -> Result<()> {
    let cert = check_condition(bd, DEFAULT_GRID)?;
    if cert.satisfied {
        Ok(())
    } else {
        Err(Error::ConditionNotSatisfied(Box::new(cert)))
    }
}

/// Midpoint concavity of `G(T)²` over `grid_size` deterministic pairs in
/// `[0, g(0.99)]`.
///
/// Pairs come from a two-dimensional Kronecker sequence, so the check is
/// reproducible without a random source. Only meaningful for binary
/// functions that pass [`check_condition`].
pub fn concavity_check_g_squared<B: BinaryFunction + ?Sized>(bd: &B, grid_size: usize) -> bool {
    const TOL: f64 = 1e-12;
    // 1/ρ and 1/ρ² for the plastic number ρ
    const A1: f64 = 0.754_877_666_246_692_8;
    const A2: f64 = 0.569_840_290_998_053_3;
    let top = bd.g(0.99);
    let sq = |t: f64| -> Option<f64> { inverse_g(bd, t).ok().map(|x| x * x) };
    for k in 1..=grid_size {
        let x1 = (0.5 + A1 * k as f64) % 1.0;
        let x2 = (0.5 + A2 * k as f64) % 1.0;
        let (t1, t2) = (x1 * top, x2 * top);
        let (Some(a), Some(b), Some(m)) = (sq(t1), sq(t2), sq(0.5 * (t1 + t2))) else {
            return false;
        };
        if m < 0.5 * (a + b) - TOL {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgen::{catalog, f_divergence, DiscreteDist, FGenerator};
    use crate::math::{ln, sqrt};

    fn unit_grid() -> Vec<f64> {
        (1..100).map(|i| i as f64 / 100.0).collect()
    }

    #[test]
    fn closed_forms() {
        let td = make_binary(FGenerator::Triangular);
        let h = make_binary(FGenerator::Hellinger);
        let kl = make_binary(FGenerator::KullbackLeibler);
        for t in unit_grid() {
            assert!((td.g(t) - t * t).abs() < 1e-12);
        }
        assert!((h.g(0.6) - 0.2).abs() < 1e-15);
        assert!((kl.g(0.5) - 0.5 * ln(3.0)).abs() < 1e-15);
    }

    #[test]
    fn g_vanishes_at_zero_and_has_symbolic_limit_at_one() {
        let expected = [1.0, f64::INFINITY, 1.0, core::f64::consts::LN_2];
        for (gen, want) in catalog().into_iter().zip(expected) {
            let bd = make_binary(gen);
            assert!(bd.g(0.0).abs() < 1e-14, "{gen}");
            if want.is_finite() {
                assert!((bd.g_at_1() - want).abs() < 1e-15, "{gen}");
                assert!((bd.g(1.0 - 1e-9) - want).abs() < 1e-4, "{gen}");
            } else {
                assert_eq!(bd.g_at_1(), f64::INFINITY);
            }
        }
    }

    #[test]
    fn g_agrees_with_f_divergence_on_binary_pairs() {
        for gen in catalog() {
            let bd = make_binary(gen);
            for t in unit_grid() {
                let (r, rd) = DiscreteDist::binary_pair(t).unwrap();
                let fwd = f_divergence(&gen, &r, &rd).unwrap();
                let bwd = f_divergence(&gen, &rd, &r).unwrap();
                assert!((bd.g(t) - fwd).abs() < 1e-12, "{gen} {t}");
                assert!((bd.g(t) - bwd).abs() < 1e-12, "{gen} {t}");
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for gen in catalog() {
            let bd = make_binary(gen);
            for i in 0..=90 {
                let t = 0.05 + 0.01 * i as f64;
                let h = 1e-6;
                let fd = (bd.g(t + h) - bd.g(t - h)) / (2.0 * h);
                let rel = (fd - bd.g1(t)).abs() / bd.g1(t).abs();
                assert!(rel <= 1e-6, "{gen} g1 at {t}: {rel}");
                let fd2 = (bd.g1(t + h) - bd.g1(t - h)) / (2.0 * h);
                let rel2 = (fd2 - bd.g2(t)).abs() / bd.g2(t).abs().max(1e-300);
                assert!(rel2 <= 1e-5, "{gen} g2 at {t}: {rel2}");
            }
        }
    }

    #[test]
    fn g1_strictly_above_its_lower_bound() {
        for gen in catalog() {
            let bd = make_binary(gen);
            let grid = chebyshev_grid(500);
            for w in grid.windows(2) {
                assert!(bd.g(w[1]) > bd.g(w[0]), "{gen} not increasing at {}", w[1]);
            }
            for &t in grid.iter().filter(|&&t| t > 1e-3 && t < 0.999) {
                let lb = bd.g1_lower_bound(t);
                assert!(bd.g1(t) > lb && lb > 0.0, "{gen} at {t}");
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let td = make_binary(FGenerator::Triangular);
        assert!((inverse_g(&td, 0.25).unwrap() - 0.5).abs() < 1e-15);
        let h = make_binary(FGenerator::Hellinger);
        assert!((inverse_g(&h, 0.2).unwrap() - 0.6).abs() < 1e-12);
        for gen in catalog() {
            assert_eq!(inverse_g(&make_binary(gen), 0.0).unwrap(), 0.0);
        }
        assert_eq!(inverse_g(&td, 1.0).unwrap(), 1.0);
        assert_eq!(inverse_g(&td, 7.0).unwrap(), 1.0);
        assert!(matches!(inverse_g(&td, -0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn inverse_approaches_one_for_kl() {
        let kl = make_binary(FGenerator::KullbackLeibler);
        let mut prev = 0.0;
        for big in [1.0, 10.0, 30.0, 100.0] {
            let t = inverse_g(&kl, big).unwrap();
            assert!(t > prev && t < 1.0);
            prev = t;
        }
        assert_eq!(inverse_g(&kl, f64::INFINITY).unwrap(), 1.0);
    }

    #[test]
    fn inverse_round_trips_in_t() {
        for gen in catalog() {
            let bd = make_binary(gen);
            for t in unit_grid() {
                let back = inverse_g(&bd, bd.g(t)).unwrap();
                assert!((back - t).abs() < 1e-10, "{gen} {t} {back}");
            }
        }
    }

    #[test]
    fn catalog_satisfies_condition() {
        for gen in catalog() {
            let cert = check_condition(&make_binary(gen), 1000).unwrap();
            assert!(cert.satisfied, "{gen}: {}", cert.min_margin);
            assert!(cert.ratio_monotone, "{gen}");
            // the margin vanishes as t → 0 (identically for TD), so only
            // rounding can push it below zero
            assert!(cert.min_margin >= -1e-11, "{gen}: {}", cert.min_margin);
        }
    }

    #[test]
    fn sqrt_negative_control_fails() {
        let bad = SyntheticBinary::new(sqrt, |t| 0.5 / sqrt(t), 1.0)
            .with_g2(|t| -0.25 / (t * sqrt(t)));
        let cert = check_condition(&bad, 200).unwrap();
        assert!(!cert.satisfied);
        assert!(!cert.ratio_monotone);
        // margin is -¾ t^{-1/2}; most negative at the smallest node
        assert_eq!(cert.witness, cert.grid[0]);
        assert!((cert.min_margin + 0.75 / sqrt(cert.witness)).abs() < 1e-6 * cert.min_margin.abs());
    }

    #[test]
    fn finite_difference_g2_fallback() {
        let td_like = SyntheticBinary::new(|t| t * t, |t| 2.0 * t, 1.0);
        assert!((td_like.g2(0.3) - 2.0).abs() < 1e-8);
        let cert = check_condition(&td_like, 300).unwrap();
        assert!(cert.satisfied, "{}", cert.min_margin);
    }

    #[test]
    fn small_grid_rejected() {
        let td = make_binary(FGenerator::Triangular);
        assert!(matches!(check_condition(&td, 10), Err(Error::Precondition(_))));
    }

    #[test]
    fn non_finite_g2_names_t() {
        let broken = SyntheticBinary::new(|t| t, |_| 1.0, 1.0)
            .with_g2(|t| if t > 0.5 { f64::NAN } else { 0.0 });
        match check_condition(&broken, 100) {
            Err(Error::Evaluation { t }) => assert!(t > 0.5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn g_squared_concavity() {
        for gen in catalog() {
            assert!(concavity_check_g_squared(&make_binary(gen), 300), "{gen}");
        }
        // g = √t gives G(T)² = T⁴, which is convex
        let bad = SyntheticBinary::new(sqrt, |t| 0.5 / sqrt(t), 1.0);
        assert!(!concavity_check_g_squared(&bad, 300));
    }
}
