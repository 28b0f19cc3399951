//! Inequalities between the triangular discrimination `Δ` and the squared
//! Hellinger distance, the Bhattacharyya coefficient and the Jensen-Shannon
//! divergence, each compared with the weaker classical bound.

use core::f64::consts::LN_2;

use crate::binary::{make_binary, BinaryFunction};
use crate::error::Result;
use crate::fgen::{f_divergence, DiscreteDist, FGenerator};
use crate::math::{sqrt, xlogx};

/// `lhs ≥ rhs ≥ prior_rhs`, normalized so that `slack ≥ 0` means the
/// inequality holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IneqReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`.
    pub slack: f64,
    pub prior_rhs: f64,
    /// `rhs - prior_rhs`.
    pub improvement: f64,
    /// Disagreement between two algebraically equal forms of `rhs`
    /// (zero where only one form exists).
    pub form_gap: f64,
}

impl IneqReport {
    fn new(lhs: f64, rhs: f64, prior_rhs: f64, form_gap: f64) -> Self {
        IneqReport {
            lhs,
            rhs,
            slack: lhs - rhs,
            prior_rhs,
            improvement: rhs - prior_rhs,
            form_gap,
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }
}

pub fn triangular_discrimination(p: &DiscreteDist, q: &DiscreteDist) -> Result<f64> {
    f_divergence(&FGenerator::Triangular, p, q)
}

pub fn hellinger_squared(p: &DiscreteDist, q: &DiscreteDist) -> Result<f64> {
    f_divergence(&FGenerator::Hellinger, p, q)
}

/// Natural-log Jensen-Shannon divergence.
pub fn jensen_shannon(p: &DiscreteDist, q: &DiscreteDist) -> Result<f64> {
    f_divergence(&FGenerator::JensenShannon, p, q)
}

/// `Z(P,Q) = Σ √(p q)`.
pub fn bhattacharyya_coefficient(p: &DiscreteDist, q: &DiscreteDist) -> Result<f64> {
    // reuse the alignment check
    f_divergence(&FGenerator::Triangular, p, q)?;
    Ok(p.mass().iter().zip(q.mass()).map(|(a, b)| sqrt(a * b)).sum())
}

/// `½ Σ |p - q|`.
pub fn total_variation(p: &DiscreteDist, q: &DiscreteDist) -> Result<f64> {
    f_divergence(&FGenerator::Triangular, p, q)?;
    Ok(0.5 * p.mass().iter().zip(q.mass()).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Entropy of `R_t` in nats.
pub fn binary_entropy(t: f64) -> f64 {
    -xlogx(0.5 * (1.0 - t)) - xlogx(0.5 * (1.0 + t))
}

/// `1 - √(1 - d)` in the cancellation-free form `d / (1 + √(1 - d))`.
pub fn hellinger_td_rhs(d: f64) -> f64 {
    d / (1.0 + sqrt(1.0 - d))
}

/// `H²(P,Q) ≥ 1 - √(1 - Δ)`, against the classical `H² ≥ Δ/2`.
pub fn hellinger_td_bound(p: &DiscreteDist, q: &DiscreteDist) -> Result<IneqReport> {
    let d = triangular_discrimination(p, q)?.min(1.0);
    let lhs = hellinger_squared(p, q)?;
    let rhs = hellinger_td_rhs(d);
    let gap = ((1.0 - sqrt(1.0 - d)) - rhs).abs();
    Ok(IneqReport::new(lhs, rhs, 0.5 * d, gap))
}

/// `Δ + Z² ≤ 1`, reported as `lhs = 1`, `rhs = Δ + Z²`.
pub fn bhattacharyya_relation(p: &DiscreteDist, q: &DiscreteDist) -> Result<IneqReport> {
    let d = triangular_discrimination(p, q)?;
    let z = bhattacharyya_coefficient(p, q)?;
    let rhs = d + z * z;
    Ok(IneqReport::new(1.0, rhs, rhs, 0.0))
}

/// `JS(P,Q) ≥ g_JS(√Δ) = ln 2 - H_b(R_√Δ)`, against the classical `JS ≥ Δ/2`.
pub fn js_td_bound(p: &DiscreteDist, q: &DiscreteDist) -> Result<IneqReport> {
    let d = triangular_discrimination(p, q)?.min(1.0);
    let lhs = jensen_shannon(p, q)?;
    let t = sqrt(d);
    let via_g = make_binary(FGenerator::JensenShannon).g(t);
    let via_entropy = LN_2 - binary_entropy(t);
    Ok(IneqReport::new(lhs, via_g, 0.5 * d, (via_g - via_entropy).abs()))
}

/// Checks `g_JS(√t) ≥ t/2` on `grid_size` evenly spaced points of `(0, 1]`.
pub fn js_linear_minorant_check(grid_size: usize) -> bool {
    let js = make_binary(FGenerator::JensenShannon);
    (1..=grid_size).all(|i| {
        let t = i as f64 / grid_size as f64;
        js.g(sqrt(t)) >= 0.5 * t - 1e-12
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::ln;
    use alloc::vec;

    fn dist(m: &[f64]) -> DiscreteDist {
        DiscreteDist::from_masses(m.to_vec()).unwrap()
    }

    #[test]
    fn hellinger_examples() {
        let p = dist(&[0.2, 0.5, 0.3]);
        let r = hellinger_td_bound(&p, &p).unwrap();
        assert_eq!((r.lhs, r.rhs, r.prior_rhs), (0.0, 0.0, 0.0));

        let (a, b) = DiscreteDist::binary_pair(0.6).unwrap();
        let r = hellinger_td_bound(&a, &b).unwrap();
        assert!((r.rhs - 0.2).abs() < 1e-14);
        assert!((r.lhs - 0.2).abs() < 1e-14);
        assert!(r.slack.abs() < 1e-14);

        let r = hellinger_td_bound(&dist(&[0.9, 0.1]), &dist(&[0.5, 0.5])).unwrap();
        assert!(r.slack > 0.0 && r.improvement > 0.0, "{r:?}");
        assert!(r.form_gap < 1e-12);
    }

    #[test]
    fn rhs_forms_agree() {
        for i in 0..1000 {
            let d = i as f64 / 1000.0;
            assert!(((1.0 - sqrt(1.0 - d)) - hellinger_td_rhs(d)).abs() < 1e-14, "{d}");
        }
    }

    #[test]
    fn bhattacharyya_examples() {
        let p = dist(&[0.3, 0.7]);
        let r = bhattacharyya_relation(&p, &p).unwrap();
        assert!((r.rhs - 1.0).abs() < 1e-15 && r.slack.abs() < 1e-15);

        let r = bhattacharyya_relation(&dist(&[1.0, 0.0]), &dist(&[0.0, 1.0])).unwrap();
        assert_eq!(r.rhs, 1.0);
        assert_eq!(r.improvement, 0.0);

        let (a, b) = DiscreteDist::binary_pair(0.6).unwrap();
        assert!((bhattacharyya_coefficient(&a, &b).unwrap() - 0.8).abs() < 1e-15);
        let r = bhattacharyya_relation(&a, &b).unwrap();
        assert!((r.rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn binary_pairs_saturate_bhattacharyya() {
        for i in 0..=100 {
            let (a, b) = DiscreteDist::binary_pair(i as f64 / 100.0).unwrap();
            let r = bhattacharyya_relation(&a, &b).unwrap();
            assert!(r.slack.abs() <= 1e-12, "{i}: {}", r.slack);
        }
    }

    #[test]
    fn js_examples() {
        let p = dist(&[0.25, 0.75]);
        let r = js_td_bound(&p, &p).unwrap();
        assert_eq!((r.lhs, r.rhs, r.prior_rhs), (0.0, 0.0, 0.0));

        let (a, b) = DiscreteDist::binary_pair(0.5).unwrap();
        let r = js_td_bound(&a, &b).unwrap();
        let want = 0.75 * ln(1.5) + 0.25 * ln(0.5);
        assert!((r.rhs - want).abs() < 1e-14);
        assert!((r.lhs - want).abs() < 1e-14);
        assert!(r.form_gap < 1e-12);

        let r = js_td_bound(&dist(&[0.7, 0.3]), &dist(&[0.3, 0.7])).unwrap();
        assert!(r.slack >= 0.0 && r.improvement >= 0.0, "{r:?}");
    }

    #[test]
    fn binary_pairs_attain_both_bounds() {
        for i in 0..=99 {
            let (a, b) = DiscreteDist::binary_pair(i as f64 / 100.0).unwrap();
            let h = hellinger_td_bound(&a, &b).unwrap();
            let j = js_td_bound(&a, &b).unwrap();
            assert!(h.slack.abs() < 1e-10 && j.slack.abs() < 1e-10, "{i}");
        }
    }

    #[test]
    fn js_minorant() {
        assert!(js_linear_minorant_check(1000));
        let js = make_binary(FGenerator::JensenShannon);
        assert!((js.g(1.0) - LN_2).abs() < 1e-15);
        // g_JS(u) = u²/2 + O(u⁴): ratio to t/2 → 1
        let t: f64 = 1e-8;
        let ratio = js.g(sqrt(t)) / (0.5 * t);
        assert!((ratio - 1.0).abs() < 1e-6, "{ratio}");
    }

    #[test]
    fn total_variation_and_entropy() {
        let (a, b) = DiscreteDist::binary_pair(0.3).unwrap();
        assert!((total_variation(&a, &b).unwrap() - 0.3).abs() < 1e-15);
        assert!((binary_entropy(0.0) - LN_2).abs() < 1e-15);
        assert_eq!(binary_entropy(1.0), 0.0);
        let p = DiscreteDist::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let q = DiscreteDist::new(vec![0.0, 2.0], vec![0.5, 0.5]).unwrap();
        assert!(total_variation(&p, &q).is_err());
    }
}
