//! Lower bounds on `½(D_f(P||Q) + D_f(Q||P))` through the binary divergence.
//!
//! - fixed triangular discrimination `Δ(P,Q) = d`: the minimum is `g(√d)`;
//! - fixed total variation `tv`: the minimum is `g(tv)`;
//! - fixed means and variances: the infimum is at least `g(s)`, with
//!   equality and the value `g(r)` when `σ_P = σ_Q`.

use alloc::vec;

use crate::binary::{require_condition, BinaryFunction};
use crate::error::{Error, Result};
use crate::fgen::{check_unit, DiscreteDist};
use crate::math::sqrt;

/// Means and standard deviations of `P` and `Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSpec {
    m_p: f64,
    sigma_p: f64,
    m_q: f64,
    sigma_q: f64,
    a: f64,
}

impl MomentSpec {
    pub fn new(m_p: f64, sigma_p: f64, m_q: f64, sigma_q: f64) -> Result<Self> {
        for (what, value) in [("m_P", m_p), ("m_Q", m_q)] {
            if !value.is_finite() {
                return Err(Error::Domain { what, value });
            }
        }
        for (what, value) in [("sigma_P", sigma_p), ("sigma_Q", sigma_q)] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::Domain { what, value });
            }
        }
        Ok(MomentSpec {
            m_p,
            sigma_p,
            m_q,
            sigma_q,
            a: m_p - m_q,
        })
    }

    /// Equal standard deviations `σ` for both distributions.
    pub fn equal_variance(m_p: f64, m_q: f64, sigma: f64) -> Result<Self> {
        MomentSpec::new(m_p, sigma, m_q, sigma)
    }

    pub fn m_p(&self) -> f64 {
        self.m_p
    }
    pub fn sigma_p(&self) -> f64 {
        self.sigma_p
    }
    pub fn m_q(&self) -> f64 {
        self.m_q
    }
    pub fn sigma_q(&self) -> f64 {
        self.sigma_q
    }

    /// `a = m_P - m_Q`.
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn has_equal_variances(&self) -> bool {
        self.sigma_p == self.sigma_q
    }

    /// Both means moved by `c`. The difference `a` is carried over as is
    /// rather than recomputed from the rounded means.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        let moved = MomentSpec::new(self.m_p + c, self.sigma_p, self.m_q + c, self.sigma_q)?;
        Ok(MomentSpec { a: self.a, ..moved })
    }
}

/// Which result a bound rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundBasis {
    /// Fixed triangular discrimination (requires the condition certificate).
    TriangularDiscrimination,
    /// Fixed total variation, without a certificate.
    TotalVariationRemark,
    /// Fixed means and variances (requires the condition certificate).
    Moments,
}

impl BoundBasis {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundBasis::TriangularDiscrimination => "triangular-discrimination",
            BoundBasis::TotalVariationRemark => "total-variation-remark",
            BoundBasis::Moments => "moments",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    /// `g(argument)`, possibly `+∞`.
    pub bound_value: f64,
    /// The point `t ∈ [0, 1]` at which `g` is evaluated.
    pub argument: f64,
    pub attained_pair: Option<(DiscreteDist, DiscreteDist)>,
    /// True only where attainment is proven.
    pub tight: bool,
    pub basis: BoundBasis,
}

/// Minimum of the symmetrized divergence under `Δ(P,Q) = d`.
pub fn theorem1_bound<B: BinaryFunction + ?Sized>(bd: &B, d: f64) -> Result<BoundResult> {
    check_unit("d", d)?;
    require_condition(bd)?;
    let t = sqrt(d);
    Ok(BoundResult {
        bound_value: bd.g(t),
        argument: t,
        attained_pair: Some(DiscreteDist::binary_pair(t)?),
        tight: true,
        basis: BoundBasis::TriangularDiscrimination,
    })
}

/// Minimum of the symmetrized divergence under total variation `tv`
/// (`½ Σ |p - q|`). Needs only strict convexity of `f`.
pub fn tv_bound<B: BinaryFunction + ?Sized>(bd: &B, tv: f64) -> Result<BoundResult> {
    check_unit("tv", tv)?;
    Ok(BoundResult {
        bound_value: bd.g(tv),
        argument: tv,
        attained_pair: Some(DiscreteDist::binary_pair(tv)?),
        tight: true,
        basis: BoundBasis::TotalVariationRemark,
    })
}

/// `s = |a| / √(2(σ_P² + σ_Q²) + a²)`, zero when `a = 0`.
pub fn theorem2_s(spec: &MomentSpec) -> f64 {
    let a = spec.a;
    if a == 0.0 {
        return 0.0;
    }
    let var_sum = spec.sigma_p * spec.sigma_p + spec.sigma_q * spec.sigma_q;
    let s = a.abs() / sqrt(2.0 * var_sum + a * a);
    s.min(1.0)
}

/// Lower bound `g(s)` under fixed moments; tight with the two-point pair
/// from [`lemma3_pair`] when the variances agree.
pub fn theorem2_bound<B: BinaryFunction + ?Sized>(bd: &B, spec: &MomentSpec) -> Result<BoundResult> {
    require_condition(bd)?;
    let s = theorem2_s(spec);
    let tight = spec.has_equal_variances();
    Ok(BoundResult {
        bound_value: bd.g(s),
        argument: s,
        attained_pair: if tight { Some(lemma3_pair(spec)?) } else { None },
        tight,
        basis: BoundBasis::Moments,
    })
}

/// The moment-matched pair `(R_r, R_r†)` for equal variances.
///
/// Support `{c - x·sgn(a), c + x·sgn(a)}` with `c = (m_P + m_Q)/2`,
/// `x = √(4σ² + a²)/2` and `sgn(0) := 1`; masses `((1-r)/2, (1+r)/2)` for
/// `P` and the swap for `Q`. Points are returned in increasing order, and a
/// zero-width support (`σ = 0`, `a = 0`) collapses to one point.
pub fn lemma3_pair(spec: &MomentSpec) -> Result<(DiscreteDist, DiscreteDist)> {
    if !spec.has_equal_variances() {
        return Err(Error::Precondition("lemma3_pair needs sigma_P = sigma_Q"));
    }
    let sigma = spec.sigma_p;
    let a = spec.a;
    let c = 0.5 * (spec.m_p + spec.m_q);
    let x = 0.5 * sqrt(4.0 * sigma * sigma + a * a);
    if x == 0.0 {
        let p = DiscreteDist::point_mass(c)?;
        return Ok((p.clone(), p));
    }
    let r = theorem2_s(spec);
    let lo = 0.5 * (1.0 - r);
    let hi = 0.5 * (1.0 + r);
    // sgn(a) = -1 flips which point carries the larger P mass
    let (p_mass, q_mass) = if a >= 0.0 {
        (vec![lo, hi], vec![hi, lo])
    } else {
        (vec![hi, lo], vec![lo, hi])
    };
    let support = vec![c - x, c + x];
    Ok((
        DiscreteDist::new(support.clone(), p_mass)?,
        DiscreteDist::new(support, q_mass)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::{make_binary, SyntheticBinary};
    use crate::fgen::{catalog, f_divergence, moments, symmetrized_divergence, FGenerator};
    use crate::math::ln;

    #[test]
    fn td_bound_examples() {
        let td = make_binary(FGenerator::Triangular);
        assert!((theorem1_bound(&td, 0.36).unwrap().bound_value - 0.36).abs() < 1e-15);
        let h = make_binary(FGenerator::Hellinger);
        assert!((theorem1_bound(&h, 0.36).unwrap().bound_value - 0.2).abs() < 1e-15);
        let js = make_binary(FGenerator::JensenShannon);
        let want = 0.75 * ln(1.5) + 0.25 * ln(0.5);
        let got = theorem1_bound(&js, 0.25).unwrap();
        assert!((got.bound_value - want).abs() < 1e-15);
        assert!((want - 0.130_812_035_941_137).abs() < 1e-14);
        assert!(got.tight);
        assert_eq!(got.basis, BoundBasis::TriangularDiscrimination);
    }

    #[test]
    fn td_pair_attains_bound() {
        for gen in catalog() {
            let bd = make_binary(gen);
            for d in [0.01, 0.1, 0.25, 0.5, 0.81] {
                let res = theorem1_bound(&bd, d).unwrap();
                let (p, q) = res.attained_pair.unwrap();
                let delta = f_divergence(&FGenerator::Triangular, &p, &q).unwrap();
                assert!((delta - d).abs() < 1e-12, "{gen} {d}");
                let sym = symmetrized_divergence(&gen, &p, &q).unwrap();
                assert!((sym - res.bound_value).abs() < 1e-10, "{gen} {d}");
            }
        }
    }

    #[test]
    fn td_bound_errors() {
        let td = make_binary(FGenerator::Triangular);
        assert!(matches!(theorem1_bound(&td, 1.5), Err(Error::Domain { .. })));
        assert!(matches!(theorem1_bound(&td, -0.1), Err(Error::Domain { .. })));
        let bad = SyntheticBinary::new(sqrt, |t| 0.5 / sqrt(t), 1.0)
            .with_g2(|t| -0.25 / (t * sqrt(t)));
        match theorem1_bound(&bad, 0.3) {
            Err(Error::ConditionNotSatisfied(cert)) => assert!(!cert.satisfied),
            other => panic!("{other:?}"),
        }
        let spec = MomentSpec::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            theorem2_bound(&bad, &spec),
            Err(Error::ConditionNotSatisfied(_))
        ));
    }

    #[test]
    fn td_bound_monotone_in_d() {
        for gen in catalog() {
            let bd = make_binary(gen);
            let mut prev = -1.0;
            for i in 0..=100 {
                let v = theorem1_bound(&bd, i as f64 / 100.0).unwrap().bound_value;
                assert!(v >= prev, "{gen}");
                prev = v;
            }
        }
    }

    #[test]
    fn tv_examples() {
        let kl = make_binary(FGenerator::KullbackLeibler);
        let r = tv_bound(&kl, 0.5).unwrap();
        assert!((r.bound_value - 0.5 * ln(3.0)).abs() < 1e-15);
        assert_eq!(r.basis, BoundBasis::TotalVariationRemark);
        let td = make_binary(FGenerator::Triangular);
        let r = tv_bound(&td, 0.5).unwrap();
        assert!((r.bound_value - 0.25).abs() < 1e-15);
        let (p, q) = r.attained_pair.unwrap();
        let tv: f64 = p.mass().iter().zip(q.mass()).map(|(a, b)| 0.5 * (a - b).abs()).sum();
        assert!((tv - 0.5).abs() < 1e-15);
        for gen in catalog() {
            assert_eq!(tv_bound(&make_binary(gen), 0.0).unwrap().bound_value, 0.0);
        }
        assert!(tv_bound(&td, 1.01).is_err());
    }

    #[test]
    fn s_examples() {
        let spec = MomentSpec::new(2.0, 0.3, 2.0, 4.0).unwrap();
        assert_eq!(theorem2_s(&spec), 0.0);
        let spec = MomentSpec::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert!((theorem2_s(&spec) - 1.0 / sqrt(5.0)).abs() < 1e-15);
        let spec = MomentSpec::new(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(theorem2_s(&spec), 1.0);
        let spec = MomentSpec::new(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(theorem2_s(&spec), 0.0);
        for (a, sigma) in [(0.3, 0.7), (-2.0, 1.5), (5.0, 0.1)] {
            let spec = MomentSpec::equal_variance(a, 0.0, sigma).unwrap();
            let r = a.abs() / sqrt(4.0 * sigma * sigma + a * a);
            assert!((theorem2_s(&spec) - r).abs() < 1e-15);
        }
        assert!(MomentSpec::new(0.0, -1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn moment_bound_examples() {
        let spec = MomentSpec::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let kl = make_binary(FGenerator::KullbackLeibler);
        let res = theorem2_bound(&kl, &spec).unwrap();
        // t ln((1+t)/(1-t)) at t = 1/√5
        assert!((res.bound_value - 0.430_408_940_964_003_95).abs() < 1e-13);
        assert!(res.tight);
        let (p, q) = res.attained_pair.unwrap();
        let sym = symmetrized_divergence(&FGenerator::KullbackLeibler, &p, &q).unwrap();
        assert!((sym - res.bound_value).abs() < 1e-10);

        let td = make_binary(FGenerator::Triangular);
        let unequal = MomentSpec::new(1.0, 1.0, 0.0, 2.0).unwrap();
        let res = theorem2_bound(&td, &unequal).unwrap();
        let s = theorem2_s(&unequal);
        assert!((res.bound_value - s * s).abs() < 1e-15);
        assert!(!res.tight && res.attained_pair.is_none());

        let zero = MomentSpec::equal_variance(3.0, 3.0, 1.0).unwrap();
        let res = theorem2_bound(&kl, &zero).unwrap();
        assert_eq!(res.bound_value, 0.0);
        assert!(res.tight);
        let (p, q) = res.attained_pair.unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn two_point_pair_examples() {
        let spec = MomentSpec::equal_variance(1.0, 0.0, 1.0).unwrap();
        let (p, q) = lemma3_pair(&spec).unwrap();
        assert!((p.support()[0] + 0.618_033_988_749_895).abs() < 1e-12);
        assert!((p.support()[1] - 1.618_033_988_749_895).abs() < 1e-12);
        assert!((p.mass()[0] - 0.276_393_202_250_021).abs() < 1e-12);
        assert!((p.mass()[1] - 0.723_606_797_749_979).abs() < 1e-12);
        assert_eq!(q.mass(), &[p.mass()[1], p.mass()[0]]);
        let (m, v) = moments(&p);
        assert!((m - 1.0).abs() < 1e-12 && (v - 1.0).abs() < 1e-12);
        let (m, v) = moments(&q);
        assert!(m.abs() < 1e-12 && (v - 1.0).abs() < 1e-12);

        let spec = MomentSpec::equal_variance(0.0, 0.0, 1.0).unwrap();
        let (p, q) = lemma3_pair(&spec).unwrap();
        assert_eq!(p.support(), &[-1.0, 1.0]);
        assert_eq!(p.mass(), &[0.5, 0.5]);
        assert_eq!(p, q);

        let spec = MomentSpec::equal_variance(0.5, -0.5, 0.0).unwrap();
        let (p, q) = lemma3_pair(&spec).unwrap();
        assert_eq!(p.support(), &[-0.5, 0.5]);
        assert_eq!(p.mass(), &[0.0, 1.0]);
        assert_eq!(q.mass(), &[1.0, 0.0]);
        assert_eq!(moments(&p), (0.5, 0.0));
        assert_eq!(moments(&q), (-0.5, 0.0));

        let spec = MomentSpec::new(0.0, 1.0, 0.0, 2.0).unwrap();
        assert!(matches!(lemma3_pair(&spec), Err(Error::Precondition(_))));
    }

    #[test]
    fn two_point_pair_negative_a() {
        let spec = MomentSpec::equal_variance(-1.0, 2.0, 0.5).unwrap();
        let (p, q) = lemma3_pair(&spec).unwrap();
        let (mp, vp) = moments(&p);
        let (mq, vq) = moments(&q);
        assert!((mp + 1.0).abs() < 1e-12 && (vp - 0.25).abs() < 1e-12);
        assert!((mq - 2.0).abs() < 1e-12 && (vq - 0.25).abs() < 1e-12);
    }

    #[test]
    fn degenerate_sigma_zero_kl_is_infinite() {
        let spec = MomentSpec::equal_variance(0.5, -0.5, 0.0).unwrap();
        let res = theorem2_bound(&make_binary(FGenerator::KullbackLeibler), &spec).unwrap();
        assert_eq!(res.argument, 1.0);
        assert_eq!(res.bound_value, f64::INFINITY);
    }
}
