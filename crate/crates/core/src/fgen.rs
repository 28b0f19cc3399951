//! Generators `f`, finite discrete distributions and f-divergences.
//!
//! `D_f(P||Q) = Σ_i q_i f(p_i / q_i)` with the zero-mass conventions
//!
//! ```text
//! 0 · f(0/0) = 0
//! 0 · f(a/0) = a · lim_{u→∞} f(u)/u
//! q · f(0/q) = q · lim_{t→0+} f(t)
//! ```
//!
//! Divergence values are extended reals: `f64::INFINITY` is a legitimate
//! result (e.g. KL between distributions with different supports).

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math::{ln, sqrt, xlogx};

/// Tolerance on `Σ mass = 1`.
pub const MASS_TOL: f64 = 1e-12;

/// A convex generator `f: (0, ∞) → ℝ` with `f(1) = 0`.
pub trait Generator {
    fn name(&self) -> &str;

    fn f(&self, t: f64) -> f64;

    /// First derivative.
    fn f1(&self, t: f64) -> f64;

    /// Second derivative, when known in closed form.
    fn f2(&self, t: f64) -> Option<f64>;

    /// `lim_{t→0+} f(t)`, possibly `+∞`.
    fn f_at_0(&self) -> f64;

    /// `lim_{u→∞} f(u)/u`, possibly `+∞`.
    fn slope_at_inf(&self) -> f64;

    /// Whether values of this divergence scale with the logarithm base.
    fn uses_log(&self) -> bool {
        true
    }
}

impl<G: Generator + ?Sized> Generator for &G {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn f(&self, t: f64) -> f64 {
        (**self).f(t)
    }
    fn f1(&self, t: f64) -> f64 {
        (**self).f1(t)
    }
    fn f2(&self, t: f64) -> Option<f64> {
        (**self).f2(t)
    }
    fn f_at_0(&self) -> f64 {
        (**self).f_at_0()
    }
    fn slope_at_inf(&self) -> f64 {
        (**self).slope_at_inf()
    }
    fn uses_log(&self) -> bool {
        (**self).uses_log()
    }
}

/// The built-in generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FGenerator {
    /// Triangular discrimination, `f(t) = (1-t)² / (2(1+t))`.
    Triangular,
    /// Kullback-Leibler, `f(t) = t ln t`.
    KullbackLeibler,
    /// Squared Hellinger, `f(t) = ½(√t - 1)²`.
    Hellinger,
    /// Jensen-Shannon, `f(t) = ½ t ln t - ((1+t)/2) ln((1+t)/2)`.
    JensenShannon,
}

impl FGenerator {
    pub const ALL: [FGenerator; 4] = [
        FGenerator::Triangular,
        FGenerator::KullbackLeibler,
        FGenerator::Hellinger,
        FGenerator::JensenShannon,
    ];

    /// Looks a generator up by its short name (`td`, `kl`, `hellinger`, `js`)
    /// or a few common aliases.
    pub fn from_name(name: &str) -> Option<Self> {
        let lower = name.trim();
        let pick = |alts: &[&str]| alts.iter().any(|a| a.eq_ignore_ascii_case(lower));
        if pick(&["td", "triangular", "le-cam", "lecam", "vincze"]) {
            Some(FGenerator::Triangular)
        } else if pick(&["kl", "kullback-leibler", "relative-entropy"]) {
            Some(FGenerator::KullbackLeibler)
        } else if pick(&["hellinger", "h2", "hellinger2", "hellinger-squared"]) {
            Some(FGenerator::Hellinger)
        } else if pick(&["js", "jensen-shannon", "jensenshannon"]) {
            Some(FGenerator::JensenShannon)
        } else {
            None
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            FGenerator::Triangular => "td",
            FGenerator::KullbackLeibler => "kl",
            FGenerator::Hellinger => "hellinger",
            FGenerator::JensenShannon => "js",
        }
    }
}

impl fmt::Display for FGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl Generator for FGenerator {
    fn name(&self) -> &str {
        self.short_name()
    }

    fn f(&self, t: f64) -> f64 {
        match self {
            FGenerator::Triangular => {
                let d = 1.0 - t;
                d * d / (2.0 * (1.0 + t))
            }
            FGenerator::KullbackLeibler => xlogx(t),
            FGenerator::Hellinger => {
                let d = sqrt(t) - 1.0;
                0.5 * d * d
            }
            FGenerator::JensenShannon => {
                let m = 0.5 * (1.0 + t);
                0.5 * xlogx(t) - xlogx(m)
            }
        }
    }

    fn f1(&self, t: f64) -> f64 {
        match self {
            FGenerator::Triangular => {
                let s = 1.0 + t;
                0.5 - 2.0 / (s * s)
            }
            FGenerator::KullbackLeibler => ln(t) + 1.0,
            FGenerator::Hellinger => 0.5 * (1.0 - 1.0 / sqrt(t)),
            FGenerator::JensenShannon => 0.5 * ln(2.0 * t / (1.0 + t)),
        }
    }

    fn f2(&self, t: f64) -> Option<f64> {
        Some(match self {
            FGenerator::Triangular => {
                let s = 1.0 + t;
                4.0 / (s * s * s)
            }
            FGenerator::KullbackLeibler => 1.0 / t,
            FGenerator::Hellinger => 0.25 / (t * sqrt(t)),
            FGenerator::JensenShannon => 0.5 / (t * (1.0 + t)),
        })
    }

    fn f_at_0(&self) -> f64 {
        match self {
            FGenerator::Triangular | FGenerator::Hellinger => 0.5,
            FGenerator::KullbackLeibler => 0.0,
            FGenerator::JensenShannon => 0.5 * core::f64::consts::LN_2,
        }
    }

    fn slope_at_inf(&self) -> f64 {
        match self {
            FGenerator::Triangular | FGenerator::Hellinger => 0.5,
            FGenerator::KullbackLeibler => f64::INFINITY,
            FGenerator::JensenShannon => 0.5 * core::f64::consts::LN_2,
        }
    }

    fn uses_log(&self) -> bool {
        matches!(self, FGenerator::KullbackLeibler | FGenerator::JensenShannon)
    }
}

/// The four built-in generators.
pub fn catalog() -> Vec<FGenerator> {
    FGenerator::ALL.to_vec()
}

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied generator. The second derivative is optional; consumers
/// fall back to finite differences without it.
pub struct CustomGenerator {
    f: RealFn,
    f1: RealFn,
    f2: Option<RealFn>,
    f_at_0: f64,
    slope_at_inf: f64,
}

impl CustomGenerator {
    pub fn new<F, F1>(f: F, f1: F1, f_at_0: f64, slope_at_inf: f64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        F1: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        CustomGenerator {
            f: Box::new(f),
            f1: Box::new(f1),
            f2: None,
            f_at_0,
            slope_at_inf,
        }
    }

    pub fn with_f2<F2>(mut self, f2: F2) -> Self
    where
        F2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.f2 = Some(Box::new(f2));
        self
    }
}

impl fmt::Debug for CustomGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomGenerator")
            .field("f_at_0", &self.f_at_0)
            .field("slope_at_inf", &self.slope_at_inf)
            .field("has_f2", &self.f2.is_some())
            .finish()
    }
}

impl Generator for CustomGenerator {
    fn name(&self) -> &str {
        "custom"
    }
    fn f(&self, t: f64) -> f64 {
        (self.f)(t)
    }
    fn f1(&self, t: f64) -> f64 {
        (self.f1)(t)
    }
    fn f2(&self, t: f64) -> Option<f64> {
        self.f2.as_ref().map(|f2| f2(t))
    }
    fn f_at_0(&self) -> f64 {
        self.f_at_0
    }
    fn slope_at_inf(&self) -> f64 {
        self.slope_at_inf
    }
}

/// A finite distribution over strictly increasing real support points.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    support: Vec<f64>,
    mass: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(support: Vec<f64>, mass: Vec<f64>) -> Result<Self> {
        if support.len() != mass.len() {
            return Err(Error::InvalidDistribution(
                "support and mass lengths differ",
            ));
        }
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support"));
        }
        if support.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDistribution("non-finite support point"));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDistribution(
                "support must be strictly increasing",
            ));
        }
        validate_masses(&mass)?;
        Ok(DiscreteDist { support, mass })
    }

    /// Masses on the canonical support `{0, 1, …, n-1}`.
    pub fn from_masses(mass: Vec<f64>) -> Result<Self> {
        let support = (0..mass.len()).map(|i| i as f64).collect();
        DiscreteDist::new(support, mass)
    }

    pub fn point_mass(x: f64) -> Result<Self> {
        DiscreteDist::new(alloc::vec![x], alloc::vec![1.0])
    }

    /// `R_t = ((1-t)/2, (1+t)/2)` on `{0, 1}`.
    pub fn binary(t: f64) -> Result<Self> {
        check_unit("t", t)?;
        DiscreteDist::from_masses(alloc::vec![0.5 * (1.0 - t), 0.5 * (1.0 + t)])
    }

    /// `(R_t, R_t†)` on `{0, 1}`.
    pub fn binary_pair(t: f64) -> Result<(Self, Self)> {
        let r = DiscreteDist::binary(t)?;
        let dagger = r.swapped();
        Ok((r, dagger))
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    /// Same support, masses in reverse order. For two-point distributions
    /// this maps `R_t` to `R_t†`.
    pub fn swapped(&self) -> Self {
        let mut mass = self.mass.clone();
        mass.reverse();
        DiscreteDist {
            support: self.support.clone(),
            mass,
        }
    }

    /// Adds `shift` to every support point.
    pub fn translated(&self, shift: f64) -> Result<Self> {
        DiscreteDist::new(
            self.support.iter().map(|x| x + shift).collect(),
            self.mass.clone(),
        )
    }
}

pub(crate) fn validate_masses(mass: &[f64]) -> Result<()> {
    if mass.iter().any(|m| !m.is_finite()) {
        return Err(Error::InvalidDistribution("non-finite mass"));
    }
    if mass.iter().any(|&m| m < 0.0) {
        return Err(Error::InvalidDistribution("negative mass"));
    }
    let total: f64 = mass.iter().sum();
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidDistribution("masses do not sum to 1"));
    }
    Ok(())
}

pub(crate) fn check_unit(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}

/// Merges two supports into their sorted union, padding with zero mass.
pub fn align(p: &DiscreteDist, q: &DiscreteDist) -> (DiscreteDist, DiscreteDist) {
    let mut support: Vec<f64> = p.support.iter().chain(q.support.iter()).copied().collect();
    support.sort_by(f64::total_cmp);
    support.dedup();
    let spread = |d: &DiscreteDist| {
        let mut mass = alloc::vec![0.0; support.len()];
        let mut j = 0;
        for (x, m) in d.support.iter().zip(&d.mass) {
            while support[j] != *x {
                j += 1;
            }
            mass[j] = *m;
        }
        mass
    };
    let pm = spread(p);
    let qm = spread(q);
    (
        DiscreteDist {
            support: support.clone(),
            mass: pm,
        },
        DiscreteDist { support, mass: qm },
    )
}

/// One term `q · f(p/q)` under the zero-mass conventions.
#[inline]
fn term<G: Generator + ?Sized>(gen: &G, p: f64, q: f64) -> f64 {
    if q > 0.0 {
        if p > 0.0 {
            q * gen.f(p / q)
        } else {
            let f0 = gen.f_at_0();
            if f0.is_infinite() {
                f0
            } else {
                q * f0
            }
        }
    } else if p > 0.0 {
        let slope = gen.slope_at_inf();
        if slope.is_infinite() {
            slope
        } else {
            p * slope
        }
    } else {
        0.0
    }
}

/// `D_f` between two aligned mass vectors.
///
/// The vectors must have equal length and non-negative entries; normalization
/// is not re-checked here, so path measures and other derived vectors can be
/// passed directly.
pub fn f_divergence_masses<G: Generator + ?Sized>(gen: &G, p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Alignment("mass vectors have different lengths"));
    }
    if p.iter().chain(q).any(|&m| !(m >= 0.0) || !m.is_finite()) {
        return Err(Error::InvalidDistribution("negative or non-finite mass"));
    }
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        let t = term(gen, pi, qi);
        if t == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        total += t;
    }
    Ok(total)
}

/// `D_f(P||Q)` for distributions on the same support list.
pub fn f_divergence<G: Generator + ?Sized>(
    gen: &G,
    p: &DiscreteDist,
    q: &DiscreteDist,
) -> Result<f64> {
    if p.support != q.support {
        return Err(Error::Alignment("support lists differ; call align first"));
    }
    f_divergence_masses(gen, &p.mass, &q.mass)
}

/// `½(D_f(P||Q) + D_f(Q||P))`.
pub fn symmetrized_divergence<G: Generator + ?Sized>(
    gen: &G,
    p: &DiscreteDist,
    q: &DiscreteDist,
) -> Result<f64> {
    Ok(symmetrize(f_divergence(gen, p, q)?, f_divergence(gen, q, p)?))
}

pub(crate) fn symmetrized_masses<G: Generator + ?Sized>(gen: &G, p: &[f64], q: &[f64]) -> Result<f64> {
    Ok(symmetrize(
        f_divergence_masses(gen, p, q)?,
        f_divergence_masses(gen, q, p)?,
    ))
}

// Addition commutes exactly in IEEE arithmetic, so the result is symmetric
// in its arguments bit for bit.
#[inline]
fn symmetrize(forward: f64, backward: f64) -> f64 {
    0.5 * (forward + backward)
}

/// Mean and variance of the support under the mass.
pub fn moments(p: &DiscreteDist) -> (f64, f64) {
    let mean: f64 = p.support.iter().zip(&p.mass).map(|(x, m)| x * m).sum();
    let variance = p
        .support
        .iter()
        .zip(&p.mass)
        .map(|(x, m)| {
            let d = x - mean;
            m * d * d
        })
        .sum();
    (mean, variance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::LN_2;

    fn dist(m: &[f64]) -> DiscreteDist {
        DiscreteDist::from_masses(m.to_vec()).unwrap()
    }

    #[test]
    fn kl_identity_is_zero() {
        let p = dist(&[0.3, 0.7]);
        assert_eq!(f_divergence(&FGenerator::KullbackLeibler, &p, &p).unwrap(), 0.0);
    }

    #[test]
    fn td_on_binary_pair_is_t_squared() {
        let (r, rd) = DiscreteDist::binary_pair(0.5).unwrap();
        let v = f_divergence(&FGenerator::Triangular, &r, &rd).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn kl_with_zero_mass_in_p() {
        // 1·ln(1/0.5) + 0.5·f(0) with f(0) = 0
        let p = dist(&[1.0, 0.0]);
        let q = dist(&[0.5, 0.5]);
        let v = f_divergence(&FGenerator::KullbackLeibler, &p, &q).unwrap();
        assert!((v - LN_2).abs() < 1e-15);
    }

    #[test]
    fn kl_is_infinite_when_q_misses_mass() {
        let p = dist(&[0.5, 0.5]);
        let q = dist(&[1.0, 0.0]);
        assert_eq!(
            f_divergence(&FGenerator::KullbackLeibler, &p, &q).unwrap(),
            f64::INFINITY
        );
        // TD stays finite through slope_at_inf.
        let td = f_divergence(&FGenerator::Triangular, &p, &q).unwrap();
        let expected = 0.5 * (0.25 / 1.5 + 0.25 / 0.5);
        assert!((td - expected).abs() < 1e-15);
    }

    #[test]
    fn zero_over_zero_contributes_nothing() {
        let p = dist(&[0.4, 0.6, 0.0]);
        let q = dist(&[0.5, 0.5, 0.0]);
        let a = f_divergence(&FGenerator::KullbackLeibler, &p, &q).unwrap();
        let b = f_divergence(&FGenerator::KullbackLeibler, &dist(&[0.4, 0.6]), &dist(&[0.5, 0.5]))
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn symmetrized_examples() {
        let kl = FGenerator::KullbackLeibler;
        let v = symmetrized_divergence(&kl, &dist(&[0.8, 0.2]), &dist(&[0.2, 0.8])).unwrap();
        assert!((v - 0.6 * ln(4.0)).abs() < 1e-14, "{v}");

        let td = FGenerator::Triangular;
        let v = symmetrized_divergence(&td, &dist(&[0.9, 0.1]), &dist(&[0.5, 0.5])).unwrap();
        assert!((v - 0.5 * (0.16 / 1.4 + 0.16 / 0.6)).abs() < 1e-15, "{v}");

        let h = FGenerator::Hellinger;
        let p = dist(&[0.1, 0.6, 0.3]);
        let q = dist(&[0.5, 0.2, 0.3]);
        let direct: f64 = p
            .mass()
            .iter()
            .zip(q.mass())
            .map(|(a, b)| 0.5 * (sqrt(*a) - sqrt(*b)) * (sqrt(*a) - sqrt(*b)))
            .sum();
        let sym = symmetrized_divergence(&h, &p, &q).unwrap();
        assert!((sym - direct).abs() < 1e-15);
    }

    #[test]
    fn catalog_values() {
        let cat = catalog();
        assert_eq!(cat.len(), 4);
        assert!((FGenerator::Triangular.f(3.0) - 0.5).abs() < 1e-15);
        assert_eq!(FGenerator::KullbackLeibler.slope_at_inf(), f64::INFINITY);
        assert_eq!(FGenerator::Hellinger.f_at_0(), 0.5);
        for g in &cat {
            assert!(g.f(1.0).abs() < 1e-12, "{g}");
        }
    }

    #[test]
    fn catalog_limits_match_generators() {
        for g in catalog() {
            let near0 = g.f(1e-12);
            assert!((near0 - g.f_at_0()).abs() < 1e-5, "{g}: {near0}");
            if g.slope_at_inf().is_finite() {
                let u = 1e12;
                assert!((g.f(u) / u - g.slope_at_inf()).abs() < 1e-4, "{g}");
            } else {
                assert!(g.f(1e12) / 1e12 > 20.0);
            }
        }
    }

    #[test]
    fn catalog_derivatives_match_finite_differences() {
        let grid: Vec<f64> = (1..100).map(|i| 0.1 * i as f64).collect();
        for g in catalog() {
            for &t in &grid {
                let h = 1e-6 * t.max(1.0);
                let d1 = (g.f(t + h) - g.f(t - h)) / (2.0 * h);
                assert!((d1 - g.f1(t)).abs() <= 1e-6 * (1.0 + g.f1(t).abs()), "{g} f1 at {t}");
                let d2 = (g.f1(t + h) - g.f1(t - h)) / (2.0 * h);
                let f2 = g.f2(t).unwrap();
                assert!((d2 - f2).abs() <= 1e-6 * (1.0 + f2.abs()), "{g} f2 at {t}");
            }
        }
    }

    #[test]
    fn catalog_is_strictly_convex_on_test_grid() {
        for g in catalog() {
            for i in 1..1000 {
                let t = 0.01 * i as f64;
                if (t - 1.0).abs() < 1e-12 {
                    continue;
                }
                assert!(g.f2(t).unwrap() > 0.0, "{g} at {t}");
            }
        }
    }

    #[test]
    fn moments_examples() {
        assert_eq!(moments(&DiscreteDist::point_mass(5.0).unwrap()), (5.0, 0.0));
        let p = DiscreteDist::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert_eq!(moments(&p), (0.0, 1.0));

        let r = 1.0 / sqrt(5.0);
        let x = sqrt(5.0) / 2.0;
        let rr = DiscreteDist::new(vec![0.5 - x, 0.5 + x], vec![0.5 * (1.0 - r), 0.5 * (1.0 + r)])
            .unwrap();
        let (m, v) = moments(&rr);
        assert!((m - 1.0).abs() < 1e-14 && (v - 1.0).abs() < 1e-14, "{m} {v}");
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            DiscreteDist::from_masses(vec![1.2, -0.2]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            DiscreteDist::from_masses(vec![0.5, 0.4]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(DiscreteDist::new(vec![1.0, 0.0], vec![0.5, 0.5]).is_err());
        assert!(matches!(
            f_divergence_masses(&FGenerator::Triangular, &[0.5, 0.5], &[-0.5, 1.5]),
            Err(Error::InvalidDistribution(_))
        ));
        let p = dist(&[0.5, 0.5]);
        let q = DiscreteDist::new(vec![0.0, 2.0], vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            f_divergence(&FGenerator::Triangular, &p, &q),
            Err(Error::Alignment(_))
        ));
    }

    #[test]
    fn align_pads_with_zero_mass() {
        let p = DiscreteDist::new(vec![0.0, 2.0], vec![0.25, 0.75]).unwrap();
        let q = DiscreteDist::new(vec![1.0, 2.0, 3.0], vec![0.5, 0.25, 0.25]).unwrap();
        let (pa, qa) = align(&p, &q);
        assert_eq!(pa.support(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(pa.mass(), &[0.25, 0.0, 0.75, 0.0]);
        assert_eq!(qa.mass(), &[0.0, 0.5, 0.25, 0.25]);
        assert_eq!(
            f_divergence(&FGenerator::KullbackLeibler, &pa, &qa).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn generator_names_round_trip() {
        for g in catalog() {
            assert_eq!(FGenerator::from_name(g.short_name()), Some(g));
        }
        assert_eq!(FGenerator::from_name("Jensen-Shannon"), Some(FGenerator::JensenShannon));
        assert_eq!(FGenerator::from_name("chi2"), None);
    }
}
