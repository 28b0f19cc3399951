//! The acceptance suite: nine numbered checks, each reported as one
//! pass/fail line.

use std::f64::consts::LN_2;
use std::fmt;
use std::time::Instant;

use anyhow::Result;
use divbound_core::binary::DEFAULT_GRID;
use divbound_core::inequalities::{
    bhattacharyya_relation, hellinger_td_bound, js_td_bound, triangular_discrimination,
};
use divbound_core::oracle::{min_symmetrized_given_td, td_two_point_attainment};
use divbound_core::thermo::{thermo_report, MarkovSystem, ThermoReport};
use divbound_core::{
    catalog, check_condition, inverse_g, lemma3_pair, make_binary, moments,
    symmetrized_divergence, theorem1_bound, theorem2_bound, theorem2_s, BinaryFunction,
    DiscreteDist, FGenerator, MomentSpec, SyntheticBinary,
};

use crate::sampling;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} {}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

/// Knobs for the suite. The defaults are the stated tolerances and sample
/// counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub seed: u64,
    pub random_pairs: usize,
    pub moment_triples: usize,
    pub random_systems: usize,
    /// Simplex grid resolution of the oracle for support sizes 2 and 3.
    pub oracle_resolution: [usize; 2],
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 2024,
            random_pairs: 1000,
            moment_triples: 100,
            random_systems: 100,
            oracle_resolution: [60, 16],
        }
    }
}

type Check = fn(&Config) -> Result<(bool, String)>;

const CHECKS: [(u8, &str, Check); 9] = [
    (1, "binary closed forms", closed_forms),
    (2, "condition certificates", certificates),
    (3, "td bound tightness", td_tightness),
    (4, "td lower bound on random pairs", td_lower_bound),
    (5, "oracle equivalence", oracle_equivalence),
    (6, "moment bound tightness", moment_tightness),
    (7, "derived inequalities", derived_inequalities),
    (8, "thermodynamic identities", thermo_identities),
    (9, "inverse round trip", round_trip),
];

pub fn run_all(config: &Config) -> Vec<CriterionOutcome> {
    CHECKS
        .iter()
        .map(|&(id, name, check)| {
            let start = Instant::now();
            let (passed, detail) = match check(config) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e:#}")),
            };
            CriterionOutcome {
                id,
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn closed_form(gen: FGenerator, t: f64) -> f64 {
    match gen {
        FGenerator::Triangular => t * t,
        FGenerator::Hellinger => 1.0 - (1.0 - t * t).sqrt(),
        FGenerator::JensenShannon => {
            0.5 * ((1.0 + t) * (1.0 + t).ln() + (1.0 - t) * (1.0 - t).ln())
        }
        FGenerator::KullbackLeibler => t * ((1.0 + t) / (1.0 - t)).ln(),
    }
}

fn closed_forms(_: &Config) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for gen in catalog() {
        let bd = make_binary(gen);
        for i in 1..=99 {
            let t = i as f64 / 100.0;
            worst = worst.max((bd.g(t) - closed_form(gen, t)).abs());
        }
    }
    Ok((worst <= 1e-12, format!("max |g - closed form| = {worst:.3e}")))
}

fn certificates(_: &Config) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for gen in catalog() {
        let cert = check_condition(&make_binary(gen), DEFAULT_GRID)?;
        ok &= cert.satisfied && cert.min_margin >= -1e-9;
        parts.push(format!("{gen} {:.1e}", cert.min_margin));
    }
    let sqrt = SyntheticBinary::new(f64::sqrt, |t| 0.5 / t.sqrt(), 1.0)
        .with_g2(|t| -0.25 / (t * t.sqrt()));
    let control = check_condition(&sqrt, DEFAULT_GRID)?;
    ok &= !control.satisfied;
    parts.push(format!("sqrt control satisfied={}", control.satisfied));
    Ok((ok, format!("min margins: {}", parts.join(", "))))
}

fn td_tightness(_: &Config) -> Result<(bool, String)> {
    let (mut value_err, mut d_err): (f64, f64) = (0.0, 0.0);
    for gen in catalog() {
        let bd = make_binary(gen);
        for d in [0.01_f64, 0.1, 0.25, 0.5, 0.81] {
            let (p, q) = DiscreteDist::binary_pair(d.sqrt())?;
            let bound = theorem1_bound(&bd, d)?.bound_value;
            value_err = value_err.max((symmetrized_divergence(&gen, &p, &q)? - bound).abs());
            d_err = d_err.max((triangular_discrimination(&p, &q)? - d).abs());
        }
    }
    Ok((
        value_err <= 1e-10 && d_err <= 1e-12,
        format!("value err {value_err:.2e}, delta err {d_err:.2e}"),
    ))
}

fn td_lower_bound(c: &Config) -> Result<(bool, String)> {
    let mut rng = sampling::rng(c.seed);
    let bins: Vec<_> = catalog().into_iter().map(|g| (g, make_binary(g))).collect();
    let mut worst = f64::INFINITY;
    for _ in 0..c.random_pairs {
        let (p, q) = sampling::dist_pair(&mut rng);
        let d = triangular_discrimination(&p, &q)?;
        for (gen, bd) in &bins {
            let lhs = symmetrized_divergence(gen, &p, &q)?;
            let rhs = theorem1_bound(bd, d)?.bound_value;
            let slack = if lhs == rhs { 0.0 } else { lhs - rhs };
            worst = worst.min(slack);
        }
    }
    Ok((
        worst >= -1e-10,
        format!("{} pairs, min slack {worst:.3e}", c.random_pairs),
    ))
}

fn oracle_equivalence(c: &Config) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for gen in catalog() {
        let bd = make_binary(gen);
        for d in [0.1_f64, 0.25, 0.5] {
            let bound = bd.g(d.sqrt());
            for (size, res) in [(2, c.oracle_resolution[0]), (3, c.oracle_resolution[1])] {
                let found = min_symmetrized_given_td(&gen, d, size, res)?;
                worst = worst.max((found.value - bound).abs());
            }
        }
    }
    Ok((worst <= 5e-3, format!("max |oracle - g(sqrt d)| = {worst:.3e}")))
}

fn moment_tightness(c: &Config) -> Result<(bool, String)> {
    let mut rng = sampling::rng(c.seed ^ 0x6d6f6d);
    let bins: Vec<_> = catalog().into_iter().map(|g| (g, make_binary(g))).collect();
    let (mut moment_err, mut value_err): (f64, f64) = (0.0, 0.0);
    let mut invariant = true;
    for _ in 0..c.moment_triples {
        let spec = sampling::equal_variance_spec(&mut rng);
        let (p, q) = lemma3_pair(&spec)?;
        let (mp, vp) = moments(&p);
        let (mq, vq) = moments(&q);
        moment_err = moment_err
            .max((mp - spec.m_p()).abs())
            .max((mq - spec.m_q()).abs())
            .max((vp.sqrt() - spec.sigma_p()).abs())
            .max((vq.sqrt() - spec.sigma_q()).abs());
        for (gen, bd) in &bins {
            let got = symmetrized_divergence(gen, &p, &q)?;
            value_err = value_err.max((got - theorem2_bound(bd, &spec)?.bound_value).abs());
        }
        let s = theorem2_s(&spec);
        for shift in [-7.5, -1.0, 0.25, 3.0, 1e3] {
            invariant &= theorem2_s(&spec.shifted(shift)?) == s;
        }
    }
    Ok((
        moment_err <= 1e-10 && value_err <= 1e-10 && invariant,
        format!(
            "{} triples, moment err {moment_err:.2e}, value err {value_err:.2e}, \
             shift invariant={invariant}",
            c.moment_triples
        ),
    ))
}

fn derived_inequalities(c: &Config) -> Result<(bool, String)> {
    let mut rng = sampling::rng(c.seed ^ 0x696e6571);
    let (mut slack, mut improvement) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..c.random_pairs {
        let (p, q) = sampling::dist_pair(&mut rng);
        for r in [hellinger_td_bound(&p, &q)?, js_td_bound(&p, &q)?] {
            slack = slack.min(r.slack);
            improvement = improvement.min(r.improvement);
        }
    }
    let same = DiscreteDist::from_masses(vec![0.2, 0.3, 0.5])?;
    let at_equal = bhattacharyya_relation(&same, &same)?.slack.abs();
    let disjoint_p = DiscreteDist::from_masses(vec![0.4, 0.6, 0.0, 0.0])?;
    let disjoint_q = DiscreteDist::from_masses(vec![0.0, 0.0, 0.5, 0.5])?;
    let at_disjoint = bhattacharyya_relation(&disjoint_p, &disjoint_q)?.slack.abs();
    let att = td_two_point_attainment(&MomentSpec::new(1.0, 1.0, 0.0, 2.0)?)?;
    let td_err = (att.delta - 1.0 / 11.0).abs().max((att.delta - att.s_squared).abs());
    let ok = slack >= -1e-10
        && improvement >= -1e-10
        && at_equal <= 1e-12
        && at_disjoint <= 1e-12
        && td_err <= 1e-10;
    Ok((
        ok,
        format!(
            "min slack {slack:.2e}, min improvement {improvement:.2e}, \
             bhattacharyya equality err {:.1e}, two-point delta err {td_err:.1e}",
            at_equal.max(at_disjoint)
        ),
    ))
}

fn biased_ring(p0: Vec<f64>, dt: f64) -> Result<MarkovSystem> {
    Ok(MarkovSystem::ring(&[2.0; 3], &[1.0; 3], p0, 1.0, dt)?)
}

fn thermo_identities(c: &Config) -> Result<(bool, String)> {
    let uniform = vec![1.0 / 3.0; 3];
    let r = thermo_report(&biased_ring(uniform.clone(), 1e-3)?)?;
    let value_err = (r.sigma - LN_2)
        .abs()
        .max((r.activity - 3.0).abs())
        .max((r.sigma_ps - 2.0 / 3.0).abs());
    let stationary_gap = r.kl_identity_gap.max(r.td_identity_gap);
    let equality = r.bound_slack.abs();

    // away from stationarity the gaps are pure quadrature error
    let gaps: Vec<ThermoReport> = [1e-2, 5e-3, 2.5e-3]
        .iter()
        .map(|&dt| Ok(thermo_report(&biased_ring(vec![0.6, 0.3, 0.1], dt)?)?))
        .collect::<Result<_>>()?;
    let ratios: Vec<f64> = gaps
        .windows(2)
        .flat_map(|w| {
            [
                w[0].kl_identity_gap / w[1].kl_identity_gap,
                w[0].td_identity_gap / w[1].td_identity_gap,
            ]
        })
        .collect();
    let ratios_ok = ratios.iter().all(|x| (3.5..=4.5).contains(x));

    let hetero = MarkovSystem::ring(&[5.0, 2.0, 3.0], &[1.0; 3], uniform, 1.0, 1e-3)?;
    let hetero_slack = thermo_report(&hetero)?.bound_slack;

    let mut rng = sampling::rng(c.seed ^ 0x74686572);
    let mut worst = f64::INFINITY;
    for _ in 0..c.random_systems {
        let sys = sampling::markov_system(&mut rng, 1.0, 1e-3);
        worst = worst.min(thermo_report(&sys)?.bound_slack);
    }

    let ok = value_err <= 1e-6
        && stationary_gap <= 1e-12
        && ratios_ok
        && equality <= 1e-8
        && hetero_slack > 0.0
        && worst >= -1e-8;
    let ratios: Vec<String> = ratios.iter().map(|x| format!("{x:.2}")).collect();
    Ok((
        ok,
        format!(
            "value err {value_err:.1e}, stationary gap {stationary_gap:.1e}, \
             gap ratios [{}], equality slack {equality:.1e}, heterogeneous slack \
             {hetero_slack:.3e}, min slack over {} systems {worst:.3e}",
            ratios.join(", "),
            c.random_systems
        ),
    ))
}

fn round_trip(_: &Config) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for gen in catalog() {
        let bd = make_binary(gen);
        let top = bd.g(0.99);
        for i in 0..=500 {
            let target = top * i as f64 / 500.0;
            let t = inverse_g(&bd, target)?;
            worst = worst.max((bd.g(t) - target).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max |g(G(T)) - T| = {worst:.2e}")))
}

