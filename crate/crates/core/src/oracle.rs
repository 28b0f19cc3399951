//! Brute-force cross-checks that do not go through `g` or its inverse.
//!
//! The searches evaluate f-divergences directly on small supports, so their
//! minima can be compared against the closed-form bounds.

use alloc::vec;
use alloc::vec::Vec;

use crate::bounds::{theorem2_s, MomentSpec};
use crate::error::{Error, Result};
use crate::fgen::{f_divergence_masses, symmetrized_masses, DiscreteDist, FGenerator, Generator};
use crate::math::{abs, sqrt};

/// Tolerance on `|Δ(P,Q) - d|` for a candidate pair.
pub const TD_CONSTRAINT_TOL: f64 = 1e-4;
/// Tolerance on each moment constraint.
pub const MOMENT_CONSTRAINT_TOL: f64 = 1e-6;
/// Grid candidates refined by pattern search.
pub const REFINE_STARTS: usize = 10;
const MIN_STEP: f64 = 1e-9;
const MAX_SWEEPS: usize = 4000;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    /// Least symmetrized divergence found.
    pub value: f64,
    pub support: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

/// All mass vectors of length `k` with entries in `{0, 1/n, …, 1}`.
fn simplex_grid(k: usize, n: usize) -> Vec<Vec<f64>> {
    fn rec(k: usize, left: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == k - 1 {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / n as f64).collect());
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(k, left - c, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, n, n, &mut Vec::with_capacity(k), &mut out);
    out
}

fn td(p: &[f64], q: &[f64]) -> f64 {
    f_divergence_masses(&FGenerator::Triangular, p, q).unwrap_or(f64::INFINITY)
}

/// Moves from `p` toward `target` until `Δ(p, ·) = d`. `Δ(p, p + λ(target - p))`
/// is convex in `λ` and zero at 0, hence increasing, so bisection applies.
fn project_on_td(p: &[f64], target: &[f64], d: f64) -> Option<Vec<f64>> {
    if td(p, target) < d {
        return None;
    }
    let at = |lambda: f64| -> Vec<f64> {
        p.iter()
            .zip(target)
            .map(|(a, b)| (a + lambda * (b - a)).max(0.0))
            .collect()
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if td(p, &at(mid)) < d {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = at(hi);
    if abs(td(p, &q) - d) <= TD_CONSTRAINT_TOL {
        Some(q)
    } else {
        None
    }
}

#[derive(Clone)]
struct Candidate {
    value: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

fn push_best(best: &mut Vec<Candidate>, cand: Candidate) {
    if !cand.value.is_finite() && best.len() >= REFINE_STARTS {
        return;
    }
    let pos = best
        .iter()
        .position(|c| cand.value < c.value)
        .unwrap_or(best.len());
    if pos < REFINE_STARTS {
        best.insert(pos, cand);
        best.truncate(REFINE_STARTS);
    }
}

/// Pattern search over two parameter vectors. `moves` lists the perturbations
/// of a state for a given step; `eval` returns `None` for infeasible states.
fn pattern_search<M, E>(start: Candidate, initial_step: f64, moves: &M, eval: &E) -> Candidate
where
    M: Fn(&Candidate, f64) -> Vec<(Vec<f64>, Vec<f64>)>,
    E: Fn(&[f64], &[f64]) -> Option<f64>,
{
    let mut best = start;
    let mut step = initial_step;
    let mut sweeps = 0;
    while step >= MIN_STEP && sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut improved: Option<Candidate> = None;
        for (a, b) in moves(&best, step) {
            if let Some(v) = eval(&a, &b) {
                let current = improved.as_ref().map_or(best.value, |c| c.value);
                if v < current {
                    improved = Some(Candidate { value: v, a, b });
                }
            }
        }
        match improved {
            Some(c) => best = c,
            None => step *= 0.5,
        }
    }
    best
}

/// Least `½(D_f(P||Q) + D_f(Q||P))` over pairs on a support of
/// `support_size` points with `Δ(P,Q) = d`.
///
/// Every pair `(P, Q̂)` of a simplex grid with `resolution` subdivisions is
/// projected onto the constraint along the segment from `P` to `Q̂`; the best
/// [`REFINE_STARTS`] candidates are then refined by mass-transfer pattern
/// search.
pub fn min_symmetrized_given_td<G: Generator + ?Sized>(
    gen: &G,
    d: f64,
    support_size: usize,
    resolution: usize,
) -> Result<SearchOutcome> {
    if !(2..=4).contains(&support_size) {
        return Err(Error::Precondition("support_size must be 2, 3 or 4"));
    }
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::Domain { what: "d", value: d });
    }
    if resolution == 0 {
        return Err(Error::Search("resolution must be positive"));
    }
    let eval = |p: &[f64], qhat: &[f64]| -> Option<f64> {
        let q = project_on_td(p, qhat, d)?;
        symmetrized_masses(gen, p, &q).ok()
    };
    let grid = simplex_grid(support_size, resolution);
    let mut best: Vec<Candidate> = Vec::new();
    for p in &grid {
        for qhat in &grid {
            if let Some(value) = eval(p, qhat) {
                push_best(
                    &mut best,
                    Candidate {
                        value,
                        a: p.clone(),
                        b: qhat.clone(),
                    },
                );
            }
        }
    }
    if best.is_empty() {
        return Err(Error::Search("no grid pair reaches the requested Δ"));
    }
    let moves = |c: &Candidate, step: f64| {
        let mut out = Vec::new();
        for which in 0..2 {
            let base = if which == 0 { &c.a } else { &c.b };
            for i in 0..base.len() {
                for j in 0..base.len() {
                    if i == j || base[i] <= 0.0 {
                        continue;
                    }
                    let amount = step.min(base[i]);
                    let mut next = base.clone();
                    next[i] -= amount;
                    next[j] += amount;
                    if which == 0 {
                        out.push((next, c.b.clone()));
                    } else {
                        out.push((c.a.clone(), next));
                    }
                }
            }
        }
        out
    };
    let step = 1.0 / resolution as f64;
    let winner = best
        .into_iter()
        .map(|c| pattern_search(c, step, &moves, &eval))
        .min_by(|x, y| x.value.total_cmp(&y.value))
        .expect("non-empty");
    let q = project_on_td(&winner.a, &winner.b, d).expect("winner is feasible");
    Ok(SearchOutcome {
        value: winner.value,
        support: (0..support_size).map(|i| i as f64).collect(),
        p: winner.a,
        q,
    })
}

/// Two-point pair on a common support `{x₁ < x₂}` with the requested means and
/// variances.
///
/// In coordinates centered at `c = (m_P + m_Q)/2`, with `x₂ = u` and
/// `x₁ = -w`, the four moment equations reduce to
/// `u w = (σ_P² + σ_Q²)/2 + a²/4` and `u - w = (σ_P² - σ_Q²)/a`.
/// For `a = 0` a solution exists only when the variances agree (`P = Q`).
pub fn two_point_moment_pair(spec: &MomentSpec) -> Result<(DiscreteDist, DiscreteDist)> {
    let a = spec.a();
    let c = 0.5 * (spec.m_p() + spec.m_q());
    let vp = spec.sigma_p() * spec.sigma_p();
    let vq = spec.sigma_q() * spec.sigma_q();
    if a == 0.0 {
        if vp != vq {
            return Err(Error::Construction(
                "equal means with unequal variances have no common two-point support",
            ));
        }
        if vp == 0.0 {
            let p = DiscreteDist::point_mass(c)?;
            return Ok((p.clone(), p));
        }
        let sigma = spec.sigma_p();
        let p = DiscreteDist::new(vec![c - sigma, c + sigma], vec![0.5, 0.5])?;
        return Ok((p.clone(), p));
    }
    let prod = 0.5 * (vp + vq) + 0.25 * a * a;
    let delta = (vp - vq) / a;
    let root = sqrt(delta * delta + 4.0 * prod);
    let (u, w) = if delta >= 0.0 {
        let u = 0.5 * (delta + root);
        (u, prod / u)
    } else {
        let w = 0.5 * (root - delta);
        (prod / w, w)
    };
    if !(u > 0.0 && w > 0.0) {
        return Err(Error::Construction("moment system has no real solution"));
    }
    let width = u + w;
    let p1 = ((u - 0.5 * a) / width).clamp(0.0, 1.0);
    let q1 = ((u + 0.5 * a) / width).clamp(0.0, 1.0);
    let support = vec![c - w, c + u];
    Ok((
        DiscreteDist::new(support.clone(), vec![p1, 1.0 - p1])?,
        DiscreteDist::new(support, vec![q1, 1.0 - q1])?,
    ))
}

/// Masses on three points with prescribed mean and second moment
/// (Lagrange form of the Vandermonde solve). `None` when a mass is negative.
fn three_point_masses(x: &[f64; 3], mean: f64, second: f64) -> Option<[f64; 3]> {
    let mut m = [0.0; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let num = second - (x[j] + x[k]) * mean + x[j] * x[k];
        let den = (x[i] - x[j]) * (x[i] - x[k]);
        m[i] = num / den;
    }
    if m.iter().any(|&v| !v.is_finite() || v < -1e-12) {
        return None;
    }
    for v in &mut m {
        *v = v.max(0.0);
    }
    let total: f64 = m.iter().sum();
    for v in &mut m {
        *v /= total;
    }
    let got_mean: f64 = m.iter().zip(x).map(|(w, xi)| w * xi).sum();
    let got_second: f64 = m.iter().zip(x).map(|(w, xi)| w * xi * xi).sum();
    if abs(got_mean - mean) > MOMENT_CONSTRAINT_TOL || abs(got_second - second) > MOMENT_CONSTRAINT_TOL
    {
        return None;
    }
    Some(m)
}

/// Least symmetrized divergence over pairs with the moments of `spec`
/// (equal variances) on supports of 2 or 3 points.
///
/// Two points: the moment system has a unique solution. Three points: the
/// support is searched on a `resolution`-point grid around the common center
/// and refined by pattern search; masses follow from the moments.
pub fn min_symmetrized_given_moments<G: Generator + ?Sized>(
    gen: &G,
    spec: &MomentSpec,
    support_size: usize,
    resolution: usize,
) -> Result<SearchOutcome> {
    if !spec.has_equal_variances() {
        return Err(Error::Precondition("moment oracle needs sigma_P = sigma_Q"));
    }
    if !(2..=3).contains(&support_size) {
        return Err(Error::Precondition("support_size must be 2 or 3"));
    }
    if spec.a() == 0.0 || support_size == 2 {
        let (p, q) = two_point_moment_pair(spec)?;
        let value = symmetrized_masses(gen, p.mass(), q.mass())?;
        return Ok(SearchOutcome {
            value,
            support: p.support().to_vec(),
            p: p.mass().to_vec(),
            q: q.mass().to_vec(),
        });
    }
    if resolution < 3 {
        return Err(Error::Search("resolution must be at least 3"));
    }
    let a = spec.a();
    let var = spec.sigma_p() * spec.sigma_p();
    let second = var + 0.25 * a * a;
    let half_width = 1.5 * sqrt(second);
    let c = 0.5 * (spec.m_p() + spec.m_q());

    let eval = |x: &[f64], _: &[f64]| -> Option<f64> {
        let pts = [x[0], x[1], x[2]];
        if !(pts[0] < pts[1] && pts[1] < pts[2]) {
            return None;
        }
        let p = three_point_masses(&pts, 0.5 * a, second)?;
        let q = three_point_masses(&pts, -0.5 * a, second)?;
        symmetrized_masses(gen, &p, &q).ok()
    };

    let spacing = 2.0 * half_width / (resolution - 1) as f64;
    let nodes: Vec<f64> = (0..resolution)
        .map(|i| -half_width + spacing * i as f64)
        .collect();
    let mut best: Vec<Candidate> = Vec::new();
    for i in 0..resolution {
        for j in i + 1..resolution {
            for k in j + 1..resolution {
                let x = vec![nodes[i], nodes[j], nodes[k]];
                if let Some(value) = eval(&x, &[]) {
                    push_best(&mut best, Candidate { value, a: x, b: Vec::new() });
                }
            }
        }
    }
    if best.is_empty() {
        return Err(Error::Search("no feasible three-point support on the grid"));
    }
    let moves = |cand: &Candidate, step: f64| {
        let mut out = Vec::with_capacity(6);
        for i in 0..3 {
            for sign in [-1.0, 1.0] {
                let mut x = cand.a.clone();
                x[i] += sign * step;
                out.push((x, Vec::new()));
            }
        }
        out
    };
    let winner = best
        .into_iter()
        .map(|cand| pattern_search(cand, spacing, &moves, &eval))
        .min_by(|x, y| x.value.total_cmp(&y.value))
        .expect("non-empty");
    let pts = [winner.a[0], winner.a[1], winner.a[2]];
    let p = three_point_masses(&pts, 0.5 * a, second).expect("feasible");
    let q = three_point_masses(&pts, -0.5 * a, second).expect("feasible");
    Ok(SearchOutcome {
        value: winner.value,
        support: pts.iter().map(|x| x + c).collect(),
        p: p.to_vec(),
        q: q.to_vec(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SedrakyanOutcome {
    /// `Σ u²/v`.
    pub lhs: f64,
    /// `(Σ u)² / Σ v`.
    pub rhs: f64,
    pub holds: bool,
    pub equality: bool,
}

/// `Σ u²/v ≥ (Σ u)²/Σ v`, with equality iff `u = c v`.
pub fn sedrakyan_check(u: &[f64], v: &[f64]) -> Result<SedrakyanOutcome> {
    if u.len() != v.len() || u.is_empty() {
        return Err(Error::Alignment("u and v must be non-empty and of equal length"));
    }
    if let Some(&bad) = v.iter().find(|&&x| !(x > 0.0)) {
        return Err(Error::Domain { what: "v", value: bad });
    }
    let lhs: f64 = u.iter().zip(v).map(|(a, b)| a * a / b).sum();
    let su: f64 = u.iter().sum();
    let sv: f64 = v.iter().sum();
    let rhs = su * su / sv;
    let scale = 1.0 + abs(rhs);
    let holds = lhs >= rhs - 1e-12 * scale;
    let c = su / sv;
    let sup = u
        .iter()
        .zip(v)
        .map(|(a, b)| abs(a - c * b))
        .fold(0.0, f64::max);
    let equality = abs(lhs - rhs) <= 1e-10 * scale && sup <= 1e-8;
    Ok(SedrakyanOutcome {
        lhs,
        rhs,
        holds,
        equality,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TdAttainment {
    /// `Δ(P,Q)` of the two-point pair.
    pub delta: f64,
    pub s_squared: f64,
    pub matches_s_squared: bool,
    /// Whether the Cauchy-Schwarz step behind `Δ ≥ s²` is an equality.
    pub sedrakyan_equality: bool,
    pub pair: (DiscreteDist, DiscreteDist),
}

/// Shows that the two-point pair matching `spec` has `Δ = s²`, even for
/// unequal variances.
pub fn td_two_point_attainment(spec: &MomentSpec) -> Result<TdAttainment> {
    let (p, q) = two_point_moment_pair(spec)?;
    let delta = f_divergence_masses(&FGenerator::Triangular, p.mass(), q.mass())?;
    let s = theorem2_s(spec);
    let s_squared = s * s;
    let c = 0.5 * (spec.m_p() + spec.m_q());
    let mut us = Vec::new();
    let mut vs = Vec::new();
    for ((x, pm), qm) in p.support().iter().zip(p.mass()).zip(q.mass()) {
        let xc = x - c;
        let v = xc * xc * (pm + qm);
        if v > 0.0 {
            us.push(xc * (pm - qm));
            vs.push(v);
        }
    }
    let sedrakyan_equality = if us.is_empty() {
        delta == 0.0
    } else {
        sedrakyan_check(&us, &vs)?.equality
    };
    Ok(TdAttainment {
        delta,
        s_squared,
        matches_s_squared: abs(delta - s_squared) <= 1e-10,
        sedrakyan_equality,
        pair: (p, q),
    })
}
