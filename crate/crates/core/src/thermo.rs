//! Entropy production of continuous-time Markov jump processes.
//!
//! The master equation `dp_n/dt = Σ_m R_nm p_m` is integrated with classical
//! RK4. With fluxes `K_nm(t) = p_m(t) R_nm`:
//!
//! ```text
//! Σ_τ    = ∫ Σ_{n<m} (K_nm - K_mn) ln(K_nm / K_mn) dt
//! Σ_τ^ps = 2 ∫ Σ_{n<m} (K_nm - K_mn)² / (K_nm + K_mn) dt
//! A_τ    = ∫ Σ_{n<m} (K_nm + K_mn) dt
//! ```
//!
//! The path measure `P(n, m, t) = K_nm(t) / A_τ` and its reversal
//! `P†(n, m, t) = P(m, n, t)` turn these into `Σ_τ = A_τ D(P||P†)` and
//! `Σ_τ^ps = 2 A_τ Δ(P, P†)`, so the symmetric-divergence bound gives
//! `Σ_τ ≥ A_τ g_KL(√(Σ_τ^ps / (2 A_τ)))`.
//!
//! Reported integrals use the composite trapezoidal rule on the step
//! boundaries. Path measures are built with composite Simpson weights, so the
//! identity gaps measure the trapezoidal quadrature error (second order in
//! `dt`). All logarithms are natural.

use alloc::vec;
use alloc::vec::Vec;

use crate::binary::{make_binary, BinaryFunction};
use crate::error::{Error, Result};
use crate::fgen::{f_divergence_masses, FGenerator};
use crate::math::{abs, ln, sqrt};

const SIMPLEX_TOL: f64 = 1e-12;
const NEGATIVE_TOL: f64 = 1e-9;

/// A time-homogeneous jump process with a fixed integration grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovSystem {
    n_states: usize,
    /// Row-major: `rates[n * n_states + m]` is the rate from `m` to `n`.
    rates: Vec<f64>,
    p0: Vec<f64>,
    tau: f64,
    dt: f64,
    steps: usize,
}

impl MarkovSystem {
    /// `rates[n][m]` is the rate from state `m` to state `n`; columns must sum
    /// to zero.
    pub fn new(rates: Vec<Vec<f64>>, p0: Vec<f64>, tau: f64, dt: f64) -> Result<Self> {
        let n = rates.len();
        if n == 0 {
            return Err(Error::InvalidSystem("no states"));
        }
        if rates.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSystem("rate matrix is not square"));
        }
        if p0.len() != n {
            return Err(Error::InvalidSystem("p0 length differs from n_states"));
        }
        let flat: Vec<f64> = rates.into_iter().flatten().collect();
        if flat.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidSystem("non-finite rate"));
        }
        for m in 0..n {
            let mut sum = 0.0;
            let mut scale = 0.0f64;
            for row in 0..n {
                let r = flat[row * n + m];
                if row != m && r < 0.0 {
                    return Err(Error::InvalidSystem("negative off-diagonal rate"));
                }
                sum += r;
                scale = scale.max(abs(r));
            }
            if abs(sum) > 1e-12 * (1.0 + scale) {
                return Err(Error::InvalidSystem("rate matrix columns must sum to zero"));
            }
        }
        if p0.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::InvalidSystem("p0 has negative entries"));
        }
        if abs(p0.iter().sum::<f64>() - 1.0) > SIMPLEX_TOL {
            return Err(Error::InvalidSystem("p0 does not sum to 1"));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidSystem("dt must be positive"));
        }
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::InvalidSystem("tau must be non-negative"));
        }
        let ratio = tau / dt;
        let steps = libm::round(ratio);
        if abs(ratio - steps) > 1e-9 * ratio.max(1.0) {
            return Err(Error::InvalidSystem("tau/dt must be an integer"));
        }
        Ok(MarkovSystem {
            n_states: n,
            rates: flat,
            p0,
            tau,
            dt,
            steps: steps as usize,
        })
    }

    /// Builds the generator from off-diagonal rates; the diagonal entries of
    /// `off_diagonal` are ignored and replaced by minus the column sums.
    pub fn from_off_diagonal(
        off_diagonal: Vec<Vec<f64>>,
        p0: Vec<f64>,
        tau: f64,
        dt: f64,
    ) -> Result<Self> {
        let n = off_diagonal.len();
        let mut rates = off_diagonal;
        for m in 0..n {
            if rates[m].len() != n {
                return Err(Error::InvalidSystem("rate matrix is not square"));
            }
            rates[m][m] = 0.0;
        }
        for m in 0..n {
            let out: f64 = (0..n).filter(|&k| k != m).map(|k| rates[k][m]).sum();
            rates[m][m] = -out;
        }
        MarkovSystem::new(rates, p0, tau, dt)
    }

    /// Ring `i → i+1` at `forward[i]`, `i+1 → i` at `backward[i]`.
    pub fn ring(forward: &[f64], backward: &[f64], p0: Vec<f64>, tau: f64, dt: f64) -> Result<Self> {
        let n = forward.len();
        if n < 2 || backward.len() != n {
            return Err(Error::InvalidSystem("ring needs matching rate lists of length ≥ 2"));
        }
        let mut off = vec![vec![0.0; n]; n];
        for i in 0..n {
            let j = (i + 1) % n;
            off[j][i] += forward[i];
            off[i][j] += backward[i];
        }
        MarkovSystem::from_off_diagonal(off, p0, tau, dt)
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }
    pub fn rate(&self, to: usize, from: usize) -> f64 {
        self.rates[to * self.n_states + from]
    }
    pub fn p0(&self) -> &[f64] {
        &self.p0
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn dt(&self) -> f64 {
        self.dt
    }
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Same system with a different initial distribution.
    pub fn with_p0(&self, p0: Vec<f64>) -> Result<Self> {
        let rows = self.rows();
        MarkovSystem::new(rows, p0, self.tau, self.dt)
    }

    /// Same system with a different step size.
    pub fn with_dt(&self, dt: f64) -> Result<Self> {
        MarkovSystem::new(self.rows(), self.p0.clone(), self.tau, dt)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.rates.chunks(self.n_states).map(|r| r.to_vec()).collect()
    }

    fn apply(&self, p: &[f64], out: &mut [f64]) {
        let n = self.n_states;
        for (row, o) in out.iter_mut().enumerate() {
            *o = self.rates[row * n..(row + 1) * n]
                .iter()
                .zip(p)
                .map(|(r, x)| r * x)
                .sum();
        }
    }
}

/// RK4 trajectory of the master equation: `steps + 1` probability vectors.
pub fn evolve(sys: &MarkovSystem) -> Result<Vec<Vec<f64>>> {
    let n = sys.n_states;
    let h = sys.dt;
    let mut traj = Vec::with_capacity(sys.steps + 1);
    let mut p = sys.p0.clone();
    traj.push(p.clone());
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    for step in 0..sys.steps {
        sys.apply(&p, &mut k1);
        for i in 0..n {
            tmp[i] = p[i] + 0.5 * h * k1[i];
        }
        sys.apply(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = p[i] + 0.5 * h * k2[i];
        }
        sys.apply(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = p[i] + h * k3[i];
        }
        sys.apply(&tmp, &mut k4);
        for i in 0..n {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let min = p.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -NEGATIVE_TOL {
            return Err(Error::StepSize {
                t: (step + 1) as f64 * h,
                value: min,
            });
        }
        for x in p.iter_mut() {
            *x = x.max(0.0);
        }
        let total: f64 = p.iter().sum();
        if abs(total - 1.0) > SIMPLEX_TOL {
            for x in p.iter_mut() {
                *x /= total;
            }
        }
        traj.push(p.clone());
    }
    Ok(traj)
}

/// Solves `R p = 0`, `Σ p = 1` by Gaussian elimination with partial pivoting.
pub fn stationary_distribution(sys: &MarkovSystem) -> Result<Vec<f64>> {
    let n = sys.n_states;
    let mut a: Vec<Vec<f64>> = sys.rows();
    let mut b = vec![0.0; n];
    a[n - 1] = vec![1.0; n];
    b[n - 1] = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| abs(a[i][col]).total_cmp(&abs(a[j][col])))
            .expect("non-empty");
        if abs(a[pivot][col]) < 1e-14 {
            return Err(Error::InvalidSystem("stationary distribution is not unique"));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor != 0.0 {
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    for v in x.iter_mut() {
        *v = v.max(0.0);
    }
    let total: f64 = x.iter().sum();
    Ok(x.into_iter().map(|v| v / total).collect())
}

/// Instantaneous rates at one time node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSample {
    pub t: f64,
    /// Entropy production rate; `+∞` for one-way transitions with flux.
    pub sigma_rate: f64,
    pub activity_rate: f64,
    pub sigma_ps_rate: f64,
}

fn sample(sys: &MarkovSystem, p: &[f64], t: f64) -> RateSample {
    let n = sys.n_states;
    let (mut sigma, mut act, mut ps) = (0.0, 0.0, 0.0);
    for a in 0..n {
        for b in a + 1..n {
            let kab = p[b] * sys.rate(a, b);
            let kba = p[a] * sys.rate(b, a);
            let total = kab + kba;
            if total == 0.0 {
                continue;
            }
            act += total;
            let diff = kab - kba;
            ps += 2.0 * diff * diff / total;
            if kab == 0.0 || kba == 0.0 {
                sigma = f64::INFINITY;
            } else {
                sigma += diff * ln(kab / kba);
            }
        }
    }
    RateSample {
        t,
        sigma_rate: sigma,
        activity_rate: act,
        sigma_ps_rate: ps,
    }
}

/// Rates at every step boundary of `traj`.
pub fn rate_samples(sys: &MarkovSystem, traj: &[Vec<f64>]) -> Vec<RateSample> {
    traj.iter()
        .enumerate()
        .map(|(k, p)| sample(sys, p, k as f64 * sys.dt))
        .collect()
}

/// Composite trapezoidal weights for `steps` intervals of width `h`.
pub fn trapezoid_weights(steps: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; steps + 1];
    w[0] = 0.5 * h;
    w[steps] = if steps == 0 { 0.0 } else { 0.5 * h };
    w
}

/// Composite Simpson weights; an odd interval count closes with the 3/8 rule
/// on the last three intervals, and a single interval falls back to the
/// trapezoid.
pub fn simpson_weights(steps: usize, h: f64) -> Vec<f64> {
    if steps < 2 {
        return trapezoid_weights(steps, h);
    }
    let mut w = vec![0.0; steps + 1];
    let simpson_end = if steps % 2 == 0 { steps } else { steps - 3 };
    for i in (0..simpson_end).step_by(2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if simpson_end < steps {
        let s = simpson_end;
        for (k, c) in [1.0, 3.0, 3.0, 1.0].iter().enumerate() {
            w[s + k] += 3.0 * h / 8.0 * c;
        }
    }
    w
}

/// Path measure over `(ordered edge, time node)` and its reversal.
#[derive(Debug, Clone, PartialEq)]
pub struct PathMeasure {
    /// Ordered pairs `(n, m)`, `n ≠ m`.
    pub edges: Vec<(usize, usize)>,
    /// `forward[k * edges.len() + e] = K_e(t_k) w_k / A`.
    pub forward: Vec<f64>,
    /// Normalizer `A = Σ_k w_k Σ_{n≠m} K_nm(t_k)`.
    pub activity: f64,
    reverse_edge: Vec<usize>,
}

impl PathMeasure {
    pub fn build(sys: &MarkovSystem, traj: &[Vec<f64>], weights: &[f64]) -> Result<Self> {
        let n = sys.n_states;
        let mut edges = Vec::with_capacity(n * (n - 1));
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    edges.push((a, b));
                }
            }
        }
        let reverse_edge = edges
            .iter()
            .map(|&(a, b)| edges.iter().position(|&e| e == (b, a)).expect("reverse edge"))
            .collect();
        let mut forward = Vec::with_capacity(edges.len() * traj.len());
        for (p, w) in traj.iter().zip(weights) {
            for &(a, b) in &edges {
                forward.push(p[b] * sys.rate(a, b) * w);
            }
        }
        let activity: f64 = forward.iter().sum();
        if !(activity > 0.0) {
            return Err(Error::DegenerateSystem);
        }
        for v in forward.iter_mut() {
            *v /= activity;
        }
        Ok(PathMeasure {
            edges,
            forward,
            activity,
            reverse_edge,
        })
    }

    /// `P†(n, m, t) = P(m, n, t)` applied to any vector in this layout.
    pub fn dagger(&self, measure: &[f64]) -> Vec<f64> {
        let e = self.edges.len();
        let mut out = vec![0.0; measure.len()];
        for (k, chunk) in measure.chunks(e).enumerate() {
            for (i, &r) in self.reverse_edge.iter().enumerate() {
                out[k * e + i] = chunk[r];
            }
        }
        out
    }

    pub fn reverse(&self) -> Vec<f64> {
        self.dagger(&self.forward)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermoReport {
    /// Total entropy production `Σ_τ` (nats).
    pub sigma: f64,
    /// Pseudo-entropy production `Σ_τ^ps`.
    pub sigma_ps: f64,
    /// Dynamical activity `A_τ`.
    pub activity: f64,
    /// `|Σ_τ - A_τ D(P||P†)|`.
    pub kl_identity_gap: f64,
    /// `|Σ_τ^ps - 2 A_τ Δ(P, P†)|`.
    pub td_identity_gap: f64,
    /// `A_τ g_KL(√(Σ_τ^ps / (2 A_τ)))`.
    pub bound_rhs: f64,
    /// `Σ_τ - bound_rhs`.
    pub bound_slack: f64,
    /// `D(P||P†)` of the path measure.
    pub kl_forward: f64,
    /// `D(P†||P)`.
    pub kl_backward: f64,
    /// `Δ(P, P†)`.
    pub td_path: f64,
}

fn gap(a: f64, b: f64) -> f64 {
    if a.is_infinite() && b.is_infinite() && a == b {
        0.0
    } else {
        abs(a - b)
    }
}

/// Integrates the system and evaluates every quantity of the report.
pub fn thermo_report(sys: &MarkovSystem) -> Result<ThermoReport> {
    let traj = evolve(sys)?;
    report_for_trajectory(sys, &traj)
}

/// As [`thermo_report`] for an already integrated trajectory.
pub fn report_for_trajectory(sys: &MarkovSystem, traj: &[Vec<f64>]) -> Result<ThermoReport> {
    let samples = rate_samples(sys, traj);
    let trap = trapezoid_weights(sys.steps, sys.dt);
    let integrate = |f: fn(&RateSample) -> f64| -> f64 {
        samples.iter().zip(&trap).map(|(s, w)| {
            let v = f(s);
            if *w == 0.0 { 0.0 } else { v * w }
        }).sum()
    };
    let sigma = integrate(|s| s.sigma_rate);
    let sigma_ps = integrate(|s| s.sigma_ps_rate);
    let activity = integrate(|s| s.activity_rate);
    if !(activity > 0.0) {
        return Err(Error::DegenerateSystem);
    }

    let path = PathMeasure::build(sys, traj, &simpson_weights(sys.steps, sys.dt))?;
    let reverse = path.reverse();
    let kl = FGenerator::KullbackLeibler;
    let kl_forward = f_divergence_masses(&kl, &path.forward, &reverse)?;
    let kl_backward = f_divergence_masses(&kl, &reverse, &path.forward)?;
    let td_path = f_divergence_masses(&FGenerator::Triangular, &path.forward, &reverse)?;

    let bound_rhs = tku_bound(sigma_ps, activity)?;
    Ok(ThermoReport {
        sigma,
        sigma_ps,
        activity,
        kl_identity_gap: gap(sigma, path.activity * kl_forward),
        td_identity_gap: gap(sigma_ps, 2.0 * path.activity * td_path),
        bound_rhs,
        bound_slack: if sigma.is_infinite() { f64::INFINITY } else { sigma - bound_rhs },
        kl_forward,
        kl_backward,
        td_path,
    })
}

/// `A g_KL(√(Σ^ps / (2A)))` with `g_KL(t) = t ln((1+t)/(1-t))`.
pub fn tku_bound(sigma_ps: f64, activity: f64) -> Result<f64> {
    if !(activity > 0.0) || !activity.is_finite() {
        return Err(Error::Domain {
            what: "activity",
            value: activity,
        });
    }
    if !(sigma_ps >= 0.0) {
        return Err(Error::Domain {
            what: "sigma_ps",
            value: sigma_ps,
        });
    }
    let ratio = sigma_ps / (2.0 * activity);
    if ratio > 1.0 + 1e-12 {
        return Err(Error::Domain {
            what: "sigma_ps / (2 activity)",
            value: ratio,
        });
    }
    let t = sqrt(ratio.min(1.0));
    Ok(activity * make_binary(FGenerator::KullbackLeibler).g(t))
}
