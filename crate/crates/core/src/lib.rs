//! # divbound-core
//!
//! Tight lower bounds for symmetric f-divergences expressed through binary
//! f-divergences.
//!
//! For a strictly convex generator `f` with `f(1) = 0`, the binary
//! divergence is
//!
//! ```text
//! g(t) = D_f(R_t || R_t†),   R_t = ((1-t)/2, (1+t)/2),   R_t† = ((1+t)/2, (1-t)/2)
//! ```
//!
//! When `g'(t)/t` is non-decreasing on `(0, 1)`:
//!
//! - `½(D_f(P||Q) + D_f(Q||P)) ≥ g(√Δ(P,Q))`, attained by `(R_√d, R_√d†)`
//!   ([`bounds::theorem1_bound`]);
//! - under fixed means and variances, the symmetrized divergence is at least
//!   `g(s)` with `s = |a| / √(2(σ_P² + σ_Q²) + a²)`, tight when the variances
//!   agree ([`bounds::theorem2_bound`]).
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`fgen`] | generators, discrete distributions, f-divergences, moments |
//! | [`binary`] | `g`, `g'`, `g''`, the inverse `G`, the condition certificate |
//! | [`bounds`] | triangular-discrimination, total-variation and moment bounds |
//! | [`inequalities`] | Hellinger, Bhattacharyya and Jensen-Shannon relations to Δ |
//! | [`oracle`] | brute-force constrained minimization and two-point constructions |
//! | [`thermo`] | Markov jump processes, entropy production and activity |
//!
//! All logarithms are natural. The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod binary;
pub mod bounds;
mod error;
pub mod fgen;
pub mod inequalities;
mod math;
pub mod oracle;
pub mod thermo;

pub use binary::{
    check_condition, check_condition_with_tol, concavity_check_g_squared, inverse_g, make_binary,
    BinaryDivergence, BinaryFunction, ConditionCertificate, SyntheticBinary,
};
pub use bounds::{
    lemma3_pair, theorem1_bound, theorem2_bound, theorem2_s, tv_bound, BoundBasis, BoundResult,
    MomentSpec,
};
pub use error::{Error, Result};
pub use fgen::{
    align, catalog, f_divergence, f_divergence_masses, moments, symmetrized_divergence,
    CustomGenerator, DiscreteDist, FGenerator, Generator,
};
pub use inequalities::IneqReport;
pub use thermo::{MarkovSystem, ThermoReport};
