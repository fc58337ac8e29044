//! Exact arithmetic for Fuchsian systems of linear ODEs over ℚ.
//!
//! A system `y' = Σ_i A_i / (t - q_i) · y` is stored as its rational points
//! and residue matrices ([`FuchsianSystem`]). On top of that the crate
//! provides
//!
//! * the additive middle convolution `mc_λ` ([`convolution`]),
//! * Katz's reduction of rigid systems to rank one and its replay ([`katz`]),
//! * arithmetic probes: the derivative tower, Gauss norms, a truncated global
//!   inverse radius, the explicit bound `H(λ)` and p-curvature sweeps
//!   ([`probes`]).
//!
//! All linear algebra is exact over arbitrary-precision rationals or over
//! 𝔽_p[t].

pub mod berkowitz;
pub mod convolution;
pub mod corpus;
pub mod error;
pub mod fuchsian;
pub mod katz;
pub mod matrix;
pub mod poly;
pub mod probes;
pub mod rational;

pub use convolution::{
    mc_rank, middle_convolution, naive_convolution, prune_apparent, round_trip_check,
    ConvolutionWorkspace,
};
pub use error::{Error, Result};
pub use fuchsian::{kummer, FuchsianSystem, LocalSpectrum, RankOneTwist, SingularPoint, Spectrum};
pub use katz::{
    equivalence_harness, katz_reduce, katz_step, replay, select_lambda, select_twist,
    HarnessConfig, HarnessReport, KatzFailure, KatzStep, KatzTrace,
};
pub use matrix::{simultaneous_conjugacy, MatQ};
pub use poly::{PolyFp, PolyQ};
pub use rational::{format_rational, p_adic_valuation, parse_rational, Rational};
