//! Arithmetic invariants of Fuchsian systems: the derivative tower, Gauss
//! norms and truncated radii, `H(λ)`, and p-curvature sweeps.

pub mod pcurvature;
pub mod radius;
pub mod tower;

pub use pcurvature::{
    classify, good_primes, is_good_prime, nilpotency_sweep, pcurvature, reduce_system,
    solution_side_matrix_mod_p, NilpotencyWitness, PCurvature, PCurvatureReport, PCurvatureStatus,
    PolyMatrixFp, ReducedSystem, SweepReport, SweepSummary,
};
pub use radius::{
    default_window, denominator_primes, gauss_norm, gauss_norm_ratio, h_bound, inequality_report,
    rho_truncated, GaussNorm, HBound, InequalityReport, PrimeRadiusEstimate, RhoEstimate,
};
pub use tower::{build_tower, common_denominator_form, DerivativeTower, PolyMatrix};
