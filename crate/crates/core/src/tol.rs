//! Numerical tolerances used across the crate.
//!
//! The algebras involved are tiny (dimension at most `2^16`, matrices at most
//! 19×19), so double precision keeps round-off far below these cut-offs.

/// Coefficient denormalization cutoff: blade coefficients below this are
/// dropped when a Clifford number is canonicalized.
pub const EPS_ZERO: f64 = 1e-13;

/// Tolerance for algebraic identities (associativity, involution laws,
/// determinant conditions).
pub const EPS_ALG: f64 = 1e-9;

/// Tolerance for boundary-point coincidence and Möbius invariance checks.
pub const EPS_GEO: f64 = 1e-8;

/// Denominators smaller than this route a Möbius image to `∞`.
pub const EPS_POLE: f64 = 1e-10;

/// Tolerance on the Lorentz-form residual `MᵀqM − q`.
pub const EPS_LOR: f64 = 1e-8;

/// Tolerance for classification invariants (angles, τ, β) under conjugation.
pub const EPS_CLASS: f64 = 1e-7;

/// Slack on inequality comparisons inside certificates.
pub const EPS_CERT: f64 = 1e-9;

/// Eigenvalue clustering radius for quaternionic right eigenvalues.
pub const EPS_EIG: f64 = 1e-7;

/// Membership tolerance for `A*JA = J` in `Sp(n,1)`.
pub const EPS_SP: f64 = 1e-10;

/// Number of random frames tried by the Lorentz reconstruction before
/// giving up.
pub const K_RETRY: usize = 5;

// Implementation constants for the spectral post-processing. Eigensolvers
// spread a defective eigenvalue over a circle of radius ~eps^{1/3} ≈ 6e-6,
// so detection thresholds sit well above that while cluster centroids
// average the noise back out.

/// Clustering radius when grouping Lorentz / adjoint eigenvalues.
pub const EPS_CLUSTER: f64 = 1e-4;

/// A cluster centroid modulus must exceed `1 + EPS_LOX_DETECT` to count as
/// loxodromic.
pub const EPS_LOX_DETECT: f64 = 1e-5;

/// Relative singular-value threshold for numerical null spaces.
pub const EPS_NULLSPACE: f64 = 1e-7;
