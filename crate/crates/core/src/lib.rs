//! Isometry algebra of real, complex and quaternionic hyperbolic spaces.
//!
//! The crate has three layers:
//!
//! * the Clifford side: the algebra `C_n` ([`clifford`]), Clifford matrices
//!   acting on `R^{n+1} ∪ {∞}` by linear fractional transformations
//!   ([`mobius`]), and a Lorentz-model bridge that classifies isometries and
//!   extracts rotation angles, translation length and the invariant `β`
//!   ([`lorentz`]);
//! * the quaternionic side: quaternion matrices with right eigenvalues via
//!   the complex adjoint ([`quat`]) and the group `Sp(n,1)` with its
//!   conjugacy invariants and Heisenberg translations ([`sp`]);
//! * the certificate machinery: Jørgensen-type inequality checkers that every
//!   discrete non-elementary two-generator group must satisfy ([`jorgensen`],
//!   the quaternionic checkers in [`sp`]), and a word-ball probe that pairs a
//!   test map with the loxodromic elements of a finitely generated group and
//!   reports violations as machine-checkable non-discreteness certificates
//!   ([`probe`]).
//!
//! A violation certificate means "this pair cannot generate a discrete
//! non-elementary group". The probe never claims discreteness; a clean run
//! only reports "no violation up to the searched depth".

pub mod clifford;
pub mod cli;
pub mod error;
pub mod jorgensen;
pub mod jsonio;
pub(crate) mod linalg;
pub mod kind;
pub mod lorentz;
pub mod mobius;
pub mod probe;
pub mod quat;
pub mod registry;
pub mod sampling;
pub mod sp;
pub mod tol;

pub use clifford::{CliffordNumber, CliffordVector};
pub use error::Error;
pub use jorgensen::{Certificate, Evidence, InequalityId, Verdict};
pub use kind::Kind;
pub use lorentz::IsometryInvariants;
pub use mobius::{BoundaryPoint, CliffordMatrix};
pub use quat::{QuatMatrix, Quaternion};
pub use sp::{FormTag, SpInvariants, SpMatrix};

/// Schema tag stamped on every JSON document the tools emit or accept.
pub const SCHEMA: &str = "hypdisc/1";

pub type Result<T> = std::result::Result<T, Error>;
