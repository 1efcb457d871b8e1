//! Dynamical type of a hyperbolic isometry.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Classification of an isometry: elliptic (interior fixed point), parabolic
/// (exactly one boundary fixed point), loxodromic (exactly two). A regular
/// elliptic has at most two boundary fixed points (real case) or no repeated
/// eigenvalue class (complex/quaternionic case).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Elliptic,
    RegularElliptic,
    Parabolic,
    Loxodromic,
}

impl Kind {
    /// Both plain and regular elliptics.
    pub fn is_elliptic(self) -> bool {
        matches!(self, Kind::Elliptic | Kind::RegularElliptic)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Elliptic => "elliptic",
            Kind::RegularElliptic => "regular_elliptic",
            Kind::Parabolic => "parabolic",
            Kind::Loxodromic => "loxodromic",
        };
        f.write_str(s)
    }
}
