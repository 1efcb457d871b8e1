//! Clifford matrices `SL(2, C_n)`, their Möbius action on
//! `R^{n+1} ∪ {∞}`, and the Clifford cross-ratio with all `∞`-branches.

use crate::clifford::CliffordNumber;
use crate::error::Error;
use crate::tol::{EPS_ALG, EPS_GEO, EPS_POLE};
use crate::Result;
use serde::{Deserialize, Serialize};

/// A point of the boundary sphere `R^{n+1} ∪ {∞}`. Finite points are
/// paravectors of `C_n`.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryPoint {
    Finite(CliffordNumber),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(v: CliffordNumber) -> Self {
        debug_assert!(v.is_vector(EPS_ALG * v.norm().max(1.0)));
        BoundaryPoint::Finite(v)
    }

    pub fn zero(n: u32) -> Self {
        BoundaryPoint::Finite(CliffordNumber::zero(n))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<&CliffordNumber> {
        match self {
            BoundaryPoint::Finite(v) => Some(v),
            BoundaryPoint::Infinity => None,
        }
    }

    /// Coincidence within `tol`; `∞` only matches `∞`.
    pub fn coincides(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => (a - b).norm() <= tol,
            _ => false,
        }
    }

    /// Reinterprets the point one algebra up.
    pub fn embed(&self, m: u32) -> Self {
        match self {
            BoundaryPoint::Finite(v) => BoundaryPoint::Finite(v.embed(m)),
            BoundaryPoint::Infinity => BoundaryPoint::Infinity,
        }
    }
}

/// A 2×2 matrix over `C_n` subject to the Ahlfors–Waterman conditions:
/// entries in `Γ_n ∪ {0}`, Clifford determinant `a d* − b c* = 1`, and
/// `a b*`, `c d*`, `c* a`, `d* b` paravectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliffordMatrix {
    pub a: CliffordNumber,
    pub b: CliffordNumber,
    pub c: CliffordNumber,
    pub d: CliffordNumber,
}

impl CliffordMatrix {
    pub fn new(a: CliffordNumber, b: CliffordNumber, c: CliffordNumber, d: CliffordNumber) -> Result<Self> {
        let n = a.n();
        for e in [&b, &c, &d] {
            if e.n() != n {
                return Err(Error::DimensionMismatch(n, e.n()));
            }
        }
        Ok(CliffordMatrix { a, b, c, d })
    }

    pub fn identity(n: u32) -> Self {
        CliffordMatrix {
            a: CliffordNumber::one(n),
            b: CliffordNumber::zero(n),
            c: CliffordNumber::zero(n),
            d: CliffordNumber::one(n),
        }
    }

    /// Builds a matrix from real scalar entries.
    pub fn from_reals(n: u32, a: f64, b: f64, c: f64, d: f64) -> Self {
        CliffordMatrix {
            a: CliffordNumber::scalar(n, a),
            b: CliffordNumber::scalar(n, b),
            c: CliffordNumber::scalar(n, c),
            d: CliffordNumber::scalar(n, d),
        }
    }

    /// The translation `v ↦ v + t`.
    pub fn translation(t: CliffordNumber) -> Self {
        let n = t.n();
        CliffordMatrix {
            a: CliffordNumber::one(n),
            b: t,
            c: CliffordNumber::zero(n),
            d: CliffordNumber::one(n),
        }
    }

    /// `diag(p, (p*)⁻¹)` for `p ∈ Γ_n`; acts as `v ↦ p v p*`.
    pub fn diagonal(p: CliffordNumber) -> Result<Self> {
        let n = p.n();
        let d = p.star().inverse()?;
        Ok(CliffordMatrix { a: p, b: CliffordNumber::zero(n), c: CliffordNumber::zero(n), d })
    }

    /// The inversion `v ↦ -v⁻¹`, `[[0,-1],[1,0]]`.
    pub fn inversion(n: u32) -> Self {
        CliffordMatrix {
            a: CliffordNumber::zero(n),
            b: CliffordNumber::scalar(n, -1.0),
            c: CliffordNumber::one(n),
            d: CliffordNumber::zero(n),
        }
    }

    pub fn n(&self) -> u32 {
        self.a.n()
    }

    pub fn entries(&self) -> [&CliffordNumber; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Clifford determinant `Δ(T) = a d* − b c*`.
    pub fn det(&self) -> CliffordNumber {
        &(&self.a * &self.d.star()) - &(&self.b * &self.c.star())
    }

    /// Checks the three membership conditions within `tol`.
    pub fn validate(&self, tol: f64) -> bool {
        let n = self.n();
        let one = CliffordNumber::one(n);
        if !self.det().approx_eq(&one, tol) {
            return false;
        }
        for e in self.entries() {
            if !(e.is_zero() || e.gamma_member(tol)) {
                return false;
            }
        }
        let products = [
            &self.a * &self.b.star(),
            &self.c * &self.d.star(),
            &self.a.star() * &self.c, // (c* a)* = a* c is a vector iff c* a is
            &self.d.star() * &self.b,
        ];
        products.iter().all(|p| p.is_vector(tol * p.norm().max(1.0)))
    }

    pub fn mat_mul(&self, rhs: &Self) -> Self {
        CliffordMatrix {
            a: &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            c: &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            d: &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        }
    }

    /// `T⁻¹ = [[d*, −b*], [−c*, a*]]`.
    pub fn mat_inverse(&self) -> Self {
        CliffordMatrix {
            a: self.d.star(),
            b: -&self.b.star(),
            c: -&self.c.star(),
            d: self.a.star(),
        }
    }

    pub fn conjugate_by(&self, h: &Self) -> Self {
        h.mat_mul(self).mat_mul(&h.mat_inverse())
    }

    pub fn neg(&self) -> Self {
        CliffordMatrix { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.a.approx_eq(&other.a, tol)
            && self.b.approx_eq(&other.b, tol)
            && self.c.approx_eq(&other.c, tol)
            && self.d.approx_eq(&other.d, tol)
    }

    /// Equality up to overall sign, the projective identification.
    pub fn approx_eq_up_to_sign(&self, other: &Self, tol: f64) -> bool {
        self.approx_eq(other, tol) || self.approx_eq(&other.neg(), tol)
    }

    /// Reinterprets the matrix inside `SL(2, C_{n+1})`; the boundary action
    /// extends and the classification kind is preserved.
    pub fn embed_next(&self) -> Self {
        let m = self.n() + 1;
        CliffordMatrix {
            a: self.a.embed(m),
            b: self.b.embed(m),
            c: self.c.embed(m),
            d: self.d.embed(m),
        }
    }

    /// The Möbius action `v ↦ (a v + b)(c v + d)⁻¹`, with poles routed to
    /// `∞` and `∞ ↦ a c⁻¹` (or `∞` when `c = 0`).
    pub fn apply(&self, z: &BoundaryPoint) -> BoundaryPoint {
        match z {
            BoundaryPoint::Infinity => {
                if self.c.norm() < EPS_POLE {
                    BoundaryPoint::Infinity
                } else {
                    let img = &self.a * &self.c.inverse().expect("c in Γ_n is invertible");
                    BoundaryPoint::Finite(project_vector(img))
                }
            }
            BoundaryPoint::Finite(v) => {
                let num = &(&self.a * v) + &self.b;
                let den = &(&self.c * v) + &self.d;
                if den.norm() < EPS_POLE {
                    return BoundaryPoint::Infinity;
                }
                let img = &num * &den.inverse().expect("nonzero denominator in Γ_n ∪ R^{n+1}");
                BoundaryPoint::Finite(project_vector(img))
            }
        }
    }
}

/// Zeroes the grade ≥ 2 residue left by round-off; the action of a valid
/// matrix lands on paravectors exactly.
fn project_vector(x: CliffordNumber) -> CliffordNumber {
    let parts = x.vector_parts();
    CliffordNumber::vector(x.n(), &parts)
}

fn diff(a: &CliffordNumber, b: &CliffordNumber) -> CliffordNumber {
    a - b
}

/// The Clifford cross-ratio
/// `[z1,z2,z3,z4] = (z1−z3)(z1−z2)⁻¹(z2−z4)(z3−z4)⁻¹`
/// extended to `∞` arguments by the continuous limits of this formula:
/// `(z1−z2)⁻¹(z2−z4) → −1` as `z2 → ∞` and likewise for the other slots,
/// so the `z2`/`z3` branches carry a −1 relative to their naive truncation.
/// These are the branch values under which the four cross-ratio identities
/// hold verbatim at infinity; the `z1 = ∞` case reduces via the product
/// identity `[z1,z2,z3,z4]·[z4,z2,z3,z1] = 1`.
///
/// `|[·]|` and `Re [·]` are Möbius invariants. The configuration is
/// degenerate exactly when a difference that must be inverted vanishes
/// (within `EPS_GEO`); coincidences that only zero a numerator yield 0.
pub fn cross_ratio(
    z1: &BoundaryPoint,
    z2: &BoundaryPoint,
    z3: &BoundaryPoint,
    z4: &BoundaryPoint,
) -> Result<CliffordNumber> {
    let infinities = [z1, z2, z3, z4].iter().filter(|p| p.is_infinity()).count();
    if infinities >= 2 {
        return Err(Error::DegenerateConfiguration("two of the four points are ∞".into()));
    }

    let inv = |x: CliffordNumber, label: &str| -> Result<CliffordNumber> {
        if x.norm() <= EPS_GEO {
            return Err(Error::DegenerateConfiguration(format!("{label} coincide")));
        }
        x.inverse()
    };

    match (z1, z2, z3, z4) {
        (BoundaryPoint::Infinity, _, _, _) => {
            // identity (2): [z1,z2,z3,z4][z4,z2,z3,z1] = 1
            let w = cross_ratio(z4, z2, z3, z1)?;
            inv(w, "z1=∞ reduction: [z4,z2,z3,∞]")
        }
        (BoundaryPoint::Finite(a), BoundaryPoint::Infinity, BoundaryPoint::Finite(c), BoundaryPoint::Finite(d)) => {
            // −(z1−z3)(z3−z4)⁻¹
            Ok(-&(&diff(a, c) * &inv(diff(c, d), "z3, z4")?))
        }
        (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b), BoundaryPoint::Infinity, BoundaryPoint::Finite(d)) => {
            // −(z1−z2)⁻¹(z2−z4)
            Ok(-&(&inv(diff(a, b), "z1, z2")? * &diff(b, d)))
        }
        (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b), BoundaryPoint::Finite(c), BoundaryPoint::Infinity) => {
            // (z1−z3)(z1−z2)⁻¹
            Ok(&diff(a, c) * &inv(diff(a, b), "z1, z2")?)
        }
        (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b), BoundaryPoint::Finite(c), BoundaryPoint::Finite(d)) => {
            let t1 = diff(a, c);
            let t2 = inv(diff(a, b), "z1, z2")?;
            let t3 = diff(b, d);
            let t4 = inv(diff(c, d), "z3, z4")?;
            Ok(&(&(&t1 * &t2) * &t3) * &t4)
        }
        // ≥ 2 infinities already returned above
        _ => Err(Error::DegenerateConfiguration("two of the four points are ∞".into())),
    }
}
