//! The Clifford algebra `C_n` with generators `i_1, …, i_n` subject to
//! `i_t i_s = -i_s i_t` (t ≠ s) and `i_t² = -1`, its three involutions, the
//! vector subspace `R^{n+1}` of paravectors `a_0 + a_1 i_1 + … + a_n i_n`,
//! and the Clifford group `Γ_n` of products of non-zero vectors.
//!
//! Blades are encoded as bitmasks (bit `t-1` set ⇔ `i_t` present); the
//! coefficient table is dense, indexed by the mask. Product signs are
//! computed by transposition counting, so a blade product is O(1).

use crate::error::Error;
use crate::tol::{EPS_ALG, EPS_ZERO};
use crate::Result;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Largest supported generator count. 2^16 coefficients is already far
/// beyond what the geometry here needs (n ≤ 3 in practice).
pub const MAX_GENERATORS: u32 = 16;

/// Sign produced by moving every generator of `a` past the generators of `b`
/// into canonical increasing order.
fn reorder_sign(a: u32, b: u32) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Product of two basis blades: resulting mask and sign. Each shared
/// generator contributes a factor `i_t² = -1`.
#[inline]
fn blade_mul(a: u32, b: u32) -> (u32, f64) {
    let mut sign = reorder_sign(a, b);
    if (a & b).count_ones() & 1 == 1 {
        sign = -sign;
    }
    (a ^ b, sign)
}

/// Grade (number of generators) of a blade mask.
#[inline]
fn grade(mask: u32) -> u32 {
    mask.count_ones()
}

/// An element of the Clifford algebra `C_n`.
#[derive(Clone, PartialEq)]
pub struct CliffordNumber {
    n: u32,
    /// Dense coefficient table, `coeffs[mask]` is the coefficient of the
    /// blade with that generator mask. `coeffs[0]` is the scalar part.
    coeffs: Vec<f64>,
}

impl CliffordNumber {
    pub fn zero(n: u32) -> Self {
        assert!(n <= MAX_GENERATORS, "generator count {n} exceeds {MAX_GENERATORS}");
        CliffordNumber { n, coeffs: vec![0.0; 1 << n] }
    }

    pub fn scalar(n: u32, value: f64) -> Self {
        let mut c = Self::zero(n);
        c.coeffs[0] = value;
        c.canonicalize();
        c
    }

    pub fn one(n: u32) -> Self {
        Self::scalar(n, 1.0)
    }

    /// The generator `i_k`, `k` in `1..=n`.
    pub fn generator(n: u32, k: u32) -> Self {
        assert!(k >= 1 && k <= n, "generator index {k} out of 1..={n}");
        let mut c = Self::zero(n);
        c.coeffs[1 << (k - 1)] = 1.0;
        c
    }

    /// Builds an element from `(mask, coefficient)` pairs.
    pub fn from_terms(n: u32, terms: &[(u32, f64)]) -> Self {
        let mut c = Self::zero(n);
        for &(mask, v) in terms {
            assert!(mask < (1u32 << n) || mask == 0, "blade mask {mask:#x} out of range for n={n}");
            c.coeffs[mask as usize] += v;
        }
        c.canonicalize();
        c
    }

    /// Builds the paravector `parts[0] + parts[1] i_1 + … + parts[n] i_n`.
    pub fn vector(n: u32, parts: &[f64]) -> Self {
        assert!(parts.len() == n as usize + 1, "vector needs n+1 components");
        let mut c = Self::zero(n);
        c.coeffs[0] = parts[0];
        for k in 1..=n {
            c.coeffs[1 << (k - 1)] = parts[k as usize];
        }
        c.canonicalize();
        c
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Coefficient on a blade mask (0 if out of range).
    pub fn coeff(&self, mask: u32) -> f64 {
        self.coeffs.get(mask as usize).copied().unwrap_or(0.0)
    }

    pub fn real_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Components `(a_0, a_1, …, a_n)` of the grade ≤ 1 part.
    pub fn vector_parts(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n as usize + 1);
        out.push(self.coeffs[0]);
        for k in 1..=self.n {
            out.push(self.coeffs[1 << (k - 1)]);
        }
        out
    }

    /// Drops coefficients below `EPS_ZERO`.
    pub fn canonicalize(&mut self) {
        for c in &mut self.coeffs {
            if c.abs() < EPS_ZERO {
                *c = 0.0;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.abs() < EPS_ZERO)
    }

    /// Euclidean norm of the coefficient table.
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Largest coefficient magnitude on blades of grade ≥ 2.
    pub fn non_vector_mass(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(m, _)| grade(*m as u32) >= 2)
            .map(|(_, c)| c.abs())
            .fold(0.0, f64::max)
    }

    /// True iff all grade ≥ 2 coefficients are at most `tol` in magnitude.
    pub fn is_vector(&self, tol: f64) -> bool {
        self.non_vector_mass() <= tol
    }

    /// True iff the element is a real scalar within `tol`.
    pub fn is_scalar(&self, tol: f64) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, c)| m == 0 || c.abs() <= tol)
    }

    /// Reinterprets the same element inside `C_m`, `m ≥ n`.
    pub fn embed(&self, m: u32) -> Self {
        assert!(m >= self.n && m <= MAX_GENERATORS);
        let mut out = Self::zero(m);
        out.coeffs[..self.coeffs.len()].copy_from_slice(&self.coeffs);
        out
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// The full bilinear product under the defining relations.
    pub fn mul_checked(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let mut out = Self::zero(self.n);
        for (ma, ca) in self.coeffs.iter().enumerate() {
            if *ca == 0.0 {
                continue;
            }
            for (mb, cb) in other.coeffs.iter().enumerate() {
                if *cb == 0.0 {
                    continue;
                }
                let (m, s) = blade_mul(ma as u32, mb as u32);
                out.coeffs[m as usize] += s * ca * cb;
            }
        }
        out.canonicalize();
        Ok(out)
    }

    /// Reversal `*`: each blade `i_{v_1}…i_{v_k}` is rewritten backwards,
    /// i.e. multiplied by `(-1)^{k(k-1)/2}`. Anti-automorphism.
    pub fn star(&self) -> Self {
        self.signed_involution(|k| (k * (k.wrapping_sub(1)) / 2) & 1 == 1)
    }

    /// Main involution `'`: replaces `i_k` by `-i_k`, i.e. sign `(-1)^k`.
    /// Automorphism.
    pub fn prime(&self) -> Self {
        self.signed_involution(|k| k & 1 == 1)
    }

    /// Conjugation `ā = (a*)' = (a')*`, sign `(-1)^{k(k+1)/2}`.
    pub fn bar(&self) -> Self {
        self.signed_involution(|k| (k * (k + 1) / 2) & 1 == 1)
    }

    fn signed_involution(&self, negate: impl Fn(u32) -> bool) -> Self {
        let mut out = self.clone();
        for (m, c) in out.coeffs.iter_mut().enumerate() {
            if negate(grade(m as u32)) {
                *c = -*c;
            }
        }
        out
    }

    /// Inverse. Vectors use `v⁻¹ = v̄ / |v|²` exactly; Clifford-group
    /// elements use `a·ā = |a|²` (a positive scalar); anything else falls
    /// back to solving the 2ⁿ×2ⁿ regular representation.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        // Fast paths first: they cover every inverse the geometry takes.
        if self.is_vector(EPS_ZERO) {
            let ns = self.norm_sq();
            return Ok(self.bar().scale(1.0 / ns));
        }
        let abar = self.mul_checked(&self.bar())?;
        let s = abar.real_part();
        if s.abs() > EPS_ZERO && abar.is_scalar(EPS_ALG * self.norm_sq().max(1.0)) {
            return Ok(self.bar().scale(1.0 / s));
        }
        self.inverse_regular_rep()
    }

    /// Solves `a · x = 1` through the left-multiplication matrix of `a`.
    fn inverse_regular_rep(&self) -> Result<Self> {
        let dim = 1usize << self.n;
        let mut l = nalgebra::DMatrix::<f64>::zeros(dim, dim);
        for (ma, ca) in self.coeffs.iter().enumerate() {
            if *ca == 0.0 {
                continue;
            }
            for mb in 0..dim {
                let (m, s) = blade_mul(ma as u32, mb as u32);
                l[(m as usize, mb)] += s * ca;
            }
        }
        let rhs = nalgebra::DVector::<f64>::from_fn(dim, |i, _| if i == 0 { 1.0 } else { 0.0 });
        let lu = l.full_piv_lu();
        match lu.solve(&rhs) {
            Some(x) => {
                let mut out = Self::zero(self.n);
                out.coeffs.copy_from_slice(x.as_slice());
                out.canonicalize();
                // In a finite-dimensional unital algebra a right inverse is
                // two-sided, but the solve can go through near singularity.
                let check = self.mul_checked(&out)?;
                let dev = (&check - &Self::one(self.n)).norm();
                if dev > EPS_ALG * self.norm().max(1.0) {
                    return Err(Error::NotInvertible);
                }
                Ok(out)
            }
            None => Err(Error::NotInvertible),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s;
        }
        out.canonicalize();
        out
    }

    /// Membership in the Clifford group `Γ_n`, the products of non-zero
    /// vectors. The paper defines `Γ_n` non-constructively, so the test uses
    /// the Lipschitz-group characterization: `a ā` is a positive real scalar
    /// and the twisted conjugation `x ↦ a x (a')⁻¹` maps every basis
    /// paravector to a paravector.
    pub fn gamma_member(&self, tol: f64) -> bool {
        if self.is_zero() {
            return false;
        }
        let abar = match self.mul_checked(&self.bar()) {
            Ok(v) => v,
            Err(_) => return false,
        };
        let scale = self.norm_sq().max(1.0);
        if abar.real_part() <= tol || !abar.is_scalar(tol * scale) {
            return false;
        }
        let pinv = match self.prime().inverse() {
            Ok(v) => v,
            Err(_) => return false,
        };
        let mut basis = vec![Self::one(self.n)];
        for k in 1..=self.n {
            basis.push(Self::generator(self.n, k));
        }
        for e in &basis {
            let conj = match self.mul_checked(e).and_then(|ae| ae.mul_checked(&pinv)) {
                Ok(v) => v,
                Err(_) => return false,
            };
            if !conj.is_vector(tol * conj.norm().max(1.0)) {
                return false;
            }
        }
        true
    }

    /// Max absolute difference of coefficient tables.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n && self.max_abs_diff(other) <= tol
    }

    /// Nonzero `(mask, coefficient)` pairs in mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(m, c)| (m as u32, *c))
    }
}

impl fmt::Debug for CliffordNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if mask == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}·")?;
                for k in 1..=self.n {
                    if mask & (1 << (k - 1)) != 0 {
                        write!(f, "i{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CliffordNumber {
    type Output = CliffordNumber;
    fn add(self, rhs: &CliffordNumber) -> CliffordNumber {
        assert_eq!(self.n, rhs.n, "dimension mismatch in +");
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        out.canonicalize();
        out
    }
}

impl Sub for &CliffordNumber {
    type Output = CliffordNumber;
    fn sub(self, rhs: &CliffordNumber) -> CliffordNumber {
        assert_eq!(self.n, rhs.n, "dimension mismatch in -");
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        out.canonicalize();
        out
    }
}

impl Neg for &CliffordNumber {
    type Output = CliffordNumber;
    fn neg(self) -> CliffordNumber {
        self.scale(-1.0)
    }
}

impl Mul for &CliffordNumber {
    type Output = CliffordNumber;
    fn mul(self, rhs: &CliffordNumber) -> CliffordNumber {
        self.mul_checked(rhs).expect("dimension mismatch in *")
    }
}

/// A Clifford number constrained to the paravector subspace `R^{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordVector(CliffordNumber);

impl CliffordVector {
    pub fn new(inner: CliffordNumber) -> Result<Self> {
        if !inner.is_vector(EPS_ALG * inner.norm().max(1.0)) {
            return Err(Error::InvalidInput("support is not grade ≤ 1".into()));
        }
        let mut v = inner;
        // Zero out the residue so the invariant holds exactly.
        for (m, c) in v.coeffs.iter_mut().enumerate() {
            if grade(m as u32) >= 2 {
                *c = 0.0;
            }
        }
        Ok(CliffordVector(v))
    }

    pub fn from_parts(n: u32, parts: &[f64]) -> Self {
        CliffordVector(CliffordNumber::vector(n, parts))
    }

    pub fn as_number(&self) -> &CliffordNumber {
        &self.0
    }

    pub fn into_number(self) -> CliffordNumber {
        self.0
    }
}

// --- JSON encoding -------------------------------------------------------
//
// {"n": 2, "terms": [{"blade": [], "c": 1.0}, {"blade": [1,2], "c": -0.25}]}
// Blades are strictly increasing 1-based generator lists; [] is the scalar.

#[derive(Serialize, Deserialize)]
struct TermRepr {
    blade: Vec<u32>,
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct NumberRepr {
    n: u32,
    terms: Vec<TermRepr>,
}

fn mask_to_blade(mask: u32) -> Vec<u32> {
    (1..=32).filter(|k| mask & (1 << (k - 1)) != 0).collect()
}

fn blade_to_mask(blade: &[u32], n: u32) -> std::result::Result<u32, String> {
    let mut mask = 0u32;
    let mut prev = 0u32;
    for &k in blade {
        if k < 1 || k > n {
            return Err(format!("generator index {k} out of 1..={n}"));
        }
        if k <= prev {
            return Err("blade indices must be strictly increasing".into());
        }
        prev = k;
        mask |= 1 << (k - 1);
    }
    Ok(mask)
}

impl Serialize for CliffordNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms()
            .map(|(mask, c)| TermRepr { blade: mask_to_blade(mask), c })
            .collect();
        NumberRepr { n: self.n, terms }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CliffordNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = NumberRepr::deserialize(deserializer)?;
        if repr.n > MAX_GENERATORS {
            return Err(D::Error::custom(format!("n={} exceeds {MAX_GENERATORS}", repr.n)));
        }
        let mut out = CliffordNumber::zero(repr.n);
        for t in &repr.terms {
            let mask = blade_to_mask(&t.blade, repr.n).map_err(D::Error::custom)?;
            out.coeffs[mask as usize] += t.c;
        }
        out.canonicalize();
        Ok(out)
    }
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Brute-force sign-counting product used as an independent oracle:
    //! blades are index lists, products concatenate and bubble-sort with an
    //! explicit sign flip per adjacent transposition and a `-1` per removed
    //! equal pair.

    use std::collections::BTreeMap;

    pub fn blade_product(a: &[u32], b: &[u32]) -> (Vec<u32>, f64) {
        let mut seq: Vec<u32> = a.iter().chain(b.iter()).copied().collect();
        let mut sign = 1.0;
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < seq.len() {
                if seq[i] == seq[i + 1] {
                    // i_t · i_t = -1
                    seq.drain(i..=i + 1);
                    sign = -sign;
                    changed = true;
                } else if seq[i] > seq[i + 1] {
                    seq.swap(i, i + 1);
                    sign = -sign;
                    changed = true;
                    i += 1;
                } else {
                    i += 1;
                }
            }
            if !changed {
                break;
            }
        }
        (seq, sign)
    }

    pub type Sparse = BTreeMap<Vec<u32>, f64>;

    pub fn to_sparse(x: &super::CliffordNumber) -> Sparse {
        x.terms().map(|(m, c)| (super::mask_to_blade(m), c)).collect()
    }

    pub fn mul(a: &Sparse, b: &Sparse) -> Sparse {
        let mut out = Sparse::new();
        for (ba, ca) in a {
            for (bb, cb) in b {
                let (blade, sign) = blade_product(ba, bb);
                *out.entry(blade).or_insert(0.0) += sign * ca * cb;
            }
        }
        out
    }

    pub fn max_diff(a: &Sparse, b: &Sparse) -> f64 {
        let mut keys: Vec<&Vec<u32>> = a.keys().chain(b.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
            .fold(0.0, f64::max)
    }
}
