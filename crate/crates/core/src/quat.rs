//! Quaternion scalar and matrix arithmetic, the complex adjoint embedding
//! `χ : M(m, H) → M(2m, C)`, right eigenvalues with standard (nonnegative
//! imaginary part) representatives, and eigenvector extraction.
//!
//! Writing `q = a + j b` with complex `a = w + xi`, `b = y − zi`, the adjoint
//! is `χ(q) = [[a, −b̄],[b, ā]]`; it is multiplicative and `χ(A*) = χ(A)*`.
//! Eigen problems are solved on the realification of `χ(A)`, which keeps all
//! numerics inside the real solvers; each right-eigenvalue class `[λ]` shows
//! up there exactly four times, so class multiplicities come out of cluster
//! counts divided by four.

use crate::error::Error;
use crate::tol::{EPS_CLUSTER, EPS_EIG};
use crate::Result;
use nalgebra::{Complex, DMatrix, DVector};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A Hamilton quaternion `w + x i + y j + z k`.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }
    pub const fn zero() -> Self {
        Quaternion::new(0.0, 0.0, 0.0, 0.0)
    }
    pub const fn one() -> Self {
        Quaternion::new(1.0, 0.0, 0.0, 0.0)
    }
    pub const fn i() -> Self {
        Quaternion::new(0.0, 1.0, 0.0, 0.0)
    }
    pub const fn j() -> Self {
        Quaternion::new(0.0, 0.0, 1.0, 0.0)
    }
    pub const fn k() -> Self {
        Quaternion::new(0.0, 0.0, 0.0, 1.0)
    }
    pub fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }
    pub fn from_complex(c: Complex<f64>) -> Self {
        Quaternion::new(c.re, c.im, 0.0, 0.0)
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }
    pub fn norm_sq(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }
    pub fn is_zero(&self) -> bool {
        self.norm_sq() == 0.0
    }
    pub fn inverse(&self) -> Result<Self> {
        let ns = self.norm_sq();
        if ns == 0.0 {
            return Err(Error::NotInvertible);
        }
        Ok(self.conj().scale(1.0 / ns))
    }
    pub fn scale(&self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
    /// Complex pair `(a, b)` with `q = a + j b`, `a = w + xi`, `b = y − zi`.
    pub fn complex_pair(&self) -> (Complex<f64>, Complex<f64>) {
        (Complex::new(self.w, self.x), Complex::new(self.y, -self.z))
    }
    pub fn from_complex_pair(a: Complex<f64>, b: Complex<f64>) -> Self {
        Quaternion::new(a.re, a.im, b.re, -b.im)
    }
    /// Magnitude of the `j, k` components: 0 for complex numbers.
    pub fn non_complex_mass(&self) -> f64 {
        (self.y * self.y + self.z * self.z).sqrt()
    }
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (*self - *other).norm() <= tol
    }
    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}
impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}
impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        )
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z)
    }
}

// JSON encoding: [w, x, y, z]
impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.w, self.x, self.y, self.z].serialize(s)
    }
}
impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = <Vec<f64>>::deserialize(d)?;
        if v.len() != 4 {
            return Err(D::Error::custom("quaternion needs exactly [w, x, y, z]"));
        }
        Ok(Quaternion::new(v[0], v[1], v[2], v[3]))
    }
}

/// A dense quaternionic matrix (row-major).
#[derive(Clone, PartialEq)]
pub struct QuatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QuatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QuatMatrix { rows, cols, data: vec![Quaternion::zero(); rows * cols] }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Quaternion::one();
        }
        m
    }
    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(QuatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }
    pub fn diagonal(diag: &[Quaternion]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, q) in diag.iter().enumerate() {
            m[(i, i)] = *q;
        }
        m
    }
    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} · {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Quaternion::zero();
                for t in 0..self.cols {
                    acc = acc + self[(i, t)] * rhs[(t, j)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::ShapeMismatch("addition of unequal shapes".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a = *a + *b;
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::ShapeMismatch("subtraction of unequal shapes".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a = *a - *b;
        }
        Ok(out)
    }

    /// Conjugate transpose `T* = T̄ᵗ`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for q in &mut out.data {
            *q = q.scale(s);
        }
        out
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> bool {
        (self.rows, self.cols) == (rhs.rows, rhs.cols) && self.max_abs_diff(rhs) <= tol
    }

    pub fn max_entry_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// True when every entry is complex (vanishing `j, k` parts): the
    /// `SU(n,1)` path.
    pub fn is_complex(&self, tol: f64) -> bool {
        self.data.iter().all(|q| q.non_complex_mass() <= tol)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Quaternion> {
        self.data.iter()
    }

    /// The complex adjoint `χ(A)` as a `2m×2m` complex matrix.
    pub fn chi(&self) -> DMatrix<Complex<f64>> {
        let (r, c) = (self.rows, self.cols);
        let mut out = DMatrix::zeros(2 * r, 2 * c);
        for i in 0..r {
            for j in 0..c {
                let (a, b) = self[(i, j)].complex_pair();
                out[(i, j)] = a;
                out[(i, c + j)] = -b.conj();
                out[(r + i, j)] = b;
                out[(r + i, c + j)] = a.conj();
            }
        }
        out
    }

    /// Left inverse of [`Self::chi`]: recovers the quaternionic matrix and
    /// verifies the adjoint block structure within `tol`.
    pub fn from_chi(z: &DMatrix<Complex<f64>>, tol: f64) -> Result<Self> {
        if z.nrows() % 2 != 0 || z.ncols() % 2 != 0 {
            return Err(Error::ShapeMismatch("χ image must have even dimensions".into()));
        }
        let (r, c) = (z.nrows() / 2, z.ncols() / 2);
        let mut out = Self::zeros(r, c);
        let mut defect = 0.0f64;
        for i in 0..r {
            for j in 0..c {
                let a = z[(i, j)];
                let b = z[(r + i, j)];
                defect = defect.max((z[(i, c + j)] + b.conj()).norm());
                defect = defect.max((z[(r + i, c + j)] - a.conj()).norm());
                out[(i, j)] = Quaternion::from_complex_pair(a, b);
            }
        }
        if defect > tol {
            return Err(Error::InvalidInput(format!(
                "matrix is not in the image of χ (block defect {defect:.3e})"
            )));
        }
        Ok(out)
    }

    /// Inverse through the realified adjoint.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let real = realify(&self.chi());
        let inv = real
            .full_piv_lu()
            .try_inverse()
            .ok_or(Error::NotInvertible)?;
        Self::from_chi(&complexify(&inv), 1e-6 * self.max_entry_norm().max(1.0))
    }

    /// Operator 2-norm via the singular values of the complex adjoint.
    pub fn operator_norm(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        let real = realify(&self.chi());
        real.svd(false, false).singular_values.max()
    }

    /// Applies the matrix to a quaternionic column.
    pub fn apply(&self, v: &[Quaternion]) -> Result<Vec<Quaternion>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch("matrix–vector size mismatch".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Quaternion::zero();
                for t in 0..self.cols {
                    acc = acc + self[(i, t)] * v[t];
                }
                acc
            })
            .collect())
    }
}

impl std::ops::Index<(usize, usize)> for QuatMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.data[i * self.cols + j]
    }
}
impl std::ops::IndexMut<(usize, usize)> for QuatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QuatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QuatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?}  ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// row-major nested arrays of [w,x,y,z]
impl Serialize for QuatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Quaternion>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)]).collect())
            .collect();
        rows.serialize(s)
    }
}
impl<'de> Deserialize<'de> for QuatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = <Vec<Vec<Quaternion>>>::deserialize(d)?;
        QuatMatrix::from_rows(rows).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// `[[Re, −Im],[Im, Re]]` realification of a complex matrix.
pub fn realify(z: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    let (r, c) = (z.nrows(), z.ncols());
    let mut out = DMatrix::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let v = z[(i, j)];
            out[(i, j)] = v.re;
            out[(i, c + j)] = -v.im;
            out[(r + i, j)] = v.im;
            out[(r + i, c + j)] = v.re;
        }
    }
    out
}

/// Reads the complex matrix back out of its realification.
pub fn complexify(m: &DMatrix<f64>) -> DMatrix<Complex<f64>> {
    let (r, c) = (m.nrows() / 2, m.ncols() / 2);
    DMatrix::from_fn(r, c, |i, j| Complex::new(m[(i, j)], m[(r + i, j)]))
}

/// A real null vector of the realification, reinterpreted as the complex
/// vector it represents.
fn complex_vector_from_real(x: &DVector<f64>) -> DVector<Complex<f64>> {
    let half = x.len() / 2;
    DVector::from_fn(half, |i, _| Complex::new(x[i], x[half + i]))
}

/// Right-eigenvalue classes of a square quaternionic matrix: standard
/// representatives (nonnegative imaginary part, zero `j,k` components) with
/// class multiplicities summing to the matrix size.
///
/// Clustering starts at `EPS_EIG` and widens (up to `EPS_CLUSTER`·10) until
/// every cluster count is divisible by 4, which absorbs the noise circle an
/// eigensolver spreads around a defective eigenvalue.
pub fn right_eigenvalues(a: &QuatMatrix) -> Result<Vec<(Quaternion, usize)>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("right eigenvalues of non-square matrix".into()));
    }
    let m = a.nrows();
    if m == 0 {
        return Ok(Vec::new());
    }
    let real = realify(&a.chi());
    let eigs = crate::linalg::complex_eigenvalues_robust(&real);
    let pts: Vec<(f64, f64)> = eigs.iter().map(|e| (e.re, e.im.abs())).collect();

    let mut radius = EPS_EIG;
    while radius <= EPS_CLUSTER * 10.0 + 1e-18 {
        let clusters = cluster_points(&pts, radius);
        if clusters.iter().all(|c| c.2 % 4 == 0) {
            let mut out: Vec<(Quaternion, usize)> = clusters
                .into_iter()
                .map(|(re, im, n)| (Quaternion::new(re, im.max(0.0), 0.0, 0.0), n / 4))
                .collect();
            let total: usize = out.iter().map(|e| e.1).sum();
            if total == m {
                out.sort_by(|a, b| {
                    (b.0.w, b.0.x).partial_cmp(&(a.0.w, a.0.x)).expect("finite eigenvalues")
                });
                return Ok(out);
            }
        }
        radius *= 10.0;
    }
    Err(Error::InvalidInput("eigenvalue clustering failed".into()))
}

fn cluster_points(pts: &[(f64, f64)], radius: f64) -> Vec<(f64, f64, usize)> {
    let mut sorted = pts.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut clusters: Vec<(f64, f64, usize)> = Vec::new();
    for (re, im) in sorted {
        let mut placed = false;
        for c in clusters.iter_mut() {
            let d = ((c.0 - re).powi(2) + (c.1 - im).powi(2)).sqrt();
            if d <= radius {
                let k = c.2 as f64;
                c.0 = (c.0 * k + re) / (k + 1.0);
                c.1 = (c.1 * k + im) / (k + 1.0);
                c.2 += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            clusters.push((re, im, 1));
        }
    }
    clusters
}

/// One right eigenvector for the representative `λ`: `A v = v λ`.
pub fn eigvec_for(a: &QuatMatrix, lambda: &Quaternion) -> Result<Vec<Quaternion>> {
    let basis = eigenspace_basis(a, lambda, 1)?;
    basis.into_iter().next().ok_or_else(|| Error::NotInSpectrum(format!("{lambda:?}")))
}

/// A set of eigenvectors spanning (over H) the class eigenspace of `λ`,
/// taken from the numerical null space of `χ(A) − λI`. `min_count` lower
/// singular directions are returned even if the residual test must arbitrate
/// later.
pub fn eigenspace_basis(a: &QuatMatrix, lambda: &Quaternion, min_count: usize) -> Result<Vec<Vec<Quaternion>>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("eigenvector of non-square matrix".into()));
    }
    if lambda.non_complex_mass() > 1e-12 {
        return Err(Error::InvalidInput("eigenvalue representative must be complex".into()));
    }
    let m = a.nrows();
    let mu = Complex::new(lambda.w, lambda.x);
    let mut chi = a.chi();
    for i in 0..2 * m {
        chi[(i, i)] -= mu;
    }
    let real = realify(&chi);
    let svd = real.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("svd with v requested");
    let smax = svd.singular_values.max().max(1.0);
    let scale = a.max_entry_norm().max(1.0);

    let mut picks: Vec<usize> = (0..svd.singular_values.len())
        .filter(|i| svd.singular_values[*i] <= 1e-7 * smax)
        .collect();
    if picks.len() < min_count {
        // fall back to the smallest singular directions
        let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
        idx.sort_by(|x, y| {
            svd.singular_values[*x].partial_cmp(&svd.singular_values[*y]).expect("finite")
        });
        picks = idx.into_iter().take(min_count).collect();
    }

    let mut out = Vec::new();
    for i in picks {
        let real_vec = v_t.row(i).transpose();
        let cvec = complex_vector_from_real(&real_vec);
        let v: Vec<Quaternion> = (0..m)
            .map(|t| Quaternion::from_complex_pair(cvec[t], cvec[m + t]))
            .collect();
        // residual check |Av − vλ|
        let av = a.apply(&v)?;
        let res: f64 = av
            .iter()
            .zip(&v)
            .map(|(x, y)| (*x - *y * *lambda).norm_sq())
            .sum::<f64>()
            .sqrt();
        if res > 1e-6 * scale {
            continue;
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::NotInSpectrum(format!("{lambda:?}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_quat(rng: &mut ChaCha8Rng) -> Quaternion {
        Quaternion::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
    }

    fn random_mat(rng: &mut ChaCha8Rng, n: usize) -> QuatMatrix {
        let mut m = QuatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = random_quat(rng);
            }
        }
        m
    }

    #[test]
    fn hamilton_relations() {
        let (i, j, k) = (Quaternion::i(), Quaternion::j(), Quaternion::k());
        assert!((i * j).approx_eq(&k, 0.0));
        assert!((j * k).approx_eq(&i, 0.0));
        assert!((k * i).approx_eq(&j, 0.0));
        assert!((i * i).approx_eq(&-Quaternion::one(), 0.0));
        let q = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        assert!(q.inverse().unwrap().approx_eq(&Quaternion::new(0.5, -0.5, 0.0, 0.0), 0.0));
        assert!(Quaternion::zero().inverse().is_err());
    }

    #[test]
    fn adjoint_antihomomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let a = random_mat(&mut rng, 3);
            let b = random_mat(&mut rng, 3);
            let lhs = a.mul(&b).unwrap().adjoint();
            let rhs = b.adjoint().mul(&a.adjoint()).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn chi_is_multiplicative_and_star_compatible() {
        assert_eq!(QuatMatrix::identity(2).chi(), DMatrix::identity(4, 4));
        // χ(j) is the [[0,−1],[1,0]] block
        let j = QuatMatrix::from_rows(vec![vec![Quaternion::j()]]).unwrap();
        let cj = j.chi();
        assert_eq!(cj[(0, 0)], Complex::new(0.0, 0.0));
        assert_eq!(cj[(0, 1)], Complex::new(-1.0, 0.0));
        assert_eq!(cj[(1, 0)], Complex::new(1.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let a = random_mat(&mut rng, 2);
            let b = random_mat(&mut rng, 2);
            let prod = a.mul(&b).unwrap().chi();
            let split = a.chi() * b.chi();
            assert!((prod - split).map(|c| c.norm()).max() < 1e-12);
            let star = a.adjoint().chi();
            let conj_t = a.chi().adjoint();
            assert!((star - conj_t).map(|c| c.norm()).max() < 1e-12);
            // round trip
            let back = QuatMatrix::from_chi(&a.chi(), 1e-12).unwrap();
            assert!(back.max_abs_diff(&a) < 1e-12);
        }
    }

    #[test]
    fn right_eigenvalue_examples() {
        // diag(i, j): both classes are similar to i
        let m = QuatMatrix::diagonal(&[Quaternion::i(), Quaternion::j()]);
        let eigs = right_eigenvalues(&m).unwrap();
        let total: usize = eigs.iter().map(|e| e.1).sum();
        assert_eq!(total, 2);
        for (rep, _) in &eigs {
            assert!(rep.approx_eq(&Quaternion::i(), 1e-9), "rep {rep:?}");
        }

        let m = QuatMatrix::diagonal(&[Quaternion::real(2.0), Quaternion::real(0.5)]);
        let eigs = right_eigenvalues(&m).unwrap();
        assert_eq!(eigs.len(), 2);
        assert!(eigs[0].0.approx_eq(&Quaternion::real(2.0), 1e-9));
        assert!(eigs[1].0.approx_eq(&Quaternion::real(0.5), 1e-9));
    }

    #[test]
    fn right_eigenvalues_invariant_under_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let d = QuatMatrix::diagonal(&[
            Quaternion::real(1.5),
            Quaternion::new(0.6, 0.8, 0.0, 0.0),
            Quaternion::real(1.0),
        ]);
        for _ in 0..5 {
            let p = random_mat(&mut rng, 3);
            let Ok(pinv) = p.inverse() else { continue };
            let conj = p.mul(&d).unwrap().mul(&pinv).unwrap();
            let mut reps: Vec<(Quaternion, usize)> = right_eigenvalues(&conj).unwrap();
            let mut expect = right_eigenvalues(&d).unwrap();
            reps.sort_by(|a, b| (a.0.w, a.0.x).partial_cmp(&(b.0.w, b.0.x)).unwrap());
            expect.sort_by(|a, b| (a.0.w, a.0.x).partial_cmp(&(b.0.w, b.0.x)).unwrap());
            assert_eq!(reps.len(), expect.len());
            for (got, want) in reps.iter().zip(&expect) {
                assert!(got.0.approx_eq(&want.0, 1e-6), "{got:?} vs {want:?}");
                assert_eq!(got.1, want.1);
            }
        }
    }

    #[test]
    fn eigvec_extraction() {
        let m = QuatMatrix::diagonal(&[Quaternion::real(2.0), Quaternion::real(0.5)]);
        let v = eigvec_for(&m, &Quaternion::real(2.0)).unwrap();
        assert!(v[1].norm() < 1e-9 && v[0].norm() > 0.9);
        assert!(eigvec_for(&m, &Quaternion::real(3.0)).is_err());

        // residual for a conjugated matrix and right-eigenvalue covariance
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let p = random_mat(&mut rng, 2);
        let conj = p.mul(&m).unwrap().mul(&p.inverse().unwrap()).unwrap();
        let v = eigvec_for(&conj, &Quaternion::real(2.0)).unwrap();
        let av = conj.apply(&v).unwrap();
        let res: f64 = av.iter().zip(&v).map(|(a, b)| (*a - *b * Quaternion::real(2.0)).norm_sq()).sum();
        assert!(res.sqrt() < 1e-8);
        // v·q is an eigenvector for q⁻¹ λ q; with λ real the class is fixed
        let q = random_quat(&mut rng);
        let vq: Vec<Quaternion> = v.iter().map(|x| *x * q).collect();
        let avq = conj.apply(&vq).unwrap();
        let res2: f64 = avq.iter().zip(&vq).map(|(a, b)| (*a - *b * Quaternion::real(2.0)).norm_sq()).sum();
        assert!(res2.sqrt() < 1e-8 * q.norm().max(1.0));
    }

    #[test]
    fn inverse_and_operator_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for _ in 0..5 {
            let a = random_mat(&mut rng, 3);
            if let Ok(inv) = a.inverse() {
                let prod = a.mul(&inv).unwrap();
                assert!(prod.max_abs_diff(&QuatMatrix::identity(3)) < 1e-9);
            }
        }
        // operator norm of a diagonal real matrix is the largest |entry|
        let d = QuatMatrix::diagonal(&[Quaternion::real(3.0), Quaternion::real(-0.5)]);
        assert!((d.operator_norm() - 3.0).abs() < 1e-12);
    }
}
