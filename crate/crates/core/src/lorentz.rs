//! Lorentz-model bridge: represents a Clifford–Möbius map as a matrix
//! preserving the Minkowski form `q = diag(1,…,1,−1)` on `R^{n+2,1}`,
//! classifies isometries from the spectrum, and extracts rotation angles,
//! the translation length `τ`, the maximal angle `Θ`, the conjugacy
//! invariant `β`, and boundary fixed points.
//!
//! Reconstruction evaluates the boundary action on a frame of `n+3` points,
//! lifts the images to null rays, matches the Minkowski Gram matrix to fix
//! the per-ray scales, and solves for the matrix. This avoids symbolic
//! Vahlen-to-orthogonal formulas, is uniform in `n`, and self-validates via
//! `MᵀqM = q` plus a held-out action check.

use crate::clifford::CliffordNumber;
use crate::error::Error;
use crate::kind::Kind;
use crate::mobius::{BoundaryPoint, CliffordMatrix};
use crate::sampling;
use crate::tol::{EPS_CLUSTER, EPS_GEO, EPS_LOR, EPS_LOX_DETECT, EPS_NULLSPACE, K_RETRY};
use crate::Result;
use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Seed for the reconstruction's retry frames. The first frame is a fixed
/// canonical one, so results are deterministic end to end.
const FRAME_SEED: u64 = 0x48595044;

/// Snap threshold: eigenvalue-cluster arguments below this count as angle 0.
const ANGLE_SNAP: f64 = 1e-6;

/// Frame images farther out than this are rejected as ill-conditioned.
const MAX_IMAGE_NORM: f64 = 1e6;

/// A real `(n+3)×(n+3)` matrix with `MᵀqM = q`, `q = diag(1,…,1,−1)`,
/// preserving the future light cone.
#[derive(Clone, Debug)]
pub struct LorentzMatrix {
    pub n: u32,
    pub m: DMatrix<f64>,
}

/// Conjugacy data of an isometry. `β = 4 sinh²(τ/2) + 4 sin²(Θ/2)` for
/// loxodromic elements and `4 sin²(Θ/2)` for elliptic or parabolic ones.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsometryInvariants {
    pub kind: Kind,
    /// Rotation angles in `(−π, π]`, one per plane, zero-padded to the
    /// structural count.
    pub angles: Vec<f64>,
    /// `Θ = max |θ_i]` over the rotation angles.
    pub theta: f64,
    /// Hyperbolic translation length between the fixed points,
    /// `ln(largest Lorentz eigenvalue)`; 0 unless loxodromic.
    pub tau: f64,
    pub beta: f64,
}

impl IsometryInvariants {
    fn beta_of(kind: Kind, tau: f64, theta: f64) -> f64 {
        let rot = 4.0 * (theta / 2.0).sin().powi(2);
        if kind == Kind::Loxodromic {
            4.0 * (tau / 2.0).sinh().powi(2) + rot
        } else {
            rot
        }
    }
}

/// Minkowski inner product `Σ x_i y_i − x_t y_t`.
pub fn minkowski(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let d = x.len();
    let mut s = 0.0;
    for i in 0..d - 1 {
        s += x[i] * y[i];
    }
    s - x[d - 1] * y[d - 1]
}

/// Lifts a boundary point to the future null cone. Finite `z` maps to
/// `(z, (1−|z|²)/2, (1+|z|²)/2)`; `∞` maps to `(0,…,0,−1,1)`, the ray
/// opposite to `lift(0)`.
pub fn lift(z: &BoundaryPoint, n: u32) -> DVector<f64> {
    let dim = n as usize + 3;
    let mut x = DVector::zeros(dim);
    match z {
        BoundaryPoint::Infinity => {
            x[dim - 2] = -1.0;
            x[dim - 1] = 1.0;
        }
        BoundaryPoint::Finite(v) => {
            let parts = v.vector_parts();
            let ns = v.norm_sq();
            for (i, p) in parts.iter().enumerate() {
                x[i] = *p;
            }
            x[dim - 2] = (1.0 - ns) / 2.0;
            x[dim - 1] = (1.0 + ns) / 2.0;
        }
    }
    x
}

/// Projects a future null vector back to the boundary.
pub fn drop_null(x: &DVector<f64>, n: u32) -> Result<BoundaryPoint> {
    let dim = n as usize + 3;
    let scale = x.norm();
    if scale == 0.0 {
        return Err(Error::InvalidInput("zero vector has no boundary point".into()));
    }
    let q = minkowski(x, x);
    if q.abs() > EPS_LOR * scale * scale * 100.0 {
        return Err(Error::InvalidInput(format!("vector is not null: ⟨x,x⟩ = {q:.3e}")));
    }
    let s = x[dim - 2] + x[dim - 1];
    if s.abs() <= 1e-9 * scale {
        return Ok(BoundaryPoint::Infinity);
    }
    let parts: Vec<f64> = (0..=n as usize).map(|i| x[i] / s).collect();
    Ok(BoundaryPoint::Finite(CliffordNumber::vector(n, &parts)))
}

impl LorentzMatrix {
    pub fn dim(&self) -> usize {
        self.n as usize + 3
    }

    /// Residual of the form-preservation condition `MᵀqM − q`.
    pub fn defect(&self) -> f64 {
        let d = self.dim();
        let mut g = self.m.transpose() * apply_q(&self.m);
        for i in 0..d {
            let target = if i == d - 1 { -1.0 } else { 1.0 };
            g[(i, i)] -= target;
        }
        g.abs().max()
    }

    pub fn apply_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.m * x
    }
}

/// `q·M` with `q = diag(1,…,1,−1)`: negates the last row.
fn apply_q(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = m.clone();
    let last = out.nrows() - 1;
    for j in 0..out.ncols() {
        out[(last, j)] = -out[(last, j)];
    }
    out
}

fn canonical_frame(n: u32) -> Vec<BoundaryPoint> {
    let mut frame = vec![BoundaryPoint::Infinity, BoundaryPoint::zero(n)];
    // the n+1 unit paravectors
    for k in 0..=n as usize {
        let mut parts = vec![0.0; n as usize + 1];
        parts[k] = 1.0;
        frame.push(BoundaryPoint::Finite(CliffordNumber::vector(n, &parts)));
    }
    frame
}

fn validation_point(n: u32) -> BoundaryPoint {
    let parts: Vec<f64> = (0..=n as usize).map(|i| 0.3 / (i as f64 + 1.0) + 0.1).collect();
    BoundaryPoint::Finite(CliffordNumber::vector(n, &parts))
}

/// Poincaré-extends a valid Clifford matrix to its Lorentz representative.
pub fn to_lorentz(t: &CliffordMatrix) -> Result<LorentzMatrix> {
    let n = t.n();
    let dim = n as usize + 3;
    let mut rng = sampling::rng(FRAME_SEED);

    for attempt in 0..=K_RETRY {
        let (frame, check_pt) = if attempt == 0 {
            (canonical_frame(n), validation_point(n))
        } else {
            let mut f: Vec<BoundaryPoint> =
                (0..dim).map(|_| sampling::random_finite_point(&mut rng, n)).collect();
            f[0] = BoundaryPoint::Infinity;
            (f, sampling::random_finite_point(&mut rng, n))
        };
        match reconstruct(t, &frame, &check_pt) {
            Ok(m) => return Ok(m),
            Err(_) => continue,
        }
    }
    Err(Error::ReconstructionFailed(K_RETRY + 1))
}

fn reconstruct(t: &CliffordMatrix, frame: &[BoundaryPoint], check_pt: &BoundaryPoint) -> Result<LorentzMatrix> {
    let n = t.n();
    let dim = n as usize + 3;
    let images: Vec<BoundaryPoint> = frame.iter().map(|p| t.apply(p)).collect();
    for img in &images {
        if let BoundaryPoint::Finite(v) = img {
            if v.norm() > MAX_IMAGE_NORM {
                return Err(Error::ReconstructionFailed(1));
            }
        }
    }

    let xs: Vec<DVector<f64>> = frame.iter().map(|p| lift(p, n)).collect();
    let ys: Vec<DVector<f64>> = images.iter().map(|p| lift(p, n)).collect();

    // Per-ray scales from the Gram match λ_i λ_j ⟨y_i,y_j⟩ = ⟨x_i,x_j⟩.
    let g = |i: usize, j: usize| -> Result<f64> {
        let num = minkowski(&xs[i], &xs[j]);
        let den = minkowski(&ys[i], &ys[j]);
        if den.abs() < 1e-12 || num.abs() < 1e-12 {
            return Err(Error::ReconstructionFailed(1));
        }
        let r = num / den;
        if r <= 0.0 {
            return Err(Error::ReconstructionFailed(1));
        }
        Ok(r)
    };
    let lam1 = (g(0, 1)? * g(0, 2)? / g(1, 2)?).sqrt();
    let mut lambda = vec![lam1];
    for j in 1..dim {
        lambda.push(g(0, j)? / lam1);
    }

    let mut x_mat = DMatrix::zeros(dim, dim);
    let mut y_mat = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        x_mat.set_column(j, &xs[j]);
        y_mat.set_column(j, &(lambda[j] * &ys[j]));
    }
    let lu = x_mat.full_piv_lu();
    let x_inv = lu.try_inverse().ok_or(Error::ReconstructionFailed(1))?;
    let m = y_mat * x_inv;
    let lorentz = LorentzMatrix { n, m };

    if lorentz.defect() > EPS_LOR {
        return Err(Error::ReconstructionFailed(1));
    }
    // Held-out action check.
    let via_lorentz = drop_null(&lorentz.apply_vec(&lift(check_pt, n)), n)?;
    let direct = t.apply(check_pt);
    if !boundary_close(&via_lorentz, &direct, EPS_GEO * 10.0) {
        return Err(Error::ReconstructionFailed(1));
    }
    Ok(lorentz)
}

fn boundary_close(a: &BoundaryPoint, b: &BoundaryPoint, tol: f64) -> bool {
    match (a, b) {
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => {
            (u - v).norm() <= tol * u.norm().max(v.norm()).max(1.0)
        }
        (BoundaryPoint::Infinity, BoundaryPoint::Finite(v))
        | (BoundaryPoint::Finite(v), BoundaryPoint::Infinity) => v.norm() > MAX_IMAGE_NORM,
    }
}

// --- spectral post-processing --------------------------------------------

/// Eigenvalues folded to the closed upper half plane and clustered; the
/// defective-eigenvalue noise circle of a Jordan block (radius ~eps^{1/3})
/// collapses back to its centroid.
#[derive(Clone, Debug)]
struct Cluster {
    re: f64,
    im: f64,
    count: usize,
}

impl Cluster {
    fn modulus(&self) -> f64 {
        (self.re * self.re + self.im * self.im).sqrt()
    }
    fn arg(&self) -> f64 {
        self.im.atan2(self.re)
    }
}

fn cluster_eigenvalues(eigs: &[Complex<f64>], radius: f64) -> Vec<Cluster> {
    let mut pts: Vec<(f64, f64)> = eigs.iter().map(|e| (e.re, e.im.abs())).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let mut clusters: Vec<Cluster> = Vec::new();
    for (re, im) in pts {
        let mut assigned = false;
        for c in clusters.iter_mut() {
            let d = ((c.re - re).powi(2) + (c.im - im).powi(2)).sqrt();
            if d <= radius {
                let k = c.count as f64;
                c.re = (c.re * k + re) / (k + 1.0);
                c.im = (c.im * k + im) / (k + 1.0);
                c.count += 1;
                assigned = true;
                break;
            }
        }
        if !assigned {
            clusters.push(Cluster { re, im, count: 1 });
        }
    }
    clusters
}

/// Orthonormal basis of the numerical null space of `a` (relative singular
/// value threshold).
fn nullspace(a: &DMatrix<f64>, rel_tol: f64) -> Vec<DVector<f64>> {
    let svd = a.clone().svd(true, true);
    let v_t = svd.v_t.as_ref().expect("svd with v requested");
    let smax = svd.singular_values.max().max(1.0);
    let mut basis = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= rel_tol * smax {
            basis.push(v_t.row(i).transpose());
        }
    }
    basis
}

/// Smallest-singular-direction of `m − λI`, the numerical eigenvector.
fn eigenvector_for(m: &DMatrix<f64>, lambda: f64) -> DVector<f64> {
    let d = m.nrows();
    let mut shifted = m.clone();
    for i in 0..d {
        shifted[(i, i)] -= lambda;
    }
    let svd = shifted.svd(true, true);
    let v_t = svd.v_t.as_ref().expect("svd with v requested");
    v_t.row(d - 1).transpose()
}

struct Spectrum {
    clusters: Vec<Cluster>,
    /// index of cluster with the largest modulus
    top: usize,
    /// clustering radius used (grows with the matrix norm)
    radius: f64,
}

fn spectrum(l: &LorentzMatrix) -> Spectrum {
    let eigs = crate::linalg::complex_eigenvalues_robust(&l.m);
    let radius = EPS_CLUSTER.max(crate::linalg::defective_noise_radius(l.m.abs().max()));
    let clusters = cluster_eigenvalues(&eigs, radius);
    let top = clusters
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.modulus().partial_cmp(&b.1.modulus()).expect("finite"))
        .map(|(i, _)| i)
        .expect("non-empty spectrum");
    Spectrum { clusters, top, radius }
}

/// Rotation angles from the unit-modulus clusters. For loxodromic input the
/// two reciprocal real clusters are excluded first. Arguments below `snap`
/// collapse to 0 (and near-π ones to exactly π): the folded centroid of a
/// defective eigenvalue's noise circle carries an O(noise) argument that
/// must not masquerade as a rotation.
fn angles_from_clusters(clusters: &[Cluster], skip: &[usize], structural: usize, snap: f64) -> Vec<f64> {
    let snap = snap.max(ANGLE_SNAP);
    let mut angles = Vec::new();
    for (i, c) in clusters.iter().enumerate() {
        if skip.contains(&i) {
            continue;
        }
        let mut theta = c.arg();
        if theta <= snap {
            continue; // eigenvalue ≈ +1: angle 0, supplied by padding
        }
        if std::f64::consts::PI - theta <= snap {
            theta = std::f64::consts::PI;
        }
        let copies = (c.count / 2).max(1);
        for _ in 0..copies {
            angles.push(theta);
        }
    }
    angles.sort_by(|a, b| b.partial_cmp(a).expect("finite angles"));
    while angles.len() < structural {
        angles.push(0.0);
    }
    angles
}

/// Classifies from a precomputed Lorentz representative.
pub fn classify_lorentz(l: &LorentzMatrix) -> Result<IsometryInvariants> {
    let n = l.n;
    let spec = spectrum(l);
    let r_max = spec.clusters[spec.top].modulus();
    let margin = r_max - 1.0;
    let detect = (EPS_LOX_DETECT * 10.0).max(spec.radius);

    if margin > detect {
        // loxodromic: exclude the e^{±τ} clusters from the angle scan
        let mut skip = vec![spec.top];
        let recip = 1.0 / r_max;
        if let Some((i, _)) = spec
            .clusters
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != spec.top)
            .min_by(|a, b| {
                let da = (a.1.modulus() - recip).abs();
                let db = (b.1.modulus() - recip).abs();
                da.partial_cmp(&db).expect("finite")
            })
        {
            skip.push(i);
        }
        let structural = ((n as usize) + 1) / 2;
        let angles = angles_from_clusters(&spec.clusters, &skip, structural, spec.radius);
        let theta = angles.iter().cloned().fold(0.0, f64::max);
        let tau = r_max.ln();
        return Ok(IsometryInvariants {
            kind: Kind::Loxodromic,
            theta,
            tau,
            beta: IsometryInvariants::beta_of(Kind::Loxodromic, tau, theta),
            angles,
        });
    }
    if margin > detect / 100.0 {
        return Err(Error::AmbiguousClass(Kind::Loxodromic, Kind::Parabolic, margin));
    }

    // unit-modulus regime: elliptic iff the eigenvalue-1 eigenspace holds a
    // timelike vector
    let w = one_eigenspace(l);
    let (kind, fixed_info) = if w.is_empty() {
        (Kind::Parabolic, None)
    } else {
        let gram = gram_of(&w);
        let eig = gram.symmetric_eigen();
        let min_eig = eig.eigenvalues.min();
        let negatives = eig.eigenvalues.iter().filter(|v| **v < -1e-6).count();
        if min_eig < -1e-6 {
            let regular = w.len() < 3 || negatives == 0;
            let kind = if regular { Kind::RegularElliptic } else { Kind::Elliptic };
            (kind, Some((w, eig)))
        } else if min_eig <= 1e-6 {
            (Kind::Parabolic, None)
        } else {
            return Err(Error::AmbiguousClass(Kind::Parabolic, Kind::Elliptic, min_eig));
        }
    };
    let _ = fixed_info;

    let structural = if kind.is_elliptic() { ((n as usize) + 2) / 2 } else { ((n as usize) + 1) / 2 };
    let angles = angles_from_clusters(&spec.clusters, &[], structural, spec.radius);
    let theta = angles.iter().cloned().fold(0.0, f64::max);
    Ok(IsometryInvariants {
        kind,
        theta,
        tau: 0.0,
        beta: IsometryInvariants::beta_of(kind, 0.0, theta),
        angles,
    })
}


/// Orthonormal basis of the numerical eigenvalue-1 eigenspace of `M`.
fn one_eigenspace(l: &LorentzMatrix) -> Vec<DVector<f64>> {
    let d = l.dim();
    let mut shifted = l.m.clone();
    for i in 0..d {
        shifted[(i, i)] -= 1.0;
    }
    nullspace(&shifted, EPS_NULLSPACE)
}

fn gram_of(basis: &[DVector<f64>]) -> DMatrix<f64> {
    let k = basis.len();
    DMatrix::from_fn(k, k, |i, j| minkowski(&basis[i], &basis[j]))
}

/// Classifies a Clifford matrix. `±I` are reported as elliptic with all
/// angles 0.
pub fn classify(t: &CliffordMatrix) -> Result<IsometryInvariants> {
    classify_lorentz(&to_lorentz(t)?)
}

fn orient_future(mut x: DVector<f64>) -> DVector<f64> {
    if x[x.len() - 1] < 0.0 {
        x = -x;
    }
    x
}

/// Boundary fixed points from a precomputed Lorentz representative.
///
/// Loxodromic: exactly two, attracting first. Parabolic: exactly one.
/// Elliptic: two representatives of the fixed set when it is non-empty (any
/// two suffice for the inequalities; a non-regular elliptic fixes a whole
/// sphere), otherwise `NoBoundaryFixedPoint`.
pub fn fixed_points_lorentz(l: &LorentzMatrix, kind: Kind) -> Result<Vec<BoundaryPoint>> {
    let n = l.n;
    match kind {
        Kind::Loxodromic => {
            let spec = spectrum(l);
            let r = spec.clusters[spec.top].modulus();
            let attract = orient_future(eigenvector_for(&l.m, r));
            let repel = orient_future(eigenvector_for(&l.m, 1.0 / r));
            Ok(vec![drop_null(&attract, n)?, drop_null(&repel, n)?])
        }
        Kind::Parabolic => {
            // the eigenvalue-1 space may contain fixed spacelike directions
            // besides the null ray; pick the Gram-kernel direction
            let w = one_eigenspace(l);
            if w.is_empty() {
                let x = orient_future(eigenvector_for(&l.m, 1.0));
                return Ok(vec![drop_null(&x, n)?]);
            }
            if w.len() == 1 {
                return Ok(vec![drop_null(&orient_future(w[0].clone()), n)?]);
            }
            let gram = gram_of(&w);
            let eig = gram.symmetric_eigen();
            let mut null_i = 0;
            for i in 0..eig.eigenvalues.len() {
                if eig.eigenvalues[i].abs() < eig.eigenvalues[null_i].abs() {
                    null_i = i;
                }
            }
            let mut x = DVector::zeros(l.dim());
            for (j, basis) in w.iter().enumerate() {
                x += eig.eigenvectors[(j, null_i)] * basis;
            }
            Ok(vec![drop_null(&orient_future(x), n)?])
        }
        Kind::Elliptic | Kind::RegularElliptic => {
            let d = l.dim();
            let w = one_eigenspace(l);
            if w.is_empty() {
                return Err(Error::NoBoundaryFixedPoint);
            }
            let gram = gram_of(&w);
            let eig = gram.symmetric_eigen();
            let mut min_i = 0;
            let mut max_i = 0;
            for i in 0..eig.eigenvalues.len() {
                if eig.eigenvalues[i] < eig.eigenvalues[min_i] {
                    min_i = i;
                }
                if eig.eigenvalues[i] > eig.eigenvalues[max_i] {
                    max_i = i;
                }
            }
            let lam_min = eig.eigenvalues[min_i];
            let lam_max = eig.eigenvalues[max_i];
            if lam_min >= -1e-6 || lam_max <= 1e-6 {
                // timelike-only or degenerate fixed space: no boundary ray
                return Err(Error::NoBoundaryFixedPoint);
            }
            let combine = |col: usize| -> DVector<f64> {
                let mut v = DVector::zeros(d);
                for (j, basis) in w.iter().enumerate() {
                    v += eig.eigenvectors[(j, col)] * basis;
                }
                v
            };
            let timelike = combine(min_i) / (-lam_min).sqrt();
            let spacelike = combine(max_i) / lam_max.sqrt();
            let p1 = orient_future(&timelike + &spacelike);
            let p2 = orient_future(&timelike - &spacelike);
            Ok(vec![drop_null(&p1, n)?, drop_null(&p2, n)?])
        }
    }
}

/// Boundary fixed points of a Clifford matrix.
pub fn fixed_points(t: &CliffordMatrix) -> Result<Vec<BoundaryPoint>> {
    let l = to_lorentz(t)?;
    let inv = classify_lorentz(&l)?;
    fixed_points_lorentz(&l, inv.kind)
}

/// Classification plus fixed points with a single reconstruction.
pub fn classify_full(t: &CliffordMatrix) -> Result<(IsometryInvariants, Vec<BoundaryPoint>)> {
    let l = to_lorentz(t)?;
    let inv = classify_lorentz(&l)?;
    let fps = match fixed_points_lorentz(&l, inv.kind) {
        Ok(f) => f,
        Err(Error::NoBoundaryFixedPoint) => Vec::new(),
        Err(e) => return Err(e),
    };
    Ok((inv, fps))
}
