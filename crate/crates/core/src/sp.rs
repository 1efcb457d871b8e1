//! The quaternionic (and, with complex entries, complex) hyperbolic isometry
//! groups: membership under the Hermitian forms `J₁ = diag(−1, I_n)` and
//! `J₂ = [[0,−1,0],[−1,0,0],[0,0,I_{n−1}]]`, element classification with the
//! conjugacy invariants `δ_cp`, `M_f` and `δ(f)`, Heisenberg translations,
//! and the three quaternionic inequality checkers.
//!
//! Under `J₂` the distinguished boundary points are `o = (0,1,0,…,0)ᵗ` and
//! `∞ = (1,0,…,0)ᵗ`, and a member decomposes into blocks
//! `A = [[a, b, γ*],[c, d, δ*],[α, β, U]]` with scalar `a,b,c,d`, columns
//! `α,β,γ,δ ∈ H^{n−1}` and `U ∈ M(n−1, H)`.

use crate::error::Error;
use crate::jorgensen::{Certificate, Evidence, InequalityId};
use crate::kind::Kind;
use crate::quat::{eigenspace_basis, right_eigenvalues, QuatMatrix, Quaternion};
use crate::tol::{EPS_CLUSTER, EPS_GEO, EPS_SP};
use crate::Result;
use serde::{Deserialize, Serialize};

/// Which Hermitian form a matrix is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormTag {
    J1,
    J2,
}

impl FormTag {
    pub fn matrix(&self, n: usize) -> QuatMatrix {
        let size = n + 1;
        let mut j = QuatMatrix::zeros(size, size);
        match self {
            FormTag::J1 => {
                j[(0, 0)] = Quaternion::real(-1.0);
                for i in 1..size {
                    j[(i, i)] = Quaternion::one();
                }
            }
            FormTag::J2 => {
                j[(0, 1)] = Quaternion::real(-1.0);
                j[(1, 0)] = Quaternion::real(-1.0);
                for i in 2..size {
                    j[(i, i)] = Quaternion::one();
                }
            }
        }
        j
    }

    pub fn name(&self) -> &'static str {
        match self {
            FormTag::J1 => "J1",
            FormTag::J2 => "J2",
        }
    }
}

/// An element of `Sp(n,1)` (or `SU(n,1)` when every entry is complex),
/// expressed in one of the two standard Hermitian forms.
#[derive(Clone, Debug, PartialEq)]
pub struct SpMatrix {
    pub mat: QuatMatrix,
    pub form: FormTag,
}

/// Conjugacy data of an `Sp(n,1)` element.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpInvariants {
    pub kind: Kind,
    /// `δ_cp = max{|λ_i − 1| : i = 3,…,n+1}` over the unit eigenvalue
    /// classes of a loxodromic element (0 over an empty set).
    pub delta_cp: f64,
    /// `M = 2 δ_cp + |λ₁ − 1| + |λ̄₁⁻¹ − 1|`, loxodromic only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_f: Option<f64>,
    /// `δ(f) = max{|λ_i − 1| + |λ₁ − 1| : i = 2,…,n+1}`, elliptic only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_ell: Option<f64>,
    /// Sign of the Hermitian form restricted to each eigenvalue class.
    pub eigen_types: Vec<EigenType>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenType {
    Negative,
    Positive,
    /// Degenerate restriction (boundary fixed directions).
    Null,
}

impl SpMatrix {
    pub fn new(mat: QuatMatrix, form: FormTag) -> Result<Self> {
        if !mat.is_square() || mat.nrows() < 2 {
            return Err(Error::ShapeMismatch("Sp matrices are square of size ≥ 2".into()));
        }
        Ok(SpMatrix { mat, form })
    }

    /// `n` with the matrix of size `(n+1)×(n+1)`.
    pub fn n(&self) -> usize {
        self.mat.nrows() - 1
    }

    pub fn size(&self) -> usize {
        self.mat.nrows()
    }

    pub fn identity(n: usize, form: FormTag) -> Self {
        SpMatrix { mat: QuatMatrix::identity(n + 1), form }
    }

    /// Residual of the membership condition `A*JA − J`.
    pub fn membership_residual(&self) -> f64 {
        let j = self.form.matrix(self.n());
        let lhs = self.mat.adjoint().mul(&j).and_then(|x| x.mul(&self.mat)).expect("square");
        lhs.max_abs_diff(&j)
    }

    pub fn validate(&self, tol: f64) -> bool {
        self.membership_residual() <= tol
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.form != rhs.form {
            return Err(Error::FormMismatch(self.form.name().into(), rhs.form.name().into()));
        }
        Ok(SpMatrix { mat: self.mat.mul(&rhs.mat)?, form: self.form })
    }

    /// Group inverse. Under `J₂` this is the closed block formula
    /// `A⁻¹ = [[d̄, b̄, −β*],[c̄, ā, −α*],[−δ, −γ, U*]]`; under `J₁` it is
    /// `J₁ A* J₁`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.validate(EPS_SP.max(1e-8 * self.mat.max_entry_norm().powi(2))) {
            return Err(Error::NotMember(format!(
                "membership residual {:.3e}",
                self.membership_residual()
            )));
        }
        let size = self.size();
        let out = match self.form {
            FormTag::J1 => {
                let j = self.form.matrix(self.n());
                j.mul(&self.mat.adjoint())?.mul(&j)?
            }
            FormTag::J2 => {
                let a = &self.mat;
                let mut inv = QuatMatrix::zeros(size, size);
                inv[(0, 0)] = a[(1, 1)].conj(); // d̄
                inv[(0, 1)] = a[(0, 1)].conj(); // b̄
                inv[(1, 0)] = a[(1, 0)].conj(); // c̄
                inv[(1, 1)] = a[(0, 0)].conj(); // ā
                for t in 2..size {
                    inv[(0, t)] = -a[(t, 1)].conj(); // −β*
                    inv[(1, t)] = -a[(t, 0)].conj(); // −α*
                    inv[(t, 0)] = -a[(1, t)].conj(); // −δ
                    inv[(t, 1)] = -a[(0, t)].conj(); // −γ
                    for u in 2..size {
                        inv[(t, u)] = a[(u, t)].conj(); // U*
                    }
                }
                inv
            }
        };
        Ok(SpMatrix { mat: out, form: self.form })
    }

    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> bool {
        self.form == rhs.form && self.mat.approx_eq(&rhs.mat, tol)
    }

    /// Whether the column image of basis vector `col` stays on the same
    /// projective point, i.e. the matrix fixes that boundary point.
    pub fn fixes_basis_point(&self, col: usize) -> bool {
        let size = self.size();
        let image: Vec<Quaternion> = (0..size).map(|i| self.mat[(i, col)]).collect();
        let norm: f64 = image.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt();
        if norm <= EPS_GEO {
            return false;
        }
        image
            .iter()
            .enumerate()
            .all(|(i, q)| i == col || q.norm() <= EPS_GEO * norm)
    }

    /// Fixes `o = (0,1,0,…,0)ᵗ` (only meaningful under `J₂`).
    pub fn fixes_o(&self) -> bool {
        self.fixes_basis_point(1)
    }

    /// Fixes `∞ = (1,0,…,0)ᵗ` (only meaningful under `J₂`).
    pub fn fixes_infinity(&self) -> bool {
        self.fixes_basis_point(0)
    }

    /// Largest off-diagonal entry norm, for the diagonal-form preconditions.
    pub fn off_diagonal_mass(&self) -> f64 {
        let size = self.size();
        let mut mass = 0.0f64;
        for i in 0..size {
            for j in 0..size {
                if i != j {
                    mass = mass.max(self.mat[(i, j)].norm());
                }
            }
        }
        mass
    }

    /// Change of basis between the two forms; kind and all invariants are
    /// preserved. Uses `Q = blockdiag(S, I)` with `S = [[1,1],[−1,1]]/√2`,
    /// which satisfies `Q* J₁ Q = J₂`.
    pub fn transport(&self) -> Result<Self> {
        let size = self.size();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut q = QuatMatrix::identity(size);
        q[(0, 0)] = Quaternion::real(s);
        q[(0, 1)] = Quaternion::real(s);
        q[(1, 0)] = Quaternion::real(-s);
        q[(1, 1)] = Quaternion::real(s);
        let mut q_inv = QuatMatrix::identity(size);
        q_inv[(0, 0)] = Quaternion::real(s);
        q_inv[(0, 1)] = Quaternion::real(-s);
        q_inv[(1, 0)] = Quaternion::real(s);
        q_inv[(1, 1)] = Quaternion::real(s);
        let (mat, form) = match self.form {
            // A under J2 ↦ Q A Q⁻¹ under J1
            FormTag::J2 => (q.mul(&self.mat)?.mul(&q_inv)?, FormTag::J1),
            FormTag::J1 => (q_inv.mul(&self.mat)?.mul(&q)?, FormTag::J2),
        };
        Ok(SpMatrix { mat, form })
    }
}

/// Builds the Heisenberg translation `T_{s,ζ} = [[1,0,0],[s,1,ζ*],[ζ,0,I]]`
/// in `Sp(n,1)` under `J₂`, `ζ ∈ H^{n−1}`, requiring `Re(s) = |ζ|²/2`.
pub fn heisenberg(s: Quaternion, zeta: &[Quaternion], n: usize) -> Result<SpMatrix> {
    if zeta.len() + 2 != n + 1 {
        return Err(Error::ShapeMismatch(format!(
            "ζ must have length n−1 = {}, got {}",
            n - 1,
            zeta.len()
        )));
    }
    let zeta_sq: f64 = zeta.iter().map(|q| q.norm_sq()).sum();
    if (s.w - zeta_sq / 2.0).abs() > 1e-9 {
        return Err(Error::InvalidTranslation(format!(
            "Re(s) = {} but |ζ|²/2 = {}",
            s.w,
            zeta_sq / 2.0
        )));
    }
    let size = n + 1;
    let mut t = QuatMatrix::identity(size);
    t[(1, 0)] = s;
    for (idx, z) in zeta.iter().enumerate() {
        t[(2 + idx, 0)] = *z;
        t[(1, 2 + idx)] = z.conj();
    }
    SpMatrix::new(t, FormTag::J2)
}

/// Reads `(s, ζ)` back off a Heisenberg translation, verifying the pattern.
pub fn heisenberg_parts(t: &SpMatrix) -> Result<(Quaternion, Vec<Quaternion>)> {
    if t.form != FormTag::J2 {
        return Err(Error::FormMismatch("J2".into(), t.form.name().into()));
    }
    let size = t.size();
    let m = &t.mat;
    let s = m[(1, 0)];
    let zeta: Vec<Quaternion> = (2..size).map(|i| m[(i, 0)]).collect();
    let rebuilt = heisenberg(s, &zeta, t.n())?;
    if !rebuilt.mat.approx_eq(&t.mat, 1e-9 * m.max_entry_norm().max(1.0)) {
        return Err(Error::InvalidTranslation("matrix does not match the T_{s,ζ} pattern".into()));
    }
    Ok((s, zeta))
}

// --- classification -------------------------------------------------------

/// Hermitian length sign of the form restricted to a class eigenspace.
fn class_form_sign(a: &SpMatrix, rep: &Quaternion, multiplicity: usize) -> Result<(EigenType, f64)> {
    let j = a.form.matrix(a.n());
    let basis = eigenspace_basis(&a.mat, rep, multiplicity)?;
    // Realified Gram over {v e_α}: negativity over H reduces to negativity
    // of this real symmetric form.
    let units = [Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()];
    let dim = basis.len() * 4;
    let mut gram = nalgebra::DMatrix::<f64>::zeros(dim, dim);
    let vecs: Vec<Vec<Quaternion>> = basis
        .iter()
        .flat_map(|v| units.iter().map(move |e| v.iter().map(|x| *x * *e).collect()))
        .collect();
    for (p, vp) in vecs.iter().enumerate() {
        let jvp = j.apply(vp)?;
        for (q, vq) in vecs.iter().enumerate() {
            let mut acc = 0.0;
            for (x, y) in vq.iter().zip(&jvp) {
                acc += (x.conj() * *y).w;
            }
            gram[(q, p)] = acc;
        }
    }
    let sym = (gram.clone() + gram.transpose()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let min = eig.eigenvalues.min();
    let ty = if min < -1e-7 {
        EigenType::Negative
    } else if min <= 1e-7 {
        EigenType::Null
    } else {
        EigenType::Positive
    };
    Ok((ty, min))
}

fn dist_to_one(q: &Quaternion) -> f64 {
    (*q - Quaternion::one()).norm()
}

/// Classifies an `Sp(n,1)` element: loxodromic iff some right-eigenvalue
/// class has modulus ≠ 1; elliptic iff an eigenvector of negative Hermitian
/// length exists; parabolic otherwise. Regular elliptic means all classes
/// distinct.
pub fn sp_classify(a: &SpMatrix) -> Result<SpInvariants> {
    let scale = a.mat.max_entry_norm().max(1.0);
    if !a.validate(EPS_SP.max(1e-9 * scale * scale)) {
        return Err(Error::NotMember(format!(
            "membership residual {:.3e}",
            a.membership_residual()
        )));
    }
    let classes = right_eigenvalues(&a.mat)?;
    // the unit/non-unit split must sit above the defective-eigenvalue noise,
    // which grows with the entry size
    let unit_tol = EPS_CLUSTER.max(crate::linalg::defective_noise_radius(scale));
    let nonunit: Vec<&(Quaternion, usize)> =
        classes.iter().filter(|(rep, _)| (rep.norm() - 1.0).abs() > unit_tol).collect();

    if !nonunit.is_empty() {
        // loxodromic: λ₁ is the modulus > 1 representative
        let lam1 = nonunit
            .iter()
            .map(|(rep, _)| rep)
            .max_by(|x, y| x.norm().partial_cmp(&y.norm()).expect("finite"))
            .expect("nonempty");
        if lam1.norm() <= 1.0 {
            return Err(Error::AmbiguousClass(Kind::Loxodromic, Kind::Elliptic, lam1.norm() - 1.0));
        }
        let lam1_bar_inv = lam1.conj().inverse()?;
        let delta_cp = classes
            .iter()
            .filter(|(rep, _)| (rep.norm() - 1.0).abs() <= unit_tol)
            .map(|(rep, _)| dist_to_one(rep))
            .fold(0.0, f64::max);
        let m_f = 2.0 * delta_cp + dist_to_one(lam1) + dist_to_one(&lam1_bar_inv);
        let eigen_types = classes
            .iter()
            .map(|(rep, _)| {
                if (rep.norm() - 1.0).abs() > unit_tol {
                    EigenType::Null // boundary fixed directions
                } else {
                    EigenType::Positive
                }
            })
            .collect();
        return Ok(SpInvariants {
            kind: Kind::Loxodromic,
            delta_cp,
            m_f: Some(m_f),
            delta_ell: None,
            eigen_types,
        });
    }

    // unit-modulus spectrum: look for a negative-type class
    let mut types = Vec::with_capacity(classes.len());
    for (rep, mult) in &classes {
        let (ty, min) = class_form_sign(a, rep, *mult)?;
        types.push((ty, min));
    }
    let negative_idx: Vec<usize> =
        (0..classes.len()).filter(|i| types[*i].0 == EigenType::Negative).collect();

    if let Some(&first) = negative_idx.first() {
        // elliptic; ties on the negative class break by smallest angle
        let lam1_idx = negative_idx
            .iter()
            .copied()
            .min_by(|&x, &y| {
                let ax = classes[x].0.x.atan2(classes[x].0.w).abs();
                let ay = classes[y].0.x.atan2(classes[y].0.w).abs();
                ax.partial_cmp(&ay).expect("finite")
            })
            .unwrap_or(first);
        let lam1 = classes[lam1_idx].0;
        let delta_ell = classes
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != lam1_idx)
            .map(|(_, (rep, _))| dist_to_one(rep) + dist_to_one(&lam1))
            .fold(0.0, f64::max);
        let all_simple = classes.iter().all(|(_, m)| *m == 1);
        let kind = if all_simple { Kind::RegularElliptic } else { Kind::Elliptic };
        return Ok(SpInvariants {
            kind,
            delta_cp: 0.0,
            m_f: None,
            delta_ell: Some(delta_ell),
            eigen_types: types.into_iter().map(|(t, _)| t).collect(),
        });
    }

    Ok(SpInvariants {
        kind: Kind::Parabolic,
        delta_cp: 0.0,
        m_f: None,
        delta_ell: None,
        eigen_types: types.into_iter().map(|(t, _)| t).collect(),
    })
}

// --- inequality checkers --------------------------------------------------

fn record_sp_partner(ev: &mut Evidence, h: &SpMatrix, shared_fixed: bool) {
    let kind = sp_classify(h).map(|i| i.kind);
    let lox = matches!(kind, Ok(Kind::Loxodromic));
    ev.check("fixed_points_disjoint", !shared_fixed);
    ev.check("partner_loxodromic", lox);
    ev.non_elementary = !shared_fixed && lox;
}

/// Elliptic inequality (form `J₁`): for `g` regular elliptic and diagonal
/// with fixed point 0 and any member `h`, a discrete non-elementary pair
/// must satisfy `|a₁,₁(h)|·δ(g) ≥ 1`.
pub fn check_sp_elliptic(g: &SpMatrix, h: &SpMatrix, pair: (String, String)) -> Result<Certificate> {
    if g.form != FormTag::J1 || h.form != FormTag::J1 {
        return Err(Error::FormMismatch("J1".into(), "other".into()));
    }
    if g.size() != h.size() {
        return Err(Error::ShapeMismatch("g and h must have equal size".into()));
    }
    if g.off_diagonal_mass() > 1e-9 * g.mat.max_entry_norm().max(1.0) {
        return Err(Error::precondition("g is not in diagonal (0-fixing) form"));
    }
    let inv = sp_classify(g)?;
    if inv.kind != Kind::RegularElliptic {
        return Err(Error::precondition(format!("g is {} rather than regular elliptic", inv.kind)));
    }
    let delta = inv.delta_ell.expect("elliptic invariants carry δ");
    let a11 = h.mat[(0, 0)].norm();
    let lhs = a11 * delta;

    let mut ev = Evidence::default();
    ev.value("delta_g", delta).value("a11_h", a11);
    // g's unique fixed point is the interior point 0 ↔ the e₁ line in J₁
    let h_fixes_zero = h.fixes_basis_point(0);
    record_sp_partner(&mut ev, h, h_fixes_zero);
    Ok(Certificate::finish(InequalityId::SpElliptic, lhs, 1.0, pair, ev))
}

/// Shimizu-type inequality (form `J₂`): for a Heisenberg translation
/// `T_{s,ζ}` and a member `A` with blocks as in the class header, set
/// `t = max{|b|, |β|, |γ|, |U−I|}` (operator norm for the matrix block) and
/// `M = |s| + 2|ζ|`. A pair that is discrete and does not fix `o` must
/// satisfy `M·t + 2|ζ| ≥ 1`.
pub fn check_sp_shimizu(t: &SpMatrix, a: &SpMatrix, pair: (String, String)) -> Result<Certificate> {
    if t.form != FormTag::J2 || a.form != FormTag::J2 {
        return Err(Error::FormMismatch("J2".into(), "other".into()));
    }
    if t.size() != a.size() {
        return Err(Error::ShapeMismatch("T and A must have equal size".into()));
    }
    let (s, zeta) = heisenberg_parts(t)?;
    let scale = a.mat.max_entry_norm().max(1.0);
    if !a.validate(EPS_SP.max(1e-9 * scale * scale)) {
        return Err(Error::NotMember("A fails membership".into()));
    }
    let size = a.size();
    let m = &a.mat;
    let b_norm = m[(0, 1)].norm();
    let beta_norm: f64 = (2..size).map(|i| m[(i, 1)].norm_sq()).sum::<f64>().sqrt();
    let gamma_norm: f64 = (2..size).map(|j| m[(0, j)].norm_sq()).sum::<f64>().sqrt();
    let u_minus_i = {
        let mut u = QuatMatrix::zeros(size - 2, size - 2);
        for i in 2..size {
            for j in 2..size {
                u[(i - 2, j - 2)] = m[(i, j)];
            }
        }
        u.sub(&QuatMatrix::identity(size - 2))?.operator_norm()
    };
    let t_sup = b_norm.max(beta_norm).max(gamma_norm).max(u_minus_i);
    let zeta_norm: f64 = zeta.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt();
    let big_m = s.norm() + 2.0 * zeta_norm;
    let lhs = big_m * t_sup + 2.0 * zeta_norm;

    let mut ev = Evidence::default();
    ev.value("t", t_sup)
        .value("M", big_m)
        .value("zeta_norm", zeta_norm)
        .value("s_norm", s.norm());
    let fixes_o = a.fixes_o();
    ev.check("a_fixes_o", fixes_o);
    record_sp_partner(&mut ev, a, fixes_o);
    Ok(Certificate::finish(InequalityId::SpShimizu, lhs, 1.0, pair, ev))
}

/// Cao–Parker inequality (form `J₂`): `g` loxodromic in diagonal form
/// `diag(λ₁, λ̄₁⁻¹, λ₃,…)` fixing `o` and `∞` with `M_g < 1`, `h` any member
/// with blocks `a, b, c, d`. A discrete non-elementary pair must satisfy
/// `|ad|^{1/2}·|bc|^{1/2} ≥ (1 − M_g)/M_g²`.
pub fn check_cao_parker(g: &SpMatrix, h: &SpMatrix, pair: (String, String)) -> Result<Certificate> {
    if g.form != FormTag::J2 || h.form != FormTag::J2 {
        return Err(Error::FormMismatch("J2".into(), "other".into()));
    }
    if g.size() != h.size() {
        return Err(Error::ShapeMismatch("g and h must have equal size".into()));
    }
    if g.off_diagonal_mass() > 1e-9 * g.mat.max_entry_norm().max(1.0) {
        return Err(Error::precondition("g is not in diagonal (o, ∞ fixing) form"));
    }
    let inv = sp_classify(g)?;
    if inv.kind != Kind::Loxodromic {
        return Err(Error::precondition(format!("g is {} rather than loxodromic", inv.kind)));
    }
    if g.mat[(0, 0)].norm() <= 1.0 {
        return Err(Error::precondition("g is not in eq-(1.1) ordering: |g₁,₁| ≤ 1"));
    }
    let m_g = inv.m_f.expect("loxodromic invariants carry M");
    let mut ev = Evidence::default();
    ev.value("m_g", m_g).value("delta_cp_g", inv.delta_cp);
    if m_g >= 1.0 {
        return Err(Error::precondition(format!("M_g = {m_g:.6} is not < 1")));
    }
    let scale = h.mat.max_entry_norm().max(1.0);
    if !h.validate(EPS_SP.max(1e-9 * scale * scale)) {
        return Err(Error::NotMember("h fails membership".into()));
    }
    let (a, b, c, d) = (h.mat[(0, 0)], h.mat[(0, 1)], h.mat[(1, 0)], h.mat[(1, 1)]);
    let lhs = ((a * d).norm() * (b * c).norm()).sqrt();
    let rhs = (1.0 - m_g) / (m_g * m_g);
    ev.value("ad_norm", (a * d).norm()).value("bc_norm", (b * c).norm());
    let shared = h.fixes_o() || h.fixes_infinity();
    record_sp_partner(&mut ev, h, shared);
    Ok(Certificate::finish(InequalityId::SpCaoParker, lhs, rhs, pair, ev))
}
