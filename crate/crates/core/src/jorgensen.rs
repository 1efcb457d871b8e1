//! Jørgensen-type inequality checkers, packaged as certificates.
//!
//! Each checker evaluates an inequality that a discrete two-generator group
//! (non-elementary where the theorem requires it) must satisfy. A satisfied
//! certificate is merely *consistent* with discreteness; a violated one
//! certifies that the pair cannot generate a discrete non-elementary group,
//! upgraded to an outright non-discreteness verdict when non-elementarity
//! is independently evidenced (disjoint fixed-point sets plus a loxodromic
//! partner).

use crate::error::Error;
use crate::kind::Kind;
use crate::lorentz::{classify_full, IsometryInvariants};
use crate::mobius::{cross_ratio, BoundaryPoint, CliffordMatrix};
use crate::tol::{EPS_ALG, EPS_CERT, EPS_GEO};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `1/(4 sin²(π/10))`, the golden-ratio constant of the elliptic inequality.
pub fn elliptic_constant() -> f64 {
    1.0 / (4.0 * (std::f64::consts::PI / 10.0).sin().powi(2))
}

/// `4 sin²(π/10)`, the elliptic test-map bound.
pub fn elliptic_beta_bound() -> f64 {
    4.0 * (std::f64::consts::PI / 10.0).sin().powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    LoxCw,
    EllipticCw,
    NonellipticCw,
    SpElliptic,
    SpShimizu,
    SpCaoParker,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    ViolationNondiscreteOrElementary,
    ViolationNondiscrete,
}

/// Record of the checks a certificate performed and the quantities it
/// computed along the way.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Evidence {
    pub checks: BTreeMap<String, bool>,
    pub values: BTreeMap<String, f64>,
    /// True when fixed-point disjointness plus a loxodromic partner were
    /// both verified; only then may a violation claim non-discreteness.
    pub non_elementary: bool,
}

impl Evidence {
    pub fn check(&mut self, name: &str, ok: bool) -> &mut Self {
        self.checks.insert(name.to_string(), ok);
        self
    }
    pub fn value(&mut self, name: &str, v: f64) -> &mut Self {
        self.values.insert(name.to_string(), v);
        self
    }
}

/// Outcome of one inequality evaluation on a pair `(f, g)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub inequality_id: InequalityId,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub pair: (String, String),
    pub preconditions: Evidence,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn finish(
        inequality_id: InequalityId,
        lhs: f64,
        rhs: f64,
        pair: (String, String),
        preconditions: Evidence,
    ) -> Self {
        let satisfied = lhs >= rhs - EPS_CERT;
        let verdict = if satisfied {
            Verdict::Consistent
        } else if preconditions.non_elementary {
            Verdict::ViolationNondiscrete
        } else {
            Verdict::ViolationNondiscreteOrElementary
        };
        Certificate { inequality_id, lhs, rhs, satisfied, pair, preconditions, verdict }
    }
}

/// Cached classification of one element: invariants plus boundary fixed
/// points (empty when none exist).
#[derive(Clone, Debug)]
pub struct ElementData {
    pub invariants: IsometryInvariants,
    pub fixed_points: Vec<BoundaryPoint>,
}

pub fn analyze(t: &CliffordMatrix) -> Result<ElementData> {
    let (invariants, fixed_points) = classify_full(t)?;
    Ok(ElementData { invariants, fixed_points })
}

fn sets_equal(a: &[&BoundaryPoint], b: &[&BoundaryPoint], tol: f64) -> bool {
    a.len() == b.len() && {
        match a.len() {
            2 => {
                (a[0].coincides(b[0], tol) && a[1].coincides(b[1], tol))
                    || (a[0].coincides(b[1], tol) && a[1].coincides(b[0], tol))
            }
            1 => a[0].coincides(b[0], tol),
            _ => false,
        }
    }
}

fn fixed_sets_disjoint(a: &[BoundaryPoint], b: &[BoundaryPoint], tol: f64) -> bool {
    a.iter().all(|p| b.iter().all(|q| !p.coincides(q, tol)))
}

fn record_non_elementarity(ev: &mut Evidence, fd: &ElementData, gd: &ElementData) {
    let disjoint = fixed_sets_disjoint(&fd.fixed_points, &gd.fixed_points, EPS_GEO)
        && !fd.fixed_points.is_empty()
        && !gd.fixed_points.is_empty();
    let g_lox = gd.invariants.kind == Kind::Loxodromic;
    ev.check("fixed_points_disjoint", disjoint);
    ev.check("partner_loxodromic", g_lox);
    ev.non_elementary = disjoint && g_lox;
}

/// Loxodromic inequality: `β(f)·(1 + |[u,v,gu,gv]|) ≥ 1` for `f` loxodromic
/// with fixed points `u, v` and any `g` with `{gu,gv} ≠ {u,v}`.
pub fn check_lox(
    f: &CliffordMatrix,
    fd: &ElementData,
    g: &CliffordMatrix,
    gd: &ElementData,
    pair: (String, String),
) -> Result<Certificate> {
    let _ = f;
    if fd.invariants.kind != Kind::Loxodromic {
        return Err(Error::precondition("f is not loxodromic"));
    }
    let [u, v] = [&fd.fixed_points[0], &fd.fixed_points[1]];
    let gu = g.apply(u);
    let gv = g.apply(v);
    if sets_equal(&[&gu, &gv], &[u, v], EPS_GEO) {
        return Err(Error::precondition("g preserves the fixed-point set of f"));
    }
    let x = cross_ratio(u, v, &gu, &gv)?;
    let beta = fd.invariants.beta;
    let lhs = beta * (1.0 + x.norm());
    let mut ev = Evidence::default();
    ev.value("beta_f", beta).value("cross_ratio_abs", x.norm());
    record_non_elementarity(&mut ev, fd, gd);
    Ok(Certificate::finish(InequalityId::LoxCw, lhs, 1.0, pair, ev))
}

/// Elliptic inequality: `β(f)·(1/(4 sin²(π/10)) + |[u,v,gu,gv]|) ≥ 1` where
/// `u, v` are any two boundary fixed points of `f`, obtained after one
/// embedding step when `f` has none.
pub fn check_elliptic(
    f: &CliffordMatrix,
    fd: &ElementData,
    g: &CliffordMatrix,
    gd: &ElementData,
    pair: (String, String),
) -> Result<Certificate> {
    if !fd.invariants.kind.is_elliptic() {
        return Err(Error::precondition("f is not elliptic"));
    }
    let mut ev = Evidence::default();
    let beta = fd.invariants.beta;
    ev.value("beta_f", beta);

    let (g_up, u, v, embedded) = if fd.fixed_points.len() >= 2 {
        (g.clone(), fd.fixed_points[0].clone(), fd.fixed_points[1].clone(), false)
    } else {
        let f_up = f.embed_next();
        let fd_up = analyze(&f_up)?;
        if fd_up.fixed_points.len() < 2 {
            return Err(Error::InvalidInput(
                "elliptic element has no boundary fixed points even after embedding".into(),
            ));
        }
        (g.embed_next(), fd_up.fixed_points[0].clone(), fd_up.fixed_points[1].clone(), true)
    };
    ev.check("embedded", embedded);

    let gu = g_up.apply(&u);
    let gv = g_up.apply(&v);
    let x = cross_ratio(&u, &v, &gu, &gv)?;
    ev.value("cross_ratio_abs", x.norm());
    let lhs = beta * (elliptic_constant() + x.norm());
    record_non_elementarity(&mut ev, fd, gd);
    Ok(Certificate::finish(InequalityId::EllipticCw, lhs, 1.0, pair, ev))
}

/// Non-elliptic inequality for `f = [[λ, μ],[0, (λ*)⁻¹]]` fixing `∞`
/// (callers conjugate first, see [`conjugate_to_infinity`]):
///
/// `|tr²(fgf⁻¹)·[fg(∞), fg⁻¹(∞), g(∞), g⁻¹(∞)]| ≥ (1−ρ+√((1−ρ)²−4β))/2`
///
/// with `ρ = 2 cosh(τ_f/2)·√β(f)`, and for a translation (`λ = 1`) the
/// sharper form `|c|²·|μ|² ≥ rhs` where `c` is `g`'s lower-left entry.
pub fn check_nonelliptic(
    f: &CliffordMatrix,
    fd: &ElementData,
    g: &CliffordMatrix,
    gd: &ElementData,
    pair: (String, String),
) -> Result<Certificate> {
    let scale = f.a.norm().max(f.d.norm()).max(1.0);
    if f.c.norm() > EPS_ALG * scale {
        return Err(Error::precondition("f does not fix ∞ (lower-left entry nonzero)"));
    }
    if fd.invariants.kind.is_elliptic() {
        return Err(Error::precondition("f is elliptic"));
    }
    if !fixed_sets_disjoint(&fd.fixed_points, &gd.fixed_points, EPS_GEO) {
        return Err(Error::precondition("fix(f) and fix(g) intersect"));
    }

    let beta = fd.invariants.beta;
    let tau = fd.invariants.tau;
    let rho = 2.0 * (tau / 2.0).cosh() * beta.sqrt();
    let is_translation = fd.invariants.kind == Kind::Parabolic && fd.invariants.theta <= 1e-6;

    let mut ev = Evidence::default();
    ev.value("beta_f", beta).value("tau_f", tau).value("rho", rho);
    ev.check("translation_case", is_translation);

    if is_translation {
        if f.b.is_zero() {
            return Err(Error::precondition("f is the identity"));
        }
    } else if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::precondition(format!("rho = {rho:.6} outside (0, 1)")));
    }
    let disc = (1.0 - rho).powi(2) - 4.0 * beta;
    if disc < 0.0 {
        return Err(Error::precondition(format!("(1−ρ)² − 4β = {disc:.6} is negative")));
    }
    let rhs = (1.0 - rho + disc.sqrt()) / 2.0;

    let lhs = if is_translation {
        g.c.norm_sq() * f.b.norm_sq()
    } else {
        let fg = f.mat_mul(g);
        let fgi = f.mat_mul(&g.mat_inverse());
        let a = f.mat_mul(g).mat_mul(&f.mat_inverse());
        let tr = &a.a + &a.d;
        let tr2 = &tr * &tr;
        let inf = BoundaryPoint::Infinity;
        let x = cross_ratio(&fg.apply(&inf), &fgi.apply(&inf), &g.apply(&inf), &g.mat_inverse().apply(&inf))?;
        (&tr2 * &x).norm()
    };
    record_non_elementarity(&mut ev, fd, gd);
    Ok(Certificate::finish(InequalityId::NonellipticCw, lhs, rhs, pair, ev))
}

/// Conjugates a non-elliptic (or boundary-fixing elliptic) element so that
/// it fixes `∞`: returns `(h, h·f·h⁻¹)` with the conjugate upper-triangular.
pub fn conjugate_to_infinity(f: &CliffordMatrix) -> Result<(CliffordMatrix, CliffordMatrix)> {
    let n = f.n();
    let scale = f.a.norm().max(f.d.norm()).max(1.0);
    if f.c.norm() <= EPS_ALG * scale {
        return Ok((CliffordMatrix::identity(n), f.clone()));
    }
    let fd = analyze(f)?;
    if fd.fixed_points.is_empty() {
        return Err(Error::NoBoundaryFixedPoint);
    }
    for p in &fd.fixed_points {
        let h = match p {
            BoundaryPoint::Infinity => CliffordMatrix::identity(n),
            BoundaryPoint::Finite(v) => {
                // v ↦ −(v − p)⁻¹ sends p to ∞; Δ = 0·(−p)* − (−1)·1 = 1
                CliffordMatrix::new(
                    crate::clifford::CliffordNumber::zero(n),
                    crate::clifford::CliffordNumber::scalar(n, -1.0),
                    crate::clifford::CliffordNumber::one(n),
                    -v,
                )?
            }
        };
        let conj = f.conjugate_by(&h);
        let s = conj.a.norm().max(conj.d.norm()).max(1.0);
        if conj.c.norm() <= EPS_ALG * s * 10.0 {
            return Ok((h, conj));
        }
    }
    Err(Error::precondition("could not conjugate f to fix ∞"))
}
