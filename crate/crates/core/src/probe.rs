//! The test-map probe: enumerates the word ball of a finitely generated
//! group, harvests its loxodromic elements `g` (or the conjugates `g f g⁻¹`
//! in the conjugate mode), pairs each with a fixed test map `f`, runs the
//! matching inequality checker, and reports every certificate.
//!
//! A probe run is *one-sided*: a violation certificate proves the pair
//! cannot generate a discrete non-elementary group, while a clean run only
//! says "no violation up to depth L" — never that the group is discrete.

use crate::error::Error;
use crate::jorgensen::{self, Certificate, ElementData};
use crate::kind::Kind;
use crate::lorentz;
use crate::mobius::{BoundaryPoint, CliffordMatrix};
use crate::quat::{eigenspace_basis, Quaternion};
use crate::sp::{heisenberg_parts, sp_classify, FormTag, SpMatrix};
use crate::tol::{EPS_GEO, EPS_SP};
use crate::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// Word balls are truncated beyond this many distinct matrices.
pub const WORD_BALL_BUDGET: usize = 1_000_000;

/// Which matrix algebra a presentation lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "algebra", content = "n")]
pub enum Algebra {
    Clifford(u32),
    Sp(usize),
    Su(usize),
}

/// A group element in either algebra.
#[derive(Clone, Debug)]
pub enum Element {
    Clifford(CliffordMatrix),
    Sp(SpMatrix),
}

impl Element {
    pub fn as_clifford(&self) -> Result<&CliffordMatrix> {
        match self {
            Element::Clifford(m) => Ok(m),
            Element::Sp(_) => Err(Error::InvalidInput("expected a Clifford matrix".into())),
        }
    }
    pub fn as_sp(&self) -> Result<&SpMatrix> {
        match self {
            Element::Sp(m) => Ok(m),
            Element::Clifford(_) => Err(Error::InvalidInput("expected an Sp matrix".into())),
        }
    }

    fn mul(&self, rhs: &Element) -> Result<Element> {
        match (self, rhs) {
            (Element::Clifford(a), Element::Clifford(b)) => Ok(Element::Clifford(a.mat_mul(b))),
            (Element::Sp(a), Element::Sp(b)) => Ok(Element::Sp(a.mul(b)?)),
            _ => Err(Error::InvalidInput("mixed algebras".into())),
        }
    }

    fn inverse(&self) -> Result<Element> {
        match self {
            Element::Clifford(a) => Ok(Element::Clifford(a.mat_inverse())),
            Element::Sp(a) => Ok(Element::Sp(a.inverse()?)),
        }
    }

    /// Quantized coefficient vector, sign-canonicalized: ±T collapse to one
    /// key (the projective action quotients the center).
    fn dedup_key(&self) -> Vec<i64> {
        let quantize = |x: f64| -> i64 { (x / 1e-9).round() as i64 };
        let mut key: Vec<i64> = match self {
            Element::Clifford(m) => m
                .entries()
                .iter()
                .flat_map(|e| {
                    let dim = 1u32 << e.n();
                    (0..dim).map(|mask| quantize(e.coeff(mask))).collect::<Vec<i64>>()
                })
                .collect(),
            Element::Sp(m) => m
                .mat
                .entries()
                .flat_map(|q| [quantize(q.w), quantize(q.x), quantize(q.y), quantize(q.z)])
                .collect(),
        };
        if let Some(first) = key.iter().find(|v| **v != 0) {
            if *first < 0 {
                for v in &mut key {
                    *v = -*v;
                }
            }
        }
        key
    }
}

/// A finitely generated subgroup, given by named generators.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub algebra: Algebra,
    pub generators: Vec<(String, Element)>,
    pub metadata: String,
}

impl GroupPresentation {
    /// Checks every generator against its algebra's validator.
    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::InvalidInput("presentation has no generators".into()));
        }
        for (name, g) in &self.generators {
            match (&self.algebra, g) {
                (Algebra::Clifford(n), Element::Clifford(m)) => {
                    if m.n() != *n {
                        return Err(Error::InvalidInput(format!(
                            "generator {name} has n = {}, presentation says {n}",
                            m.n()
                        )));
                    }
                    if !m.validate(1e-7) {
                        return Err(Error::NotMember(format!("generator {name} fails validate")));
                    }
                }
                (Algebra::Sp(n) | Algebra::Su(n), Element::Sp(m)) => {
                    if m.n() != *n {
                        return Err(Error::InvalidInput(format!(
                            "generator {name} has n = {}, presentation says {n}",
                            m.n()
                        )));
                    }
                    let scale = m.mat.max_entry_norm().max(1.0);
                    if !m.validate(EPS_SP.max(1e-9 * scale * scale)) {
                        return Err(Error::NotMember(format!(
                            "generator {name} fails A*JA = J (residual {:.3e})",
                            m.membership_residual()
                        )));
                    }
                    if matches!(self.algebra, Algebra::Su(_)) && !m.mat.is_complex(1e-12) {
                        return Err(Error::NotMember(format!(
                            "generator {name} has quaternionic entries in an su presentation"
                        )));
                    }
                }
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "generator {name} does not match the presentation algebra"
                    )))
                }
            }
        }
        Ok(())
    }
}

/// One distinct element of a word ball with its first (canonical) word.
#[derive(Clone, Debug)]
pub struct WordEntry {
    pub word: String,
    pub element: Element,
    /// Reduced word length that first produced this matrix.
    pub length: usize,
}

/// Freely reduced words of length ≤ `depth` over the generators and their
/// inverses, deduplicated by rounded matrix entries up to overall sign, in
/// deterministic BFS order. Returns `(entries, words_examined, truncated)`.
pub fn word_ball(group: &GroupPresentation, depth: usize) -> Result<(Vec<WordEntry>, usize, bool)> {
    group.validate()?;
    if depth < 1 {
        return Ok((Vec::new(), 0, false));
    }
    // letters: generator then its inverse, in generator order
    let mut letters: Vec<(String, Element, i32)> = Vec::new();
    for (idx, (name, g)) in group.generators.iter().enumerate() {
        let code = idx as i32 + 1;
        letters.push((name.clone(), g.clone(), code));
        letters.push((format!("{name}^-1"), g.inverse()?, -code));
    }

    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut out: Vec<WordEntry> = Vec::new();
    let mut examined = 0usize;
    let mut truncated = false;

    // frontier of freely reduced words: (word string, last letter code, element)
    let mut frontier: Vec<(String, i32, Element)> = vec![(String::new(), 0, identity_like(group)?)];
    for len in 1..=depth {
        let mut next: Vec<(String, i32, Element)> = Vec::new();
        for (word, last, elem) in &frontier {
            for (name, letter_elem, code) in &letters {
                if *last == -*code {
                    continue; // free reduction
                }
                examined += 1;
                let product = elem.mul(letter_elem)?;
                let new_word =
                    if word.is_empty() { name.clone() } else { format!("{word} {name}") };
                let key = product.dedup_key();
                if !seen.contains_key(&key) {
                    if out.len() >= WORD_BALL_BUDGET {
                        truncated = true;
                    } else {
                        seen.insert(key, out.len());
                        out.push(WordEntry {
                            word: new_word.clone(),
                            element: product.clone(),
                            length: len,
                        });
                    }
                }
                next.push((new_word, *code, product));
            }
            if truncated {
                break;
            }
        }
        frontier = next;
        if truncated {
            break;
        }
    }
    Ok((out, examined, truncated))
}

fn identity_like(group: &GroupPresentation) -> Result<Element> {
    Ok(match &group.algebra {
        Algebra::Clifford(n) => Element::Clifford(CliffordMatrix::identity(*n)),
        Algebra::Sp(n) | Algebra::Su(n) => {
            let form = group
                .generators
                .first()
                .map(|(_, g)| g.as_sp().map(|m| m.form))
                .transpose()?
                .unwrap_or(FormTag::J2);
            Element::Sp(SpMatrix::identity(*n, form))
        }
    })
}

/// Probe modes, one per test-map theorem clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeMode {
    Thm1Lox,
    Thm1Nonelliptic,
    Thm1Elliptic,
    Thm2Conjugate,
    ThmqLox,
    ThmqHeisenberg,
    ThmqElliptic,
}

impl ProbeMode {
    pub fn all() -> [ProbeMode; 7] {
        [
            ProbeMode::Thm1Lox,
            ProbeMode::Thm1Nonelliptic,
            ProbeMode::Thm1Elliptic,
            ProbeMode::Thm2Conjugate,
            ProbeMode::ThmqLox,
            ProbeMode::ThmqHeisenberg,
            ProbeMode::ThmqElliptic,
        ]
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "thm1_lox" => Ok(ProbeMode::Thm1Lox),
            "thm1_nonelliptic" => Ok(ProbeMode::Thm1Nonelliptic),
            "thm1_elliptic" => Ok(ProbeMode::Thm1Elliptic),
            "thm2_conjugate" => Ok(ProbeMode::Thm2Conjugate),
            "thmq_lox" => Ok(ProbeMode::ThmqLox),
            "thmq_heisenberg" => Ok(ProbeMode::ThmqHeisenberg),
            "thmq_elliptic" => Ok(ProbeMode::ThmqElliptic),
            _ => Err(Error::InvalidInput(format!("unknown probe mode: {s}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProbeMode::Thm1Lox => "thm1_lox",
            ProbeMode::Thm1Nonelliptic => "thm1_nonelliptic",
            ProbeMode::Thm1Elliptic => "thm1_elliptic",
            ProbeMode::Thm2Conjugate => "thm2_conjugate",
            ProbeMode::ThmqLox => "thmq_lox",
            ProbeMode::ThmqHeisenberg => "thmq_heisenberg",
            ProbeMode::ThmqElliptic => "thmq_elliptic",
        }
    }

    pub fn is_quaternionic(&self) -> bool {
        matches!(self, ProbeMode::ThmqLox | ProbeMode::ThmqHeisenberg | ProbeMode::ThmqElliptic)
    }
}

/// Result of checking the test map against its mode's hypothesis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TestMapCheck {
    pub mode: ProbeMode,
    pub passed: bool,
    pub kind: Option<Kind>,
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn failed_check(
    mode: ProbeMode,
    kind: Option<Kind>,
    values: BTreeMap<String, f64>,
    reason: String,
) -> TestMapCheck {
    TestMapCheck { mode, passed: false, kind, values, reason: Some(reason) }
}

/// Validates the test map against the quantitative hypothesis of the mode's
/// theorem (β range, ρ range, M, |ζ|, δ).
pub fn validate_test_map(f: &Element, mode: ProbeMode) -> Result<TestMapCheck> {
    let mut values = BTreeMap::new();
    match mode {
        ProbeMode::Thm1Lox
        | ProbeMode::Thm1Nonelliptic
        | ProbeMode::Thm1Elliptic
        | ProbeMode::Thm2Conjugate => {
            let m = f.as_clifford()?;
            if !m.validate(1e-7) {
                return Err(Error::NotMember("test map fails validate".into()));
            }
            let inv = lorentz::classify(m)?;
            values.insert("beta".into(), inv.beta);
            values.insert("tau".into(), inv.tau);
            values.insert("theta".into(), inv.theta);
            let kind = inv.kind;

            let lox_gate = |_: &mut BTreeMap<String, f64>| -> Option<String> {
                if kind != Kind::Loxodromic {
                    return Some(format!("test map is {kind}, needs loxodromic"));
                }
                if !(inv.beta > 0.0 && inv.beta < 1.0) {
                    return Some(format!("β = {:.6} outside (0, 1)", inv.beta));
                }
                None
            };
            let nonelliptic_gate = |values: &mut BTreeMap<String, f64>| -> Option<String> {
                if kind.is_elliptic() {
                    return Some(format!("test map is {kind}, needs non-elliptic"));
                }
                let rho = 2.0 * (inv.tau / 2.0).cosh() * inv.beta.sqrt();
                values.insert("rho".into(), rho);
                let translation = kind == Kind::Parabolic && inv.theta <= 1e-6;
                if translation {
                    return None; // λ = 1 clause of the inequality, ρ = 0
                }
                if !(rho > 0.0 && rho < 1.0) {
                    return Some(format!("ρ = {rho:.6} outside (0, 1)"));
                }
                if (1.0 - rho).powi(2) - 4.0 * inv.beta < 0.0 {
                    return Some("(1−ρ)² − 4β < 0: stated bound is complex".into());
                }
                None
            };
            let elliptic_gate = |values: &mut BTreeMap<String, f64>, regular: bool| -> Option<String> {
                if !kind.is_elliptic() {
                    return Some(format!("test map is {kind}, needs elliptic"));
                }
                if regular && kind != Kind::RegularElliptic {
                    return Some("test map must be regular elliptic".into());
                }
                let bound = jorgensen::elliptic_beta_bound();
                values.insert("beta_bound".into(), bound);
                if !(inv.beta > 0.0 && inv.beta < bound) {
                    return Some(format!("β = {:.6} outside (0, 4 sin²(π/10))", inv.beta));
                }
                None
            };
            let reason = match mode {
                ProbeMode::Thm1Lox => lox_gate(&mut values),
                ProbeMode::Thm1Nonelliptic => nonelliptic_gate(&mut values),
                ProbeMode::Thm1Elliptic => elliptic_gate(&mut values, false),
                ProbeMode::Thm2Conjugate => match kind {
                    Kind::Loxodromic => lox_gate(&mut values),
                    Kind::Parabolic => nonelliptic_gate(&mut values),
                    _ => elliptic_gate(&mut values, true),
                },
                _ => unreachable!(),
            };
            Ok(match reason {
                None => TestMapCheck { mode, passed: true, kind: Some(kind), values, reason: None },
                Some(r) => failed_check(mode, Some(kind), values, r),
            })
        }
        ProbeMode::ThmqLox => {
            let m = f.as_sp()?;
            if m.form != FormTag::J2 {
                return Ok(failed_check(mode, None, values, "test map must be expressed under J2".into()));
            }
            if m.off_diagonal_mass() > 1e-9 * m.mat.max_entry_norm().max(1.0) {
                return Ok(failed_check(
                    mode,
                    None,
                    values,
                    "test map must be in diag(λ₁, λ̄₁⁻¹, …) form".into(),
                ));
            }
            let inv = sp_classify(m)?;
            if inv.kind != Kind::Loxodromic {
                return Ok(failed_check(mode, Some(inv.kind), values, "test map must be loxodromic".into()));
            }
            let m_f = inv.m_f.expect("loxodromic carries M");
            values.insert("m_f".into(), m_f);
            values.insert("delta_cp".into(), inv.delta_cp);
            if m_f >= 1.0 {
                return Ok(failed_check(mode, Some(inv.kind), values, format!("M_f = {m_f:.6} is not < 1")));
            }
            Ok(TestMapCheck { mode, passed: true, kind: Some(inv.kind), values, reason: None })
        }
        ProbeMode::ThmqHeisenberg => {
            let m = f.as_sp()?;
            let (s, zeta) = heisenberg_parts(m)?;
            let zeta_norm: f64 = zeta.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt();
            values.insert("zeta_norm".into(), zeta_norm);
            values.insert("s_norm".into(), s.norm());
            if zeta_norm >= 0.5 {
                return Ok(failed_check(
                    mode,
                    Some(Kind::Parabolic),
                    values,
                    format!("|ζ| = {zeta_norm:.6} is not < 1/2"),
                ));
            }
            Ok(TestMapCheck { mode, passed: true, kind: Some(Kind::Parabolic), values, reason: None })
        }
        ProbeMode::ThmqElliptic => {
            let m = f.as_sp()?;
            if m.form != FormTag::J1 {
                return Ok(failed_check(mode, None, values, "test map must be expressed under J1".into()));
            }
            if m.off_diagonal_mass() > 1e-9 * m.mat.max_entry_norm().max(1.0) {
                return Ok(failed_check(
                    mode,
                    None,
                    values,
                    "test map must be diagonal with fixed point 0".into(),
                ));
            }
            let inv = sp_classify(m)?;
            if inv.kind != Kind::RegularElliptic {
                return Ok(failed_check(mode, Some(inv.kind), values, "test map must be regular elliptic".into()));
            }
            let delta = inv.delta_ell.expect("elliptic carries δ");
            values.insert("delta".into(), delta);
            if delta >= 1.0 {
                return Ok(failed_check(mode, Some(inv.kind), values, format!("δ(f) = {delta:.6} is not < 1")));
            }
            Ok(TestMapCheck { mode, passed: true, kind: Some(inv.kind), values, reason: None })
        }
    }
}

/// Evidence that the group is plausibly Zariski dense: necessary-condition
/// checks only — a failure disproves density, a pass merely does not.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZariskiEvidence {
    pub no_common_boundary_fixed_point: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub common_fixed_point_witness: Option<String>,
    pub irreducibility_not_disproved: bool,
    pub orbit_rank: usize,
    pub ambient_rank: usize,
    /// "fails" or "not_disproved"
    pub label: String,
}

/// Boundary fixed candidates of an Sp element: null right-eigenvectors.
fn sp_boundary_candidates(m: &SpMatrix) -> Result<Vec<Vec<Quaternion>>> {
    let j = m.form.matrix(m.n());
    let classes = crate::quat::right_eigenvalues(&m.mat)?;
    let mut out = Vec::new();
    for (rep, mult) in &classes {
        let Ok(basis) = eigenspace_basis(&m.mat, rep, *mult) else { continue };
        for v in basis {
            let jv = j.apply(&v)?;
            let len: f64 = v.iter().zip(&jv).map(|(x, y)| (x.conj() * *y).w).sum();
            let scale: f64 = v.iter().map(|q| q.norm_sq()).sum();
            if len.abs() <= 1e-6 * scale.max(1.0) {
                out.push(v);
            }
        }
    }
    Ok(out)
}

fn sp_fixes_ray(m: &SpMatrix, x: &[Quaternion]) -> Result<bool> {
    let y = m.mat.apply(x)?;
    let x_sq: f64 = x.iter().map(|q| q.norm_sq()).sum();
    if x_sq == 0.0 {
        return Ok(false);
    }
    // least-squares right scalar q with y ≈ x·q
    let mut q = Quaternion::zero();
    for (xi, yi) in x.iter().zip(&y) {
        q = q + xi.conj() * *yi;
    }
    let q = q.scale(1.0 / x_sq);
    let res: f64 = x
        .iter()
        .zip(&y)
        .map(|(xi, yi)| (*yi - *xi * q).norm_sq())
        .sum::<f64>()
        .sqrt();
    let y_norm: f64 = y.iter().map(|v| v.norm_sq()).sum::<f64>().sqrt();
    Ok(res <= 1e-6 * y_norm.max(1.0))
}

/// Runs the two necessary-condition checks of Zariski density: no common
/// boundary fixed point across the generators, and a full-rank orbit of a
/// random vector under words of length ≤ 3.
pub fn zariski_heuristic(group: &GroupPresentation, seed: u64) -> Result<ZariskiEvidence> {
    group.validate()?;
    let mut witness = None;
    let mut no_common = true;

    match group.algebra {
        Algebra::Clifford(_) => {
            // candidates from the generator with the smallest boundary
            // fixed set; a generator with none rules a common point out
            let mut per_gen: Vec<Vec<BoundaryPoint>> = Vec::new();
            let mut any_empty = false;
            for (_, g) in &group.generators {
                let data = jorgensen::analyze(g.as_clifford()?)?;
                if data.fixed_points.is_empty() {
                    any_empty = true;
                    break;
                }
                per_gen.push(data.fixed_points);
            }
            if !any_empty {
                let candidates = per_gen
                    .iter()
                    .min_by_key(|f| f.len())
                    .cloned()
                    .unwrap_or_default();
                'cand: for p in &candidates {
                    for (_, g) in &group.generators {
                        let img = g.as_clifford()?.apply(p);
                        if !img.coincides(p, EPS_GEO * 10.0) {
                            continue 'cand;
                        }
                    }
                    no_common = false;
                    witness = Some(format!("{p:?}"));
                    break;
                }
            }
        }
        Algebra::Sp(_) | Algebra::Su(_) => {
            let mut best: Option<Vec<Vec<Quaternion>>> = None;
            for (_, g) in &group.generators {
                let cands = sp_boundary_candidates(g.as_sp()?)?;
                if cands.is_empty() {
                    best = Some(Vec::new());
                    break;
                }
                if best.as_ref().map(|b| cands.len() < b.len()).unwrap_or(true) {
                    best = Some(cands);
                }
            }
            if let Some(cands) = best {
                'sp_cand: for x in &cands {
                    for (_, g) in &group.generators {
                        if !sp_fixes_ray(g.as_sp()?, x)? {
                            continue 'sp_cand;
                        }
                    }
                    no_common = false;
                    witness = Some("shared null eigen-ray".into());
                    break;
                }
            }
        }
    }

    let (orbit_rank, ambient_rank) = orbit_rank(group, seed)?;
    let irreducible = orbit_rank >= ambient_rank;
    let label = if no_common && irreducible { "not_disproved" } else { "fails" };
    Ok(ZariskiEvidence {
        no_common_boundary_fixed_point: no_common,
        common_fixed_point_witness: witness,
        irreducibility_not_disproved: irreducible,
        orbit_rank,
        ambient_rank,
        label: label.into(),
    })
}

fn orbit_rank(group: &GroupPresentation, seed: u64) -> Result<(usize, usize)> {
    use rand::Rng;
    let mut rng = crate::sampling::rng(seed ^ 0x5a41_5249);
    match group.algebra {
        Algebra::Clifford(n) => {
            let dim = n as usize + 3;
            let mats: Vec<nalgebra::DMatrix<f64>> = group
                .generators
                .iter()
                .map(|(_, g)| lorentz::to_lorentz(g.as_clifford()?).map(|l| l.m))
                .collect::<Result<_>>()?;
            let v0 = nalgebra::DVector::<f64>::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
            let mut orbit = vec![v0];
            for _ in 0..3 {
                let mut extra = Vec::new();
                for v in &orbit {
                    for m in &mats {
                        extra.push(m * v);
                    }
                }
                orbit.extend(extra);
            }
            let mut stacked = nalgebra::DMatrix::zeros(dim, orbit.len());
            for (j, v) in orbit.iter().enumerate() {
                stacked.set_column(j, v);
            }
            Ok((stacked.rank(1e-9), dim))
        }
        Algebra::Sp(n) | Algebra::Su(n) => {
            let size = n + 1;
            let v0: Vec<Quaternion> = (0..size)
                .map(|_| {
                    Quaternion::new(
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                    )
                })
                .collect();
            let mut orbit = vec![v0];
            for _ in 0..3 {
                let mut extra = Vec::new();
                for v in &orbit {
                    for (_, g) in &group.generators {
                        extra.push(g.as_sp()?.mat.apply(v)?);
                    }
                }
                orbit.extend(extra);
            }
            // quaternionic span ⇔ real span of {v e_α}
            let units = [Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()];
            let cols: Vec<Vec<f64>> = orbit
                .iter()
                .flat_map(|v| {
                    units.iter().map(move |e| {
                        v.iter()
                            .flat_map(|q| {
                                let p = *q * *e;
                                [p.w, p.x, p.y, p.z]
                            })
                            .collect::<Vec<f64>>()
                    })
                })
                .collect();
            let rows = 4 * size;
            let mut stacked = nalgebra::DMatrix::zeros(rows, cols.len());
            for (j, c) in cols.iter().enumerate() {
                for (i, x) in c.iter().enumerate() {
                    stacked[(i, j)] = *x;
                }
            }
            Ok((stacked.rank(1e-9), rows))
        }
    }
}

/// Per-word outcome inside a report.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum WordOutcome {
    Certificate { word: String, certificate: Certificate },
    Skipped { word: String, reason: String },
    CheckerError { word: String, error: String },
}

/// Full probe output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeReport {
    pub schema: String,
    pub mode: ProbeMode,
    pub depth: usize,
    pub seed: u64,
    pub words_examined: usize,
    pub distinct_elements: usize,
    pub loxodromic_found: usize,
    pub truncated: bool,
    pub test_map_check: TestMapCheck,
    pub zariski_evidence: ZariskiEvidence,
    pub certificates: Vec<Certificate>,
    pub skipped: Vec<WordOutcome>,
    pub violation_found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation_word: Option<String>,
    /// Human-readable verdict; a clean run is explicitly not a
    /// discreteness claim.
    pub conclusion: String,
}

struct CliffordProbeCtx {
    f: CliffordMatrix,
    fd: ElementData,
    /// For the non-elliptic path: `h` with `h f h⁻¹` fixing ∞, plus the
    /// conjugated test map and its data.
    conj: Option<(CliffordMatrix, CliffordMatrix, ElementData)>,
}

fn probe_word_clifford(
    ctx: &CliffordProbeCtx,
    mode: ProbeMode,
    entry: &WordEntry,
) -> Result<Option<WordOutcome>> {
    let g = entry.element.as_clifford()?;
    let gd = jorgensen::analyze(g)?;
    if gd.invariants.kind != Kind::Loxodromic {
        return Ok(None);
    }
    // the theorems draw g from L ∖ O_f: require ε-disjoint fixed sets
    let disjoint = ctx
        .fd
        .fixed_points
        .iter()
        .all(|p| gd.fixed_points.iter().all(|q| !p.coincides(q, EPS_GEO)));
    if !disjoint {
        return Ok(Some(WordOutcome::Skipped {
            word: entry.word.clone(),
            reason: "fixed-point set meets fix(f)".into(),
        }));
    }
    let names = ("f".to_string(), entry.word.clone());
    let cert = match mode {
        ProbeMode::Thm1Lox => jorgensen::check_lox(&ctx.f, &ctx.fd, g, &gd, names),
        ProbeMode::Thm1Elliptic => jorgensen::check_elliptic(&ctx.f, &ctx.fd, g, &gd, names),
        ProbeMode::Thm1Nonelliptic => {
            let (h, f_inf, fd_inf) = ctx.conj.as_ref().expect("conjugation precomputed");
            let g_conj = g.conjugate_by(h);
            let gd_conj = jorgensen::analyze(&g_conj)?;
            jorgensen::check_nonelliptic(f_inf, fd_inf, &g_conj, &gd_conj, names)
        }
        ProbeMode::Thm2Conjugate => {
            let target = g.mat_mul(&ctx.f).mat_mul(&g.mat_inverse());
            let td = jorgensen::analyze(&target)?;
            match ctx.fd.invariants.kind {
                Kind::Loxodromic => jorgensen::check_lox(&ctx.f, &ctx.fd, &target, &td, names),
                Kind::Parabolic => {
                    let (h, f_inf, fd_inf) = ctx.conj.as_ref().expect("conjugation precomputed");
                    let t_conj = target.conjugate_by(h);
                    let td_conj = jorgensen::analyze(&t_conj)?;
                    jorgensen::check_nonelliptic(f_inf, fd_inf, &t_conj, &td_conj, names)
                }
                _ => jorgensen::check_elliptic(&ctx.f, &ctx.fd, &target, &td, names),
            }
        }
        _ => unreachable!("clifford context only serves thm1/thm2 modes"),
    };
    Ok(Some(match cert {
        Ok(c) => WordOutcome::Certificate { word: entry.word.clone(), certificate: c },
        Err(e) => match e {
            Error::PreconditionFailed(_) | Error::DegenerateConfiguration(_) => {
                WordOutcome::Skipped { word: entry.word.clone(), reason: e.to_string() }
            }
            other => {
                WordOutcome::CheckerError { word: entry.word.clone(), error: other.to_string() }
            }
        },
    }))
}

fn probe_word_sp(f: &SpMatrix, mode: ProbeMode, entry: &WordEntry) -> Result<Option<WordOutcome>> {
    let g = entry.element.as_sp()?;
    let g_in_form = |form: FormTag| -> Result<SpMatrix> {
        if g.form == form {
            Ok(g.clone())
        } else {
            g.transport()
        }
    };
    let names = ("f".to_string(), entry.word.clone());
    let outcome = match mode {
        ProbeMode::ThmqLox => {
            let h = g_in_form(FormTag::J2)?;
            if sp_classify(&h)?.kind != Kind::Loxodromic {
                return Ok(None);
            }
            if h.fixes_o() || h.fixes_infinity() {
                return Ok(Some(WordOutcome::Skipped {
                    word: entry.word.clone(),
                    reason: "fixed-point set meets fix(f) = {o, ∞}".into(),
                }));
            }
            crate::sp::check_cao_parker(f, &h, names)
        }
        ProbeMode::ThmqHeisenberg => {
            let h = g_in_form(FormTag::J2)?;
            if sp_classify(&h)?.kind != Kind::Loxodromic {
                return Ok(None);
            }
            if h.fixes_o() {
                return Ok(Some(WordOutcome::Skipped {
                    word: entry.word.clone(),
                    reason: "word fixes o = fix(f)".into(),
                }));
            }
            crate::sp::check_sp_shimizu(f, &h, names)
        }
        ProbeMode::ThmqElliptic => {
            let h = g_in_form(FormTag::J1)?;
            if sp_classify(&h)?.kind != Kind::Loxodromic {
                return Ok(None);
            }
            crate::sp::check_sp_elliptic(f, &h, names)
        }
        _ => unreachable!("sp context only serves thmq modes"),
    };
    Ok(Some(match outcome {
        Ok(c) => WordOutcome::Certificate { word: entry.word.clone(), certificate: c },
        Err(e) => match e {
            Error::PreconditionFailed(_) | Error::DegenerateConfiguration(_) => {
                WordOutcome::Skipped { word: entry.word.clone(), reason: e.to_string() }
            }
            other => {
                WordOutcome::CheckerError { word: entry.word.clone(), error: other.to_string() }
            }
        },
    }))
}

/// Runs the probe. Deterministic for fixed inputs and seed, independent of
/// `threads` (results merge in canonical word order).
pub fn run_probe(
    group: &GroupPresentation,
    f: &Element,
    mode: ProbeMode,
    depth: usize,
    seed: u64,
    threads: usize,
) -> Result<ProbeReport> {
    let tmc = validate_test_map(f, mode)?;
    if !tmc.passed {
        return Err(Error::PreconditionFailed(format!(
            "test map fails the {} hypothesis: {}",
            mode.name(),
            tmc.reason.clone().unwrap_or_default()
        )));
    }
    match (mode.is_quaternionic(), &group.algebra) {
        (false, Algebra::Clifford(_)) | (true, Algebra::Sp(_)) | (true, Algebra::Su(_)) => {}
        _ => {
            return Err(Error::InvalidInput(
                "probe mode does not match the presentation algebra".into(),
            ))
        }
    }

    let (ball, words_examined, truncated) = word_ball(group, depth)?;
    let zariski = zariski_heuristic(group, seed)?;

    let clifford_ctx = if !mode.is_quaternionic() {
        let fm = f.as_clifford()?.clone();
        let fd = jorgensen::analyze(&fm)?;
        let conj = if matches!(mode, ProbeMode::Thm1Nonelliptic)
            || (matches!(mode, ProbeMode::Thm2Conjugate) && fd.invariants.kind == Kind::Parabolic)
        {
            let (h, f_inf) = jorgensen::conjugate_to_infinity(&fm)?;
            let fd_inf = jorgensen::analyze(&f_inf)?;
            Some((h, f_inf, fd_inf))
        } else {
            None
        };
        Some(CliffordProbeCtx { f: fm, fd, conj })
    } else {
        None
    };
    let sp_f = if mode.is_quaternionic() { Some(f.as_sp()?.clone()) } else { None };

    let evaluate = |entry: &WordEntry| -> Result<Option<WordOutcome>> {
        if let Some(ctx) = &clifford_ctx {
            probe_word_clifford(ctx, mode, entry)
        } else {
            probe_word_sp(sp_f.as_ref().expect("sp test map"), mode, entry)
        }
    };

    let indexed: Vec<Result<Option<WordOutcome>>> = if threads == 1 {
        ball.iter().map(&evaluate).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        pool.install(|| {
            let mut v: Vec<(usize, Result<Option<WordOutcome>>)> =
                ball.par_iter().enumerate().map(|(i, e)| (i, evaluate(e))).collect();
            v.sort_by_key(|(i, _)| *i);
            v.into_iter().map(|(_, r)| r).collect()
        })
    };

    let mut certificates = Vec::new();
    let mut skipped = Vec::new();
    let mut loxodromic_found = 0usize;
    for outcome in indexed {
        match outcome? {
            None => {}
            Some(WordOutcome::Certificate { certificate, .. }) => {
                loxodromic_found += 1;
                certificates.push(certificate);
            }
            Some(other) => {
                loxodromic_found += 1;
                skipped.push(other);
            }
        }
    }

    let violation = certificates.iter().find(|c| !c.satisfied);
    let violation_word = violation.map(|c| c.pair.1.clone());
    let violation_found = violation.is_some();
    let conclusion = match &violation_word {
        Some(w) => format!("violation found at word {w}"),
        None => format!("no violation up to depth {depth} (not a discreteness claim)"),
    };

    Ok(ProbeReport {
        schema: crate::SCHEMA.to_string(),
        mode,
        depth,
        seed,
        words_examined,
        distinct_elements: ball.len(),
        loxodromic_found,
        truncated,
        test_map_check: tmc,
        zariski_evidence: zariski,
        certificates,
        skipped,
        violation_found,
        violation_word,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::CliffordNumber;

    fn modular() -> GroupPresentation {
        GroupPresentation {
            algebra: Algebra::Clifford(0),
            generators: vec![
                ("T".into(), Element::Clifford(CliffordMatrix::from_reals(0, 1.0, 1.0, 0.0, 1.0))),
                ("S".into(), Element::Clifford(CliffordMatrix::inversion(0))),
            ],
            metadata: String::new(),
        }
    }

    #[test]
    fn single_generator_ball() {
        let g = GroupPresentation {
            algebra: Algebra::Clifford(0),
            generators: vec![(
                "D".into(),
                Element::Clifford(CliffordMatrix::diagonal(CliffordNumber::scalar(0, 2.0)).unwrap()),
            )],
            metadata: String::new(),
        };
        let (ball, _, truncated) = word_ball(&g, 3).unwrap();
        assert!(!truncated);
        let words: Vec<&str> = ball.iter().map(|e| e.word.as_str()).collect();
        assert_eq!(words, vec!["D", "D^-1", "D D", "D^-1 D^-1", "D D D", "D^-1 D^-1 D^-1"]);
    }

    #[test]
    fn modular_ball_dedup() {
        let (ball, examined, _) = word_ball(&modular(), 2).unwrap();
        // 4 letters plus 4·3 reduced two-letter words
        assert_eq!(examined, 16);
        // S⁻¹ ~ −S dies, S T ~ −(S⁻¹ T) dies, ...
        assert!(ball.len() < 16, "{} distinct", ball.len());
        // the ball at L is a prefix of the ball at L+1
        let (ball3, _, _) = word_ball(&modular(), 3).unwrap();
        for (a, b) in ball.iter().zip(ball3.iter()) {
            assert_eq!(a.word, b.word);
        }
    }

    #[test]
    fn zariski_examples() {
        // shared fixed point ∞
        let shared = GroupPresentation {
            algebra: Algebra::Clifford(0),
            generators: vec![
                ("A".into(), Element::Clifford(CliffordMatrix::from_reals(0, 1.0, 1.0, 0.0, 1.0))),
                ("B".into(), Element::Clifford(CliffordMatrix::from_reals(0, 1.0, 2.0, 0.0, 1.0))),
            ],
            metadata: String::new(),
        };
        let ev = zariski_heuristic(&shared, 1).unwrap();
        assert!(!ev.no_common_boundary_fixed_point);
        assert_eq!(ev.label, "fails");

        let ev2 = zariski_heuristic(&modular(), 1).unwrap();
        assert!(ev2.no_common_boundary_fixed_point);
        assert!(ev2.irreducibility_not_disproved);
        assert_eq!(ev2.label, "not_disproved");

        // a single loxodromic generator fixes two boundary points
        let single = GroupPresentation {
            algebra: Algebra::Clifford(0),
            generators: vec![(
                "D".into(),
                Element::Clifford(CliffordMatrix::diagonal(CliffordNumber::scalar(0, 2.0)).unwrap()),
            )],
            metadata: String::new(),
        };
        let ev3 = zariski_heuristic(&single, 1).unwrap();
        assert!(!ev3.no_common_boundary_fixed_point);
    }

    #[test]
    fn test_map_gates() {
        // diag(2, 1/2) has β = 2.25: fails the loxodromic gate
        let d = Element::Clifford(CliffordMatrix::diagonal(CliffordNumber::scalar(0, 2.0)).unwrap());
        let chk = validate_test_map(&d, ProbeMode::Thm1Lox).unwrap();
        assert!(!chk.passed);
        // T is a translation: passes the non-elliptic gate with ρ = 0
        let t = Element::Clifford(CliffordMatrix::from_reals(0, 1.0, 1.0, 0.0, 1.0));
        let chk = validate_test_map(&t, ProbeMode::Thm1Nonelliptic).unwrap();
        assert!(chk.passed, "{:?}", chk.reason);
        // depth-0 edge: empty loxodromic set
        let report = run_probe(&modular(), &t, ProbeMode::Thm1Nonelliptic, 0, 7, 1).unwrap();
        assert_eq!(report.loxodromic_found, 0);
        assert!(!report.violation_found);
        assert!(report.conclusion.contains("no violation"));
    }

    #[test]
    fn modular_nonelliptic_soundness_small_depth() {
        let t = Element::Clifford(CliffordMatrix::from_reals(0, 1.0, 1.0, 0.0, 1.0));
        let report = run_probe(&modular(), &t, ProbeMode::Thm1Nonelliptic, 4, 7, 1).unwrap();
        assert!(report.loxodromic_found > 0);
        assert!(!report.violation_found, "violation at {:?}", report.violation_word);
        for c in &report.certificates {
            assert!(c.satisfied, "unsatisfied at {:?}: lhs={} rhs={}", c.pair, c.lhs, c.rhs);
        }
    }

    #[test]
    fn determinism_across_thread_counts() {
        let t = Element::Clifford(CliffordMatrix::from_reals(0, 1.0, 1.0, 0.0, 1.0));
        let r1 = run_probe(&modular(), &t, ProbeMode::Thm1Nonelliptic, 4, 42, 1).unwrap();
        let r4 = run_probe(&modular(), &t, ProbeMode::Thm1Nonelliptic, 4, 42, 4).unwrap();
        let s1 = serde_json::to_string(&r1).unwrap();
        let s4 = serde_json::to_string(&r4).unwrap();
        assert_eq!(s1, s4);
    }
}
