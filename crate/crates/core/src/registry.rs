//! Bundled example groups, test maps and sequences. Everything here passes
//! its algebra's validator; the quantitative test-map parameters were fixed
//! by measuring the relevant word balls once and leaving margin (see the
//! comments at each constructor).

use crate::clifford::CliffordNumber;
use crate::error::Error;
use crate::mobius::CliffordMatrix;
use crate::probe::{Algebra, Element, GroupPresentation};
use crate::quat::{QuatMatrix, Quaternion};
use crate::sp::{heisenberg, FormTag, SpMatrix};
use crate::Result;

/// Names `gen` accepts.
pub fn names() -> Vec<&'static str> {
    vec![
        "modular",
        "picard",
        "sp_lattice",
        "su_sample",
        "dense",
        "testmap_lox",
        "testmap_lox_dense",
        "testmap_nonelliptic",
        "testmap_elliptic",
        "testmap_thmq_lox",
        "testmap_heisenberg",
        "testmap_thmq_elliptic",
        "cp_sequence",
    ]
}

fn real_matrix(n: u32, a: f64, b: f64, c: f64, d: f64) -> Element {
    Element::Clifford(CliffordMatrix::from_reals(n, a, b, c, d))
}

/// The modular group ⟨T, S⟩ = ⟨[[1,1],[0,1]], [[0,−1],[1,0]]⟩ at n = 0.
pub fn modular() -> GroupPresentation {
    GroupPresentation {
        algebra: Algebra::Clifford(0),
        generators: vec![
            ("T".into(), real_matrix(0, 1.0, 1.0, 0.0, 1.0)),
            ("S".into(), real_matrix(0, 0.0, -1.0, 1.0, 0.0)),
        ],
        metadata: "modular group PSL(2,Z), discrete".into(),
    }
}

/// The Picard group at n = 1: the modular generators plus the translation
/// by i₁.
pub fn picard() -> GroupPresentation {
    let ti = CliffordMatrix::translation(CliffordNumber::vector(1, &[0.0, 1.0]));
    GroupPresentation {
        algebra: Algebra::Clifford(1),
        generators: vec![
            ("T".into(), real_matrix(1, 1.0, 1.0, 0.0, 1.0)),
            ("S".into(), real_matrix(1, 0.0, -1.0, 1.0, 0.0)),
            ("Ti".into(), Element::Clifford(ti)),
        ],
        metadata: "Picard group PSL(2,Z[i]), discrete".into(),
    }
}

/// An integral sample in Sp(1,1) under J₂: the o↔∞ swap and two vertical
/// Heisenberg translations. Lipschitz-integer entries make it discrete.
pub fn sp_lattice() -> GroupPresentation {
    let mut sigma = QuatMatrix::zeros(2, 2);
    sigma[(0, 1)] = Quaternion::one();
    sigma[(1, 0)] = Quaternion::one();
    let ti = heisenberg(Quaternion::i(), &[], 1).expect("Re(i) = 0");
    let tj = heisenberg(Quaternion::j(), &[], 1).expect("Re(j) = 0");
    GroupPresentation {
        algebra: Algebra::Sp(1),
        generators: vec![
            ("sigma".into(), Element::Sp(SpMatrix::new(sigma, FormTag::J2).expect("2x2"))),
            ("Ti".into(), Element::Sp(ti)),
            ("Tj".into(), Element::Sp(tj)),
        ],
        metadata: "integral Sp(1,1) sample (Lipschitz-integer entries), discrete".into(),
    }
}

/// A complex-entry sample in SU(2,1) under J₂: a Heisenberg translation and
/// a real diagonal loxodromic. Exercises the complex-stays-complex path.
pub fn su_sample() -> GroupPresentation {
    let t = heisenberg(
        Quaternion::new(0.125, 0.3, 0.0, 0.0),
        &[Quaternion::new(0.5, 0.0, 0.0, 0.0)],
        2,
    )
    .expect("Re(s) = |ζ|²/2");
    let d = QuatMatrix::diagonal(&[
        Quaternion::real(2.0),
        Quaternion::real(0.5),
        Quaternion::one(),
    ]);
    GroupPresentation {
        algebra: Algebra::Su(2),
        generators: vec![
            ("Tc".into(), Element::Sp(t)),
            ("D".into(), Element::Sp(SpMatrix::new(d, FormTag::J2).expect("3x3"))),
        ],
        metadata: "SU(2,1) sample with complex entries".into(),
    }
}

/// Rotation angle of the dense pair, an irrational multiple of π.
pub const DENSE_THETA: f64 = 1.0;

/// The dense rotation–dilation pair in SL(2, C₁): `D = diag(2, 1/2)` and
/// `R = diag(e^{θi₁}, e^{−θi₁})` with `θ/π` irrational. Both fix `{0, ∞}`,
/// powers of `R` come arbitrarily close to the identity, and the group is
/// not discrete.
pub fn dense_pair() -> GroupPresentation {
    let d = CliffordMatrix::diagonal(CliffordNumber::scalar(1, 2.0)).expect("scalar is invertible");
    let rot = CliffordMatrix::diagonal(CliffordNumber::vector(
        1,
        &[DENSE_THETA.cos(), DENSE_THETA.sin()],
    ))
    .expect("unit vector is invertible");
    GroupPresentation {
        algebra: Algebra::Clifford(1),
        generators: vec![("D".into(), Element::Clifford(d)), ("R".into(), Element::Clifford(rot))],
        metadata: "dense rotation-dilation pair, not discrete".into(),
    }
}

/// Loxodromic matrix with axis `{p, q}` (finite reals) and eigenvalue
/// ratio `lambda² > 1`, built by conjugating `diag(λ, 1/λ)` with the map
/// sending `(0, ∞) → (p, q)`.
pub fn loxodromic_with_axis(n: u32, p: f64, q: f64, lambda: f64) -> CliffordMatrix {
    // h = [[q, p],[1, 1]] / √(q−p) sends 0 ↦ p, ∞ ↦ q, det = 1
    let s = 1.0 / (q - p).sqrt();
    let h = CliffordMatrix::from_reals(n, q * s, p * s, s, s);
    let d = CliffordMatrix::diagonal(CliffordNumber::scalar(n, lambda)).expect("scalar");
    d.conjugate_by(&h)
}

/// λ realizing `β = 4 sinh²(τ/2)` with `τ = 2 ln λ` for a rotation-free
/// loxodromic: `λ − 1/λ = √β`.
pub fn lambda_for_beta(beta: f64) -> f64 {
    let s = beta.sqrt();
    (s + (s * s + 4.0).sqrt()) / 2.0
}

/// Test map for the loxodromic mode, tuned for the bundled discrete groups:
/// a short axis (endpoints 0.0237 apart) keeps every cross-ratio against
/// lattice words large. Measured over the modular and Picard L = 6 balls:
/// min |[u,v,gu,gv]| ≈ 1.35e3 (at "T T T T T S" resp. its Picard twin),
/// while a violation would need |X| < 1/β − 1 ≈ 0.0204.
pub fn testmap_lox(n: u32) -> Element {
    Element::Clifford(loxodromic_with_axis(n, 0.0137, 0.0374, lambda_for_beta(0.98)))
}

/// Loxodromic test map tuned to *fire* on the dense pair: β = 0.25 with
/// axis {−1, 1}, so the dilation word "D" alone yields |X| = 9/16 and
/// lhs = 0.39 < 1.
pub fn testmap_lox_dense(n: u32) -> Element {
    Element::Clifford(loxodromic_with_axis(n, -1.0, 1.0, lambda_for_beta(0.25)))
}

/// Test map for the non-elliptic mode: the unit translation (λ = 1 clause,
/// ρ = 0). Inside both bundled discrete groups, so their runs are clean by
/// the theorem itself.
pub fn testmap_nonelliptic(n: u32) -> Element {
    real_matrix(n, 1.0, 1.0, 0.0, 1.0)
}

/// Rotation angle of the bundled elliptic test map: Θ = 2φ and
/// β = 4 sin² φ ≈ 0.372 sits just under the 4 sin²(π/10) ≈ 0.382 bound, so
/// a violation would need |[u,v,gu,gv]| < 1/β − 1/(4 sin²(π/10)) ≈ 0.068.
/// Measured min |X| over the L = 6 balls: 1.25 (modular), 0.25 (Picard,
/// at "Ti^-1 S Ti^-1").
pub const ELLIPTIC_PHI: f64 = 0.31;

/// Test map for the elliptic mode: the boundary-plane rotation by 2φ.
pub fn testmap_elliptic(n: u32) -> Element {
    real_matrix(n, ELLIPTIC_PHI.cos(), -ELLIPTIC_PHI.sin(), ELLIPTIC_PHI.sin(), ELLIPTIC_PHI.cos())
}

/// Quaternionic loxodromic test map `diag(1.1, 1/1.1, 1, …)` under J₂:
/// M_f = 0.1 + |1/1.1 − 1| ≈ 0.1909 < 1.
pub fn testmap_thmq_lox(n: usize) -> Element {
    let mut diag = vec![Quaternion::real(1.1), Quaternion::real(1.0 / 1.1)];
    diag.extend(std::iter::repeat(Quaternion::one()).take(n - 1));
    Element::Sp(SpMatrix::new(QuatMatrix::diagonal(&diag), FormTag::J2).expect("diag"))
}

/// Heisenberg test map with |ζ| = 1/4 < 1/2: `T_{s,ζ}`, `s = 1/32 + 0.1i`.
pub fn testmap_heisenberg(n: usize) -> Element {
    let mut zeta = vec![Quaternion::real(0.25)];
    zeta.extend(std::iter::repeat(Quaternion::zero()).take(n.saturating_sub(2)));
    let s = Quaternion::new(1.0 / 32.0, 0.1, 0.0, 0.0);
    Element::Sp(heisenberg(s, &zeta, n).expect("Re(s) = |ζ|²/2"))
}

/// Regular elliptic test map `diag(e^{iπ/6}, e^{iπ/12}, 1, …)` under J₁:
/// δ(f) = 2 sin(π/24) + 2 sin(π/12) ≈ 0.779 < 1.
pub fn testmap_thmq_elliptic(n: usize) -> Element {
    let unit = |theta: f64| Quaternion::new(theta.cos(), theta.sin(), 0.0, 0.0);
    let mut diag = vec![unit(std::f64::consts::PI / 6.0), unit(std::f64::consts::PI / 12.0)];
    diag.extend(std::iter::repeat(Quaternion::one()).take(n - 1));
    Element::Sp(SpMatrix::new(QuatMatrix::diagonal(&diag), FormTag::J1).expect("diag"))
}

/// Number of elements in the bundled Cao–Parker sequence.
pub const CP_SEQUENCE_LEN: usize = 12;

/// The proof-mechanism sequence: loxodromic `h_m = K · diag(e^{t_m},
/// e^{−t_m}, 1) · K⁻¹ → I` in Sp(2,1) with `t_m = 2^{1−m}` and `K` a fixed
/// member moving `{o, ∞}` off itself, so each `h_m` is loxodromic with
/// fixed points disjoint from those of the diagonal test map. The off-axis
/// blocks `b_m c_m → 0`, driving the Cao–Parker left side to 0.
pub fn cp_sequence() -> Vec<SpMatrix> {
    let k = cp_conjugator();
    let k_inv = k.inverse().expect("member");
    (1..=CP_SEQUENCE_LEN)
        .map(|m| {
            let t = (2.0f64).powi(1 - m as i32);
            let d = QuatMatrix::diagonal(&[
                Quaternion::real(t.exp()),
                Quaternion::real((-t).exp()),
                Quaternion::one(),
            ]);
            let d = SpMatrix::new(d, FormTag::J2).expect("diag");
            k.mul(&d).expect("form").mul(&k_inv).expect("form")
        })
        .collect()
}

/// `K = T_{s,ζ} · σ · T_{s',ζ'}` with σ the o↔∞ swap: maps o and ∞ to
/// generic boundary points.
fn cp_conjugator() -> SpMatrix {
    let t1 = heisenberg(Quaternion::new(0.5, 1.0, 0.0, 0.0), &[Quaternion::one()], 2)
        .expect("Re(s) = 1/2");
    let t2 = heisenberg(Quaternion::new(0.5, 0.0, 1.0, 0.0), &[Quaternion::k()], 2)
        .expect("Re(s) = 1/2");
    let mut swap = QuatMatrix::identity(3);
    swap[(0, 0)] = Quaternion::zero();
    swap[(1, 1)] = Quaternion::zero();
    swap[(0, 1)] = Quaternion::one();
    swap[(1, 0)] = Quaternion::one();
    let sigma = SpMatrix::new(swap, FormTag::J2).expect("3x3");
    t1.mul(&sigma).expect("form").mul(&t2).expect("form")
}

/// Looks up a bundled group by name.
pub fn group(name: &str) -> Result<GroupPresentation> {
    match name {
        "modular" => Ok(modular()),
        "picard" => Ok(picard()),
        "sp_lattice" => Ok(sp_lattice()),
        "su_sample" => Ok(su_sample()),
        "dense" => Ok(dense_pair()),
        _ => Err(Error::InvalidInput(format!("unknown bundled group: {name}"))),
    }
}

/// Looks up a bundled test map by name; `n` overrides the default algebra
/// size where meaningful.
pub fn test_map(name: &str, n: Option<u32>) -> Result<Element> {
    match name {
        "testmap_lox" => Ok(testmap_lox(n.unwrap_or(0))),
        "testmap_lox_dense" => Ok(testmap_lox_dense(n.unwrap_or(1))),
        "testmap_nonelliptic" => Ok(testmap_nonelliptic(n.unwrap_or(0))),
        "testmap_elliptic" => Ok(testmap_elliptic(n.unwrap_or(0))),
        "testmap_thmq_lox" => Ok(testmap_thmq_lox(n.unwrap_or(2) as usize)),
        "testmap_heisenberg" => Ok(testmap_heisenberg(n.unwrap_or(2) as usize)),
        "testmap_thmq_elliptic" => Ok(testmap_thmq_elliptic(n.unwrap_or(2) as usize)),
        _ => Err(Error::InvalidInput(format!("unknown bundled test map: {name}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kind::Kind;
    use crate::lorentz;
    use crate::probe::{validate_test_map, ProbeMode};
    use crate::sp::sp_classify;

    #[test]
    fn bundled_groups_validate() {
        for name in ["modular", "picard", "sp_lattice", "su_sample", "dense"] {
            group(name).unwrap().validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn bundled_test_maps_pass_their_gates() {
        let cases = [
            ("testmap_lox", ProbeMode::Thm1Lox, None),
            ("testmap_lox_dense", ProbeMode::Thm1Lox, None),
            ("testmap_nonelliptic", ProbeMode::Thm1Nonelliptic, None),
            ("testmap_elliptic", ProbeMode::Thm1Elliptic, None),
            ("testmap_thmq_lox", ProbeMode::ThmqLox, None),
            ("testmap_heisenberg", ProbeMode::ThmqHeisenberg, None),
            ("testmap_thmq_elliptic", ProbeMode::ThmqElliptic, None),
        ];
        for (name, mode, n) in cases {
            let f = test_map(name, n).unwrap();
            let chk = validate_test_map(&f, mode).unwrap();
            assert!(chk.passed, "{name} fails {mode:?}: {:?}", chk.reason);
        }
    }

    #[test]
    fn lox_axis_construction() {
        let m = loxodromic_with_axis(0, 0.25, 0.75, lambda_for_beta(0.5));
        assert!(m.validate(1e-9));
        let (inv, fps) = lorentz::classify_full(&m).unwrap();
        assert_eq!(inv.kind, Kind::Loxodromic);
        assert!((inv.beta - 0.5).abs() < 1e-9, "β = {}", inv.beta);
        let mut ends: Vec<f64> =
            fps.iter().map(|p| p.as_finite().unwrap().real_part()).collect();
        ends.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ends[0] - 0.25).abs() < 1e-7 && (ends[1] - 0.75).abs() < 1e-7, "{ends:?}");
    }

    #[test]
    fn cp_sequence_shrinks() {
        let seq = cp_sequence();
        assert_eq!(seq.len(), CP_SEQUENCE_LEN);
        let mut prev = f64::INFINITY;
        for (i, h) in seq.iter().enumerate() {
            assert!(h.validate(1e-9), "h_{} residual {:.3e}", i + 1, h.membership_residual());
            assert_eq!(sp_classify(h).unwrap().kind, Kind::Loxodromic, "h_{}", i + 1);
            assert!(!h.fixes_o() && !h.fixes_infinity());
            let bc = (h.mat[(0, 1)] * h.mat[(1, 0)]).norm();
            assert!(bc < prev, "bc not decreasing at m = {}", i + 1);
            prev = bc;
        }
    }
}
