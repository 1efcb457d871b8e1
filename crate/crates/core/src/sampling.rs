//! Seeded random generators for algebra elements. Used by the Lorentz
//! reconstruction retry path, the Zariski heuristic, and the test suites;
//! everything is deterministic given the seed.

use crate::clifford::CliffordNumber;
use crate::mobius::{BoundaryPoint, CliffordMatrix};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense random element of `C_n` with coefficients in `(-1, 1)`.
pub fn random_element(rng: &mut ChaCha8Rng, n: u32) -> CliffordNumber {
    let dim = 1usize << n;
    let terms: Vec<(u32, f64)> = (0..dim)
        .map(|m| (m as u32, rng.random_range(-1.0..1.0)))
        .collect();
    CliffordNumber::from_terms(n, &terms)
}

/// Random paravector bounded away from zero.
pub fn random_vector(rng: &mut ChaCha8Rng, n: u32) -> CliffordNumber {
    loop {
        let parts: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v = CliffordNumber::vector(n, &parts);
        if v.norm() > 0.1 {
            return v;
        }
    }
}

/// Random element of `Γ_n`: a product of `factors` non-zero vectors.
pub fn random_gamma(rng: &mut ChaCha8Rng, n: u32, factors: usize) -> CliffordNumber {
    let mut acc = random_vector(rng, n);
    for _ in 1..factors {
        acc = &acc * &random_vector(rng, n);
    }
    acc
}

/// Random valid Clifford matrix: a word of length `len` in translations,
/// diagonal elements `diag(p, (p*)⁻¹)` and the inversion. Group closure
/// keeps the word in `SL(2, C_n)`.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: u32, len: usize) -> CliffordMatrix {
    let mut m = CliffordMatrix::identity(n);
    for _ in 0..len {
        let g = match rng.random_range(0..3u8) {
            0 => {
                let parts: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
                CliffordMatrix::translation(CliffordNumber::vector(n, &parts))
            }
            1 => {
                let v = random_gamma(rng, n, 2);
                let v = v.scale(rng.random_range(0.5..1.6) / v.norm().max(0.2));
                CliffordMatrix::diagonal(v).expect("Γ element is invertible")
            }
            _ => CliffordMatrix::inversion(n),
        };
        m = m.mat_mul(&g);
    }
    m
}

/// Random boundary point; `∞` with probability 1/8.
pub fn random_point(rng: &mut ChaCha8Rng, n: u32) -> BoundaryPoint {
    if rng.random_range(0..8) == 0 {
        BoundaryPoint::Infinity
    } else {
        random_finite_point(rng, n)
    }
}

pub fn random_finite_point(rng: &mut ChaCha8Rng, n: u32) -> BoundaryPoint {
    let parts: Vec<f64> = (0..=n).map(|_| rng.random_range(-2.0..2.0)).collect();
    BoundaryPoint::Finite(CliffordNumber::vector(n, &parts))
}
