//! Small shared numerics: a Schur-based eigenvalue routine with bounded
//! iterations. nalgebra's `complex_eigenvalues` iterates to machine epsilon
//! without an iteration cap and can stall on spectra with systematically
//! repeated eigenvalues (every realified complex matrix has one), so we cap
//! the iterations and fall back to a tiny deterministic diagonal
//! perturbation, far below any clustering radius used downstream.

use nalgebra::{Complex, DMatrix};

/// Radius of the noise circle an eigensolver spreads around a defective
/// eigenvalue of a matrix with entries of size `scale`: ~(scale·eps)^{1/3},
/// padded by an order of magnitude.
pub(crate) fn defective_noise_radius(scale: f64) -> f64 {
    10.0 * (scale.max(1.0) * 2.2e-16).powf(1.0 / 3.0)
}

pub(crate) fn complex_eigenvalues_robust(m: &DMatrix<f64>) -> Vec<Complex<f64>> {
    let n = m.nrows();
    let max_iter = 100 * n.max(10);
    if let Some(schur) = nalgebra::linalg::Schur::try_new(m.clone(), 1e-13, max_iter) {
        return schur.complex_eigenvalues().iter().copied().collect();
    }
    // deterministic perturbations, growing from 1e-12
    for attempt in 1..=3 {
        let eps = 1e-12 * 10f64.powi(attempt - 1);
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] += eps * (i as f64 + 1.0);
        }
        if let Some(schur) = nalgebra::linalg::Schur::try_new(shifted, 1e-13, max_iter) {
            return schur.complex_eigenvalues().iter().copied().collect();
        }
    }
    // last resort: loose tolerance
    nalgebra::linalg::Schur::try_new(m.clone(), 1e-9, 10 * max_iter)
        .map(|s| s.complex_eigenvalues().iter().copied().collect())
        .unwrap_or_else(|| m.clone().complex_eigenvalues().iter().copied().collect())
}
