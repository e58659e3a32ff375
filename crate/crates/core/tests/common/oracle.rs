//! Reference values computed without the library's d-matrix engines.

#![allow(dead_code, clippy::excessive_precision)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// Hermitian `J_y` for spin `twice_j / 2`, rows ordered `m = j … -j`, built
/// from `J_y = (J+ - J-) / 2i`.
pub fn hermitian_jy(twice_j: i32) -> DMatrix<Complex64> {
    let n = twice_j as usize + 1;
    let j = f64::from(twice_j) / 2.0;
    let mut jy = DMatrix::<Complex64>::zeros(n, n);
    for col in 0..n {
        let m = j - col as f64;
        if col > 0 {
            // <m+1| J+ |m>
            let up = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
            jy[(col - 1, col)] = Complex64::new(0.0, -0.5 * up);
        }
        if col + 1 < n {
            // -<m-1| J- |m>
            let down = (j * (j + 1.0) - m * (m - 1.0)).sqrt();
            jy[(col + 1, col)] = Complex64::new(0.0, 0.5 * down);
        }
    }
    jy
}

/// `exp(-iβJ_y)` by dense Hermitian eigendecomposition.
pub fn expm_rotation(twice_j: i32, beta: f64) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(hermitian_jy(twice_j));
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::cis(-beta * l)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// `max |a - b|` over entries, with `b` complex.
pub fn max_dev(a: &DMatrix<f64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (Complex64::new(*x, 0.0) - y).norm())
        .fold(0.0, f64::max)
}

/// `binom(n, k) c^a s^b` by repeated multiplication.
pub fn binomial_term(n: u64, k: u64, c: f64, a: i32, s: f64, b: i32) -> f64 {
    let mut binom = 1.0;
    for i in 0..k {
        binom = binom * (n - i) as f64 / (i + 1) as f64;
    }
    binom * c.powi(a) * s.powi(b)
}

/// `P(π/2)` of the x-polarized `N`-photon state for even `N`, from a
/// 50-digit evaluation of `(Σ_k (-1)^k √binom(N,k))² / (2^N 2π)`.
pub const EVEN_N_QUARTER_TURN: [(u32, f64); 32] = [
    (2, 1.3653335598566486e-2), (4, 2.0097392782250714e-3), (6, 3.494283107987392e-4),
    (8, 6.6121027851511598e-5), (10, 1.3179247035508365e-5), (12, 2.7214673917980018e-6),
    (14, 5.7661124635545459e-7), (16, 1.2458436778407538e-7), (18, 2.7336222723863326e-8),
    (20, 6.0733192538069151e-9), (22, 1.3632722203601755e-9), (24, 3.0866851699655938e-10),
    (26, 7.040436062077468e-11), (28, 1.6160834152160058e-11), (30, 3.7301806662391232e-12),
    (32, 8.6518166207583024e-13), (34, 2.0153725100177377e-13), (36, 4.7127257986768546e-14),
    (38, 1.1058266373849802e-14), (40, 2.6028797950000998e-15), (42, 6.1439521503767917e-16),
    (44, 1.4539830321260332e-16), (46, 3.4490037377348097e-17), (48, 8.1991232743719447e-18),
    (50, 1.9530213311374795e-18), (52, 4.6606563537598117e-19), (54, 1.1141136919737158e-19),
    (56, 2.6674862782453687e-20), (58, 6.396145458570358e-21), (60, 1.5358037328884177e-21),
    (62, 3.6924630672990439e-22), (64, 8.8884284025936713e-23),
];
