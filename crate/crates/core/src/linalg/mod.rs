//! Dense linear algebra for small complex matrices.
//!
//! Everything in the crate works with endomorphism ranks r ≤ [`MAX_RANK`], so
//! matrices are stored inline and the decompositions are written directly:
//! Gaussian elimination with partial pivoting for inverses, cyclic Jacobi for
//! Hermitian eigenproblems, and a shifted Hessenberg QR iteration for general
//! complex eigenvalues (which doubles as the polynomial root finder through
//! companion matrices).

mod cmat;
mod eig;

pub use cmat::{CMat, MAX_RANK};
pub use eig::{eigenvalues, hermitian_eig, poly_roots, HermitianEig};

use num_complex::Complex64;

/// f64 machine epsilon, used for deflation / negligibility thresholds.
pub(crate) const EPS: f64 = f64::EPSILON;

/// `a ≈ b` in the relative sense with absolute floor `scale`.
pub fn approx_eq(a: Complex64, b: Complex64, tol: f64, scale: f64) -> bool {
    (a - b).norm() <= tol * (scale + a.norm().max(b.norm()))
}
