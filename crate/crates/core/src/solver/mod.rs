//! Moment-map solver for the Hermitian metric on a fixed Higgs pair:
//! Chern connections, curvature, residuals, energies, the Weitzenböck
//! check, and the damped descent flow.

pub mod connection;
pub mod flow;
pub mod residual;

pub use connection::{
    chern_connection, complex_gauge_act, curvature, curvature_offdiagonal, ChernConnection,
    HiggsBundle,
};
pub use flow::{solve_metric, Preconditioner, SolveParams, SolveReport};
pub use residual::{energy, hs_residual, weitzenbock_field, weitzenbock_residual, ResidualFields};

use crate::higgs::endo::HermitianMetricField;
use crate::lattice::LatticeDomain;
use crate::linalg::CMat;
use num_complex::Complex64;

/// The decoupled limiting metric of the rank-2 Hitchin-section family:
/// `diag(√(|q|+ε), 1/√(|q|+ε))` in the standard frame, the metric that
/// H-orthogonalizes the `(1, ±√q)` eigenframe with det ≡ 1. Zeroes of q are
/// regularized by `eps`.
pub fn decoupled_metric(
    domain: &LatticeDomain,
    q: impl Fn(&[f64]) -> Complex64,
    eps: f64,
) -> HermitianMetricField {
    HermitianMetricField::from_fn(domain, 2, |x| {
        let a = (q(x).norm() + eps).sqrt();
        CMat::diag(&[Complex64::new(a, 0.0), Complex64::new(1.0 / a, 0.0)])
    })
}
