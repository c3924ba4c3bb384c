//! Eigen-projections of commuting matrix tuples and the commutator-gap
//! inequality at matrix level.

use crate::error::{HsError, Result};
use crate::linalg::{eigenvalues, CMat};
use num_complex::Complex64;

/// Spectral and metric-orthogonal projections onto the joint eigenlines of a
/// commuting tuple with simple joint spectrum.
#[derive(Clone, Debug)]
pub struct Projections {
    /// Spectral (holomorphic) projections π_i: idempotent, commute with every
    /// φ_k, Σπ_i = Id.
    pub pi: Vec<CMat>,
    /// H-orthogonal projections π_i′ onto the same lines.
    pub pi_prime: Vec<CMat>,
    /// χ_i = π_i − π_i′.
    pub chi: Vec<CMat>,
    /// Joint eigenvalue tuples: `lambdas[i][k]` is the eigenvalue of φ_k on
    /// line i.
    pub lambdas: Vec<Vec<Complex64>>,
    /// Minimum joint-spectrum gap (plain covector norm).
    pub gap: f64,
}

/// Default tolerances for [`eigen_projections`].
#[derive(Clone, Copy, Debug)]
pub struct ProjectionOptions {
    /// Commutation residual allowed, relative to the tuple norm.
    pub commute_tol: f64,
    /// Minimum admissible joint gap, relative to the tuple norm.
    pub gap_tol: f64,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        ProjectionOptions { commute_tol: 1e-8, gap_tol: 1e-8 }
    }
}

/// Fixed generic combination coefficients: two alternatives in case the
/// first collapses a gap by coincidence.
const COMBO: [[Complex64; 2]; 2] = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.6180339887498949, 0.3819660112501051)],
    [Complex64::new(0.7548776662466927, -0.2451223337533073), Complex64::new(1.0, 0.0)],
];

/// Joint spectral projections of pairwise-commuting matrices `phis` with
/// simple joint spectrum, plus the H-orthogonal comparisons.
///
/// π_i is built from the Lagrange interpolation formula
/// `π_i = ∏_{j≠i} (A−λ_j)/(λ_i−λ_j)` applied to a generic linear combination
/// A of the tuple; π_i′ projects H-orthogonally onto the same line, and
/// `|π_i|² = 1 + |χ_i|²` in H-norms.
pub fn eigen_projections(
    phis: &[CMat],
    h: &CMat,
    opts: ProjectionOptions,
) -> Result<Projections> {
    assert!(!phis.is_empty());
    let r = phis[0].rank();
    let scale = phis.iter().map(|m| m.norm()).fold(0.0, f64::max).max(1e-300);
    for a in phis {
        for b in phis {
            let c = a.commutator(b);
            if c.norm() > opts.commute_tol * scale * scale {
                return Err(HsError::Integrability {
                    norm: c.norm(),
                    tol: opts.commute_tol * scale * scale,
                });
            }
        }
    }
    if h.inverse().is_none() {
        return Err(HsError::Conditioning { cond: f64::INFINITY, limit: 1e12 });
    }

    let mut chosen: Option<(CMat, Vec<Complex64>)> = None;
    for combo in COMBO.iter() {
        let mut a = CMat::zeros(r);
        for (k, m) in phis.iter().enumerate() {
            let c = combo[k % 2] * Complex64::new(1.0 + 0.13 * (k / 2) as f64, 0.0);
            a = a + m.scale(c);
        }
        let evs = eigenvalues(&a);
        let mut gap = f64::INFINITY;
        for i in 0..r {
            for j in i + 1..r {
                gap = gap.min((evs[i] - evs[j]).norm());
            }
        }
        if gap > opts.gap_tol * scale {
            chosen = Some((a, evs));
            break;
        }
    }
    let (a, evs) = chosen.ok_or_else(|| HsError::DegenerateSpectrum {
        gap: 0.0,
        tol: opts.gap_tol * scale,
    })?;

    let id = CMat::identity(r);
    let mut pi = Vec::with_capacity(r);
    for i in 0..r {
        let mut p = id;
        for j in 0..r {
            if j == i {
                continue;
            }
            let denom = evs[i] - evs[j];
            p = (p * (a - id.scale(evs[j]))).scale(denom.inv());
        }
        pi.push(p);
    }

    // per-direction eigenvalues on each line: λ_i^k = tr(φ_k π_i)/tr(π_i)
    let mut lambdas = vec![vec![Complex64::new(0.0, 0.0); phis.len()]; r];
    for i in 0..r {
        let tr = pi[i].trace();
        for (k, m) in phis.iter().enumerate() {
            lambdas[i][k] = (*m * pi[i]).trace() / tr;
        }
    }
    let mut gap = f64::INFINITY;
    for i in 0..r {
        for j in i + 1..r {
            let d: f64 =
                (0..phis.len()).map(|k| (lambdas[i][k] - lambdas[j][k]).norm_sqr()).sum::<f64>();
            gap = gap.min(d.sqrt());
        }
    }
    if !(gap > opts.gap_tol * scale) {
        return Err(HsError::DegenerateSpectrum { gap, tol: opts.gap_tol * scale });
    }

    // H-orthogonal projection onto range(π_i): u u† H/(u†Hu) with u the
    // strongest column of π_i.
    let mut pi_prime = Vec::with_capacity(r);
    for p in &pi {
        let mut best_col = 0;
        let mut best = -1.0;
        for j in 0..r {
            let n: f64 = (0..r).map(|i| p[(i, j)].norm_sqr()).sum();
            if n > best {
                best = n;
                best_col = j;
            }
        }
        let u: Vec<Complex64> = (0..r).map(|i| p[(i, best_col)]).collect();
        let hu = h.mul_vec(&u);
        let norm: Complex64 = u.iter().zip(&hu).map(|(ui, hui)| ui.conj() * hui).sum();
        let mut proj = CMat::zeros(r);
        for i in 0..r {
            for j in 0..r {
                proj[(i, j)] = u[i] * hu[j].conj() / norm.conj();
            }
        }
        pi_prime.push(proj);
    }
    let chi = pi.iter().zip(&pi_prime).map(|(p, pp)| *p - *pp).collect();
    Ok(Projections { pi, pi_prime, chi, lambdas, gap })
}

/// H-weighted Frobenius norm `√tr(M·H⁻¹M†H)`.
pub fn norm_h(m: &CMat, h: &CMat, h_inv: &CMat) -> f64 {
    ((*m) * (*h_inv * m.adjoint() * *h)).trace().re.max(0.0).sqrt()
}

/// `|[A,A†]|² / (|A|² − g(A))²` with `g(A) = Σ|λ_i|²` from the spectrum;
/// returns `+∞` when the denominator is below `tol` (normal matrices).
pub fn commutator_gap_ratio(a: &CMat, tol: f64) -> f64 {
    let evs = eigenvalues(a);
    let g: f64 = evs.iter().map(|l| l.norm_sqr()).sum();
    let denom = a.norm_sq() - g;
    if denom <= tol {
        return f64::INFINITY;
    }
    let c = a.commutator(&a.adjoint());
    c.norm_sq() / (denom * denom)
}
