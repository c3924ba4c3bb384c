//! Sampling protocols behind the matrix-lemma suites.
//!
//! The rank-dependent constants (commutator-gap floor C_r, projection bounds
//! B and B′) are never assumed: each is measured by one of these protocols
//! and frozen into [`super::fixtures`] together with the protocol that
//! produced it. The suites then re-run the protocol on fresh seeds and check
//! the frozen constants with zero violations.

use super::projections::{commutator_gap_ratio, eigen_projections, norm_h, ProjectionOptions};
use crate::linalg::{eigenvalues, CMat};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Standard complex Gaussian matrix: entries with independent N(0, 1/2)
/// real and imaginary parts, so E|a_ij|² = 1.
pub fn gaussian_matrix(rng: &mut ChaCha8Rng, r: usize) -> CMat {
    let mut m = CMat::zeros(r);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..r {
        for j in 0..r {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(i, j)] = Complex64::new(re * s, im * s);
        }
    }
    m
}

/// Summary of a commutator-gap / eigenvalue-bound run.
#[derive(Clone, Debug)]
pub struct GapRatioStats {
    pub samples: usize,
    /// Samples skipped because |A|² − g(A) fell below the sentinel floor.
    pub sentinel_skips: usize,
    pub min_ratio: f64,
    /// Worst observed max|λ|/|A|_F (must stay ≤ 1).
    pub max_eig_over_norm: f64,
    pub eig_bound_violations: usize,
}

/// Denominator floor below which the ratio is treated as the +∞ sentinel.
pub const GAP_DENOM_FLOOR: f64 = 1e-9;

/// Slack allowed on |λ| ≤ |A| for eigensolver roundoff.
pub const EIG_BOUND_SLACK: f64 = 1e-12;

/// Sample `count` standard complex Gaussian r×r matrices; record the minimum
/// commutator-gap ratio and check the eigenvalue bound |λ| ≤ |A|_F on every
/// sample.
pub fn gap_ratio_oracle(rng: &mut ChaCha8Rng, r: usize, count: usize) -> GapRatioStats {
    let mut stats = GapRatioStats {
        samples: count,
        sentinel_skips: 0,
        min_ratio: f64::INFINITY,
        max_eig_over_norm: 0.0,
        eig_bound_violations: 0,
    };
    for _ in 0..count {
        let a = gaussian_matrix(rng, r);
        let norm = a.norm();
        for l in eigenvalues(&a) {
            let q = l.norm() / norm;
            if q > stats.max_eig_over_norm {
                stats.max_eig_over_norm = q;
            }
            if q > 1.0 + EIG_BOUND_SLACK {
                stats.eig_bound_violations += 1;
            }
        }
        let ratio = commutator_gap_ratio(&a, GAP_DENOM_FLOOR);
        if ratio.is_infinite() {
            stats.sentinel_skips += 1;
        } else if ratio < stats.min_ratio {
            stats.min_ratio = ratio;
        }
    }
    stats
}

/// One planted-gap commuting tuple: eigenvalues with a known minimum gap,
/// conjugated by a random frame, accepted only under the |θ| ≤ C₀(d+1) size
/// condition of the projection lemma.
#[derive(Clone, Debug)]
pub struct PlantedSample {
    pub theta: CMat,
    pub gap: f64,
    pub norm: f64,
}

/// Size constant C₀ of the planted protocol (|θ| ≤ C₀(d+1) filters frames).
pub const PLANT_C0: f64 = 4.0;

/// Draw one accepted planted-gap sample of rank `r`.
pub fn planted_gap_sample(rng: &mut ChaCha8Rng, r: usize) -> PlantedSample {
    loop {
        // log-uniform base gap in [0.3, 3]
        let logd = rng.gen::<f64>() * (3.0_f64 / 0.3).ln() + 0.3_f64.ln();
        let d0 = logd.exp();
        // eigenvalues on a jittered line: consecutive spacing >= 0.4·d0
        let mut alphas = Vec::with_capacity(r);
        for i in 0..r {
            let jr = (rng.gen::<f64>() - 0.5) * 0.6 * d0;
            let ji = (rng.gen::<f64>() - 0.5) * 0.6 * d0;
            alphas.push(Complex64::new(i as f64 * d0 + jr, ji));
        }
        let mut gap = f64::INFINITY;
        for i in 0..r {
            for j in i + 1..r {
                gap = gap.min((alphas[i] - alphas[j]).norm());
            }
        }
        if gap < 0.05 * d0 {
            continue;
        }
        // random frame with bounded distortion
        let mut g = CMat::identity(r);
        let noise = gaussian_matrix(rng, r);
        let strength = rng.gen::<f64>() * 0.75;
        for i in 0..r {
            for j in 0..r {
                g[(i, j)] += noise[(i, j)] * strength;
            }
        }
        let Some(ginv) = g.inverse() else { continue };
        let theta = g * CMat::diag(&alphas) * ginv;
        let norm = theta.norm();
        if norm <= PLANT_C0 * (gap + 1.0) {
            return PlantedSample { theta, gap, norm };
        }
    }
}

/// Summary of a projection-lemma run over planted-gap samples.
#[derive(Clone, Debug)]
pub struct ProjectionStats {
    pub samples: usize,
    pub max_chi: f64,
    /// Minimum of |[θ†,π_i]| / (d·|χ_i|) over lines with |χ_i| above floor.
    pub min_commutator_ratio: f64,
    pub skipped_degenerate: usize,
}

/// |χ_i| below this floor gives no meaningful ratio and is skipped.
pub const CHI_FLOOR: f64 = 1e-12;

/// Measure the projection bounds on `count` planted-gap samples.
pub fn projection_oracle(rng: &mut ChaCha8Rng, r: usize, count: usize) -> ProjectionStats {
    let mut stats = ProjectionStats {
        samples: count,
        max_chi: 0.0,
        min_commutator_ratio: f64::INFINITY,
        skipped_degenerate: 0,
    };
    let h = CMat::identity(r);
    let opts = ProjectionOptions::default();
    for _ in 0..count {
        let sample = planted_gap_sample(rng, r);
        let proj = match eigen_projections(&[sample.theta], &h, opts) {
            Ok(p) => p,
            Err(_) => {
                stats.skipped_degenerate += 1;
                continue;
            }
        };
        let adj = sample.theta.adjoint();
        for i in 0..r {
            let chi = norm_h(&proj.chi[i], &h, &h);
            if chi > stats.max_chi {
                stats.max_chi = chi;
            }
            if chi > CHI_FLOOR {
                let comm = adj.commutator(&proj.pi[i]).norm();
                let ratio = comm / (sample.gap * chi);
                if ratio < stats.min_commutator_ratio {
                    stats.min_commutator_ratio = ratio;
                }
            }
        }
    }
    stats
}
