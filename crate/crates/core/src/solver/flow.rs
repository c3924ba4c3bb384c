//! Damped moment-map descent for the Hermitian metric.
//!
//! The metric is updated multiplicatively, `H ← H^{1/2}·exp(−step·δ)·H^{1/2}`
//! with δ the (optionally preconditioned) plain-Hermitian representative
//! `H^{1/2} m H^{−1/2}` of the moment map m = iΛ(F^⊥ + [φ,φ†]). Steps are
//! accepted only when the volume-normalized L² residual does not increase,
//! so the recorded residual history is non-increasing from the first
//! iteration; the step grows on acceptance and halves on rejection.

use super::connection::{metric_caches, HiggsBundle, MetricCaches};
use super::residual::moment_map_cached;
use crate::error::{HsError, Result};
use crate::higgs::endo::HermitianMetricField;
use crate::lattice::diff::{fft_plan, fft_xi, for_each_lane};
use crate::lattice::{DomainKind, LatticeDomain};
use crate::linalg::{hermitian_eig, CMat};
use num_complex::Complex64;
use serde::Serialize;
use std::time::Instant;

/// Linear step conditioner applied to the descent direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Preconditioner {
    /// `(I + step·Δ_h/2)⁻¹` per matrix entry: frequency space on the torus,
    /// sine transform of the 5-point stencil on Dirichlet patches. Keeps the
    /// flow first-order while removing the `h²` step ceiling of the plain
    /// heat flow.
    Spectral,
    /// Plain explicit descent.
    None,
}

#[derive(Clone, Debug)]
pub struct SolveParams {
    /// Initial step; adapted by the acceptance loop.
    pub step: f64,
    /// Volume-normalized L² target for the moment-map residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Project the flow onto trace-free directions, preserving det H.
    pub sl_mode: bool,
    pub preconditioner: Preconditioner,
    /// Fixed boundary metric for Dirichlet patches (whole field supplied,
    /// only the boundary ring is read).
    pub boundary: Option<HermitianMetricField>,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            step: 0.5,
            tol: 1e-8,
            max_iter: 5000,
            sl_mode: false,
            preconditioner: Preconditioner::Spectral,
            boundary: None,
        }
    }
}

/// Iteration record of one metric solve.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub iterations: usize,
    pub residual_l2: Vec<f64>,
    pub residual_linf: Vec<f64>,
    pub converged: bool,
    pub final_energy: Option<(f64, f64)>,
    /// Wall time; excluded from deterministic artifacts (manifests carry it).
    #[serde(skip)]
    pub wall_time_ms: f64,
}

struct ResidualEval {
    /// Plain-Hermitian representatives H^{1/2} m H^{-1/2} per site.
    m_tilde: Vec<CMat>,
    l2: f64,
    linf: f64,
}

fn eval_residual(
    h: &HermitianMetricField,
    bundle: &HiggsBundle,
    domain: &LatticeDomain,
    caches: &MetricCaches,
    sl_mode: bool,
) -> Result<ResidualEval> {
    let mm = moment_map_cached(h, bundle, domain, caches)?;
    let sites = domain.site_count();
    let mut m_tilde = Vec::with_capacity(sites);
    let mut l2 = 0.0;
    let mut vol = 0.0;
    let mut linf: f64 = 0.0;
    // On Dirichlet patches the boundary ring is data, not unknowns: its
    // one-sided-stencil residual is irreducible and excluded from the
    // convergence metric (hs_residual still reports it per site).
    let skip_boundary = domain.kind() == DomainKind::DirichletPatch;
    for s in 0..sites {
        let mut m = mm.field.mat(0, s);
        if sl_mode {
            m = m.traceless_part();
        }
        let mt = (caches.sqrt[s] * m * caches.inv_sqrt[s]).hermitian_part();
        if !(skip_boundary && domain.is_boundary(s)) {
            let nsq = mt.norm_sq();
            l2 += domain.quad_weight(s) * nsq;
            vol += domain.quad_weight(s);
            linf = linf.max(nsq);
        }
        m_tilde.push(mt);
    }
    Ok(ResidualEval { m_tilde, l2: (l2 / vol).sqrt(), linf: linf.sqrt() })
}

/// Apply `(I + c·Δ_h/2)⁻¹` to each matrix-entry plane of the per-site
/// Hermitian direction field.
fn precondition(
    domain: &LatticeDomain,
    dir: &mut [CMat],
    c: f64,
    interior_only: bool,
) {
    let r = dir[0].rank();
    let sites = domain.site_count();
    match domain.kind() {
        DomainKind::PeriodicTorus => {
            let dims = domain.real_dim();
            // |ξ|² per site index
            let mut mult = vec![0.0_f64; sites];
            for (s, m) in mult.iter_mut().enumerate() {
                let idx = domain.decompose(s);
                let mut xi2 = 0.0;
                for k in 0..dims {
                    let xi = fft_xi(idx[k], domain.shape()[k], domain.span(k));
                    xi2 += xi * xi;
                }
                *m = 1.0 / (1.0 + 0.5 * c * xi2);
            }
            let mut plane = vec![Complex64::new(0.0, 0.0); sites];
            for i in 0..r {
                for j in 0..r {
                    for s in 0..sites {
                        plane[s] = dir[s][(i, j)];
                    }
                    for axis in 0..dims {
                        let n = domain.shape()[axis];
                        let fwd = fft_plan(n, true);
                        for_each_lane(domain, &mut plane, axis, |lane| fwd.process(lane));
                    }
                    for s in 0..sites {
                        plane[s] *= mult[s];
                    }
                    for axis in 0..dims {
                        let n = domain.shape()[axis];
                        let inv = fft_plan(n, false);
                        for_each_lane(domain, &mut plane, axis, |lane| {
                            inv.process(lane);
                            for v in lane.iter_mut() {
                                *v /= n as f64;
                            }
                        });
                    }
                    for s in 0..sites {
                        dir[s][(i, j)] = plane[s];
                    }
                }
            }
        }
        DomainKind::DirichletPatch => {
            let dims = domain.real_dim();
            // Dirichlet 5-point eigenvalues through DST-I per axis, applied
            // on the interior block; the boundary ring stays zero.
            let mut plane = vec![Complex64::new(0.0, 0.0); sites];
            for i in 0..r {
                for j in 0..r {
                    for s in 0..sites {
                        plane[s] =
                            if interior_only && domain.is_boundary(s) {
                                Complex64::new(0.0, 0.0)
                            } else {
                                dir[s][(i, j)]
                            };
                    }
                    for axis in 0..dims {
                        dst_i_axis(domain, &mut plane, axis, false);
                    }
                    for (s, v) in plane.iter_mut().enumerate() {
                        let idx = domain.decompose(s);
                        let mut lam = 0.0;
                        let mut inside = true;
                        for k in 0..dims {
                            let m = idx[k];
                            let nk = domain.shape()[k];
                            if m == 0 || m == nk - 1 {
                                inside = false;
                                break;
                            }
                            let mm1 = nk - 1; // interior modes span 1..nk-1
                            let hk = domain.spacing()[k];
                            let sn = (std::f64::consts::PI * m as f64 / (2.0 * mm1 as f64)).sin();
                            lam += 4.0 * sn * sn / (hk * hk);
                        }
                        if inside {
                            *v /= 1.0 + 0.5 * c * lam;
                        } else {
                            *v = Complex64::new(0.0, 0.0);
                        }
                    }
                    for axis in 0..dims {
                        dst_i_axis(domain, &mut plane, axis, true);
                    }
                    for s in 0..sites {
                        dir[s][(i, j)] = plane[s];
                    }
                }
            }
        }
    }
}

/// DST-I along one axis through the odd extension and a complex FFT. With
/// `normalize` the inverse scaling 2/(2(N-1)) is applied, so a forward +
/// normalized pass is the identity on zero-boundary lanes.
fn dst_i_axis(domain: &LatticeDomain, data: &mut [Complex64], axis: usize, normalize: bool) {
    let n = domain.shape()[axis]; // sites incl. boundary; interior = n-2
    let ext = 2 * (n - 1);
    let plan = fft_plan(ext, true);
    let mut buf = vec![Complex64::new(0.0, 0.0); ext];
    let scale = if normalize { 4.0 / ext as f64 } else { 1.0 };
    for_each_lane(domain, data, axis, |lane| {
        buf.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        // odd extension over [0, 2(n-1)): y_m = x_m for 1..n-1, y_{2(n-1)-m} = -x_m
        for m in 1..n - 1 {
            buf[m] = lane[m];
            buf[ext - m] = -lane[m];
        }
        plan.process(&mut buf);
        // FFT of an odd sequence is -2i × DST; undo the factor so that two
        // passes reproduce the input up to the ext/2 normalization
        lane[0] = Complex64::new(0.0, 0.0);
        lane[n - 1] = Complex64::new(0.0, 0.0);
        for m in 1..n - 1 {
            lane[m] = buf[m] * Complex64::new(0.0, 0.5) * scale;
        }
    });
}

/// Solve the moment-map equation for H on a fixed Higgs bundle by damped
/// multiplicative descent. Returns the converged metric and the iteration
/// report; divergence (residual growing 10× from its running minimum)
/// carries the partial report in the error.
pub fn solve_metric(
    domain: &LatticeDomain,
    bundle: &HiggsBundle,
    h0: &HermitianMetricField,
    params: &SolveParams,
) -> Result<(HermitianMetricField, SolveReport)> {
    let t0 = Instant::now();
    h0.check_domain(domain)?;
    bundle.phi.check_domain(domain)?;

    let mut h = h0.clone();
    h.unit_det = params.sl_mode;
    if let Some(bdry) = &params.boundary {
        bdry.check_domain(domain)?;
        for s in 0..domain.site_count() {
            if domain.is_boundary(s) {
                h.set_mat(s, &bdry.mat(s));
            }
        }
    }

    // reference determinants for sl_mode renormalization
    let det_ref: Vec<f64> = if params.sl_mode {
        (0..domain.site_count())
            .map(|s| hermitian_eig(&h.mat(s)).vals.iter().product())
            .collect()
    } else {
        Vec::new()
    };

    let mut caches = metric_caches(&h);
    if !(caches.max_cond <= crate::higgs::ops::COND_LIMIT) {
        return Err(HsError::Conditioning {
            cond: caches.max_cond,
            limit: crate::higgs::ops::COND_LIMIT,
        });
    }

    let mut report = SolveReport {
        iterations: 0,
        residual_l2: Vec::new(),
        residual_linf: Vec::new(),
        converged: false,
        final_energy: None,
        wall_time_ms: 0.0,
    };

    let mut step = params.step;
    let mut eval = eval_residual(&h, bundle, domain, &caches, params.sl_mode)?;
    let mut min_res = eval.l2;
    let interior_only = domain.kind() == DomainKind::DirichletPatch;

    for iter in 0..params.max_iter {
        report.iterations = iter + 1;
        report.residual_l2.push(eval.l2);
        report.residual_linf.push(eval.linf);
        if eval.l2 <= params.tol {
            report.converged = true;
            break;
        }
        if eval.l2 > 10.0 * min_res && iter > 0 {
            report.wall_time_ms = t0.elapsed().as_secs_f64() * 1e3;
            return Err(HsError::Divergence {
                iteration: iter,
                residual: eval.l2,
                min_residual: min_res,
            });
        }

        let mut accepted = false;
        for _bt in 0..45 {
            // direction from the current residual representative
            let mut dir = eval.m_tilde.clone();
            if params.preconditioner == Preconditioner::Spectral {
                precondition(domain, &mut dir, step, interior_only);
            }
            // trial metric: H^{1/2} exp(−step·δ) H^{1/2}
            let mut trial = h.clone();
            for s in 0..domain.site_count() {
                if interior_only && domain.is_boundary(s) {
                    continue;
                }
                let e = hermitian_eig(&dir[s].hermitian_part());
                let exp = e.apply(|x| (-step * x).exp());
                let mut m = (caches.sqrt[s] * exp * caches.sqrt[s]).hermitian_part();
                if params.sl_mode {
                    let det: f64 = hermitian_eig(&m).vals.iter().product();
                    let fix = (det_ref[s] / det).powf(1.0 / h.rank as f64);
                    m = m.scale(Complex64::new(fix, 0.0));
                }
                trial.set_mat(s, &m);
            }
            let trial_caches = metric_caches(&trial);
            if !(trial_caches.max_cond <= crate::higgs::ops::COND_LIMIT) {
                step *= 0.5;
                continue;
            }
            let trial_eval =
                eval_residual(&trial, bundle, domain, &trial_caches, params.sl_mode)?;
            if trial_eval.l2 <= eval.l2 * (1.0 + 1e-12) {
                h = trial;
                caches = trial_caches;
                eval = trial_eval;
                min_res = min_res.min(eval.l2);
                step = (step * 1.3).min(1e6);
                accepted = true;
                break;
            }
            step *= 0.5;
            if step < 1e-14 {
                break;
            }
        }
        if !accepted {
            // stalled: no direction decreased the residual at any step size
            break;
        }
    }
    if !report.converged {
        // the loop exits before recording the last accepted state
        report.residual_l2.push(eval.l2);
        report.residual_linf.push(eval.linf);
        report.iterations = report.residual_l2.len();
        if eval.l2 <= params.tol {
            report.converged = true;
        }
    }
    report.wall_time_ms = t0.elapsed().as_secs_f64() * 1e3;
    Ok((h, report))
}
