//! Scaling sweeps (ℰ, tφ) and the per-scale diagnostics.

use crate::error::{HsError, Result};
use crate::higgs::endo::{EndoFormField, HermitianMetricField};
use crate::higgs::ops::adjoint_wrt_with;
use crate::higgs::spectral::{hitchin_map, RootOptions, SpectralData};
use crate::higgs::{bracket, i_lambda_endo};
use crate::lattice::LatticeDomain;
use crate::solver::connection::{metric_caches, HiggsBundle};
use crate::solver::residual::moment_map_cached;
use crate::solver::{solve_metric, SolveParams, SolveReport};
use num_complex::Complex64;
use serde::Serialize;

/// A probe ball: center site and physical radius.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Probe {
    pub site: usize,
    pub radius: f64,
    /// Eigenvalue gap d(p) of the rescaled spectral data at the center.
    pub gap: f64,
}

/// Diagnostics of one sweep scale.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRecord {
    pub t: f64,
    /// r_t = ‖tφ‖_{L²} in the fixed background metric: exactly t·r₁.
    pub r_t: f64,
    /// sup-norms of the solved-metric diagnostics over the whole domain
    pub sup_i_lambda_f: f64,
    pub sup_comm_rescaled: f64,
    /// ∫|φ̂∧φ̂|² and ∫|d_Aφ̂|² (solved metric), the decoupling trend.
    pub l2sq_wedge_rescaled: f64,
    pub l2sq_da_phi_rescaled: f64,
    /// sup_{B(p)}|[φ̂,φ̂†]| per probe.
    pub probe_comm_sup: Vec<f64>,
    /// sup|φ̂|·√Vol / ‖φ̂‖_{L²} (solved-metric norms).
    pub sup_l2_ratio: f64,
    /// max_k ‖p_k(φ̂)‖^{1/k}_{L²} (background norms).
    pub max_char_norm: f64,
    /// κ(φ̂_t) snapshot: coefficient fields flattened per degree.
    pub kappa_snapshot: Vec<Vec<[f64; 2]>>,
    pub solve: SolveReportSummary,
}

/// The part of a [`SolveReport`] that goes into sweep records.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReportSummary {
    pub iterations: usize,
    pub converged: bool,
    pub final_residual: f64,
}

impl From<&SolveReport> for SolveReportSummary {
    fn from(r: &SolveReport) -> Self {
        SolveReportSummary {
            iterations: r.iterations,
            converged: r.converged,
            final_residual: r.residual_l2.last().copied().unwrap_or(f64::NAN),
        }
    }
}

/// Outcome of a whole sweep: records plus the solved metrics (kept for
/// downstream extraction).
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub metrics: Vec<HermitianMetricField>,
    /// Rescaled spectral data Θ(φ̂) with roots and discriminant filled.
    pub theta_rescaled: SpectralData,
    pub probes: Vec<Probe>,
}

/// Run `solve_metric` across `t_list`, warm-starting each solve from the
/// previous scale (the first scale starts from `h0`), and collect the
/// rescaled diagnostics. `probe_points` are physical coordinates; each gets
/// a ball of radius `min(0.1·span, dist to the discriminant mask)/2`.
pub fn scaling_sweep(
    domain: &LatticeDomain,
    phi: &EndoFormField,
    t_list: &[f64],
    h0: &HermitianMetricField,
    params: &SolveParams,
    probe_points: &[Vec<f64>],
) -> Result<SweepOutcome> {
    if t_list.len() < 4 || t_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HsError::ShapeMismatch(
            "t_list must be increasing with at least 4 entries".into(),
        ));
    }
    let r1 = phi.l2_norm(domain);
    if r1 == 0.0 {
        return Err(HsError::Normalization);
    }

    // rescaled spectral data (t-independent by homogeneity; computed from φ̂₁)
    let phi_hat = phi.scaled(Complex64::new(1.0 / r1, 0.0));
    let mut theta = hitchin_map(&phi_hat, domain, None)
        .map_err(|e| stage_err("hitchin_map", e))?;
    theta
        .ensure_discriminant(domain, None, RootOptions::default())
        .map_err(|e| stage_err("discriminant", e))?;

    let probes = place_probes(domain, &theta, probe_points);

    let mut records = Vec::with_capacity(t_list.len());
    let mut metrics = Vec::with_capacity(t_list.len());
    let mut h_prev = h0.clone();
    for &t in t_list {
        let phi_t = phi.scaled(Complex64::new(t, 0.0));
        let bundle = HiggsBundle::new(phi_t);
        let (h, report) = match solve_metric(domain, &bundle, &h_prev, params) {
            Ok(ok) => ok,
            Err(e) => return Err(stage_err(&format!("solve[t={t}]"), e)),
        };
        let record = sweep_record(domain, &bundle, &h, t, r1, &probes, &report)?;
        records.push(record);
        h_prev = h.clone();
        metrics.push(h);
    }
    Ok(SweepOutcome { records, metrics, theta_rescaled: theta, probes })
}

fn stage_err(stage: &str, e: HsError) -> HsError {
    HsError::Stage { stage: stage.to_string(), source: Box::new(e) }
}

fn place_probes(
    domain: &LatticeDomain,
    theta: &SpectralData,
    points: &[Vec<f64>],
) -> Vec<Probe> {
    let mask = theta.mask.as_ref().expect("discriminant computed");
    let gaps = theta.gap.as_ref().expect("gap computed");
    let span = (0..domain.real_dim()).map(|k| domain.span(k)).fold(f64::INFINITY, f64::min);
    points
        .iter()
        .map(|x| {
            let site = domain.nearest_site(x);
            let mut dist_to_mask = f64::INFINITY;
            for (s, &m) in mask.iter().enumerate() {
                if m {
                    dist_to_mask = dist_to_mask.min(domain.distance(site, s));
                }
            }
            let radius = 0.5 * (0.1 * span).min(dist_to_mask);
            Probe { site, radius, gap: gaps[site] }
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn sweep_record(
    domain: &LatticeDomain,
    bundle: &HiggsBundle,
    h: &HermitianMetricField,
    t: f64,
    r1: f64,
    probes: &[Probe],
    report: &SolveReport,
) -> Result<SweepRecord> {
    let r_t = t * r1;
    let caches = metric_caches(h);
    let mm = moment_map_cached(h, bundle, domain, &caches)?;
    let il_f = i_lambda_endo(&mm.curvature, domain)?;

    // rescaled Higgs field and its solved-metric diagnostics
    let phi_hat = bundle.phi.scaled(Complex64::new(1.0 / r_t, 0.0));
    let phi_hat_dag = adjoint_wrt_with(&phi_hat, &|s| (h.mat(s), caches.inv[s]))?;
    let br = bracket(&phi_hat, &phi_hat_dag, domain)?;

    let mut sup_il: f64 = 0.0;
    let mut sup_comm: f64 = 0.0;
    let mut l2sq_wedge = 0.0;
    let mut sup_phi_hat: f64 = 0.0;
    let mut l2sq_phi_hat = 0.0;
    for s in 0..domain.site_count() {
        let hm = h.mat(s);
        let hinv = caches.inv[s];
        sup_il = sup_il.max(il_f.norm_sq_at_h(s, &hm, &hinv));
        let brn = br.norm_sq_at_h(s, &hm, &hinv);
        sup_comm = sup_comm.max(brn);
        l2sq_wedge += domain.quad_weight(s) * brn;
        let ph = phi_hat.norm_sq_at_h(s, &hm, &hinv);
        sup_phi_hat = sup_phi_hat.max(ph);
        l2sq_phi_hat += domain.quad_weight(s) * ph;
    }

    // ∫|d_Aφ̂|²: the full covariant derivative of φ̂ = varφ̂ + varφ̂†
    let conn = crate::solver::connection::chern_connection_cached(h, bundle, domain, &caches)?;
    let d20 = crate::solver::residual::covariant_del(&phi_hat, &conn.alpha, domain)?;
    let d11a = bundle.dbar_e(&phi_hat, domain)?;
    let d11b = crate::solver::residual::covariant_del(&phi_hat_dag, &conn.alpha, domain)?;
    let d11 = d11a.add(&d11b);
    let d02 = bundle.dbar_e(&phi_hat_dag, domain)?;
    let mut l2sq_da = 0.0;
    for s in 0..domain.site_count() {
        let hm = h.mat(s);
        let hinv = caches.inv[s];
        l2sq_da += domain.quad_weight(s)
            * (d20.norm_sq_at_h(s, &hm, &hinv)
                + d11.norm_sq_at_h(s, &hm, &hinv)
                + d02.norm_sq_at_h(s, &hm, &hinv));
    }

    let probe_comm_sup = probes
        .iter()
        .map(|p| {
            let mut sup: f64 = 0.0;
            for s in 0..domain.site_count() {
                if domain.distance(p.site, s) <= p.radius {
                    sup = sup.max(br.norm_sq_at_h(s, &h.mat(s), &caches.inv[s]));
                }
            }
            sup.sqrt()
        })
        .collect();

    // κ(φ̂_t): p_k(tφ)/r_t^k, t-independent up to rounding
    let theta_t = hitchin_map(&phi_hat, domain, Some(1e-6))?;
    let kappa_snapshot: Vec<Vec<[f64; 2]>> = theta_t
        .coeffs
        .iter()
        .map(|c| c.data.iter().map(|v| [v.re, v.im]).collect())
        .collect();
    let max_char_norm = theta_t
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c.l2_norm(domain, true).powf(1.0 / (i + 1) as f64))
        .fold(0.0_f64, f64::max);

    Ok(SweepRecord {
        t,
        r_t,
        sup_i_lambda_f: sup_il.sqrt(),
        sup_comm_rescaled: sup_comm.sqrt(),
        l2sq_wedge_rescaled: l2sq_wedge,
        l2sq_da_phi_rescaled: l2sq_da,
        probe_comm_sup,
        sup_l2_ratio: sup_phi_hat.sqrt() * domain.total_volume().sqrt() / l2sq_phi_hat.sqrt(),
        max_char_norm,
        kappa_snapshot,
        solve: SolveReportSummary::from(report),
    })
}

/// Least-squares decay fit of one probe across the sweep.
#[derive(Clone, Debug, Serialize)]
pub struct DecayFit {
    pub probe_index: usize,
    pub gap: f64,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// slope / d(p): approximately constant (−C′) across probes.
    pub slope_over_gap: f64,
    /// Number of sweep points clipped at the 1e−14 floor and excluded.
    pub clipped: usize,
    pub degenerate: bool,
}

/// Fit `log sup_B(p)|[φ̂_t,φ̂_t†]|` against `r_t` per probe; values at or
/// below the 1e−14 floor are clipped and flagged, the fit running on the
/// unflooded prefix.
pub fn decay_fit(records: &[SweepRecord], probes: &[Probe]) -> Vec<DecayFit> {
    const FLOOR: f64 = 1e-14;
    probes
        .iter()
        .enumerate()
        .map(|(pi, p)| {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            let mut clipped = 0;
            for rec in records {
                let v = rec.probe_comm_sup[pi];
                if v <= FLOOR {
                    clipped += 1;
                    continue;
                }
                xs.push(rec.r_t);
                ys.push(v.ln());
            }
            if xs.len() < 2 {
                return DecayFit {
                    probe_index: pi,
                    gap: p.gap,
                    slope: f64::NAN,
                    intercept: f64::NAN,
                    r_squared: f64::NAN,
                    slope_over_gap: f64::NAN,
                    clipped,
                    degenerate: true,
                };
            }
            let n = xs.len() as f64;
            let mx = xs.iter().sum::<f64>() / n;
            let my = ys.iter().sum::<f64>() / n;
            let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
            let sxy: f64 =
                xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
            let slope = sxy / sxx;
            let intercept = my - slope * mx;
            let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
            DecayFit {
                probe_index: pi,
                gap: p.gap,
                slope,
                intercept,
                r_squared,
                slope_over_gap: slope / p.gap,
                clipped,
                degenerate: false,
            }
        })
        .collect()
}
