//! Moment-map, holomorphy and integrability residuals; energies; the
//! Weitzenböck identity check.

use super::connection::{
    chern_connection_cached, curvature, metric_caches, HiggsBundle, MetricCaches,
};
use crate::error::Result;
use crate::higgs::endo::{EndoFormField, HermitianMetricField};
use crate::higgs::ops::{adjoint_wrt_with, bracket, wedge_endo, wedge_square};
use crate::higgs::i_lambda_endo;
use crate::lattice::{LatticeDomain, ScalarField};
use crate::linalg::CMat;
use num_complex::Complex64;

/// γ(E) for the trivial bundle: deg E = 0.
pub const GAMMA: f64 = 0.0;

/// Per-site residual fields of the Hitchin-Simpson system.
pub struct ResidualFields {
    /// |iΛ(F^⊥ + [φ,φ†])|_H per site.
    pub momentmap: ScalarField,
    /// |∂̄_E φ|_H per site.
    pub holomorphy: ScalarField,
    /// |φ∧φ|_H per site.
    pub integrability: ScalarField,
}

/// The moment map iΛ(F^⊥ + [φ,φ†_H]) as an H-self-adjoint (0,0) field,
/// returned together with the curvature and the adjoint Higgs field.
pub struct MomentMap {
    pub field: EndoFormField,
    pub curvature: EndoFormField,
    pub phi_dag: EndoFormField,
}

pub fn moment_map_cached(
    h: &HermitianMetricField,
    bundle: &HiggsBundle,
    domain: &LatticeDomain,
    caches: &MetricCaches,
) -> Result<MomentMap> {
    let conn = chern_connection_cached(h, bundle, domain, caches)?;
    let f = curvature(&conn, domain)?;
    let phi_dag = adjoint_wrt_with(&bundle.phi, &|s| (h.mat(s), caches.inv[s]))?;
    let br = bracket(&bundle.phi, &phi_dag, domain)?;
    let total = f.add(&br);
    let mut m = i_lambda_endo(&total, domain)?;
    if GAMMA != 0.0 {
        for s in 0..m.site_count() {
            let mut mm = m.mat(0, s);
            for i in 0..m.rank {
                mm[(i, i)] -= Complex64::new(GAMMA, 0.0);
            }
            m.set_mat(0, s, &mm);
        }
    }
    Ok(MomentMap { field: m, curvature: f, phi_dag })
}

/// Moment-map, holomorphy, and integrability residual fields.
pub fn hs_residual(
    h: &HermitianMetricField,
    bundle: &HiggsBundle,
    domain: &LatticeDomain,
) -> Result<ResidualFields> {
    let caches = metric_caches(h);
    let mm = moment_map_cached(h, bundle, domain, &caches)?;
    let momentmap = ScalarField {
        data: (0..domain.site_count())
            .map(|s| {
                Complex64::new(
                    mm.field.norm_sq_at_h(s, &h.mat(s), &caches.inv[s]).sqrt(),
                    0.0,
                )
            })
            .collect(),
    };
    let dphi = bundle.dbar_e(&bundle.phi, domain)?;
    let holomorphy = ScalarField {
        data: (0..domain.site_count())
            .map(|s| {
                Complex64::new(dphi.norm_sq_at_h(s, &h.mat(s), &caches.inv[s]).sqrt(), 0.0)
            })
            .collect(),
    };
    let ws = wedge_square(&bundle.phi, domain)?;
    let integrability = ScalarField {
        data: (0..domain.site_count())
            .map(|s| Complex64::new(ws.norm_sq_at_h(s, &h.mat(s), &caches.inv[s]).sqrt(), 0.0))
            .collect(),
    };
    Ok(ResidualFields { momentmap, holomorphy, integrability })
}

/// Both sides of the energy identity: the direct Yang-Mills-Higgs energy
/// `∫ |F + [φ,φ†]|² + |d_Aφ|²` and the moment-map form
/// `∫ |iΛ(F + [φ,φ†] − γId)|² + γ²·r·Vol` (the ch₂ term vanishes on the
/// trivial bundle). They agree at solutions over closed (periodic) domains.
pub fn energy(
    h: &HermitianMetricField,
    bundle: &HiggsBundle,
    domain: &LatticeDomain,
) -> Result<(f64, f64)> {
    let caches = metric_caches(h);
    let conn = chern_connection_cached(h, bundle, domain, &caches)?;
    let f = curvature(&conn, domain)?;
    let phi_dag = adjoint_wrt_with(&bundle.phi, &|s| (h.mat(s), caches.inv[s]))?;
    let br = bracket(&bundle.phi, &phi_dag, domain)?;
    let total = f.add(&br);

    // d_Aφ for φ = varφ + varφ†:
    //   (2,0): ∂_H varφ      (1,1): ∂̄_E varφ + ∂_H varφ†   (0,2): ∂̄_E varφ†
    let d20 = covariant_del(&bundle.phi, &conn.alpha, domain)?;
    let d11a = bundle.dbar_e(&bundle.phi, domain)?;
    let d11b = covariant_del(&phi_dag, &conn.alpha, domain)?;
    let d11 = d11a.add(&d11b);
    let d02 = bundle.dbar_e(&phi_dag, domain)?;

    let mut e_direct = 0.0;
    let mut e_identity = 0.0;
    let m = i_lambda_endo(&total, domain)?;
    for s in 0..domain.site_count() {
        let w = domain.quad_weight(s);
        let hm = h.mat(s);
        let hinv = caches.inv[s];
        e_direct += w
            * (total.norm_sq_at_h(s, &hm, &hinv)
                + d20.norm_sq_at_h(s, &hm, &hinv)
                + d11.norm_sq_at_h(s, &hm, &hinv)
                + d02.norm_sq_at_h(s, &hm, &hinv));
        let mut msite = m.mat(0, s);
        for i in 0..msite.rank() {
            msite[(i, i)] -= Complex64::new(GAMMA, 0.0);
        }
        let madj = hinv * msite.adjoint() * hm;
        e_identity += w * (msite * madj).trace().re;
    }
    e_identity += GAMMA * GAMMA * bundle.rank() as f64 * domain.total_volume();
    Ok((e_direct, e_identity))
}

/// ∂_H M = ∂M + α∧M + (−1)^{deg} M∧α (graded), the (1,0) covariant piece.
pub fn covariant_del(
    m: &EndoFormField,
    alpha: &EndoFormField,
    domain: &LatticeDomain,
) -> Result<EndoFormField> {
    let mut out = crate::higgs::ops::endo_del(m, domain)?;
    let am = wedge_endo(alpha, m, domain)?;
    let ma = wedge_endo(m, alpha, domain)?;
    let sign = (m.p + m.q) % 2 == 1;
    out = if sign { out.add(&am).add(&ma) } else { out.add(&am).sub(&ma) };
    Ok(out)
}

/// L¹ norm of the Weitzenböck combination
/// `Δ|φ|² + 2|∇_Aφ|² + 2|[φ,φ†]|²` (Ricci ≡ 0 on flat domains); small at
/// solutions, where each term balances pointwise.
pub fn weitzenbock_residual(
    h: &HermitianMetricField,
    bundle: &HiggsBundle,
    domain: &LatticeDomain,
) -> Result<f64> {
    let combo = weitzenbock_field(h, bundle, domain)?;
    Ok(combo
        .data
        .iter()
        .enumerate()
        .map(|(s, v)| domain.quad_weight(s) * v.norm())
        .sum())
}

/// The pointwise Weitzenböck combination as a real scalar field.
pub fn weitzenbock_field(
    h: &HermitianMetricField,
    bundle: &HiggsBundle,
    domain: &LatticeDomain,
) -> Result<ScalarField> {
    let caches = metric_caches(h);
    let conn = chern_connection_cached(h, bundle, domain, &caches)?;
    let phi_dag = adjoint_wrt_with(&bundle.phi, &|s| (h.mat(s), caches.inv[s]))?;

    // |φ|² = |varφ|² + |varφ†|² = 2|varφ|²_H as a scalar field
    let phisq = ScalarField {
        data: (0..domain.site_count())
            .map(|s| {
                Complex64::new(
                    2.0 * bundle.phi.norm_sq_at_h(s, &h.mat(s), &caches.inv[s]),
                    0.0,
                )
            })
            .collect(),
    };
    let lap = crate::lattice::laplacian(&phisq, domain)?;

    // ∇_Aφ: all 2n covariant derivatives of every complex-frame component of
    // φ = varφ + varφ†, each carrying the form weight of its legs.
    let n = domain.complex_dim();
    let mut grad_sq = vec![0.0_f64; domain.site_count()];
    // components of varφ along dz_i and varφ† along dz̄_i
    for part in [&bundle.phi, &phi_dag] {
        for c in 0..part.comp_count() {
            for dir in 0..n {
                let dz = entry_derivative(part, c, domain, dir, true);
                let dzb = entry_derivative(part, c, domain, dir, false);
                for s in 0..domain.site_count() {
                    let hm = h.mat(s);
                    let hinv = caches.inv[s];
                    // D_z = ∂_z + [α_dir, ·], D_z̄ = ∂_z̄ + [β_dir, ·]
                    let mz = dz[s] + conn.alpha.mat(dir, s).commutator(&part.mat(c, s));
                    let mzb = match &bundle.beta {
                        Some(b) => dzb[s] + b.mat(dir, s).commutator(&part.mat(c, s)),
                        None => dzb[s],
                    };
                    let nz = ((mz * (hinv * mz.adjoint() * hm)).trace().re).max(0.0);
                    let nzb = ((mzb * (hinv * mzb.adjoint() * hm)).trace().re).max(0.0);
                    // weight 2 per covector leg: the φ component and the
                    // derivative direction
                    grad_sq[s] += 4.0 * (nz + nzb);
                }
            }
        }
    }

    let br = bracket(&bundle.phi, &phi_dag, domain)?;
    let mut out = ScalarField::zeros(domain);
    for s in 0..domain.site_count() {
        let brn = br.norm_sq_at_h(s, &h.mat(s), &caches.inv[s]);
        let v = lap.data[s].re + 2.0 * grad_sq[s] + 2.0 * brn;
        out.data[s] = Complex64::new(v, 0.0);
    }
    Ok(out)
}

/// ∂_{z_dir} (holo = true) or ∂_{z̄_dir} of one component of an endo field,
/// per site.
fn entry_derivative(
    f: &EndoFormField,
    comp: usize,
    domain: &LatticeDomain,
    dir: usize,
    holo: bool,
) -> Vec<CMat> {
    let r = f.rank;
    let mut out = vec![CMat::zeros(r); domain.site_count()];
    let isign = if holo { -0.5 } else { 0.5 };
    for i in 0..r {
        for j in 0..r {
            let plane = f.entry_plane(comp, i, j);
            let dx = crate::lattice::diff::partial_axis(domain, &plane, 2 * dir);
            let dy = crate::lattice::diff::partial_axis(domain, &plane, 2 * dir + 1);
            for s in 0..domain.site_count() {
                out[s][(i, j)] = dx[s] * 0.5 + dy[s] * Complex64::new(0.0, isign);
            }
        }
    }
    out
}
