//! Chern connections, curvature, and the complex gauge action on the
//! trivialized bundle.

use crate::error::{HsError, Result};
use crate::higgs::endo::{EndoFormField, HermitianMetricField};
use crate::higgs::ops::{adjoint_wrt_with, endo_dbar, endo_del, wedge_endo};
use crate::lattice::LatticeDomain;
use crate::linalg::{hermitian_eig, CMat};
use num_complex::Complex64;

/// A Higgs pair on the trivialized bundle: the Higgs field φ and the
/// holomorphic-structure coefficient β with ∂̄_E = ∂̄ + β (β = None means the
/// product holomorphic structure).
#[derive(Clone, Debug)]
pub struct HiggsBundle {
    pub phi: EndoFormField,
    pub beta: Option<EndoFormField>,
}

impl HiggsBundle {
    pub fn new(phi: EndoFormField) -> Self {
        HiggsBundle { phi, beta: None }
    }

    pub fn rank(&self) -> usize {
        self.phi.rank
    }

    /// ∂̄_E of an End-valued form: entrywise ∂̄ plus the graded β bracket.
    pub fn dbar_e(&self, f: &EndoFormField, domain: &LatticeDomain) -> Result<EndoFormField> {
        let mut out = endo_dbar(f, domain)?;
        if let Some(beta) = &self.beta {
            let bf = wedge_endo(beta, f, domain)?;
            let fb = wedge_endo(f, beta, domain)?;
            let sign = (f.p + f.q) % 2 == 1;
            out = if sign { out.add(&bf).add(&fb) } else { out.add(&bf).sub(&fb) };
        }
        Ok(out)
    }
}

/// The metric (1,0) connection coefficient and its ingredients.
#[derive(Clone, Debug)]
pub struct ChernConnection {
    /// α = H⁻¹(∂H − β†H): the (1,0) coefficient of d_A = ∂̄_E + ∂_H.
    pub alpha: EndoFormField,
    /// Copy of the ∂̄_E coefficient, when nontrivial.
    pub beta: Option<EndoFormField>,
}

/// Entrywise ∂ of a metric field as a (1,0) End-valued form.
pub fn del_metric(h: &HermitianMetricField, domain: &LatticeDomain) -> Result<EndoFormField> {
    let r = h.rank;
    let mut out = EndoFormField::zeros(domain, r, 1, 0)?;
    let n = domain.complex_dim();
    let half = Complex64::new(0.5, 0.0);
    let mhalf_i = Complex64::new(0.0, -0.5);
    for dir in 0..n {
        for i in 0..r {
            for j in 0..r {
                let plane = h.entry_plane(i, j);
                let dx = crate::lattice::diff::partial_axis(domain, &plane, 2 * dir);
                let dy = crate::lattice::diff::partial_axis(domain, &plane, 2 * dir + 1);
                out.add_entry_plane(dir, i, j, &dx, half);
                out.add_entry_plane(dir, i, j, &dy, mhalf_i);
            }
        }
    }
    Ok(out)
}

/// Condition-check wrapper shared by the solver: per-site eigendata of H.
pub struct MetricCaches {
    pub eigs: Vec<crate::linalg::HermitianEig>,
    pub inv: Vec<CMat>,
    pub sqrt: Vec<CMat>,
    pub inv_sqrt: Vec<CMat>,
    pub max_cond: f64,
}

pub fn metric_caches(h: &HermitianMetricField) -> MetricCaches {
    let sites = h.site_count();
    let mut eigs = Vec::with_capacity(sites);
    let mut inv = Vec::with_capacity(sites);
    let mut sqrt = Vec::with_capacity(sites);
    let mut inv_sqrt = Vec::with_capacity(sites);
    let mut max_cond = 0.0_f64;
    for s in 0..sites {
        let e = hermitian_eig(&h.mat(s));
        max_cond = max_cond.max(e.condition_number());
        inv.push(e.apply(|x| 1.0 / x));
        sqrt.push(e.apply(f64::sqrt));
        inv_sqrt.push(e.apply(|x| 1.0 / x.sqrt()));
        eigs.push(e);
    }
    MetricCaches { eigs, inv, sqrt, inv_sqrt, max_cond }
}

/// The Chern connection of (∂̄_E, H): α = H⁻¹(∂H − β†H) so that
/// dH = Hα + β†H + (conjugates) holds and d_A is unitary for H.
pub fn chern_connection(
    h: &HermitianMetricField,
    bundle: &HiggsBundle,
    domain: &LatticeDomain,
) -> Result<ChernConnection> {
    h.check_domain(domain)?;
    let caches = metric_caches(h);
    if !(caches.max_cond <= crate::higgs::ops::COND_LIMIT) {
        return Err(HsError::Conditioning {
            cond: caches.max_cond,
            limit: crate::higgs::ops::COND_LIMIT,
        });
    }
    chern_connection_cached(h, bundle, domain, &caches)
}

pub fn chern_connection_cached(
    h: &HermitianMetricField,
    bundle: &HiggsBundle,
    domain: &LatticeDomain,
    caches: &MetricCaches,
) -> Result<ChernConnection> {
    let mut dh = del_metric(h, domain)?;
    if let Some(beta) = &bundle.beta {
        let beta_dag = adjoint_wrt_with(beta, &|s| (h.mat(s), caches.inv[s]))?;
        dh = dh.sub(&mul_left_metric(&beta_dag, h));
    }
    // α = H⁻¹ · dh
    let mut alpha = dh;
    for c in 0..alpha.comp_count() {
        for s in 0..alpha.site_count() {
            let m = caches.inv[s] * alpha.mat(c, s);
            alpha.set_mat(c, s, &m);
        }
    }
    Ok(ChernConnection { alpha, beta: bundle.beta.clone() })
}

fn mul_left_metric(f: &EndoFormField, h: &HermitianMetricField) -> EndoFormField {
    let mut out = f.clone();
    for c in 0..f.comp_count() {
        for s in 0..f.site_count() {
            let m = f.mat(c, s) * h.mat(s);
            out.set_mat(c, s, &m);
        }
    }
    out
}

/// F^{1,1} = ∂̄α + ∂β + β∧α + α∧β on the trivialization.
pub fn curvature(conn: &ChernConnection, domain: &LatticeDomain) -> Result<EndoFormField> {
    let mut f = endo_dbar(&conn.alpha, domain)?;
    if let Some(beta) = &conn.beta {
        f = f
            .add(&endo_del(beta, domain)?)
            .add(&wedge_endo(beta, &conn.alpha, domain)?)
            .add(&wedge_endo(&conn.alpha, beta, domain)?);
    }
    Ok(f)
}

/// The (2,0)-part ∂α + α∧α and (0,2)-part ∂̄β + β∧β; identically zero in the
/// continuum for Chern data, asserted small in tests.
pub fn curvature_offdiagonal(
    conn: &ChernConnection,
    domain: &LatticeDomain,
) -> Result<(EndoFormField, EndoFormField)> {
    let n = domain.complex_dim();
    let r = conn.alpha.rank;
    let f20 = if n >= 2 {
        endo_del(&conn.alpha, domain)?.add(&wedge_endo(&conn.alpha, &conn.alpha, domain)?)
    } else {
        EndoFormField::zeros(domain, r, 2, 0)?
    };
    let f02 = match (&conn.beta, n) {
        (Some(beta), 2) => endo_dbar(beta, domain)?.add(&wedge_endo(beta, beta, domain)?),
        _ => EndoFormField::zeros(domain, r, 0, 2)?,
    };
    Ok((f20, f02))
}

/// Complex gauge action on the full triple:
/// β^g = g⁻¹(∂̄g) + g⁻¹βg, φ^g = g⁻¹φg, H^g = g†Hg.
pub fn complex_gauge_act(
    g: &EndoFormField,
    bundle: &HiggsBundle,
    h: &HermitianMetricField,
    domain: &LatticeDomain,
) -> Result<(HiggsBundle, HermitianMetricField)> {
    g.check_domain(domain)?;
    if g.bidegree() != (0, 0) {
        return Err(HsError::InvalidDegree {
            context: "gauge transforms are (0,0) fields",
            p: g.p as isize,
            q: g.q as isize,
            n: domain.complex_dim(),
        });
    }
    let sites = domain.site_count();
    let mut ginv = Vec::with_capacity(sites);
    for s in 0..sites {
        ginv.push(g.mat(0, s).inverse().ok_or(HsError::Singular { site: s })?);
    }

    let dbar_g = endo_dbar(g, domain)?;
    let mut beta_g = dbar_g;
    for c in 0..beta_g.comp_count() {
        for s in 0..sites {
            let mut m = ginv[s] * beta_g.mat(c, s);
            if let Some(beta) = &bundle.beta {
                m = m + ginv[s] * beta.mat(c, s) * g.mat(0, s);
            }
            beta_g.set_mat(c, s, &m);
        }
    }
    let beta_norm = beta_g.l2_norm(domain);

    let mut phi_g = bundle.phi.clone();
    for c in 0..phi_g.comp_count() {
        for s in 0..sites {
            let m = ginv[s] * bundle.phi.mat(c, s) * g.mat(0, s);
            phi_g.set_mat(c, s, &m);
        }
    }
    let mut h_g = h.clone();
    for s in 0..sites {
        let m = g.mat(0, s).adjoint() * h.mat(s) * g.mat(0, s);
        h_g.set_mat(s, &m.hermitian_part());
    }
    let beta = if beta_norm < 1e-14 { None } else { Some(beta_g) };
    Ok((HiggsBundle { phi: phi_g, beta }, h_g))
}
