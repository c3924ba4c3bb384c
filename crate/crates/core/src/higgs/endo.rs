//! End(E)-valued form fields and Hermitian metric fields.

use crate::error::{HsError, Result};
use crate::lattice::comps::{comp_table, frame_weight, Comp};
use crate::lattice::diff::partial_axis;
use crate::lattice::{FormField, LatticeDomain, ScalarField};
use crate::linalg::{hermitian_eig, CMat, HermitianEig, MAX_RANK};
use num_complex::Complex64;

/// An End(E)-valued (p,q)-form: per site and component one complex r×r
/// matrix. Storage is component-major, then site, then row-major matrix.
#[derive(Clone, Debug)]
pub struct EndoFormField {
    pub rank: usize,
    pub p: usize,
    pub q: usize,
    pub comps: Vec<Comp>,
    sites: usize,
    pub data: Vec<Complex64>,
}

impl EndoFormField {
    pub fn zeros(domain: &LatticeDomain, rank: usize, p: usize, q: usize) -> Result<Self> {
        if rank == 0 || rank > MAX_RANK {
            return Err(HsError::RankOverflow { requested: rank, max: MAX_RANK });
        }
        let n = domain.complex_dim();
        // p or q beyond n leaves an empty component set (the zero form space),
        // which wedge_square relies on for n = 1.
        let comps = if p > n || q > n { vec![] } else { comp_table(n, p, q) };
        let sites = domain.site_count();
        let len = comps.len() * sites * rank * rank;
        Ok(EndoFormField {
            rank,
            p,
            q,
            comps,
            sites,
            data: vec![Complex64::new(0.0, 0.0); len],
        })
    }

    pub fn from_fn(
        domain: &LatticeDomain,
        rank: usize,
        p: usize,
        q: usize,
        f: impl Fn(&[f64], Comp) -> CMat,
    ) -> Result<Self> {
        let mut e = Self::zeros(domain, rank, p, q)?;
        for ci in 0..e.comps.len() {
            let comp = e.comps[ci];
            for s in 0..e.sites {
                let m = f(&domain.coords(s), comp);
                assert_eq!(m.rank(), rank);
                e.set_mat(ci, s, &m);
            }
        }
        Ok(e)
    }

    /// Constant field from one matrix per component.
    pub fn constant(domain: &LatticeDomain, rank: usize, p: usize, q: usize, mats: &[CMat]) -> Result<Self> {
        let mut e = Self::zeros(domain, rank, p, q)?;
        assert_eq!(mats.len(), e.comps.len());
        for (ci, m) in mats.iter().enumerate() {
            for s in 0..e.sites {
                e.set_mat(ci, s, m);
            }
        }
        Ok(e)
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn comp_count(&self) -> usize {
        self.comps.len()
    }

    pub fn site_count(&self) -> usize {
        self.sites
    }

    #[inline]
    fn offset(&self, comp: usize, site: usize) -> usize {
        ((comp * self.sites) + site) * self.rank * self.rank
    }

    pub fn mat(&self, comp: usize, site: usize) -> CMat {
        let o = self.offset(comp, site);
        CMat::from_slice(self.rank, &self.data[o..o + self.rank * self.rank])
    }

    pub fn set_mat(&mut self, comp: usize, site: usize, m: &CMat) {
        let o = self.offset(comp, site);
        self.data[o..o + self.rank * self.rank].copy_from_slice(m.as_slice());
    }

    /// View of one matrix entry (i,j) of one component as a site-major
    /// scalar array (copied), for derivative passes.
    pub fn entry_plane(&self, comp: usize, i: usize, j: usize) -> Vec<Complex64> {
        let rr = self.rank * self.rank;
        let base = comp * self.sites * rr + i * self.rank + j;
        (0..self.sites).map(|s| self.data[base + s * rr]).collect()
    }

    pub fn add_entry_plane(&mut self, comp: usize, i: usize, j: usize, plane: &[Complex64], coeff: Complex64) {
        let rr = self.rank * self.rank;
        let base = comp * self.sites * rr + i * self.rank + j;
        for (s, v) in plane.iter().enumerate() {
            self.data[base + s * rr] += coeff * v;
        }
    }

    pub fn check_domain(&self, domain: &LatticeDomain) -> Result<()> {
        if self.sites != domain.site_count() {
            return Err(HsError::ShapeMismatch(format!(
                "endo field has {} sites, domain has {}",
                self.sites,
                domain.site_count()
            )));
        }
        Ok(())
    }

    pub fn check_compatible(&self, other: &EndoFormField) -> Result<()> {
        if self.rank != other.rank || self.sites != other.sites {
            return Err(HsError::ShapeMismatch(format!(
                "endo fields disagree: rank {} vs {}, sites {} vs {}",
                self.rank, other.rank, self.sites, other.sites
            )));
        }
        Ok(())
    }

    /// Pointwise norm² with the frame weights, Frobenius in the fibers
    /// (H = Id). Use [`norm_sq_at_h`](Self::norm_sq_at_h) for curved metrics.
    pub fn norm_sq_at(&self, site: usize) -> f64 {
        let w = frame_weight(self.p, self.q);
        (0..self.comps.len()).map(|c| self.mat(c, site).norm_sq() * w).sum()
    }

    /// Pointwise norm² with fiber inner product `tr(M (H⁻¹ M† H))`.
    pub fn norm_sq_at_h(&self, site: usize, h: &CMat, h_inv: &CMat) -> f64 {
        let w = frame_weight(self.p, self.q);
        (0..self.comps.len())
            .map(|c| {
                let m = self.mat(c, site);
                let adj = *h_inv * m.adjoint() * *h;
                (m * adj).trace().re * w
            })
            .sum()
    }

    pub fn sup_norm(&self) -> f64 {
        (0..self.sites).map(|s| self.norm_sq_at(s)).fold(0.0, f64::max).sqrt()
    }

    pub fn l2_norm(&self, domain: &LatticeDomain) -> f64 {
        (0..self.sites)
            .map(|s| domain.quad_weight(s) * self.norm_sq_at(s))
            .sum::<f64>()
            .sqrt()
    }

    pub fn l2_norm_h(&self, domain: &LatticeDomain, metric: &HermitianMetricField) -> f64 {
        let inv = metric.inverses();
        (0..self.sites)
            .map(|s| domain.quad_weight(s) * self.norm_sq_at_h(s, &metric.mat(s), &inv[s]))
            .sum::<f64>()
            .sqrt()
    }

    /// Pointwise H-norm field.
    pub fn norm_field_h(&self, metric: &HermitianMetricField) -> ScalarField {
        let inv = metric.inverses();
        ScalarField {
            data: (0..self.sites)
                .map(|s| {
                    Complex64::new(self.norm_sq_at_h(s, &metric.mat(s), &inv[s]).sqrt(), 0.0)
                })
                .collect(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> EndoFormField {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= c;
        }
        out
    }

    pub fn add(&self, other: &EndoFormField) -> EndoFormField {
        assert_eq!((self.p, self.q, self.rank), (other.p, other.q, other.rank));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v += w;
        }
        out
    }

    pub fn sub(&self, other: &EndoFormField) -> EndoFormField {
        assert_eq!((self.p, self.q, self.rank), (other.p, other.q, other.rank));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v -= w;
        }
        out
    }

    /// Conjugate every fiber matrix: site-wise `g⁻¹ M g` with constant or
    /// per-site `g`.
    pub fn conjugated_by(&self, g: &dyn Fn(usize) -> (CMat, CMat)) -> EndoFormField {
        let mut out = self.clone();
        for c in 0..self.comps.len() {
            for s in 0..self.sites {
                let (gmat, ginv) = g(s);
                let m = ginv * self.mat(c, s) * gmat;
                out.set_mat(c, s, &m);
            }
        }
        out
    }

    /// Apply `∂/∂x_axis` to every entry plane.
    pub fn partial(&self, domain: &LatticeDomain, axis: usize) -> EndoFormField {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = Complex64::new(0.0, 0.0);
        }
        for c in 0..self.comps.len() {
            for i in 0..self.rank {
                for j in 0..self.rank {
                    let plane = self.entry_plane(c, i, j);
                    let d = partial_axis(domain, &plane, axis);
                    out.add_entry_plane(c, i, j, &d, Complex64::new(1.0, 0.0));
                }
            }
        }
        out
    }

    /// Scalar-coefficient form obtained by tracing the fibers.
    pub fn trace_form(&self, domain: &LatticeDomain) -> Result<FormField> {
        let mut f = FormField::zeros(domain, self.p, self.q)?;
        for c in 0..self.comps.len() {
            for s in 0..self.sites {
                *f.at_mut(c, s) = self.mat(c, s).trace();
            }
        }
        Ok(f)
    }
}

/// A positive-definite Hermitian r×r matrix per site: the unknown `H` of the
/// moment-map equation.
#[derive(Clone, Debug)]
pub struct HermitianMetricField {
    pub rank: usize,
    sites: usize,
    pub data: Vec<Complex64>,
    /// When set, `det H ≡ 1` is maintained and checked.
    pub unit_det: bool,
}

impl HermitianMetricField {
    pub fn identity(domain: &LatticeDomain, rank: usize) -> Self {
        let sites = domain.site_count();
        let mut data = vec![Complex64::new(0.0, 0.0); sites * rank * rank];
        for s in 0..sites {
            for i in 0..rank {
                data[(s * rank + i) * rank + i] = Complex64::new(1.0, 0.0);
            }
        }
        HermitianMetricField { rank, sites, data, unit_det: false }
    }

    pub fn from_fn(domain: &LatticeDomain, rank: usize, f: impl Fn(&[f64]) -> CMat) -> Self {
        let mut m = Self::identity(domain, rank);
        for s in 0..m.sites {
            let h = f(&domain.coords(s));
            assert_eq!(h.rank(), rank);
            m.set_mat(s, &h);
        }
        m
    }

    pub fn site_count(&self) -> usize {
        self.sites
    }

    pub fn mat(&self, site: usize) -> CMat {
        let rr = self.rank * self.rank;
        CMat::from_slice(self.rank, &self.data[site * rr..(site + 1) * rr])
    }

    pub fn set_mat(&mut self, site: usize, m: &CMat) {
        let rr = self.rank * self.rank;
        self.data[site * rr..(site + 1) * rr].copy_from_slice(m.as_slice());
    }

    pub fn entry_plane(&self, i: usize, j: usize) -> Vec<Complex64> {
        let rr = self.rank * self.rank;
        let base = i * self.rank + j;
        (0..self.sites).map(|s| self.data[base + s * rr]).collect()
    }

    /// Per-site inverses.
    pub fn inverses(&self) -> Vec<CMat> {
        (0..self.sites)
            .map(|s| self.mat(s).inverse().expect("metric invertible"))
            .collect()
    }

    /// Per-site Hermitian eigendecompositions.
    pub fn eigs(&self) -> Vec<HermitianEig> {
        (0..self.sites).map(|s| hermitian_eig(&self.mat(s))).collect()
    }

    /// Largest spectral condition number over sites.
    pub fn condition_number(&self) -> f64 {
        self.eigs().iter().map(|e| e.condition_number()).fold(0.0, f64::max)
    }

    /// Validate Hermitian symmetry, positivity, and (optionally) unit
    /// determinant.
    pub fn validate(&self) -> Result<()> {
        for s in 0..self.sites {
            let m = self.mat(s);
            if !m.is_hermitian(1e-12) {
                return Err(HsError::ShapeMismatch(format!(
                    "metric not Hermitian at site {s}"
                )));
            }
            let e = hermitian_eig(&m);
            if e.min_eigenvalue() <= 0.0 {
                return Err(HsError::Conditioning {
                    cond: f64::INFINITY,
                    limit: 1e12,
                });
            }
            if self.unit_det {
                let det: f64 = e.vals.iter().product();
                if (det - 1.0).abs() > 1e-10 {
                    return Err(HsError::ShapeMismatch(format!(
                        "unit-determinant metric has det {det:.12} at site {s}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn check_domain(&self, domain: &LatticeDomain) -> Result<()> {
        if self.sites != domain.site_count() {
            return Err(HsError::ShapeMismatch(format!(
                "metric has {} sites, domain has {}",
                self.sites,
                domain.site_count()
            )));
        }
        Ok(())
    }
}
