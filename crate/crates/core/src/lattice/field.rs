//! Scalar- and form-valued lattice fields.

use super::comps::{comp_table, frame_weight, Comp};
use super::domain::LatticeDomain;
use crate::error::{HsError, Result};
use num_complex::Complex64;

/// A complex scalar field: one value per site.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    pub data: Vec<Complex64>,
}

impl ScalarField {
    pub fn zeros(domain: &LatticeDomain) -> Self {
        ScalarField { data: vec![Complex64::new(0.0, 0.0); domain.site_count()] }
    }

    pub fn from_fn(domain: &LatticeDomain, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let data = (0..domain.site_count()).map(|s| f(&domain.coords(s))).collect();
        ScalarField { data }
    }

    pub fn constant(domain: &LatticeDomain, v: Complex64) -> Self {
        ScalarField { data: vec![v; domain.site_count()] }
    }

    pub fn l2_norm(&self, domain: &LatticeDomain) -> f64 {
        self.data
            .iter()
            .enumerate()
            .map(|(s, v)| domain.quad_weight(s) * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// ∫ f over the domain.
    pub fn integral(&self, domain: &LatticeDomain) -> Complex64 {
        self.data
            .iter()
            .enumerate()
            .map(|(s, v)| v * domain.quad_weight(s))
            .sum()
    }

    pub fn as_form(&self) -> FormField {
        FormField { p: 0, q: 0, comps: vec![(0, 0)], data: self.data.clone() }
    }
}

/// A scalar-coefficient (p,q)-form field. Component arrays are stored
/// contiguously (component-major, sites row-major within a component).
#[derive(Clone, Debug, PartialEq)]
pub struct FormField {
    pub p: usize,
    pub q: usize,
    pub comps: Vec<Comp>,
    pub data: Vec<Complex64>,
}

impl FormField {
    pub fn zeros(domain: &LatticeDomain, p: usize, q: usize) -> Result<Self> {
        let n = domain.complex_dim();
        if p > n || q > n {
            return Err(HsError::InvalidDegree {
                context: "form allocation",
                p: p as isize,
                q: q as isize,
                n,
            });
        }
        let comps = comp_table(n, p, q);
        let data = vec![Complex64::new(0.0, 0.0); comps.len() * domain.site_count()];
        Ok(FormField { p, q, comps, data })
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn comp_count(&self) -> usize {
        self.comps.len()
    }

    pub fn site_count(&self) -> usize {
        self.data.len() / self.comps.len().max(1)
    }

    #[inline]
    pub fn at(&self, comp: usize, site: usize) -> Complex64 {
        self.data[comp * self.site_count() + site]
    }

    #[inline]
    pub fn at_mut(&mut self, comp: usize, site: usize) -> &mut Complex64 {
        let s = self.site_count();
        &mut self.data[comp * s + site]
    }

    pub fn comp_slice(&self, comp: usize) -> &[Complex64] {
        let s = self.site_count();
        &self.data[comp * s..(comp + 1) * s]
    }

    pub fn comp_slice_mut(&mut self, comp: usize) -> &mut [Complex64] {
        let s = self.site_count();
        &mut self.data[comp * s..(comp + 1) * s]
    }

    pub fn check_domain(&self, domain: &LatticeDomain) -> Result<()> {
        let n = domain.complex_dim();
        if self.p > n || self.q > n || self.comps != comp_table(n, self.p, self.q) {
            return Err(HsError::DomainMismatch(format!(
                "({},{})-form components do not match complex dimension {}",
                self.p, self.q, n
            )));
        }
        if self.site_count() != domain.site_count() {
            return Err(HsError::ShapeMismatch(format!(
                "field has {} sites, domain has {}",
                self.site_count(),
                domain.site_count()
            )));
        }
        Ok(())
    }

    pub fn from_fn(
        domain: &LatticeDomain,
        p: usize,
        q: usize,
        f: impl Fn(&[f64], Comp) -> Complex64,
    ) -> Result<Self> {
        let mut field = Self::zeros(domain, p, q)?;
        for (ci, &comp) in field.comps.clone().iter().enumerate() {
            for s in 0..domain.site_count() {
                *field.at_mut(ci, s) = f(&domain.coords(s), comp);
            }
        }
        Ok(field)
    }

    /// Pointwise Hermitian norm squared in the |dz_i|² = 2 frame.
    pub fn norm_sq_at(&self, site: usize) -> f64 {
        let w = frame_weight(self.p, self.q);
        (0..self.comps.len()).map(|c| self.at(c, site).norm_sqr() * w).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        (0..self.site_count()).map(|s| self.norm_sq_at(s)).fold(0.0, f64::max).sqrt()
    }

    pub fn l2_norm(&self, domain: &LatticeDomain) -> f64 {
        (0..domain.site_count())
            .map(|s| domain.quad_weight(s) * self.norm_sq_at(s))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, c: Complex64) -> FormField {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= c;
        }
        out
    }

    pub fn add(&self, other: &FormField) -> FormField {
        assert_eq!((self.p, self.q), (other.p, other.q));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v += w;
        }
        out
    }

    pub fn sub(&self, other: &FormField) -> FormField {
        assert_eq!((self.p, self.q), (other.p, other.q));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v -= w;
        }
        out
    }
}
