//! Scalar fields valued in symmetric powers of the (1,0)-cotangent space:
//! the home of the characteristic coefficients p_k and the discriminant
//! section.
//!
//! A degree-k symmetric form is stored by monomial coefficients,
//! `s = Σ_a c_a · dz^a` with `a` a multidegree over the n complex directions
//! (plain power products, multinomial factors live in the coefficients).
//! Norms are Fischer norms `|s|² = Σ_a |c_a|²/multinom(k,a)`, which make
//! `|w^{⊙k}| = |w|^k` for covectors; the `plain` variant uses `|dz| = 1`
//! frames and the geometric variant carries the `2^k` frame factor.

use crate::error::{HsError, Result};
use crate::lattice::LatticeDomain;
use num_complex::Complex64;

/// Multidegrees of total degree `k` over `n` letters, lexicographic.
pub fn multidegrees(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 1 {
            let mut v = prefix.clone();
            v.push(k);
            out.push(v);
            return;
        }
        for first in (0..=k).rev() {
            prefix.push(first);
            rec(n - 1, k - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

pub fn multinomial(a: &[usize]) -> f64 {
    let k: usize = a.iter().sum();
    let mut num = 1.0;
    for i in 1..=k {
        num *= i as f64;
    }
    for &ai in a {
        for i in 1..=ai {
            num /= i as f64;
        }
    }
    num
}

/// A field of degree-k symmetric (1,0)-forms.
#[derive(Clone, Debug, PartialEq)]
pub struct SymFormField {
    pub degree: usize,
    pub n: usize,
    pub monomials: Vec<Vec<usize>>,
    sites: usize,
    /// monomial-major, sites within.
    pub data: Vec<Complex64>,
}

impl SymFormField {
    pub fn zeros(domain: &LatticeDomain, degree: usize) -> Self {
        let n = domain.complex_dim();
        let monomials = multidegrees(n, degree);
        let sites = domain.site_count();
        let len = monomials.len() * sites;
        SymFormField { degree, n, monomials, sites, data: vec![Complex64::new(0.0, 0.0); len] }
    }

    pub fn site_count(&self) -> usize {
        self.sites
    }

    pub fn monomial_index(&self, a: &[usize]) -> usize {
        self.monomials.iter().position(|m| m == a).expect("monomial in range")
    }

    #[inline]
    pub fn at(&self, mono: usize, site: usize) -> Complex64 {
        self.data[mono * self.sites + site]
    }

    #[inline]
    pub fn at_mut(&mut self, mono: usize, site: usize) -> &mut Complex64 {
        &mut self.data[mono * self.sites + site]
    }

    /// Coefficients at one site in monomial order.
    pub fn coeffs_at(&self, site: usize) -> Vec<Complex64> {
        (0..self.monomials.len()).map(|m| self.at(m, site)).collect()
    }

    pub fn scaled(&self, c: Complex64) -> SymFormField {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= c;
        }
        out
    }

    pub fn add(&self, other: &SymFormField) -> SymFormField {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v += w;
        }
        out
    }

    pub fn sub(&self, other: &SymFormField) -> SymFormField {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v -= w;
        }
        out
    }

    /// Symmetric product of two fields.
    pub fn product(&self, other: &SymFormField, domain: &LatticeDomain) -> SymFormField {
        let mut out = SymFormField::zeros(domain, self.degree + other.degree);
        for (ma, a) in self.monomials.iter().enumerate() {
            for (mb, b) in other.monomials.iter().enumerate() {
                let sum: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let mo = out.monomial_index(&sum);
                for s in 0..self.sites {
                    let v = self.at(ma, s) * other.at(mb, s);
                    *out.at_mut(mo, s) += v;
                }
            }
        }
        out
    }

    /// Fischer norm² at a site, `Σ_a |c_a|²/multinom(k,a)`; with
    /// `geometric = true` the frame factor `2^k` is included.
    pub fn norm_sq_at(&self, site: usize, geometric: bool) -> f64 {
        let frame = if geometric { 2f64.powi(self.degree as i32) } else { 1.0 };
        self.monomials
            .iter()
            .enumerate()
            .map(|(m, a)| self.at(m, site).norm_sqr() / multinomial(a) * frame)
            .sum()
    }

    pub fn sup_norm(&self, geometric: bool) -> f64 {
        (0..self.sites).map(|s| self.norm_sq_at(s, geometric)).fold(0.0, f64::max).sqrt()
    }

    pub fn l2_norm(&self, domain: &LatticeDomain, geometric: bool) -> f64 {
        (0..self.sites)
            .map(|s| domain.quad_weight(s) * self.norm_sq_at(s, geometric))
            .sum::<f64>()
            .sqrt()
    }
}

/// The k-th symmetric power `w^{⊙k}` of a covector field given per site.
pub fn covector_power(
    domain: &LatticeDomain,
    w: &[Vec<Complex64>],
    k: usize,
) -> Result<SymFormField> {
    let n = domain.complex_dim();
    let mut out = SymFormField::zeros(domain, k);
    if w.len() != domain.site_count() {
        return Err(HsError::ShapeMismatch("covector field size".into()));
    }
    let monos = out.monomials.clone();
    for s in 0..domain.site_count() {
        if w[s].len() != n {
            return Err(HsError::ShapeMismatch("covector component count".into()));
        }
        for (m, a) in monos.iter().enumerate() {
            let mut v = Complex64::new(multinomial(a), 0.0);
            for (dir, &power) in a.iter().enumerate() {
                for _ in 0..power {
                    v *= w[s][dir];
                }
            }
            *out.at_mut(m, s) = v;
        }
    }
    Ok(out)
}

/// Plain (|dz|=1) norm of a covector.
pub fn covector_norm_plain(w: &[Complex64]) -> f64 {
    w.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Geometric (|dz|²=2) norm of a covector.
pub fn covector_norm_geometric(w: &[Complex64]) -> f64 {
    (2.0 * w.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multidegree_counts() {
        assert_eq!(multidegrees(1, 3), vec![vec![3]]);
        assert_eq!(multidegrees(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(multinomial(&[1, 1]), 2.0);
        assert_eq!(multinomial(&[2, 0]), 1.0);
        assert_eq!(multinomial(&[2, 1]), 3.0);
    }

    #[test]
    fn fischer_norm_of_squared_covector() {
        let dom = LatticeDomain::unit_torus(2, 8).unwrap();
        let w: Vec<Vec<Complex64>> = (0..dom.site_count())
            .map(|_| vec![Complex64::new(0.3, -0.2), Complex64::new(1.1, 0.7)])
            .collect();
        let sq = covector_power(&dom, &w, 2).unwrap();
        let wn = covector_norm_plain(&w[0]);
        let got = sq.norm_sq_at(0, false).sqrt();
        assert!((got - wn * wn).abs() < 1e-12, "{got} vs {}", wn * wn);
        let geo = sq.norm_sq_at(0, true).sqrt();
        let wng = covector_norm_geometric(&w[0]);
        assert!((geo - wng * wng).abs() < 1e-12);
    }
}
