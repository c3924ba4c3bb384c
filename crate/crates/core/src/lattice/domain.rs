use crate::error::{HsError, Result};
use serde::{Deserialize, Serialize};

/// Boundary behaviour of the discretized domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainKind {
    /// Flat torus; derivatives are exact frequency-space operators.
    #[serde(rename = "periodic-torus")]
    PeriodicTorus,
    /// Rectangular patch with Dirichlet data; centered second-order stencils
    /// with one-sided closures at the boundary.
    #[serde(rename = "dirichlet-patch")]
    DirichletPatch,
}

/// A discretized flat Kähler manifold of complex dimension `n` (1 or 2).
///
/// Real coordinates come in pairs: axis `2i` is `Re z_i`, axis `2i+1` is
/// `Im z_i`. The Kähler form is the constant ω = (i/2)·Σ dz_i∧dz̄_i in the
/// frame with |dz_i|² = 2, so Ricci curvature vanishes identically.
///
/// Torus coordinates run over `[0, N_k·h_k)`; patch coordinates are centered
/// at the origin, spanning `[-(N_k-1)h_k/2, (N_k-1)h_k/2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeDomain {
    kind: DomainKind,
    complex_dim: usize,
    shape: Vec<usize>,
    spacing: Vec<f64>,
    strides: Vec<usize>,
    site_count: usize,
}

impl LatticeDomain {
    pub fn new(kind: DomainKind, complex_dim: usize, shape: &[usize], spacing: &[f64]) -> Result<Self> {
        if !(1..=2).contains(&complex_dim) {
            return Err(HsError::InvalidDomain(format!(
                "complex_dimension must be 1 or 2, got {complex_dim}"
            )));
        }
        if shape.len() != 2 * complex_dim || spacing.len() != 2 * complex_dim {
            return Err(HsError::InvalidDomain(format!(
                "expected {} axes for complex dimension {}, got shape {:?} spacing {:?}",
                2 * complex_dim,
                complex_dim,
                shape,
                spacing
            )));
        }
        if let Some(&bad) = shape.iter().find(|&&s| s < 8) {
            return Err(HsError::InvalidDomain(format!(
                "all site counts must be >= 8, got {bad}"
            )));
        }
        if let Some(&bad) = spacing.iter().find(|&&h| !(h > 0.0) || !h.is_finite()) {
            return Err(HsError::InvalidDomain(format!("spacings must be positive, got {bad}")));
        }
        let mut strides = vec![0usize; shape.len()];
        let mut acc = 1usize;
        // row-major: last axis fastest
        for k in (0..shape.len()).rev() {
            strides[k] = acc;
            acc *= shape[k];
        }
        Ok(LatticeDomain {
            kind,
            complex_dim,
            shape: shape.to_vec(),
            spacing: spacing.to_vec(),
            strides,
            site_count: acc,
        })
    }

    pub fn torus(complex_dim: usize, shape: &[usize], spacing: &[f64]) -> Result<Self> {
        Self::new(DomainKind::PeriodicTorus, complex_dim, shape, spacing)
    }

    pub fn patch(complex_dim: usize, shape: &[usize], spacing: &[f64]) -> Result<Self> {
        Self::new(DomainKind::DirichletPatch, complex_dim, shape, spacing)
    }

    /// Square torus with `n_sites` per axis and unit total span per axis.
    pub fn unit_torus(complex_dim: usize, n_sites: usize) -> Result<Self> {
        let axes = 2 * complex_dim;
        Self::torus(complex_dim, &vec![n_sites; axes], &vec![1.0 / n_sites as f64; axes])
    }

    /// Square patch with `n_sites` per axis spanning `[-0.5, 0.5]` per axis.
    pub fn unit_patch(complex_dim: usize, n_sites: usize) -> Result<Self> {
        let axes = 2 * complex_dim;
        Self::patch(complex_dim, &vec![n_sites; axes], &vec![1.0 / (n_sites - 1) as f64; axes])
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn complex_dim(&self) -> usize {
        self.complex_dim
    }

    pub fn real_dim(&self) -> usize {
        2 * self.complex_dim
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn site_count(&self) -> usize {
        self.site_count
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Physical span of axis `k`.
    pub fn span(&self, k: usize) -> f64 {
        match self.kind {
            DomainKind::PeriodicTorus => self.shape[k] as f64 * self.spacing[k],
            DomainKind::DirichletPatch => (self.shape[k] - 1) as f64 * self.spacing[k],
        }
    }

    /// Total volume ∏ spans. Not normalized to 1: norm comparisons carry
    /// explicit volume factors.
    pub fn total_volume(&self) -> f64 {
        (0..self.real_dim()).map(|k| self.span(k)).product()
    }

    /// The stand-in for the injectivity radius: half the smallest span.
    pub fn injectivity_radius(&self) -> f64 {
        (0..self.real_dim()).map(|k| self.span(k)).fold(f64::INFINITY, f64::min) / 2.0
    }

    pub fn decompose(&self, site: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.shape.len()];
        let mut rem = site;
        for k in 0..self.shape.len() {
            idx[k] = rem / self.strides[k];
            rem %= self.strides[k];
        }
        idx
    }

    pub fn compose(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    /// Physical coordinates of a site.
    pub fn coords(&self, site: usize) -> Vec<f64> {
        let idx = self.decompose(site);
        match self.kind {
            DomainKind::PeriodicTorus => {
                idx.iter().zip(&self.spacing).map(|(&i, &h)| i as f64 * h).collect()
            }
            DomainKind::DirichletPatch => idx
                .iter()
                .zip(self.shape.iter().zip(&self.spacing))
                .map(|(&i, (&n, &h))| (i as f64 - (n as f64 - 1.0) / 2.0) * h)
                .collect(),
        }
    }

    /// Neighbor of `site` one step along axis `k` (`dir` = ±1). `None` when
    /// the step leaves a Dirichlet patch.
    pub fn neighbor(&self, site: usize, k: usize, dir: isize) -> Option<usize> {
        let mut idx = self.decompose(site);
        let n = self.shape[k] as isize;
        let moved = idx[k] as isize + dir;
        match self.kind {
            DomainKind::PeriodicTorus => {
                idx[k] = moved.rem_euclid(n) as usize;
                Some(self.compose(&idx))
            }
            DomainKind::DirichletPatch => {
                if moved < 0 || moved >= n {
                    None
                } else {
                    idx[k] = moved as usize;
                    Some(self.compose(&idx))
                }
            }
        }
    }

    /// True for sites on the outermost layer of a Dirichlet patch (never on a
    /// torus).
    pub fn is_boundary(&self, site: usize) -> bool {
        if self.kind == DomainKind::PeriodicTorus {
            return false;
        }
        let idx = self.decompose(site);
        idx.iter().zip(&self.shape).any(|(&i, &n)| i == 0 || i == n - 1)
    }

    /// Quadrature weight of one site: trapezoid rule on patches (half weight
    /// per boundary axis index), plain cell volume on the torus.
    pub fn quad_weight(&self, site: usize) -> f64 {
        let cell: f64 = self.spacing.iter().product();
        match self.kind {
            DomainKind::PeriodicTorus => cell,
            DomainKind::DirichletPatch => {
                let idx = self.decompose(site);
                let mut w = cell;
                for (&i, &n) in idx.iter().zip(&self.shape) {
                    if i == 0 || i == n - 1 {
                        w *= 0.5;
                    }
                }
                w
            }
        }
    }

    /// Geodesic distance between two sites (minimum-image on the torus).
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let ia = self.decompose(a);
        let ib = self.decompose(b);
        let mut d2 = 0.0;
        for k in 0..self.real_dim() {
            let mut diff = (ia[k] as f64 - ib[k] as f64).abs() * self.spacing[k];
            if self.kind == DomainKind::PeriodicTorus {
                let l = self.span(k);
                diff = diff.min(l - diff);
            }
            d2 += diff * diff;
        }
        d2.sqrt()
    }

    /// Site nearest to the physical point `x`.
    pub fn nearest_site(&self, x: &[f64]) -> usize {
        let mut idx = vec![0usize; self.real_dim()];
        for k in 0..self.real_dim() {
            let i = match self.kind {
                DomainKind::PeriodicTorus => {
                    let n = self.shape[k] as f64;
                    ((x[k] / self.spacing[k]).round().rem_euclid(n)) as usize
                }
                DomainKind::DirichletPatch => {
                    let center = (self.shape[k] as f64 - 1.0) / 2.0;
                    let i = (x[k] / self.spacing[k] + center).round();
                    i.clamp(0.0, self.shape[k] as f64 - 1.0) as usize
                }
            };
            idx[k] = i;
        }
        self.compose(&idx)
    }

    /// Deterministic boustrophedon scan: axis order fixed, each axis reverses
    /// direction according to the parity of the outer indices. Used wherever
    /// branch continuation must be sequential and reproducible.
    pub fn boustrophedon_scan(&self) -> Vec<usize> {
        let dims = self.shape.len();
        let mut order = Vec::with_capacity(self.site_count);
        let mut idx = vec![0usize; dims];
        let total = self.site_count;
        for step in 0..total {
            order.push(self.compose(&idx));
            if step + 1 == total {
                break;
            }
            // odometer over axes (last axis fastest), with direction given by
            // parity of the more-significant indices
            let mut k = dims - 1;
            loop {
                let parity: usize = idx[..k].iter().sum();
                let forward = parity % 2 == 0;
                let n = self.shape[k];
                let at_end = if forward { idx[k] + 1 == n } else { idx[k] == 0 };
                if !at_end {
                    if forward {
                        idx[k] += 1;
                    } else {
                        idx[k] -= 1;
                    }
                    break;
                }
                if k == 0 {
                    break;
                }
                k -= 1;
            }
        }
        order
    }

    pub fn compatible(&self, other: &LatticeDomain) -> bool {
        self == other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_tiny_and_misshapen_domains() {
        assert!(LatticeDomain::torus(1, &[4, 64], &[0.1, 0.1]).is_err());
        assert!(LatticeDomain::torus(1, &[64, 64, 64], &[0.1; 3]).is_err());
        assert!(LatticeDomain::torus(3, &[8; 6], &[0.1; 6]).is_err());
        assert!(LatticeDomain::torus(1, &[64, 64], &[0.0, 0.1]).is_err());
    }

    #[test]
    fn volume_and_weights_agree() {
        let t = LatticeDomain::unit_torus(1, 16).unwrap();
        let total: f64 = (0..t.site_count()).map(|s| t.quad_weight(s)).sum();
        assert!((total - t.total_volume()).abs() < 1e-12);

        let p = LatticeDomain::unit_patch(1, 17).unwrap();
        let total: f64 = (0..p.site_count()).map(|s| p.quad_weight(s)).sum();
        assert!((total - p.total_volume()).abs() < 1e-12);
        assert!((p.total_volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn torus_wraps_patch_does_not() {
        let t = LatticeDomain::unit_torus(1, 8).unwrap();
        let corner = t.compose(&[7, 7]);
        assert_eq!(t.neighbor(corner, 0, 1), Some(t.compose(&[0, 7])));
        let p = LatticeDomain::unit_patch(1, 9).unwrap();
        let corner = p.compose(&[8, 8]);
        assert_eq!(p.neighbor(corner, 0, 1), None);
        assert!(p.is_boundary(corner));
        assert!(!p.is_boundary(p.compose(&[4, 4])));
    }

    #[test]
    fn boustrophedon_visits_every_site_once_with_unit_steps() {
        for dom in [
            LatticeDomain::unit_torus(1, 8).unwrap(),
            LatticeDomain::unit_patch(2, 8).unwrap(),
        ] {
            let scan = dom.boustrophedon_scan();
            assert_eq!(scan.len(), dom.site_count());
            let mut seen = vec![false; dom.site_count()];
            for &s in &scan {
                assert!(!seen[s]);
                seen[s] = true;
            }
            // consecutive sites differ by one step in exactly one axis
            for w in scan.windows(2) {
                let a = dom.decompose(w[0]);
                let b = dom.decompose(w[1]);
                let diff: usize = a
                    .iter()
                    .zip(&b)
                    .map(|(x, y)| (*x as isize - *y as isize).unsigned_abs())
                    .sum();
                assert_eq!(diff, 1, "scan jumped between {a:?} and {b:?}");
            }
        }
    }

    #[test]
    fn patch_coordinates_are_centered() {
        let p = LatticeDomain::unit_patch(1, 9).unwrap();
        let c = p.coords(p.compose(&[4, 4]));
        assert!(c[0].abs() < 1e-15 && c[1].abs() < 1e-15);
        assert!((p.injectivity_radius() - 0.5).abs() < 1e-15);
    }
}
