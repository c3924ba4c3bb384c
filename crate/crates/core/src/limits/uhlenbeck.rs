//! Curvature-concentration diagnostic: the Uhlenbeck radius field
//! `r_A(x) = sup{ r : r^{4-2n} ∫_{B_r(x)} |F|² ≤ ε₀ }`.

use crate::error::Result;
use crate::higgs::endo::EndoFormField;
use crate::lattice::{DomainKind, LatticeDomain, ScalarField};
use num_complex::Complex64;

/// Per-site Uhlenbeck radius by a monotone search over discrete ball sums
/// (radii on the grid-spacing ladder up to the injectivity stand-in). For
/// n = 1 the operation returns the trivial all-max field: the diagnostic is
/// only meaningful on 4-real-dimensional domains, where the exponent makes
/// the ball integral scale-critical.
pub fn uhlenbeck_radius_field(
    f: &EndoFormField,
    domain: &LatticeDomain,
    eps0: f64,
) -> Result<ScalarField> {
    f.check_domain(domain)?;
    let r_max = domain.injectivity_radius();
    let n = domain.complex_dim();
    if n == 1 {
        return Ok(ScalarField::constant(domain, Complex64::new(r_max, 0.0)));
    }
    let exponent = 4.0 - 2.0 * n as f64; // zero in the n = 2 case

    // pointwise |F|² with the quadrature weight folded in
    let density: Vec<f64> = (0..domain.site_count())
        .map(|s| f.norm_sq_at(s) * domain.quad_weight(s))
        .collect();

    // offsets sorted by distance, shared by every center
    let h_min = domain.spacing().iter().cloned().fold(f64::INFINITY, f64::min);
    let n_radii = (r_max / h_min).floor() as usize;
    let radii: Vec<f64> = (1..=n_radii).map(|k| k as f64 * h_min).collect();
    let offsets = sorted_offsets(domain, r_max);

    let mut out = ScalarField::zeros(domain);
    let shape = domain.shape().to_vec();
    for center in 0..domain.site_count() {
        let cidx = domain.decompose(center);
        let mut acc = 0.0;
        let mut oi = 0;
        let mut best = 0.0_f64;
        for &r in &radii {
            while oi < offsets.len() && offsets[oi].0 <= r {
                let (_, ref off) = offsets[oi];
                if let Some(site) = offset_site(domain, &cidx, off, &shape) {
                    acc += density[site];
                }
                oi += 1;
            }
            if r.powf(exponent) * acc <= eps0 {
                best = r;
            } else {
                break;
            }
        }
        out.data[center] = Complex64::new(best.min(r_max), 0.0);
    }
    Ok(out)
}

/// Lattice offsets with |offset| ≤ r_max, sorted by physical distance.
fn sorted_offsets(domain: &LatticeDomain, r_max: f64) -> Vec<(f64, Vec<isize>)> {
    let dims = domain.real_dim();
    let mut ranges: Vec<isize> = Vec::with_capacity(dims);
    for k in 0..dims {
        ranges.push((r_max / domain.spacing()[k]).floor() as isize);
    }
    let mut out = Vec::new();
    let mut idx = vec![0isize; dims];
    fn rec(
        k: usize,
        dims: usize,
        ranges: &[isize],
        idx: &mut Vec<isize>,
        spacing: &[f64],
        r_max: f64,
        out: &mut Vec<(f64, Vec<isize>)>,
    ) {
        if k == dims {
            let d2: f64 = idx
                .iter()
                .zip(spacing)
                .map(|(&i, &h)| (i as f64 * h) * (i as f64 * h))
                .sum();
            let d = d2.sqrt();
            if d <= r_max {
                out.push((d, idx.clone()));
            }
            return;
        }
        for i in -ranges[k]..=ranges[k] {
            idx[k] = i;
            rec(k + 1, dims, ranges, idx, spacing, r_max, out);
        }
    }
    rec(0, dims, &ranges, &mut idx, domain.spacing(), r_max, &mut out);
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    out
}

fn offset_site(
    domain: &LatticeDomain,
    center: &[usize],
    offset: &[isize],
    shape: &[usize],
) -> Option<usize> {
    let mut idx = vec![0usize; center.len()];
    for k in 0..center.len() {
        let moved = center[k] as isize + offset[k];
        match domain.kind() {
            DomainKind::PeriodicTorus => {
                idx[k] = moved.rem_euclid(shape[k] as isize) as usize;
            }
            DomainKind::DirichletPatch => {
                if moved < 0 || moved >= shape[k] as isize {
                    return None;
                }
                idx[k] = moved as usize;
            }
        }
    }
    Some(domain.compose(&idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_curvature_gives_max_radius_everywhere() {
        let dom = LatticeDomain::unit_torus(2, 10).unwrap();
        let f = EndoFormField::zeros(&dom, 2, 1, 1).unwrap();
        let r = uhlenbeck_radius_field(&f, &dom, 1e-3).unwrap();
        let want = dom.injectivity_radius();
        for v in &r.data {
            assert!((v.re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn n1_returns_trivial_field() {
        let dom = LatticeDomain::unit_torus(1, 8).unwrap();
        let f = EndoFormField::zeros(&dom, 2, 1, 1).unwrap();
        let r = uhlenbeck_radius_field(&f, &dom, 1e-3).unwrap();
        assert!(r.data.iter().all(|v| (v.re - dom.injectivity_radius()).abs() < 1e-12));
    }

    #[test]
    fn concentrated_curvature_shrinks_radius_nearby() {
        let dom = LatticeDomain::unit_torus(2, 10).unwrap();
        let eps0 = 1e-3;
        let mut f = EndoFormField::zeros(&dom, 2, 1, 1).unwrap();
        // one cell holding ∫|F|² = 2·ε₀
        let hot = dom.compose(&[5, 5, 5, 5]);
        let w = dom.quad_weight(hot);
        let frame = crate::lattice::comps::frame_weight(1, 1);
        let amp = (2.0 * eps0 / (w * frame)).sqrt();
        let mut m = crate::linalg::CMat::zeros(2);
        m[(0, 0)] = Complex64::new(amp, 0.0);
        f.set_mat(0, hot, &m);

        let r = uhlenbeck_radius_field(&f, &dom, eps0).unwrap();
        let near = r.data[hot].re;
        let far = r.data[dom.compose(&[0, 0, 0, 0])].re;
        assert!(near < far, "radius near the hot cell {near} vs far {far}");
        // scaling by zero recovers the flat answer
        let r0 = uhlenbeck_radius_field(&f.scaled(Complex64::new(0.0, 0.0)), &dom, eps0).unwrap();
        assert!(r0.data.iter().all(|v| (v.re - dom.injectivity_radius()).abs() < 1e-12));
    }
}
