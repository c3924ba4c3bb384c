//! First-derivative backends along single real axes.
//!
//! Periodic domains differentiate in frequency space (exact for band-limited
//! data, Nyquist mode dropped so the operator stays exactly anti-adjoint);
//! Dirichlet patches use centered second-order stencils with one-sided
//! second-order closures at the boundary.

use super::domain::{DomainKind, LatticeDomain};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

thread_local! {
    static FFT_CACHE: RefCell<HashMap<(usize, bool), Arc<dyn Fft<f64>>>> =
        RefCell::new(HashMap::new());
}

pub(crate) fn fft_plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    FFT_CACHE.with(|c| {
        c.borrow_mut()
            .entry((len, forward))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if forward {
                    planner.plan_fft_forward(len)
                } else {
                    planner.plan_fft_inverse(len)
                }
            })
            .clone()
    })
}

/// Angular frequency of FFT bin `m` on a periodic axis of `n` sites and span
/// `l`; the Nyquist bin of even axes maps to zero.
pub(crate) fn fft_xi(m: usize, n: usize, l: f64) -> f64 {
    let half = n / 2;
    let k = if m <= (n - 1) / 2 {
        m as isize
    } else if n % 2 == 0 && m == half {
        return 0.0;
    } else {
        m as isize - n as isize
    };
    2.0 * PI * k as f64 / l
}

/// Walk all 1-D lanes of a site-major array along `axis`, applying `f` to a
/// gathered copy of each lane and scattering the result back.
pub(crate) fn for_each_lane(
    domain: &LatticeDomain,
    data: &mut [Complex64],
    axis: usize,
    mut f: impl FnMut(&mut [Complex64]),
) {
    let n = domain.shape()[axis];
    let stride = domain.strides()[axis];
    let mut lane = vec![Complex64::new(0.0, 0.0); n];
    let total = domain.site_count();
    let block = stride * n;
    let mut base = 0usize;
    while base < total {
        for lo in base..base + stride {
            for (i, v) in lane.iter_mut().enumerate() {
                *v = data[lo + i * stride];
            }
            f(&mut lane);
            for (i, v) in lane.iter().enumerate() {
                data[lo + i * stride] = *v;
            }
        }
        base += block;
    }
}

/// ∂/∂x_axis of one site-major component array.
pub fn partial_axis(domain: &LatticeDomain, data: &[Complex64], axis: usize) -> Vec<Complex64> {
    let mut out = data.to_vec();
    match domain.kind() {
        DomainKind::PeriodicTorus => {
            let n = domain.shape()[axis];
            let l = domain.span(axis);
            let fwd = fft_plan(n, true);
            let inv = fft_plan(n, false);
            let mult: Vec<Complex64> = (0..n)
                .map(|m| Complex64::new(0.0, fft_xi(m, n, l)) / n as f64)
                .collect();
            for_each_lane(domain, &mut out, axis, |lane| {
                fwd.process(lane);
                for (v, m) in lane.iter_mut().zip(&mult) {
                    *v *= m;
                }
                inv.process(lane);
            });
        }
        DomainKind::DirichletPatch => {
            let h = domain.spacing()[axis];
            for_each_lane(domain, &mut out, axis, |lane| {
                let n = lane.len();
                let src = lane.to_vec();
                lane[0] = (-3.0 * src[0] + 4.0 * src[1] - src[2]) / (2.0 * h);
                for i in 1..n - 1 {
                    lane[i] = (src[i + 1] - src[i - 1]) / (2.0 * h);
                }
                lane[n - 1] = (3.0 * src[n - 1] - 4.0 * src[n - 2] + src[n - 3]) / (2.0 * h);
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_derivative_of_sine_matches_cosine() {
        let dom = LatticeDomain::unit_torus(1, 64).unwrap();
        let mut f = vec![Complex64::new(0.0, 0.0); dom.site_count()];
        for s in 0..dom.site_count() {
            let x = dom.coords(s);
            f[s] = Complex64::new((2.0 * PI * x[0]).sin(), 0.0);
        }
        let d = partial_axis(&dom, &f, 0);
        for s in 0..dom.site_count() {
            let x = dom.coords(s);
            let want = 2.0 * PI * (2.0 * PI * x[0]).cos();
            assert!((d[s].re - want).abs() <= 1e-12 * (1.0 + want.abs()), "site {s}");
            assert!(d[s].im.abs() < 1e-12);
        }
    }

    #[test]
    fn stencil_derivative_is_second_order() {
        let errs: Vec<f64> = [33usize, 65]
            .iter()
            .map(|&n| {
                let dom = LatticeDomain::unit_patch(1, n).unwrap();
                let mut f = vec![Complex64::new(0.0, 0.0); dom.site_count()];
                for s in 0..dom.site_count() {
                    let x = dom.coords(s);
                    f[s] = Complex64::new((2.0 * x[0]).sin() * (1.5 * x[1]).cos(), 0.0);
                }
                let d = partial_axis(&dom, &f, 0);
                let mut emax = 0.0_f64;
                for s in 0..dom.site_count() {
                    let x = dom.coords(s);
                    let want = 2.0 * (2.0 * x[0]).cos() * (1.5 * x[1]).cos();
                    emax = emax.max((d[s].re - want).abs());
                }
                emax
            })
            .collect();
        let ratio = errs[0] / errs[1];
        assert!(ratio > 3.0 && ratio < 5.0, "expected ~4, got {ratio} ({errs:?})");
    }

    #[test]
    fn spectral_derivative_exact_on_linear_patch_functions() {
        // One-sided closures are exact on polynomials of degree <= 2.
        let dom = LatticeDomain::unit_patch(1, 16).unwrap();
        let mut f = vec![Complex64::new(0.0, 0.0); dom.site_count()];
        for s in 0..dom.site_count() {
            let x = dom.coords(s);
            f[s] = Complex64::new(3.0 * x[0] - x[1], x[0] * x[0]);
        }
        let d = partial_axis(&dom, &f, 0);
        for s in 0..dom.site_count() {
            let x = dom.coords(s);
            assert!((d[s].re - 3.0).abs() < 1e-12);
            assert!((d[s].im - 2.0 * x[0]).abs() < 1e-11);
        }
    }
}
