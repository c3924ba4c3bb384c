//! Deterministic synthetic fields for identity suites and tests.

use super::diff::fft_plan;
use super::domain::{DomainKind, LatticeDomain};
use super::field::{FormField, ScalarField};
use crate::error::Result;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random smooth complex field: on the torus, synthesized in frequency space
/// with modes restricted to `|k| ≤ max_frac·N/2` per axis (so products of two
/// such fields stay band-limited when `max_frac ≤ 1/2`); on patches, a sum of
/// a few low-order polynomial/trig modes.
pub fn random_smooth_scalar(
    domain: &LatticeDomain,
    rng: &mut ChaCha8Rng,
    max_frac: f64,
) -> ScalarField {
    match domain.kind() {
        DomainKind::PeriodicTorus => {
            let total = domain.site_count();
            let mut freq = vec![Complex64::new(0.0, 0.0); total];
            let dims = domain.real_dim();
            for (s, v) in freq.iter_mut().enumerate() {
                let idx = domain.decompose(s);
                let mut keep = true;
                for k in 0..dims {
                    let n = domain.shape()[k];
                    let m = idx[k];
                    let signed = if m <= (n - 1) / 2 { m as f64 } else { m as f64 - n as f64 };
                    if signed.abs() > max_frac * n as f64 / 2.0 {
                        keep = false;
                        break;
                    }
                }
                if keep {
                    *v = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                }
            }
            // inverse FFT per axis
            let mut data = freq;
            for axis in 0..dims {
                let n = domain.shape()[axis];
                let inv = fft_plan(n, false);
                super::diff::for_each_lane(domain, &mut data, axis, |lane| {
                    inv.process(lane);
                    for v in lane.iter_mut() {
                        *v /= n as f64;
                    }
                });
            }
            ScalarField { data }
        }
        DomainKind::DirichletPatch => {
            let dims = domain.real_dim();
            let n_modes = 4;
            let coeffs: Vec<(Complex64, Vec<f64>, Vec<f64>)> = (0..n_modes)
                .map(|_| {
                    let amp = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                    let wavevec: Vec<f64> =
                        (0..dims).map(|_| (rng.gen::<f64>() - 0.5) * 6.0).collect();
                    let phase: Vec<f64> = (0..dims).map(|_| rng.gen::<f64>() * 6.28).collect();
                    (amp, wavevec, phase)
                })
                .collect();
            ScalarField::from_fn(domain, |x| {
                let mut v = Complex64::new(0.0, 0.0);
                for (amp, wv, ph) in &coeffs {
                    let arg: f64 =
                        x.iter().zip(wv.iter().zip(ph)).map(|(xi, (w, p))| xi * w + p).sum();
                    v += amp * Complex64::new(arg.cos(), arg.sin() * 0.5);
                }
                v
            })
        }
    }
}

/// Random smooth (p,q)-form with independent components.
pub fn random_smooth_form(
    domain: &LatticeDomain,
    p: usize,
    q: usize,
    rng: &mut ChaCha8Rng,
    max_frac: f64,
) -> Result<FormField> {
    let mut f = FormField::zeros(domain, p, q)?;
    for c in 0..f.comp_count() {
        let s = random_smooth_scalar(domain, rng, max_frac);
        f.comp_slice_mut(c).copy_from_slice(&s.data);
    }
    Ok(f)
}

/// A smooth bump supported in the interior of a patch (zero on and near the
/// boundary), for compactly-supported integration-by-parts checks.
pub fn interior_bump(domain: &LatticeDomain, sharpness: f64) -> ScalarField {
    let dims = domain.real_dim();
    let spans: Vec<f64> = (0..dims).map(|k| domain.span(k)).collect();
    ScalarField::from_fn(domain, |x| {
        let mut v = 1.0;
        for k in 0..dims {
            let u = 2.0 * x[k] / spans[k]; // in [-1,1] on the patch
            let t = (1.0 - u * u).max(0.0);
            v *= (-sharpness * (1.0 - t * t)).exp() * t * t;
        }
        Complex64::new(v, 0.0)
    })
}
