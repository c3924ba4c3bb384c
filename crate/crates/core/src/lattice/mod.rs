//! Discrete flat Kähler geometry: domains, fields, differential operators,
//! contraction, inner products and integration.

pub mod comps;
pub mod diff;
pub mod domain;
pub mod field;
pub mod ops;
pub mod synth;

pub use domain::{DomainKind, LatticeDomain};
pub use field::{FormField, ScalarField};
pub use ops::{
    adjoint_dbar, adjoint_del, contract_lambda, dbar, del, kahler_identity_residual, l2_inner,
    lambda_general, laplacian, omega, top_form_density, wedge,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::HsError;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dbar_of_constant_is_zero() {
        let dom = LatticeDomain::unit_torus(1, 16).unwrap();
        let f = ScalarField::constant(&dom, c(2.5, -1.0)).as_form();
        let d = dbar(&f, &dom).unwrap();
        assert!(d.l2_norm(&dom) < 1e-13);
    }

    #[test]
    fn dbar_of_zbar_is_one() {
        // f(z) = z̄₁ on a torus is not periodic, so use the patch where the
        // stencils are exact on linear functions.
        let dom = LatticeDomain::unit_patch(1, 16).unwrap();
        let f = ScalarField::from_fn(&dom, |x| c(x[0], -x[1])).as_form();
        let d = dbar(&f, &dom).unwrap();
        for s in 0..dom.site_count() {
            assert!((d.at(0, s) - c(1.0, 0.0)).norm() < 1e-12, "site {s}: {}", d.at(0, s));
        }
        // and ∂ of z̄ vanishes
        let dd = del(&f, &dom).unwrap();
        assert!(dd.l2_norm(&dom) < 1e-11);
    }

    #[test]
    fn spectral_derivative_matches_closed_form() {
        let dom = LatticeDomain::unit_torus(1, 64).unwrap();
        let f = ScalarField::from_fn(&dom, |x| c((2.0 * PI * x[0]).sin(), 0.0)).as_form();
        // ∂̄f + ∂f picks up the full x-derivative: check the dz̄ part of ∂̄f
        // against cos(2πx)/2.
        let d = dbar(&f, &dom).unwrap();
        let mut err = 0.0_f64;
        for s in 0..dom.site_count() {
            let x = dom.coords(s);
            let want = 0.5 * 2.0 * PI * (2.0 * PI * x[0]).cos();
            err = err.max((d.at(0, s) - c(want, 0.0)).norm() / want.abs().max(1.0));
        }
        assert!(err < 1e-12, "relative error {err}");
    }

    #[test]
    fn dbar_squares_to_zero_on_torus() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let dom = LatticeDomain::unit_torus(2, 12).unwrap();
        for (p, q) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let f = synth::random_smooth_form(&dom, p, q, &mut rng, 0.4).unwrap();
            if q + 2 <= 2 {
                let d2 = dbar(&dbar(&f, &dom).unwrap(), &dom).unwrap();
                assert!(
                    d2.l2_norm(&dom) <= 1e-12 * f.l2_norm(&dom),
                    "dbar² non-zero on ({p},{q})"
                );
            }
            if p + 2 <= 2 {
                let e2 = del(&del(&f, &dom).unwrap(), &dom).unwrap();
                assert!(e2.l2_norm(&dom) <= 1e-12 * f.l2_norm(&dom));
            }
        }
    }

    #[test]
    fn degree_overflow_errors() {
        let dom = LatticeDomain::unit_torus(1, 8).unwrap();
        let f = FormField::zeros(&dom, 0, 1).unwrap();
        assert!(matches!(dbar(&f, &dom), Err(HsError::InvalidDegree { .. })));
        let f = FormField::zeros(&dom, 1, 0).unwrap();
        assert!(matches!(del(&f, &dom), Err(HsError::InvalidDegree { .. })));
    }

    #[test]
    fn lambda_of_omega_is_n() {
        for n in [1usize, 2] {
            let dom = LatticeDomain::unit_torus(n, 8).unwrap();
            let w = omega(&dom);
            let l = contract_lambda(&w, &dom).unwrap();
            for v in &l.data {
                assert!((v - c(n as f64, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn lambda_of_single_diagonal_term() {
        let dom = LatticeDomain::unit_torus(2, 8).unwrap();
        // dz₁∧dz̄₁ → -2i ; dz₁∧dz̄₂ → 0
        let mut f = FormField::zeros(&dom, 1, 1).unwrap();
        let table = f.comps.clone();
        let c11 = comps::comp_index(&table, (1, 1));
        for v in f.comp_slice_mut(c11) {
            *v = c(1.0, 0.0);
        }
        let l = contract_lambda(&f, &dom).unwrap();
        for v in &l.data {
            assert!((v - c(0.0, -2.0)).norm() < 1e-15);
        }
        let mut g = FormField::zeros(&dom, 1, 1).unwrap();
        let c12 = comps::comp_index(&table, (1, 2));
        for v in g.comp_slice_mut(c12) {
            *v = c(3.0, 1.0);
        }
        let l = contract_lambda(&g, &dom).unwrap();
        assert!(l.sup_norm() < 1e-15);
    }

    #[test]
    fn lambda_against_wedge_with_omega() {
        // Λα·vol = α∧ω^{n-1}/(n-1)! pointwise, for n = 1 and 2.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in [1usize, 2] {
            let dom = LatticeDomain::unit_torus(n, 8).unwrap();
            let alpha = synth::random_smooth_form(&dom, 1, 1, &mut rng, 0.4).unwrap();
            let lam = contract_lambda(&alpha, &dom).unwrap();
            let mut top = alpha.clone();
            for _ in 0..n - 1 {
                top = wedge(&top, &omega(&dom), &dom).unwrap();
            }
            let dens = top_form_density(&top, &dom).unwrap();
            let scale = lam.sup_norm().max(1e-30);
            for s in 0..dom.site_count() {
                assert!(
                    (lam.data[s] - dens.data[s]).norm() <= 1e-10 * scale,
                    "n={n} site {s}: {} vs {}",
                    lam.data[s],
                    dens.data[s]
                );
            }
        }
    }

    #[test]
    fn laplacian_of_constant_is_zero() {
        let dom = LatticeDomain::unit_torus(1, 16).unwrap();
        let f = ScalarField::constant(&dom, c(4.0, 1.0));
        let l = laplacian(&f, &dom).unwrap();
        assert!(l.sup_norm() < 1e-12);
    }

    #[test]
    fn laplacian_plane_wave_eigenvalue() {
        let dom = LatticeDomain::unit_torus(2, 8).unwrap();
        let k = [2.0, -1.0, 3.0, 0.0];
        let f = ScalarField::from_fn(&dom, |x| {
            let arg: f64 = 2.0 * PI * x.iter().zip(&k).map(|(xi, ki)| xi * ki).sum::<f64>();
            c(arg.cos(), arg.sin())
        });
        let want: f64 = k.iter().map(|ki| (2.0 * PI * ki).powi(2)).sum();
        let l = laplacian(&f, &dom).unwrap();
        for s in 0..dom.site_count() {
            let rel = (l.data[s] - f.data[s] * want).norm() / want;
            assert!(rel < 1e-10, "site {s} rel {rel}");
        }
    }

    #[test]
    fn laplacian_equals_twice_adjoint_dbar_dbar() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let dom = LatticeDomain::unit_torus(1, 32).unwrap();
        let f = synth::random_smooth_scalar(&dom, &mut rng, 0.4);
        let l1 = laplacian(&f, &dom).unwrap();
        let df = dbar(&f.as_form(), &dom).unwrap();
        let l2 = adjoint_dbar(&df, &dom).unwrap();
        let mut diff = 0.0_f64;
        let mut scale = 0.0_f64;
        for s in 0..dom.site_count() {
            diff = diff.max((l1.data[s] - 2.0 * l2.at(0, s)).norm());
            scale = scale.max(l1.data[s].norm());
        }
        assert!(diff <= 1e-10 * scale, "Δ vs 2∂̄*∂̄: {diff} (scale {scale})");
    }

    #[test]
    fn l2_inner_positivity_and_frame() {
        let dom = LatticeDomain::unit_torus(1, 16).unwrap();
        let z = FormField::zeros(&dom, 1, 0).unwrap();
        assert!(l2_inner(&z, &z, &dom).unwrap().norm() < 1e-30);
        // ⟨dz, dz⟩ = 2·Vol
        let mut f = FormField::zeros(&dom, 1, 0).unwrap();
        for v in f.comp_slice_mut(0) {
            *v = c(1.0, 0.0);
        }
        let ip = l2_inner(&f, &f, &dom).unwrap();
        assert!((ip - c(2.0 * dom.total_volume(), 0.0)).norm() < 1e-13);
    }

    #[test]
    fn parseval_on_torus() {
        // site-space inner product equals frequency-space inner product
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let dom = LatticeDomain::unit_torus(1, 32).unwrap();
        let a = synth::random_smooth_scalar(&dom, &mut rng, 0.9);
        let b = synth::random_smooth_scalar(&dom, &mut rng, 0.9);
        let site: Complex64 = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| x * y.conj())
            .sum::<Complex64>()
            / dom.site_count() as f64;
        // transform both and compare
        let to_freq = |f: &ScalarField| {
            let mut d = f.data.clone();
            for axis in 0..dom.real_dim() {
                let n = dom.shape()[axis];
                let plan = diff::fft_plan(n, true);
                diff::for_each_lane(&dom, &mut d, axis, |lane| plan.process(lane));
            }
            d
        };
        let fa = to_freq(&a);
        let fb = to_freq(&b);
        let freq: Complex64 = fa.iter().zip(&fb).map(|(x, y)| x * y.conj()).sum::<Complex64>()
            / (dom.site_count() as f64).powi(2);
        assert!((site - freq).norm() <= 1e-12 * site.norm().max(1e-10));
    }

    #[test]
    fn kahler_identity_zero_field() {
        let dom = LatticeDomain::unit_torus(1, 16).unwrap();
        let f = FormField::zeros(&dom, 1, 0).unwrap();
        assert!(kahler_identity_residual(&f, &dom).unwrap() < 1e-30);
    }

    #[test]
    fn kahler_identity_spectral_exactness() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for n in [1usize, 2] {
            let sites = if n == 1 { 64 } else { 12 };
            let dom = LatticeDomain::unit_torus(n, sites).unwrap();
            for (p, q) in [(1, 0), (1, 1)] {
                let f = synth::random_smooth_form(&dom, p, q, &mut rng, 0.4).unwrap();
                let r = kahler_identity_residual(&f, &dom).unwrap();
                let nf = f.l2_norm(&dom);
                assert!(r <= 1e-10 * nf, "n={n} ({p},{q}): residual {r} vs ‖f‖ {nf}");
            }
        }
    }

    #[test]
    fn kahler_identity_exact_on_patch_too() {
        // Λ is pointwise and every term on either side carries exactly one
        // shared ∂_axis, so the two routes agree to rounding on any domain,
        // not just spectrally. The O(h²) bound is met with room to spare.
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for n_sites in [33usize, 65] {
            let dom = LatticeDomain::unit_patch(1, n_sites).unwrap();
            for (p, q) in [(1, 0), (1, 1)] {
                let f = synth::random_smooth_form(&dom, p, q, &mut rng, 0.4).unwrap();
                let r = kahler_identity_residual(&f, &dom).unwrap();
                assert!(r <= 1e-12 * f.l2_norm(&dom), "({p},{q}) at N={n_sites}: {r}");
            }
        }
    }

    #[test]
    fn patch_laplacian_is_second_order_in_the_interior() {
        // Richardson on the composed 2iΛ∂̄∂: interior error ratio ≈ 4 when N
        // doubles. The one-sided closures compose to first order on the
        // outermost layers, so those are excluded.
        let errs: Vec<f64> = [33usize, 65]
            .iter()
            .map(|&n_sites| {
                let dom = LatticeDomain::unit_patch(1, n_sites).unwrap();
                let f = ScalarField::from_fn(&dom, |x| {
                    c((2.0 * x[0]).sin() * (1.5 * x[1]).cos(), 0.0)
                });
                let l = laplacian(&f, &dom).unwrap();
                let mut emax = 0.0_f64;
                for s in 0..dom.site_count() {
                    let idx = dom.decompose(s);
                    if idx.iter().zip(dom.shape()).any(|(&i, &n)| i < 3 || i >= n - 3) {
                        continue;
                    }
                    let x = dom.coords(s);
                    let want = (4.0 + 2.25) * (2.0 * x[0]).sin() * (1.5 * x[1]).cos();
                    emax = emax.max((l.data[s] - c(want, 0.0)).norm());
                }
                emax
            })
            .collect();
        let ratio = errs[0] / errs[1];
        assert!(ratio > 2.8 && ratio < 5.5, "expected ~4, got {ratio} from {errs:?}");
    }

    #[test]
    fn integration_by_parts() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        // periodic: exact
        let dom = LatticeDomain::unit_torus(1, 32).unwrap();
        let f = synth::random_smooth_form(&dom, 0, 0, &mut rng, 0.4).unwrap();
        let g = synth::random_smooth_form(&dom, 0, 1, &mut rng, 0.4).unwrap();
        let lhs = l2_inner(&dbar(&f, &dom).unwrap(), &g, &dom).unwrap();
        let rhs = l2_inner(&f, &adjoint_dbar(&g, &dom).unwrap(), &dom).unwrap();
        assert!(
            (lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0),
            "torus ibp: {lhs} vs {rhs}"
        );

        // patch: holds for compactly supported test fields
        let dom = LatticeDomain::unit_patch(1, 48).unwrap();
        let bump = synth::interior_bump(&dom, 2.0);
        let f = bump.as_form();
        let mut g = FormField::zeros(&dom, 0, 1).unwrap();
        for (s, v) in g.comp_slice_mut(0).iter_mut().enumerate() {
            let x = dom.coords(s);
            *v = bump.data[s] * c((3.0 * x[0]).cos(), x[1]);
        }
        let lhs = l2_inner(&dbar(&f, &dom).unwrap(), &g, &dom).unwrap();
        let rhs = l2_inner(&f, &adjoint_dbar(&g, &dom).unwrap(), &dom).unwrap();
        let scale = lhs.norm().max(g.l2_norm(&dom) * f.l2_norm(&dom)).max(1e-10);
        assert!((lhs - rhs).norm() <= 2e-3 * scale, "patch ibp: {lhs} vs {rhs}");
    }

    #[test]
    fn laplacian_self_adjoint_on_torus() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let dom = LatticeDomain::unit_torus(1, 32).unwrap();
        let f = synth::random_smooth_scalar(&dom, &mut rng, 0.4);
        let g = synth::random_smooth_scalar(&dom, &mut rng, 0.4);
        let lf = laplacian(&f, &dom).unwrap();
        let lg = laplacian(&g, &dom).unwrap();
        let a = l2_inner(&lf.as_form(), &g.as_form(), &dom).unwrap();
        let b = l2_inner(&f.as_form(), &lg.as_form(), &dom).unwrap();
        let scale = f.l2_norm(&dom) * g.l2_norm(&dom);
        assert!((a - b).norm() <= 1e-10 * scale);
    }
}
