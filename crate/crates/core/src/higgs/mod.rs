//! Endomorphism-valued field algebra: Hermitian adjoints, brackets, the
//! Hitchin morphism, spectral covers, discriminant data, and the pointwise
//! projection estimates.

pub mod endo;
pub mod fixtures;
pub mod ops;
pub mod projections;
pub mod sampling;
pub mod spectral;
pub mod symform;

pub use endo::{EndoFormField, HermitianMetricField};
pub use ops::{adjoint_wrt, bracket, endo_dbar, endo_del, graded_bracket, tensor_product, wedge_endo, wedge_square};
pub use projections::{commutator_gap_ratio, eigen_projections, norm_h, ProjectionOptions, Projections};
pub use spectral::{hitchin_map, min_gap, spectral_roots, RootOptions, SpectralData};
pub use symform::SymFormField;

use crate::error::Result;
use crate::lattice::LatticeDomain;
use crate::linalg::CMat;
use num_complex::Complex64;

/// `iΛ` of an endomorphism-valued (1,1)-field: `2·Σ_i [coefficient of
/// dz_i∧dz̄_i]` with the sign conventions of the scalar Λ.
pub fn i_lambda_endo(f: &EndoFormField, domain: &LatticeDomain) -> Result<EndoFormField> {
    use crate::lattice::ops::lambda_matrix;
    f.check_domain(domain)?;
    let n = domain.complex_dim();
    let mut out = EndoFormField::zeros(domain, f.rank, f.p - 1, f.q - 1)?;
    let i = Complex64::new(0.0, 1.0);
    for (ci, co, coeff) in lambda_matrix(n, f.p, f.q) {
        for s in 0..f.site_count() {
            let m = f.mat(ci, s).scale(coeff * i);
            let acc = out.mat(co, s) + m;
            out.set_mat(co, s, &acc);
        }
    }
    Ok(out)
}

/// Convenience constructors for the experiment presets.
pub mod presets {
    use super::*;

    /// Constant diagonal Higgs field `diag(λ₁,…,λ_r) dz₁`.
    pub fn diagonal(
        domain: &LatticeDomain,
        eigenvalues: &[Complex64],
    ) -> Result<EndoFormField> {
        let r = eigenvalues.len();
        let mut mats = vec![CMat::zeros(r); crate::lattice::comps::binomial(domain.complex_dim(), 1)];
        mats[0] = CMat::diag(eigenvalues);
        EndoFormField::constant(domain, r, 1, 0, &mats)
    }

    /// Hitchin-section field `[[0,1],[q,0]] dz₁` with `q` sampled per site.
    pub fn hitchin_section(
        domain: &LatticeDomain,
        q: impl Fn(&[f64]) -> Complex64,
    ) -> Result<EndoFormField> {
        EndoFormField::from_fn(domain, 2, 1, 0, |x, comp| {
            if comp == (1, 0) {
                let mut m = CMat::zeros(2);
                m[(0, 1)] = Complex64::new(1.0, 0.0);
                m[(1, 0)] = q(x);
                m
            } else {
                CMat::zeros(2)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::HsError;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn small_torus() -> LatticeDomain {
        LatticeDomain::unit_torus(1, 8).unwrap()
    }

    #[test]
    fn adjoint_examples() {
        let dom = small_torus();
        let h = HermitianMetricField::identity(&dom, 2);
        let phi = presets::diagonal(&dom, &[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let adj = adjoint_wrt(&h, &phi).unwrap();
        assert_eq!(adj.bidegree(), (0, 1));
        let want = CMat::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!((adj.mat(0, 3) - want).norm() < 1e-15);

        let phi = presets::hitchin_section(&dom, |_| c(0.0, 0.0)).unwrap();
        let adj = adjoint_wrt(&h, &phi).unwrap();
        let mut want = CMat::zeros(2);
        want[(1, 0)] = c(1.0, 0.0);
        assert!((adj.mat(0, 0) - want).norm() < 1e-15);
    }

    #[test]
    fn adjoint_is_involutive_and_pairs_correctly() {
        let dom = small_torus();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut rand_mat = |r: usize| {
            let mut m = CMat::zeros(r);
            for i in 0..r {
                for j in 0..r {
                    m[(i, j)] = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                }
            }
            m
        };
        let base = rand_mat(3);
        let entries = rand_mat(3);
        let h = HermitianMetricField::from_fn(&dom, 3, |x| {
            let wiggle = 0.2 * (x[0] * 6.0).sin();
            base * base.adjoint() + CMat::identity(3).scale(c(1.5 + wiggle, 0.0))
        });
        let phi = EndoFormField::from_fn(&dom, 3, 1, 0, |x, _| {
            entries + CMat::identity(3).scale(c((x[0] * 3.0).sin() * 0.4, x[1]))
        })
        .unwrap();
        let adj = adjoint_wrt(&h, &phi).unwrap();
        let back = adjoint_wrt(&h, &adj).unwrap();
        let diff = back.sub(&phi);
        assert!(diff.l2_norm(&dom) < 1e-12 * phi.l2_norm(&dom).max(1.0));

        // H(φs₁, s₂) = H(s₁, φ†s₂) per site and component
        for s in [0usize, 5, 17] {
            let hm = h.mat(s);
            let m = phi.mat(0, s);
            let madj = adj.mat(0, s);
            for trial in 0..4 {
                let s1: Vec<Complex64> =
                    (0..3).map(|i| c((i + trial) as f64 * 0.3 - 0.4, 0.7 - i as f64 * 0.2)).collect();
                let s2: Vec<Complex64> =
                    (0..3).map(|i| c(0.1 + i as f64 * 0.5, (trial as f64) * 0.2 - 0.3)).collect();
                let pair = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
                    // H(a,b) = b† H a
                    let ha = hm.mul_vec(a);
                    b.iter().zip(&ha).map(|(bi, hai)| bi.conj() * hai).sum()
                };
                let lhs = pair(&m.mul_vec(&s1), &s2);
                let rhs = pair(&s1, &madj.mul_vec(&s2));
                assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
            }
        }
    }

    #[test]
    fn ill_conditioned_metric_rejected() {
        let dom = small_torus();
        let h = HermitianMetricField::from_fn(&dom, 2, |_| {
            CMat::diag(&[c(1.0, 0.0), c(1e-14, 0.0)])
        });
        let phi = presets::diagonal(&dom, &[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert!(matches!(
            adjoint_wrt(&h, &phi),
            Err(HsError::Conditioning { .. })
        ));
    }

    #[test]
    fn wedge_square_examples() {
        // n = 1: no (2,0)-forms on a curve
        let dom = small_torus();
        let phi = presets::hitchin_section(&dom, |_| c(0.3, 0.1)).unwrap();
        let ws = wedge_square(&phi, &dom).unwrap();
        assert_eq!(ws.comp_count(), 0);
        assert_eq!(ws.l2_norm(&dom), 0.0);

        // n = 2: rank-one forms square to zero
        let dom2 = LatticeDomain::unit_torus(2, 8).unwrap();
        let sigma = CMat::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.5, -0.2), c(0.0, 0.0)]]);
        let lam = c(0.7, 0.4);
        let phi = EndoFormField::from_fn(&dom2, 2, 1, 0, |_, comp| {
            if comp == (1, 0) {
                sigma
            } else {
                sigma.scale(lam)
            }
        })
        .unwrap();
        let ws = wedge_square(&phi, &dom2).unwrap();
        assert!(ws.l2_norm(&dom2) < 1e-14);

        // non-commuting directions give [φ₁,φ₂] = diag(1,-1)
        let phi1 = CMat::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
        let phi2 = CMat::from_rows(&[&[c(0.0, 0.0), c(0.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]]);
        let phi = EndoFormField::from_fn(&dom2, 2, 1, 0, |_, comp| {
            if comp == (1, 0) {
                phi1
            } else {
                phi2
            }
        })
        .unwrap();
        let ws = wedge_square(&phi, &dom2).unwrap();
        let want = CMat::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!((ws.mat(0, 0) - want).norm() < 1e-14);
    }

    #[test]
    fn bracket_examples_and_lambda_convention() {
        let dom = small_torus();
        let h = HermitianMetricField::identity(&dom, 2);

        // commuting diagonals
        let phi = presets::diagonal(&dom, &[c(1.0, 0.5), c(-0.3, 0.2)]).unwrap();
        let adj = adjoint_wrt(&h, &phi).unwrap();
        let br = bracket(&phi, &adj, &dom).unwrap();
        assert!(br.l2_norm(&dom) < 1e-14);

        // φ = [[0,1],[0,0]]dz: [φ,φ†] = diag(1,-1) dz∧dz̄, iΛ[φ,φ†] = 2·diag(1,-1)
        let phi = presets::hitchin_section(&dom, |_| c(0.0, 0.0)).unwrap();
        let adj = adjoint_wrt(&h, &phi).unwrap();
        let br = bracket(&phi, &adj, &dom).unwrap();
        let want = CMat::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!((br.mat(0, 0) - want).norm() < 1e-14);
        let il = i_lambda_endo(&br, &dom).unwrap();
        assert!((il.mat(0, 0) - want.scale(c(2.0, 0.0))).norm() < 1e-14);

        // Fiber-level anchor for the sign convention: for any s in the
        // commutant of φ₁, ⟨[iΛ[φ,φ†], s], s⟩ = 2Σ_j|[φ_j†,s]|², the
        // form-weighted |[φ†,s]|².
        let k = il.mat(0, 0);
        let phi1 = phi.mat(0, 0);
        for (a, b) in [(c(1.0, 0.0), c(0.0, 0.0)), (c(0.3, -0.2), c(1.0, 0.4)), (c(0.0, 0.0), c(1.0, 0.0))] {
            let s = CMat::identity(2).scale(a) + phi1.scale(b);
            let lhs = k.commutator(&s).inner(&s).re;
            let rhs = 2.0 * phi1.adjoint().commutator(&s).norm_sq();
            assert!(
                (lhs - rhs).abs() < 1e-12 * (1.0 + rhs),
                "convention anchor: {lhs} vs {rhs}"
            );
        }

        // Measured constant of the companion identity
        // ⟨[iΛ[φ,φ†],φ],φ⟩ = c·|[φ,φ†]|²: with these conventions c = 1.
        let lhs = {
            let kphi = k.commutator(&phi1);
            2.0 * kphi.inner(&phi1).re // (1,0)-form frame weight
        };
        let br_norm_sq = 4.0 * br.mat(0, 0).norm_sq(); // |dz∧dz̄|² = 4
        assert!(
            (lhs - 1.0 * br_norm_sq).abs() < 1e-12 * (1.0 + br_norm_sq),
            "measured constant deviates: {lhs} vs {br_norm_sq}"
        );
    }

    #[test]
    fn hitchin_map_examples() {
        let dom = small_torus();
        let q = c(0.8, -0.3);
        let phi = presets::hitchin_section(&dom, move |_| q).unwrap();
        let theta = hitchin_map(&phi, &dom, None).unwrap();
        for s in 0..dom.site_count() {
            assert!(theta.coeff(1).at(0, s).norm() < 1e-14);
            assert!((theta.coeff(2).at(0, s) - (-q)).norm() < 1e-14);
        }

        // homogeneity κ(tφ)_k = t^k κ(φ)_k
        let t = 3.7_f64;
        let theta_t = hitchin_map(&phi.scaled(c(t, 0.0)), &dom, None).unwrap();
        for s in 0..dom.site_count() {
            let want = theta.coeff(2).at(0, s) * t.powi(2);
            let got = theta_t.coeff(2).at(0, s);
            assert!((got - want).norm() <= 1e-13 * want.norm().max(1.0));
        }

        // planted commuting triple, r = 3
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let evs = [c(0.9, 0.1), c(-0.4, 0.7), c(0.2, -1.1)];
        let mut g = CMat::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                g[(i, j)] = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
        }
        let g = g + CMat::identity(3).scale(c(2.0, 0.0));
        let gi = g.inverse().unwrap();
        let planted = g * CMat::diag(&evs) * gi;
        let phi = EndoFormField::constant(&dom, 3, 1, 0, &[planted]).unwrap();
        let theta = hitchin_map(&phi, &dom, None).unwrap();
        let e1 = evs[0] + evs[1] + evs[2];
        let e2 = evs[0] * evs[1] + evs[0] * evs[2] + evs[1] * evs[2];
        let e3 = evs[0] * evs[1] * evs[2];
        let s0 = 0;
        assert!((theta.coeff(1).at(0, s0) - (-e1)).norm() < 1e-10);
        assert!((theta.coeff(2).at(0, s0) - e2).norm() < 1e-10);
        assert!((theta.coeff(3).at(0, s0) - (-e3)).norm() < 1e-10);
    }

    #[test]
    fn hitchin_map_rejects_nonintegrable() {
        let dom2 = LatticeDomain::unit_torus(2, 8).unwrap();
        let phi1 = CMat::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
        let phi2 = CMat::from_rows(&[&[c(0.0, 0.0), c(0.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]]);
        let phi = EndoFormField::from_fn(&dom2, 2, 1, 0, |_, comp| {
            if comp == (1, 0) {
                phi1
            } else {
                phi2
            }
        })
        .unwrap();
        assert!(matches!(
            hitchin_map(&phi, &dom2, None),
            Err(HsError::Integrability { .. })
        ));
    }

    #[test]
    fn spectral_roots_examples() {
        let dom = small_torus();
        let q = c(0.5, 0.9);
        let phi = presets::hitchin_section(&dom, move |_| q).unwrap();
        let mut theta = hitchin_map(&phi, &dom, None).unwrap();
        theta.ensure_roots(&dom, RootOptions::default()).unwrap();
        let roots = spectral_roots(&theta, 0).unwrap();
        let sq = q.sqrt();
        let mut got: Vec<Complex64> = roots.iter().map(|r| r[0]).collect();
        got.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        let mut want = vec![sq, -sq];
        want.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-10);
        }

        // Θ = 0: r-fold zero root
        let zero = presets::diagonal(&dom, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let mut theta = hitchin_map(&zero, &dom, None).unwrap();
        theta.ensure_roots(&dom, RootOptions::default()).unwrap();
        let roots = spectral_roots(&theta, 5).unwrap();
        assert_eq!(roots.len(), 3);
        for r in roots {
            assert!(r[0].norm() < 1e-12);
        }

        // planted diagonal recovery
        let evs = [c(0.9, 0.1), c(-0.4, 0.7), c(0.2, -1.1)];
        let phi = presets::diagonal(&dom, &evs).unwrap();
        let mut theta = hitchin_map(&phi, &dom, None).unwrap();
        theta.ensure_roots(&dom, RootOptions::default()).unwrap();
        let mut got: Vec<Complex64> =
            spectral_roots(&theta, 2).unwrap().iter().map(|r| r[0]).collect();
        let mut want = evs.to_vec();
        let key = |v: &Complex64| (v.re, v.im);
        got.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        want.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-10);
        }
    }

    #[test]
    fn eigenvalue_bound_on_generated_fields() {
        // |λ| ≤ |φ| at every site, geometric norms both sides
        let dom = small_torus();
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..5 {
            let evs: Vec<Complex64> =
                (0..3).map(|_| c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)).collect();
            let phi = presets::diagonal(&dom, &evs).unwrap();
            let mut theta = hitchin_map(&phi, &dom, None).unwrap();
            theta.ensure_roots(&dom, RootOptions::default()).unwrap();
            for s in 0..dom.site_count() {
                let phin = phi.norm_sq_at(s).sqrt();
                for r in spectral_roots(&theta, s).unwrap() {
                    let ln = symform::covector_norm_geometric(&r);
                    assert!(ln <= phin * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn discriminant_examples() {
        let dom = small_torus();
        let q = c(0.4, -0.7);
        let phi = presets::hitchin_section(&dom, move |_| q).unwrap();
        let mut theta = hitchin_map(&phi, &dom, None).unwrap();
        theta.ensure_discriminant(&dom, None, RootOptions::default()).unwrap();
        // Δ = 4q dz², locus empty
        let disc = theta.discriminant.as_ref().unwrap();
        for s in 0..dom.site_count() {
            assert!((disc.at(0, s) - q * 4.0).norm() < 1e-12);
        }
        assert!(theta.mask.as_ref().unwrap().iter().all(|&m| !m));

        // resultant-identity route vs root route
        let from_roots = theta.discriminant_from_roots(&dom).unwrap();
        for s in 0..dom.site_count() {
            let a = disc.at(0, s);
            let b = from_roots.at(0, s);
            assert!((a - b).norm() <= 1e-8 * a.norm().max(1e-12));
        }

        // Θ = 0: Δ ≡ 0, mask = all sites
        let zero = presets::diagonal(&dom, &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let mut theta = hitchin_map(&zero, &dom, None).unwrap();
        theta.ensure_discriminant(&dom, None, RootOptions::default()).unwrap();
        assert!(theta.mask.as_ref().unwrap().iter().all(|&m| m));

        // patch q(z) = z: default mask hugs the origin
        let patch = LatticeDomain::unit_patch(1, 33).unwrap();
        let phi = presets::hitchin_section(&patch, |x| c(x[0], x[1])).unwrap();
        let mut theta = hitchin_map(&phi, &patch, None).unwrap();
        theta.ensure_discriminant(&patch, None, RootOptions::default()).unwrap();
        let mask = theta.mask.as_ref().unwrap();
        assert!(mask.iter().any(|&m| m), "mask should be non-empty near the origin");
        for (s, &m) in mask.iter().enumerate() {
            let x = patch.coords(s);
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            if m {
                assert!(r < 0.15, "masked site too far from origin: {r}");
            } else {
                assert!(r > 0.01, "origin cell must be masked");
            }
        }
    }

    #[test]
    fn tensor_product_examples() {
        let dom = small_torus();
        // tensoring with a rank-1 zero field preserves the spectrum
        let phi1 = presets::diagonal(&dom, &[c(0.5, 0.2), c(-0.9, 0.0)]).unwrap();
        let one = presets::diagonal(&dom, &[c(0.0, 0.0)]).unwrap();
        let prod = tensor_product(&phi1, &one, &dom).unwrap();
        let mut theta = hitchin_map(&prod, &dom, None).unwrap();
        theta.ensure_roots(&dom, RootOptions::default()).unwrap();
        let mut got: Vec<Complex64> =
            spectral_roots(&theta, 0).unwrap().iter().map(|r| r[0]).collect();
        let key = |v: &Complex64| (v.re, v.im);
        got.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        assert!((got[0] - c(-0.9, 0.0)).norm() < 1e-10);
        assert!((got[1] - c(0.5, 0.2)).norm() < 1e-10);

        // diag(a,b) ⊗̂ diag(c,d): all pairwise sums
        let a = c(0.5, 0.2);
        let b = c(-0.9, 0.0);
        let cc = c(0.1, -0.4);
        let d = c(1.2, 0.3);
        let phi2 = presets::diagonal(&dom, &[cc, d]).unwrap();
        let prod = tensor_product(&phi1, &phi2, &dom).unwrap();
        let mut theta = hitchin_map(&prod, &dom, None).unwrap();
        theta.ensure_roots(&dom, RootOptions::default()).unwrap();
        let mut got: Vec<Complex64> =
            spectral_roots(&theta, 0).unwrap().iter().map(|r| r[0]).collect();
        let mut want = vec![a + cc, a + d, b + cc, b + d];
        got.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        want.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-9, "{g} vs {w}");
        }

        // rank overflow guard
        let phi3 = presets::diagonal(&dom, &[c(0.0, 0.0); 3]).unwrap();
        assert!(matches!(
            tensor_product(&phi3, &phi3, &dom),
            Err(HsError::RankOverflow { .. })
        ));
    }

    #[test]
    fn unitary_gauge_preserves_h_norms() {
        let dom = small_torus();
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let mut rand_mat = |r: usize| {
            let mut m = CMat::zeros(r);
            for i in 0..r {
                for j in 0..r {
                    m[(i, j)] = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                }
            }
            m
        };
        // constant unitary from the QR-like normalization of a random matrix
        let g0 = rand_mat(2) + CMat::identity(2).scale(c(2.0, 0.0));
        // Gram-Schmidt
        let mut u = g0;
        let n0: f64 = (0..2).map(|i| u[(i, 0)].norm_sqr()).sum::<f64>();
        let n0 = n0.sqrt();
        for i in 0..2 {
            u[(i, 0)] /= n0;
        }
        let dot: Complex64 = (0..2).map(|i| u[(i, 0)].conj() * u[(i, 1)]).sum();
        for i in 0..2 {
            let p = u[(i, 0)] * dot;
            u[(i, 1)] -= p;
        }
        let n1: f64 = (0..2).map(|i| u[(i, 1)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..2 {
            u[(i, 1)] /= n1;
        }
        assert!((u.adjoint() * u - CMat::identity(2)).norm() < 1e-12);

        let hbase = rand_mat(2);
        let h = HermitianMetricField::from_fn(&dom, 2, |_| {
            hbase * hbase.adjoint() + CMat::identity(2)
        });
        let phi = presets::hitchin_section(&dom, |x| c(x[0] * 2.0 - 0.3, x[1])).unwrap();

        // H^g = g†Hg, φ^g = g⁻¹φg
        let ginv = u.inverse().unwrap();
        let phig = phi.conjugated_by(&|_s| (u, ginv));
        let hg = HermitianMetricField::from_fn(&dom, 2, |x| {
            let s = dom.nearest_site(x);
            u.adjoint() * h.mat(s) * u
        });

        let adj = adjoint_wrt(&h, &phi).unwrap();
        let br = bracket(&phi, &adj, &dom).unwrap();
        let adjg = adjoint_wrt(&hg, &phig).unwrap();
        let brg = bracket(&phig, &adjg, &dom).unwrap();
        let a = br.l2_norm_h(&dom, &h);
        let b = brg.l2_norm_h(&dom, &hg);
        assert!((a - b).abs() <= 1e-10 * (1.0 + a), "|[φ,φ†]|_H not gauge invariant: {a} vs {b}");
    }
}
