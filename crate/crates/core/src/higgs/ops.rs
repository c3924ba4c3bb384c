//! Pointwise algebra of endomorphism-valued forms: Hermitian adjoints,
//! wedges, brackets, and tensor products.

use super::endo::{EndoFormField, HermitianMetricField};
use crate::error::{HsError, Result};
use crate::lattice::comps::{comp_index, wedge_basis};
use crate::lattice::diff::partial_axis;
use crate::lattice::ops::{dbar_terms, del_terms, Term};
use crate::lattice::LatticeDomain;
use crate::linalg::{CMat, MAX_RANK};
use num_complex::Complex64;

/// Condition-number ceiling for metric-dependent adjoints.
pub const COND_LIMIT: f64 = 1e12;

/// Hermitian adjoint `Φ† = H⁻¹ Φ*ᵀ H` with the form indices conjugated
/// (dz ↔ dz̄, picking up `(-1)^{pq}` from reordering); involutive.
pub fn adjoint_wrt(h: &HermitianMetricField, phi: &EndoFormField) -> Result<EndoFormField> {
    if h.rank != phi.rank || h.site_count() != phi.site_count() {
        return Err(HsError::ShapeMismatch("metric/field mismatch in adjoint_wrt".into()));
    }
    let cond = h.condition_number();
    if !(cond <= COND_LIMIT) {
        return Err(HsError::Conditioning { cond, limit: COND_LIMIT });
    }
    let inv = h.inverses();
    adjoint_wrt_with(phi, &|s| (h.mat(s), inv[s]))
}

/// Adjoint with caller-supplied `(H, H⁻¹)` per site (hot paths cache these).
pub fn adjoint_wrt_with(
    phi: &EndoFormField,
    metric_at: &dyn Fn(usize) -> (CMat, CMat),
) -> Result<EndoFormField> {
    let sign = if (phi.p * phi.q) % 2 == 0 { 1.0 } else { -1.0 };
    let mut out = phi.clone();
    std::mem::swap(&mut out.p, &mut out.q);
    out.comps = phi.comps.iter().map(|&(hm, am)| (am, hm)).collect();
    // component table of the swapped bidegree is the mask-swap of the original
    // but must be emitted in canonical order
    let mut order: Vec<usize> = (0..out.comps.len()).collect();
    order.sort_by_key(|&i| out.comps[i]);
    let sorted: Vec<_> = order.iter().map(|&i| out.comps[i]).collect();
    for s in 0..phi.site_count() {
        let (hm, hinv) = metric_at(s);
        for (dst, &src) in order.iter().enumerate() {
            let m = phi.mat(src, s);
            let adj = (hinv * m.adjoint() * hm).scale(Complex64::new(sign, 0.0));
            out.set_mat(dst, s, &adj);
        }
    }
    out.comps = sorted;
    Ok(out)
}

/// Pointwise wedge with fiber matrix multiplication.
pub fn wedge_endo(
    a: &EndoFormField,
    b: &EndoFormField,
    domain: &LatticeDomain,
) -> Result<EndoFormField> {
    a.check_domain(domain)?;
    b.check_domain(domain)?;
    a.check_compatible(b)?;
    let n = domain.complex_dim();
    let (p, q) = (a.p + b.p, a.q + b.q);
    let mut out = EndoFormField::zeros(domain, a.rank, p, q)?;
    if out.comp_count() == 0 {
        return Ok(out); // degree beyond n: the zero form space
    }
    let tout = out.comps.clone();
    for (ca, &compa) in a.comps.iter().enumerate() {
        for (cb, &compb) in b.comps.iter().enumerate() {
            if let Some((c, sign)) = wedge_basis(compa, compb, n) {
                let co = comp_index(&tout, c);
                let sgn = Complex64::new(sign, 0.0);
                for s in 0..a.site_count() {
                    let m = (a.mat(ca, s) * b.mat(cb, s)).scale(sgn);
                    let acc = out.mat(co, s) + m;
                    out.set_mat(co, s, &acc);
                }
            }
        }
    }
    Ok(out)
}

/// `φ∧φ` of a (1,0)-field: the (2,0)-field with components `[φ_i, φ_j]` on
/// `dz_i∧dz_j`, identically the empty zero field when n = 1.
pub fn wedge_square(phi: &EndoFormField, domain: &LatticeDomain) -> Result<EndoFormField> {
    if phi.bidegree() != (1, 0) {
        return Err(HsError::InvalidDegree {
            context: "wedge_square expects a (1,0)-field",
            p: phi.p as isize,
            q: phi.q as isize,
            n: domain.complex_dim(),
        });
    }
    wedge_endo(phi, phi, domain)
}

/// Graded bracket `[φ,ψ] = φ∧ψ + ψ∧φ` of a (1,0)- and a (0,1)-field: matrix
/// commutators `[φ_i, ψ_j]` on the mixed components `dz_i∧dz̄_j`.
pub fn bracket(
    phi: &EndoFormField,
    psi: &EndoFormField,
    domain: &LatticeDomain,
) -> Result<EndoFormField> {
    if phi.bidegree() != (1, 0) || psi.bidegree() != (0, 1) {
        return Err(HsError::InvalidDegree {
            context: "bracket expects (1,0) and (0,1) fields",
            p: phi.p as isize,
            q: psi.q as isize,
            n: domain.complex_dim(),
        });
    }
    let ab = wedge_endo(phi, psi, domain)?;
    let ba = wedge_endo(psi, phi, domain)?;
    Ok(ab.add(&ba))
}

fn endo_apply_terms(
    domain: &LatticeDomain,
    input: &EndoFormField,
    terms: &[Term],
    out_p: usize,
    out_q: usize,
) -> Result<EndoFormField> {
    let mut out = EndoFormField::zeros(domain, input.rank, out_p, out_q)?;
    for t in terms {
        for i in 0..input.rank {
            for j in 0..input.rank {
                let plane = input.entry_plane(t.cin, i, j);
                let d = partial_axis(domain, &plane, t.axis);
                out.add_entry_plane(t.cout, i, j, &d, t.coeff);
            }
        }
    }
    Ok(out)
}

/// The flat ∂̄ applied entrywise to an End-valued (p,q)-form. Degrees beyond
/// n land in the zero form space (an empty-component field), so composites
/// like `d_Aφ` stay total.
pub fn endo_dbar(f: &EndoFormField, domain: &LatticeDomain) -> Result<EndoFormField> {
    f.check_domain(domain)?;
    let n = domain.complex_dim();
    if f.q + 1 > n || f.comp_count() == 0 {
        return EndoFormField::zeros(domain, f.rank, f.p, f.q + 1);
    }
    endo_apply_terms(domain, f, &dbar_terms(n, f.p, f.q), f.p, f.q + 1)
}

/// The flat ∂ applied entrywise; mirror of [`endo_dbar`].
pub fn endo_del(f: &EndoFormField, domain: &LatticeDomain) -> Result<EndoFormField> {
    f.check_domain(domain)?;
    let n = domain.complex_dim();
    if f.p + 1 > n || f.comp_count() == 0 {
        return EndoFormField::zeros(domain, f.rank, f.p + 1, f.q);
    }
    endo_apply_terms(domain, f, &del_terms(n, f.p, f.q), f.p + 1, f.q)
}

/// Graded bracket `[a,b] = a∧b − (−1)^{|a||b|} b∧a` of endo-valued forms.
pub fn graded_bracket(
    a: &EndoFormField,
    b: &EndoFormField,
    domain: &LatticeDomain,
) -> Result<EndoFormField> {
    let ab = wedge_endo(a, b, domain)?;
    let ba = wedge_endo(b, a, domain)?;
    let sign = ((a.p + a.q) * (b.p + b.q)) % 2 == 1;
    Ok(if sign { ab.add(&ba) } else { ab.sub(&ba) })
}

/// Kronecker construction `φ₁⊗Id + Id⊗φ₂` on `E₁⊗E₂`; the spectrum at every
/// site consists of the pairwise sums of the factor spectra.
pub fn tensor_product(
    phi1: &EndoFormField,
    phi2: &EndoFormField,
    domain: &LatticeDomain,
) -> Result<EndoFormField> {
    phi1.check_domain(domain)?;
    phi2.check_domain(domain)?;
    if phi1.bidegree() != (1, 0) || phi2.bidegree() != (1, 0) {
        return Err(HsError::InvalidDegree {
            context: "tensor_product expects (1,0)-fields",
            p: 1,
            q: 0,
            n: domain.complex_dim(),
        });
    }
    let r = phi1.rank * phi2.rank;
    if r > MAX_RANK {
        return Err(HsError::RankOverflow { requested: r, max: MAX_RANK });
    }
    let id1 = CMat::identity(phi1.rank);
    let id2 = CMat::identity(phi2.rank);
    let mut out = EndoFormField::zeros(domain, r, 1, 0)?;
    for c in 0..out.comp_count() {
        for s in 0..domain.site_count() {
            let m = phi1.mat(c, s).kron(&id2) + id1.kron(&phi2.mat(c, s));
            out.set_mat(c, s, &m);
        }
    }
    Ok(out)
}
