//! The discrete Kähler calculus: ∂̄, ∂, their formal adjoints, the Λ
//! contraction, the function Laplacian Δ = 2iΛ∂̄∂, wedge products and L²
//! inner products.
//!
//! ∂̄ and ∂ are constant-coefficient first-order operators; they are stored
//! as sparse term lists `(axis, comp_in, comp_out, coeff)` over the real
//! axes, from which formal adjoints follow mechanically: the adjoint of
//! `Σ_k B_k ∂_k` with respect to the frame-weighted inner products is
//! `-(w_out/w_in)·Σ_k B_k† ∂_k`, the weight ratio being 2 per form degree.

use super::comps::{comp_index, comp_table, frame_weight, wedge_basis};
use super::diff::partial_axis;
use super::domain::LatticeDomain;
use super::field::{FormField, ScalarField};
use crate::error::{HsError, Result};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// One `coeff · ∂_axis` entry mapping input component `cin` to output
/// component `cout`.
#[derive(Clone, Copy, Debug)]
pub struct Term {
    pub axis: usize,
    pub cin: usize,
    pub cout: usize,
    pub coeff: Complex64,
}

/// Term list of ∂̄: (p,q) → (p,q+1); `∂̄f = Σ_j ∂f/∂z̄_j dz̄_j ∧ f` with
/// `∂/∂z̄_j = (∂_x + i∂_y)/2` on the j-th coordinate pair.
pub fn dbar_terms(n: usize, p: usize, q: usize) -> Vec<Term> {
    let tin = comp_table(n, p, q);
    let tout = comp_table(n, p, q + 1);
    let mut terms = Vec::new();
    for (ci, &c) in tin.iter().enumerate() {
        for j in 0..n {
            let jm = 1u8 << j;
            if let Some((out, sign)) = wedge_basis((0, jm), c, n) {
                let co = comp_index(&tout, out);
                let s = Complex64::new(sign, 0.0);
                terms.push(Term { axis: 2 * j, cin: ci, cout: co, coeff: s * 0.5 });
                terms.push(Term { axis: 2 * j + 1, cin: ci, cout: co, coeff: s * I * 0.5 });
            }
        }
    }
    terms
}

/// Term list of ∂: (p,q) → (p+1,q) with `∂/∂z_j = (∂_x - i∂_y)/2`.
pub fn del_terms(n: usize, p: usize, q: usize) -> Vec<Term> {
    let tin = comp_table(n, p, q);
    let tout = comp_table(n, p + 1, q);
    let mut terms = Vec::new();
    for (ci, &c) in tin.iter().enumerate() {
        for j in 0..n {
            let jm = 1u8 << j;
            if let Some((out, sign)) = wedge_basis((jm, 0), c, n) {
                let co = comp_index(&tout, out);
                let s = Complex64::new(sign, 0.0);
                terms.push(Term { axis: 2 * j, cin: ci, cout: co, coeff: s * 0.5 });
                terms.push(Term { axis: 2 * j + 1, cin: ci, cout: co, coeff: -s * I * 0.5 });
            }
        }
    }
    terms
}

pub(crate) fn apply_terms(
    domain: &LatticeDomain,
    input: &FormField,
    terms: &[Term],
    out_p: usize,
    out_q: usize,
) -> Result<FormField> {
    let mut out = FormField::zeros(domain, out_p, out_q)?;
    for t in terms {
        let d = partial_axis(domain, input.comp_slice(t.cin), t.axis);
        let dst = out.comp_slice_mut(t.cout);
        for (o, v) in dst.iter_mut().zip(&d) {
            *o += t.coeff * v;
        }
    }
    Ok(out)
}

/// Apply the formal adjoint of the operator described by `terms`
/// ((out_p,out_q) → input degree of `terms`); the input field here has the
/// *output* degree of the forward operator.
pub(crate) fn apply_adjoint_terms(
    domain: &LatticeDomain,
    input: &FormField,
    terms: &[Term],
    out_p: usize,
    out_q: usize,
) -> Result<FormField> {
    let mut out = FormField::zeros(domain, out_p, out_q)?;
    let ratio = frame_weight(input.p, input.q) / frame_weight(out_p, out_q);
    for t in terms {
        let d = partial_axis(domain, input.comp_slice(t.cout), t.axis);
        let dst = out.comp_slice_mut(t.cin);
        let c = -t.coeff.conj() * ratio;
        for (o, v) in dst.iter_mut().zip(&d) {
            *o += c * v;
        }
    }
    Ok(out)
}

/// Discrete ∂̄. Exact in frequency space on the torus so that ∂̄∘∂̄ = 0 holds
/// to machine precision.
pub fn dbar(f: &FormField, domain: &LatticeDomain) -> Result<FormField> {
    f.check_domain(domain)?;
    let n = domain.complex_dim();
    if f.q + 1 > n {
        return Err(HsError::InvalidDegree {
            context: "dbar",
            p: f.p as isize,
            q: f.q as isize + 1,
            n,
        });
    }
    apply_terms(domain, f, &dbar_terms(n, f.p, f.q), f.p, f.q + 1)
}

/// Discrete ∂, the mirror of [`dbar`].
pub fn del(f: &FormField, domain: &LatticeDomain) -> Result<FormField> {
    f.check_domain(domain)?;
    let n = domain.complex_dim();
    if f.p + 1 > n {
        return Err(HsError::InvalidDegree {
            context: "del",
            p: f.p as isize + 1,
            q: f.q as isize,
            n,
        });
    }
    apply_terms(domain, f, &del_terms(n, f.p, f.q), f.p + 1, f.q)
}

/// Formal adjoint ∂̄*: (p,q) → (p,q-1).
pub fn adjoint_dbar(f: &FormField, domain: &LatticeDomain) -> Result<FormField> {
    f.check_domain(domain)?;
    let n = domain.complex_dim();
    if f.q == 0 {
        return Err(HsError::InvalidDegree {
            context: "adjoint_dbar",
            p: f.p as isize,
            q: -1,
            n,
        });
    }
    apply_adjoint_terms(domain, f, &dbar_terms(n, f.p, f.q - 1), f.p, f.q - 1)
}

/// Formal adjoint ∂*: (p,q) → (p-1,q).
pub fn adjoint_del(f: &FormField, domain: &LatticeDomain) -> Result<FormField> {
    f.check_domain(domain)?;
    let n = domain.complex_dim();
    if f.p == 0 {
        return Err(HsError::InvalidDegree {
            context: "adjoint_del",
            p: -1,
            q: f.q as isize,
            n,
        });
    }
    apply_adjoint_terms(domain, f, &del_terms(n, f.p - 1, f.q), f.p - 1, f.q)
}

/// The constant Kähler form ω = (i/2)·Σ dz_i∧dz̄_i.
pub fn omega(domain: &LatticeDomain) -> FormField {
    let n = domain.complex_dim();
    let mut w = FormField::zeros(domain, 1, 1).expect("(1,1) always exists");
    let table = w.comps.clone();
    for j in 0..n {
        let jm = 1u8 << j;
        let ci = comp_index(&table, (jm, jm));
        for v in w.comp_slice_mut(ci) {
            *v = I * 0.5;
        }
    }
    w
}

/// Sparse matrix of Λ: (p,q) → (p-1,q-1), the pointwise adjoint of wedging
/// with ω under the frame-weighted Hermitian products. On (1,1)-forms it
/// reduces to `-2i·Σ a_ii`.
pub(crate) fn lambda_matrix(n: usize, p: usize, q: usize) -> Vec<(usize, usize, Complex64)> {
    let tin = comp_table(n, p, q);
    let tout = comp_table(n, p - 1, q - 1);
    let ratio = frame_weight(p, q) / frame_weight(p - 1, q - 1); // = 4
    let mut entries = Vec::new();
    for (co, &cout) in tout.iter().enumerate() {
        for j in 0..n {
            let jm = 1u8 << j;
            if let Some((lifted, sign)) = wedge_basis((jm, jm), cout, n) {
                let ci = comp_index(&tin, lifted);
                // W coefficient = sign · (i/2); Λ entry = ratio · conj(W)
                let w = Complex64::new(sign, 0.0) * I * 0.5;
                entries.push((ci, co, w.conj() * ratio));
            }
        }
    }
    entries
}

/// General Λ on any (p,q) with p,q ≥ 1.
pub fn lambda_general(f: &FormField, domain: &LatticeDomain) -> Result<FormField> {
    f.check_domain(domain)?;
    let n = domain.complex_dim();
    if f.p == 0 || f.q == 0 {
        return Err(HsError::InvalidDegree {
            context: "lambda",
            p: f.p as isize - 1,
            q: f.q as isize - 1,
            n,
        });
    }
    let mut out = FormField::zeros(domain, f.p - 1, f.q - 1)?;
    for (ci, co, coeff) in lambda_matrix(n, f.p, f.q) {
        let src = f.comp_slice(ci);
        let dst = out.comp_slice_mut(co);
        for (o, v) in dst.iter_mut().zip(src) {
            *o += coeff * v;
        }
    }
    Ok(out)
}

/// Λ on a (1,1)-form: pointwise `-2i·(sum of diagonal coefficients)`.
pub fn contract_lambda(f: &FormField, domain: &LatticeDomain) -> Result<ScalarField> {
    if f.bidegree() != (1, 1) {
        return Err(HsError::InvalidDegree {
            context: "contract_lambda expects a (1,1)-form",
            p: f.p as isize,
            q: f.q as isize,
            n: domain.complex_dim(),
        });
    }
    let g = lambda_general(f, domain)?;
    Ok(ScalarField { data: g.data })
}

/// Function Laplacian Δ = 2iΛ∂̄∂, sign fixed so the spectrum on the torus is
/// non-negative: plane waves e^{i⟨ξ,x⟩} have eigenvalue |ξ|².
pub fn laplacian(f: &ScalarField, domain: &LatticeDomain) -> Result<ScalarField> {
    let form = f.as_form();
    let df = del(&form, domain)?;
    let ddf = dbar(&df, domain)?;
    let mut l = contract_lambda(&ddf, domain)?;
    for v in &mut l.data {
        *v *= 2.0 * I;
    }
    Ok(l)
}

/// Sesquilinear L² pairing `∫ ⟨a,b⟩` with the frame weights 2^{p+q}.
pub fn l2_inner(a: &FormField, b: &FormField, domain: &LatticeDomain) -> Result<Complex64> {
    a.check_domain(domain)?;
    b.check_domain(domain)?;
    if a.bidegree() != b.bidegree() {
        return Err(HsError::ShapeMismatch(format!(
            "l2_inner bidegree mismatch {:?} vs {:?}",
            a.bidegree(),
            b.bidegree()
        )));
    }
    let w = frame_weight(a.p, a.q);
    let mut acc = Complex64::new(0.0, 0.0);
    for c in 0..a.comp_count() {
        let sa = a.comp_slice(c);
        let sb = b.comp_slice(c);
        for s in 0..sa.len() {
            acc += sa[s] * sb[s].conj() * (w * domain.quad_weight(s));
        }
    }
    Ok(acc)
}

/// Pointwise wedge of scalar-coefficient forms.
pub fn wedge(a: &FormField, b: &FormField, domain: &LatticeDomain) -> Result<FormField> {
    a.check_domain(domain)?;
    b.check_domain(domain)?;
    let n = domain.complex_dim();
    let (p, q) = (a.p + b.p, a.q + b.q);
    if p > n || q > n {
        return Err(HsError::InvalidDegree { context: "wedge", p: p as isize, q: q as isize, n });
    }
    let mut out = FormField::zeros(domain, p, q)?;
    let tout = out.comps.clone();
    for (ca, &compa) in a.comps.iter().enumerate() {
        for (cb, &compb) in b.comps.iter().enumerate() {
            if let Some((c, sign)) = wedge_basis(compa, compb, n) {
                let co = comp_index(&tout, c);
                let sgn = Complex64::new(sign, 0.0);
                let sa = a.comp_slice(ca);
                let sb = b.comp_slice(cb);
                let dst = out.comp_slice_mut(co);
                for s in 0..sa.len() {
                    dst[s] += sgn * sa[s] * sb[s];
                }
            }
        }
    }
    Ok(out)
}

/// Density of a top (n,n)-form against the Riemannian volume element:
/// `dz_1∧dz̄_1∧…∧dz_n∧dz̄_n = (-2i)^n vol`, with an extra `(-1)^{n(n-1)/2}`
/// because components are stored in the canonical order (all dz first).
pub fn top_form_density(f: &FormField, domain: &LatticeDomain) -> Result<ScalarField> {
    let n = domain.complex_dim();
    if f.bidegree() != (n, n) {
        return Err(HsError::InvalidDegree {
            context: "top_form_density expects an (n,n)-form",
            p: f.p as isize,
            q: f.q as isize,
            n,
        });
    }
    let interleave_sign = if (n * (n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let factor = (-2.0 * I).powu(n as u32) * interleave_sign;
    Ok(ScalarField { data: f.comp_slice(0).iter().map(|v| v * factor).collect() })
}

/// ‖∂*f − i[Λ,∂̄]f‖_{L²} for f of bidegree (1,0) or (1,1): the residual of
/// the Kähler identity ∂* = i[Λ,∂̄]. Machine-zero on the torus, O(h²)·‖f‖ on
/// patches.
pub fn kahler_identity_residual(f: &FormField, domain: &LatticeDomain) -> Result<f64> {
    f.check_domain(domain)?;
    let n = domain.complex_dim();
    if !(f.bidegree() == (1, 0) || f.bidegree() == (1, 1)) {
        return Err(HsError::InvalidDegree {
            context: "kahler_identity_residual expects (1,0) or (1,1)",
            p: f.p as isize,
            q: f.q as isize,
            n,
        });
    }
    let lhs = adjoint_del(f, domain)?;
    // i[Λ,∂̄]f = i(Λ(∂̄f) − ∂̄(Λf)); either term drops when its bidegree
    // leaves the range (the corresponding form space is zero).
    let mut rhs = FormField::zeros(domain, f.p - 1, f.q)?;
    if f.q + 1 <= n {
        let df = dbar(f, domain)?;
        let t = lambda_general(&df, domain)?;
        rhs = rhs.add(&t);
    }
    if f.p >= 1 && f.q >= 1 {
        let lf = lambda_general(f, domain)?;
        let t = dbar(&lf, domain)?;
        rhs = rhs.sub(&t);
    }
    let diff = lhs.sub(&rhs.scaled(I));
    Ok(diff.l2_norm(domain))
}
