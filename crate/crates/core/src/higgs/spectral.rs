//! The Hitchin morphism, spectral covers, and discriminant data.

use super::endo::EndoFormField;
use super::ops::wedge_square;
use super::symform::{
    covector_norm_geometric, covector_norm_plain, covector_power, SymFormField,
};
use crate::error::{HsError, Result};
use crate::lattice::LatticeDomain;
use crate::linalg::poly_roots;
use num_complex::Complex64;

/// Default integrability tolerance for [`hitchin_map`]: `‖φ∧φ‖_{L²}` must
/// stay below `tol·(1 + ‖φ‖²_{L²})`.
pub const INTEGRABILITY_TOL: f64 = 1e-8;

/// The Hitchin-base tuple (p₁,…,p_r) with derived discriminant data.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub rank: usize,
    /// `coeffs[k-1]` is `p_k`, a degree-k symmetric form field.
    pub coeffs: Vec<SymFormField>,
    /// Eigenvalue covectors per site, branch-continued along the
    /// boustrophedon scan; `roots[site][i]` has one entry per complex
    /// direction. Filled by [`SpectralData::ensure_roots`].
    pub roots: Option<Vec<Vec<Vec<Complex64>>>>,
    /// Discriminant section Δ_Θ = Σ_{i<j}(λ_i−λ_j)² = r·s₂ − s₁².
    pub discriminant: Option<SymFormField>,
    /// Sites where |Δ_Θ| < ε_disc.
    pub mask: Option<Vec<bool>>,
    /// Minimum eigenvalue gap d(p) per site (geometric covector norm).
    pub gap: Option<Vec<f64>>,
}

impl SpectralData {
    pub fn coeff(&self, k: usize) -> &SymFormField {
        &self.coeffs[k - 1]
    }

    pub fn site_count(&self) -> usize {
        self.coeffs[0].site_count()
    }

    pub fn roots_at(&self, site: usize) -> Option<&[Vec<Complex64>]> {
        self.roots.as_ref().map(|r| r[site].as_slice())
    }
}

/// Characteristic coefficients of an integrable (1,0)-field through traces
/// of powers and Newton's identities: `p_k = (-1)^k e_k`, so that every
/// eigenvalue covector solves `λ^r + p₁λ^{r-1} + … + p_r = 0`, and
/// `κ(tφ)_k = t^k κ(φ)_k` exactly.
pub fn hitchin_map(
    phi: &EndoFormField,
    domain: &LatticeDomain,
    integrability_tol: Option<f64>,
) -> Result<SpectralData> {
    phi.check_domain(domain)?;
    if phi.bidegree() != (1, 0) {
        return Err(HsError::InvalidDegree {
            context: "hitchin_map expects a (1,0)-field",
            p: phi.p as isize,
            q: phi.q as isize,
            n: domain.complex_dim(),
        });
    }
    let tol = integrability_tol.unwrap_or(INTEGRABILITY_TOL);
    let ws = wedge_square(phi, domain)?;
    let wnorm = ws.l2_norm(domain);
    let scale = 1.0 + phi.l2_norm(domain).powi(2);
    if wnorm > tol * scale {
        return Err(HsError::Integrability { norm: wnorm, tol: tol * scale });
    }

    let r = phi.rank;
    let n = domain.complex_dim();
    let sites = domain.site_count();

    // power sums s_m(x) = tr((Σ φ_i x_i)^m): coefficient of x^a is
    // multinomial(m,a)·tr(φ^a) since the φ_i commute.
    let mut power_sums: Vec<SymFormField> = Vec::with_capacity(r);
    // running per-site matrix powers for each monomial are assembled
    // per-site to keep this simple: r and n are tiny.
    for m in 1..=r {
        let mut sm = SymFormField::zeros(domain, m);
        let monos = sm.monomials.clone();
        for s in 0..sites {
            let mats: Vec<_> = (0..n).map(|c| phi.mat(c, s)).collect();
            for (mi, a) in monos.iter().enumerate() {
                let mut acc = crate::linalg::CMat::identity(r);
                for (dir, &pow) in a.iter().enumerate() {
                    for _ in 0..pow {
                        acc = acc * mats[dir];
                    }
                }
                *sm.at_mut(mi, s) =
                    acc.trace() * super::symform::multinomial(a);
            }
        }
        power_sums.push(sm);
    }

    // Newton: k·e_k = Σ_{i=1..k} (-1)^{i-1} e_{k-i} s_i, with e_0 = 1.
    let mut elementary: Vec<SymFormField> = Vec::with_capacity(r);
    for k in 1..=r {
        let mut acc = SymFormField::zeros(domain, k);
        for i in 1..=k {
            let sign = if (i - 1) % 2 == 0 { 1.0 } else { -1.0 };
            let term = if k - i == 0 {
                power_sums[i - 1].clone()
            } else {
                elementary[k - i - 1].product(&power_sums[i - 1], domain)
            };
            acc = acc.add(&term.scaled(Complex64::new(sign, 0.0)));
        }
        elementary.push(acc.scaled(Complex64::new(1.0 / k as f64, 0.0)));
    }

    let coeffs: Vec<SymFormField> = elementary
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            let k = i + 1;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            e.scaled(Complex64::new(sign, 0.0))
        })
        .collect();

    Ok(SpectralData { rank: r, coeffs, roots: None, discriminant: None, mask: None, gap: None })
}

/// Tolerance context for root extraction.
#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Relative tolerance for the rank-one factorization residual (n = 2).
    pub rank_one_tol: f64,
    /// Relative tolerance for requiring tracelessness in n = 2 mode.
    pub traceless_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { rank_one_tol: 1e-6, traceless_tol: 1e-8 }
    }
}

impl SpectralData {
    /// Extract all eigenvalue covectors, branch-continued along the
    /// boustrophedon scan (nearest-permutation matching, lexicographic seed,
    /// ties by argument angle). Single-threaded by construction.
    pub fn ensure_roots(&mut self, domain: &LatticeDomain, opts: RootOptions) -> Result<()> {
        if self.roots.is_some() {
            return Ok(());
        }
        let n = domain.complex_dim();
        let sites = domain.site_count();
        let r = self.rank;
        let mut roots: Vec<Vec<Vec<Complex64>>> = vec![Vec::new(); sites];

        // raw (uncontinued) roots per site
        match n {
            1 => {
                for s in 0..sites {
                    let coeffs: Vec<Complex64> =
                        (1..=r).map(|k| self.coeff(k).at(0, s)).collect();
                    let lam = poly_roots(&coeffs);
                    roots[s] = lam.into_iter().map(|l| vec![l]).collect();
                }
            }
            2 => {
                // SL(2) rank-one mode: p₁ ≈ 0 and -p₂ = w⊙w.
                if r != 2 {
                    return Err(HsError::NotInBx { site: 0, residual: f64::NAN });
                }
                let p1_scale = self.coeff(1).sup_norm(false);
                let p2 = self.coeff(2).clone();
                let p2_scale = p2.sup_norm(false).max(1e-300);
                for s in 0..sites {
                    let p1n = covector_norm_plain(&self.coeff(1).coeffs_at(s));
                    if p1n > opts.traceless_tol * (p1_scale.max(p2_scale.sqrt()) + 1.0) {
                        return Err(HsError::NotInBx { site: s, residual: p1n });
                    }
                    let c = p2.coeffs_at(s); // [c20, c11, c02] of p₂
                    let t20 = -c[0];
                    let t11 = -c[1];
                    let t02 = -c[2];
                    // factor t = w⊙w: w₁² = t20, 2w₁w₂ = t11, w₂² = t02
                    let (w1, w2) = if t20.norm() >= t02.norm() {
                        let w1 = t20.sqrt();
                        let w2 = if w1.norm() > 0.0 {
                            t11 / (w1 * 2.0)
                        } else {
                            t02.sqrt()
                        };
                        (w1, w2)
                    } else {
                        let w2 = t02.sqrt();
                        let w1 = if w2.norm() > 0.0 {
                            t11 / (w2 * 2.0)
                        } else {
                            t20.sqrt()
                        };
                        (w1, w2)
                    };
                    let resid = (w1 * w1 - t20).norm()
                        + (w1 * w2 * 2.0 - t11).norm()
                        + (w2 * w2 - t02).norm();
                    let scale = t20.norm() + t11.norm() + t02.norm();
                    if resid > opts.rank_one_tol * (scale + p2_scale * 1e-12) && scale > 0.0 {
                        return Err(HsError::NotInBx { site: s, residual: resid / scale });
                    }
                    roots[s] = vec![vec![w1, w2], vec![-w1, -w2]];
                }
            }
            _ => unreachable!("complex dimension is 1 or 2"),
        }

        // branch continuation
        let scan = domain.boustrophedon_scan();
        let mut prev: Option<usize> = None;
        for &s in &scan {
            if let Some(p) = prev {
                let reference = roots[p].clone();
                let cur = &mut roots[s];
                best_permutation(cur, &reference);
            } else {
                // lexicographic seed: sort by (Re, Im) of the components
                roots[s].sort_by(|a, b| {
                    for (x, y) in a.iter().zip(b) {
                        let ord = (x.re, x.im)
                            .partial_cmp(&(y.re, y.im))
                            .unwrap_or(std::cmp::Ordering::Equal);
                        if ord != std::cmp::Ordering::Equal {
                            return ord;
                        }
                    }
                    std::cmp::Ordering::Equal
                });
            }
            prev = Some(s);
        }
        self.roots = Some(roots);
        Ok(())
    }

    /// Discriminant section, locus mask, and gap field.
    ///
    /// The section is computed from the resultant-style identity
    /// Δ = r·s₂ − s₁² in the characteristic coefficients; the root-product
    /// route is exposed separately for consistency checks. The mask collects
    /// sites with |Δ| < ε_disc, defaulting to `10·h_max·(max plain root
    /// magnitude)`, one grid cell of resolution for the zero set.
    pub fn ensure_discriminant(
        &mut self,
        domain: &LatticeDomain,
        eps_disc: Option<f64>,
        opts: RootOptions,
    ) -> Result<()> {
        self.ensure_roots(domain, opts)?;
        if self.discriminant.is_some() {
            return Ok(());
        }
        let r = self.rank as f64;
        let p1 = self.coeff(1);
        let s1sq = p1.product(p1, domain);
        let p1sq = s1sq.clone();
        let s2 = p1sq.sub(&self.coeff(2).scaled(Complex64::new(2.0, 0.0)));
        let disc = s2.scaled(Complex64::new(r, 0.0)).sub(&s1sq);

        let roots = self.roots.as_ref().unwrap();
        let max_root = roots
            .iter()
            .flat_map(|site| site.iter().map(|w| covector_norm_plain(w)))
            .fold(0.0_f64, f64::max);
        let h_max = domain.spacing().iter().cloned().fold(0.0_f64, f64::max);
        // floor keeps the fully degenerate Δ ≡ 0 case (Z_T = X) masked
        let eps = eps_disc.unwrap_or((10.0 * h_max * max_root).max(f64::MIN_POSITIVE));

        let sites = domain.site_count();
        let mut mask = vec![false; sites];
        let mut gap = vec![0.0_f64; sites];
        for s in 0..sites {
            let d = min_gap(&roots[s]);
            gap[s] = d;
            mask[s] = disc.norm_sq_at(s, false).sqrt() < eps;
        }
        self.discriminant = Some(disc);
        self.mask = Some(mask);
        self.gap = Some(gap);
        Ok(())
    }

    /// Δ recomputed as Σ_{i<j} (λ_i−λ_j)^{⊙2} from the stored roots.
    pub fn discriminant_from_roots(&self, domain: &LatticeDomain) -> Result<SymFormField> {
        let roots = self.roots.as_ref().ok_or(HsError::NoSpectralData)?;
        let n = domain.complex_dim();
        let mut acc = SymFormField::zeros(domain, 2);
        let r = self.rank;
        let sites = domain.site_count();
        let mut diffs: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n]; sites];
        for i in 0..r {
            for j in i + 1..r {
                for s in 0..sites {
                    for d in 0..n {
                        diffs[s][d] = roots[s][i][d] - roots[s][j][d];
                    }
                }
                let sq = covector_power(domain, &diffs, 2)?;
                acc = acc.add(&sq);
            }
        }
        Ok(acc)
    }
}

/// Minimum pairwise gap of a root multiset (geometric covector norm).
pub fn min_gap(roots: &[Vec<Complex64>]) -> f64 {
    let r = roots.len();
    let mut d = f64::INFINITY;
    for i in 0..r {
        for j in i + 1..r {
            let diff: Vec<Complex64> =
                roots[i].iter().zip(&roots[j]).map(|(a, b)| a - b).collect();
            d = d.min(covector_norm_geometric(&diff));
        }
    }
    if d.is_finite() {
        d
    } else {
        0.0
    }
}

/// Eigenvalue covectors at one site; requires roots to have been extracted.
pub fn spectral_roots(theta: &SpectralData, site: usize) -> Result<Vec<Vec<Complex64>>> {
    theta
        .roots
        .as_ref()
        .map(|r| r[site].clone())
        .ok_or(HsError::NoSpectralData)
}

/// Reorder `cur` in place to the permutation closest to `reference`
/// (total covector distance; among equal costs the lexicographically first
/// permutation with ties broken by argument angle of the first component).
fn best_permutation(cur: &mut Vec<Vec<Complex64>>, reference: &[Vec<Complex64>]) {
    let r = cur.len();
    if r <= 1 {
        return;
    }
    let dist = |a: &[Complex64], b: &[Complex64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>()
    };
    let mut perm: Vec<usize> = (0..r).collect();
    let mut best: Vec<usize> = perm.clone();
    let mut best_cost = f64::INFINITY;
    let mut best_angle = f64::INFINITY;
    // iterate permutations in lexicographic order
    loop {
        let cost: f64 = (0..r).map(|i| dist(&cur[perm[i]], &reference[i])).sum();
        let angle = cur[perm[0]][0].arg();
        let better = cost < best_cost - 1e-15 * (1.0 + best_cost)
            || ((cost - best_cost).abs() <= 1e-15 * (1.0 + best_cost) && angle < best_angle);
        if better {
            best_cost = cost;
            best_angle = angle;
            best = perm.clone();
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let reordered: Vec<Vec<Complex64>> = best.iter().map(|&i| cur[i].clone()).collect();
    *cur = reordered;
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
