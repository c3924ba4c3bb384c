use super::cmat::CMat;
use super::EPS;
use num_complex::Complex64;

/// Eigendecomposition `A = V · diag(vals) · V†` of a Hermitian matrix,
/// eigenvalues ascending, `V` unitary.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub vals: Vec<f64>,
    pub vecs: CMat,
}

impl HermitianEig {
    /// `V · diag(f(λ_i)) · V†`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMat {
        let r = self.vals.len();
        let mut d = CMat::zeros(r);
        for i in 0..r {
            d[(i, i)] = Complex64::new(f(self.vals[i]), 0.0);
        }
        self.vecs * d * self.vecs.adjoint()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.vals[0]
    }

    /// Spectral condition number `max|λ| / min|λ|`; `f64::INFINITY` if singular.
    pub fn condition_number(&self) -> f64 {
        let mx = self.vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mn = self.vals.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        if mn == 0.0 {
            f64::INFINITY
        } else {
            mx / mn
        }
    }
}

/// Cyclic complex Jacobi for Hermitian matrices.
///
/// Panics in debug builds if `a` is visibly non-Hermitian; callers pass the
/// Hermitian part when roundoff is in play.
pub fn hermitian_eig(a: &CMat) -> HermitianEig {
    let r = a.rank();
    debug_assert!(a.is_hermitian(1e-10), "hermitian_eig on non-Hermitian input");
    let mut m = a.hermitian_part();
    let mut v = CMat::identity(r);
    let scale = m.norm().max(f64::MIN_POSITIVE);
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..r {
            for q in p + 1..r {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..r {
            for q in p + 1..r {
                let beta = m[(p, q)];
                let b = beta.norm();
                if b <= 1e-300 {
                    continue;
                }
                let phase = beta / b;
                let alpha = m[(p, p)].re;
                let gamma = m[(q, q)].re;
                let tau = (gamma - alpha) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns of the unitary G = diag(1, phase⁻¹)·J in the (p,q) plane:
                // G e_p = c e_p − s phasē e_q,  G e_q = s phase e_p + c e_q  -- up to
                // the chosen convention below; applied as m ← G† m G, v ← v G.
                let gpp = Complex64::new(c, 0.0);
                let gpq = Complex64::new(s, 0.0) * phase;
                let gqp = -Complex64::new(s, 0.0) * phase.conj();
                let gqq = Complex64::new(c, 0.0);
                // m ← G† m G  (update rows p,q then columns p,q)
                for j in 0..r {
                    let mp = m[(p, j)];
                    let mq = m[(q, j)];
                    m[(p, j)] = gpp.conj() * mp + gqp.conj() * mq;
                    m[(q, j)] = gpq.conj() * mp + gqq.conj() * mq;
                }
                for i in 0..r {
                    let mp = m[(i, p)];
                    let mq = m[(i, q)];
                    m[(i, p)] = mp * gpp + mq * gqp;
                    m[(i, q)] = mp * gpq + mq * gqq;
                }
                for i in 0..r {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = vp * gpp + vq * gqp;
                    v[(i, q)] = vp * gpq + vq * gqq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..r).collect();
    let diag: Vec<f64> = (0..r).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vecs = CMat::zeros(r);
    for (newc, &oldc) in order.iter().enumerate() {
        for i in 0..r {
            vecs[(i, newc)] = v[(i, oldc)];
        }
    }
    HermitianEig { vals, vecs }
}

/// Eigenvalues of a general complex matrix by Hessenberg reduction followed
/// by explicit single-shift QR with Wilkinson shifts. No eigenvectors.
pub fn eigenvalues(a: &CMat) -> Vec<Complex64> {
    let r = a.rank();
    if r == 1 {
        return vec![a[(0, 0)]];
    }
    let mut h = hessenberg(a);
    let mut eig = vec![Complex64::new(0.0, 0.0); r];
    let mut hi = r; // active block is 0..hi
    let mut iters_since_deflation = 0usize;
    let scale = a.norm().max(f64::MIN_POSITIVE);
    while hi > 0 {
        if hi == 1 {
            eig[0] = h[(0, 0)];
            break;
        }
        // deflate tiny subdiagonals
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let s = if s == 0.0 { scale } else { s };
            if h[(lo, lo - 1)].norm() <= EPS * s {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 && h[(hi - 1, hi - 2)].norm() <= EPS * scale.max(h[(hi - 1, hi - 1)].norm() + h[(hi - 2, hi - 2)].norm()) {
            // 1x1 deflated
            eig[hi - 1] = h[(hi - 1, hi - 1)];
            hi -= 1;
            iters_since_deflation = 0;
            continue;
        }
        let deflated = h[(lo.max(1), lo.max(1) - 1)].norm() == 0.0 && lo > 0;
        if deflated && lo == hi - 1 {
            eig[hi - 1] = h[(hi - 1, hi - 1)];
            hi -= 1;
            iters_since_deflation = 0;
            continue;
        }
        if hi - lo == 2 && (lo == 0 || h[(lo, lo - 1)].norm() == 0.0) {
            let (l1, l2) = eig2(h[(lo, lo)], h[(lo, lo + 1)], h[(lo + 1, lo)], h[(lo + 1, lo + 1)]);
            eig[lo] = l1;
            eig[lo + 1] = l2;
            hi = lo;
            iters_since_deflation = 0;
            continue;
        }
        // Wilkinson shift from the trailing 2x2 of the active block.
        let m = hi - 1;
        let (l1, l2) = eig2(h[(m - 1, m - 1)], h[(m - 1, m)], h[(m, m - 1)], h[(m, m)]);
        let hmm = h[(m, m)];
        let mut mu = if (l1 - hmm).norm() <= (l2 - hmm).norm() { l1 } else { l2 };
        iters_since_deflation += 1;
        if iters_since_deflation % 12 == 0 {
            // exceptional shift to break symmetry stalls
            mu = hmm + Complex64::new(1.5 * h[(m, m - 1)].norm(), 0.5 * h[(m, m - 1)].norm());
        }
        if iters_since_deflation > 120 {
            // Give up on further refinement; harvest remaining diagonal.
            // With the exceptional shifts this is effectively unreachable.
            for i in 0..hi {
                eig[i] = h[(i, i)];
            }
            break;
        }
        qr_step(&mut h, lo, hi, mu);
    }
    eig
}

/// Roots (with multiplicity) of the monic polynomial
/// `λ^r + c[0]·λ^{r-1} + … + c[r-1]`, via the companion matrix.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let r = coeffs.len();
    if r == 0 {
        return vec![];
    }
    if r == 1 {
        return vec![-coeffs[0]];
    }
    if r == 2 {
        let (l1, l2) = roots2(coeffs[0], coeffs[1]);
        return vec![l1, l2];
    }
    let mut c = CMat::zeros(r);
    for j in 0..r {
        c[(0, j)] = -coeffs[j];
    }
    for i in 1..r {
        c[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    eigenvalues(&c)
}

/// Roots of `λ² + bλ + c`.
fn roots2(b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let half = -b * 0.5;
    let disc = (half * half - c).sqrt();
    let l1 = if (half + disc).norm() >= (half - disc).norm() {
        half + disc
    } else {
        half - disc
    };
    if l1.norm() == 0.0 {
        (l1, l1)
    } else {
        (l1, c / l1)
    }
}

/// Eigenvalues of `[[a,b],[c,d]]`.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    roots2(-(a + d), a * d - b * c)
}

fn hessenberg(a: &CMat) -> CMat {
    let r = a.rank();
    let mut h = *a;
    for k in 0..r.saturating_sub(2) {
        // Householder vector annihilating h[k+2.., k]
        let mut x = vec![Complex64::new(0.0, 0.0); r - k - 1];
        for i in k + 1..r {
            x[i - k - 1] = h[(i, k)];
        }
        let xn: f64 = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if xn <= 1e-300 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xn;
        let mut v = x.clone();
        v[0] -= alpha;
        let vn: f64 = v.iter().map(|u| u.norm_sqr()).sum::<f64>().sqrt();
        if vn <= 1e-300 {
            continue;
        }
        for u in v.iter_mut() {
            *u /= vn;
        }
        // H ← P H P with P = I − 2vv† on rows/cols k+1..
        for j in 0..r {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k + 1..r {
                dot += v[i - k - 1].conj() * h[(i, j)];
            }
            for i in k + 1..r {
                let w = v[i - k - 1];
                h[(i, j)] -= 2.0 * w * dot;
            }
        }
        for i in 0..r {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in k + 1..r {
                dot += h[(i, j)] * v[j - k - 1];
            }
            for j in k + 1..r {
                let w = v[j - k - 1].conj();
                h[(i, j)] -= 2.0 * dot * w;
            }
        }
        for i in k + 2..r {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    h
}

/// One explicit single-shift QR step `H − μI = QR`, `H ← RQ + μI` on the
/// active block `lo..hi`, using Givens rotations on the subdiagonal.
fn qr_step(h: &mut CMat, lo: usize, hi: usize, mu: Complex64) {
    let mut rot: Vec<(Complex64, Complex64)> = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        h[(i, i)] -= mu;
    }
    for i in lo..hi - 1 {
        let a = h[(i, i)];
        let b = h[(i + 1, i)];
        let nrm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if nrm <= 1e-300 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (a.conj() / nrm, b.conj() / nrm)
        };
        // G = [[c, s],[−s̄, c̄]] acting on rows i, i+1 zeroes h[i+1, i]
        for j in i..hi {
            let hi0 = h[(i, j)];
            let hi1 = h[(i + 1, j)];
            h[(i, j)] = c * hi0 + s * hi1;
            h[(i + 1, j)] = -s.conj() * hi0 + c.conj() * hi1;
        }
        rot.push((c, s));
    }
    for (idx, (c, s)) in rot.iter().enumerate() {
        let i = lo + idx;
        // columns i, i+1: H ← H G†
        let top = if i + 2 < hi { i + 2 } else { hi };
        for rrow in lo..top {
            let h0 = h[(rrow, i)];
            let h1 = h[(rrow, i + 1)];
            h[(rrow, i)] = h0 * c.conj() + h1 * s.conj();
            h[(rrow, i + 1)] = -h0 * *s + h1 * *c;
        }
    }
    for i in lo..hi {
        h[(i, i)] += mu;
    }
}
