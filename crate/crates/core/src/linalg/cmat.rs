use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Mul, Sub};

/// Largest endomorphism rank the crate supports (tensor products included).
pub const MAX_RANK: usize = 6;

const CAP: usize = MAX_RANK * MAX_RANK;

/// Row-major complex `r×r` matrix with inline storage.
#[derive(Clone, Copy)]
pub struct CMat {
    r: usize,
    a: [Complex64; CAP],
}

impl CMat {
    pub fn zeros(r: usize) -> Self {
        assert!(r >= 1 && r <= MAX_RANK, "rank {r} out of range 1..={MAX_RANK}");
        CMat { r, a: [Complex64::new(0.0, 0.0); CAP] }
    }

    pub fn identity(r: usize) -> Self {
        let mut m = Self::zeros(r);
        for i in 0..r {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let r = rows.len();
        let mut m = Self::zeros(r);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), r);
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, v) in entries.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.a[..self.r * self.r]
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.a[..self.r * self.r]
    }

    pub fn from_slice(r: usize, data: &[Complex64]) -> Self {
        assert_eq!(data.len(), r * r);
        let mut m = Self::zeros(r);
        m.as_mut_slice().copy_from_slice(data);
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.r);
        for i in 0..self.r {
            for j in 0..self.r {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.r).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut m = *self;
        for v in m.as_mut_slice() {
            *v *= c;
        }
        m
    }

    /// Frobenius norm squared `Σ|a_ij|²`.
    pub fn norm_sq(&self) -> f64 {
        self.as_slice().iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Frobenius inner product `tr(self · other†)`.
    pub fn inner(&self, other: &CMat) -> Complex64 {
        debug_assert_eq!(self.r, other.r);
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn commutator(&self, other: &CMat) -> CMat {
        *self * *other - *other * *self
    }

    /// Hermitian part `(M + M†)/2`.
    pub fn hermitian_part(&self) -> CMat {
        let mut m = Self::zeros(self.r);
        for i in 0..self.r {
            for j in 0..self.r {
                m[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        m
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = self.norm().max(1.0);
        for i in 0..self.r {
            for j in i..self.r {
                if (self[(i, j)] - self[(j, i)].conj()).norm() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Remove the trace part: `M - tr(M)/r · Id`.
    pub fn traceless_part(&self) -> CMat {
        let t = self.trace() / self.r as f64;
        let mut m = *self;
        for i in 0..self.r {
            m[(i, i)] -= t;
        }
        m
    }

    /// Inverse by Gaussian elimination with partial pivoting.
    ///
    /// Returns `None` when a pivot falls below `~eps·‖M‖`.
    pub fn inverse(&self) -> Option<CMat> {
        let r = self.r;
        let mut a = *self;
        let mut inv = CMat::identity(r);
        let floor = self.norm() * 1e-300_f64.max(f64::EPSILON * 1e-2) + f64::MIN_POSITIVE;
        for col in 0..r {
            let mut piv = col;
            let mut best = a[(col, col)].norm();
            for row in col + 1..r {
                let v = a[(row, col)].norm();
                if v > best {
                    best = v;
                    piv = row;
                }
            }
            if best <= floor {
                return None;
            }
            if piv != col {
                for j in 0..r {
                    let t = a[(col, j)];
                    a[(col, j)] = a[(piv, j)];
                    a[(piv, j)] = t;
                    let t = inv[(col, j)];
                    inv[(col, j)] = inv[(piv, j)];
                    inv[(piv, j)] = t;
                }
            }
            let d = a[(col, col)];
            for j in 0..r {
                a[(col, j)] /= d;
                inv[(col, j)] /= d;
            }
            for row in 0..r {
                if row == col {
                    continue;
                }
                let f = a[(row, col)];
                if f.norm() == 0.0 {
                    continue;
                }
                for j in 0..r {
                    let ac = a[(col, j)];
                    let ic = inv[(col, j)];
                    a[(row, j)] -= f * ac;
                    inv[(row, j)] -= f * ic;
                }
            }
        }
        Some(inv)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMat) -> CMat {
        let (r1, r2) = (self.r, other.r);
        assert!(r1 * r2 <= MAX_RANK, "kron rank {} exceeds MAX_RANK", r1 * r2);
        let mut m = CMat::zeros(r1 * r2);
        for i1 in 0..r1 {
            for j1 in 0..r1 {
                for i2 in 0..r2 {
                    for j2 in 0..r2 {
                        m[(i1 * r2 + i2, j1 * r2 + j2)] = self[(i1, j1)] * other[(i2, j2)];
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(v.len(), self.r);
        (0..self.r)
            .map(|i| (0..self.r).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.a[i * self.r + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.a[i * self.r + j]
    }
}

impl Add for CMat {
    type Output = CMat;
    fn add(self, rhs: CMat) -> CMat {
        debug_assert_eq!(self.r, rhs.r);
        let mut m = self;
        for (v, w) in m.as_mut_slice().iter_mut().zip(rhs.as_slice()) {
            *v += w;
        }
        m
    }
}

impl Sub for CMat {
    type Output = CMat;
    fn sub(self, rhs: CMat) -> CMat {
        debug_assert_eq!(self.r, rhs.r);
        let mut m = self;
        for (v, w) in m.as_mut_slice().iter_mut().zip(rhs.as_slice()) {
            *v -= w;
        }
        m
    }
}

impl Mul for CMat {
    type Output = CMat;
    fn mul(self, rhs: CMat) -> CMat {
        debug_assert_eq!(self.r, rhs.r);
        let r = self.r;
        let mut m = CMat::zeros(r);
        for i in 0..r {
            for k in 0..r {
                let aik = self[(i, k)];
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..r {
                    m[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        m
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat({}x{}) [", self.r, self.r)?;
        for i in 0..self.r {
            write!(f, "  ")?;
            for j in 0..self.r {
                let v = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_roundtrip() {
        let m = CMat::from_rows(&[
            &[c(1.0, 0.5), c(2.0, -1.0), c(0.0, 0.3)],
            &[c(0.0, 1.0), c(3.0, 0.0), c(1.0, 1.0)],
            &[c(2.0, 0.0), c(-1.0, 0.0), c(4.0, -2.0)],
        ]);
        let inv = m.inverse().unwrap();
        let prod = m * inv;
        let id = CMat::identity(3);
        assert!((prod - id).norm() < 1e-13);
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = CMat::from_rows(&[&[c(1.0, 0.0), c(2.0, 0.0)], &[c(2.0, 0.0), c(4.0, 0.0)]]);
        assert!(m.inverse().is_none());
    }

    #[test]
    fn kron_of_identities() {
        let a = CMat::identity(2);
        let b = CMat::identity(3);
        assert!((a.kron(&b) - CMat::identity(6)).norm() < 1e-15);
    }

    #[test]
    fn hermitian_part_and_traceless() {
        let m = CMat::from_rows(&[&[c(1.0, 1.0), c(2.0, 0.0)], &[c(0.0, 0.0), c(3.0, -1.0)]]);
        let h = m.hermitian_part();
        assert!(h.is_hermitian(1e-15));
        let t = m.traceless_part();
        assert!(t.trace().norm() < 1e-15);
    }
}
