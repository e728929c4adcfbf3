//! Small dense complex matrices.
//!
//! Everything in the crate works with matrices of dimension at most a few
//! hundred (truncated vacuum metrics, 2x2 SU(1,1) blocks, companion matrices),
//! so a plain row-major `Vec` with cubic algorithms is all that is needed.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_diag(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// 2x2 matrix `[[a, b], [c, d]]`.
    pub fn mat2(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        Self {
            rows: 2,
            cols: 2,
            data: vec![a, b, c, d],
        }
    }

    /// `diag(1, -1)`.
    pub fn sigma3() -> Self {
        Self::from_diag(&[Complex::one(), -Complex::<T>::one()])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        self.diagonal().into_iter().fold(Complex::zero(), |a, b| a + b)
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn sub_identity(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = m[(i, i)] - Complex::one();
        }
        m
    }

    /// Largest deviation of `self` from `self^†`.
    pub fn hermiticity_defect(&self) -> T {
        (self - &self.adjoint()).max_norm()
    }

    /// `(A + A^†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(T::lit(0.5))
    }

    /// Conjugates by a permutation: `P A P^T` with `perm[i]` the old index of new row `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(perm[i], perm[j])])
    }

    fn lu(&self) -> Result<(Self, Vec<usize>, bool)> {
        if !self.is_square() {
            return Err(Error::Shape("LU of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        let scale = self.max_norm();
        let tiny = T::epsilon() * T::from_index(n.max(1)) * scale;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold(
                    (k, T::neg_infinity()),
                    |best, cur| {
                        if cur.1 > best.1 {
                            cur
                        } else {
                            best
                        }
                    },
                );
            if !(pmax > tiny) || pmax == T::zero() {
                return Err(Error::SingularMatrix);
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                odd = !odd;
            }
            let pivot = a[(k, k)];
            for i in (k + 1)..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                if f != Complex::zero() {
                    for j in (k + 1)..n {
                        let v = a[(k, j)];
                        a[(i, j)] = a[(i, j)] - f * v;
                    }
                }
            }
        }
        Ok((a, perm, odd))
    }

    /// Inverse by LU with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let (lu, perm, _) = self.lu()?;
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        let mut col = vec![Complex::<T>::zero(); n];
        for c in 0..n {
            for (i, x) in col.iter_mut().enumerate() {
                *x = if perm[i] == c { Complex::one() } else { Complex::zero() };
            }
            for i in 0..n {
                let mut s = col[i];
                for j in 0..i {
                    s = s - lu[(i, j)] * col[j];
                }
                col[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = col[i];
                for j in (i + 1)..n {
                    s = s - lu[(i, j)] * col[j];
                }
                col[i] = s / lu[(i, i)];
            }
            for i in 0..n {
                inv[(i, c)] = col[i];
            }
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> Result<Complex<T>> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        if self.rows == 2 {
            return Ok(self[(0, 0)] * self[(1, 1)] - self[(0, 1)] * self[(1, 0)]);
        }
        match self.lu() {
            Ok((lu, _, odd)) => {
                let d = (0..self.rows).fold(Complex::one(), |acc, i| acc * lu[(i, i)]);
                Ok(if odd { -d } else { d })
            }
            Err(Error::SingularMatrix) => Ok(Complex::zero()),
            Err(e) => Err(e),
        }
    }

    /// True when the matrix is Hermitian (to `tol`) and admits a Cholesky factorization.
    pub fn is_hermitian_positive_definite(&self, tol: T) -> bool {
        if !self.is_square() || self.hermiticity_defect() > tol {
            return false;
        }
        let n = self.rows;
        let mut l = Self::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)].re;
            for k in 0..j {
                d = d - l[(j, k)].norm_sqr();
            }
            if !(d > T::zero()) {
                return false;
            }
            let djj = d.sqrt();
            l[(j, j)] = Complex::new(djj, T::zero());
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s = s - l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / djj;
            }
        }
        true
    }

    /// Principal logarithm of a 2x2 matrix close to the identity.
    ///
    /// Uses `log M = ½ log(det M) I + (u / sinh u) (M' - cosh u I)` with
    /// `M' = M / sqrt(det M)` and `cosh u = tr M' / 2`.
    pub fn log2x2(&self) -> Result<Self> {
        if self.rows != 2 || self.cols != 2 {
            return Err(Error::Shape("log2x2 needs a 2x2 matrix".into()));
        }
        let det = self.determinant()?;
        if det == Complex::zero() {
            return Err(Error::SingularMatrix);
        }
        let root = det.sqrt();
        let unit = self.scale(root.inv());
        let half_trace = unit.trace() * T::lit(0.5);
        let one = Complex::<T>::one();
        // u = acosh(half_trace), on the branch with u -> 0 as M -> I
        let u = (half_trace + (half_trace * half_trace - one).sqrt()).ln();
        let ratio = if u.norm() < T::lit(1e-4) {
            let u2 = u * u;
            one - u2 / T::lit(6.0) + u2 * u2 * T::lit(7.0 / 360.0)
        } else {
            u / u.sinh()
        };
        let traceless = unit.sub_scalar_identity(half_trace);
        let mut out = traceless.scale(ratio);
        let log_root = root.ln();
        out[(0, 0)] = out[(0, 0)] + log_root;
        out[(1, 1)] = out[(1, 1)] + log_root;
        Ok(out)
    }

    fn sub_scalar_identity(&self, s: Complex<T>) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = m[(i, i)] - s;
        }
        m
    }
}

/// Eigenvalues of an upper Hessenberg matrix by shifted complex QR.
pub fn hessenberg_eigenvalues<T: Real>(h: &CMatrix<T>) -> Result<Vec<Complex<T>>> {
    if !h.is_square() {
        return Err(Error::Shape("eigenvalues of a non-square matrix".into()));
    }
    let n = h.rows();
    let mut h = h.clone();
    let mut eig = Vec::with_capacity(n);
    let mut hi = n;
    let mut iter = 0usize;
    let eps = T::epsilon();
    while hi > 0 {
        if hi == 1 {
            eig.push(h[(0, 0)]);
            break;
        }
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let sub = h[(lo, lo - 1)].norm();
            if sub <= eps * s || sub < T::min_positive_value() {
                h[(lo, lo - 1)] = Complex::zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eig.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 60 * n {
            return Err(Error::NoConvergence);
        }
        let a = h[(hi - 2, hi - 2)];
        let b = h[(hi - 2, hi - 1)];
        let cc = h[(hi - 1, hi - 2)];
        let d = h[(hi - 1, hi - 1)];
        let mu = if iter % 11 == 10 {
            // exceptional shift
            d + Complex::new(h[(hi - 1, hi - 2)].norm() * T::lit(0.75), T::zero())
        } else {
            let half = (a + d) * T::lit(0.5);
            let disc = ((a - d) * (a - d) * T::lit(0.25) + b * cc).sqrt();
            let m1 = half + disc;
            let m2 = half - disc;
            if (m1 - d).norm() < (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };
        for k in lo..hi {
            h[(k, k)] = h[(k, k)] - mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..(hi - 1) {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cs, sn) = if r == T::zero() {
                (T::one(), Complex::zero())
            } else if x.norm() == T::zero() {
                (T::zero(), y.conj() / y.norm())
            } else {
                (x.norm() / r, (x / x.norm()) * y.conj() / r)
            };
            for j in k..hi {
                let u = h[(k, j)];
                let v = h[(k + 1, j)];
                h[(k, j)] = u * cs + sn * v;
                h[(k + 1, j)] = -sn.conj() * u + v * cs;
            }
            rots.push((cs, sn));
        }
        for (off, &(cs, sn)) in rots.iter().enumerate() {
            let k = lo + off;
            let top = (k + 2).min(hi);
            for i in lo..top {
                let u = h[(i, k)];
                let v = h[(i, k + 1)];
                h[(i, k)] = u * cs + v * sn.conj();
                h[(i, k + 1)] = -u * sn + v * cs;
            }
        }
        for k in lo..hi {
            h[(k, k)] = h[(k, k)] + mu;
        }
    }
    Ok(eig)
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex::zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in dst.iter_mut().zip(row) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn add(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix sum shape mismatch"
        );
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn sub(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix difference shape mismatch"
        );
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn neg(self) -> CMatrix<T> {
        self.map(|z| -z)
    }
}
