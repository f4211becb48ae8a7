//! Dense square complex matrices and their Hermitian counterparts.

use alloc::format;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 math wins when std is linked
use num_traits::Float;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Largest dimension accepted from external inputs.
pub const MAX_DIM: usize = 64;

/// Dense `n x n` complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: alloc::vec![Complex64::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from row-major entries, rejecting empty or non-finite input.
    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if data.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        let m = Self { n, data };
        if !m.is_finite() {
            return Err(Error::InvalidInput("non-finite entry".into()));
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::InvalidInput("rows must form a square matrix".into()));
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(n, data)
    }

    /// Real-valued matrix from rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::InvalidInput("rows must form a square matrix".into()));
            }
            data.extend(r.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_row_major(n, data)
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn real_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_complex(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Complex64]) {
        for (i, &v) in col.iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| {
                let row = &self.data[i * self.n..(i + 1) * self.n];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// `x* A x` for a vector `x`.
    pub fn quadratic_form(&self, x: &[Complex64]) -> Complex64 {
        let ax = self.mul_vec(x);
        x.iter().zip(&ax).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Diagonal block with rows and columns `start..end`.
    pub fn principal_block(&self, start: usize, end: usize) -> Self {
        self.block(start, end, start, end)
    }

    /// Square sub-block with rows `r0..r1` and columns `c0..c1`.
    pub(crate) fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        debug_assert_eq!(r1 - r0, c1 - c0);
        Self::from_fn(r1 - r0, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Assembles `[[a, b], [c, d]]` from four equally sized blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        let n = a.n;
        for m in [b, c, d] {
            if m.n != n {
                return Err(Error::DimensionMismatch { left: n, right: m.n });
            }
        }
        Ok(Self::from_fn(2 * n, |i, j| match (i < n, j < n) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - n)],
            (false, true) => c[(i - n, j)],
            (false, false) => d[(i - n, j - n)],
        }))
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `‖AA* − A*A‖_F`
    pub fn normality_defect(&self) -> f64 {
        let adj = self.adjoint();
        (self * &adj - &adj * self).frobenius_norm()
    }

    /// `‖A*A − I‖_F`
    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self - Self::identity(self.n)).frobenius_norm()
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in product");
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

macro_rules! elementwise {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $f(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                assert_eq!(self.n, rhs.n, "dimension mismatch");
                ComplexMatrix {
                    n: self.n,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }
        impl $tr for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $f(self, rhs: ComplexMatrix) -> ComplexMatrix {
                &self $op &rhs
            }
        }
        impl $tr<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $f(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                &self $op rhs
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-1.0)
    }
}

/// A matrix with `H = H*` holding exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
    asymmetry: f64,
}

/// Relative asymmetry accepted by [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-13;

impl HermitianMatrix {
    /// Checks that `m` is Hermitian to `1e-13` relative (Frobenius) and symmetrizes it.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let h = Self::symmetrize(m);
        if h.asymmetry > HERMITIAN_TOL * h.inner.frobenius_norm().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "matrix is not Hermitian (asymmetry {:e})",
                h.asymmetry
            )));
        }
        Ok(h)
    }

    /// `(M + M*)/2`, recording `‖M − M*‖_F`.
    pub fn symmetrize(m: ComplexMatrix) -> Self {
        let n = m.dim();
        let mut asym2 = 0.0;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            out[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            asym2 += 4.0 * m[(i, i)].im * m[(i, i)].im;
            for j in (i + 1)..n {
                let a = m[(i, j)];
                let b = m[(j, i)].conj();
                asym2 += 2.0 * (a - b).norm_sqr();
                let v = (a + b) * 0.5;
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        Self {
            inner: out,
            asymmetry: asym2.sqrt(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: ComplexMatrix::zeros(n),
            asymmetry: 0.0,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: ComplexMatrix::identity(n),
            asymmetry: 0.0,
        }
    }

    pub fn real_diagonal(values: &[f64]) -> Self {
        Self {
            inner: ComplexMatrix::real_diagonal(values),
            asymmetry: 0.0,
        }
    }

    /// Asymmetry of the matrix this was built from.
    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::symmetrize(self.inner.scale(c))
    }

    /// `U* H U`.
    pub fn congruence_adj(&self, u: &ComplexMatrix) -> Self {
        Self::symmetrize(&(&u.adjoint() * &self.inner) * u)
    }

    /// `U H U*`.
    pub fn congruence(&self, u: &ComplexMatrix) -> Self {
        Self::symmetrize(&(u * &self.inner) * &u.adjoint())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::symmetrize(&self.inner + &other.inner)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::symmetrize(&self.inner - &other.inner)
    }

    pub fn is_zero(&self) -> bool {
        self.inner.as_slice().iter().all(|z| z.is_zero())
    }
}

/// `A = H + iK` with `H = (A + A*)/2` and `K = (A − A*)/(2i)`.
pub fn cartesian_decompose(a: &ComplexMatrix) -> Result<(HermitianMatrix, HermitianMatrix)> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("non-finite entry".into()));
    }
    let n = a.dim();
    let mut h = ComplexMatrix::zeros(n);
    let mut k = ComplexMatrix::zeros(n);
    let two_i = Complex64::new(0.0, 2.0);
    for i in 0..n {
        for j in 0..n {
            let x = a[(i, j)];
            let y = a[(j, i)].conj();
            h[(i, j)] = (x + y) * 0.5;
            k[(i, j)] = (x - y) / two_i;
        }
    }
    Ok((
        HermitianMatrix {
            inner: h,
            asymmetry: 0.0,
        },
        HermitianMatrix {
            inner: k,
            asymmetry: 0.0,
        },
    ))
}

/// Real part `(A + A*)/2` only.
pub fn real_part(a: &ComplexMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrize(a.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cartesian_of_upper_triangular() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        let (h, k) = cartesian_decompose(&a).unwrap();
        let eh = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let ek = ComplexMatrix::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]])
            .unwrap();
        assert_eq!(h.matrix(), &eh);
        assert_eq!(k.matrix(), &ek);
    }

    #[test]
    fn cartesian_of_hermitian_and_of_i() {
        let a = ComplexMatrix::from_rows(&[&[c(2.0, 0.0), c(1.0, -3.0)], &[c(1.0, 3.0), c(-1.0, 0.0)]])
            .unwrap();
        let (h, k) = cartesian_decompose(&a).unwrap();
        assert!(k.is_zero());
        assert_eq!(h.matrix(), &a);

        let ii = ComplexMatrix::identity(3).scale_complex(c(0.0, 1.0));
        let (h, k) = cartesian_decompose(&ii).unwrap();
        assert!(h.is_zero());
        assert_eq!(k.matrix(), &ComplexMatrix::identity(3));
    }

    #[test]
    fn rejects_non_finite() {
        let r = ComplexMatrix::from_row_major(1, alloc::vec![c(f64::NAN, 0.0)]);
        assert!(matches!(r, Err(Error::InvalidInput(_))));
        let r = ComplexMatrix::from_row_major(0, alloc::vec![]);
        assert!(r.is_err());
    }

    #[test]
    fn adjoint_is_involution() {
        let a = ComplexMatrix::from_fn(3, |i, j| c(i as f64 - j as f64, (i * j) as f64 + 0.5));
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn hermitian_new_rejects_asymmetric() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(HermitianMatrix::new(a).is_err());
        let h = HermitianMatrix::symmetrize(
            ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap(),
        );
        assert!(h.asymmetry() > 2.0);
        assert_eq!(h.matrix().hermitian_defect(), 0.0);
    }

    #[test]
    fn block_assembly_round_trip() {
        let a = ComplexMatrix::from_fn(4, |i, j| c(i as f64, j as f64));
        let b11 = a.block(0, 2, 0, 2);
        let b12 = a.block(0, 2, 2, 4);
        let b21 = a.block(2, 4, 0, 2);
        let b22 = a.block(2, 4, 2, 4);
        assert_eq!(ComplexMatrix::from_blocks(&b11, &b12, &b21, &b22).unwrap(), a);
    }
}
