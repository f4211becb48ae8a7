//! Cyclic Jacobi eigensolver for Hermitian matrices and the spectral
//! calculus built on it.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 math wins when std is linked
use num_traits::Float;

use crate::concave::ConcaveFunction;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 64;
/// Off-diagonal Frobenius threshold relative to `‖H‖_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
/// Default relative tolerance for positive semidefiniteness.
pub const DEFAULT_PSD_TOL: f64 = 1e-10;

/// Eigenvalues in descending order with matching unitary eigenvectors (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralData {
    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    /// Largest eigenvalue magnitude.
    pub fn spectral_radius(&self) -> f64 {
        self.max().abs().max(self.min().abs())
    }

    /// `Q diag(g(λ)) Q*`.
    pub fn map(&self, mut g: impl FnMut(f64) -> f64) -> HermitianMatrix {
        let q = &self.eigenvectors;
        let n = q.dim();
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| g(l)).collect();
        let m = ComplexMatrix::from_fn(n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &v) in vals.iter().enumerate() {
                acc += q[(i, k)] * q[(j, k)].conj() * v;
            }
            acc
        });
        HermitianMatrix::symmetrize(m)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|l| l)
    }

    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        self.eigenvectors.column(j)
    }
}

/// Unitary 2x2 Jacobi rotation `W = [[c, s], [-s·ph, c·ph]]` acting on the
/// `(p, q)` plane; `W* [[a, g], [g*, b]] W` is diagonal.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rotation {
    pub c: f64,
    pub s: f64,
    pub ph: Complex64,
}

impl Rotation {
    /// `None` when `g` is exactly zero.
    pub(crate) fn annihilating(a: f64, b: f64, g: Complex64) -> Option<Self> {
        let r = g.norm();
        if r == 0.0 {
            return None;
        }
        let ph = (g / r).conj();
        let theta = (b - a) / (2.0 * r);
        let t = if theta >= 0.0 {
            1.0 / (theta + theta.hypot(1.0))
        } else {
            -1.0 / (-theta + theta.hypot(1.0))
        };
        let c = 1.0 / t.hypot(1.0);
        Some(Self { c, s: t * c, ph })
    }

    /// `M ← M W` restricted to columns `p`, `q`.
    pub(crate) fn apply_right(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        let (c, s, ph) = (self.c, self.s, self.ph);
        for k in 0..m.dim() {
            let xp = m[(k, p)];
            let xq = m[(k, q)] * ph;
            m[(k, p)] = xp * c - xq * s;
            m[(k, q)] = xp * s + xq * c;
        }
    }

    /// `M ← W* M` restricted to rows `p`, `q`.
    pub(crate) fn apply_left_adjoint(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        let (c, s, phc) = (self.c, self.s, self.ph.conj());
        for k in 0..m.dim() {
            let xp = m[(p, k)];
            let xq = m[(q, k)] * phc;
            m[(p, k)] = xp * c - xq * s;
            m[(q, k)] = xp * s + xq * c;
        }
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
pub fn hermitian_eigen(h: &HermitianMatrix) -> Result<SpectralData> {
    let n = h.dim();
    let mut a = h.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = OFF_DIAGONAL_TOL * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                let Some(rot) = Rotation::annihilating(a[(p, p)].re, a[(q, q)].re, g) else {
                    continue;
                };
                rot.apply_right(&mut a, p, q);
                rot.apply_left_adjoint(&mut a, p, q);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                rot.apply_right(&mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "Jacobi did not converge in {MAX_SWEEPS} sweeps (n = {n})"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(SpectralData {
        eigenvalues,
        eigenvectors,
    })
}

/// Descending eigenvalues only.
pub fn eigenvalues(h: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(h)?.eigenvalues)
}

/// Outcome of a Loewner-order test `H ⪰ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub tolerance_used: f64,
}

impl PsdVerdict {
    pub(crate) fn from_spectrum(spec: &[f64], scale_tol: f64) -> Self {
        let max_abs = spec.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let min_eigenvalue = spec.iter().copied().fold(f64::INFINITY, f64::min);
        let tolerance_used = scale_tol * max_abs.max(1.0);
        Self {
            is_psd: min_eigenvalue >= -tolerance_used,
            min_eigenvalue,
            tolerance_used,
        }
    }
}

/// `H ⪰ 0` with tolerance `scale_tol · max(1, max|λ|)`.
pub fn is_psd(h: &HermitianMatrix, scale_tol: f64) -> Result<PsdVerdict> {
    let spec = eigenvalues(h)?;
    Ok(PsdVerdict::from_spectrum(&spec, scale_tol))
}

/// `f(P) = Q diag(f(λ_j)) Q*`; eigenvalues in `[-tol, 0)` are clamped to zero.
pub fn apply_function(f: &ConcaveFunction, p: &HermitianMatrix) -> Result<HermitianMatrix> {
    let spec = hermitian_eigen(p)?;
    let verdict = PsdVerdict::from_spectrum(&spec.eigenvalues, DEFAULT_PSD_TOL);
    if !verdict.is_psd {
        return Err(Error::NotPsd {
            min_eigenvalue: verdict.min_eigenvalue,
        });
    }
    Ok(spec.map(|l| f.eval(l.max(0.0))))
}

/// Clamped `f` applied to a list of (nearly) nonnegative reals.
pub(crate) fn map_clamped(f: &ConcaveFunction, values: &[f64]) -> Vec<f64> {
    values.iter().map(|&x| f.eval(x.max(0.0))).collect()
}
