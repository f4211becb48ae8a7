//! Singular values and the polar decomposition.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 math wins when std is linked
use num_traits::Float;

use crate::eigen::{self, Rotation, MAX_SWEEPS};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};

/// Condition estimate above which the Gram route is abandoned for one-sided Jacobi.
pub const GRAM_CONDITION_LIMIT: f64 = 1e4;

/// Singular values relative to `σ_max` below this are treated as zero.
const RANK_TOL: f64 = 64.0 * f64::EPSILON;

/// Thin record of a full SVD `A = U diag(σ) V*`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
    /// Number of singular values treated as nonzero.
    pub rank: usize,
}

/// Descending singular values.
///
/// Uses the eigenvalues of `A*A` while the condition estimate stays below
/// [`GRAM_CONDITION_LIMIT`], and one-sided Jacobi otherwise.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("non-finite entry".into()));
    }
    let gram = HermitianMatrix::symmetrize(&a.adjoint() * a);
    let lam = eigen::eigenvalues(&gram)?;
    let (hi, lo) = (lam[0], *lam.last().unwrap());
    if hi == 0.0 {
        return Ok(alloc::vec![0.0; a.dim()]);
    }
    if lo > 0.0 && (hi / lo).sqrt() <= GRAM_CONDITION_LIMIT {
        return Ok(lam.iter().map(|&l| l.max(0.0).sqrt()).collect());
    }
    Ok(svd(a)?.sigma)
}

/// One-sided (Hestenes) Jacobi SVD with deterministic kernel completion.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("non-finite entry".into()));
    }
    let n = a.dim();
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, Complex64::new(0.0, 0.0));
                for k in 0..n {
                    let (wp, wq) = (w[(k, p)], w[(k, q)]);
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                if gamma.norm() <= n as f64 * f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                if let Some(rot) = Rotation::annihilating(alpha, beta, gamma) {
                    rot.apply_right(&mut w, p, q);
                    rot.apply_right(&mut v, p, q);
                    rotated = true;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(
            "one-sided Jacobi did not converge".into(),
        ));
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let cutoff = RANK_TOL * sigma[0];
    let rank = if sigma[0] == 0.0 {
        0
    } else {
        sigma.iter().take_while(|&&s| s > cutoff).count()
    };

    let mut range = Vec::with_capacity(n);
    let mut corange = Vec::with_capacity(n);
    for &j in order.iter().take(rank) {
        let inv = 1.0 / norms[j];
        range.push((0..n).map(|i| w[(i, j)] * inv).collect::<Vec<_>>());
        corange.push(v.column(j));
    }
    // Kernel of A and complement of its range, both from the standard basis.
    let kernel = complete_basis(&corange, n);
    let cokernel = complete_basis(&range, n);

    let mut u_mat = ComplexMatrix::zeros(n);
    let mut v_mat = ComplexMatrix::zeros(n);
    for (j, (ucol, vcol)) in range
        .iter()
        .chain(&cokernel)
        .zip(corange.iter().chain(&kernel))
        .enumerate()
    {
        u_mat.set_column(j, ucol);
        v_mat.set_column(j, vcol);
    }
    Ok(Svd {
        u: u_mat,
        sigma,
        v: v_mat,
        rank,
    })
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal basis of the complement of `span(basis)`, built by
/// Gram–Schmidt over `e_1, e_2, ...` in index order.
pub(crate) fn complete_basis(basis: &[Vec<Complex64>], n: usize) -> Vec<Vec<Complex64>> {
    // Some e_i always keeps a residual of at least 1/sqrt(n) against the
    // remaining complement, so 1e-2 never stalls for n <= 64.
    const ACCEPT: f64 = 1e-2;
    let need = n - basis.len();
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(need);
    for i in 0..n {
        if out.len() == need {
            break;
        }
        let mut x = alloc::vec![Complex64::new(0.0, 0.0); n];
        x[i] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in basis.iter().chain(out.iter()) {
                let c = dot(b, &x);
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi -= c * bi;
                }
            }
        }
        let r = norm(&x);
        if r > ACCEPT {
            x.iter_mut().for_each(|z| *z /= r);
            out.push(x);
        }
    }
    out
}

/// Polar factors `A = U P` with `P = |A|`.
#[derive(Debug, Clone)]
pub struct Polar {
    pub unitary: ComplexMatrix,
    pub modulus: HermitianMatrix,
}

/// `A = U |A|`; on a kernel the unitary maps the standard-basis completion of
/// the kernel onto the standard-basis completion of the range complement.
pub fn polar_decompose(a: &ComplexMatrix) -> Result<Polar> {
    let s = svd(a)?;
    let n = a.dim();
    let unitary = &s.u * &s.v.adjoint();
    let modulus = HermitianMatrix::symmetrize(ComplexMatrix::from_fn(n, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &sk) in s.sigma.iter().enumerate() {
            acc += s.v[(i, k)] * s.v[(j, k)].conj() * sk;
        }
        acc
    }));
    Ok(Polar { unitary, modulus })
}

/// `|A| = (A*A)^{1/2}`.
pub fn modulus(a: &ComplexMatrix) -> Result<HermitianMatrix> {
    Ok(polar_decompose(a)?.modulus)
}

/// Operator (spectral) norm.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?[0])
}
