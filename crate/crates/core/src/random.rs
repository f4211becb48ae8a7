//! Seeded test-instance generation.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)` (rand_chacha
//! 0.9), a counter-based stream: the same `(kind, n, seed)` always yields the
//! same matrix. Campaign seeds are derived with [`derive_seed`].

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 math wins when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};

/// Name of the stream generator, recorded in campaign reports.
pub const RNG_ALGORITHM: &str = "chacha8 (rand_chacha 0.9, seed_from_u64)";

/// Kinds of random matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RandomKind {
    /// i.i.d. complex Gaussian entries with `E|z|² = 1`.
    Ginibre,
    /// Haar unitary.
    Unitary,
    /// Complex Wishart `G G* / n`.
    Psd,
    /// `(G + G*) / 2`.
    Hermitian,
    /// `H + i H^{1/2} S H^{1/2}` with `ρ(S) = tan α`; its sector angle is exactly `α`.
    Sectorial(f64),
    /// `U D U*` with eigenvalues in the sector and one on the ray `arg z = ±α`.
    NormalSectorial(f64),
}

impl fmt::Display for RandomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RandomKind::Ginibre => f.write_str("ginibre"),
            RandomKind::Unitary => f.write_str("unitary"),
            RandomKind::Psd => f.write_str("psd"),
            RandomKind::Hermitian => f.write_str("hermitian"),
            RandomKind::Sectorial(a) => write!(f, "sectorial({a})"),
            RandomKind::NormalSectorial(a) => write!(f, "normal_sectorial({a})"),
        }
    }
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed: `mix64(master + (index + 1) · 0x9E3779B97F4A7C15)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

fn ginibre(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| gaussian(rng))
}

/// Haar unitary via Gram–Schmidt (twice) on Ginibre columns; the implicit
/// triangular factor has a positive diagonal.
fn haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    loop {
        let g = ginibre(n, rng);
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut x = g.column(j);
            for _ in 0..2 {
                for q in &cols {
                    let c: Complex64 = q.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
                    for (xi, qi) in x.iter_mut().zip(q) {
                        *xi -= c * qi;
                    }
                }
            }
            let r = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if r < 1e-8 {
                ok = false;
                break;
            }
            x.iter_mut().for_each(|z| *z /= r);
            cols.push(x);
        }
        if ok {
            let mut u = ComplexMatrix::zeros(n);
            for (j, c) in cols.iter().enumerate() {
                u.set_column(j, c);
            }
            return u;
        }
    }
}

fn wishart(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let g = ginibre(n, rng);
    HermitianMatrix::symmetrize((&g * &g.adjoint()).scale(1.0 / n as f64))
}

fn check_angle(alpha: f64) -> Result<()> {
    if alpha.is_finite() && (0.0..FRAC_PI_2).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::InvalidAngle(alpha))
    }
}

/// Deterministic random matrix of the given kind.
pub fn random_matrix(kind: RandomKind, n: usize, seed: u64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    Ok(match kind {
        RandomKind::Ginibre => ginibre(n, &mut rng),
        RandomKind::Unitary => haar_unitary(n, &mut rng),
        RandomKind::Psd => wishart(n, &mut rng).into_matrix(),
        RandomKind::Hermitian => {
            let g = ginibre(n, &mut rng);
            HermitianMatrix::symmetrize(g).into_matrix()
        }
        RandomKind::Sectorial(alpha) => {
            check_angle(alpha)?;
            sectorial(alpha, n, &mut rng)?
        }
        RandomKind::NormalSectorial(alpha) => {
            check_angle(alpha)?;
            normal_sectorial(alpha, n, &mut rng)
        }
    })
}

fn sectorial(alpha: f64, n: usize, rng: &mut ChaCha8Rng) -> Result<ComplexMatrix> {
    // Shifted Wishart keeps the real part comfortably positive definite.
    let h = wishart(n, rng).add(&HermitianMatrix::identity(n).scale(0.1));
    let root = hermitian_eigen(&h)?.map(|l| l.max(0.0).sqrt());
    let s0 = HermitianMatrix::symmetrize(ginibre(n, rng));
    let rho = hermitian_eigen(&s0)?.spectral_radius();
    let t = alpha.tan();
    let s = if rho > 0.0 { s0.scale(t / rho) } else { s0.scale(0.0) };
    let k = HermitianMatrix::symmetrize(&(root.matrix() * s.matrix()) * root.matrix());
    let i = Complex64::new(0.0, 1.0);
    Ok(h.matrix() + &k.matrix().scale_complex(i))
}

fn normal_sectorial(alpha: f64, n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let u = haar_unitary(n, rng);
    let boundary = rng.random_range(0..n);
    let upper: bool = rng.random();
    let d: Vec<Complex64> = (0..n)
        .map(|j| {
            let r = rng.random_range(0.5..2.0);
            let phi = if j == boundary {
                if upper {
                    alpha
                } else {
                    -alpha
                }
            } else if alpha > 0.0 {
                rng.random_range(-alpha..=alpha)
            } else {
                0.0
            };
            Complex64::from_polar(r, phi)
        })
        .collect();
    &(&u * &ComplexMatrix::diagonal(&d)) * &u.adjoint()
}
