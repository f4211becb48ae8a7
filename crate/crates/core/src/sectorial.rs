//! Sector membership, minimal sector angles and numerical-range sampling.
//!
//! A matrix is sectorial with half-angle `α` when its numerical range lies in
//! `S_α = { z : Re z ≥ 0, |Im z| ≤ Re z · tan α }`. Writing `A = H + iK`, this
//! is equivalent to `tan α · H ± K ⪰ 0`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 math wins when std is linked
use num_traits::Float;

use crate::eigen::{hermitian_eigen, is_psd, PsdVerdict, SpectralData};
use crate::error::{Error, Result};
use crate::matrix::{cartesian_decompose, ComplexMatrix, HermitianMatrix};
use crate::search::golden_max;

/// Absolute tolerance for angle comparisons (radians).
pub const ANGLE_TOL: f64 = 1e-8;
/// Largest half-angle the searches consider, in degrees.
pub const MAX_ANGLE_DEG: f64 = 89.99;
/// Bisection steps on `t = tan α`.
pub const BISECTION_STEPS: usize = 80;

const PREP_TOL: f64 = 1e-10;
const BISECTION_PSD_TOL: f64 = 1e-13;
const FOV_COARSE: usize = 256;
const FOV_BRACKET: f64 = 1e-10;

/// `tan(89.99°)`, the upper end of the bisection bracket.
pub fn max_tan() -> f64 {
    (MAX_ANGLE_DEG.to_radians()).tan()
}

/// A half-angle `α ∈ [0, π/2)` with cached `tan α` and `sec α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorAngle {
    alpha: f64,
    tan_alpha: f64,
    sec_alpha: f64,
}

impl SectorAngle {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || !(0.0..FRAC_PI_2).contains(&alpha) {
            return Err(Error::InvalidAngle(alpha));
        }
        Ok(Self {
            alpha,
            tan_alpha: alpha.tan(),
            sec_alpha: 1.0 / alpha.cos(),
        })
    }

    pub fn zero() -> Self {
        Self {
            alpha: 0.0,
            tan_alpha: 0.0,
            sec_alpha: 1.0,
        }
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn tan(&self) -> f64 {
        self.tan_alpha
    }

    #[inline]
    pub fn sec(&self) -> f64 {
        self.sec_alpha
    }

    /// `z ∈ S_α` for a scalar `z`, closed at the boundary up to `tol`.
    pub fn contains_point(&self, z: Complex64, tol: f64) -> bool {
        z.re >= -tol && z.im.abs() <= z.re * self.tan_alpha + tol
    }
}

/// Minimal sector angle or the marker that no sector of half-angle below
/// `89.99°` contains the numerical range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sectoriality {
    Sectorial(SectorAngle),
    NotSectorial,
}

impl Sectoriality {
    pub fn angle(&self) -> Option<SectorAngle> {
        match self {
            Sectoriality::Sectorial(a) => Some(*a),
            Sectoriality::NotSectorial => None,
        }
    }

    pub fn is_sectorial(&self) -> bool {
        matches!(self, Sectoriality::Sectorial(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleMethod {
    /// `arctan ρ((ℜA)^{-1/2} ℑA (ℜA)^{-1/2})`; needs `ℜA ≻ 0`.
    Whitened,
    /// Smallest `t` with `tℜA ± ℑA ⪰ 0`; handles singular `ℜA`.
    Bisection,
    /// Inner approximation `max |arg z(θ)|` over boundary samples of `W(A)`.
    FovSampling,
}

/// Verdicts for `tan α · ℜA + ℑA ⪰ 0` and `tan α · ℜA − ℑA ⪰ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorContainment {
    pub plus: PsdVerdict,
    pub minus: PsdVerdict,
}

impl SectorContainment {
    pub fn contained(&self) -> bool {
        self.plus.is_psd && self.minus.is_psd
    }
}

/// `[[P, Q], [Q, P]] ⪰ 0` via the split `P + Q ⪰ 0` and `P − Q ⪰ 0`.
pub fn split_block_psd(
    p: &HermitianMatrix,
    q: &HermitianMatrix,
    tol: f64,
) -> Result<(PsdVerdict, PsdVerdict)> {
    Ok((is_psd(&p.add(q), tol)?, is_psd(&p.sub(q), tol)?))
}

/// `[[P, Q], [Q, P]] ⪰ 0` by a direct `2n x 2n` eigensolve.
pub fn full_block_psd(p: &HermitianMatrix, q: &HermitianMatrix, tol: f64) -> Result<PsdVerdict> {
    let block = ComplexMatrix::from_blocks(p.matrix(), q.matrix(), q.matrix(), p.matrix())?;
    is_psd(&HermitianMatrix::symmetrize(block), tol)
}

/// Does `W(A) ⊆ S_α` hold, tested through `tan α · ℜA ± ℑA ⪰ 0`.
pub fn sector_contains(a: &ComplexMatrix, alpha: SectorAngle, tol: f64) -> Result<SectorContainment> {
    let (h, k) = cartesian_decompose(a)?;
    let (plus, minus) = split_block_psd(&h.scale(alpha.tan()), &k, tol)?;
    Ok(SectorContainment { plus, minus })
}

struct Prepared {
    h: HermitianMatrix,
    k: HermitianMatrix,
    h_spec: SpectralData,
    h_tol: f64,
}

enum Prep {
    Ready(Prepared),
    NotSectorial,
}

fn prepare(a: &ComplexMatrix) -> Result<Prep> {
    let (h, k) = cartesian_decompose(a)?;
    let h_spec = hermitian_eigen(&h)?;
    let h_tol = PREP_TOL * h_spec.spectral_radius().max(1.0);
    if h_spec.min() < -h_tol {
        return Ok(Prep::NotSectorial);
    }
    // x in ker ℜA gives Re x*Ax = 0, so ℑA must vanish there.
    let k_tol = PREP_TOL * k.matrix().frobenius_norm().max(h_spec.spectral_radius()).max(1.0);
    for (j, &l) in h_spec.eigenvalues.iter().enumerate() {
        if l <= h_tol {
            let x = h_spec.eigenvector(j);
            let kx = k.matrix().mul_vec(&x);
            let r = kx.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if r > k_tol {
                return Ok(Prep::NotSectorial);
            }
        }
    }
    Ok(Prep::Ready(Prepared { h, k, h_spec, h_tol }))
}

fn angle_from_tan(t: f64) -> Result<Sectoriality> {
    if t > max_tan() {
        return Ok(Sectoriality::NotSectorial);
    }
    Ok(Sectoriality::Sectorial(SectorAngle::new(t.atan())?))
}

/// Minimal sector half-angle of `A` by the chosen method.
pub fn sector_angle(a: &ComplexMatrix, method: AngleMethod) -> Result<Sectoriality> {
    let prep = match prepare(a)? {
        Prep::Ready(p) => p,
        Prep::NotSectorial => return Ok(Sectoriality::NotSectorial),
    };
    match method {
        AngleMethod::Whitened => whitened(&prep),
        AngleMethod::Bisection => bisection(&prep),
        AngleMethod::FovSampling => fov_sampling(a, &prep),
    }
}

/// Whitened angle when `ℜA ≻ 0`, bisection otherwise.
pub fn sector_angle_auto(a: &ComplexMatrix) -> Result<Sectoriality> {
    match sector_angle(a, AngleMethod::Whitened) {
        Err(Error::MethodInapplicable) => sector_angle(a, AngleMethod::Bisection),
        other => other,
    }
}

fn whitened(p: &Prepared) -> Result<Sectoriality> {
    if p.h_spec.min() <= p.h_tol {
        return Err(Error::MethodInapplicable);
    }
    let w = p.h_spec.map(|l| 1.0 / l.sqrt());
    let m = HermitianMatrix::symmetrize(&(w.matrix() * p.k.matrix()) * w.matrix());
    let rho = hermitian_eigen(&m)?.spectral_radius();
    angle_from_tan(rho)
}

fn bisection(p: &Prepared) -> Result<Sectoriality> {
    let certifies = |t: f64| -> Result<bool> {
        let (plus, minus) = split_block_psd(&p.h.scale(t), &p.k, BISECTION_PSD_TOL)?;
        Ok(plus.is_psd && minus.is_psd)
    };
    if certifies(0.0)? {
        return Ok(Sectoriality::Sectorial(SectorAngle::zero()));
    }
    let mut hi = max_tan();
    if !certifies(hi)? {
        return Ok(Sectoriality::NotSectorial);
    }
    let mut lo = 0.0;
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if certifies(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    angle_from_tan(hi)
}

/// One boundary sample of the numerical range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FovSample {
    pub theta: f64,
    /// `x* A x` for `x` the top unit eigenvector of `ℜ(e^{-iθ} A)`.
    pub boundary_point: Complex64,
}

fn support_point(h: &HermitianMatrix, k: &HermitianMatrix, a: &ComplexMatrix, theta: f64) -> Result<Complex64> {
    let rot = h.scale(theta.cos()).add(&k.scale(theta.sin()));
    let spec = hermitian_eigen(&rot)?;
    Ok(a.quadratic_form(&spec.eigenvector(0)))
}

/// `m ≥ 8` samples of the boundary of `W(A)` at `θ_j = 2πj/m`.
pub fn fov_boundary(a: &ComplexMatrix, m: usize) -> Result<Vec<FovSample>> {
    if m < 8 {
        return Err(Error::InvalidInput(alloc::format!("need at least 8 samples, got {m}")));
    }
    let (h, k) = cartesian_decompose(a)?;
    (0..m)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / m as f64;
            Ok(FovSample {
                theta,
                boundary_point: support_point(&h, &k, a, theta)?,
            })
        })
        .collect()
}

fn fov_sampling(a: &ComplexMatrix, p: &Prepared) -> Result<Sectoriality> {
    let scale = p.h_spec.spectral_radius().max(p.k.matrix().frobenius_norm());
    let tiny = 1e-14 * scale.max(f64::MIN_POSITIVE);
    let signed_arg = |theta: f64| -> Result<f64> {
        let z = support_point(&p.h, &p.k, a, theta)?;
        Ok(if z.norm() <= tiny { 0.0 } else { z.im.atan2(z.re) })
    };

    let step = 2.0 * PI / FOV_COARSE as f64;
    let (mut up, mut down) = ((0.0, f64::NEG_INFINITY), (0.0, f64::INFINITY));
    for j in 0..FOV_COARSE {
        let theta = step * j as f64;
        let g = signed_arg(theta)?;
        if g > up.1 {
            up = (theta, g);
        }
        if g < down.1 {
            down = (theta, g);
        }
    }

    let mut failure = None;
    let mut refine = |center: f64, sign: f64| -> f64 {
        let (_, v) = golden_max(
            |t| match signed_arg(t) {
                Ok(g) => sign * g,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NEG_INFINITY
                }
            },
            center - step,
            center + step,
            FOV_BRACKET,
        );
        v
    };
    let best_up = refine(up.0, 1.0).max(up.1);
    let best_down = refine(down.0, -1.0).max(-down.1);
    if let Some(e) = failure {
        return Err(e);
    }
    let alpha = best_up.max(best_down).max(0.0);
    if alpha > MAX_ANGLE_DEG.to_radians() {
        return Ok(Sectoriality::NotSectorial);
    }
    Ok(Sectoriality::Sectorial(SectorAngle::new(alpha)?))
}

/// The three equivalent characterizations of `W(A) ⊆ S_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectorCharacterizations {
    /// Boundary samples of `W(A)` stay inside `S_α`.
    pub fov_in_sector: bool,
    /// `[[sec α ℜA, A*], [A, sec α ℜA]] ⪰ 0`.
    pub modulus_block: bool,
    /// `[[tan α ℜA, ℑA], [ℑA, tan α ℜA]] ⪰ 0`.
    pub cartesian_block: bool,
}

impl SectorCharacterizations {
    pub fn consistent(&self) -> bool {
        self.fov_in_sector == self.modulus_block && self.modulus_block == self.cartesian_block
    }
}

/// Evaluates all three sector characterizations. Angles within
/// [`ANGLE_TOL`] of the exact sector angle are reported as
/// [`Error::BoundaryAmbiguous`].
pub fn sector_characterizations(a: &ComplexMatrix, alpha: SectorAngle, tol: f64) -> Result<SectorCharacterizations> {
    if let Sectoriality::Sectorial(exact) = sector_angle(a, AngleMethod::Bisection)? {
        if (exact.alpha() - alpha.alpha()).abs() < ANGLE_TOL {
            return Err(Error::BoundaryAmbiguous {
                alpha: alpha.alpha(),
                sector_angle: exact.alpha(),
            });
        }
    }
    let fov_in_sector = match sector_angle(a, AngleMethod::FovSampling)? {
        Sectoriality::Sectorial(g) => g.alpha() <= alpha.alpha(),
        Sectoriality::NotSectorial => false,
    };
    let (h, k) = cartesian_decompose(a)?;
    let sec_h = h.scale(alpha.sec());
    let modulus = ComplexMatrix::from_blocks(sec_h.matrix(), &a.adjoint(), a, sec_h.matrix())?;
    let modulus_block = is_psd(&HermitianMatrix::symmetrize(modulus), tol)?.is_psd;
    let (plus, minus) = split_block_psd(&h.scale(alpha.tan()), &k, tol)?;
    Ok(SectorCharacterizations {
        fov_in_sector,
        modulus_block,
        cartesian_block: plus.is_psd && minus.is_psd,
    })
}
