//! Checkable forms of the operator inequalities behind the norm bounds.
//!
//! Inequalities with an explicit construction (the block-matrix bound and its
//! sectorial instances) return a [`WitnessReport`] carrying the unitaries
//! used. Inequalities that only assert existence of unitaries are checked
//! through their weak-majorization consequences and return a
//! [`ConsequenceCheck`].

use alloc::vec::Vec;

use crate::concave::ConcaveFunction;
use crate::eigen::{eigenvalues, hermitian_eigen, is_psd, map_clamped, DEFAULT_PSD_TOL};
use crate::error::{Error, Result};
use crate::matrix::{cartesian_decompose, ComplexMatrix, HermitianMatrix};
use crate::norms::{add_desc, weak_majorization_margin};
use crate::sectorial::{sector_contains, SectorAngle};
use crate::svd::{polar_decompose, singular_values};

/// Relative tolerance for Loewner-order residuals.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Relative tolerance for majorization and elementwise consequences.
pub const CONSEQUENCE_TOL: f64 = 1e-9;

/// A unitary used in a constructive proof step.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub label: &'static str,
    pub unitary: ComplexMatrix,
}

/// Result of checking `LHS ⪯ RHS` for one explicit construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub witnesses: Vec<Witness>,
    /// `λ_min(RHS − LHS)`.
    pub residual_min_eig: f64,
    pub holds: bool,
    pub s: f64,
    /// Absolute threshold: holds ⟺ `residual_min_eig ≥ −tolerance`.
    pub tolerance: f64,
}

impl WitnessReport {
    fn build(lhs: &HermitianMatrix, rhs: &HermitianMatrix, s: f64, witnesses: Vec<Witness>) -> Result<Self> {
        let scale = hermitian_eigen(rhs)?.spectral_radius();
        let residual_min_eig = hermitian_eigen(&rhs.sub(lhs))?.min();
        let tolerance = RESIDUAL_TOL * scale.max(1.0);
        Ok(Self {
            witnesses,
            residual_min_eig,
            holds: residual_min_eig >= -tolerance,
            s,
            tolerance,
        })
    }

    /// Largest `‖W*W − I‖_F` over the witnesses.
    pub fn max_unitarity_defect(&self) -> f64 {
        self.witnesses
            .iter()
            .map(|w| w.unitary.unitarity_defect())
            .fold(0.0, f64::max)
    }
}

/// Outcome of a majorization or elementwise consequence check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsequenceCheck {
    pub check: &'static str,
    pub holds: bool,
    /// Per-index margins (partial-sum gaps or elementwise gaps).
    pub margins: Vec<f64>,
    pub min_margin: f64,
    pub tolerance: f64,
}

impl ConsequenceCheck {
    fn from_margins(check: &'static str, margins: Vec<f64>, scale: f64) -> Self {
        let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
        let tolerance = CONSEQUENCE_TOL * scale.max(1.0);
        Self {
            check,
            holds: min_margin >= -tolerance,
            margins,
            min_margin,
            tolerance,
        }
    }

    fn majorization(check: &'static str, a: &[f64], b: &[f64]) -> Self {
        let scale = b.iter().map(|x| x.abs()).sum::<f64>();
        Self::from_margins(check, partial_sum_gaps(a, b), scale)
            .with_min(weak_majorization_margin(a, b))
    }

    fn with_min(mut self, m: f64) -> Self {
        self.min_margin = m;
        self.holds = m >= -self.tolerance;
        self
    }

    /// A failed check contradicts a proven inequality, so it is escalated.
    pub fn require(self) -> Result<Self> {
        if self.holds {
            Ok(self)
        } else {
            Err(Error::CounterexampleAlarm {
                check: self.check,
                margin: self.min_margin,
            })
        }
    }
}

fn partial_sum_gaps(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    let mut a = crate::norms::sorted_desc(a);
    let mut b = crate::norms::sorted_desc(b);
    a.resize(n, 0.0);
    b.resize(n, 0.0);
    let (mut sa, mut sb) = (0.0, 0.0);
    a.iter()
        .zip(&b)
        .map(|(x, y)| {
            sa += x;
            sb += y;
            sb - sa
        })
        .collect()
}

fn check_scale(s: f64) -> Result<()> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidScale(s))
    }
}

/// For `[[A, X], [X*, B]] ⪰ 0` and `s > 0`, checks both
/// `|X*| ⪯ (s/2)A + (1/2s)U*BU` with `X* = U|X*|`, and
/// `|X| ⪯ (s/2)V*AV + (1/2s)B` with `X = V|X|`.
pub fn block_modulus_check(
    a: &HermitianMatrix,
    x: &ComplexMatrix,
    b: &HermitianMatrix,
    s: f64,
) -> Result<(WitnessReport, WitnessReport)> {
    check_scale(s)?;
    a.matrix().check_same_dim(x)?;
    a.matrix().check_same_dim(b.matrix())?;
    let block = ComplexMatrix::from_blocks(a.matrix(), x, &x.adjoint(), b.matrix())?;
    let verdict = is_psd(&HermitianMatrix::symmetrize(block), DEFAULT_PSD_TOL)?;
    if !verdict.is_psd {
        return Err(Error::BlockNotPsd {
            min_eigenvalue: verdict.min_eigenvalue,
        });
    }
    let u = polar_decompose(&x.adjoint())?;
    let rhs = a.scale(s / 2.0).add(&b.congruence_adj(&u.unitary).scale(1.0 / (2.0 * s)));
    let first = WitnessReport::build(&u.modulus, &rhs, s, alloc::vec![Witness { label: "U", unitary: u.unitary }])?;

    let v = polar_decompose(x)?;
    let rhs = a.congruence_adj(&v.unitary).scale(s / 2.0).add(&b.scale(1.0 / (2.0 * s)));
    let second = WitnessReport::build(&v.modulus, &rhs, s, alloc::vec![Witness { label: "V", unitary: v.unitary }])?;
    Ok((first, second))
}

fn require_sector(a: &ComplexMatrix, alpha: SectorAngle) -> Result<(HermitianMatrix, HermitianMatrix)> {
    if !sector_contains(a, alpha, DEFAULT_PSD_TOL)?.contained() {
        return Err(Error::NotInSector);
    }
    cartesian_decompose(a)
}

/// `|ℑA| ⪯ (s tanα/2) ℜA + (tanα/2s) U*ℜA U`, `ℑA = U|ℑA|`.
pub fn im_part_bound(a: &ComplexMatrix, alpha: SectorAngle, s: f64) -> Result<WitnessReport> {
    check_scale(s)?;
    let (h, k) = require_sector(a, alpha)?;
    let p = polar_decompose(k.matrix())?;
    let t = alpha.tan();
    let rhs = h.scale(s * t / 2.0).add(&h.congruence_adj(&p.unitary).scale(t / (2.0 * s)));
    WitnessReport::build(&p.modulus, &rhs, s, alloc::vec![Witness { label: "U", unitary: p.unitary }])
}

/// `|A| ⪯ (secα/2)(s ℜA + s⁻¹ U*ℜA U)`, `A = U|A|`.
pub fn modulus_bound(a: &ComplexMatrix, alpha: SectorAngle, s: f64) -> Result<WitnessReport> {
    check_scale(s)?;
    let (h, _) = require_sector(a, alpha)?;
    let p = polar_decompose(a)?;
    let c = alpha.sec() / 2.0;
    let rhs = h.scale(c * s).add(&h.congruence_adj(&p.unitary).scale(c / s));
    WitnessReport::build(&p.modulus, &rhs, s, alloc::vec![Witness { label: "U", unitary: p.unitary }])
}

/// `σ(A) ≺_w λ(ℜA) + (tanα/2) σ(s ℜA + s⁻¹ U*ℜA U)` with `U` the polar
/// factor of `ℑA`.
pub fn triangle_modulus_chain(a: &ComplexMatrix, alpha: SectorAngle, s: f64) -> Result<ConsequenceCheck> {
    check_scale(s)?;
    let (h, k) = require_sector(a, alpha)?;
    let u = polar_decompose(k.matrix())?.unitary;
    let inner = h.scale(s).add(&h.congruence_adj(&u).scale(1.0 / s));
    let half_tan = alpha.tan() / 2.0;
    let tail: Vec<f64> = singular_values(inner.matrix())?.iter().map(|x| half_tan * x).collect();
    let head: Vec<f64> = eigenvalues(&h)?.iter().map(|x| x.max(0.0)).collect();
    Ok(ConsequenceCheck::majorization(
        "triangle_modulus_chain",
        &singular_values(a)?,
        &add_desc(&head, &tail),
    ))
}

/// `σ(A + B) ≺_w σ(A) + σ(B)`.
pub fn thompson_consequence(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ConsequenceCheck> {
    a.check_same_dim(b)?;
    let sum = singular_values(&(a + b))?;
    let rhs = add_desc(&singular_values(a)?, &singular_values(b)?);
    Ok(ConsequenceCheck::majorization("thompson", &sum, &rhs))
}

fn require_psd(h: &HermitianMatrix, what: &str) -> Result<Vec<f64>> {
    let spec = eigenvalues(h)?;
    let verdict = crate::eigen::PsdVerdict::from_spectrum(&spec, DEFAULT_PSD_TOL);
    if !verdict.is_psd {
        return Err(Error::PreconditionFailed(alloc::format!(
            "{what} is not psd (min eigenvalue {:e})",
            verdict.min_eigenvalue
        )));
    }
    Ok(spec)
}

/// `λ(f(A + B)) ≺_w λ(f(A)) + λ(f(B))` for psd `A`, `B`.
pub fn bourin_uchiyama_consequence(
    f: &ConcaveFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<ConsequenceCheck> {
    a.matrix().check_same_dim(b.matrix())?;
    let la = require_psd(a, "A")?;
    let lb = require_psd(b, "B")?;
    let lab = require_psd(&a.add(b), "A + B")?;
    let rhs = add_desc(&map_clamped(f, &la), &map_clamped(f, &lb));
    Ok(ConsequenceCheck::majorization("bourin_uchiyama", &map_clamped(f, &lab), &rhs))
}

/// `λ_j(ℜA) ≤ σ_j(A)` for every `j`.
pub fn fan_hoffman_check(a: &ComplexMatrix) -> Result<ConsequenceCheck> {
    let sv = singular_values(a)?;
    let re = eigenvalues(&crate::matrix::real_part(a))?;
    let margins = sv.iter().zip(&re).map(|(s, l)| s - l).collect();
    Ok(ConsequenceCheck::from_margins("fan_hoffman", margins, sv[0]))
}

/// For `A ⪰ B ⪰ 0`: `f(λ_j(A)) ≥ f(λ_j(B))` for every `j`.
pub fn weyl_norm_monotone(f: &ConcaveFunction, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<ConsequenceCheck> {
    a.matrix().check_same_dim(b.matrix())?;
    let lb = require_psd(b, "B")?;
    require_psd(&a.sub(b), "A − B")?;
    let la = eigenvalues(a)?;
    let fa = map_clamped(f, &la);
    let fb = map_clamped(f, &lb);
    let scale = fa.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let margins = fa.iter().zip(&fb).map(|(x, y)| x - y).collect();
    Ok(ConsequenceCheck::from_margins("weyl_monotone", margins, scale))
}

/// `f(λ(ℜA)) ≺_w f(σ(A))`, which gives `‖f(ℜA)‖ ≤ ‖f(|A|)‖`.
pub fn re_modulus_dominance(f: &ConcaveFunction, a: &ComplexMatrix) -> Result<ConsequenceCheck> {
    let re = require_psd(&crate::matrix::real_part(a), "ℜA")?;
    let sv = singular_values(a)?;
    Ok(ConsequenceCheck::majorization(
        "re_modulus_dominance",
        &map_clamped(f, &re),
        &map_clamped(f, &sv),
    ))
}
