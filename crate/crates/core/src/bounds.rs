//! Block-partition norm bounds for `‖f(|A|)‖` with concave `f`.
//!
//! Every right-hand side is a sum of terms `T(c) = ‖f(c|A₁₁|)‖ + ‖f(c|A₂₂|)‖`.
//! Each block term is evaluated as the norm of `f` applied to the block's
//! singular values, zero-padded to length `n`; `f(0)` enters for every zero
//! singular value and for `c = 0`, so no constant-term special cases exist.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, SQRT_2};
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // inherent f64 math wins when std is linked
use num_traits::Float;

use crate::concave::ConcaveFunction;
use crate::eigen::{is_psd, DEFAULT_PSD_TOL};
use crate::error::{Error, Result};
use crate::matrix::{cartesian_decompose, ComplexMatrix};
use crate::norms::{norm_value, NormFamily};
use crate::search::golden_min;
use crate::sectorial::{sector_angle_auto, SectorAngle, Sectoriality, ANGLE_TOL};
use crate::svd::singular_values;

/// Relative slack in the "holds" verdict: `margin ≥ −BOUND_TOL · max(1, rhs)`.
pub const BOUND_TOL: f64 = 1e-8;
/// Default search range for the free scale `s`.
pub const DEFAULT_S_RANGE: (f64, f64) = (1e-3, 1e3);
const S_GRID: usize = 64;
const S_LOG_WIDTH: f64 = 1e-6;
const FLAT_TOL: f64 = 1e-12;
const NORMAL_TOL: f64 = 1e-10;

/// A square matrix with a diagonal split `A₁₁ = A[..k, ..k]`, `A₂₂ = A[k.., k..]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedMatrix {
    a: ComplexMatrix,
    split: usize,
}

impl PartitionedMatrix {
    pub fn new(a: ComplexMatrix, split: usize) -> Result<Self> {
        let n = a.dim();
        if split == 0 || split >= n {
            return Err(Error::InvalidSplit { split, n });
        }
        Ok(Self { a, split })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn a11(&self) -> ComplexMatrix {
        self.a.principal_block(0, self.split)
    }

    pub fn a22(&self) -> ComplexMatrix {
        self.a.principal_block(self.split, self.a.dim())
    }

    pub fn a12(&self) -> ComplexMatrix {
        self.a.block(0, self.split, self.split, self.a.dim())
    }

    pub fn a21(&self) -> ComplexMatrix {
        self.a.block(self.split, self.a.dim(), 0, self.split)
    }
}

/// The bounds under comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundKind {
    /// `T(1)`; `A` psd.
    Lee,
    /// `T(1) + 2 T(tan α)`.
    Zpt,
    /// `2 T(√2/2)`; `α ≤ π/4`.
    Zpc,
    /// `T(1) + T(tan α)`; `A` normal.
    ZhaoNi,
    /// `T(sec α)`; `A` normal.
    Ylc,
    /// `T(sec² α)`.
    FuLiu,
    /// `2 T(sec α / 2)`.
    Mao,
    /// `T(1) + T(s tan α / 2) + T(tan α / 2s)`.
    Main(f64),
    /// `T(s sec α / 2) + T(sec α / 2s)`.
    M2(f64),
    /// `(1 + 2^{1−p} tan^p α)(‖|A₁₁|^p‖ + ‖|A₂₂|^p‖)`, independent of `f`.
    PowerCor(f64),
}

impl BoundKind {
    /// The fixed-parameter kinds, in display order.
    pub const FIXED: [BoundKind; 7] = [
        BoundKind::Lee,
        BoundKind::Zpt,
        BoundKind::Zpc,
        BoundKind::ZhaoNi,
        BoundKind::Ylc,
        BoundKind::FuLiu,
        BoundKind::Mao,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::Lee => "lee",
            BoundKind::Zpt => "zpt",
            BoundKind::Zpc => "zpc",
            BoundKind::ZhaoNi => "zhao_ni",
            BoundKind::Ylc => "ylc",
            BoundKind::FuLiu => "fu_liu",
            BoundKind::Mao => "mao",
            BoundKind::Main(_) => "main",
            BoundKind::M2(_) => "m2",
            BoundKind::PowerCor(_) => "power_cor",
        }
    }

    /// The free scale, for the two `s`-families.
    pub fn s(&self) -> Option<f64> {
        match self {
            BoundKind::Main(s) | BoundKind::M2(s) => Some(*s),
            _ => None,
        }
    }

    /// Same family with a different `s`; other kinds are returned unchanged.
    pub fn with_s(&self, s: f64) -> Self {
        match self {
            BoundKind::Main(_) => BoundKind::Main(s),
            BoundKind::M2(_) => BoundKind::M2(s),
            k => *k,
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKind::Main(s) | BoundKind::M2(s) => write!(f, "{}:{s}", self.name()),
            BoundKind::PowerCor(p) => write!(f, "power_cor:{p}"),
            k => f.write_str(k.name()),
        }
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "bound kind",
            input: s.into(),
        };
        let (head, arg) = match s.trim().split_once(':') {
            Some((h, a)) => (h, Some(a.trim().parse::<f64>().map_err(|_| bad())?)),
            None => (s.trim(), None),
        };
        let kind = match (head.to_ascii_lowercase().as_str(), arg) {
            ("lee", None) => BoundKind::Lee,
            ("zpt", None) => BoundKind::Zpt,
            ("zpc", None) => BoundKind::Zpc,
            ("zhao_ni", None) => BoundKind::ZhaoNi,
            ("ylc", None) => BoundKind::Ylc,
            ("fu_liu", None) => BoundKind::FuLiu,
            ("mao", None) => BoundKind::Mao,
            ("main", s) => BoundKind::Main(s.unwrap_or(1.0)),
            ("m2", s) => BoundKind::M2(s.unwrap_or(1.0)),
            ("power_cor", Some(p)) => BoundKind::PowerCor(p),
            _ => return Err(bad()),
        };
        Ok(kind)
    }
}

/// Outcome of one bound evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub norm: NormFamily,
    pub f: ConcaveFunction,
    pub s: Option<f64>,
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
    /// Generator seed of the instance, when it came from a campaign.
    pub seed: Option<u64>,
}

impl BoundReport {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// `margin ≥ −BOUND_TOL · max(1, rhs)`.
pub fn bound_holds(margin: f64, rhs: f64) -> bool {
    margin >= -BOUND_TOL * rhs.max(1.0)
}

/// A partitioned matrix with its spectral data precomputed, for evaluating
/// many bounds on one instance.
#[derive(Debug, Clone)]
pub struct BoundInstance {
    partition: PartitionedMatrix,
    sv: Vec<f64>,
    sv11: Vec<f64>,
    sv22: Vec<f64>,
    sector: Sectoriality,
    psd: bool,
    normal: bool,
}

impl BoundInstance {
    pub fn new(partition: PartitionedMatrix) -> Result<Self> {
        let a = partition.matrix();
        let sv = singular_values(a)?;
        let sv11 = singular_values(&partition.a11())?;
        let sv22 = singular_values(&partition.a22())?;
        let sector = sector_angle_auto(a)?;
        let (h, k) = cartesian_decompose(a)?;
        let fro = a.frobenius_norm().max(1.0);
        let psd = k.matrix().frobenius_norm() <= 1e-12 * fro && is_psd(&h, DEFAULT_PSD_TOL)?.is_psd;
        let normal = a.normality_defect() <= NORMAL_TOL * fro * fro;
        Ok(Self {
            partition,
            sv,
            sv11,
            sv22,
            sector,
            psd,
            normal,
        })
    }

    pub fn partition(&self) -> &PartitionedMatrix {
        &self.partition
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.sv
    }

    /// Minimal sector angle of `A`.
    pub fn sector(&self) -> Sectoriality {
        self.sector
    }

    pub fn is_psd(&self) -> bool {
        self.psd
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    /// `‖f(|A|)‖`.
    pub fn lhs(&self, f: &ConcaveFunction, norm: NormFamily) -> Result<f64> {
        let n = self.sv.len();
        norm.validate(n)?;
        let vals: Vec<f64> = self.sv.iter().map(|&x| f.eval(x)).collect();
        norm_value(&vals, norm)
    }

    fn block_term(&self, sv: &[f64], c: f64, f: &ConcaveFunction, norm: NormFamily) -> Result<f64> {
        let mut vals: Vec<f64> = sv.iter().map(|&x| f.eval(c * x)).collect();
        vals.resize(self.sv.len(), 0.0);
        norm_value(&vals, norm)
    }

    /// `T(c) = ‖f(c|A₁₁|)‖ + ‖f(c|A₂₂|)‖`.
    pub fn term(&self, c: f64, f: &ConcaveFunction, norm: NormFamily) -> Result<f64> {
        Ok(self.block_term(&self.sv11, c, f, norm)? + self.block_term(&self.sv22, c, f, norm)?)
    }

    fn check_angle(&self, alpha: SectorAngle) -> Result<()> {
        match self.sector {
            Sectoriality::NotSectorial => Err(Error::NotInSector),
            Sectoriality::Sectorial(min) if alpha.alpha() < min.alpha() - ANGLE_TOL => Err(Error::AngleTooSmall {
                alpha: alpha.alpha(),
                sector_angle: min.alpha(),
            }),
            _ => Ok(()),
        }
    }

    fn applicable(&self, kind: BoundKind, alpha: SectorAngle) -> Result<()> {
        let reject = |reason| {
            Err(Error::NotApplicable {
                kind: alloc::string::ToString::to_string(&kind),
                reason,
            })
        };
        match kind {
            BoundKind::Lee if !self.psd => reject("requires A positive semidefinite"),
            BoundKind::Zpc if alpha.alpha() > FRAC_PI_4 + ANGLE_TOL => reject("requires alpha <= pi/4"),
            BoundKind::ZhaoNi | BoundKind::Ylc if !self.normal => reject("requires A normal"),
            BoundKind::Main(s) | BoundKind::M2(s) if !(s.is_finite() && s > 0.0) => Err(Error::InvalidScale(s)),
            BoundKind::PowerCor(p) if !(p > 0.0 && p <= 1.0) => Err(Error::InvalidExponent(p)),
            _ => Ok(()),
        }
    }

    /// Right-hand side of `kind` at half-angle `alpha`.
    pub fn rhs(&self, alpha: SectorAngle, f: &ConcaveFunction, norm: NormFamily, kind: BoundKind) -> Result<f64> {
        norm.validate(self.sv.len())?;
        self.applicable(kind, alpha)?;
        self.check_angle(alpha)?;
        let (tan, sec) = (alpha.tan(), alpha.sec());
        let t = |c: f64| self.term(c, f, norm);
        Ok(match kind {
            BoundKind::Lee => t(1.0)?,
            BoundKind::Zpt => t(1.0)? + 2.0 * t(tan)?,
            BoundKind::Zpc => 2.0 * t(SQRT_2 / 2.0)?,
            BoundKind::ZhaoNi => t(1.0)? + t(tan)?,
            BoundKind::Ylc => t(sec)?,
            BoundKind::FuLiu => t(sec * sec)?,
            BoundKind::Mao => 2.0 * t(sec / 2.0)?,
            BoundKind::Main(s) => t(1.0)? + t(s * tan / 2.0)? + t(tan / (2.0 * s))?,
            BoundKind::M2(s) => t(s * sec / 2.0)? + t(sec / (2.0 * s))?,
            BoundKind::PowerCor(p) => {
                let pw = ConcaveFunction::power(p)?;
                let coeff = 1.0 + 2f64.powf(1.0 - p) * tan.powf(p);
                coeff * self.term(1.0, &pw, norm)?
            }
        })
    }

    /// Left side `‖f(|A|)‖` (or `‖|A|^p‖` for `power_cor`), the
    /// right side, and the verdict. `alpha = None` uses the minimal sector angle.
    pub fn verify(
        &self,
        alpha: Option<SectorAngle>,
        f: &ConcaveFunction,
        norm: NormFamily,
        kind: BoundKind,
    ) -> Result<BoundReport> {
        let alpha = self.resolve_alpha(alpha)?;
        let (f, rhs) = match kind {
            BoundKind::PowerCor(p) => {
                self.applicable(kind, alpha)?;
                (ConcaveFunction::power(p)?, self.rhs(alpha, f, norm, kind)?)
            }
            _ => (f.clone(), self.rhs(alpha, f, norm, kind)?),
        };
        let lhs = self.lhs(&f, norm)?;
        let margin = rhs - lhs;
        Ok(BoundReport {
            kind,
            norm,
            f,
            s: kind.s(),
            alpha: alpha.alpha(),
            lhs,
            rhs,
            margin,
            holds: bound_holds(margin, rhs),
            seed: None,
        })
    }

    /// The given angle, or the minimal sector angle.
    pub fn resolve_alpha(&self, alpha: Option<SectorAngle>) -> Result<SectorAngle> {
        match (alpha, self.sector) {
            (Some(a), _) => Ok(a),
            (None, Sectoriality::Sectorial(a)) => Ok(a),
            (None, Sectoriality::NotSectorial) => Err(Error::NotInSector),
        }
    }

    /// Grid-then-golden search for the `s` minimizing the right side of a
    /// `main` or `m2` bound over `[lo, hi]`.
    pub fn optimize_s(
        &self,
        alpha: SectorAngle,
        f: &ConcaveFunction,
        norm: NormFamily,
        kind: BoundKind,
        (lo, hi): (f64, f64),
    ) -> Result<SOptimum> {
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
            return Err(Error::InvalidRange { lo, hi });
        }
        if kind.s().is_none() {
            return Err(Error::NotApplicable {
                kind: alloc::string::ToString::to_string(&kind),
                reason: "has no free scale",
            });
        }
        let (llo, lhi) = (lo.ln(), hi.ln());
        let step = (lhi - llo) / (S_GRID - 1) as f64;
        let grid: Vec<f64> = (0..S_GRID).map(|j| llo + step * j as f64).collect();
        let values = grid
            .iter()
            .map(|&l| self.rhs(alpha, f, norm, kind.with_s(l.exp())))
            .collect::<Result<Vec<_>>>()?;
        let (best, &best_val) = values
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .expect("non-empty grid");
        let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let flat = top - best_val <= FLAT_TOL * top.abs().max(f64::MIN_POSITIVE);
        if flat {
            return Ok(SOptimum {
                s_star: grid[best].exp(),
                rhs_star: best_val,
                flat,
            });
        }
        let a = grid[best.saturating_sub(1)];
        let b = grid[(best + 1).min(S_GRID - 1)];
        let mut failure = None;
        let (l, v) = golden_min(
            |l| match self.rhs(alpha, f, norm, kind.with_s(l.exp())) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::INFINITY
                }
            },
            a,
            b,
            S_LOG_WIDTH,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let (s_star, rhs_star) = if v <= best_val { (l.exp(), v) } else { (grid[best].exp(), best_val) };
        Ok(SOptimum { s_star, rhs_star, flat })
    }

    /// Compares `main(s)` with `zpt` for `s ∈ [1, 2]`.
    pub fn dominance_over_zpt(
        &self,
        alpha: SectorAngle,
        f: &ConcaveFunction,
        norm: NormFamily,
        s: f64,
    ) -> Result<ZptDominance> {
        if !(1.0..=2.0).contains(&s) {
            return Err(Error::InvalidScale(s));
        }
        let main_rhs = self.rhs(alpha, f, norm, BoundKind::Main(s))?;
        let zpt_rhs = self.rhs(alpha, f, norm, BoundKind::Zpt)?;
        Ok(ZptDominance {
            main_rhs,
            zpt_rhs,
            holds: main_rhs <= zpt_rhs + 1e-10 * zpt_rhs.abs().max(1.0),
        })
    }

    /// The power-function bound, cross-checked against `main(1)` with
    /// `f = t^p`; a mismatch beyond `1e-10` relative is an alarm.
    pub fn power_bound_check(&self, alpha: SectorAngle, p: f64, norm: NormFamily) -> Result<BoundReport> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        let f = ConcaveFunction::power(p)?;
        let report = self.verify(Some(alpha), &f, norm, BoundKind::PowerCor(p))?;
        let main = self.rhs(alpha, &f, norm, BoundKind::Main(1.0))?;
        let gap = report.rhs - main;
        if gap.abs() > 1e-10 * main.abs().max(1.0) {
            return Err(Error::CounterexampleAlarm {
                check: "power_cor_vs_main",
                margin: -gap.abs(),
            });
        }
        Ok(report)
    }
}

/// Result of [`BoundInstance::optimize_s`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SOptimum {
    pub s_star: f64,
    pub rhs_star: f64,
    /// The right side varied by less than `1e-12` (relative) over the grid.
    pub flat: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZptDominance {
    pub main_rhs: f64,
    pub zpt_rhs: f64,
    pub holds: bool,
}

/// `‖f(|A|)‖`.
pub fn lhs_value(p: &PartitionedMatrix, f: &ConcaveFunction, norm: NormFamily) -> Result<f64> {
    let n = p.dim();
    norm.validate(n)?;
    let vals: Vec<f64> = singular_values(p.matrix())?.iter().map(|&x| f.eval(x)).collect();
    norm_value(&vals, norm)
}

/// Right side of `kind` for a one-off evaluation.
pub fn rhs_value(
    p: &PartitionedMatrix,
    alpha: SectorAngle,
    f: &ConcaveFunction,
    norm: NormFamily,
    kind: BoundKind,
) -> Result<f64> {
    BoundInstance::new(p.clone())?.rhs(alpha, f, norm, kind)
}

/// Bound check for a one-off evaluation; `alpha = None` uses the minimal
/// sector angle of `A`.
pub fn verify_bound(
    p: &PartitionedMatrix,
    alpha: Option<SectorAngle>,
    f: &ConcaveFunction,
    norm: NormFamily,
    kind: BoundKind,
) -> Result<BoundReport> {
    BoundInstance::new(p.clone())?.verify(alpha, f, norm, kind)
}
