//! Unitarily invariant norms as symmetric gauge functions of singular values,
//! weak majorization and Fan dominance.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // inherent f64 math wins when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::svd::singular_values;

/// Norm selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormFamily {
    /// Sum of the `k` largest singular values.
    KyFan(usize),
    /// `(Σ σ_j^p)^{1/p}`; `p = ∞` is the operator norm.
    Schatten(f64),
    Operator,
    Trace,
}

/// Schatten exponents reported alongside the Ky Fan certificate.
pub const SCHATTEN_SPOT_CHECKS: [f64; 5] = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];

impl NormFamily {
    /// Every Ky Fan norm for dimension `n`.
    pub fn all_ky_fan(n: usize) -> Vec<NormFamily> {
        (1..=n).map(NormFamily::KyFan).collect()
    }

    /// Ky Fan family plus the Schatten spot checks.
    pub fn certificate_family(n: usize) -> Vec<NormFamily> {
        let mut v = Self::all_ky_fan(n);
        v.extend(SCHATTEN_SPOT_CHECKS.iter().map(|&p| NormFamily::Schatten(p)));
        v
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            NormFamily::KyFan(k) if k == 0 || k > n => {
                Err(Error::InvalidSelector(alloc::format!("kyfan:{k} with n = {n}")))
            }
            NormFamily::Schatten(p) if p.is_nan() || p < 1.0 => {
                Err(Error::InvalidSelector(alloc::format!("schatten:{p}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for NormFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormFamily::KyFan(k) => write!(f, "kyfan:{k}"),
            NormFamily::Schatten(p) if p.is_infinite() => f.write_str("schatten:inf"),
            NormFamily::Schatten(p) => write!(f, "schatten:{p}"),
            NormFamily::Operator => f.write_str("op"),
            NormFamily::Trace => f.write_str("trace"),
        }
    }
}

/// A norm specification from the command line: a single norm or the whole Ky Fan family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    AllKyFan,
    Single(NormFamily),
}

impl NormSpec {
    pub fn expand(&self, n: usize) -> Vec<NormFamily> {
        match self {
            NormSpec::AllKyFan => NormFamily::all_ky_fan(n),
            NormSpec::Single(f) => alloc::vec![*f],
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::AllKyFan => f.write_str("kyfan:all"),
            NormSpec::Single(n) => n.fmt(f),
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    /// `kyfan:all`, `kyfan:3`, `schatten:2`, `schatten:inf`, `op`, `trace`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "norm spec",
            input: s.to_string(),
        };
        let s = s.trim();
        match s {
            "op" | "operator" => return Ok(NormSpec::Single(NormFamily::Operator)),
            "trace" => return Ok(NormSpec::Single(NormFamily::Trace)),
            "kyfan:all" => return Ok(NormSpec::AllKyFan),
            _ => {}
        }
        let (name, arg) = s.split_once(':').ok_or_else(bad)?;
        match name {
            "kyfan" => {
                let k: usize = arg.trim().parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                Ok(NormSpec::Single(NormFamily::KyFan(k)))
            }
            "schatten" => {
                let p = match arg.trim() {
                    "inf" | "infinity" => f64::INFINITY,
                    a => a.parse::<f64>().map_err(|_| bad())?,
                };
                if p.is_nan() || p < 1.0 {
                    return Err(Error::InvalidSelector(String::from(s)));
                }
                Ok(NormSpec::Single(NormFamily::Schatten(p)))
            }
            _ => Err(bad()),
        }
    }
}

impl FromStr for NormFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<NormSpec>()? {
            NormSpec::Single(f) => Ok(f),
            NormSpec::AllKyFan => Err(Error::InvalidSelector(s.to_string())),
        }
    }
}

/// Norm value from singular values sorted descending.
pub fn norm_value(sv: &[f64], family: NormFamily) -> Result<f64> {
    family.validate(sv.len())?;
    Ok(match family {
        NormFamily::KyFan(k) => sv[..k].iter().sum(),
        NormFamily::Trace => sv.iter().sum(),
        NormFamily::Operator => sv.first().copied().unwrap_or(0.0),
        NormFamily::Schatten(p) if p.is_infinite() => sv.first().copied().unwrap_or(0.0),
        NormFamily::Schatten(1.0) => sv.iter().sum(),
        NormFamily::Schatten(p) => {
            let top = sv.iter().fold(0.0_f64, |m, &x| m.max(x));
            if top == 0.0 {
                0.0
            } else {
                top * sv.iter().map(|&x| (x / top).powf(p)).sum::<f64>().powf(1.0 / p)
            }
        }
    })
}

/// Sorted-descending copy.
pub fn sorted_desc(a: &[f64]) -> Vec<f64> {
    let mut v = a.to_vec();
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

/// `min_k (Σ_{j≤k} b_j − Σ_{j≤k} a_j)` over sorted-descending copies; the
/// shorter list is padded with zeros.
pub fn weak_majorization_margin(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    let mut a = sorted_desc(a);
    let mut b = sorted_desc(b);
    a.resize(n, 0.0);
    b.resize(n, 0.0);
    let (mut sa, mut sb) = (0.0, 0.0);
    let mut margin = f64::INFINITY;
    for (x, y) in a.iter().zip(&b) {
        sa += x;
        sb += y;
        margin = margin.min(sb - sa);
    }
    margin
}

/// `a ≺_w b`: every leading partial sum of `a` is at most that of `b` plus `tol`.
pub fn weak_majorize(a: &[f64], b: &[f64], tol: f64) -> bool {
    weak_majorization_margin(a, b) >= -tol
}

/// Elementwise sum of two descending lists (zero padded).
pub fn add_desc(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|j| a.get(j).copied().unwrap_or(0.0) + b.get(j).copied().unwrap_or(0.0))
        .collect()
}

/// Outcome of a Fan-dominance test between two matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Dominance {
    pub majorized: bool,
    /// Smallest `‖B‖ − ‖A‖` over the certificate family.
    pub worst_norm_gap: f64,
    pub worst_norm: NormFamily,
}

impl Dominance {
    pub fn holds(&self) -> bool {
        self.majorized
    }
}

/// `‖A‖ ≤ ‖B‖` for every unitarily invariant norm, certified by `σ(A) ≺_w σ(B)`.
/// The Ky Fan and Schatten `{1, 1.5, 2, 3, ∞}` gaps are evaluated explicitly.
pub fn ui_dominance(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<Dominance> {
    a.check_same_dim(b)?;
    let sa = singular_values(a)?;
    let sb = singular_values(b)?;
    Ok(dominance_from_sv(&sa, &sb, tol))
}

pub(crate) fn dominance_from_sv(sa: &[f64], sb: &[f64], tol: f64) -> Dominance {
    let n = sa.len().max(sb.len());
    let majorized = weak_majorize(sa, sb, tol);
    let mut pa = sorted_desc(sa);
    let mut pb = sorted_desc(sb);
    pa.resize(n, 0.0);
    pb.resize(n, 0.0);
    let mut worst_norm_gap = f64::INFINITY;
    let mut worst_norm = NormFamily::Operator;
    for fam in NormFamily::certificate_family(n) {
        let gap = norm_value(&pb, fam).unwrap() - norm_value(&pa, fam).unwrap();
        if gap < worst_norm_gap {
            worst_norm_gap = gap;
            worst_norm = fam;
        }
    }
    let slack = n as f64 * tol;
    Dominance {
        majorized: majorized && worst_norm_gap >= -slack,
        worst_norm_gap,
        worst_norm,
    }
}
