//! Bound-versus-`s` curves as CSV: `s,kind,norm,lhs,rhs,margin`.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use sectorial_core::norms::NormFamily;
use sectorial_core::{BoundInstance, BoundKind, ConcaveFunction, Error, PartitionedMatrix, SectorAngle};

use crate::error::HarnessError;
use crate::io::format_f64;

/// Placeholder in the `s` column for bounds without a free scale.
pub const NO_SCALE: &str = "—";

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub s: Option<f64>,
    pub kind: String,
    pub norm: NormFamily,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// `points` log-uniform values from `lo` to `hi`, both included.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, Error> {
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) || points < 2 {
        return Err(Error::InvalidRange { lo, hi });
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..points)
        .map(|j| match j {
            0 => lo,
            j if j == points - 1 => hi,
            j => (a + (b - a) * j as f64 / (points - 1) as f64).exp(),
        })
        .collect())
}

fn label(kind: BoundKind) -> String {
    match kind {
        BoundKind::Main(_) | BoundKind::M2(_) => kind.name().to_string(),
        k => k.to_string(),
    }
}

/// Rows for every kind: `s`-families once per grid point, the rest once.
/// Sorted by kind label, then `s`.
pub fn curve_rows(
    inst: &BoundInstance,
    alpha: SectorAngle,
    f: &ConcaveFunction,
    norm: NormFamily,
    kinds: &[BoundKind],
    s_grid: &[f64],
) -> Result<Vec<CurveRow>, Error> {
    let mut kinds: Vec<BoundKind> = kinds.to_vec();
    kinds.sort_by_key(|k| label(*k));
    kinds.dedup_by_key(|k| label(*k));
    let mut rows = Vec::new();
    for kind in kinds {
        let points: Vec<BoundKind> = match kind.s() {
            Some(_) => s_grid.iter().map(|&s| kind.with_s(s)).collect(),
            None => vec![kind],
        };
        for k in points {
            let r = inst.verify(Some(alpha), f, norm, k)?;
            rows.push(CurveRow {
                s: k.s(),
                kind: label(k),
                norm,
                lhs: r.lhs,
                rhs: r.rhs,
                margin: r.margin,
            });
        }
    }
    rows.sort_by(|x, y| {
        x.kind
            .cmp(&y.kind)
            .then(x.s.unwrap_or(f64::NEG_INFINITY).total_cmp(&y.s.unwrap_or(f64::NEG_INFINITY)))
    });
    Ok(rows)
}

pub fn write_curve_csv(rows: &[CurveRow], w: impl Write) -> Result<(), HarnessError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["s", "kind", "norm", "lhs", "rhs", "margin"])?;
    for r in rows {
        let s = r.s.map_or_else(|| NO_SCALE.to_string(), format_f64);
        out.write_record([
            s,
            r.kind.clone(),
            r.norm.to_string(),
            format_f64(r.lhs),
            format_f64(r.rhs),
            format_f64(r.margin),
        ])?;
    }
    out.flush().map_err(|source| HarnessError::Io {
        path: "<csv>".into(),
        source,
    })?;
    Ok(())
}

/// Writes the curve CSV to `out_path`; returns the number of data rows.
pub fn emit_curve(
    p: &PartitionedMatrix,
    alpha: Option<SectorAngle>,
    f: &ConcaveFunction,
    norm: NormFamily,
    kinds: &[BoundKind],
    s_grid: &[f64],
    out_path: &Path,
) -> Result<usize, HarnessError> {
    let inst = BoundInstance::new(p.clone())?;
    let alpha = inst.resolve_alpha(alpha)?;
    let rows = curve_rows(&inst, alpha, f, norm, kinds, s_grid)?;
    let file = File::create(out_path).map_err(|source| HarnessError::Io {
        path: out_path.display().to_string(),
        source,
    })?;
    write_curve_csv(&rows, file)?;
    Ok(rows.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = log_grid(0.01, 100.0, 64).unwrap();
        assert_eq!(g.len(), 64);
        assert_eq!((g[0], g[63]), (0.01, 100.0));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(log_grid(1.0, 1.0, 8).is_err());
    }
}
