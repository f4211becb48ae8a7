//! Golden-section search on a bracket.

/// `(x, f(x))` at the approximate minimizer of `f` on `[lo, hi]`, shrinking the
/// bracket until it is narrower than `width`. Assumes local unimodality.
pub fn golden_min(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, width: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // 200 steps shrink any finite bracket far below f64 resolution.
    for _ in 0..200 {
        if b - a <= width {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximizing counterpart of [`golden_min`].
pub fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, width: f64) -> (f64, f64) {
    let (x, v) = golden_min(|t| -f(t), lo, hi, width);
    (x, -v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_vertex() {
        let (x, v) = golden_min(|t| (t - 0.3) * (t - 0.3) + 2.0, -1.0, 4.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn maximizes() {
        let (x, _) = golden_max(|t| -(t + 1.0) * (t + 1.0), -3.0, 2.0, 1e-10);
        assert!((x + 1.0).abs() < 1e-7);
    }
}
