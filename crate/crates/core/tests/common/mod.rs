#![allow(dead_code)]

use proptest::prelude::*;
use sectorial_core::{random_matrix, ComplexMatrix, ConcaveFunction, RandomKind};

pub fn kind_strategy() -> impl Strategy<Value = RandomKind> {
    prop_oneof![
        Just(RandomKind::Ginibre),
        Just(RandomKind::Unitary),
        Just(RandomKind::Psd),
        Just(RandomKind::Hermitian),
        log_angle().prop_map(RandomKind::Sectorial),
        log_angle().prop_map(RandomKind::NormalSectorial),
    ]
}

/// Log-uniform on `[0.01, 1.48]`.
pub fn log_angle() -> impl Strategy<Value = f64> {
    (0.01f64.ln()..1.48f64.ln()).prop_map(f64::exp)
}

/// Log-uniform on `[0.1, 10]`.
pub fn log_scale() -> impl Strategy<Value = f64> {
    (0.1f64.ln()..10f64.ln()).prop_map(f64::exp)
}

pub fn function_strategy() -> impl Strategy<Value = ConcaveFunction> {
    prop_oneof![
        (0.05f64..=1.0).prop_map(|p| ConcaveFunction::power(p).unwrap()),
        (0.1f64..10.0).prop_map(|c| ConcaveFunction::log1p(c).unwrap()),
        (0.1f64..5.0).prop_map(|c| ConcaveFunction::cap(c).unwrap()),
        (0.0f64..2.0, 0.0f64..2.0).prop_map(|(a, b)| ConcaveFunction::affine(a, b).unwrap()),
        (0.1f64..5.0).prop_map(|c| ConcaveFunction::rational(c).unwrap()),
        Just(ConcaveFunction::piecewise(vec![(0.0, 0.0), (1.0, 2.0), (3.0, 3.0)]).unwrap()),
    ]
}

pub fn sectorial(alpha: f64, n: usize, seed: u64) -> ComplexMatrix {
    random_matrix(RandomKind::Sectorial(alpha), n, seed).unwrap()
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}
