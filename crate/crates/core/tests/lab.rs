mod common;

use common::*;
use proptest::prelude::*;
use sectorial_core::lab::{
    bourin_uchiyama_consequence, fan_hoffman_check, im_part_bound, block_modulus_check, modulus_bound,
    re_modulus_dominance, thompson_consequence, triangle_modulus_chain, weyl_norm_monotone,
};
use sectorial_core::{random_matrix, ComplexMatrix, ConcaveFunction, HermitianMatrix, RandomKind, SectorAngle};

/// `[[G₁G₁*, G₁G₂*], [G₂G₁*, G₂G₂*]]` is psd by construction.
fn psd_block(n: usize, seed: u64, ridge: f64) -> (HermitianMatrix, ComplexMatrix, HermitianMatrix) {
    let g1 = random_matrix(RandomKind::Ginibre, n, seed).unwrap();
    let g2 = random_matrix(RandomKind::Ginibre, n, seed.wrapping_add(1)).unwrap();
    let ridge = HermitianMatrix::identity(n).scale(ridge);
    let a = HermitianMatrix::symmetrize(&g1 * &g1.adjoint()).add(&ridge);
    let b = HermitianMatrix::symmetrize(&g2 * &g2.adjoint()).add(&ridge);
    (a, &g1 * &g2.adjoint(), b)
}

#[test]
fn tight_block_has_zero_residual() {
    for seed in 0..50 {
        let p = HermitianMatrix::symmetrize(random_matrix(RandomKind::Psd, 6, seed).unwrap())
            .add(&HermitianMatrix::identity(6).scale(0.05));
        let (r1, r2) = block_modulus_check(&p, p.matrix(), &p, 1.0).unwrap();
        assert!(r1.residual_min_eig.abs() <= 1e-10, "{}", r1.residual_min_eig);
        assert!(r2.residual_min_eig.abs() <= 1e-10);
    }
}

#[test]
fn zero_imaginary_part_gives_identity_witness() {
    let a = random_matrix(RandomKind::Psd, 5, 3).unwrap();
    let r = im_part_bound(&a, SectorAngle::zero(), 2.0).unwrap();
    assert_eq!(r.witnesses[0].unitary, ComplexMatrix::identity(5));
    assert!(r.holds && r.residual_min_eig.abs() < 1e-15);
}

#[test]
fn positive_definite_modulus_bound_is_tight() {
    let a = HermitianMatrix::symmetrize(random_matrix(RandomKind::Psd, 5, 8).unwrap())
        .add(&HermitianMatrix::identity(5).scale(0.1));
    let r = modulus_bound(a.matrix(), SectorAngle::zero(), 1.0).unwrap();
    assert!(r.residual_min_eig.abs() <= 1e-10, "{}", r.residual_min_eig);
}

#[test]
fn consequence_campaigns() {
    let families = [
        ConcaveFunction::identity(),
        ConcaveFunction::power(0.5).unwrap(),
        ConcaveFunction::log1p(1.0).unwrap(),
        ConcaveFunction::cap(1.0).unwrap(),
        ConcaveFunction::affine(0.5, 1.0).unwrap(),
        ConcaveFunction::rational(2.0).unwrap(),
    ];
    for seed in 0..200u64 {
        let n = 2 + seed as usize % 7;
        let a = random_matrix(RandomKind::Ginibre, n, seed).unwrap();
        let b = random_matrix(RandomKind::Ginibre, n, seed + 1000).unwrap();
        thompson_consequence(&a, &b).unwrap().require().unwrap();
        fan_hoffman_check(&a).unwrap().require().unwrap();

        let f = &families[seed as usize % families.len()];
        let p = HermitianMatrix::symmetrize(random_matrix(RandomKind::Psd, n, seed).unwrap());
        let q = HermitianMatrix::symmetrize(random_matrix(RandomKind::Psd, n, seed + 7).unwrap());
        bourin_uchiyama_consequence(f, &p, &q).unwrap().require().unwrap();
        weyl_norm_monotone(f, &p.add(&q), &p).unwrap().require().unwrap();

        let s = sectorial(0.01 + 1.39 * seed as f64 / 200.0, n, seed);
        re_modulus_dominance(f, &s).unwrap().require().unwrap();
    }
}

#[test]
fn bourin_uchiyama_is_equality_for_zero_summand() {
    let f = ConcaveFunction::power(0.5).unwrap();
    let p = HermitianMatrix::symmetrize(random_matrix(RandomKind::Psd, 4, 2).unwrap());
    let c = bourin_uchiyama_consequence(&f, &p, &HermitianMatrix::zeros(4)).unwrap();
    assert!(c.min_margin.abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn block_bound_holds(n in 1usize..=12, seed in any::<u64>(), s in log_scale(), ridge in prop_oneof![Just(0.0), 0.0f64..1.0]) {
        let (a, x, b) = psd_block(n, seed, ridge);
        let (r1, r2) = block_modulus_check(&a, &x, &b, s).unwrap();
        prop_assert!(r1.holds && r2.holds, "{} {}", r1.residual_min_eig, r2.residual_min_eig);
        prop_assert!(r1.max_unitarity_defect() <= 1e-11 && r2.max_unitarity_defect() <= 1e-11);
    }

    #[test]
    fn sectorial_witnesses_hold(alpha in log_angle(), n in 2usize..=12, seed in any::<u64>(), s in log_scale()) {
        let a = sectorial(alpha, n, seed);
        let angle = SectorAngle::new(alpha).unwrap();
        let im_part = im_part_bound(&a, angle, s).unwrap();
        let modulus = modulus_bound(&a, angle, s).unwrap();
        prop_assert!(im_part.holds, "im_part residual {}", im_part.residual_min_eig);
        prop_assert!(modulus.holds, "modulus residual {}", modulus.residual_min_eig);
        prop_assert!(im_part.max_unitarity_defect() <= 1e-11 && modulus.max_unitarity_defect() <= 1e-11);
        triangle_modulus_chain(&a, angle, s).unwrap().require().unwrap();
    }

    #[test]
    fn im_part_residual_is_symmetric_in_s(alpha in log_angle(), n in 2usize..=10, seed in any::<u64>(), s in log_scale()) {
        let a = sectorial(alpha, n, seed);
        let angle = SectorAngle::new(alpha).unwrap();
        let r = im_part_bound(&a, angle, s).unwrap().residual_min_eig;
        let r_inv = im_part_bound(&a, angle, 1.0 / s).unwrap().residual_min_eig;
        prop_assert!((r - r_inv).abs() <= 1e-9 * (s + 1.0 / s) * a.max_abs().max(1.0), "{} vs {}", r, r_inv);
    }

    #[test]
    fn normal_sectorial_witnesses_hold(alpha in log_angle(), n in 2usize..=10, seed in any::<u64>(), s in log_scale()) {
        let a = random_matrix(RandomKind::NormalSectorial(alpha), n, seed).unwrap();
        let angle = SectorAngle::new(alpha).unwrap();
        prop_assert!(im_part_bound(&a, angle, s).unwrap().holds);
        prop_assert!(modulus_bound(&a, angle, s).unwrap().holds);
    }

    #[test]
    fn consequences_hold_for_all_functions(f in function_strategy(), n in 1usize..=10, s1 in any::<u64>(), s2 in any::<u64>(), alpha in log_angle()) {
        let p = HermitianMatrix::symmetrize(random_matrix(RandomKind::Psd, n, s1).unwrap());
        let q = HermitianMatrix::symmetrize(random_matrix(RandomKind::Psd, n, s2).unwrap());
        prop_assert!(bourin_uchiyama_consequence(&f, &p, &q).unwrap().holds);
        prop_assert!(weyl_norm_monotone(&f, &p.add(&q), &q).unwrap().holds);
        prop_assert!(re_modulus_dominance(&f, &sectorial(alpha, n.max(2), s1)).unwrap().holds);
    }
}
