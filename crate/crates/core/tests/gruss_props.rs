use gruss_core::cpmaps::{random_unital_cp, MatrixMap};
use gruss_core::gruss::{
    block_gram, bpr_constant, bpr_not_above_classical, check_gruss_norm, check_gruss_operator, kadison_defect,
    CheckOptions,
};
use gruss_core::linalg::{op_norm, random_gaussian, random_hermitian, ComplexMatrix};
use gruss_core::norms::{identity_norm, GaugeSpec};
use gruss_core::orbit::{tight_ball, BallSpec};
use gruss_core::SplitMix64;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..5, 1usize..5, 1usize..5).prop_map(|(m, n, r)| (m, n, r.max(n.div_ceil(m))))
}

fn product_defect(map: &dyn MatrixMap, a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    map.apply(&(a * b)).unwrap() - map.apply(a).unwrap() * map.apply(b).unwrap()
}

/// A ball around `a` slightly larger than the tight one.
fn loose_ball(a: &ComplexMatrix, rng: &mut SplitMix64) -> BallSpec {
    let tight = tight_ball(a).unwrap();
    let c = tight.center();
    let z = rng.complex_normal();
    let half = z / z.norm() * (tight.radius() * (1.0 + rng.next_f64()) + 1e-3);
    BallSpec::new(c - half, c + half)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn product_defect_ignores_scalar_shifts(seed in any::<u64>(), (m, n, r) in dims()) {
        let map = random_unital_cp(m, n, r, seed).unwrap();
        let mut rng = SplitMix64::new(seed ^ 7);
        let a = random_gaussian(m, m, &mut rng);
        let b = random_gaussian(m, m, &mut rng);
        let id = ComplexMatrix::identity(m, m);
        let (lambda, mu) = (rng.complex_normal(), rng.complex_normal());
        let shifted = product_defect(&map, &(&a + &id * lambda), &(&b + &id * mu));
        let base = product_defect(&map, &a, &b);
        let scale = (1.0 + op_norm(&a) + lambda.norm()) * (1.0 + op_norm(&b) + mu.norm());
        prop_assert!(op_norm(&(shifted - &base)) <= 1e-10 * scale);
    }

    #[test]
    fn operator_verdict_agrees_with_norm_verdict(seed in any::<u64>(), (m, n, r) in dims()) {
        let map = random_unital_cp(m, n, r, seed).unwrap();
        let mut rng = SplitMix64::new(seed ^ 8);
        let a = random_gaussian(m, m, &mut rng);
        let b = random_gaussian(m, m, &mut rng);
        let (ball_a, ball_b) = (loose_ball(&a, &mut rng), loose_ball(&b, &mut rng));
        let report = check_gruss_operator(&map, &a, &b, &ball_a, &ball_b, &CheckOptions::default()).unwrap();
        prop_assert!(report.satisfied);
        prop_assert_eq!(&report.details["verdicts_agree"], &serde_json::Value::Bool(true));
    }

    #[test]
    fn block_gram_corner_is_the_kadison_defect(seed in any::<u64>(), (m, n, r) in dims()) {
        let map = random_unital_cp(m, n, r, seed).unwrap();
        let mut rng = SplitMix64::new(seed ^ 9);
        let a = random_gaussian(m, m, &mut rng);
        let b = random_gaussian(m, m, &mut rng);
        let opts = CheckOptions::default();
        let gram = block_gram(&map, &a, &b, opts.precondition_tol).unwrap();
        prop_assert!(gram.verdict.psd);
        let kadison = kadison_defect(&map, &a, &opts).unwrap();
        prop_assert_eq!(&gram.matrix.view((0, 0), (n, n)).into_owned(), &kadison.defect);
        prop_assert!(kadison.verdict.psd);
    }

    #[test]
    fn hermitian_rhs_from_balls_matches_diameters(seed in any::<u64>(), (m, n, r) in dims()) {
        let map = random_unital_cp(m, n, r, seed).unwrap();
        let mut rng = SplitMix64::new(seed ^ 10);
        let a = random_hermitian(m, &mut rng);
        let b = random_hermitian(m, &mut rng);
        let (ball_a, ball_b) = (tight_ball(&a).unwrap(), tight_ball(&b).unwrap());
        for gauge in GaugeSpec::standard_set() {
            let report = check_gruss_norm(&map, &a, &b, &gauge, false, &CheckOptions::default()).unwrap();
            prop_assert!(report.satisfied);
            let from_balls = 0.25 * identity_norm(&gauge, n) * identity_norm(&gauge, m * m * n) * ball_a.width() * ball_b.width();
            prop_assert!((report.rhs - from_balls).abs() <= 1e-10 * (1.0 + report.rhs));
        }
    }
}

#[test]
fn bpr_never_exceeds_classical_constant() {
    for n in 1..=5000usize {
        assert!(bpr_not_above_classical(n));
        assert!(bpr_constant(n) <= 0.25);
    }
}
