use gruss_core::cpmaps::{random_unital_cp, KrausMap, MatrixMap};
use gruss_core::dilation::{build_stinespring, minimal_stinespring, verify_stinespring};
use gruss_core::gruss::block_gram;
use gruss_core::linalg::{c64, eigvalsh, op_norm, random_gaussian, random_unitary_with, ComplexMatrix};
use gruss_core::SplitMix64;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..5, 1usize..5, 1usize..9).prop_map(|(m, n, r)| (m, n, r.max(n.div_ceil(m))))
}

/// `X ↦ U*(X ⊗ I_s)U` as a Kraus map with operators `U*(I_m ⊗ e_i)`.
fn conjugated_amplification(m: usize, s: usize, rng: &mut SplitMix64) -> KrausMap {
    let u = random_unitary_with(m * s, rng);
    let kraus = (0..s)
        .map(|i| {
            let leg = ComplexMatrix::from_fn(m * s, m, |row, col| {
                if row == col * s + i {
                    c64(1.0, 0.0)
                } else {
                    c64(0.0, 0.0)
                }
            });
            u.adjoint() * leg
        })
        .collect();
    KrausMap::new(m, m * s, kraus).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn dilation_is_an_isometry_with_contractive_range(seed in any::<u64>(), (m, n, r) in dims()) {
        let map = random_unital_cp(m, n, r, seed).unwrap();
        for d in [build_stinespring(&map).unwrap(), minimal_stinespring(&map).unwrap()] {
            prop_assert!(d.isometry_defect() <= 1e-10);
            let v = d.isometry();
            let top = eigvalsh(&(v * v.adjoint())).into_iter().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(top <= 1.0 + 1e-10);
            prop_assert!(verify_stinespring(&d, &map, 3, seed).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn minimal_dimension_is_bounded(seed in any::<u64>(), (m, n, r) in dims()) {
        let map = random_unital_cp(m, n, r, seed).unwrap();
        let d = minimal_stinespring(&map).unwrap();
        prop_assert!(d.is_minimal());
        prop_assert!(d.dimension() <= m * m * n);
    }

    #[test]
    fn compressed_representation_has_psd_block_gram(seed in any::<u64>(), (m, n, r) in dims()) {
        let map = random_unital_cp(m, n, r, seed).unwrap();
        let d = minimal_stinespring(&map).unwrap();
        let mut rng = SplitMix64::new(seed ^ 5);
        let a = random_gaussian(m, m, &mut rng);
        let b = random_gaussian(m, m, &mut rng);
        prop_assert!(block_gram(&d, &a, &b, 1e-9).unwrap().verdict.psd);
    }

    #[test]
    fn conjugated_homomorphism_has_projection_defect(seed in any::<u64>(), m in 1usize..4, s in 1usize..4) {
        let map = conjugated_amplification(m, s, &mut SplitMix64::new(seed));
        prop_assert!(map.unitality_defect() <= 1e-10);
        let d = minimal_stinespring(&map).unwrap();
        let v = d.isometry();
        let p = ComplexMatrix::identity(d.dimension(), d.dimension()) - v * v.adjoint();
        prop_assert!(op_norm(&(&p * &p - &p)) <= 1e-9);
        prop_assert!(op_norm(&p) <= 1e-9);
    }
}
