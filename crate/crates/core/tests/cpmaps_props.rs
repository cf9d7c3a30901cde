use gruss_core::cpmaps::{amplify, conditional_expectation, random_unital_cp, reduction_map, MatrixMap};
use gruss_core::gruss::block_gram;
use gruss_core::linalg::{
    c64, eigh_unchecked, is_psd, op_norm, psd_verdict_unchecked, random_gaussian, random_hermitian, random_isometry,
    random_unitary_with, ComplexMatrix,
};
use gruss_core::SplitMix64;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..5, 1usize..5, 1usize..5).prop_map(|(m, n, r)| (m, n, r.max(n.div_ceil(m))))
}

fn gram(dim: usize, rng: &mut SplitMix64) -> ComplexMatrix {
    let g = random_gaussian(dim, dim, rng);
    g.adjoint() * g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn maps_preserve_adjoints(seed in any::<u64>(), (m, n, r) in dims()) {
        let map = random_unital_cp(m, n, r, seed).unwrap();
        let x = random_gaussian(m, m, &mut SplitMix64::new(seed ^ 1));
        let lhs = map.apply(&x.adjoint()).unwrap();
        let rhs = map.apply(&x).unwrap().adjoint();
        prop_assert!(op_norm(&(lhs - rhs)) <= 1e-12 * (1.0 + op_norm(&x)));
    }

    #[test]
    fn kadison_inequality_holds(seed in any::<u64>(), (m, n, r) in dims()) {
        let map = random_unital_cp(m, n, r, seed).unwrap();
        let a = random_gaussian(m, m, &mut SplitMix64::new(seed ^ 2));
        let defect = map.apply(&(a.adjoint() * &a)).unwrap() - map.apply(&a.adjoint()).unwrap() * map.apply(&a).unwrap();
        let defect = (&defect + defect.adjoint()) * c64(0.5, 0.0);
        prop_assert!(is_psd(&defect, 1e-9).unwrap().psd);
    }

    #[test]
    fn amplifications_stay_positive(seed in any::<u64>(), (m, n, r) in dims(), k in 1usize..5) {
        let map = random_unital_cp(m, n, r, seed).unwrap();
        let x = gram(k * m, &mut SplitMix64::new(seed ^ 3));
        let y = amplify(&map, k).unwrap().apply(&x).unwrap();
        prop_assert!(psd_verdict_unchecked(&y, 1e-9).psd);
    }

    #[test]
    fn reduction_map_is_schwarz_on_commutative_algebra(seed in any::<u64>(), d in 2usize..5) {
        let map = reduction_map(d, true).unwrap();
        let mut rng = SplitMix64::new(seed);
        let a = random_hermitian(d, &mut rng);
        let eig = eigh_unchecked(&a);
        // Elements of C*(A, I) are functions of A: diagonal in its eigenbasis.
        let mut element = || {
            let f: Vec<_> = (0..d).map(|_| rng.complex_normal()).collect();
            let diag = ComplexMatrix::from_fn(d, d, |i, j| if i == j { f[i] } else { c64(0.0, 0.0) });
            &eig.vectors * diag * eig.vectors.adjoint()
        };
        let (x, y) = (element(), element());
        prop_assert!(block_gram(&map, &x, &y, 1e-9).unwrap().verdict.psd);
    }

    #[test]
    fn conditional_expectation_is_unital_positive_and_fixes_scalars(seed in any::<u64>(), dim in 1usize..4, parts in 1usize..4) {
        let mut rng = SplitMix64::new(seed);
        let sizes: Vec<usize> = (0..parts).map(|_| 1 + rng.index(3)).collect();
        let total: usize = sizes.iter().sum();
        prop_assume!(total >= dim);
        let v = random_isometry(total, dim, &mut rng);
        let mut offset = 0;
        let c: Vec<ComplexMatrix> = sizes
            .iter()
            .map(|&s| {
                let block = v.rows(offset, s).into_owned();
                offset += s;
                block
            })
            .collect();
        let ids: Vec<ComplexMatrix> = sizes.iter().map(|&s| ComplexMatrix::identity(s, s)).collect();
        let unit = conditional_expectation(&c, &ids, 1e-10).unwrap();
        prop_assert!(op_norm(&(unit - ComplexMatrix::identity(dim, dim))) <= 1e-10);

        let psd: Vec<ComplexMatrix> = sizes.iter().map(|&s| gram(s, &mut rng)).collect();
        prop_assert!(is_psd(&conditional_expectation(&c, &psd, 1e-10).unwrap(), 1e-9).unwrap().psd);

        let z = rng.complex_normal();
        let scalars: Vec<ComplexMatrix> = ids.iter().map(|i| i * z).collect();
        let once = conditional_expectation(&c, &scalars, 1e-10).unwrap();
        prop_assert!(op_norm(&(&once - ComplexMatrix::identity(dim, dim) * z)) <= 1e-10 * (1.0 + z.norm()));

        // Conjugating the family by a unitary keeps it normalized.
        let u = random_unitary_with(dim, &mut rng);
        let rotated: Vec<ComplexMatrix> = c.iter().map(|cj| cj * &u).collect();
        prop_assert!(conditional_expectation(&rotated, &ids, 1e-10).is_ok());
    }
}
