use metaplectic::discrete::decompose_generators;
use metaplectic::distributions::TfGrid;
use metaplectic::grid::{DiscreteSignal, GridSpec};
use metaplectic::norms::{mixed_norm, MixedNormParams, Weight};
use metaplectic::random::{random_cg_triple, random_shift_invertible, random_symplectic};
use metaplectic::shift_invertible::{alpha, compute_ma, factorize};
use metaplectic::symplectic::{blocks, is_symplectic, submatrices, symplectic_inverse};
use metaplectic::RatMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn tf_grid(values: &[(f64, f64)]) -> TfGrid {
    let spec = GridSpec::self_dual(2, 16).unwrap();
    let samples = values.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
    TfGrid::new(DiscreteSignal::new(spec, samples).unwrap(), "test").unwrap()
}

fn scaled(f: &TfGrid, c: f64) -> TfGrid {
    let s = f.values().samples().iter().map(|z| z * c).collect();
    TfGrid::new(DiscreteSignal::new(*f.values().spec(), s).unwrap(), "test").unwrap()
}

fn summed(f: &TfGrid, g: &TfGrid) -> TfGrid {
    let s = f.values().samples().iter().zip(g.values().samples()).map(|(a, b)| a + b).collect();
    TfGrid::new(DiscreteSignal::new(*f.values().spec(), s).unwrap(), "test").unwrap()
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![1.0..6.0, Just(f64::INFINITY)]
}

fn samples() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2.0..2.0, -2.0..2.0), 256)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn triple_round_trips_exactly(seed in any::<u64>(), d in 1usize..=2) {
        let t = random_cg_triple(&mut rng(seed), d);
        let a = alpha(&t).unwrap();
        prop_assert!(is_symplectic(&a, 2 * d, 0.0).unwrap());
        prop_assert_eq!(factorize(&a).unwrap(), t);
    }

    #[test]
    fn factorization_data_is_consistent(seed in any::<u64>(), d in 1usize..=2) {
        let (a, _) = random_shift_invertible(&mut rng(seed), d).unwrap();
        prop_assert!(compute_ma(&a).unwrap().is_symmetric(0.0));
        let t = factorize(&a).unwrap();
        prop_assert!(t.c.is_symmetric(0.0));
        prop_assert!(is_symplectic(&t.s, d, 0.0).unwrap());
        prop_assert_eq!(alpha(&t).unwrap(), a);
    }

    #[test]
    fn submatrix_relations_hold(seed in any::<u64>(), d in 1usize..=2) {
        let a = random_symplectic(&mut rng(seed), 2 * d, 6);
        let sub = submatrices(&a).unwrap();
        prop_assert!(sub.relations_hold(0.0).unwrap());
        prop_assert_eq!(sub.assemble().unwrap(), a.clone());
        prop_assert_eq!(blocks(&a).unwrap().reassemble(), a);
    }

    #[test]
    fn symplectic_inverse_is_inverse(seed in any::<u64>(), d in 1usize..=3) {
        let s = random_symplectic(&mut rng(seed), d, 6);
        let inv = symplectic_inverse(&s).unwrap();
        prop_assert_eq!(s.mul(&inv).unwrap(), RatMatrix::identity(2 * d));
    }

    #[test]
    fn generator_words_reconstruct(seed in any::<u64>(), d in 1usize..=2) {
        let s = random_symplectic(&mut rng(seed), d, 8);
        let w = decompose_generators(&s).unwrap();
        prop_assert_eq!(w.product().unwrap(), s);
    }

    #[test]
    fn mixed_norm_is_homogeneous(v in samples(), p in exponent(), q in exponent(), c in -3.0..3.0f64) {
        let f = tf_grid(&v);
        let params = MixedNormParams::unweighted(p, q).unwrap();
        let lhs = mixed_norm(&scaled(&f, c), &params).unwrap();
        let rhs = c.abs() * mixed_norm(&f, &params).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs));
    }

    #[test]
    fn mixed_norm_triangle_inequality(v in samples(), w in samples(), p in exponent(), q in exponent()) {
        let (f, g) = (tf_grid(&v), tf_grid(&w));
        let params = MixedNormParams::unweighted(p, q).unwrap();
        let sum = mixed_norm(&summed(&f, &g), &params).unwrap();
        let bound = mixed_norm(&f, &params).unwrap() + mixed_norm(&g, &params).unwrap();
        prop_assert!(sum <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn polynomial_weight_dominates(v in samples(), p in exponent(), q in exponent(), s in 0.0..3.0f64) {
        let f = tf_grid(&v);
        let plain = mixed_norm(&f, &MixedNormParams::unweighted(p, q).unwrap()).unwrap();
        let weighted = mixed_norm(&f, &MixedNormParams::new(p, q, Weight::polynomial(s).unwrap()).unwrap()).unwrap();
        prop_assert!(weighted >= plain * (1.0 - 1e-12));
    }
}

#[test]
fn float_and_rational_agree() {
    let t = random_cg_triple(&mut rng(3), 1);
    let exact = alpha(&t).unwrap().to_f64();
    let float = alpha(&metaplectic::shift_invertible::CgTriple::new(t.e.to_f64(), t.c.to_f64(), t.s.to_f64()).unwrap())
        .unwrap();
    assert!(exact.max_abs_diff(&float).unwrap() < 1e-12);
}
