use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use solvrad_core::groups::{parse_generators, PermutationGroup};
use solvrad_core::polynomial::{parse_polynomial, IntPolynomial};
use solvrad_core::precision::ArbitraryComplex;
use solvrad_core::radical::{evaluate, from_json, to_json, to_text};
use solvrad_core::resolvent::{
    forward_level, forward_level_with, inverse_level, MultiplicationCounter, ResolventTensor, TensorKind, ZetaTable,
};
use solvrad_core::{composition_series, solve, SolveOptions};

const DIGITS: u32 = 30;

fn tensor(radices: Vec<usize>, seeds: &[(f64, f64)]) -> ResolventTensor {
    let len: usize = radices.iter().product();
    let data = (0..len)
        .map(|i| {
            let (re, im) = seeds[i % seeds.len()];
            ArbitraryComplex::from_f64(re + i as f64 * 0.125, im - i as f64 * 0.0625, DIGITS)
        })
        .collect();
    ResolventTensor::new(radices, data, 0, TensorKind::Theta)
}

fn radices() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(prop::sample::select(vec![2usize, 3, 5]), 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inverse_undoes_forward(r in radices(), seeds in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..6), axis in 0usize..3) {
        let axis = axis % r.len();
        let t = tensor(r.clone(), &seeds);
        let zeta = ZetaTable::new(r[axis], DIGITS);
        let mut counter = MultiplicationCounter::for_radices(&r);
        let (l, _) = forward_level(&t, axis, &zeta, &mut counter);
        let back = inverse_level(&l, axis, &zeta);
        prop_assert!(back.max_distance(&t).below_pow10(3.0 - DIGITS as f64));
    }

    #[test]
    fn other_primitive_root_permutes_theta(seeds in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..6), p in prop::sample::select(vec![3usize, 5, 7]), k in 1u64..7) {
        let k = k % p as u64;
        prop_assume!(k != 0);
        let r = vec![p, 2];
        let t = tensor(r.clone(), &seeds);
        let mut c = MultiplicationCounter::for_radices(&r);
        let (_, base) = forward_level(&t, 0, &ZetaTable::new(p, DIGITS), &mut c);
        let (_, other) = forward_level_with(&t, 0, &ZetaTable::with_generator(p, k, DIGITS), &ZetaTable::new(p, DIGITS), &mut c);
        let inv = (1..p as u64).find(|t| t * k % p as u64 == 1).unwrap() as usize;
        let scale = base.data().iter().map(|z| z.norm().to_f64()).fold(1.0, f64::max);
        for j in 0..p {
            for b in 0..2 {
                let d = other.get(&[j, b]).distance(base.get(&[(inv * j) % p, b]));
                prop_assert!(d.to_f64() < scale * 1e-20);
            }
        }
    }

    #[test]
    fn cyclic_shift_fixes_theta(r in radices(), seeds in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..6), by in 1usize..5) {
        let t = tensor(r.clone(), &seeds);
        let zeta = ZetaTable::new(r[0], DIGITS);
        let mut c = MultiplicationCounter::for_radices(&r);
        let (_, a) = forward_level(&t, 0, &zeta, &mut c);
        let (_, b) = forward_level(&t.shifted_along(0, by % r[0]), 0, &zeta, &mut c);
        let scale = a.data().iter().map(|z| z.norm().to_f64()).fold(1.0, f64::max);
        prop_assert!(b.max_distance(&a).to_f64() < scale * 1e-20);
    }

    #[test]
    fn dihedral_series_is_valid(n in 3usize..9) {
        let g = PermutationGroup::dihedral(n);
        let cs = composition_series(&g).unwrap();
        prop_assert!(cs.validate(&g).is_ok());
        prop_assert_eq!(cs.group_order(), 2 * n);
    }

    #[test]
    fn pure_quadratics_solve(d in -50i64..50) {
        let root = (d.unsigned_abs() as f64).sqrt() as i64;
        prop_assume!(d != 0 && !(d > 0 && root * root == d));
        let p = IntPolynomial::from_i64s(&[-d, 0, 1]).unwrap();
        let g = parse_generators("(1,2)", Some(2)).unwrap();
        let r = solve(&p, &g, &SolveOptions::default()).unwrap();
        prop_assert!(r.max_deviation().unwrap() < 10f64.powf(-(r.digits as f64) / 2.0));
        let sum = r.theta_m.values.iter().sum::<BigInt>();
        prop_assert_eq!(sum, BigInt::from(0));
    }
}

#[test]
fn seeded_cubics_round_trip_through_json() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = parse_generators("(1,2,3);(1,2)", Some(3)).unwrap();
    for _ in 0..6 {
        let d: i64 = rng.gen_range(2..40);
        if [8, 27].contains(&d) {
            continue;
        }
        let p = IntPolynomial::from_i64s(&[-d, 0, 0, 1]).unwrap();
        let r = solve(&p, &g, &SolveOptions::default()).unwrap();
        for (e, x) in r.expressions.iter().zip(&r.roots) {
            let back = from_json(&to_json(e)).unwrap();
            assert_eq!(to_text(&back), to_text(e));
            assert!(evaluate(&back, r.digits).distance(x).below_pow10(-(r.digits as f64) / 2.0));
        }
    }
}

#[test]
fn cyclotomic_sextic_labels_itself() {
    let p = parse_polynomial("x^6+x^3+1").unwrap();
    let g = parse_generators("(1,2,3,4,5,6)", Some(6)).unwrap();
    let r = solve(&p, &g, &SolveOptions::default()).unwrap();
    assert!(r.counter.within_budget());
    assert!(r.max_deviation().unwrap() < 1e-8);
}
