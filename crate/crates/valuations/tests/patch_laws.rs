//! Pointwise laws of the patch language over every valuation point with a
//! residue characteristic up to 97, sampled across random nonzero rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valuations::{eval_patch, sign_vector, PatchExpr, Val, ValuationPoint};

const PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
    89, 97,
];

fn points() -> Vec<ValuationPoint> {
    let mut pts = vec![ValuationPoint::Trivial];
    pts.extend(PRIMES.iter().map(|&p| ValuationPoint::prime(p).unwrap()));
    pts
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let q = BigRational::new(
            BigInt::from(rng.gen_range(-5000_i64..=5000)),
            BigInt::from(rng.gen_range(1_i64..=5000)),
        );
        if !q.is_zero() {
            return q;
        }
    }
}

fn random_atom(rng: &mut ChaCha8Rng) -> PatchExpr {
    let a = random_nonzero(rng);
    if rng.gen_bool(0.5) {
        PatchExpr::pos(a).unwrap()
    } else {
        PatchExpr::nonneg(a).unwrap()
    }
}

#[test]
fn integrality_is_the_complement_of_a_positivity() {
    let pts = points();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let a = random_nonzero(&mut rng);
        let nonneg = PatchExpr::nonneg(a.clone()).unwrap();
        let pos_inverse = PatchExpr::pos(a.recip()).unwrap();
        for v in &pts {
            assert_eq!(eval_patch(v, &nonneg), !eval_patch(v, &pos_inverse), "at {v}");
        }
    }
}

#[test]
fn connectives_obey_de_morgan_and_involution() {
    let pts = points();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let e1 = random_atom(&mut rng);
        let e2 = random_atom(&mut rng);
        let not_and = PatchExpr::Not(Box::new(PatchExpr::And(vec![e1.clone(), e2.clone()])));
        let or_nots = PatchExpr::Or(vec![
            PatchExpr::Not(Box::new(e1.clone())),
            PatchExpr::Not(Box::new(e2.clone())),
        ]);
        let doubled = PatchExpr::Not(Box::new(PatchExpr::Not(Box::new(e1.clone()))));
        let singleton_and = PatchExpr::And(vec![e1.clone()]);
        let singleton_or = PatchExpr::Or(vec![e1.clone()]);
        for v in &pts {
            assert_eq!(eval_patch(v, &not_and), eval_patch(v, &or_nots));
            assert_eq!(eval_patch(v, &doubled), eval_patch(v, &e1));
            assert_eq!(eval_patch(v, &singleton_and), eval_patch(v, &e1));
            assert_eq!(eval_patch(v, &singleton_or), eval_patch(v, &e1));
        }
    }
}

#[test]
fn every_nonzero_rational_is_integral_almost_everywhere() {
    let pts = points();
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..100 {
        // denominator built only from listed primes, so "almost everywhere"
        // is checkable exactly on the catalog
        let numer = rng.gen_range(1_i64..=10_000);
        let den: i64 = [2, 5, 13]
            .iter()
            .map(|&p: &i64| p.pow(rng.gen_range(0..3)))
            .product();
        let a = BigRational::new(BigInt::from(numer), BigInt::from(den));
        let nonneg = PatchExpr::nonneg(a.clone()).unwrap();
        let failures = pts.iter().filter(|v| !eval_patch(v, &nonneg)).count();
        assert!(failures <= 3, "v(a) < 0 at more points than the denominator allows");
    }
}

#[test]
fn signs_mirror_membership() {
    let pts = points();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let tuple: Vec<BigRational> = (0..3).map(|_| random_nonzero(&mut rng)).collect();
        for v in &pts {
            let signs = sign_vector(v, &tuple);
            for (a, s) in tuple.iter().zip(&signs) {
                assert!(*s == 0 || *s == -1);
                assert_eq!(*s == 0, v.value(a) >= Val::Finite(0));
                assert_eq!(
                    *s == 0,
                    eval_patch(v, &PatchExpr::nonneg(a.clone()).unwrap())
                );
            }
        }
    }
}
