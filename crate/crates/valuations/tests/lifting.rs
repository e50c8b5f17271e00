//! Lifting sweeps verified by brute residue scans: every root the refiner
//! returns must be the unique residue class the congruence allows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valuations::{
    check_henselian_form, neighborhood_data, project_inverse, sharp_hensel_lift, LiftProblem,
    XPoly,
};

fn int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn univar(coeffs: &[i64]) -> XPoly {
    XPoly::univariate(coeffs.iter().map(|&c| int(c)).collect())
}

/// All residues c mod p^2 with f(c) = 0 mod p^2 and c = seed mod p.
fn scan_roots(f: &XPoly, p: u64, seed: &BigInt) -> Vec<BigInt> {
    let m = BigInt::from(p * p);
    let mut out = Vec::new();
    let mut c = seed.mod_floor(&BigInt::from(p));
    while c < m {
        let value = f.eval(&[], &BigRational::from(c.clone()));
        assert!(value.denom().is_one(), "integer coefficients at an integer point");
        if value.numer().mod_floor(&m).is_zero() {
            out.push(c.clone());
        }
        c += BigInt::from(p);
    }
    out
}

#[test]
fn shaped_polynomials_lift_straight_from_minus_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for &p in &[2_u64, 3, 5, 7, 11, 13] {
        for _ in 0..60 {
            let degree = rng.gen_range(2..=4_usize);
            let mut coeffs = vec![0_i64; degree + 1];
            coeffs[degree] = 1;
            coeffs[degree - 1] = 1;
            for c in coeffs.iter_mut().take(degree - 1) {
                *c = p as i64 * rng.gen_range(-20..=20);
            }
            let f = univar(&coeffs);
            let root = check_henselian_form(&f, p, 2)
                .unwrap()
                .expect("diagonal shape admits a root near -1");
            let residue = BigInt::from(root.residue_mod(2));
            let scanned = scan_roots(&f, p, &BigInt::from(p as i64 - 1));
            assert_eq!(scanned, vec![residue], "p = {p}, coeffs = {coeffs:?}");
        }
    }
}

#[test]
fn random_admissible_instances_scan_unique() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for &p in &[3_u64, 5, 7, 13] {
        for _ in 0..50 {
            // a square plus a multiple of p, rooted at a unit seed
            let c0 = loop {
                let c = rng.gen_range(1..=50_i64);
                if c % p as i64 != 0 {
                    break c;
                }
            };
            let k = rng.gen_range(1..=30_i64);
            let s = c0 * c0 + p as i64 * k;
            let f = univar(&[-s, 0, 1]);
            let problem = LiftProblem {
                f: f.clone(),
                b0: vec![],
                c0: int(c0),
                prime: p,
                epsilon: 0,
                precision: 2,
            };
            let root = sharp_hensel_lift(&problem, &[]).unwrap();
            let residue = BigInt::from(root.residue_mod(2));
            let scanned = scan_roots(&f, p, &BigInt::from(c0));
            assert_eq!(scanned, vec![residue], "p = {p}, s = {s}, c0 = {c0}");
        }
    }
}

#[test]
fn parameter_fibers_project_bijectively() {
    // c^2 = b near (9, 3) over the 5-adics
    let f = XPoly::new(
        1,
        vec![
            valuations::Poly::var(1, 0).neg(),
            valuations::Poly::zero(1),
            valuations::Poly::constant(1, int(1)),
        ],
    );
    let nd = neighborhood_data(&f, &[int(9)], &int(3), 5).unwrap();
    let mut seen = std::collections::BTreeMap::new();
    for t in 0..25_i64 {
        let b = int(9) + int(5) * int(t);
        let root = project_inverse(&nd, &[b.clone()], 2).unwrap();
        let c = BigInt::from(root.residue_mod(2));
        // the projected root really squares back to b at depth 2
        let back = (&c * &c - b.to_integer()).mod_floor(&BigInt::from(25));
        assert!(back.is_zero());
        assert_eq!(c.mod_floor(&BigInt::from(5)), BigInt::from(3));
        seen.entry(b.to_integer().mod_floor(&BigInt::from(25)))
            .or_insert_with(Vec::new)
            .push(c);
    }
    // five base classes mod 25, each with one fiber value, all distinct
    assert_eq!(seen.len(), 5);
    let mut fibers: Vec<BigInt> = seen
        .values()
        .map(|cs| {
            assert!(cs.iter().all(|c| c == &cs[0]), "fiber value must not depend on the lift");
            cs[0].clone()
        })
        .collect();
    fibers.sort();
    fibers.dedup();
    assert_eq!(fibers.len(), 5);
}
