//! Uniform continuity at finitely many places: seeded sampling certificates
//! for the polynomial difference bound, and the per-part ball radii that fit
//! a polynomial neighborhood over a finite prime set.

use crate::poly::Poly;
use crate::rational::{is_prime, val, Val};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UniformError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("expected {expected} coordinates, got {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("hypothesis `{clause}` fails: {detail}")]
    HypothesisViolated {
        clause: &'static str,
        detail: String,
    },
    #[error("modulus must be nonzero")]
    ZeroModulus,
}

/// Outcome of sampling the difference bound; a recorded counterexample means
/// the implication itself is broken, not the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityCheck {
    pub holds: bool,
    pub samples: u32,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub x: Vec<BigRational>,
    pub difference_val: Val,
    pub bound: i64,
}

pub(crate) fn rational_pow(p: u64, e: i64) -> BigRational {
    let power = BigRational::from(num_traits::pow::pow(
        BigInt::from(p),
        e.unsigned_abs() as usize,
    ));
    if e >= 0 {
        power
    } else {
        power.recip()
    }
}

/// Samples integral points x with v(x - a) > v(e) and checks that the value
/// of `g` moved by less than v(e): v(g(x) - g(a)) > v(e) every time.
pub fn continuity_certificate(
    g: &Poly,
    a: &[BigRational],
    e: &BigRational,
    p: u64,
    samples: u32,
    seed: u64,
) -> Result<ContinuityCheck, UniformError> {
    if !is_prime(p) {
        return Err(UniformError::NotPrime(p));
    }
    if a.len() != g.vars() {
        return Err(UniformError::ShapeMismatch {
            expected: g.vars(),
            found: a.len(),
        });
    }
    if e.is_zero() {
        return Err(UniformError::ZeroModulus);
    }
    if g.gauss_val(p) < Val::Finite(0) {
        return Err(UniformError::HypothesisViolated {
            clause: "integral coefficients",
            detail: format!("coefficient valuation {}", g.gauss_val(p)),
        });
    }
    for (j, coord) in a.iter().enumerate() {
        if val(coord, p) < Val::Finite(0) {
            return Err(UniformError::HypothesisViolated {
                clause: "integral center",
                detail: format!("coordinate {j} has valuation {}", val(coord, p)),
            });
        }
    }

    let bound = val(e, p).finite().unwrap();
    let ga = g.eval(a);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..samples {
        let jitter = rng.gen_range(0..3);
        let step = rational_pow(p, bound.max(-1) + 1 + jitter);
        let x: Vec<BigRational> = a
            .iter()
            .map(|c| c + &step * BigRational::from(BigInt::from(rng.gen_range(-1_000_000_i64..1_000_000))))
            .collect();
        let dv = val(&(g.eval(&x) - &ga), p);
        if dv <= Val::Finite(bound) {
            return Ok(ContinuityCheck {
                holds: false,
                samples: k + 1,
                counterexample: Some(Counterexample {
                    x,
                    difference_val: dv,
                    bound,
                }),
            });
        }
    }
    Ok(ContinuityCheck {
        holds: true,
        samples,
        counterexample: None,
    })
}

/// One part of a ball partition: the primes served by a common radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallPart {
    pub primes: Vec<u64>,
    /// Rational radius: the part's ball is v(x - a) > v(radius) at each of
    /// the part's primes.
    pub radius: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallPartition {
    pub parts: Vec<BallPart>,
}

/// The radius exponent at `p` under which the ball around `center` stays
/// inside every atom "v(f(x) - f(center)) > v(bound)": inputs are scaled to
/// integrality, coefficients cleared, and the bound shifted accordingly.
pub(crate) fn prime_radius(
    center: &[BigRational],
    atoms: &[(&Poly, &BigRational)],
    p: u64,
) -> i64 {
    let alpha = center
        .iter()
        .filter_map(|c| val(c, p).finite())
        .map(|v| -v)
        .max()
        .unwrap_or(0)
        .max(0);
    let mut scale = 0;
    for (f, _) in atoms {
        for (exps, c) in f.terms() {
            let total: u32 = exps.iter().sum();
            let need = alpha * total as i64 - val(c, p).finite().unwrap();
            scale = scale.max(need);
        }
    }
    let mut radius = -alpha;
    for (_, bound) in atoms {
        if let Val::Finite(bv) = val(bound, p) {
            radius = radius.max(scale + bv - alpha);
        }
    }
    radius
}

/// Partitions a finite prime set so each part shares one ball radius whose
/// ball around `a` is contained in all the atom neighborhoods. Parts are
/// formed in ascending prime order; primes needing no scaling merge into the
/// first part that accepts them.
pub fn ball_partition(
    a: &[BigRational],
    atoms: &[(Poly, BigRational)],
    primes: &[u64],
) -> Result<BallPartition, UniformError> {
    for &p in primes {
        if !is_prime(p) {
            return Err(UniformError::NotPrime(p));
        }
    }
    for (f, bound) in atoms {
        if f.vars() != a.len() {
            return Err(UniformError::ShapeMismatch {
                expected: a.len(),
                found: f.vars(),
            });
        }
        if bound.is_zero() {
            return Err(UniformError::ZeroModulus);
        }
    }
    let mut ordered: Vec<u64> = primes.to_vec();
    ordered.sort_unstable();
    ordered.dedup();

    // a prime is "plain" when radius zero works there: integral center,
    // integral atom coefficients, and no atom bound of positive valuation
    let plain = |q: u64| {
        a.iter().all(|c| val(c, q) >= Val::Finite(0))
            && atoms.iter().all(|(f, bound)| {
                val(bound, q) <= Val::Finite(0) && f.gauss_val(q) >= Val::Finite(0)
            })
    };

    let mut covered = vec![false; ordered.len()];
    let mut parts = Vec::new();
    for i in 0..ordered.len() {
        if covered[i] {
            continue;
        }
        let p = ordered[i];
        covered[i] = true;
        let atom_refs: Vec<(&Poly, &BigRational)> =
            atoms.iter().map(|(f, c)| (f, c)).collect();
        let exponent = prime_radius(a, &atom_refs, p);
        let mut members = vec![p];
        for (j, &q) in ordered.iter().enumerate() {
            if !covered[j] && plain(q) {
                covered[j] = true;
                members.push(q);
            }
        }
        members.sort_unstable();
        parts.push(BallPart {
            primes: members,
            radius: rational_pow(p, exponent),
        });
    }
    Ok(BallPartition { parts })
}

/// Failure record of a sampled partition check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallFailure {
    pub part: usize,
    pub prime: u64,
    pub atom: usize,
    pub x: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallCheck {
    pub holds: bool,
    pub samples_per_part: u32,
    pub failure: Option<BallFailure>,
}

/// Checks that the parts tile the prime set and that sampled points of each
/// part's ball satisfy every atom inequality at every part prime.
pub fn verify_ball_partition(
    a: &[BigRational],
    atoms: &[(Poly, BigRational)],
    primes: &[u64],
    partition: &BallPartition,
    samples_per_part: u32,
    seed: u64,
) -> Result<BallCheck, UniformError> {
    let mut seen: Vec<u64> = partition
        .parts
        .iter()
        .flat_map(|part| part.primes.iter().copied())
        .collect();
    let total: usize = partition.parts.iter().map(|part| part.primes.len()).sum();
    seen.sort_unstable();
    seen.dedup();
    let mut expected: Vec<u64> = primes.to_vec();
    expected.sort_unstable();
    expected.dedup();
    if seen.len() != total || seen != expected {
        return Err(UniformError::HypothesisViolated {
            clause: "partition shape",
            detail: "parts must tile the prime set disjointly".into(),
        });
    }

    let centers: Vec<BigRational> = atoms.iter().map(|(f, _)| f.eval(a)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (pi, part) in partition.parts.iter().enumerate() {
        // step deeper than the radius at every prime of the part at once
        let mut step = BigRational::one();
        for &q in &part.primes {
            let rv = val(&part.radius, q).finite().unwrap();
            step *= rational_pow(q, rv + 1);
        }
        for _ in 0..samples_per_part {
            let x: Vec<BigRational> = a
                .iter()
                .map(|c| {
                    c + &step * BigRational::from(BigInt::from(rng.gen_range(-1_000_000_i64..1_000_000)))
                })
                .collect();
            for &q in &part.primes {
                for (ai, (f, bound)) in atoms.iter().enumerate() {
                    if val(&(f.eval(&x) - &centers[ai]), q) <= val(bound, q) {
                        return Ok(BallCheck {
                            holds: false,
                            samples_per_part,
                            failure: Some(BallFailure {
                                part: pi,
                                prime: q,
                                atom: ai,
                                x,
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(BallCheck {
        holds: true,
        samples_per_part,
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn x_squared() -> Poly {
        Poly::from_terms(1, vec![(vec![2], int(1))])
    }

    #[test]
    fn squaring_contracts_near_one() {
        let check =
            continuity_certificate(&x_squared(), &[int(1)], &int(5), 5, 200, 11).unwrap();
        assert!(check.holds, "{:?}", check.counterexample);
        assert_eq!(check.samples, 200);

        // the worked instance behind the harness: x = 26 moves 26^2 - 1 = 675
        // to valuation 2, strictly past v(5) = 1
        assert_eq!(val(&(int(26 * 26) - int(1)), 5), Val::Finite(2));
    }

    #[test]
    fn constants_and_identity_are_trivially_continuous() {
        let c = Poly::constant(2, rat(3, 7));
        let check = continuity_certificate(&c, &[int(0), int(4)], &int(25), 5, 50, 0).unwrap();
        assert!(check.holds);

        let id = Poly::var(1, 0);
        let check = continuity_certificate(&id, &[int(9)], &int(125), 5, 50, 0).unwrap();
        assert!(check.holds);
    }

    #[test]
    fn hypotheses_are_enforced() {
        let bad_coeff = Poly::from_terms(1, vec![(vec![1], rat(1, 5))]);
        assert!(matches!(
            continuity_certificate(&bad_coeff, &[int(0)], &int(5), 5, 10, 0),
            Err(UniformError::HypothesisViolated { clause: "integral coefficients", .. })
        ));
        assert!(matches!(
            continuity_certificate(&x_squared(), &[rat(1, 5)], &int(5), 5, 10, 0),
            Err(UniformError::HypothesisViolated { clause: "integral center", .. })
        ));
        assert_eq!(
            continuity_certificate(&x_squared(), &[int(1)], &int(0), 5, 10, 0),
            Err(UniformError::ZeroModulus)
        );
        assert_eq!(
            continuity_certificate(&x_squared(), &[int(1)], &int(5), 6, 10, 0),
            Err(UniformError::NotPrime(6))
        );
    }

    #[test]
    fn single_linear_atom_keeps_its_own_radius() {
        let atoms = vec![(Poly::var(1, 0), int(4))];
        let partition = ball_partition(&[int(3)], &atoms, &[2]).unwrap();
        assert_eq!(partition.parts.len(), 1);
        assert_eq!(partition.parts[0].primes, vec![2]);
        assert_eq!(partition.parts[0].radius, int(4));
    }

    #[test]
    fn squared_atom_needs_the_full_bound_depth() {
        let atoms = vec![(x_squared(), int(25))];
        let partition = ball_partition(&[int(1)], &atoms, &[5]).unwrap();
        assert_eq!(partition.parts[0].radius, int(25));

        // the ball v(x - 1) > 2 fits: 126^2 - 1 has valuation 3
        assert_eq!(val(&(int(126 * 126) - int(1)), 5), Val::Finite(3));
        // one step shy does not: 26^2 - 1 sits exactly at the bound
        assert_eq!(val(&(int(26 * 26) - int(1)), 5), Val::Finite(2));

        let check =
            verify_ball_partition(&[int(1)], &atoms, &[5], &partition, 100, 3).unwrap();
        assert!(check.holds, "{:?}", check.failure);
    }

    #[test]
    fn fractional_center_rescales_the_radius() {
        let atoms = vec![(Poly::var(1, 0), int(1))];
        let partition = ball_partition(&[rat(1, 5)], &atoms, &[5]).unwrap();
        // alpha = 1 scales the input; the transferred bound lands back at 0
        assert_eq!(partition.parts[0].radius, int(1));
        let check =
            verify_ball_partition(&[rat(1, 5)], &atoms, &[5], &partition, 100, 5).unwrap();
        assert!(check.holds, "{:?}", check.failure);
    }

    #[test]
    fn plain_primes_merge_and_deep_ones_split_off() {
        let atoms = vec![(x_squared(), int(25))];
        let partition = ball_partition(&[int(1)], &atoms, &[5, 3, 2]).unwrap();
        assert_eq!(partition.parts.len(), 2);
        assert_eq!(partition.parts[0].primes, vec![2, 3]);
        assert_eq!(partition.parts[0].radius, int(1));
        assert_eq!(partition.parts[1].primes, vec![5]);
        assert_eq!(partition.parts[1].radius, int(25));

        let check =
            verify_ball_partition(&[int(1)], &atoms, &[2, 3, 5], &partition, 60, 7).unwrap();
        assert!(check.holds, "{:?}", check.failure);
    }

    #[test]
    fn negative_bound_valuations_allow_loose_balls() {
        let atoms = vec![(Poly::var(1, 0), rat(1, 5))];
        let partition = ball_partition(&[rat(1, 5)], &atoms, &[5]).unwrap();
        assert_eq!(partition.parts[0].radius, rat(1, 5));
    }

    #[test]
    fn mangled_partitions_are_rejected_by_the_checker() {
        let atoms = vec![(x_squared(), int(25))];
        let partition = BallPartition {
            parts: vec![BallPart {
                primes: vec![5, 5],
                radius: int(25),
            }],
        };
        assert!(matches!(
            verify_ball_partition(&[int(1)], &atoms, &[5], &partition, 10, 0),
            Err(UniformError::HypothesisViolated { clause: "partition shape", .. })
        ));

        let short = ball_partition(&[int(1)], &atoms, &[5]).unwrap();
        assert!(matches!(
            verify_ball_partition(&[int(1)], &atoms, &[5, 7], &short, 10, 0),
            Err(UniformError::HypothesisViolated { clause: "partition shape", .. })
        ));
    }

    #[test]
    fn too_tight_a_claimed_radius_is_caught_by_sampling() {
        let atoms = vec![(x_squared(), int(25))];
        let wrong = BallPartition {
            parts: vec![BallPart {
                primes: vec![5],
                radius: int(5),
            }],
        };
        let check = verify_ball_partition(&[int(1)], &atoms, &[5], &wrong, 200, 1).unwrap();
        assert!(!check.holds);
        let failure = check.failure.unwrap();
        assert_eq!((failure.part, failure.prime, failure.atom), (0, 5, 0));
    }
}
