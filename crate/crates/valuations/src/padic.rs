//! Bounded-precision p-adic numbers in unit-times-prime-power form, with
//! worst-case precision tracking: every operation returns the precision it
//! can prove, never an optimistic one.

use crate::rational::{int_val, is_prime, mod_inverse, val, Val};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PAdicError {
    #[error("operands live over different primes: {left} vs {right}")]
    PrimeMismatch { left: u64, right: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("result is indistinguishable from zero; its valuation is at least {min_valuation}")]
    PrecisionExhausted { min_valuation: i64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

/// A p-adic number known as unit * p^valuation modulo p^(valuation + precision).
/// Zero is a distinguished exact value with infinite valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdic {
    prime: u64,
    valuation: Val,
    /// Least nonnegative residue mod p^precision, coprime to p; 0 for zero.
    unit: BigUint,
    precision: u32,
}

fn prime_power(p: u64, e: u32) -> BigInt {
    num_traits::pow::pow(BigInt::from(p), e as usize)
}

impl PAdic {
    pub fn zero(p: u64, precision: u32) -> Result<PAdic, PAdicError> {
        if !is_prime(p) {
            return Err(PAdicError::NotPrime(p));
        }
        assert!(precision >= 1, "precision must be positive");
        Ok(PAdic {
            prime: p,
            valuation: Val::Infinite,
            unit: BigUint::zero(),
            precision,
        })
    }

    /// Exact embedding of a rational at the requested precision.
    pub fn from_rational(q: &BigRational, p: u64, precision: u32) -> Result<PAdic, PAdicError> {
        if !is_prime(p) {
            return Err(PAdicError::NotPrime(p));
        }
        assert!(precision >= 1, "precision must be positive");
        if q.is_zero() {
            return PAdic::zero(p, precision);
        }
        let v = val(q, p).finite().unwrap();
        let shift = BigRational::from(prime_power(p, v.unsigned_abs() as u32));
        let unit_rat = if v >= 0 { q / shift } else { q * shift };
        let modulus = prime_power(p, precision);
        let unit = (unit_rat.numer() * mod_inverse(unit_rat.denom(), &modulus).unwrap())
            .mod_floor(&modulus)
            .to_biguint()
            .unwrap();
        Ok(PAdic {
            prime: p,
            valuation: Val::Finite(v),
            unit,
            precision,
        })
    }

    pub fn from_integer(n: i64, p: u64, precision: u32) -> Result<PAdic, PAdicError> {
        PAdic::from_rational(&BigRational::from(BigInt::from(n)), p, precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn valuation(&self) -> Val {
        self.valuation
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_infinite()
    }

    /// Exponent of the modulus the value is known under, valuation + precision.
    pub fn known_exponent(&self) -> Val {
        self.valuation + self.precision as i64
    }

    /// The canonical integer representative mod p^exponent. Requires a
    /// nonnegative valuation and enough known digits.
    pub fn residue_mod(&self, exponent: u32) -> BigUint {
        let modulus = prime_power(self.prime, exponent).to_biguint().unwrap();
        match self.valuation {
            Val::Infinite => BigUint::zero(),
            Val::Finite(v) => {
                assert!(v >= 0, "no integer residue at negative valuation {v}");
                assert!(
                    Val::Finite(exponent as i64) <= self.known_exponent(),
                    "requested {exponent} digits, only {} known",
                    self.known_exponent()
                );
                (&self.unit * prime_power(self.prime, v as u32).to_biguint().unwrap()) % modulus
            }
        }
    }

    fn check_prime(&self, other: &PAdic) -> Result<(), PAdicError> {
        if self.prime != other.prime {
            return Err(PAdicError::PrimeMismatch {
                left: self.prime,
                right: other.prime,
            });
        }
        Ok(())
    }

    /// Sum with the worst-case precision rule: for valuations d_a <= d_b the
    /// result is known mod p^(d_a + min(N_a, d_b - d_a + N_b)).
    pub fn add(&self, other: &PAdic) -> Result<PAdic, PAdicError> {
        self.check_prime(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let (lo, hi) = if self.valuation <= other.valuation {
            (self, other)
        } else {
            (other, self)
        };
        let d_lo = lo.valuation.finite().unwrap();
        let gap = hi.valuation.finite().unwrap() - d_lo;
        let window = (lo.precision as i64).min(gap + hi.precision as i64);
        debug_assert!(window >= 1);
        let window = window as u32;
        let modulus = prime_power(lo.prime, window).to_biguint().unwrap();
        let shifted = if gap >= window as i64 {
            BigUint::zero()
        } else {
            (&hi.unit * prime_power(lo.prime, gap as u32).to_biguint().unwrap()) % &modulus
        };
        let sum = (&lo.unit % &modulus + shifted) % &modulus;
        if sum.is_zero() {
            return Err(PAdicError::PrecisionExhausted {
                min_valuation: d_lo + window as i64,
            });
        }
        let extra = int_val(&BigInt::from(sum.clone()), lo.prime) as u32;
        let unit = sum / prime_power(lo.prime, extra).to_biguint().unwrap();
        Ok(PAdic {
            prime: lo.prime,
            valuation: Val::Finite(d_lo + extra as i64),
            unit,
            precision: window - extra,
        })
    }

    pub fn neg(&self) -> PAdic {
        if self.is_zero() {
            return self.clone();
        }
        let modulus = prime_power(self.prime, self.precision).to_biguint().unwrap();
        PAdic {
            prime: self.prime,
            valuation: self.valuation,
            unit: (&modulus - &self.unit) % modulus,
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &PAdic) -> Result<PAdic, PAdicError> {
        self.add(&other.neg())
    }

    /// Product; unit parts are only shared to the smaller precision.
    pub fn mul(&self, other: &PAdic) -> Result<PAdic, PAdicError> {
        self.check_prime(other)?;
        let precision = self.precision.min(other.precision);
        if self.is_zero() || other.is_zero() {
            return PAdic::zero(self.prime, precision);
        }
        let modulus = prime_power(self.prime, precision).to_biguint().unwrap();
        Ok(PAdic {
            prime: self.prime,
            valuation: self.valuation + other.valuation,
            unit: (&self.unit * &other.unit) % modulus,
            precision,
        })
    }

    pub fn inv(&self) -> Result<PAdic, PAdicError> {
        if self.is_zero() {
            return Err(PAdicError::DivisionByZero);
        }
        let modulus = prime_power(self.prime, self.precision);
        let unit = mod_inverse(&BigInt::from(self.unit.clone()), &modulus)
            .unwrap()
            .to_biguint()
            .unwrap();
        Ok(PAdic {
            prime: self.prime,
            valuation: Val::Finite(-self.valuation.finite().unwrap()),
            unit,
            precision: self.precision,
        })
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation {
            Val::Infinite => write!(f, "0"),
            Val::Finite(v) => write!(
                f,
                "{}*{}^{} + O({}^{})",
                self.unit,
                self.prime,
                v,
                self.prime,
                v + self.precision as i64
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64, p: u64, prec: u32) -> PAdic {
        PAdic::from_integer(n, p, prec).unwrap()
    }

    #[test]
    fn rational_embeddings_split_off_the_prime_part() {
        let a = PAdic::from_rational(&rat(1, 49), 7, 3).unwrap();
        assert_eq!(a.valuation(), Val::Finite(-2));
        assert_eq!(a.unit(), &BigUint::one());

        let b = PAdic::from_rational(&rat(136, 1), 2, 4).unwrap();
        assert_eq!(b.valuation(), Val::Finite(3));
        assert_eq!(b.unit(), &BigUint::from(1_u32)); // 17 mod 16

        let c = PAdic::from_rational(&rat(1, 3), 7, 2).unwrap();
        assert_eq!((c.unit() * 3_u32) % BigUint::from(49_u32), BigUint::one());

        let d = PAdic::from_rational(&rat(-1, 1), 5, 2).unwrap();
        assert_eq!(d.unit(), &BigUint::from(24_u32));
    }

    #[test]
    fn adding_zero_is_the_identity() {
        let a = int(10, 7, 2);
        let z = PAdic::zero(7, 5).unwrap();
        assert_eq!(a.add(&z).unwrap(), a);
        assert_eq!(z.add(&a).unwrap(), a);
    }

    #[test]
    fn units_multiply_modulo_the_shared_window() {
        let a = int(3, 7, 2);
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.valuation(), Val::Finite(0));
        assert_eq!(sq.unit(), &BigUint::from(9_u32));
        assert_eq!(sq.precision(), 2);
    }

    #[test]
    fn cancellation_past_the_window_is_reported_not_invented() {
        // 10^2 - 2 = 98 = 2 * 49: at two digits the difference looks like 0.
        let sq = int(10, 7, 2).mul(&int(10, 7, 2)).unwrap();
        assert_eq!(
            sq.sub(&int(2, 7, 2)),
            Err(PAdicError::PrecisionExhausted { min_valuation: 2 })
        );

        // 3 + 5 = 8 vanishes mod 8; the bound matches the true valuation.
        assert_eq!(
            int(3, 2, 3).add(&int(5, 2, 3)),
            Err(PAdicError::PrecisionExhausted { min_valuation: 3 })
        );
    }

    #[test]
    fn mixed_valuation_sums_follow_the_window_rule() {
        // 2 + 8 over p = 2: windows min(2, 2 + 1) = 2, so 10 is known mod 8.
        let a = int(2, 2, 2);
        let b = int(8, 2, 1);
        let s = a.add(&b).unwrap();
        assert_eq!(s.valuation(), Val::Finite(1));
        assert_eq!(s.precision(), 2);
        assert_eq!(s.residue_mod(3), BigUint::from(2_u32)); // 10 mod 8

        // A deep-valuation summand beyond the window changes nothing.
        let c = int(3, 2, 2);
        let d = int(32, 2, 4);
        assert_eq!(c.add(&d).unwrap(), c);
    }

    #[test]
    fn partial_cancellation_narrows_the_precision() {
        // 5 + 3 = 8 over p = 2 at four digits: valuation 3, one digit left.
        let s = int(5, 2, 4).add(&int(3, 2, 4)).unwrap();
        assert_eq!(s.valuation(), Val::Finite(3));
        assert_eq!(s.unit(), &BigUint::one());
        assert_eq!(s.precision(), 1);
    }

    #[test]
    fn negation_and_inversion_are_exact_on_units() {
        let a = int(3, 7, 2);
        let n = a.neg();
        assert_eq!(n.unit(), &BigUint::from(46_u32));
        assert!(matches!(
            a.add(&n),
            Err(PAdicError::PrecisionExhausted { min_valuation: 2 })
        ));

        let inv = a.inv().unwrap();
        assert_eq!(inv.unit(), &BigUint::from(33_u32));
        let one = a.mul(&inv).unwrap();
        assert_eq!(one.valuation(), Val::Finite(0));
        assert_eq!(one.unit(), &BigUint::one());

        let deep = PAdic::from_rational(&rat(1, 14), 7, 2).unwrap();
        assert_eq!(deep.valuation(), Val::Finite(-1));
        assert_eq!(deep.inv().unwrap().valuation(), Val::Finite(1));

        assert_eq!(PAdic::zero(7, 2).unwrap().inv(), Err(PAdicError::DivisionByZero));
    }

    #[test]
    fn primes_may_not_be_mixed() {
        assert_eq!(
            int(1, 5, 2).add(&int(1, 7, 2)),
            Err(PAdicError::PrimeMismatch { left: 5, right: 7 })
        );
        assert_eq!(PAdic::zero(10, 2), Err(PAdicError::NotPrime(10)));
    }

    #[test]
    fn residues_combine_valuation_and_unit() {
        let a = int(136, 2, 4);
        assert_eq!(a.residue_mod(7), BigUint::from(8_u32)); // 136 mod 128
        assert_eq!(a.residue_mod(3), BigUint::zero());
        let z = PAdic::zero(3, 1).unwrap();
        assert_eq!(z.residue_mod(5), BigUint::zero());
    }
}
