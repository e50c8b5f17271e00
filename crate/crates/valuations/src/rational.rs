//! Exact prime valuations of rationals and the small modular-arithmetic kit
//! the rest of the crate leans on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValError {
    #[error("zero has no finite valuation")]
    ZeroInput,
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

/// A value in the extended value group: an integer, or the valuation of zero.
/// The derived order puts every finite value below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Val {
    Finite(i64),
    Infinite,
}

impl Val {
    pub fn finite(self) -> Option<i64> {
        match self {
            Val::Finite(v) => Some(v),
            Val::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Val::Infinite
    }
}

impl std::ops::Add for Val {
    type Output = Val;

    fn add(self, other: Val) -> Val {
        match (self, other) {
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a + b),
            _ => Val::Infinite,
        }
    }
}

impl std::ops::Add<i64> for Val {
    type Output = Val;

    fn add(self, other: i64) -> Val {
        self + Val::Finite(other)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(v) => write!(f, "{v}"),
            Val::Infinite => write!(f, "inf"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Multiplicity of `p` in a nonzero integer.
pub(crate) fn int_val(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// The exact p-adic valuation of a nonzero rational.
pub fn vp(q: &BigRational, p: u64) -> Result<i64, ValError> {
    if !is_prime(p) {
        return Err(ValError::NotPrime(p));
    }
    if q.is_zero() {
        return Err(ValError::ZeroInput);
    }
    Ok(int_val(q.numer(), p) - int_val(q.denom(), p))
}

/// Total variant of [`vp`]: zero gets the infinite valuation.
pub fn val(q: &BigRational, p: u64) -> Val {
    assert!(is_prime(p), "{p} is not a prime");
    if q.is_zero() {
        Val::Infinite
    } else {
        Val::Finite(int_val(q.numer(), p) - int_val(q.denom(), p))
    }
}

/// Inverse of `a` modulo `modulus`, least nonnegative; None when not coprime.
pub(crate) fn mod_inverse(a: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(modulus).extended_gcd(modulus);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(modulus))
    } else {
        None
    }
}

/// Residue of a rational whose denominator is coprime to the modulus.
pub(crate) fn rational_residue(q: &BigRational, modulus: &BigInt) -> Option<BigInt> {
    mod_inverse(q.denom(), modulus).map(|inv| (q.numer() * inv).mod_floor(modulus))
}

/// Least nonnegative solution of simultaneous congruences with pairwise
/// coprime moduli.
pub(crate) fn chinese_remainder(congruences: &[(BigInt, BigInt)]) -> BigInt {
    let mut r = BigInt::zero();
    let mut m = BigInt::one();
    for (r2, m2) in congruences {
        let inv = mod_inverse(&m, m2).expect("moduli must be pairwise coprime");
        let t = ((r2 - &r) * inv).mod_floor(m2);
        r += &m * t;
        m *= m2;
    }
    r
}
