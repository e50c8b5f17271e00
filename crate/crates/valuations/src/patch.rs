//! Valuation points of the rationals and boolean patch sets over them.
//!
//! The points are the prime valuations together with the trivial one; patch
//! sets are finite boolean combinations of the two atom shapes "v(a) > 0"
//! and "v(a) >= 0".

use crate::rational::{is_prime, val, Val, ValError};
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;

/// A point of the valuation space: one prime valuation or the trivial one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValuationPoint {
    Trivial,
    Prime(u64),
}

impl ValuationPoint {
    pub fn prime(p: u64) -> Result<ValuationPoint, ValError> {
        if is_prime(p) {
            Ok(ValuationPoint::Prime(p))
        } else {
            Err(ValError::NotPrime(p))
        }
    }

    /// The valuation of a rational at this point; the trivial point sends
    /// every nonzero rational to 0.
    pub fn value(&self, a: &BigRational) -> Val {
        match self {
            ValuationPoint::Trivial => {
                if a.is_zero() {
                    Val::Infinite
                } else {
                    Val::Finite(0)
                }
            }
            ValuationPoint::Prime(p) => val(a, *p),
        }
    }
}

impl fmt::Display for ValuationPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuationPoint::Trivial => write!(f, "trivial"),
            ValuationPoint::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// A boolean combination of valuation-inequality atoms. An empty `And` is the
/// whole space, an empty `Or` the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatchExpr {
    /// Points with v(a) > 0.
    Pos(BigRational),
    /// Points with v(a) >= 0.
    Nonneg(BigRational),
    And(Vec<PatchExpr>),
    Or(Vec<PatchExpr>),
    Not(Box<PatchExpr>),
}

impl PatchExpr {
    pub fn pos(a: BigRational) -> Result<PatchExpr, ValError> {
        if a.is_zero() {
            Err(ValError::ZeroInput)
        } else {
            Ok(PatchExpr::Pos(a))
        }
    }

    pub fn nonneg(a: BigRational) -> Result<PatchExpr, ValError> {
        if a.is_zero() {
            Err(ValError::ZeroInput)
        } else {
            Ok(PatchExpr::Nonneg(a))
        }
    }
}

/// Membership of a valuation point in a patch set.
pub fn eval_patch(v: &ValuationPoint, e: &PatchExpr) -> bool {
    match e {
        PatchExpr::Pos(a) => v.value(a) > Val::Finite(0),
        PatchExpr::Nonneg(a) => v.value(a) >= Val::Finite(0),
        PatchExpr::And(parts) => parts.iter().all(|part| eval_patch(v, part)),
        PatchExpr::Or(parts) => parts.iter().any(|part| eval_patch(v, part)),
        PatchExpr::Not(inner) => !eval_patch(v, inner),
    }
}

/// Coordinatewise sign of the valuations of `s` at `v`: -1 where v(a) < 0,
/// otherwise 0. This is the finite projection separating valuation points.
pub fn sign_vector(v: &ValuationPoint, s: &[BigRational]) -> Vec<i8> {
    s.iter()
        .map(|a| if v.value(a) < Val::Finite(0) { -1 } else { 0 })
        .collect()
}
