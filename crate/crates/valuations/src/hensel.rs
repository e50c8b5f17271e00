//! Sharp quantitative root lifting by exact Newton iteration, the coefficient
//! shape that guarantees a root near -1, and the per-prime neighborhood data
//! under which a hypersurface projects bijectively onto its base ball.

use crate::padic::PAdic;
use crate::poly::{derivative, horner, XPoly};
use crate::rational::{is_prime, val, Val};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HenselError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("expected {expected} parameter coordinates, got {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("polynomial is not monic in its distinguished variable")]
    NotMonic,
    #[error("degree must be at least 2")]
    DegreeTooSmall,
    #[error("hypothesis `{clause}` fails: {detail}")]
    HypothesisViolated {
        clause: &'static str,
        detail: String,
    },
    #[error("derivative vanishes identically at the seed")]
    DegenerateDerivative,
    #[error("the prime lies outside the neighborhood")]
    NotMember,
    #[error("base point lies outside the base ball")]
    OutsideBall,
}

/// A root-lifting instance: a polynomial monic in its distinguished variable,
/// a seed (b0, c0), and the requested ball depth and output precision.
#[derive(Clone, Debug)]
pub struct LiftProblem {
    pub f: XPoly,
    pub b0: Vec<BigRational>,
    pub c0: BigRational,
    pub prime: u64,
    pub epsilon: i64,
    pub precision: u32,
}

fn violated(clause: &'static str, detail: String) -> HenselError {
    HenselError::HypothesisViolated { clause, detail }
}

fn vector_val(xs: &[BigRational], p: u64) -> Val {
    xs.iter().map(|x| val(x, p)).min().unwrap_or(Val::Infinite)
}

/// Lifts the seed root to the unique exact root over the parameter point `b`,
/// checking every hypothesis up front and the convergence contract each step.
pub fn sharp_hensel_lift(lp: &LiftProblem, b: &[BigRational]) -> Result<PAdic, HenselError> {
    let p = lp.prime;
    if !is_prime(p) {
        return Err(HenselError::NotPrime(p));
    }
    if lp.b0.len() != lp.f.vars() || b.len() != lp.f.vars() {
        return Err(HenselError::ShapeMismatch {
            expected: lp.f.vars(),
            found: lp.b0.len().max(b.len()),
        });
    }
    if !lp.f.is_monic() {
        return Err(HenselError::NotMonic);
    }
    assert!(lp.precision >= 1, "precision must be positive");

    let fv = lp.f.gauss_val(p);
    if fv < Val::Finite(0) {
        return Err(violated(
            "integral coefficients",
            format!("coefficient valuation {fv}"),
        ));
    }
    let mut seed = lp.b0.clone();
    seed.push(lp.c0.clone());
    let sv = vector_val(&seed, p);
    if sv < Val::Finite(0) {
        return Err(violated("integral seed", format!("seed valuation {sv}")));
    }
    let deriv_at_seed = lp.f.dx().eval(&lp.b0, &lp.c0);
    if deriv_at_seed.is_zero() {
        return Err(HenselError::DegenerateDerivative);
    }
    let delta = val(&deriv_at_seed, p).finite().unwrap();
    if lp.epsilon < delta {
        return Err(violated(
            "ball depth",
            format!("epsilon {} below the derivative valuation {delta}", lp.epsilon),
        ));
    }
    let floor = delta + lp.epsilon;
    let residual = val(&lp.f.eval(&lp.b0, &lp.c0), p);
    if residual <= Val::Finite(floor) {
        return Err(violated(
            "seed residual depth",
            format!("valuation {residual}, needs more than {floor}"),
        ));
    }
    let moved: Vec<BigRational> = b.iter().zip(&lp.b0).map(|(x, y)| x - y).collect();
    let distance = vector_val(&moved, p);
    if distance <= Val::Finite(floor) {
        return Err(violated(
            "base point distance",
            format!("valuation {distance}, needs more than {floor}"),
        ));
    }

    let g = lp.f.specialize(b);
    let dg = derivative(&g);
    let mut c = lp.c0.clone();
    let mut prev_excess: Option<i64> = None;
    for _ in 0..64 {
        let r = horner(&g, &c);
        let finish = |c: &BigRational| {
            let shift = c - &lp.c0;
            assert!(
                val(&shift, p) > Val::Finite(lp.epsilon),
                "root left the seed ball"
            );
            assert!(val(c, p) >= Val::Finite(0), "root left the integers");
            assert_eq!(
                val(&horner(&dg, c), p),
                Val::Finite(delta),
                "derivative valuation drifted"
            );
            PAdic::from_rational(c, p, lp.precision).unwrap()
        };
        if r.is_zero() {
            return Ok(finish(&c));
        }
        let mu = val(&r, p).finite().unwrap();
        let excess = mu - 2 * delta;
        assert!(excess >= 1, "residual valuation fell to the derivative floor");
        if let Some(prev) = prev_excess {
            assert!(excess >= 2 * prev, "iteration lost quadratic convergence");
        }
        prev_excess = Some(excess);
        if let Val::Finite(cv) = val(&c, p) {
            if mu - delta >= cv + lp.precision as i64 {
                return Ok(finish(&c));
            }
        }
        let d = horner(&dg, &c);
        c = &c - r / d;
    }
    unreachable!("quadratic convergence exhausts any finite precision in 64 steps")
}

/// Tests whether a univariate monic polynomial has second coefficient 1 and
/// all lower coefficients of positive valuation; if so the unique root near
/// -1 is returned at the requested precision.
pub fn check_henselian_form(
    f: &XPoly,
    p: u64,
    precision: u32,
) -> Result<Option<PAdic>, HenselError> {
    if !is_prime(p) {
        return Err(HenselError::NotPrime(p));
    }
    if f.vars() != 0 {
        return Err(HenselError::ShapeMismatch {
            expected: 0,
            found: f.vars(),
        });
    }
    if !f.is_monic() {
        return Err(HenselError::NotMonic);
    }
    let n = f.degree();
    if n < 2 {
        return Err(HenselError::DegreeTooSmall);
    }
    let coeffs = f.specialize(&[]);
    if coeffs[n - 1] != BigRational::from(BigInt::from(1)) {
        return Ok(None);
    }
    if coeffs[..n - 1].iter().any(|c| val(c, p) <= Val::Finite(0)) {
        return Ok(None);
    }
    let minus_one = BigRational::from(BigInt::from(-1));
    if horner(&coeffs, &minus_one).is_zero() {
        return Ok(Some(PAdic::from_rational(&minus_one, p, precision).unwrap()));
    }
    let lp = LiftProblem {
        f: f.clone(),
        b0: vec![],
        c0: minus_one,
        prime: p,
        epsilon: 0,
        precision,
    };
    sharp_hensel_lift(&lp, &[]).map(Some)
}

/// The per-prime data of a hypersurface projection: the derivative valuation
/// at the seed, membership of the prime in the good locus, and ball depths
/// (twice the derivative valuation on the base, once on the fiber).
#[derive(Clone, Debug)]
pub struct NeighborhoodData {
    pub f: XPoly,
    pub b0: Vec<BigRational>,
    pub c0: BigRational,
    pub prime: u64,
    pub delta: i64,
    pub member: bool,
    pub base_radius: i64,
    pub fiber_radius: i64,
}

fn member_inequalities(
    f: &XPoly,
    b0: &[BigRational],
    c0: &BigRational,
    deriv: &BigRational,
    q: u64,
) -> (Val, bool) {
    let dv = val(deriv, q);
    let mut seed = b0.to_vec();
    seed.push(c0.clone());
    let ok = f.gauss_val(q) >= Val::Finite(0)
        && vector_val(&seed, q) >= Val::Finite(0)
        && val(&f.eval(b0, c0), q) > dv + dv;
    (dv, ok)
}

pub fn neighborhood_data(
    f: &XPoly,
    b0: &[BigRational],
    c0: &BigRational,
    p: u64,
) -> Result<NeighborhoodData, HenselError> {
    if !is_prime(p) {
        return Err(HenselError::NotPrime(p));
    }
    if b0.len() != f.vars() {
        return Err(HenselError::ShapeMismatch {
            expected: f.vars(),
            found: b0.len(),
        });
    }
    if !f.is_monic() {
        return Err(HenselError::NotMonic);
    }
    let deriv = f.dx().eval(b0, c0);
    if deriv.is_zero() {
        return Err(HenselError::DegenerateDerivative);
    }
    let (dv, member) = member_inequalities(f, b0, c0, &deriv, p);
    let delta = dv.finite().unwrap();
    Ok(NeighborhoodData {
        f: f.clone(),
        b0: b0.to_vec(),
        c0: c0.clone(),
        prime: p,
        delta,
        member,
        base_radius: 2 * delta,
        fiber_radius: delta,
    })
}

impl NeighborhoodData {
    /// Membership of another prime in the same good locus.
    pub fn member_at(&self, q: u64) -> Result<bool, HenselError> {
        if !is_prime(q) {
            return Err(HenselError::NotPrime(q));
        }
        let deriv = self.f.dx().eval(&self.b0, &self.c0);
        Ok(member_inequalities(&self.f, &self.b0, &self.c0, &deriv, q).1)
    }
}

/// The unique fiber point over a base point inside the base ball, found by
/// lifting with the ball depth set to the derivative valuation.
pub fn project_inverse(
    nd: &NeighborhoodData,
    b: &[BigRational],
    precision: u32,
) -> Result<PAdic, HenselError> {
    if !nd.member {
        return Err(HenselError::NotMember);
    }
    if b.len() != nd.f.vars() {
        return Err(HenselError::ShapeMismatch {
            expected: nd.f.vars(),
            found: b.len(),
        });
    }
    let moved: Vec<BigRational> = b.iter().zip(&nd.b0).map(|(x, y)| x - y).collect();
    if vector_val(&moved, nd.prime) <= Val::Finite(nd.base_radius) {
        return Err(HenselError::OutsideBall);
    }
    let lp = LiftProblem {
        f: nd.f.clone(),
        b0: nd.b0.clone(),
        c0: nd.c0.clone(),
        prime: nd.prime,
        epsilon: nd.fiber_radius,
        precision,
    };
    sharp_hensel_lift(&lp, b)
}
