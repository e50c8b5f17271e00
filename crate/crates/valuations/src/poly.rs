//! Sparse multivariate polynomials over the rationals, plus the view with a
//! distinguished last variable used by the root-lifting machinery.

use crate::rational::{val, Val};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

/// A polynomial in a fixed number of variables; keys are exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

fn rat_pow(base: &BigRational, exp: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

impl Poly {
    pub fn zero(vars: usize) -> Poly {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: BigRational) -> Poly {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    pub fn one(vars: usize) -> Poly {
        Poly::constant(vars, BigRational::one())
    }

    /// The i-th coordinate as a polynomial.
    pub fn var(vars: usize, i: usize) -> Poly {
        assert!(i < vars);
        let mut exps = vec![0; vars];
        exps[i] = 1;
        let mut p = Poly::zero(vars);
        p.terms.insert(exps, BigRational::one());
        p
    }

    pub fn from_terms<I>(vars: usize, terms: I) -> Poly
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut p = Poly::zero(vars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), vars, "exponent vector length mismatch");
            p.insert(exps, c);
        }
        p
    }

    fn insert(&mut self, exps: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// The constant value when no variable occurs; None otherwise.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&vec![0; self.vars]) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (exps, c) in &other.terms {
            out.insert(exps.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), -v.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.vars, other.vars);
        let mut out = Poly::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(exps, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.vars);
        }
        Poly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.vars, "evaluation point length mismatch");
        let mut out = BigRational::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(exps) {
                if e > 0 {
                    term *= rat_pow(x, e);
                }
            }
            out += term;
        }
        out
    }

    /// Partial derivative in the i-th variable.
    pub fn partial(&self, i: usize) -> Poly {
        assert!(i < self.vars);
        let mut out = Poly::zero(self.vars);
        for (exps, c) in &self.terms {
            if exps[i] == 0 {
                continue;
            }
            let mut de = exps.clone();
            de[i] -= 1;
            out.insert(de, c * BigRational::from(BigInt::from(exps[i])));
        }
        out
    }

    /// Minimum valuation over the coefficients; infinite for the zero
    /// polynomial.
    pub fn gauss_val(&self, p: u64) -> Val {
        self.terms
            .values()
            .map(|c| val(c, p))
            .min()
            .unwrap_or(Val::Infinite)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }
}

/// A polynomial in parameter variables and one distinguished variable, stored
/// densely in the distinguished one: `coeffs[k]` multiplies its k-th power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XPoly {
    vars: usize,
    coeffs: Vec<Poly>,
}

impl XPoly {
    pub fn new(vars: usize, mut coeffs: Vec<Poly>) -> XPoly {
        assert!(coeffs.iter().all(|c| c.vars() == vars));
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()) == Some(true) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Poly::zero(vars));
        }
        XPoly { vars, coeffs }
    }

    /// A polynomial in the distinguished variable only, low degree first.
    pub fn univariate(coeffs: Vec<BigRational>) -> XPoly {
        XPoly::new(
            0,
            coeffs.into_iter().map(|c| Poly::constant(0, c)).collect(),
        )
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Poly {
        &self.coeffs[k]
    }

    pub fn is_monic(&self) -> bool {
        self.degree() >= 1 && self.coeffs.last().unwrap().as_constant() == Some(BigRational::one())
    }

    /// Derivative in the distinguished variable.
    pub fn dx(&self) -> XPoly {
        if self.degree() == 0 {
            return XPoly::new(self.vars, vec![Poly::zero(self.vars)]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&BigRational::from(BigInt::from(k))))
            .collect();
        XPoly::new(self.vars, coeffs)
    }

    /// Coefficient list after substituting the parameters, low degree first.
    pub fn specialize(&self, params: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(params.len(), self.vars, "parameter point length mismatch");
        self.coeffs.iter().map(|c| c.eval(params)).collect()
    }

    pub fn eval(&self, params: &[BigRational], x: &BigRational) -> BigRational {
        horner(&self.specialize(params), x)
    }

    /// Minimum valuation over every coefficient of every monomial.
    pub fn gauss_val(&self, p: u64) -> Val {
        self.coeffs
            .iter()
            .map(|c| c.gauss_val(p))
            .min()
            .unwrap_or(Val::Infinite)
    }
}

/// Evaluation of a dense coefficient list, low degree first.
pub fn horner(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    let mut out = BigRational::zero();
    for c in coeffs.iter().rev() {
        out = out * x + c;
    }
    out
}

/// Derivative of a dense coefficient list, low degree first.
pub fn derivative(coeffs: &[BigRational]) -> Vec<BigRational> {
    if coeffs.len() <= 1 {
        return vec![BigRational::zero()];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from(BigInt::from(k)))
        .collect()
}
