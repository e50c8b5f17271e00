//! Simultaneous approximation targets on disjoint prime blocks, solved
//! constructively over the rationals: denominator clearing plus remaindering
//! for affine targets, radius transfer along rational maps for parametrized
//! ones, and certificate checking that never trusts the solver.

use crate::poly::Poly;
use crate::rational::{chinese_remainder, is_prime, rational_residue, val, Val};
use crate::uniform::{prime_radius, rational_pow};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlockError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("block {block}: parametrization does not hit the block target")]
    PreimageMismatch { block: usize },
    #[error("malformed input: {0}")]
    Json(String),
}

fn invalid(detail: impl Into<String>) -> BlockError {
    BlockError::InvalidProblem(detail.into())
}

/// Componentwise ratio of polynomials, all in the same parameter variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    num: Vec<Poly>,
    den: Vec<Poly>,
}

impl RationalMap {
    pub fn new(num: Vec<Poly>, den: Vec<Poly>) -> Result<RationalMap, BlockError> {
        if num.is_empty() || num.len() != den.len() {
            return Err(invalid("map needs matching nonempty numerator and denominator lists"));
        }
        let vars = num[0].vars();
        if num.iter().chain(&den).any(|f| f.vars() != vars) {
            return Err(invalid("map components disagree on the parameter count"));
        }
        if den.iter().any(|f| f.is_zero()) {
            return Err(invalid("map denominator is identically zero"));
        }
        Ok(RationalMap { num, den })
    }

    pub fn polynomial(components: Vec<Poly>) -> Result<RationalMap, BlockError> {
        let vars = components.first().map_or(0, |f| f.vars());
        let den = vec![Poly::constant(vars, BigRational::one()); components.len()];
        RationalMap::new(components, den)
    }

    pub fn identity(vars: usize) -> RationalMap {
        let components = (0..vars).map(|i| Poly::var(vars, i)).collect();
        RationalMap::polynomial(components).unwrap()
    }

    pub fn inputs(&self) -> usize {
        self.num[0].vars()
    }

    pub fn outputs(&self) -> usize {
        self.num.len()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Poly, &Poly)> {
        self.num.iter().zip(&self.den)
    }

    /// None when some denominator vanishes at `t`.
    pub fn eval(&self, t: &[BigRational]) -> Option<Vec<BigRational>> {
        self.components()
            .map(|(num, den)| {
                let d = den.eval(t);
                if d.is_zero() {
                    None
                } else {
                    Some(num.eval(t) / d)
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variety {
    Affine { dim: usize },
    Parametrized { defining: Vec<Poly>, map: RationalMap },
}

impl Variety {
    pub fn dim(&self) -> usize {
        match self {
            Variety::Affine { dim } => *dim,
            Variety::Parametrized { map, .. } => map.outputs(),
        }
    }
}

/// One approximation demand: at every prime of the block, land strictly
/// deeper than the modulus valuation around the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxBlock {
    pub primes: Vec<u64>,
    pub target: Vec<BigRational>,
    pub modulus: BigRational,
    /// Parameter point mapping onto the target; required by the
    /// parametrized solver, ignored elsewhere.
    pub preimage: Option<Vec<BigRational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockApproxProblem {
    pub variety: Variety,
    pub blocks: Vec<ApproxBlock>,
}

impl BlockApproxProblem {
    pub fn validate(&self) -> Result<(), BlockError> {
        let dim = self.variety.dim();
        if let Variety::Parametrized { defining, map } = &self.variety {
            if defining.iter().any(|f| f.vars() != dim) {
                return Err(invalid("defining polynomials disagree with the ambient dimension"));
            }
            if map.outputs() != dim {
                return Err(invalid("map output count disagrees with the ambient dimension"));
            }
        }
        let mut seen: BTreeMap<u64, usize> = BTreeMap::new();
        for (i, block) in self.blocks.iter().enumerate() {
            if block.primes.is_empty() {
                return Err(invalid(format!("block {i} has no primes")));
            }
            for &p in &block.primes {
                if !is_prime(p) {
                    return Err(invalid(format!("block {i} lists {p}, which is not prime")));
                }
                if let Some(&j) = seen.get(&p) {
                    return Err(invalid(if i == j {
                        format!("block {i} lists prime {p} twice")
                    } else {
                        format!("prime {p} appears in blocks {j} and {i}")
                    }));
                }
                seen.insert(p, i);
            }
            if block.target.len() != dim {
                return Err(invalid(format!(
                    "block {i} target has {} coordinates, ambient space has {dim}",
                    block.target.len()
                )));
            }
            if block.modulus.is_zero() {
                return Err(invalid(format!("block {i} modulus is zero")));
            }
            if let (Some(t), Variety::Parametrized { map, .. }) =
                (&block.preimage, &self.variety)
            {
                if t.len() != map.inputs() {
                    return Err(invalid(format!(
                        "block {i} preimage has {} coordinates, map takes {}",
                        t.len(),
                        map.inputs()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Checked inequality v_p(a - target) > v_p(modulus) for one block prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Margin {
    pub block: usize,
    pub prime: u64,
    pub separation: Val,
    pub bound: i64,
}

impl Margin {
    pub fn ok(&self) -> bool {
        self.separation > Val::Finite(self.bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionCertificate {
    pub point: Vec<BigRational>,
    pub margins: Vec<Margin>,
    /// Defining-polynomial values at the point; empty for affine problems.
    pub residuals: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub block: Option<usize>,
    pub prime: Option<u64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted(SolutionCertificate),
    Rejected(Rejection),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted(_))
    }
}

fn margins_for(problem: &BlockApproxProblem, a: &[BigRational]) -> Vec<Margin> {
    let mut margins = Vec::new();
    for (i, block) in problem.blocks.iter().enumerate() {
        for &p in &block.primes {
            let separation = block
                .target
                .iter()
                .zip(a)
                .map(|(t, x)| val(&(x - t), p))
                .min()
                .unwrap_or(Val::Infinite);
            margins.push(Margin {
                block: i,
                prime: p,
                separation,
                bound: val(&block.modulus, p).finite().unwrap(),
            });
        }
    }
    margins
}

fn residuals_for(problem: &BlockApproxProblem, a: &[BigRational]) -> Vec<BigRational> {
    match &problem.variety {
        Variety::Parametrized { defining, .. } => defining.iter().map(|f| f.eval(a)).collect(),
        Variety::Affine { .. } => Vec::new(),
    }
}

/// Re-checks a proposed point against every block constraint and, for
/// parametrized problems, against the defining equations. Total: bad input
/// is a rejection, not an error.
pub fn verify_solution(problem: &BlockApproxProblem, a: &[BigRational]) -> Verdict {
    if let Err(e) = problem.validate() {
        return Verdict::Rejected(Rejection {
            block: None,
            prime: None,
            detail: e.to_string(),
        });
    }
    if a.len() != problem.variety.dim() {
        return Verdict::Rejected(Rejection {
            block: None,
            prime: None,
            detail: format!(
                "point has {} coordinates, ambient space has {}",
                a.len(),
                problem.variety.dim()
            ),
        });
    }
    let margins = margins_for(problem, a);
    if let Some(m) = margins.iter().find(|m| !m.ok()) {
        return Verdict::Rejected(Rejection {
            block: Some(m.block),
            prime: Some(m.prime),
            detail: format!(
                "v_{}(a - target) = {} is not above {}",
                m.prime, m.separation, m.bound
            ),
        });
    }
    let residuals = residuals_for(problem, a);
    if let Some((k, r)) = residuals.iter().enumerate().find(|(_, r)| !r.is_zero()) {
        return Verdict::Rejected(Rejection {
            block: None,
            prime: None,
            detail: format!("defining polynomial {k} evaluates to {r}"),
        });
    }
    Verdict::Accepted(SolutionCertificate {
        point: a.to_vec(),
        margins,
        residuals,
    })
}

/// Solves an affine problem exactly: a common denominator Q clears every
/// target at its block primes, the strict inequalities become congruences
/// on b = Q·a one exponent past the modulus, and coordinatewise
/// remaindering returns the least nonnegative normal form.
pub fn solve_affine(problem: &BlockApproxProblem) -> Result<SolutionCertificate, BlockError> {
    problem.validate()?;
    let dim = match &problem.variety {
        Variety::Affine { dim } => *dim,
        Variety::Parametrized { .. } => {
            return Err(invalid("expected an affine ambient space"))
        }
    };

    let mut clearing: BTreeMap<u64, i64> = BTreeMap::new();
    for block in &problem.blocks {
        for &p in &block.primes {
            let worst = block
                .target
                .iter()
                .filter_map(|t| val(t, p).finite())
                .map(|v| -v)
                .max()
                .unwrap_or(0)
                .max(0);
            clearing.insert(p, worst);
        }
    }
    let q: BigRational = clearing
        .iter()
        .fold(BigRational::one(), |acc, (&p, &e)| acc * rational_pow(p, e));

    let mut point = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut congruences = Vec::new();
        for block in &problem.blocks {
            for &p in &block.primes {
                let exponent = val(&block.modulus, p).finite().unwrap() + 1 + clearing[&p];
                if exponent <= 0 {
                    continue;
                }
                let modulus = BigInt::from(rational_pow(p, exponent).to_integer());
                let scaled = &q * &block.target[j];
                let residue = rational_residue(&scaled, &modulus)
                    .expect("clearing factor leaves the denominator coprime");
                congruences.push((residue, modulus));
            }
        }
        point.push(BigRational::from(chinese_remainder(&congruences)) / &q);
    }

    let margins = margins_for(problem, &point);
    assert!(margins.iter().all(Margin::ok), "solver produced a bad margin");
    Ok(SolutionCertificate {
        point,
        margins,
        residuals: Vec::new(),
    })
}

/// Per-prime parameter radii: v_p(t - t0) > radius forces every map
/// component to move by strictly less than the modulus, v_p(g(t) - g(t0)) >
/// v_p(e). Each component P/Q contributes the cleared difference
/// P·Q(t0) - P(t0)·Q, which must sink past e·Q(t0)², and Q itself pinned to
/// the valuation of Q(t0).
pub fn transfer_modulus(
    map: &RationalMap,
    t0: &[BigRational],
    e: &BigRational,
    primes: &[u64],
) -> Result<Vec<(u64, i64)>, BlockError> {
    if t0.len() != map.inputs() {
        return Err(invalid(format!(
            "base point has {} coordinates, map takes {}",
            t0.len(),
            map.inputs()
        )));
    }
    if e.is_zero() {
        return Err(invalid("modulus is zero"));
    }
    for &p in primes {
        if !is_prime(p) {
            return Err(invalid(format!("{p} is not prime")));
        }
    }

    let mut atoms: Vec<(Poly, BigRational)> = Vec::new();
    for (num, den) in map.components() {
        let d0 = den.eval(t0);
        if d0.is_zero() {
            return Err(invalid("map is undefined at the base point"));
        }
        let n0 = num.eval(t0);
        let cleared = num.scale(&d0).sub(&den.scale(&n0));
        if cleared.total_degree().map_or(false, |d| d > 0) {
            atoms.push((cleared, e * &d0 * &d0));
        }
        if den.total_degree().map_or(false, |d| d > 0) {
            atoms.push((den.clone(), d0));
        }
    }
    let refs: Vec<(&Poly, &BigRational)> = atoms.iter().map(|(f, c)| (f, c)).collect();
    Ok(primes.iter().map(|&p| (p, prime_radius(t0, &refs, p))).collect())
}

/// Pulls each block back through the parametrization, solves the induced
/// affine problem on parameters, and pushes the solution forward; the
/// result sits on the variety exactly, so residuals vanish.
pub fn solve_parametrized(
    problem: &BlockApproxProblem,
) -> Result<SolutionCertificate, BlockError> {
    problem.validate()?;
    let map = match &problem.variety {
        Variety::Parametrized { map, .. } => map,
        Variety::Affine { .. } => {
            return Err(invalid("expected a parametrized ambient space"))
        }
    };
    if problem.blocks.is_empty() {
        return Err(invalid("parametrized solving needs at least one block"));
    }

    let mut parameter_blocks = Vec::with_capacity(problem.blocks.len());
    for (i, block) in problem.blocks.iter().enumerate() {
        let t0 = block
            .preimage
            .as_ref()
            .ok_or_else(|| invalid(format!("block {i} needs a parameter preimage")))?;
        let image = map
            .eval(t0)
            .ok_or_else(|| invalid(format!("block {i}: map undefined at its preimage")))?;
        if image != block.target {
            return Err(BlockError::PreimageMismatch { block: i });
        }
        let radii = transfer_modulus(map, t0, &block.modulus, &block.primes)?;
        let modulus = radii
            .iter()
            .fold(BigRational::one(), |acc, &(p, r)| acc * rational_pow(p, r));
        parameter_blocks.push(ApproxBlock {
            primes: block.primes.clone(),
            target: t0.clone(),
            modulus,
            preimage: None,
        });
    }

    let parameter_problem = BlockApproxProblem {
        variety: Variety::Affine { dim: map.inputs() },
        blocks: parameter_blocks,
    };
    let t = solve_affine(&parameter_problem)?.point;
    let point = map
        .eval(&t)
        .expect("transfer radii keep the denominators away from zero");

    let margins = margins_for(problem, &point);
    assert!(margins.iter().all(Margin::ok), "solver produced a bad margin");
    let residuals = residuals_for(problem, &point);
    if let Some((k, r)) = residuals.iter().enumerate().find(|(_, r)| !r.is_zero()) {
        return Err(invalid(format!(
            "defining polynomial {k} does not vanish on the parametrized point ({r})"
        )));
    }
    Ok(SolutionCertificate {
        point,
        margins,
        residuals,
    })
}

// --- flat JSON schema: rationals as strings, polynomials as coefficient /
// exponent-vector pairs ---

type PolyDto = Vec<(String, Vec<u32>)>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemDto {
    variety: VarietyDto,
    blocks: Vec<BlockDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum VarietyDto {
    Affine {
        n: usize,
    },
    Parametrized {
        n: usize,
        params: usize,
        defining: Vec<PolyDto>,
        map: MapDto,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDto {
    num: Vec<PolyDto>,
    den: Vec<PolyDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDto {
    primes: Vec<u64>,
    target: Vec<String>,
    c: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preimage: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDto {
    point: Vec<String>,
    margins: Vec<MarginDto>,
    residuals: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MarginDto {
    block: usize,
    prime: u64,
    separation: String,
    bound: i64,
}

fn parse_rational(s: &str) -> Result<BigRational, BlockError> {
    BigRational::from_str(s.trim())
        .map_err(|e| BlockError::Json(format!("bad rational {s:?}: {e}")))
}

fn parse_rationals(ss: &[String]) -> Result<Vec<BigRational>, BlockError> {
    ss.iter().map(|s| parse_rational(s)).collect()
}

fn rationals_to_strings(rs: &[BigRational]) -> Vec<String> {
    rs.iter().map(|r| r.to_string()).collect()
}

fn poly_from_dto(vars: usize, dto: &PolyDto) -> Result<Poly, BlockError> {
    let mut terms = Vec::with_capacity(dto.len());
    for (c, exps) in dto {
        if exps.len() != vars {
            return Err(BlockError::Json(format!(
                "term exponent vector {exps:?} wants {vars} variables"
            )));
        }
        terms.push((exps.clone(), parse_rational(c)?));
    }
    Ok(Poly::from_terms(vars, terms))
}

fn poly_to_dto(f: &Poly) -> PolyDto {
    f.terms().map(|(e, c)| (c.to_string(), e.to_vec())).collect()
}

fn parse_val(s: &str) -> Result<Val, BlockError> {
    if s == "inf" {
        return Ok(Val::Infinite);
    }
    s.parse::<i64>()
        .map(Val::Finite)
        .map_err(|e| BlockError::Json(format!("bad valuation {s:?}: {e}")))
}

impl BlockApproxProblem {
    pub fn from_json(text: &str) -> Result<BlockApproxProblem, BlockError> {
        let dto: ProblemDto =
            serde_json::from_str(text).map_err(|e| BlockError::Json(e.to_string()))?;
        let variety = match &dto.variety {
            VarietyDto::Affine { n } => Variety::Affine { dim: *n },
            VarietyDto::Parametrized {
                n,
                params,
                defining,
                map,
            } => {
                let defining = defining
                    .iter()
                    .map(|f| poly_from_dto(*n, f))
                    .collect::<Result<Vec<_>, _>>()?;
                let num = map
                    .num
                    .iter()
                    .map(|f| poly_from_dto(*params, f))
                    .collect::<Result<Vec<_>, _>>()?;
                let den = map
                    .den
                    .iter()
                    .map(|f| poly_from_dto(*params, f))
                    .collect::<Result<Vec<_>, _>>()?;
                Variety::Parametrized {
                    defining,
                    map: RationalMap::new(num, den)?,
                }
            }
        };
        let mut blocks = Vec::with_capacity(dto.blocks.len());
        for b in &dto.blocks {
            blocks.push(ApproxBlock {
                primes: b.primes.clone(),
                target: parse_rationals(&b.target)?,
                modulus: parse_rational(&b.c)?,
                preimage: b.preimage.as_deref().map(parse_rationals).transpose()?,
            });
        }
        let problem = BlockApproxProblem { variety, blocks };
        problem.validate()?;
        Ok(problem)
    }

    pub fn to_json(&self) -> String {
        let variety = match &self.variety {
            Variety::Affine { dim } => VarietyDto::Affine { n: *dim },
            Variety::Parametrized { defining, map } => VarietyDto::Parametrized {
                n: map.outputs(),
                params: map.inputs(),
                defining: defining.iter().map(poly_to_dto).collect(),
                map: MapDto {
                    num: map.num.iter().map(poly_to_dto).collect(),
                    den: map.den.iter().map(poly_to_dto).collect(),
                },
            },
        };
        let blocks = self
            .blocks
            .iter()
            .map(|b| BlockDto {
                primes: b.primes.clone(),
                target: rationals_to_strings(&b.target),
                c: b.modulus.to_string(),
                preimage: b.preimage.as_deref().map(rationals_to_strings),
            })
            .collect();
        serde_json::to_string(&ProblemDto { variety, blocks }).expect("serializable")
    }
}

impl SolutionCertificate {
    pub fn from_json(text: &str) -> Result<SolutionCertificate, BlockError> {
        let dto: CertificateDto =
            serde_json::from_str(text).map_err(|e| BlockError::Json(e.to_string()))?;
        let margins = dto
            .margins
            .iter()
            .map(|m| {
                Ok(Margin {
                    block: m.block,
                    prime: m.prime,
                    separation: parse_val(&m.separation)?,
                    bound: m.bound,
                })
            })
            .collect::<Result<Vec<_>, BlockError>>()?;
        Ok(SolutionCertificate {
            point: parse_rationals(&dto.point)?,
            margins,
            residuals: parse_rationals(&dto.residuals)?,
        })
    }

    pub fn to_json(&self) -> String {
        let dto = CertificateDto {
            point: rationals_to_strings(&self.point),
            margins: self
                .margins
                .iter()
                .map(|m| MarginDto {
                    block: m.block,
                    prime: m.prime,
                    separation: m.separation.to_string(),
                    bound: m.bound,
                })
                .collect(),
            residuals: rationals_to_strings(&self.residuals),
        };
        serde_json::to_string(&dto).expect("serializable")
    }
}
