//! Certificate re-checking. Positive certificates are self-contained: every
//! object they mention is embedded, and the checks below never re-run a
//! search. Negative certificates carry no witness beyond the inputs, so they
//! are re-checked by reproducing the (deterministic) rejection.

use crate::formats::{self, ParseError};
use group_structures::embed::{EmbeddingProblem, SolveOutcome};
use group_structures::extend::{complete_to_cartesian, extend_epimorphism, ExtendOptions};
use group_structures::fiber::{check_cartesian, fiber_product};
use group_structures::cover::extend_to_cover;
use group_structures::partition::{
    default_local_data, special_partition, validate_special_partition, Block, SpecialPartition,
};
use group_structures::structure::quotient_structure;
use group_structures::{GroupHom, GroupStructure, Subgroup};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};
use std::sync::Arc;
use valuations::{
    eval_patch, is_prime, sharp_hensel_lift, solve_affine, solve_parametrized, val,
    verify_ball_partition, BallPart, BallPartition, BlockApproxProblem, LiftProblem,
    SolutionCertificate, Val, ValuationPoint, Variety, Verdict,
};

pub struct Verification {
    pub kind: String,
    pub ok: bool,
    pub detail: String,
}

type Check = Result<(bool, String), ParseError>;

fn pass() -> Check {
    Ok((true, String::new()))
}

fn fail(detail: impl Into<String>) -> Check {
    Ok((false, detail.into()))
}

pub fn verify_record(v: &Value) -> Result<Verification, ParseError> {
    let kind = formats::get_str(v, "kind")?;
    let (ok, detail) = match kind {
        "structure" => check_structure(v)?,
        "quotient" => check_quotient(v)?,
        "fiber-product" => check_fiber_product(v)?,
        "cartesian" => check_cartesian_record(v)?,
        "partition" => check_partition(v)?,
        "extend-epi" => check_extend_epi(v)?,
        "cartesian-completion" => check_completion(v)?,
        "embedding" => check_embedding(v)?,
        "cover" => check_cover(v)?,
        "valuation" => check_valuation(v)?,
        "hensel" => check_hensel(v)?,
        "balls" => check_balls(v)?,
        "blocks" => check_blocks(v)?,
        other => {
            return Err(ParseError::at(
                0,
                format!("unknown certificate kind {other:?}"),
            ))
        }
    };
    Ok(Verification {
        kind: kind.to_string(),
        ok,
        detail,
    })
}

fn str_list(v: &Value, key: &str) -> Result<Vec<String>, ParseError> {
    formats::get_list(v, key)?
        .iter()
        .map(|e| {
            e.as_str()
                .map(str::to_string)
                .ok_or_else(|| ParseError::at(0, format!("{key:?} must hold strings")))
        })
        .collect()
}

fn nested_usize_list(v: &Value, key: &str) -> Result<Vec<Vec<usize>>, ParseError> {
    formats::get_list(v, key)?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| ParseError::at(0, format!("{key:?} must hold arrays")))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(|n| n as usize)
                        .ok_or_else(|| ParseError::at(0, format!("{key:?} must hold integers")))
                })
                .collect()
        })
        .collect()
}

fn embedded_structure(v: &Value, key: &str) -> Result<Arc<GroupStructure>, ParseError> {
    Ok(Arc::new(formats::parse_structure(formats::get_str(
        v, key,
    )?)?))
}

fn subgroup_from(members: Vec<usize>) -> Subgroup {
    let mut m = members;
    m.sort_unstable();
    m.dedup();
    Subgroup::from_sorted_members(m)
}

fn check_structure(v: &Value) -> Check {
    let s = embedded_structure(v, "structure")?;
    let claimed_valid = formats::get_bool(v, "valid")?;
    let report = s.validate();
    let valid = report.violations.is_empty();
    if valid != claimed_valid {
        return fail(format!("validity recomputes to {valid}"));
    }
    if valid {
        let claimed_proper = formats::get_bool(v, "proper")?;
        if report.proper != claimed_proper {
            return fail(format!("properness recomputes to {}", report.proper));
        }
    } else {
        let claimed = str_list(v, "violations")?;
        let now: Vec<String> = report.violations.iter().map(|d| d.to_string()).collect();
        if claimed != now {
            return fail("the violation list does not match");
        }
    }
    pass()
}

fn check_quotient(v: &Value) -> Check {
    let claimed_ok = formats::get_bool(v, "ok")?;
    let s = embedded_structure(v, "structure")?;
    let by = formats::get_usize_list(v, "by")?;
    let rebuilt = s
        .group()
        .verify_subgroup(&by)
        .map_err(|e| e.to_string())
        .and_then(|n| quotient_structure(&s, &n).map_err(|e| e.to_string()));
    match (claimed_ok, rebuilt) {
        (false, Err(_)) => pass(),
        (false, Ok(_)) => fail("the quotient now succeeds"),
        (true, Err(e)) => fail(format!("the quotient now fails: {e}")),
        (true, Ok((q, projection))) => {
            if formats::write_structure(&q) != formats::get_str(v, "quotient")? {
                return fail("the quotient structure does not match");
            }
            if projection.hom().map() != formats::get_usize_list(v, "hom")?.as_slice() {
                return fail("the projection group map does not match");
            }
            if projection.point_map() != formats::get_usize_list(v, "pointmap")?.as_slice() {
                return fail("the projection point map does not match");
            }
            pass()
        }
    }
}

fn check_fiber_product(v: &Value) -> Check {
    let claimed_ok = formats::get_bool(v, "ok")?;
    let first = formats::morphism_from_record(formats::get(v, "first")?)?;
    let second = formats::morphism_from_record(formats::get(v, "second")?)?;
    match (claimed_ok, fiber_product(&first, &second)) {
        (false, Err(_)) => pass(),
        (false, Ok(_)) => fail("the fiber product now succeeds"),
        (true, Err(e)) => fail(format!("the fiber product now fails: {e}")),
        (true, Ok(fp)) => {
            if formats::write_structure(&fp.product) != formats::get_str(v, "product")? {
                return fail("the product structure does not match");
            }
            for (proj, key) in [(&fp.proj_first, "proj_first"), (&fp.proj_second, "proj_second")]
            {
                let rec = formats::get(v, key)?;
                if proj.hom().map() != formats::get_usize_list(rec, "hom")?.as_slice()
                    || proj.point_map() != formats::get_usize_list(rec, "pointmap")?.as_slice()
                {
                    return fail(format!("{key} does not match"));
                }
            }
            if json!(fp.pairs) != *formats::get(v, "pairs")?
                || json!(fp.point_pairs) != *formats::get(v, "point_pairs")?
            {
                return fail("the element or point pairing does not match");
            }
            pass()
        }
    }
}

fn check_cartesian_record(v: &Value) -> Check {
    let p = formats::morphism_from_record(formats::get(v, "p")?)?;
    let q = formats::morphism_from_record(formats::get(v, "q")?)?;
    let alpha = formats::morphism_from_record(formats::get(v, "alpha")?)?;
    let phi = formats::morphism_from_record(formats::get(v, "phi")?)?;
    let claimed = formats::get_bool(v, "cartesian")?;
    let has_report = v.get("commutes").is_some();
    match (has_report, check_cartesian(&p, &q, &alpha, &phi)) {
        (false, Err(_)) => {
            if claimed {
                fail("a failed square cannot be cartesian")
            } else {
                pass()
            }
        }
        (false, Ok(_)) => fail("the square now produces a report"),
        (true, Err(e)) => fail(format!("the square now fails outright: {e}")),
        (true, Ok(report)) => {
            let flags = [
                (report.commutes, "commutes"),
                (report.group_bijective, "group_bijective"),
                (report.points_bijective, "points_bijective"),
                (report.subgroups_match, "subgroups_match"),
            ];
            for (now, key) in flags {
                if now != formats::get_bool(v, key)? {
                    return fail(format!("{key} recomputes to {now}"));
                }
            }
            if report.is_cartesian() != claimed {
                return fail(format!("cartesian recomputes to {}", report.is_cartesian()));
            }
            pass()
        }
    }
}

fn partition_from_record(v: &Value, key: &str) -> Result<SpecialPartition, ParseError> {
    let blocks = formats::get_list(v, key)?
        .iter()
        .map(|b| {
            Ok(Block {
                base: formats::get_u64(b, "base")? as usize,
                points: formats::get_usize_list(b, "points")?,
                group: subgroup_from(formats::get_usize_list(b, "group")?),
                transversal: formats::get_usize_list(b, "transversal")?,
            })
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    Ok(SpecialPartition { blocks })
}

fn check_partition(v: &Value) -> Check {
    let claimed_ok = formats::get_bool(v, "ok")?;
    let s = embedded_structure(v, "structure")?;
    let pins = formats::get_usize_list(v, "pins")?;
    if !claimed_ok {
        let local = default_local_data(&s);
        return match special_partition(&s, &local, &pins) {
            Err(_) => pass(),
            Ok(part) => {
                if validate_special_partition(&s, &part).is_empty() {
                    fail("the partition now validates")
                } else {
                    pass()
                }
            }
        };
    }
    let part = partition_from_record(v, "blocks")?;
    let defects = validate_special_partition(&s, &part);
    if let Some(d) = defects.first() {
        return fail(format!("the partition no longer validates: {d}"));
    }
    let bases: Vec<usize> = part.blocks.iter().map(|b| b.base).collect();
    if let Some(&p) = pins.iter().find(|p| !bases.contains(p)) {
        return fail(format!("pin {p} is not a block base"));
    }
    pass()
}

fn check_extend_epi(v: &Value) -> Check {
    let claimed_ok = formats::get_bool(v, "ok")?;
    let s = embedded_structure(v, "structure")?;
    let map_v = formats::get(v, "map")?;
    let donor = embedded_structure(map_v, "group")?;
    let hom = GroupHom::new(
        Arc::clone(s.group()),
        Arc::clone(donor.group()),
        formats::get_usize_list(map_v, "hom")?,
    )
    .map_err(|e| ParseError::at(0, format!("bad map record: {e}")))?;
    let pins = formats::get_usize_list(v, "pins")?;
    if !claimed_ok {
        let options = ExtendOptions {
            pins,
            ..ExtendOptions::default()
        };
        return match extend_epimorphism(&s, &hom, &options) {
            Err(_) => pass(),
            Ok(_) => fail("the extension now succeeds"),
        };
    }
    let epi = formats::morphism_from_record(formats::get(v, "epi")?)?;
    if formats::write_structure(epi.source()) != formats::get_str(v, "structure")? {
        return fail("the morphism's source is not the recorded structure");
    }
    if epi.hom().map() != hom.map() {
        return fail("the group map does not match");
    }
    if epi.hom().target().as_ref() != donor.group().as_ref() {
        return fail("the target group does not match");
    }
    let class = epi.classify();
    if !class.epimorphism {
        let why = class
            .defect
            .map(|d| d.to_string())
            .unwrap_or_else(|| "unclassified".into());
        return fail(format!("not an epimorphism: {why}"));
    }
    for &pin in &pins {
        if pin >= epi.source().points() {
            return fail(format!("pin {pin} is out of range"));
        }
        let image = epi.hom().image_of(epi.source().assigned(pin));
        let at_image = epi.target().assigned(epi.apply_point(pin));
        if image.members() != at_image.members() {
            return fail(format!("pin {pin} is not carried onto its subgroup"));
        }
    }
    let part = partition_from_record(v, "blocks")?;
    if let Some(d) = validate_special_partition(epi.source(), &part).first() {
        return fail(format!("the recorded partition no longer validates: {d}"));
    }
    pass()
}

fn check_completion(v: &Value) -> Check {
    let claimed_ok = formats::get_bool(v, "ok")?;
    let psi = formats::morphism_from_record(formats::get(v, "psi")?)?;
    if !claimed_ok && v.get("beta").is_none() {
        return match complete_to_cartesian(&psi) {
            Err(_) => pass(),
            Ok(_) => fail("the completion now succeeds"),
        };
    }
    let beta = formats::morphism_from_record(formats::get(v, "beta")?)?;
    let alpha = formats::morphism_from_record(formats::get(v, "alpha")?)?;
    let phi = formats::morphism_from_record(formats::get(v, "phi")?)?;
    let shrink = formats::get_usize_list(v, "shrink")?;
    if !psi.classify().cover {
        return fail("psi is not a cover");
    }
    let h = psi.source().group();
    match h.verify_subgroup(&shrink) {
        Err(e) => return fail(format!("the shrinking subgroup is invalid: {e}")),
        Ok(n) => {
            if !h.is_normal(&n) {
                return fail("the shrinking subgroup is not normal");
            }
        }
    }
    let claimed = formats::get_bool(v, "cartesian")?;
    let now = check_cartesian(&beta, &psi, &alpha, &phi)
        .map(|r| r.is_cartesian())
        .unwrap_or(false);
    if now != claimed {
        return fail(format!("cartesian recomputes to {now}"));
    }
    pass()
}

fn check_embedding(v: &Value) -> Check {
    let wellposed = formats::get_bool(v, "wellposed")?;
    let phi = formats::morphism_from_record(formats::get(v, "phi")?)?;
    let alpha = formats::morphism_from_record(formats::get(v, "alpha")?)?;
    if !wellposed {
        return match EmbeddingProblem::new(phi, alpha) {
            Err(_) => pass(),
            Ok(_) => fail("the problem is now well-posed"),
        };
    }
    let solvable = formats::get_bool(v, "solvable")?;
    let problem = match EmbeddingProblem::new(phi.clone(), alpha.clone()) {
        Ok(p) => p,
        Err(e) => return fail(format!("no longer well-posed: {e}")),
    };
    if solvable {
        let gamma = formats::morphism_from_record(formats::get(v, "solution")?)?;
        let class = gamma.classify();
        if !class.morphism {
            let why = class
                .defect
                .map(|d| d.to_string())
                .unwrap_or_else(|| "unclassified".into());
            return fail(format!("the solution is not a morphism: {why}"));
        }
        match gamma.then(&alpha) {
            Err(e) => fail(format!("the solution does not compose with alpha: {e}")),
            Ok(composed) => {
                if composed == phi {
                    pass()
                } else {
                    fail("alpha after the solution is not phi")
                }
            }
        }
    } else {
        let route = formats::get_str(v, "route")?;
        let solved = match route {
            "direct" => problem.solve_direct(),
            "factored" => problem.solve_via_factorization(),
            other => {
                return Err(ParseError::at(0, format!("unknown route {other:?}")));
            }
        };
        match solved {
            Ok(SolveOutcome::Solved(_)) => fail("a solution now exists"),
            Ok(SolveOutcome::Unsolvable) | Err(_) => pass(),
        }
    }
}

fn check_cover(v: &Value) -> Check {
    let claimed_ok = formats::get_bool(v, "ok")?;
    let base = embedded_structure(v, "base")?;
    let donor = embedded_structure(v, "group")?;
    let alpha = GroupHom::new(
        Arc::clone(donor.group()),
        Arc::clone(base.group()),
        formats::get_usize_list(v, "alpha")?,
    )
    .map_err(|e| ParseError::at(0, format!("bad cover record: {e}")))?;
    let lifts: Vec<Subgroup> = nested_usize_list(v, "lifts")?
        .into_iter()
        .map(subgroup_from)
        .collect();
    if !claimed_ok {
        return match extend_to_cover(&base, &alpha, &lifts) {
            Err(_) => pass(),
            Ok(ext) => {
                if ext.cover.classify().cover {
                    fail("the cover now builds and classifies")
                } else {
                    pass()
                }
            }
        };
    }
    let cover = formats::morphism_from_record(formats::get(v, "cover")?)?;
    if !cover.classify().cover {
        return fail("the recorded morphism is not a cover");
    }
    if cover.target().as_ref() != base.as_ref() {
        return fail("the cover's target is not the recorded base");
    }
    if cover.hom().map() != alpha.map() {
        return fail("the cover's group map is not the recorded alpha");
    }
    let base_points = formats::get_usize_list(v, "base_points")?;
    if base_points.len() != lifts.len() {
        return fail("one base point per lift is required");
    }
    for (i, &bp) in base_points.iter().enumerate() {
        if bp >= cover.source().points() {
            return fail(format!("base point {bp} is out of range"));
        }
        if cover.source().assigned(bp).members() != lifts[i].members() {
            return fail(format!("base point {bp} does not carry lift {i}"));
        }
    }
    pass()
}

fn check_valuation(v: &Value) -> Check {
    let prime = formats::get(v, "prime")?.as_u64();
    let q = formats::parse_rational(formats::get_str(v, "value")?)?;
    let point = match prime {
        None => ValuationPoint::Trivial,
        Some(p) => ValuationPoint::prime(p)
            .map_err(|e| ParseError::at(0, format!("bad prime {p}: {e}")))?,
    };
    let claimed = formats::get_str(v, "val")?;
    let now = point.value(&q).to_string();
    if now != claimed {
        return fail(format!("the valuation recomputes to {now}"));
    }
    if let Some(expr_text) = v.get("expr").and_then(Value::as_str) {
        let expr = formats::parse_patch(expr_text)?;
        let member = formats::get_bool(v, "member")?;
        if eval_patch(&point, &expr) != member {
            return fail(format!("membership recomputes to {}", !member));
        }
    }
    pass()
}

fn check_hensel(v: &Value) -> Check {
    let claimed_ok = formats::get_bool(v, "ok")?;
    let prime = formats::get_u64(v, "prime")?;
    if !is_prime(prime) {
        return Err(ParseError::at(0, format!("{prime} is not a prime")));
    }
    let f = formats::parse_xpoly(formats::get_str(v, "poly")?)?;
    let c0 = formats::parse_rational(formats::get_str(v, "start")?)?;
    let b = formats::get_rational_list(v, "at")?;
    let eps = formats::get_i64(v, "eps")?;
    let prec = formats::get_u64(v, "prec")? as u32;
    if b.len() != f.vars() {
        return Err(ParseError::at(
            0,
            format!("`at` has {} entries, the polynomial has {} parameters", b.len(), f.vars()),
        ));
    }
    if !claimed_ok {
        let b0 = formats::get_rational_list(v, "base")?;
        let lp = LiftProblem {
            f,
            b0,
            c0,
            prime,
            epsilon: eps,
            precision: prec,
        };
        return match sharp_hensel_lift(&lp, &b) {
            Err(_) => pass(),
            Ok(_) => fail("the lift now succeeds"),
        };
    }
    let root = formats::get(v, "root")?;
    let val_text = formats::get_str(root, "valuation")?;
    let precision = formats::get_u64(root, "precision")? as u32;
    if precision != prec {
        return fail("the root's precision is not the requested precision");
    }
    let p_big = BigInt::from(prime);
    if val_text == "inf" {
        let zero = BigRational::zero();
        if !f.eval(&b, &zero).is_zero() {
            return fail("zero is claimed as the root but is not one");
        }
        if val(&(-&c0), prime) <= Val::Finite(eps) {
            return fail("the root does not separate from the start");
        }
        return pass();
    }
    let vexp: i64 = val_text
        .parse()
        .map_err(|_| ParseError::at(0, format!("bad root valuation {val_text:?}")))?;
    let unit: BigUint = formats::get_str(root, "unit")?
        .parse()
        .map_err(|_| ParseError::at(0, "bad root unit"))?;
    if unit.is_zero() || (&unit % prime).is_zero() {
        return fail("the root unit must be a nonzero non-multiple of the prime");
    }
    if unit >= BigUint::from(prime).pow(precision) {
        return fail("the root unit exceeds its precision window");
    }
    let c = if vexp >= 0 {
        BigRational::from(BigInt::from(unit) * p_big.pow(vexp as u32))
    } else {
        BigRational::new(BigInt::from(unit), p_big.pow((-vexp) as u32))
    };
    let mu = val(&f.eval(&b, &c), prime);
    let known = vexp + precision as i64;
    if mu != Val::Infinite {
        let mu = mu.finite().expect("finite Val");
        let delta = match val(&f.dx().eval(&b, &c), prime).finite() {
            Some(d) => d,
            None => return fail("the derivative vanishes at the approximation"),
        };
        // Newton from c converges to a root c* with v(c* - c) = mu - delta,
        // provided mu > 2 delta; the claimed digits are then genuine digits
        // of c* exactly when mu - delta covers the known exponent.
        if mu - 2 * delta < 1 {
            return fail("the residual does not dominate the derivative");
        }
        if mu - delta < known {
            return fail("the claimed digits are not certified by the residual");
        }
    }
    if val(&(&c - &c0), prime) <= Val::Finite(eps) {
        return fail("the root does not separate from the start");
    }
    pass()
}

fn check_balls(v: &Value) -> Check {
    let claimed_ok = formats::get_bool(v, "ok")?;
    let center = formats::get_rational_list(v, "center")?;
    let primes = formats::get_u64_list(v, "primes")?;
    let atoms = formats::get_list(v, "atoms")?
        .iter()
        .map(|a| {
            let poly = formats::poly_from_json(formats::get(a, "poly")?, center.len())?;
            let bound = formats::parse_rational(formats::get_str(a, "bound")?)?;
            Ok((poly, bound))
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    let parts = formats::get_list(v, "parts")?
        .iter()
        .map(|p| {
            Ok(BallPart {
                primes: formats::get_u64_list(p, "primes")?,
                radius: formats::parse_rational(formats::get_str(p, "radius")?)?,
            })
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    let samples = formats::get_u64(v, "samples")? as u32;
    let seed = formats::get_u64(v, "seed")?;
    let partition = BallPartition { parts };
    match verify_ball_partition(&center, &atoms, &primes, &partition, samples, seed) {
        Err(e) => fail(format!("cannot re-check the partition: {e}")),
        Ok(check) => {
            if check.holds != claimed_ok {
                fail(format!("sampling recomputes to {}", check.holds))
            } else {
                pass()
            }
        }
    }
}

fn check_blocks(v: &Value) -> Check {
    let claimed_ok = formats::get_bool(v, "ok")?;
    let problem_value = formats::get(v, "problem")?;
    let problem = BlockApproxProblem::from_json(&problem_value.to_string())
        .map_err(|e| ParseError::at(0, format!("bad embedded problem: {e}")))?;
    if !claimed_ok {
        let solved = match &problem.variety {
            Variety::Affine { .. } => solve_affine(&problem),
            Variety::Parametrized { .. } => solve_parametrized(&problem),
        };
        return match solved {
            Err(_) => pass(),
            Ok(_) => fail("the problem now solves"),
        };
    }
    let cert_value = formats::get(v, "certificate")?;
    let cert = SolutionCertificate::from_json(&cert_value.to_string())
        .map_err(|e| ParseError::at(0, format!("bad embedded certificate: {e}")))?;
    for key in ["point", "margins"] {
        if let (Some(mirror), Some(inner)) = (v.get(key), cert_value.get(key)) {
            if mirror != inner {
                return fail(format!("the top-level {key} does not match the certificate"));
            }
        }
    }
    match valuations::verify_solution(&problem, &cert.point) {
        Verdict::Rejected(r) => fail(format!("the point is rejected: {}", r.detail)),
        Verdict::Accepted(recomputed) => {
            if recomputed.to_json() != cert.to_json() {
                fail("the recomputed certificate differs")
            } else {
                pass()
            }
        }
    }
}
