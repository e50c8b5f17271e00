//! One function per subcommand. Every command emits exactly one JSON record
//! (with a `kind` field) on standard out; `Pass` exits 0, `Fail` exits 1 with
//! the record as witness, and `Failure` exits 2 for input that never reached
//! the library.

use crate::formats::{self, ParseError};
use crate::verify;
use group_structures::cover::extend_to_cover;
use group_structures::embed::{EmbeddingProblem, SolveOutcome};
use group_structures::extend::{complete_to_cartesian, extend_epimorphism, ExtendOptions};
use group_structures::fiber::{check_cartesian, fiber_product};
use group_structures::partition::{
    default_local_data, special_partition, validate_special_partition,
};
use group_structures::structure::quotient_structure;
use serde_json::{json, Value};
use std::path::Path;
use valuations::{
    ball_partition, eval_patch, is_prime, sharp_hensel_lift, solve_affine, solve_parametrized,
    verify_ball_partition, BlockApproxProblem, LiftProblem, ValuationPoint, Variety,
};

pub enum Outcome {
    Pass(Value),
    Fail(Value),
}

/// Malformed input; reported on standard error with exit code 2.
pub struct Failure(pub String);

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure(e.to_string())
    }
}

pub const DEFAULT_SEED: u64 = 1729;

/// Sampling seed: the `SEED` environment variable, or a fixed default.
pub fn seed_from_env() -> Result<u64, Failure> {
    match std::env::var("SEED") {
        Err(_) => Ok(DEFAULT_SEED),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure(format!("SEED must be an unsigned integer, found {s:?}"))),
    }
}

pub fn check_structure(file: &Path) -> Result<Outcome, Failure> {
    let s = formats::load_structure(file)?;
    let report = s.validate();
    let text = formats::write_structure(&s);
    if report.violations.is_empty() {
        Ok(Outcome::Pass(json!({
            "kind": "structure",
            "valid": true,
            "proper": report.proper,
            "structure": text,
        })))
    } else {
        let violations: Vec<String> = report.violations.iter().map(|d| d.to_string()).collect();
        Ok(Outcome::Fail(json!({
            "kind": "structure",
            "valid": false,
            "proper": false,
            "violations": violations,
            "structure": text,
        })))
    }
}

pub fn quotient(file: &Path, by: &[usize]) -> Result<Outcome, Failure> {
    let s = formats::load_structure(file)?;
    let text = formats::write_structure(&s);
    let fail = |reason: String| {
        Outcome::Fail(json!({
            "kind": "quotient",
            "ok": false,
            "structure": text,
            "by": by,
            "reason": reason,
        }))
    };
    let n = match s.group().verify_subgroup(by) {
        Ok(n) => n,
        Err(e) => return Ok(fail(format!("`--by` does not name a subgroup: {e}"))),
    };
    match quotient_structure(&s, &n) {
        Err(e) => Ok(fail(e.to_string())),
        Ok((q, projection)) => Ok(Outcome::Pass(json!({
            "kind": "quotient",
            "ok": true,
            "structure": formats::write_structure(&s),
            "by": n.members(),
            "quotient": formats::write_structure(&q),
            "hom": projection.hom().map(),
            "pointmap": projection.point_map(),
        }))),
    }
}

pub fn fiber_product_cmd(first: &Path, second: &Path) -> Result<Outcome, Failure> {
    let alpha = formats::load_morphism(first)?;
    let phi = formats::load_morphism(second)?;
    match fiber_product(&alpha, &phi) {
        Err(e) => Ok(Outcome::Fail(json!({
            "kind": "fiber-product",
            "ok": false,
            "first": formats::morphism_record(&alpha),
            "second": formats::morphism_record(&phi),
            "reason": e.to_string(),
        }))),
        Ok(fp) => Ok(Outcome::Pass(json!({
            "kind": "fiber-product",
            "ok": true,
            "first": formats::morphism_record(&alpha),
            "second": formats::morphism_record(&phi),
            "product": formats::write_structure(&fp.product),
            "proj_first": {"hom": fp.proj_first.hom().map(), "pointmap": fp.proj_first.point_map()},
            "proj_second": {"hom": fp.proj_second.hom().map(), "pointmap": fp.proj_second.point_map()},
            "pairs": fp.pairs,
            "point_pairs": fp.point_pairs,
        }))),
    }
}

pub fn cartesian_check(
    p: &Path,
    q: &Path,
    alpha: &Path,
    phi: &Path,
) -> Result<Outcome, Failure> {
    let p = formats::load_morphism(p)?;
    let q = formats::load_morphism(q)?;
    let alpha = formats::load_morphism(alpha)?;
    let phi = formats::load_morphism(phi)?;
    let legs = json!({
        "p": formats::morphism_record(&p),
        "q": formats::morphism_record(&q),
        "alpha": formats::morphism_record(&alpha),
        "phi": formats::morphism_record(&phi),
    });
    match check_cartesian(&p, &q, &alpha, &phi) {
        Err(e) => {
            let mut rec = legs;
            rec["kind"] = json!("cartesian");
            rec["cartesian"] = json!(false);
            rec["error"] = json!(e.to_string());
            Ok(Outcome::Fail(rec))
        }
        Ok(report) => {
            let mut rec = legs;
            rec["kind"] = json!("cartesian");
            rec["commutes"] = json!(report.commutes);
            rec["group_bijective"] = json!(report.group_bijective);
            rec["points_bijective"] = json!(report.points_bijective);
            rec["subgroups_match"] = json!(report.subgroups_match);
            rec["cartesian"] = json!(report.is_cartesian());
            Ok(if report.is_cartesian() {
                Outcome::Pass(rec)
            } else {
                Outcome::Fail(rec)
            })
        }
    }
}

fn blocks_json(partition: &group_structures::partition::SpecialPartition) -> Value {
    let blocks: Vec<Value> = partition
        .blocks
        .iter()
        .map(|b| {
            json!({
                "base": b.base,
                "points": b.points,
                "group": b.group.members(),
                "transversal": b.transversal,
            })
        })
        .collect();
    Value::Array(blocks)
}

pub fn partition(file: &Path, pins: &[usize]) -> Result<Outcome, Failure> {
    let s = formats::load_structure(file)?;
    let text = formats::write_structure(&s);
    let local = default_local_data(&s);
    match special_partition(&s, &local, pins) {
        Err(e) => Ok(Outcome::Fail(json!({
            "kind": "partition",
            "ok": false,
            "structure": text,
            "pins": pins,
            "reason": e.to_string(),
        }))),
        Ok(part) => {
            let defects: Vec<String> = validate_special_partition(&s, &part)
                .iter()
                .map(|d| d.to_string())
                .collect();
            let ok = defects.is_empty();
            let rec = json!({
                "kind": "partition",
                "ok": ok,
                "structure": text,
                "pins": pins,
                "blocks": blocks_json(&part),
                "defects": defects,
            });
            Ok(if ok { Outcome::Pass(rec) } else { Outcome::Fail(rec) })
        }
    }
}

pub fn extend_epi(file: &Path, map_file: &Path, pins: &[usize]) -> Result<Outcome, Failure> {
    let s = formats::load_structure(file)?;
    let m = formats::load_morphism(map_file)?;
    if m.source().group().as_ref() != s.group().as_ref() {
        return Err(Failure(
            "the map's source group does not match the structure's group".into(),
        ));
    }
    let text = formats::write_structure(&s);
    let map_json = json!({
        "group": formats::bare_structure_text(m.target().group()),
        "hom": m.hom().map(),
    });
    let options = ExtendOptions {
        pins: pins.to_vec(),
        ..ExtendOptions::default()
    };
    match extend_epimorphism(&s, m.hom(), &options) {
        Err(e) => Ok(Outcome::Fail(json!({
            "kind": "extend-epi",
            "ok": false,
            "structure": text,
            "map": map_json,
            "pins": pins,
            "reason": e.to_string(),
        }))),
        Ok((epi, part)) => Ok(Outcome::Pass(json!({
            "kind": "extend-epi",
            "ok": true,
            "structure": text,
            "map": map_json,
            "pins": pins,
            "epi": formats::morphism_record(&epi),
            "blocks": blocks_json(&part),
        }))),
    }
}

pub fn complete_cartesian(file: &Path) -> Result<Outcome, Failure> {
    let psi = formats::load_morphism(file)?;
    match complete_to_cartesian(&psi) {
        Err(e) => Ok(Outcome::Fail(json!({
            "kind": "cartesian-completion",
            "ok": false,
            "psi": formats::morphism_record(&psi),
            "reason": e.to_string(),
        }))),
        Ok(square) => {
            let cartesian = check_cartesian(&square.beta, &psi, &square.alpha, &square.phi)
                .map(|r| r.is_cartesian())
                .unwrap_or(false);
            let rec = json!({
                "kind": "cartesian-completion",
                "ok": cartesian,
                "psi": formats::morphism_record(&psi),
                "beta": formats::morphism_record(&square.beta),
                "alpha": formats::morphism_record(&square.alpha),
                "phi": formats::morphism_record(&square.phi),
                "shrink": square.shrink.members(),
                "cartesian": cartesian,
            });
            Ok(if cartesian {
                Outcome::Pass(rec)
            } else {
                Outcome::Fail(rec)
            })
        }
    }
}

pub fn solve_embedding(file: &Path, route: &str) -> Result<Outcome, Failure> {
    if route != "direct" && route != "factored" {
        return Err(Failure(format!(
            "unknown route {route:?}, expected `direct` or `factored`"
        )));
    }
    let (phi, alpha) = formats::load_embedding_problem(file)?;
    let base = json!({
        "kind": "embedding",
        "route": route,
        "phi": formats::morphism_record(&phi),
        "alpha": formats::morphism_record(&alpha),
    });
    let problem = match EmbeddingProblem::new(phi, alpha) {
        Err(e) => {
            let mut rec = base;
            rec["wellposed"] = json!(false);
            rec["solvable"] = json!(false);
            rec["reason"] = json!(e.to_string());
            return Ok(Outcome::Fail(rec));
        }
        Ok(p) => p,
    };
    let solved = if route == "direct" {
        problem.solve_direct()
    } else {
        problem.solve_via_factorization()
    };
    let mut rec = base;
    rec["wellposed"] = json!(true);
    match solved {
        Err(e) => {
            rec["solvable"] = json!(false);
            rec["reason"] = json!(e.to_string());
            Ok(Outcome::Fail(rec))
        }
        Ok(SolveOutcome::Unsolvable) => {
            rec["solvable"] = json!(false);
            Ok(Outcome::Fail(rec))
        }
        Ok(SolveOutcome::Solved(gamma)) => {
            rec["solvable"] = json!(true);
            rec["solution"] = formats::morphism_record(&gamma);
            Ok(Outcome::Pass(rec))
        }
    }
}

pub fn build_cover(file: &Path) -> Result<Outcome, Failure> {
    let spec = formats::load_cover_spec(file)?;
    let lifts: Vec<&[usize]> = spec.lifts.iter().map(|l| l.members()).collect();
    let base = json!({
        "kind": "cover",
        "base": formats::write_structure(&spec.base),
        "group": formats::bare_structure_text(&spec.group),
        "alpha": spec.alpha.map(),
        "lifts": lifts,
    });
    match extend_to_cover(&spec.base, &spec.alpha, &spec.lifts) {
        Err(e) => {
            let mut rec = base;
            rec["ok"] = json!(false);
            rec["reason"] = json!(e.to_string());
            Ok(Outcome::Fail(rec))
        }
        Ok(ext) => {
            let classified_cover = ext.cover.classify().cover;
            let mut rec = base;
            rec["ok"] = json!(classified_cover);
            rec["cover"] = formats::morphism_record(&ext.cover);
            rec["base_points"] = json!(ext.base_points);
            Ok(if classified_cover {
                Outcome::Pass(rec)
            } else {
                Outcome::Fail(rec)
            })
        }
    }
}

pub fn val_query(
    prime: Option<u64>,
    value: &str,
    expr: Option<&str>,
) -> Result<Outcome, Failure> {
    let q = formats::parse_rational(value)?;
    let point = match prime {
        None => ValuationPoint::Trivial,
        Some(p) => ValuationPoint::prime(p)
            .map_err(|e| Failure(format!("bad `--prime` value {p}: {e}")))?,
    };
    let mut rec = json!({
        "kind": "valuation",
        "prime": prime,
        "value": q.to_string(),
        "val": point.value(&q).to_string(),
    });
    if let Some(text) = expr {
        let e = formats::parse_patch(text)?;
        rec["expr"] = json!(formats::patch_to_string(&e));
        rec["member"] = json!(eval_patch(&point, &e));
    }
    Ok(Outcome::Pass(rec))
}

#[allow(clippy::too_many_arguments)]
pub fn hensel_lift(
    prime: u64,
    poly: &str,
    start: &str,
    base: &str,
    at: Option<&str>,
    eps: i64,
    prec: u32,
) -> Result<Outcome, Failure> {
    let f = formats::parse_xpoly(poly)?;
    let c0 = formats::parse_rational(start)?;
    let b0 = formats::parse_rational_list(base)?;
    let b = match at {
        Some(text) => formats::parse_rational_list(text)?,
        None => b0.clone(),
    };
    let rationals = |v: &[num_rational::BigRational]| -> Vec<String> {
        v.iter().map(|q| q.to_string()).collect()
    };
    let rec = json!({
        "kind": "hensel",
        "prime": prime,
        "poly": poly.split_whitespace().collect::<Vec<_>>().join(" "),
        "start": c0.to_string(),
        "base": rationals(&b0),
        "at": rationals(&b),
        "eps": eps,
        "prec": prec,
    });
    let lp = LiftProblem {
        f,
        b0,
        c0,
        prime,
        epsilon: eps,
        precision: prec,
    };
    match sharp_hensel_lift(&lp, &b) {
        Err(e) => {
            let mut rec = rec;
            rec["ok"] = json!(false);
            rec["reason"] = json!(e.to_string());
            Ok(Outcome::Fail(rec))
        }
        Ok(root) => {
            let mut rec = rec;
            rec["ok"] = json!(true);
            rec["root"] = json!({
                "valuation": root.valuation().to_string(),
                "unit": root.unit().to_string(),
                "precision": root.precision(),
            });
            Ok(Outcome::Pass(rec))
        }
    }
}

pub fn ball_partition_cmd(
    center: &str,
    primes: &str,
    atoms: &[String],
    samples: u32,
) -> Result<Outcome, Failure> {
    let a = formats::parse_rational_list(center)?;
    if a.is_empty() {
        return Err(Failure("`--center` needs at least one coordinate".into()));
    }
    let ps = formats::parse_prime_list(primes)?;
    if ps.is_empty() {
        return Err(Failure("`--primes` needs at least one prime".into()));
    }
    if let Some(&p) = ps.iter().find(|&&p| !is_prime(p)) {
        return Err(Failure(format!("{p} is not a prime")));
    }
    if atoms.is_empty() {
        return Err(Failure("at least one `--atom` is required".into()));
    }
    let parsed: Vec<_> = atoms
        .iter()
        .map(|text| formats::parse_atom(text, a.len()))
        .collect::<Result<_, _>>()?;
    let seed = seed_from_env()?;
    let partition = ball_partition(&a, &parsed, &ps)
        .map_err(|e| Failure(format!("cannot build the partition: {e}")))?;
    let check = verify_ball_partition(&a, &parsed, &ps, &partition, samples, seed)
        .map_err(|e| Failure(format!("cannot sample the partition: {e}")))?;
    let atoms_json: Vec<Value> = parsed
        .iter()
        .map(|(p, bound)| json!({"poly": formats::poly_to_json(p), "bound": bound.to_string()}))
        .collect();
    let parts: Vec<Value> = partition
        .parts
        .iter()
        .map(|part| json!({"primes": part.primes, "radius": part.radius.to_string()}))
        .collect();
    let mut rec = json!({
        "kind": "balls",
        "center": a.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "primes": ps,
        "atoms": atoms_json,
        "parts": parts,
        "samples": samples,
        "seed": seed,
        "ok": check.holds,
    });
    if let Some(failure) = &check.failure {
        rec["failure"] = json!({
            "part": failure.part,
            "prime": failure.prime,
            "atom": failure.atom,
            "x": failure.x.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        });
    }
    Ok(if check.holds {
        Outcome::Pass(rec)
    } else {
        Outcome::Fail(rec)
    })
}

pub fn block_approx(file: &Path) -> Result<Outcome, Failure> {
    let text = formats::read_file(file)?;
    let problem = BlockApproxProblem::from_json(&text)
        .map_err(|e| Failure(format!("{}: {e}", file.display())))?;
    let problem_value: Value =
        serde_json::from_str(&problem.to_json()).expect("problems serialize to valid JSON");
    let solved = match &problem.variety {
        Variety::Affine { .. } => solve_affine(&problem),
        Variety::Parametrized { .. } => solve_parametrized(&problem),
    };
    match solved {
        Err(e) => Ok(Outcome::Fail(json!({
            "kind": "blocks",
            "ok": false,
            "problem": problem_value,
            "reason": e.to_string(),
        }))),
        Ok(cert) => {
            let cert_value: Value = serde_json::from_str(&cert.to_json())
                .expect("certificates serialize to valid JSON");
            let rec = json!({
                "kind": "blocks",
                "ok": true,
                "problem": problem_value,
                "point": cert_value.get("point").cloned().unwrap_or(Value::Null),
                "margins": cert_value.get("margins").cloned().unwrap_or(Value::Null),
                "certificate": cert_value,
            });
            Ok(Outcome::Pass(rec))
        }
    }
}

/// Re-checks every JSON record in `file`, one verdict per line, folded into a
/// single summary record.
pub fn verify_file(file: &Path) -> Result<Outcome, Failure> {
    let text = formats::read_file(file)?;
    let mut results = Vec::new();
    let mut all_ok = true;
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let record: Value = serde_json::from_str(t).map_err(|e| {
            Failure(format!("{}:{}: not a JSON record: {e}", file.display(), i + 1))
        })?;
        let outcome = verify::verify_record(&record)
            .map_err(|e| Failure(format!("{}:{}: {e}", file.display(), i + 1)))?;
        all_ok &= outcome.ok;
        results.push(json!({
            "line": i + 1,
            "target": outcome.kind,
            "ok": outcome.ok,
            "detail": outcome.detail,
        }));
    }
    if results.is_empty() {
        return Err(Failure(format!(
            "{}: no certificates found",
            file.display()
        )));
    }
    let rec = json!({
        "kind": "verify",
        "ok": all_ok,
        "checked": results.len(),
        "results": results,
    });
    Ok(if all_ok {
        Outcome::Pass(rec)
    } else {
        Outcome::Fail(rec)
    })
}
