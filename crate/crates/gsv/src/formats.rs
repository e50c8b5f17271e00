//! File formats: the line-oriented structure grammar, morphism and problem
//! files, flag-value parsers, and the JSON pieces shared by certificates.
//!
//! Structure files:
//!
//! ```text
//! group <name> order <n>
//! <n rows of n indices: the multiplication table>
//! points <m>
//! <m rows of n indices: where each group element sends each point>
//! delta
//! <m member lists: the subgroup assigned to each point>
//! ```
//!
//! Blank lines and `#` comments are skipped everywhere. Names may contain
//! spaces; everything else is whitespace-separated decimal.

use group_structures::{FiniteGroup, GroupHom, GroupStructure, StructureMorphism, Subgroup};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use valuations::{PatchExpr, Poly, XPoly};

#[derive(Debug, Clone)]
pub struct ParseError {
    /// 1-based source line, or 0 when the error is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }

    /// Folds the file name into the message, for errors crossing file loads.
    fn in_file(mut self, path: &Path) -> Self {
        self.message = if self.line == 0 {
            format!("{}: {}", path.display(), self.message)
        } else {
            format!("{}:{}: {}", path.display(), self.line, self.message)
        };
        self.line = 0;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

/// Meaningful lines of a file, with their original 1-based numbers.
struct Cursor<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Cursor { lines, pos: 0 }
    }

    fn next(&mut self, expected: &str) -> Result<(usize, &'a str), ParseError> {
        match self.lines.get(self.pos) {
            Some(&(n, l)) => {
                self.pos += 1;
                Ok((n, l))
            }
            None => {
                let line = self.lines.last().map(|&(n, _)| n).unwrap_or(0);
                Err(ParseError::at(
                    line,
                    format!("unexpected end of file, expected {expected}"),
                ))
            }
        }
    }

    fn expect_done(&self) -> Result<(), ParseError> {
        match self.lines.get(self.pos) {
            None => Ok(()),
            Some(&(n, l)) => Err(ParseError::at(
                n,
                format!("trailing content {:?}", first_word(l)),
            )),
        }
    }
}

fn first_word(l: &str) -> &str {
    l.split_whitespace().next().unwrap_or("")
}

/// Whitespace-separated indices, each required to be below `bound`.
fn parse_indices(
    line: usize,
    text: &str,
    bound: usize,
    what: &str,
) -> Result<Vec<usize>, ParseError> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        let v: usize = tok
            .parse()
            .map_err(|_| ParseError::at(line, format!("bad {what} entry {tok:?}")))?;
        if v >= bound {
            return Err(ParseError::at(
                line,
                format!("{what} entry {v} out of range, expected below {bound}"),
            ));
        }
        out.push(v);
    }
    Ok(out)
}

/// Whitespace-separated indices with no range restriction.
fn parse_numbers(line: usize, text: &str, what: &str) -> Result<Vec<usize>, ParseError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse()
                .map_err(|_| ParseError::at(line, format!("bad {what} entry {tok:?}")))
        })
        .collect()
}

/// Strips a leading keyword and returns the trimmed remainder.
fn keyword_rest<'a>(line: usize, text: &'a str, keyword: &str) -> Result<&'a str, ParseError> {
    match text.strip_prefix(keyword) {
        Some(rest) if rest.is_empty() || rest.starts_with(char::is_whitespace) => Ok(rest.trim()),
        _ => Err(ParseError::at(
            line,
            format!("expected `{keyword}`, found {:?}", first_word(text)),
        )),
    }
}

fn keyword_value<'a>(line: usize, text: &'a str, keyword: &str) -> Result<&'a str, ParseError> {
    let rest = keyword_rest(line, text, keyword)?;
    if rest.is_empty() {
        return Err(ParseError::at(line, format!("`{keyword}` needs a value")));
    }
    Ok(rest)
}

pub fn parse_structure(text: &str) -> Result<GroupStructure, ParseError> {
    let mut cur = Cursor::new(text);

    let (hline, header) = cur.next("a `group <name> order <n>` header")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let well_formed = toks.len() >= 4 && toks[0] == "group" && toks[toks.len() - 2] == "order";
    if !well_formed {
        return Err(ParseError::at(hline, "expected `group <name> order <n>`"));
    }
    let order: usize = toks[toks.len() - 1]
        .parse()
        .map_err(|_| ParseError::at(hline, format!("bad order {:?}", toks[toks.len() - 1])))?;
    if order == 0 {
        return Err(ParseError::at(hline, "the group order must be positive"));
    }
    let name = toks[1..toks.len() - 2].join(" ");

    let mut table = Vec::with_capacity(order * order);
    for r in 0..order {
        let (line, row) = cur.next("a multiplication table row")?;
        let entries = parse_indices(line, row, order, "table")?;
        if entries.len() != order {
            return Err(ParseError::at(
                line,
                format!(
                    "table row {r} has {} entries, expected {order}",
                    entries.len()
                ),
            ));
        }
        table.extend(entries);
    }
    let group = FiniteGroup::from_table(name, table)
        .map_err(|e| ParseError::at(hline, format!("bad multiplication table: {e}")))?;

    let (pline, pts) = cur.next("a `points <m>` line")?;
    let rest = keyword_value(pline, pts, "points")?;
    let points: usize = rest
        .parse()
        .map_err(|_| ParseError::at(pline, format!("bad point count {rest:?}")))?;

    let mut action_rows = Vec::with_capacity(points);
    for x in 0..points {
        let (line, row) = cur.next("an action row")?;
        let entries = parse_indices(line, row, points, "action")?;
        if entries.len() != order {
            return Err(ParseError::at(
                line,
                format!(
                    "action row {x} has {} entries, expected {order}",
                    entries.len()
                ),
            ));
        }
        action_rows.push(entries);
    }

    let (dline, d) = cur.next("a `delta` line")?;
    if d != "delta" {
        return Err(ParseError::at(dline, "expected `delta`"));
    }
    let mut assigned = Vec::with_capacity(points);
    for _ in 0..points {
        let (line, row) = cur.next("a subgroup member list (one per point)")?;
        let mut members = parse_indices(line, row, order, "subgroup")?;
        members.sort_unstable();
        members.dedup();
        assigned.push(Subgroup::from_sorted_members(members));
    }
    cur.expect_done()?;

    GroupStructure::candidate(Arc::new(group), action_rows, assigned)
        .map_err(|e| ParseError::at(0, format!("inconsistent structure: {e}")))
}

pub fn write_structure(s: &GroupStructure) -> String {
    let group = s.group();
    let n = group.order();
    let mut out = format!("group {} order {}\n", group.name(), n);
    for row in group.table().chunks(n) {
        out.push_str(&join_indices(row));
        out.push('\n');
    }
    out.push_str(&format!("points {}\n", s.points()));
    for row in s.action_rows() {
        out.push_str(&join_indices(&row));
        out.push('\n');
    }
    out.push_str("delta\n");
    for x in 0..s.points() {
        out.push_str(&join_indices(s.assigned(x).members()));
        out.push('\n');
    }
    out
}

/// Canonical text of the bare (zero-point) structure on a group.
pub fn bare_structure_text(group: &Arc<FiniteGroup>) -> String {
    let bare = GroupStructure::candidate(Arc::clone(group), Vec::new(), Vec::new())
        .expect("a bare structure has no shape to get wrong");
    write_structure(&bare)
}

fn join_indices(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn parent(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

pub fn read_file(path: &Path) -> Result<String, ParseError> {
    fs::read_to_string(path)
        .map_err(|e| ParseError::at(0, format!("cannot read {}: {e}", path.display())))
}

pub fn load_structure(path: &Path) -> Result<Arc<GroupStructure>, ParseError> {
    let text = read_file(path)?;
    parse_structure(&text)
        .map(Arc::new)
        .map_err(|e| e.in_file(path))
}

/// Morphism files:
///
/// ```text
/// source <path>
/// target <path>
/// hom <n indices>
/// pointmap <indices, one per source point>
/// ```
///
/// Paths are resolved against the morphism file's directory.
pub fn load_morphism(path: &Path) -> Result<StructureMorphism, ParseError> {
    let text = read_file(path)?;
    parse_morphism(&text, parent(path)).map_err(|e| e.in_file(path))
}

fn parse_morphism(text: &str, dir: &Path) -> Result<StructureMorphism, ParseError> {
    let mut cur = Cursor::new(text);
    let (sline, s) = cur.next("a `source <path>` line")?;
    let source_path = keyword_value(sline, s, "source")?;
    let source = load_structure(&dir.join(source_path))?;
    let (tline, t) = cur.next("a `target <path>` line")?;
    let target_path = keyword_value(tline, t, "target")?;
    let target = load_structure(&dir.join(target_path))?;
    let (hline, h) = cur.next("a `hom <indices>` line")?;
    let hom = parse_numbers(hline, keyword_rest(hline, h, "hom")?, "hom")?;
    let (pline, p) = cur.next("a `pointmap <indices>` line")?;
    let point_map = parse_numbers(pline, keyword_rest(pline, p, "pointmap")?, "pointmap")?;
    cur.expect_done()?;
    StructureMorphism::new(source, target, hom, point_map)
        .map_err(|e| ParseError::at(hline, format!("bad morphism data: {e}")))
}

/// Embedding problem files: `phi <path>` then `alpha <path>`, both morphism
/// files sharing a target.
pub fn load_embedding_problem(
    path: &Path,
) -> Result<(StructureMorphism, StructureMorphism), ParseError> {
    let text = read_file(path)?;
    let dir = parent(path);
    let parse = |text: &str| -> Result<_, ParseError> {
        let mut cur = Cursor::new(text);
        let (pline, p) = cur.next("a `phi <path>` line")?;
        let phi_path = keyword_value(pline, p, "phi")?;
        let phi = load_morphism(&dir.join(phi_path))?;
        let (aline, a) = cur.next("an `alpha <path>` line")?;
        let alpha_path = keyword_value(aline, a, "alpha")?;
        let alpha = load_morphism(&dir.join(alpha_path))?;
        cur.expect_done()?;
        Ok((phi, alpha))
    };
    parse(&text).map_err(|e| e.in_file(path))
}

/// Cover specs: a base structure, a donor group, a surjection onto the base
/// group, and one lifted subgroup per orbit of the base.
///
/// ```text
/// base <path>
/// group <path>
/// alpha <indices>
/// lifts
/// <one member list per orbit>
/// ```
pub struct CoverSpec {
    pub base: Arc<GroupStructure>,
    pub group: Arc<FiniteGroup>,
    pub alpha: GroupHom,
    pub lifts: Vec<Subgroup>,
}

pub fn load_cover_spec(path: &Path) -> Result<CoverSpec, ParseError> {
    let text = read_file(path)?;
    parse_cover_spec(&text, parent(path)).map_err(|e| e.in_file(path))
}

fn parse_cover_spec(text: &str, dir: &Path) -> Result<CoverSpec, ParseError> {
    let mut cur = Cursor::new(text);
    let (bline, b) = cur.next("a `base <path>` line")?;
    let base = load_structure(&dir.join(keyword_value(bline, b, "base")?))?;
    let (gline, g) = cur.next("a `group <path>` line")?;
    let donor = load_structure(&dir.join(keyword_value(gline, g, "group")?))?;
    let group = Arc::clone(donor.group());
    let (aline, a) = cur.next("an `alpha <indices>` line")?;
    let map = parse_numbers(aline, keyword_rest(aline, a, "alpha")?, "alpha")?;
    let alpha = GroupHom::new(Arc::clone(&group), Arc::clone(base.group()), map)
        .map_err(|e| ParseError::at(aline, format!("bad group map: {e}")))?;
    let (lline, l) = cur.next("a `lifts` line")?;
    if l != "lifts" {
        return Err(ParseError::at(lline, "expected `lifts`"));
    }
    let orbit_count = base.orbits().len();
    let mut lifts = Vec::with_capacity(orbit_count);
    for _ in 0..orbit_count {
        let (mline, m) = cur.next("a lift member list (one per orbit)")?;
        let mut members = parse_indices(mline, m, group.order(), "lift")?;
        members.sort_unstable();
        members.dedup();
        lifts.push(Subgroup::from_sorted_members(members));
    }
    cur.expect_done()?;
    Ok(CoverSpec {
        base,
        group,
        alpha,
        lifts,
    })
}

pub fn parse_rational(text: &str) -> Result<BigRational, ParseError> {
    let t = text.trim();
    let bad = || ParseError::at(0, format!("bad rational {t:?}"));
    match t.split_once('/') {
        None => {
            let n: BigInt = t.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().map_err(|_| bad())?;
            let d: BigInt = b.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(ParseError::at(0, format!("zero denominator in {t:?}")));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Comma-separated rationals; the empty string is the empty list.
pub fn parse_rational_list(text: &str) -> Result<Vec<BigRational>, ParseError> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(parse_rational).collect()
}

pub fn parse_prime_list(text: &str) -> Result<Vec<u64>, ParseError> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| ParseError::at(0, format!("bad prime {:?}", tok.trim())))
        })
        .collect()
}

/// Polynomials in one distinguished variable over up to one parameter:
/// space-separated coefficient entries from degree zero up, each entry a
/// comma-list of parameter coefficients. `1 0 -1` is the univariate
/// 1 - X^2; `0,-1 0 1` is X^2 - T.
pub fn parse_xpoly(text: &str) -> Result<XPoly, ParseError> {
    let entries: Vec<&str> = text.split_whitespace().collect();
    if entries.is_empty() {
        return Err(ParseError::at(0, "empty polynomial"));
    }
    let lists: Vec<Vec<BigRational>> = entries
        .iter()
        .map(|e| e.split(',').map(parse_rational).collect())
        .collect::<Result<_, _>>()?;
    if lists.iter().all(|l| l.len() == 1) {
        let coeffs = lists.into_iter().map(|mut l| l.pop().unwrap()).collect();
        return Ok(XPoly::univariate(coeffs));
    }
    let coeffs = lists
        .into_iter()
        .map(|l| {
            Poly::from_terms(
                1,
                l.into_iter()
                    .enumerate()
                    .map(|(k, c)| (vec![k as u32], c)),
            )
        })
        .collect();
    Ok(XPoly::new(1, coeffs))
}

/// One ball atom: `coeff,e1,..,ek;coeff,e1,..,ek:bound`, terms separated by
/// semicolons, a colon before the rational bound.
pub fn parse_atom(text: &str, vars: usize) -> Result<(Poly, BigRational), ParseError> {
    let (body, bound_text) = text
        .rsplit_once(':')
        .ok_or_else(|| ParseError::at(0, format!("atom {text:?} is missing its `:bound`")))?;
    let bound = parse_rational(bound_text)?;
    let mut terms = Vec::new();
    for term in body.split(';') {
        let parts: Vec<&str> = term.split(',').map(str::trim).collect();
        if parts.len() != vars + 1 {
            return Err(ParseError::at(
                0,
                format!("atom term {term:?} needs a coefficient and {vars} exponents"),
            ));
        }
        let coeff = parse_rational(parts[0])?;
        let exps: Vec<u32> = parts[1..]
            .iter()
            .map(|p| {
                p.parse()
                    .map_err(|_| ParseError::at(0, format!("bad exponent {p:?}")))
            })
            .collect::<Result<_, _>>()?;
        terms.push((exps, coeff));
    }
    Ok((Poly::from_terms(vars, terms), bound))
}

/// Patch expressions: `(pos q)`, `(nonneg q)`, `(and e ...)`, `(or e ...)`,
/// `(not e)`.
pub fn parse_patch(text: &str) -> Result<PatchExpr, ParseError> {
    let spaced = text.replace('(', " ( ").replace(')', " ) ");
    let toks: Vec<&str> = spaced.split_whitespace().collect();
    let mut pos = 0;
    let expr = parse_patch_tokens(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err(ParseError::at(
            0,
            format!("trailing tokens after expression: {:?}", toks[pos]),
        ));
    }
    Ok(expr)
}

fn parse_patch_tokens(toks: &[&str], pos: &mut usize) -> Result<PatchExpr, ParseError> {
    let take = |pos: &mut usize| -> Result<&str, ParseError> {
        let tok = toks
            .get(*pos)
            .ok_or_else(|| ParseError::at(0, "unexpected end of expression"))?;
        *pos += 1;
        Ok(tok)
    };
    let open = take(pos)?;
    if open != "(" {
        return Err(ParseError::at(0, format!("expected `(`, found {open:?}")));
    }
    let head = take(pos)?;
    match head {
        "pos" | "nonneg" => {
            let arg = parse_rational(take(pos)?)?;
            let close = take(pos)?;
            if close != ")" {
                return Err(ParseError::at(0, format!("expected `)`, found {close:?}")));
            }
            let built = if head == "pos" {
                PatchExpr::pos(arg)
            } else {
                PatchExpr::nonneg(arg)
            };
            built.map_err(|_| ParseError::at(0, format!("`{head}` needs a nonzero argument")))
        }
        "and" | "or" => {
            let mut parts = Vec::new();
            loop {
                match toks.get(*pos) {
                    None => return Err(ParseError::at(0, "missing `)`")),
                    Some(&")") => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => parts.push(parse_patch_tokens(toks, pos)?),
                }
            }
            Ok(if head == "and" {
                PatchExpr::And(parts)
            } else {
                PatchExpr::Or(parts)
            })
        }
        "not" => {
            let inner = parse_patch_tokens(toks, pos)?;
            let close = take(pos)?;
            if close != ")" {
                return Err(ParseError::at(0, format!("expected `)`, found {close:?}")));
            }
            Ok(PatchExpr::Not(Box::new(inner)))
        }
        other => Err(ParseError::at(
            0,
            format!("unknown connective {other:?}"),
        )),
    }
}

pub fn patch_to_string(e: &PatchExpr) -> String {
    match e {
        PatchExpr::Pos(a) => format!("(pos {a})"),
        PatchExpr::Nonneg(a) => format!("(nonneg {a})"),
        PatchExpr::And(parts) => wrap_connective("and", parts),
        PatchExpr::Or(parts) => wrap_connective("or", parts),
        PatchExpr::Not(inner) => format!("(not {})", patch_to_string(inner)),
    }
}

fn wrap_connective(head: &str, parts: &[PatchExpr]) -> String {
    let mut out = format!("({head}");
    for part in parts {
        out.push(' ');
        out.push_str(&patch_to_string(part));
    }
    out.push(')');
    out
}

/// `[[coeff, [exps..]], ..]`, coefficients as strings.
pub fn poly_to_json(p: &Poly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(exps, coeff)| json!([coeff.to_string(), exps]))
        .collect();
    Value::Array(terms)
}

pub fn poly_from_json(v: &Value, vars: usize) -> Result<Poly, ParseError> {
    let arr = v
        .as_array()
        .ok_or_else(|| ParseError::at(0, "polynomial must be an array of terms"))?;
    let mut terms = Vec::with_capacity(arr.len());
    for term in arr {
        let pair = term
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| ParseError::at(0, "each term must be [coeff, [exponents]]"))?;
        let coeff = parse_rational(
            pair[0]
                .as_str()
                .ok_or_else(|| ParseError::at(0, "term coefficient must be a string"))?,
        )?;
        let exps_arr = pair[1]
            .as_array()
            .ok_or_else(|| ParseError::at(0, "term exponents must be an array"))?;
        let mut exps = Vec::with_capacity(exps_arr.len());
        for e in exps_arr {
            let n = e
                .as_u64()
                .ok_or_else(|| ParseError::at(0, "exponents must be nonnegative integers"))?;
            exps.push(n as u32);
        }
        if exps.len() != vars {
            return Err(ParseError::at(
                0,
                format!("term has {} exponents, expected {vars}", exps.len()),
            ));
        }
        terms.push((exps, coeff));
    }
    Ok(Poly::from_terms(vars, terms))
}

/// A self-contained morphism: both endpoint structures embedded as text.
pub fn morphism_record(m: &StructureMorphism) -> Value {
    json!({
        "source": write_structure(m.source()),
        "target": write_structure(m.target()),
        "hom": m.hom().map(),
        "pointmap": m.point_map(),
    })
}

pub fn morphism_from_record(v: &Value) -> Result<StructureMorphism, ParseError> {
    let source = Arc::new(parse_structure(get_str(v, "source")?)?);
    let target = Arc::new(parse_structure(get_str(v, "target")?)?);
    let hom = get_usize_list(v, "hom")?;
    let point_map = get_usize_list(v, "pointmap")?;
    StructureMorphism::new(source, target, hom, point_map)
        .map_err(|e| ParseError::at(0, format!("bad morphism record: {e}")))
}

pub fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, ParseError> {
    v.get(key)
        .ok_or_else(|| ParseError::at(0, format!("record is missing {key:?}")))
}

pub fn get_str<'a>(v: &'a Value, key: &str) -> Result<&'a str, ParseError> {
    get(v, key)?
        .as_str()
        .ok_or_else(|| ParseError::at(0, format!("{key:?} must be a string")))
}

pub fn get_bool(v: &Value, key: &str) -> Result<bool, ParseError> {
    get(v, key)?
        .as_bool()
        .ok_or_else(|| ParseError::at(0, format!("{key:?} must be a boolean")))
}

pub fn get_u64(v: &Value, key: &str) -> Result<u64, ParseError> {
    get(v, key)?
        .as_u64()
        .ok_or_else(|| ParseError::at(0, format!("{key:?} must be an unsigned integer")))
}

pub fn get_i64(v: &Value, key: &str) -> Result<i64, ParseError> {
    get(v, key)?
        .as_i64()
        .ok_or_else(|| ParseError::at(0, format!("{key:?} must be an integer")))
}

pub fn get_list<'a>(v: &'a Value, key: &str) -> Result<&'a [Value], ParseError> {
    get(v, key)?
        .as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| ParseError::at(0, format!("{key:?} must be an array")))
}

pub fn get_usize_list(v: &Value, key: &str) -> Result<Vec<usize>, ParseError> {
    get_list(v, key)?
        .iter()
        .map(|e| {
            e.as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| ParseError::at(0, format!("{key:?} must hold integers")))
        })
        .collect()
}

pub fn get_u64_list(v: &Value, key: &str) -> Result<Vec<u64>, ParseError> {
    get_list(v, key)?
        .iter()
        .map(|e| {
            e.as_u64()
                .ok_or_else(|| ParseError::at(0, format!("{key:?} must hold integers")))
        })
        .collect()
}

pub fn get_rational_list(v: &Value, key: &str) -> Result<Vec<BigRational>, ParseError> {
    get_list(v, key)?
        .iter()
        .map(|e| {
            let s = e
                .as_str()
                .ok_or_else(|| ParseError::at(0, format!("{key:?} must hold strings")))?;
            parse_rational(s)
        })
        .collect()
}
