//! Finite groups given by full multiplication tables.
//!
//! Elements are indices `0..order` with the identity fixed at index 0.
//! `table[a * order + b]` is the product `a * b`. All heavier operations
//! (subgroup closure, subgroup enumeration, quotients, homomorphism search)
//! live here so the rest of the crate can treat groups as opaque handles.

use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("table has {found} entries, expected {expected} for order {order}")]
    BadShape {
        found: usize,
        expected: usize,
        order: usize,
    },
    #[error("table entry out of range at ({0}, {1})")]
    EntryRange(usize, usize),
    #[error("row or column {0} is not a permutation")]
    NotLatin(usize),
    #[error("index 0 is not a two-sided identity (fails for {0})")]
    BadIdentity(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("element index {0} out of range for order {1}")]
    IndexRange(usize, usize),
    #[error("member list is not a subgroup (missing or broken at {0})")]
    NotSubgroup(usize),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("map is not multiplicative at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("homomorphism map has wrong length or out-of-range image")]
    BadHomShape,
}

/// A finite group as an immutable multiplication table.
#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    generators: Option<Vec<usize>>,
}

/// Name and table; the inverse cache is determined by the table and the
/// generator hint is advisory.
impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Validates the table (shape, latin property, identity at 0, associativity)
    /// and caches inverses.
    pub fn from_table(name: impl Into<String>, table: Vec<usize>) -> Result<Self, GroupError> {
        let name = name.into();
        let order = (1..).find(|n| n * n >= table.len()).unwrap_or(1);
        if order * order != table.len() || table.is_empty() {
            return Err(GroupError::BadShape {
                found: table.len(),
                expected: order * order,
                order,
            });
        }
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] >= order {
                    return Err(GroupError::EntryRange(a, b));
                }
            }
        }
        for i in 0..order {
            let mut row = vec![false; order];
            let mut col = vec![false; order];
            for j in 0..order {
                row[table[i * order + j]] = true;
                col[table[j * order + i]] = true;
            }
            if row.iter().any(|v| !v) || col.iter().any(|v| !v) {
                return Err(GroupError::NotLatin(i));
            }
        }
        for a in 0..order {
            if table[a * order] != a || table[a] != a {
                return Err(GroupError::BadIdentity(a));
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b];
                for c in 0..order {
                    let bc = table[b * order + c];
                    if table[ab * order + c] != table[a * order + bc] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut inverse = vec![0; order];
        for a in 0..order {
            let inv = (0..order).find(|&b| table[a * order + b] == 0).unwrap();
            inverse[a] = inv;
        }
        Ok(FiniteGroup {
            name,
            order,
            table,
            inverse,
            generators: None,
        })
    }

    pub fn with_generators(mut self, gens: Vec<usize>) -> Self {
        self.generators = Some(gens);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// g^-1 * h * g
    #[inline]
    pub fn conj(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(self.inverse[g], h), g)
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn generators(&self) -> Option<&[usize]> {
        self.generators.as_deref()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Smallest subgroup containing `gens`, as a sorted member list.
    pub fn closure(&self, gens: &[usize]) -> Result<Subgroup, GroupError> {
        for &g in gens {
            if g >= self.order {
                return Err(GroupError::IndexRange(g, self.order));
            }
        }
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        let mut members = vec![0];
        let mut frontier = vec![0];
        for &g in gens {
            if !in_set[g] {
                in_set[g] = true;
                members.push(g);
                frontier.push(g);
            }
        }
        while let Some(a) = frontier.pop() {
            // products with everything currently in the set, both orders
            let mut i = 0;
            while i < members.len() {
                let b = members[i];
                for p in [self.mul(a, b), self.mul(b, a)] {
                    if !in_set[p] {
                        in_set[p] = true;
                        members.push(p);
                        frontier.push(p);
                    }
                }
                i += 1;
            }
        }
        members.sort_unstable();
        Ok(Subgroup { members })
    }

    /// Checks that a sorted member list is closed under products and inverses.
    pub fn verify_subgroup(&self, members: &[usize]) -> Result<Subgroup, GroupError> {
        if members.is_empty() || members[0] != 0 {
            return Err(GroupError::NotSubgroup(0));
        }
        let mut in_set = vec![false; self.order];
        for &m in members {
            if m >= self.order {
                return Err(GroupError::IndexRange(m, self.order));
            }
            in_set[m] = true;
        }
        for &a in members {
            if !in_set[self.inverse[a]] {
                return Err(GroupError::NotSubgroup(a));
            }
            for &b in members {
                if !in_set[self.mul(a, b)] {
                    return Err(GroupError::NotSubgroup(self.mul(a, b)));
                }
            }
        }
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        Ok(Subgroup { members })
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { members: vec![0] }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup {
            members: (0..self.order).collect(),
        }
    }

    /// Every subgroup, sorted by (size, member list).
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: Vec<Subgroup> = vec![self.trivial_subgroup()];
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(vec![0usize]);
        let mut queue = vec![self.trivial_subgroup()];
        while let Some(h) = queue.pop() {
            for g in 1..self.order {
                if h.contains(g) {
                    continue;
                }
                let mut gens = h.members.clone();
                gens.push(g);
                let bigger = self.closure(&gens).unwrap();
                if seen.insert(bigger.members.clone()) {
                    found.push(bigger.clone());
                    queue.push(bigger);
                }
            }
        }
        sort_subgroups(&mut found);
        found
    }

    /// H^g = { g^-1 h g : h in H }
    pub fn conjugate_subgroup(&self, h: &Subgroup, g: usize) -> Result<Subgroup, GroupError> {
        if g >= self.order {
            return Err(GroupError::IndexRange(g, self.order));
        }
        let mut members: Vec<usize> = h.members.iter().map(|&m| self.conj(m, g)).collect();
        members.sort_unstable();
        Ok(Subgroup { members })
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        (0..self.order).all(|g| h.members.iter().all(|&m| h.contains(self.conj(m, g))))
    }

    /// Normalizer of H in the whole group.
    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let members = (0..self.order)
            .filter(|&g| self.conjugate_subgroup(h, g).unwrap() == *h)
            .collect();
        Subgroup { members }
    }

    /// The set product A * B as a sorted element list (a subgroup when one
    /// factor is normal).
    pub fn product_set(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order];
        for &x in a {
            for &y in b {
                in_set[self.mul(x, y)] = true;
            }
        }
        (0..self.order).filter(|&i| in_set[i]).collect()
    }

    /// Representatives of the right cosets Hg, smallest element of each coset,
    /// in ascending order.
    pub fn right_transversal(&self, h: &Subgroup) -> Vec<usize> {
        let mut covered = vec![false; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if !covered[g] {
                reps.push(g);
                for &m in &h.members {
                    covered[self.mul(m, g)] = true;
                }
            }
        }
        reps
    }

    /// Representatives of the left cosets gH, smallest element of each coset.
    pub fn left_transversal(&self, h: &Subgroup) -> Vec<usize> {
        let mut covered = vec![false; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if !covered[g] {
                reps.push(g);
                for &m in &h.members {
                    covered[self.mul(g, m)] = true;
                }
            }
        }
        reps
    }

    /// Quotient by a normal subgroup. Cosets are labeled by their smallest
    /// element and ordered by that label, so the coset of the identity is 0.
    pub fn quotient(
        self: &Arc<Self>,
        n: &Subgroup,
    ) -> Result<(Arc<FiniteGroup>, GroupHom), GroupError> {
        self.verify_subgroup(&n.members)?;
        if !self.is_normal(n) {
            return Err(GroupError::NotNormal);
        }
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if coset_of[g] == usize::MAX {
                let label = reps.len();
                reps.push(g);
                for &m in &n.members {
                    coset_of[self.mul(m, g)] = label;
                }
            }
        }
        let k = reps.len();
        let mut table = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                table[i * k + j] = coset_of[self.mul(reps[i], reps[j])];
            }
        }
        let q = Arc::new(FiniteGroup::from_table(
            format!("{}/N{}", self.name, n.len()),
            table,
        )?);
        let hom = GroupHom::new(Arc::clone(self), Arc::clone(&q), coset_of)?;
        Ok((q, hom))
    }

    /// A subgroup as a group in its own right; returns the new group together
    /// with the member list mapping new indices to old ones.
    pub fn subgroup_group(
        &self,
        h: &Subgroup,
        name: impl Into<String>,
    ) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        self.verify_subgroup(&h.members)?;
        let k = h.members.len();
        let pos = |x: usize| h.members.binary_search(&x).unwrap();
        let mut table = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                table[i * k + j] = pos(self.mul(h.members[i], h.members[j]));
            }
        }
        Ok((
            FiniteGroup::from_table(name, table)?,
            h.members.clone(),
        ))
    }

    /// A canonical generating sequence: scan elements in index order, keeping
    /// those that enlarge the generated subgroup. Stored generators win when
    /// present.
    pub fn generating_sequence(&self) -> Vec<usize> {
        if let Some(g) = &self.generators {
            return g.clone();
        }
        let mut gens: Vec<usize> = Vec::new();
        let mut have = self.closure(&[]).unwrap();
        for g in 1..self.order {
            if !have.contains(g) {
                gens.push(g);
                have = self.closure(&gens).unwrap();
                if have.len() == self.order {
                    break;
                }
            }
        }
        gens
    }
}

/// A subgroup as a sorted member list; always contains 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

impl Subgroup {
    /// Wraps a member list without checking closure; callers that cannot
    /// guarantee it should use `FiniteGroup::verify_subgroup`.
    pub fn from_sorted_members(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(members.first(), Some(&0));
        Subgroup { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }
}

/// Canonical order for subgroup lists: by size, then lexicographically.
pub fn sort_subgroups(v: &mut [Subgroup]) {
    v.sort_by(|a, b| (a.len(), &a.members).cmp(&(b.len(), &b.members)));
}

/// A homomorphism between table groups, stored as a full image list.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupHom({} -> {}, {:?})",
            self.source.name, self.target.name, self.map
        )
    }
}

impl GroupHom {
    pub fn new(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        map: Vec<usize>,
    ) -> Result<Self, GroupError> {
        if map.len() != source.order() || map.iter().any(|&v| v >= target.order()) {
            return Err(GroupError::BadHomShape);
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(GroupError::NotHomomorphism(a, b));
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            map,
        })
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        GroupHom {
            source: Arc::clone(g),
            target: Arc::clone(g),
            map: (0..g.order()).collect(),
        }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup {
            members: (0..self.source.order())
                .filter(|&g| self.map[g] == 0)
                .collect(),
        }
    }

    pub fn image(&self) -> Subgroup {
        let mut members: Vec<usize> = self.map.clone();
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.order()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn image_of(&self, h: &Subgroup) -> Subgroup {
        let mut members: Vec<usize> = h.members().iter().map(|&m| self.map[m]).collect();
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    pub fn is_injective_on(&self, h: &Subgroup) -> bool {
        self.image_of(h).len() == h.len()
    }

    pub fn preimages_of(&self, a: usize) -> Vec<usize> {
        (0..self.source.order())
            .filter(|&g| self.map[g] == a)
            .collect()
    }

    /// self followed by `next`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom, GroupError> {
        if self.target.as_ref() != next.source.as_ref() {
            return Err(GroupError::BadHomShape);
        }
        let map = self.map.iter().map(|&g| next.map[g]).collect();
        GroupHom::new(Arc::clone(&self.source), Arc::clone(&next.target), map)
    }
}

/// All homomorphisms source -> target extending `constraints` (pairs of
/// element and required image), in lexicographic order of the images of the
/// canonical generating sequence.
///
/// The search assigns generator images in index order and propagates
/// multiplicativity incrementally, pruning dead branches early.
pub fn enumerate_homs(
    source: &Arc<FiniteGroup>,
    target: &Arc<FiniteGroup>,
    constraints: &[(usize, usize)],
) -> Result<Vec<GroupHom>, GroupError> {
    let mut out = Vec::new();
    hom_search(source, target, constraints, |_, _| true, &mut |map| {
        out.push(map.to_vec());
        true
    })?;
    out.into_iter()
        .map(|map| GroupHom::new(Arc::clone(source), Arc::clone(target), map))
        .collect()
}

/// DFS core shared with the embedding solver. `allowed(g, img)` filters every
/// assignment (generator choices and propagated products alike); `emit`
/// receives each complete map and returns false to stop the search.
pub(crate) fn hom_search(
    source: &Arc<FiniteGroup>,
    target: &Arc<FiniteGroup>,
    constraints: &[(usize, usize)],
    allowed: impl Fn(usize, usize) -> bool + Copy,
    emit: &mut impl FnMut(&[usize]) -> bool,
) -> Result<(), GroupError> {
    let n = source.order();
    let mut img: Vec<Option<usize>> = vec![None; n];
    let mut known: Vec<usize> = Vec::new();
    if !assign(source, target, &mut img, &mut known, 0, 0, allowed) {
        return Ok(());
    }
    for &(g, v) in constraints {
        if g >= n || v >= target.order() {
            return Err(GroupError::BadHomShape);
        }
        match img[g] {
            Some(cur) if cur != v => return Ok(()),
            Some(_) => {}
            None => {
                if !assign(source, target, &mut img, &mut known, g, v, allowed) {
                    return Ok(());
                }
            }
        }
    }
    let gens = source.generating_sequence();
    dfs(source, target, &gens, 0, img, known, allowed, emit);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    source: &FiniteGroup,
    target: &FiniteGroup,
    gens: &[usize],
    pos: usize,
    img: Vec<Option<usize>>,
    known: Vec<usize>,
    allowed: impl Fn(usize, usize) -> bool + Copy,
    emit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    let next_free = (pos..gens.len()).find(|&i| img[gens[i]].is_none());
    let Some(free) = next_free else {
        let full: Vec<usize> = img.iter().map(|v| v.unwrap_or(0)).collect();
        debug_assert!(img.iter().all(|v| v.is_some()));
        return emit(&full);
    };
    let g = gens[free];
    for cand in 0..target.order() {
        let mut img2 = img.clone();
        let mut known2 = known.clone();
        if assign(source, target, &mut img2, &mut known2, g, cand, allowed)
            && !dfs(source, target, gens, free + 1, img2, known2, allowed, emit)
        {
            return false;
        }
    }
    true
}

/// Sets img[g] = v and closes under multiplicativity; false on conflict.
fn assign(
    source: &FiniteGroup,
    target: &FiniteGroup,
    img: &mut Vec<Option<usize>>,
    known: &mut Vec<usize>,
    g: usize,
    v: usize,
    allowed: impl Fn(usize, usize) -> bool,
) -> bool {
    if !allowed(g, v) {
        return false;
    }
    img[g] = Some(v);
    known.push(g);
    let mut fresh = vec![g];
    while let Some(a) = fresh.pop() {
        let ia = img[a].unwrap();
        let mut i = 0;
        while i < known.len() {
            let b = known[i];
            let ib = img[b].unwrap();
            for (x, ix) in [
                (source.mul(a, b), target.mul(ia, ib)),
                (source.mul(b, a), target.mul(ib, ia)),
            ] {
                match img[x] {
                    Some(cur) => {
                        if cur != ix {
                            return false;
                        }
                    }
                    None => {
                        if !allowed(x, ix) {
                            return false;
                        }
                        img[x] = Some(ix);
                        known.push(x);
                        fresh.push(x);
                    }
                }
            }
            i += 1;
        }
    }
    true
}
