//! Group structures: a finite group G acting on the right on a finite point
//! set X, with a subgroup G_x attached to every point such that
//! G_{x^g} = (G_x)^g and the stabilizer of x is contained in G_x.
//!
//! A structure is *proper* when the assignment x -> G_x is injective and
//! every G_x equals the stabilizer of x.
//!
//! Morphisms are pairs (group hom, point map) compatible with the actions and
//! assignments; `classify` grades a candidate into the chain
//! cover => rigid => epimorphism => morphism.

use crate::group::{sort_subgroups, FiniteGroup, GroupError, GroupHom, Subgroup};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("point set not closed under the subgroup action: point {point} moved out by {element}")]
    NotClosed { point: usize, element: usize },
    #[error("assigned subgroup at point {point} is not contained in the chosen subgroup")]
    SubgroupTooSmall { point: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("morphism targets differ")]
    TargetMismatch,
    #[error("square does not commute at {0}")]
    NotCommuting(String),
    #[error("not a structure morphism: {0}")]
    NotAMorphism(String),
}

/// A finite group structure. Immutable after construction; share with `Arc`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupStructure {
    group: Arc<FiniteGroup>,
    points: usize,
    action: Vec<usize>,           // points x order, row-major
    groups: Vec<Subgroup>,        // deduplicated assigned subgroups, canonically sorted
    assignment: Vec<usize>,       // per point, an index into `groups`
}

impl fmt::Debug for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupStructure({}, {} points)",
            self.group.name(),
            self.points
        )
    }
}

impl GroupStructure {
    /// Builds a candidate structure, checking shapes only. Use `validate` to
    /// check the structure axioms.
    pub fn candidate(
        group: Arc<FiniteGroup>,
        action_rows: Vec<Vec<usize>>,
        assigned: Vec<Subgroup>,
    ) -> Result<Self, StructureError> {
        let points = action_rows.len();
        if assigned.len() != points {
            return Err(StructureError::ShapeMismatch(format!(
                "{} action rows but {} assigned subgroups",
                points,
                assigned.len()
            )));
        }
        let order = group.order();
        let mut action = Vec::with_capacity(points * order);
        for (x, row) in action_rows.iter().enumerate() {
            if row.len() != order {
                return Err(StructureError::ShapeMismatch(format!(
                    "action row {x} has length {}, expected {order}",
                    row.len()
                )));
            }
            for (g, &y) in row.iter().enumerate() {
                if y >= points {
                    return Err(StructureError::ShapeMismatch(format!(
                        "action entry ({x}, {g}) out of range"
                    )));
                }
            }
            action.extend_from_slice(row);
        }
        for (x, sub) in assigned.iter().enumerate() {
            if sub.members().iter().any(|&m| m >= order) {
                return Err(StructureError::ShapeMismatch(format!(
                    "subgroup at point {x} has out-of-range members"
                )));
            }
        }
        let (groups, assignment) = dedup_subgroups(assigned);
        Ok(GroupStructure {
            group,
            points,
            action,
            groups,
            assignment,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.points
    }

    #[inline]
    pub fn act(&self, x: usize, g: usize) -> usize {
        self.action[x * self.group.order() + g]
    }

    /// The deduplicated table of assigned subgroups.
    pub fn subgroup_table(&self) -> &[Subgroup] {
        &self.groups
    }

    /// Index into the subgroup table for the subgroup at `x`.
    pub fn assigned_id(&self, x: usize) -> usize {
        self.assignment[x]
    }

    pub fn assigned(&self, x: usize) -> &Subgroup {
        &self.groups[self.assignment[x]]
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        Subgroup::from_sorted_members(
            (0..self.group.order())
                .filter(|&g| self.act(x, g) == x)
                .collect(),
        )
    }

    /// Orbit of `x` under a set of group elements, sorted.
    pub fn orbit_under(&self, x: usize, elements: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.points.max(1)];
        let mut out = Vec::new();
        let mut stack = vec![x];
        seen[x] = true;
        while let Some(y) = stack.pop() {
            out.push(y);
            for &g in elements {
                let z = self.act(y, g);
                if !seen[z] {
                    seen[z] = true;
                    stack.push(z);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let all: Vec<usize> = (0..self.group.order()).collect();
        self.orbit_under(x, &all)
    }

    /// All G-orbits, each sorted, ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.points];
        let mut out = Vec::new();
        for x in 0..self.points {
            if !seen[x] {
                let orb = self.orbit(x);
                for &y in &orb {
                    seen[y] = true;
                }
                out.push(orb);
            }
        }
        out
    }

    /// Checks the axioms, reporting every violation with a witness, plus
    /// whether the structure is proper (injective assignment with
    /// G_x equal to the stabilizer everywhere).
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let order = self.group.order();
        for x in 0..self.points {
            if self.act(x, 0) != x {
                violations.push(StructureDefect::IdentityMoves { x });
            }
        }
        for x in 0..self.points {
            for g in 0..order {
                for h in 0..order {
                    if self.act(self.act(x, g), h) != self.act(x, self.group.mul(g, h)) {
                        violations.push(StructureDefect::NotAnAction { x, g, h });
                    }
                }
            }
        }
        for (id, sub) in self.groups.iter().enumerate() {
            if self.group.verify_subgroup(sub.members()).is_err() {
                let x = self.assignment.iter().position(|&a| a == id).unwrap();
                violations.push(StructureDefect::NotASubgroup { x });
            }
        }
        for x in 0..self.points {
            for g in 0..order {
                let expected = self.group.conjugate_subgroup(self.assigned(x), g);
                match expected {
                    Ok(conj) if conj == *self.assigned(self.act(x, g)) => {}
                    _ => violations.push(StructureDefect::NotEquivariant { x, g }),
                }
            }
        }
        for x in 0..self.points {
            for g in 0..order {
                if self.act(x, g) == x && !self.assigned(x).contains(g) {
                    violations.push(StructureDefect::StabilizerEscapes { x, g });
                }
            }
        }
        let mut ids: Vec<usize> = self.assignment.clone();
        ids.sort_unstable();
        ids.dedup();
        let injective = ids.len() == self.points;
        let pinned = (0..self.points).all(|x| self.stabilizer(x) == *self.assigned(x));
        ValidationReport {
            proper: violations.is_empty() && injective && pinned,
            violations,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().violations.is_empty()
    }

    /// The same points and action with every assigned subgroup replaced by
    /// the stabilizer of its point.
    pub fn stabilizer_structure(&self) -> GroupStructure {
        let rows = self.action_rows();
        let assigned = (0..self.points).map(|x| self.stabilizer(x)).collect();
        GroupStructure::candidate(Arc::clone(&self.group), rows, assigned).unwrap()
    }

    pub fn action_rows(&self) -> Vec<Vec<usize>> {
        (0..self.points)
            .map(|x| {
                (0..self.group.order())
                    .map(|g| self.act(x, g))
                    .collect()
            })
            .collect()
    }
}

fn dedup_subgroups(assigned: Vec<Subgroup>) -> (Vec<Subgroup>, Vec<usize>) {
    let mut table: Vec<Subgroup> = assigned.to_vec();
    table.sort_by(|a, b| (a.len(), a.members()).cmp(&(b.len(), b.members())));
    table.dedup();
    sort_subgroups(&mut table);
    let assignment = assigned
        .iter()
        .map(|s| table.iter().position(|t| t == s).unwrap())
        .collect();
    (table, assignment)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureDefect {
    IdentityMoves { x: usize },
    NotAnAction { x: usize, g: usize, h: usize },
    NotASubgroup { x: usize },
    NotEquivariant { x: usize, g: usize },
    StabilizerEscapes { x: usize, g: usize },
}

impl fmt::Display for StructureDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureDefect::IdentityMoves { x } => write!(f, "identity moves point {x}"),
            StructureDefect::NotAnAction { x, g, h } => {
                write!(f, "action not compatible with multiplication at ({x}, {g}, {h})")
            }
            StructureDefect::NotASubgroup { x } => {
                write!(f, "assigned member list at point {x} is not a subgroup")
            }
            StructureDefect::NotEquivariant { x, g } => {
                write!(f, "assignment not equivariant at ({x}, {g})")
            }
            StructureDefect::StabilizerEscapes { x, g } => {
                write!(f, "stabilizer element {g} of point {x} outside its subgroup")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub violations: Vec<StructureDefect>,
    pub proper: bool,
}

/// A candidate morphism of structures: a group homomorphism plus a point map.
#[derive(Clone, PartialEq, Eq)]
pub struct StructureMorphism {
    source: Arc<GroupStructure>,
    target: Arc<GroupStructure>,
    hom: GroupHom,
    point_map: Vec<usize>,
}

impl fmt::Debug for StructureMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "StructureMorphism({:?} -> {:?})",
            self.source, self.target
        )
    }
}

impl StructureMorphism {
    pub fn new(
        source: Arc<GroupStructure>,
        target: Arc<GroupStructure>,
        group_map: Vec<usize>,
        point_map: Vec<usize>,
    ) -> Result<Self, StructureError> {
        let hom = GroupHom::new(
            Arc::clone(source.group()),
            Arc::clone(target.group()),
            group_map,
        )?;
        if point_map.len() != source.points() {
            return Err(StructureError::ShapeMismatch(format!(
                "point map has length {}, expected {}",
                point_map.len(),
                source.points()
            )));
        }
        if point_map.iter().any(|&y| y >= target.points()) {
            return Err(StructureError::ShapeMismatch(
                "point map image out of range".into(),
            ));
        }
        Ok(StructureMorphism {
            source,
            target,
            hom,
            point_map,
        })
    }

    pub fn identity(s: &Arc<GroupStructure>) -> Self {
        StructureMorphism {
            source: Arc::clone(s),
            target: Arc::clone(s),
            hom: GroupHom::identity(s.group()),
            point_map: (0..s.points()).collect(),
        }
    }

    pub fn source(&self) -> &Arc<GroupStructure> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GroupStructure> {
        &self.target
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn point_map(&self) -> &[usize] {
        &self.point_map
    }

    #[inline]
    pub fn apply_group(&self, g: usize) -> usize {
        self.hom.apply(g)
    }

    #[inline]
    pub fn apply_point(&self, x: usize) -> usize {
        self.point_map[x]
    }

    /// self followed by `next`.
    pub fn then(&self, next: &StructureMorphism) -> Result<StructureMorphism, StructureError> {
        if self.target.as_ref() != next.source.as_ref() {
            return Err(StructureError::TargetMismatch);
        }
        let hom = self.hom.then(next.hom())?;
        let point_map = self
            .point_map
            .iter()
            .map(|&y| next.point_map[y])
            .collect();
        Ok(StructureMorphism {
            source: Arc::clone(&self.source),
            target: Arc::clone(&next.target),
            hom,
            point_map,
        })
    }

    /// Grades the candidate along cover => rigid => epimorphism => morphism.
    pub fn classify(&self) -> MorphismClass {
        let (s, t) = (self.source.as_ref(), self.target.as_ref());
        // morphism: equivariant point map, subgroup images inside targets
        for x in 0..s.points() {
            for g in 0..s.group().order() {
                if self.apply_point(s.act(x, g)) != t.act(self.apply_point(x), self.apply_group(g))
                {
                    return MorphismClass::fail(MorphismDefect::NotEquivariant { x, g });
                }
            }
        }
        for x in 0..s.points() {
            let image = self.hom.image_of(s.assigned(x));
            if !image.is_subset_of(t.assigned(self.apply_point(x))) {
                return MorphismClass::fail(MorphismDefect::SubgroupNotCarried { x });
            }
        }
        let mut class = MorphismClass {
            morphism: true,
            epimorphism: false,
            rigid: false,
            cover: false,
            defect: None,
        };
        // epimorphism: surjective on group and points, and every target point
        // has a preimage whose subgroup maps onto the target subgroup
        if !self.hom.is_surjective() {
            class.defect = Some(MorphismDefect::GroupNotOnto);
            return class;
        }
        let mut hit = vec![false; t.points()];
        for &y in &self.point_map {
            hit[y] = true;
        }
        if let Some(y) = hit.iter().position(|&h| !h) {
            class.defect = Some(MorphismDefect::PointNotHit { y });
            return class;
        }
        for y in 0..t.points() {
            let witness = (0..s.points()).any(|x| {
                self.apply_point(x) == y && self.hom.image_of(s.assigned(x)) == *t.assigned(y)
            });
            if !witness {
                class.defect = Some(MorphismDefect::NoFullPreimage { y });
                return class;
            }
        }
        class.epimorphism = true;
        // rigid: every assigned subgroup maps isomorphically onto its target
        for x in 0..s.points() {
            let sub = s.assigned(x);
            if !self.hom.is_injective_on(sub)
                || self.hom.image_of(sub) != *t.assigned(self.apply_point(x))
            {
                class.defect = Some(MorphismDefect::NotIsomorphicOnSubgroup { x });
                return class;
            }
        }
        class.rigid = true;
        // cover: point fibers are single kernel orbits
        let kernel = self.hom.kernel();
        for x1 in 0..s.points() {
            for x2 in 0..s.points() {
                if self.apply_point(x1) == self.apply_point(x2) {
                    let joined = kernel.members().iter().any(|&k| s.act(x1, k) == x2);
                    if !joined {
                        class.defect = Some(MorphismDefect::FiberNotKernelOrbit { x1, x2 });
                        return class;
                    }
                }
            }
        }
        class.cover = true;
        class
    }

    pub fn is_cover(&self) -> bool {
        self.classify().cover
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismDefect {
    NotEquivariant { x: usize, g: usize },
    SubgroupNotCarried { x: usize },
    GroupNotOnto,
    PointNotHit { y: usize },
    NoFullPreimage { y: usize },
    NotIsomorphicOnSubgroup { x: usize },
    FiberNotKernelOrbit { x1: usize, x2: usize },
}

impl fmt::Display for MorphismDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismDefect::NotEquivariant { x, g } => {
                write!(f, "point map not equivariant at ({x}, {g})")
            }
            MorphismDefect::SubgroupNotCarried { x } => {
                write!(f, "subgroup at {x} not carried into the target subgroup")
            }
            MorphismDefect::GroupNotOnto => write!(f, "group map not surjective"),
            MorphismDefect::PointNotHit { y } => write!(f, "target point {y} not hit"),
            MorphismDefect::NoFullPreimage { y } => {
                write!(f, "no preimage of {y} maps its subgroup onto the target subgroup")
            }
            MorphismDefect::NotIsomorphicOnSubgroup { x } => {
                write!(f, "subgroup at {x} not mapped isomorphically")
            }
            MorphismDefect::FiberNotKernelOrbit { x1, x2 } => {
                write!(f, "points {x1}, {x2} share an image but no kernel element joins them")
            }
        }
    }
}

/// Flags are downward-closed along cover => rigid => epimorphism => morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismClass {
    pub morphism: bool,
    pub epimorphism: bool,
    pub rigid: bool,
    pub cover: bool,
    pub defect: Option<MorphismDefect>,
}

impl MorphismClass {
    fn fail(defect: MorphismDefect) -> Self {
        MorphismClass {
            morphism: false,
            epimorphism: false,
            rigid: false,
            cover: false,
            defect: Some(defect),
        }
    }
}

/// Quotient by a normal subgroup N: points become N-orbits labeled by their
/// smallest member, subgroups become images. The projection is an
/// epimorphism, and a cover exactly when G_x meets N trivially for every x.
pub fn quotient_structure(
    s: &Arc<GroupStructure>,
    n: &Subgroup,
) -> Result<(Arc<GroupStructure>, StructureMorphism), StructureError> {
    s.group().verify_subgroup(n.members())?;
    if !s.group().is_normal(n) {
        return Err(StructureError::NotNormal);
    }
    let (q, pi) = s.group().quotient(n)?;
    let mut orbit_of = vec![usize::MAX; s.points()];
    let mut orbit_reps = Vec::new();
    for x in 0..s.points() {
        if orbit_of[x] == usize::MAX {
            let label = orbit_reps.len();
            orbit_reps.push(x);
            for y in s.orbit_under(x, n.members()) {
                orbit_of[y] = label;
            }
        }
    }
    let k = orbit_reps.len();
    let mut rows = vec![vec![0; q.order()]; k];
    for (label, &rep) in orbit_reps.iter().enumerate() {
        for qg in 0..q.order() {
            let g = pi.preimages_of(qg)[0];
            rows[label][qg] = orbit_of[s.act(rep, g)];
        }
    }
    let assigned: Vec<Subgroup> = orbit_reps
        .iter()
        .map(|&rep| pi.image_of(s.assigned(rep)))
        .collect();
    let quotient = Arc::new(GroupStructure::candidate(Arc::clone(&q), rows, assigned)?);
    let projection = StructureMorphism {
        source: Arc::clone(s),
        target: Arc::clone(&quotient),
        hom: pi,
        point_map: orbit_of,
    };
    Ok((quotient, projection))
}

/// Restriction to a subgroup H and an H-closed point set Y whose assigned
/// subgroups lie inside H. Points and group elements are relabeled in
/// ascending order.
pub fn sub_structure(
    s: &GroupStructure,
    h: &Subgroup,
    points: &[usize],
) -> Result<GroupStructure, StructureError> {
    s.group().verify_subgroup(h.members())?;
    let mut y: Vec<usize> = points.to_vec();
    y.sort_unstable();
    y.dedup();
    for &x in &y {
        if x >= s.points() {
            return Err(StructureError::ShapeMismatch(format!(
                "point {x} out of range"
            )));
        }
    }
    for &x in &y {
        for &g in h.members() {
            if y.binary_search(&s.act(x, g)).is_err() {
                return Err(StructureError::NotClosed {
                    point: x,
                    element: g,
                });
            }
        }
    }
    for &x in &y {
        if !s.assigned(x).is_subset_of(h) {
            return Err(StructureError::SubgroupTooSmall { point: x });
        }
    }
    let (hg, members) = s.group().subgroup_group(h, format!("{}|H", s.group().name()))?;
    let hg = Arc::new(hg);
    let gpos = |g: usize| members.binary_search(&g).unwrap();
    let ppos = |x: usize| y.binary_search(&x).unwrap();
    let rows: Vec<Vec<usize>> = y
        .iter()
        .map(|&x| members.iter().map(|&g| ppos(s.act(x, g))).collect())
        .collect();
    let assigned: Vec<Subgroup> = y
        .iter()
        .map(|&x| {
            Subgroup::from_sorted_members(
                s.assigned(x).members().iter().map(|&m| gpos(m)).collect(),
            )
        })
        .collect();
    GroupStructure::candidate(hg, rows, assigned)
}
