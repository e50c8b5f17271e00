//! Block partitions of a structure's point set.
//!
//! A partition here is a family of blocks (X_i, G_i, R_i): a point set X_i
//! whose setwise stabilizer is exactly G_i, with coset representatives R_i of
//! G_i covering the group, such that the translates X_i^rho tile all of X.
//! The constructor builds one from per-point local data (an enlarged subgroup
//! and a neighborhood around its orbit) by shrinking neighborhoods to orbits,
//! subtracting earlier blocks, and choosing one base point per group orbit;
//! chosen pins become base points of their orbits.

use crate::group::Subgroup;
use crate::structure::GroupStructure;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("local data has length {found}, expected one entry per point ({expected})")]
    BadShape { found: usize, expected: usize },
    #[error("local subgroup at point {point} does not contain the point's subgroup")]
    LocalGroupTooSmall { point: usize },
    #[error("neighborhood at point {point} misses {missing} from the local orbit")]
    NeighborhoodMissesOrbit { point: usize, missing: usize },
    #[error("pins {first} and {second} lie in the same orbit")]
    PinsShareOrbit { first: usize, second: usize },
    #[error("pin {0} out of range")]
    PinOutOfRange(usize),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

/// Per-point input: a subgroup containing the point's own, and a point set
/// containing the orbit of the point under that subgroup.
#[derive(Debug, Clone)]
pub struct LocalData {
    pub group: Subgroup,
    pub neighborhood: Vec<usize>,
}

/// Every point keeps its own subgroup, with the smallest admissible
/// neighborhood.
pub fn default_local_data(s: &GroupStructure) -> Vec<LocalData> {
    (0..s.points())
        .map(|y| LocalData {
            group: s.assigned(y).clone(),
            neighborhood: s.orbit_under(y, s.assigned(y).members()),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// The point the block was grown from.
    pub base: usize,
    /// X_i, sorted.
    pub points: Vec<usize>,
    /// G_i, the setwise stabilizer of X_i.
    pub group: Subgroup,
    /// R_i, right coset representatives of G_i in G.
    pub transversal: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialPartition {
    pub blocks: Vec<Block>,
}

impl SpecialPartition {
    /// Union of the blocks' own points (not their translates), sorted.
    pub fn core_points(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .blocks
            .iter()
            .flat_map(|b| b.points.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// The block whose translate contains `x`, with the translating
    /// representative: x in X_i^rho.
    pub fn locate(&self, s: &GroupStructure, x: usize) -> Option<(usize, usize)> {
        for (i, block) in self.blocks.iter().enumerate() {
            for &rho in &block.transversal {
                if block.points.iter().any(|&p| s.act(p, rho) == x) {
                    return Some((i, rho));
                }
            }
        }
        None
    }
}

/// Builds a partition from local data, with the pinned points (which must
/// lie in distinct orbits) as base points of their orbits.
pub fn special_partition(
    s: &GroupStructure,
    local: &[LocalData],
    pins: &[usize],
) -> Result<SpecialPartition, PartitionError> {
    if local.len() != s.points() {
        return Err(PartitionError::BadShape {
            found: local.len(),
            expected: s.points(),
        });
    }
    for (y, data) in local.iter().enumerate() {
        s.group().verify_subgroup(data.group.members())?;
        if !s.assigned(y).is_subset_of(&data.group) {
            return Err(PartitionError::LocalGroupTooSmall { point: y });
        }
        let orbit = s.orbit_under(y, data.group.members());
        if let Some(&missing) = orbit
            .iter()
            .find(|&&p| !data.neighborhood.contains(&p))
        {
            return Err(PartitionError::NeighborhoodMissesOrbit { point: y, missing });
        }
    }
    for &p in pins {
        if p >= s.points() {
            return Err(PartitionError::PinOutOfRange(p));
        }
    }

    // one base point per group orbit: pins first, then smallest points
    let orbits = s.orbits();
    let orbit_of = |x: usize| orbits.iter().position(|o| o.contains(&x)).unwrap();
    let mut base_of_orbit: Vec<Option<usize>> = vec![None; orbits.len()];
    for (k, &p) in pins.iter().enumerate() {
        let o = orbit_of(p);
        if let Some(other) = base_of_orbit[o] {
            if other != p {
                return Err(PartitionError::PinsShareOrbit {
                    first: pins[..k].iter().copied().find(|&q| orbit_of(q) == o).unwrap(),
                    second: p,
                });
            }
        }
        base_of_orbit[o] = Some(p);
    }
    let bases: Vec<usize> = orbits
        .iter()
        .enumerate()
        .map(|(o, orb)| base_of_orbit[o].unwrap_or(orb[0]))
        .collect();

    // shrink each neighborhood to the local orbit of its base, then subtract
    // the other orbits and the saturations of earlier blocks
    let shrunk: Vec<Vec<usize>> = bases
        .iter()
        .map(|&y| s.orbit_under(y, local[y].group.members()))
        .collect();
    let mut claimed = vec![false; s.points()];
    let mut blocks = Vec::new();
    for (k, &y) in bases.iter().enumerate() {
        let mut points: Vec<usize> = shrunk[k]
            .iter()
            .copied()
            .filter(|&p| {
                let foreign = bases
                    .iter()
                    .enumerate()
                    .any(|(j, _)| j != k && orbits[orbit_of(bases[j])].contains(&p));
                !foreign && !claimed[p]
            })
            .collect();
        points.sort_unstable();
        assert!(points.contains(&y));
        for &p in &points {
            for g in 0..s.group().order() {
                claimed[s.act(p, g)] = true;
            }
        }
        let group = local[y].group.clone();
        let transversal = s.group().right_transversal(&group);
        blocks.push(Block {
            base: y,
            points,
            group,
            transversal,
        });
    }
    blocks.sort_by_key(|b| b.points[0]);
    Ok(SpecialPartition { blocks })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionDefect {
    NoBlocks,
    PointOutOfRange { block: usize, point: usize },
    GroupNotSubgroup { block: usize },
    GroupMissesPointSubgroup { block: usize, point: usize },
    StabilizerMismatch { block: usize, element: usize },
    CosetsDontCover { block: usize, element: usize },
    TranslatesDontCover { point: usize },
    TranslatesOverlap { first: usize, second: usize, element: usize },
}

impl fmt::Display for PartitionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionDefect::NoBlocks => write!(f, "no blocks but the point set is nonempty"),
            PartitionDefect::PointOutOfRange { block, point } => {
                write!(f, "block {block} contains out-of-range point {point}")
            }
            PartitionDefect::GroupNotSubgroup { block } => {
                write!(f, "block {block}'s member list is not a subgroup")
            }
            PartitionDefect::GroupMissesPointSubgroup { block, point } => {
                write!(f, "block {block} does not absorb the subgroup of point {point}")
            }
            PartitionDefect::StabilizerMismatch { block, element } => {
                write!(
                    f,
                    "element {element} disagrees with block {block}'s setwise stabilizer"
                )
            }
            PartitionDefect::CosetsDontCover { block, element } => {
                write!(f, "element {element} missed by block {block}'s cosets")
            }
            PartitionDefect::TranslatesDontCover { point } => {
                write!(f, "point {point} not covered by any block translate")
            }
            PartitionDefect::TranslatesOverlap {
                first,
                second,
                element,
            } => write!(
                f,
                "translate of block {first} by {element} meets block {second}"
            ),
        }
    }
}

/// Checks all the partition axioms against a structure, including the derived
/// one (a translate meeting a block forces same block and stabilizing
/// element). Returns every violation with a witness.
pub fn validate_special_partition(
    s: &GroupStructure,
    p: &SpecialPartition,
) -> Vec<PartitionDefect> {
    let mut out = Vec::new();
    if p.blocks.is_empty() {
        if s.points() > 0 {
            out.push(PartitionDefect::NoBlocks);
        }
        return out;
    }
    for (i, block) in p.blocks.iter().enumerate() {
        for &x in &block.points {
            if x >= s.points() {
                out.push(PartitionDefect::PointOutOfRange { block: i, point: x });
            }
        }
    }
    if out.iter().any(|d| matches!(d, PartitionDefect::PointOutOfRange { .. })) {
        return out;
    }
    let translate = |points: &[usize], g: usize| -> Vec<usize> {
        let mut t: Vec<usize> = points.iter().map(|&x| s.act(x, g)).collect();
        t.sort_unstable();
        t
    };
    for (i, block) in p.blocks.iter().enumerate() {
        if s.group().verify_subgroup(block.group.members()).is_err() {
            out.push(PartitionDefect::GroupNotSubgroup { block: i });
            continue;
        }
        for &x in &block.points {
            if !s.assigned(x).is_subset_of(&block.group) {
                out.push(PartitionDefect::GroupMissesPointSubgroup { block: i, point: x });
            }
        }
        let sorted: Vec<usize> = {
            let mut v = block.points.clone();
            v.sort_unstable();
            v
        };
        for g in 0..s.group().order() {
            let stabilizes = translate(&block.points, g) == sorted;
            if stabilizes != block.group.contains(g) {
                out.push(PartitionDefect::StabilizerMismatch { block: i, element: g });
            }
        }
        let mut covered = vec![false; s.group().order()];
        for &rho in &block.transversal {
            for &m in block.group.members() {
                covered[s.group().mul(m, rho)] = true;
            }
        }
        if let Some(g) = covered.iter().position(|&c| !c) {
            out.push(PartitionDefect::CosetsDontCover { block: i, element: g });
        }
    }
    let mut covered = vec![false; s.points()];
    for block in &p.blocks {
        for &rho in &block.transversal {
            for &x in &block.points {
                covered[s.act(x, rho)] = true;
            }
        }
    }
    for (x, &c) in covered.iter().enumerate() {
        if !c {
            out.push(PartitionDefect::TranslatesDontCover { point: x });
        }
    }
    for (i, bi) in p.blocks.iter().enumerate() {
        for g in 0..s.group().order() {
            let moved = translate(&bi.points, g);
            for (j, bj) in p.blocks.iter().enumerate() {
                let meets = moved.iter().any(|x| bj.points.contains(x));
                if meets && (i != j || !bi.group.contains(g)) {
                    out.push(PartitionDefect::TranslatesOverlap {
                        first: i,
                        second: j,
                        element: g,
                    });
                }
            }
        }
    }
    out
}
