//! Building covers over a prescribed group surjection. `extend_to_cover`
//! turns a surjection onto the group of a structure into a cover of
//! structures, given one lifted subgroup per orbit; `build_special_cover`
//! does the same over a special partition, hands back per-block point
//! sections, and reports whether properness transfers.

use crate::group::{FiniteGroup, GroupError, GroupHom, Subgroup};
use crate::partition::{validate_special_partition, SpecialPartition};
use crate::structure::{GroupStructure, StructureError, StructureMorphism};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("the group map does not land in the structure's group")]
    WrongTarget,
    #[error("the group map is not surjective")]
    NotSurjective,
    #[error("expected {expected} lifted subgroups, found {found}")]
    WrongLiftCount { found: usize, expected: usize },
    #[error("lift {index} is not carried isomorphically onto its subgroup")]
    NotIsomorphicLift { index: usize },
    #[error("the partition does not fit the structure: {0}")]
    InvalidPartition(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A cover produced over a group surjection, with the distinguished point
/// over each orbit representative that carries the lifted subgroup itself.
pub struct CoverExtension {
    pub cover: StructureMorphism,
    pub base_points: Vec<usize>,
}

/// Extends a surjection alpha: B -> A onto the group of `a` to a cover.
/// `lifts` holds one subgroup of B per orbit of `a` (in orbit order), each
/// carried isomorphically onto the subgroup at the orbit's representative.
/// New points are the cosets of T = preimage of the representative's
/// stabilizer inside the lift, grouped by orbit; the lift travels along by
/// conjugation.
pub fn extend_to_cover(
    a: &Arc<GroupStructure>,
    alpha: &GroupHom,
    lifts: &[Subgroup],
) -> Result<CoverExtension, CoverError> {
    if alpha.target().as_ref() != a.group().as_ref() {
        return Err(CoverError::WrongTarget);
    }
    if !alpha.is_surjective() {
        return Err(CoverError::NotSurjective);
    }
    let orbits = a.orbits();
    if lifts.len() != orbits.len() {
        return Err(CoverError::WrongLiftCount {
            found: lifts.len(),
            expected: orbits.len(),
        });
    }
    let b = alpha.source();
    for (k, lift) in lifts.iter().enumerate() {
        b.verify_subgroup(lift.members())?;
        let rep = orbits[k][0];
        if lift.len() != a.assigned(rep).len() || alpha.image_of(lift) != *a.assigned(rep) {
            return Err(CoverError::NotIsomorphicLift { index: k });
        }
    }

    // per orbit: cosets of T inside B, labeled by smallest member
    let mut starts = Vec::with_capacity(orbits.len());
    let mut cosets: Vec<Vec<Vec<usize>>> = Vec::with_capacity(orbits.len());
    let mut coset_of: Vec<Vec<usize>> = Vec::with_capacity(orbits.len());
    let mut total = 0;
    for (k, orbit) in orbits.iter().enumerate() {
        let stab = a.stabilizer(orbit[0]);
        let t: Vec<usize> = lifts[k]
            .members()
            .iter()
            .copied()
            .filter(|&u| stab.contains(alpha.apply(u)))
            .collect();
        let mut label = vec![usize::MAX; b.order()];
        let mut list: Vec<Vec<usize>> = Vec::new();
        for e in 0..b.order() {
            if label[e] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = t.iter().map(|&u| b.mul(u, e)).collect();
            members.sort_unstable();
            for &m in &members {
                label[m] = list.len();
            }
            list.push(members);
        }
        starts.push(total);
        total += list.len();
        cosets.push(list);
        coset_of.push(label);
    }

    let mut rows = Vec::with_capacity(total);
    let mut assigned = Vec::with_capacity(total);
    let mut point_map = Vec::with_capacity(total);
    for (k, orbit) in orbits.iter().enumerate() {
        for coset in &cosets[k] {
            let e = coset[0];
            rows.push(
                (0..b.order())
                    .map(|g| starts[k] + coset_of[k][b.mul(e, g)])
                    .collect(),
            );
            assigned.push(b.conjugate_subgroup(&lifts[k], e)?);
            point_map.push(a.act(orbit[0], alpha.apply(e)));
        }
    }
    let base_points = (0..orbits.len())
        .map(|k| starts[k] + coset_of[k][0])
        .collect();

    let source = Arc::new(GroupStructure::candidate(Arc::clone(b), rows, assigned)?);
    let cover = StructureMorphism::new(
        source,
        Arc::clone(a),
        alpha.map().to_vec(),
        point_map,
    )?;
    Ok(CoverExtension { cover, base_points })
}

/// A cover built over a special partition: the morphism, one section of
/// points per block, and whether every nontrivial kernel element moves each
/// lifted subgroup completely off itself (when that holds and the base is
/// proper, the built structure is proper too).
pub struct SpecialCover {
    pub cover: StructureMorphism,
    pub sections: Vec<Vec<usize>>,
    pub kernel_moves_lifts: bool,
}

/// Extends a surjection pi: H -> G to a cover of `s` along a special
/// partition. `lifts` holds one subgroup of H per block, each carried
/// isomorphically onto the block group. New points are classes of pairs
/// (block point, H-element) glued by the lift, labeled by smallest pair.
pub fn build_special_cover(
    s: &Arc<GroupStructure>,
    partition: &SpecialPartition,
    pi: &GroupHom,
    lifts: &[Subgroup],
) -> Result<SpecialCover, CoverError> {
    if pi.target().as_ref() != s.group().as_ref() {
        return Err(CoverError::WrongTarget);
    }
    if !pi.is_surjective() {
        return Err(CoverError::NotSurjective);
    }
    let defects = validate_special_partition(s, partition);
    if let Some(d) = defects.first() {
        return Err(CoverError::InvalidPartition(d.to_string()));
    }
    if lifts.len() != partition.blocks.len() {
        return Err(CoverError::WrongLiftCount {
            found: lifts.len(),
            expected: partition.blocks.len(),
        });
    }
    let h = pi.source();
    for (i, lift) in lifts.iter().enumerate() {
        h.verify_subgroup(lift.members())?;
        let block = &partition.blocks[i];
        if lift.len() != block.group.len() || pi.image_of(lift) != block.group {
            return Err(CoverError::NotIsomorphicLift { index: i });
        }
    }

    let xs = partition.core_points();
    let block_of: Vec<usize> = xs
        .iter()
        .map(|&x| {
            partition
                .blocks
                .iter()
                .position(|b| b.points.binary_search(&x).is_ok())
                .unwrap()
        })
        .collect();
    let pos = |x: usize| xs.binary_search(&x).unwrap();
    let order = h.order();
    let idx = |x: usize, e: usize| pos(x) * order + e;

    // glue (x, e) to (x moved back by a lift element u, u*e)
    let mut uf = UnionFind::new(xs.len() * order);
    for (p, &x) in xs.iter().enumerate() {
        for &u in lifts[block_of[p]].members() {
            let moved = s.act(x, s.group().inv(pi.apply(u)));
            for e in 0..order {
                uf.union(idx(x, e), idx(moved, h.mul(u, e)));
            }
        }
    }
    let mut class_of = vec![usize::MAX; xs.len() * order];
    let mut reps: Vec<usize> = Vec::new();
    let mut label_of_root = vec![usize::MAX; xs.len() * order];
    for p in 0..xs.len() * order {
        let r = uf.find(p);
        if label_of_root[r] == usize::MAX {
            label_of_root[r] = reps.len();
            reps.push(p);
        }
        class_of[p] = label_of_root[r];
    }

    let mut rows = Vec::with_capacity(reps.len());
    let mut assigned = Vec::with_capacity(reps.len());
    let mut point_map = Vec::with_capacity(reps.len());
    for &p in &reps {
        let (x, e) = (xs[p / order], p % order);
        rows.push((0..order).map(|g| class_of[idx(x, h.mul(e, g))]).collect());
        let gx = s.assigned(x);
        let hx: Vec<usize> = lifts[block_of[pos(x)]]
            .members()
            .iter()
            .copied()
            .filter(|&u| gx.contains(pi.apply(u)))
            .collect();
        assigned.push(h.conjugate_subgroup(&Subgroup::from_sorted_members(hx), e)?);
        point_map.push(s.act(x, pi.apply(e)));
    }
    let sections = partition
        .blocks
        .iter()
        .map(|b| b.points.iter().map(|&x| class_of[idx(x, 0)]).collect())
        .collect();
    let kernel_moves_lifts = kernel_moves_lifts(h, &pi.kernel(), lifts)?;

    let source = Arc::new(GroupStructure::candidate(Arc::clone(h), rows, assigned)?);
    let cover =
        StructureMorphism::new(source, Arc::clone(s), pi.map().to_vec(), point_map)?;
    Ok(SpecialCover {
        cover,
        sections,
        kernel_moves_lifts,
    })
}

fn kernel_moves_lifts(
    h: &FiniteGroup,
    kernel: &Subgroup,
    lifts: &[Subgroup],
) -> Result<bool, GroupError> {
    for &k in kernel.members() {
        if k == 0 {
            continue;
        }
        for lift in lifts {
            let conj = h.conjugate_subgroup(lift, k)?;
            let shared = lift
                .members()
                .iter()
                .filter(|&&m| conj.contains(m))
                .count();
            if shared > 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fixtures;
    use crate::partition::{default_local_data, special_partition};

    fn sign_map(s3: &Arc<FiniteGroup>) -> GroupHom {
        // parity of the one-line permutations, in lexicographic order
        GroupHom::new(
            Arc::clone(s3),
            Arc::new(catalog::cyclic(2)),
            vec![0, 1, 1, 0, 0, 1],
        )
        .unwrap()
    }

    fn sylow_partition(
        s: &Arc<GroupStructure>,
    ) -> SpecialPartition {
        special_partition(s, &default_local_data(s), &[]).unwrap()
    }

    #[test]
    fn identity_lifts_reproduce_the_structure() {
        let a = Arc::new(fixtures::s3_sylow2());
        let alpha = GroupHom::identity(a.group());
        let lifts = vec![a.assigned(0).clone()];
        let ext = extend_to_cover(&a, &alpha, &lifts).unwrap();
        assert!(ext.cover.classify().cover);
        let source = ext.cover.source();
        assert_eq!(source.points(), a.points());
        let mut seen: Vec<usize> = ext.cover.point_map().to_vec();
        seen.sort_unstable();
        assert_eq!(seen, (0..a.points()).collect::<Vec<_>>());
        for j in 0..source.points() {
            assert_eq!(source.assigned(j), a.assigned(ext.cover.apply_point(j)));
        }
        assert_eq!(ext.base_points, vec![0]);
    }

    #[test]
    fn klein_cover_doubles_the_fiber() {
        let a = Arc::new(fixtures::one_point(catalog::cyclic(2)));
        let v4 = Arc::new(catalog::klein_four());
        let alpha =
            GroupHom::new(Arc::clone(&v4), Arc::clone(a.group()), vec![0, 0, 1, 1]).unwrap();
        let lift = v4.closure(&[2]).unwrap();
        let ext = extend_to_cover(&a, &alpha, &[lift.clone()]).unwrap();
        let source = ext.cover.source();
        assert_eq!(source.points(), 2);
        for j in 0..2 {
            assert_eq!(*source.assigned(j), lift);
        }
        assert!(ext.cover.classify().cover);
        // the distinguished point sits over the orbit representative and
        // carries the lift itself
        let base = ext.base_points[0];
        assert_eq!(ext.cover.apply_point(base), 0);
        assert_eq!(*source.assigned(base), lift);
    }

    #[test]
    fn sign_cover_spreads_over_cosets() {
        let a = Arc::new(fixtures::one_point(catalog::cyclic(2)));
        let s3 = Arc::new(catalog::symmetric(3));
        let alpha = sign_map(&s3);
        let lift = s3.closure(&[1]).unwrap();
        let ext = extend_to_cover(&a, &alpha, &[lift]).unwrap();
        let source = ext.cover.source();
        assert_eq!(source.points(), 3);
        assert!(ext.cover.classify().cover);
        // three distinct conjugates of the lifted transposition subgroup
        let mut subs: Vec<Vec<usize>> = (0..3)
            .map(|j| source.assigned(j).members().to_vec())
            .collect();
        subs.sort();
        subs.dedup();
        assert_eq!(subs.len(), 3);
    }

    #[test]
    fn squashing_lift_is_rejected() {
        let a = Arc::new(fixtures::one_point(catalog::cyclic(2)));
        let v4 = Arc::new(catalog::klein_four());
        let alpha =
            GroupHom::new(Arc::clone(&v4), Arc::clone(a.group()), vec![0, 0, 1, 1]).unwrap();
        // lands in the kernel, so it cannot be carried isomorphically
        let bad = v4.closure(&[1]).unwrap();
        assert!(matches!(
            extend_to_cover(&a, &alpha, &[bad]),
            Err(CoverError::NotIsomorphicLift { index: 0 })
        ));
        let s3 = Arc::new(catalog::symmetric(3));
        let sigma = sign_map(&s3);
        let a3 = s3.closure(&[3]).unwrap();
        assert!(matches!(
            extend_to_cover(&a, &sigma, &[a3]),
            Err(CoverError::NotIsomorphicLift { index: 0 })
        ));
    }

    #[test]
    fn identity_special_cover_reproduces_the_structure() {
        let s = Arc::new(fixtures::s3_sylow2());
        let partition = sylow_partition(&s);
        let pi = GroupHom::identity(s.group());
        let lifts = vec![partition.blocks[0].group.clone()];
        let built = build_special_cover(&s, &partition, &pi, &lifts).unwrap();
        assert!(built.cover.classify().cover);
        let source = built.cover.source();
        assert_eq!(source.points(), s.points());
        let mut seen: Vec<usize> = built.cover.point_map().to_vec();
        seen.sort_unstable();
        assert_eq!(seen, (0..s.points()).collect::<Vec<_>>());
        // trivial kernel: the criterion holds vacuously
        assert!(built.kernel_moves_lifts);
        assert_eq!(built.sections, vec![vec![0]]);
    }

    #[test]
    fn diagonal_lift_is_flagged_improper() {
        let s = Arc::new(fixtures::one_point(catalog::cyclic(2)));
        let partition = sylow_partition(&s);
        let v4 = Arc::new(catalog::klein_four());
        let pi =
            GroupHom::new(Arc::clone(&v4), Arc::clone(s.group()), vec![0, 0, 1, 1]).unwrap();
        let diagonal = v4.closure(&[3]).unwrap();
        let built = build_special_cover(&s, &partition, &pi, &[diagonal.clone()]).unwrap();
        let source = built.cover.source();
        assert_eq!(source.points(), 2);
        for y in 0..2 {
            assert_eq!(*source.assigned(y), diagonal);
        }
        let report = source.validate();
        assert!(report.violations.is_empty());
        // two points share one subgroup, and the central kernel cannot move
        // the diagonal off itself
        assert!(!report.proper);
        assert!(!built.kernel_moves_lifts);
        assert!(built.cover.classify().cover);
    }

    #[test]
    fn sign_lift_builds_a_proper_cover() {
        let s = Arc::new(fixtures::one_point(catalog::cyclic(2)));
        let partition = sylow_partition(&s);
        let s3 = Arc::new(catalog::symmetric(3));
        let pi = sign_map(&s3);
        let lift = s3.closure(&[1]).unwrap();
        let built = build_special_cover(&s, &partition, &pi, &[lift]).unwrap();
        let source = built.cover.source();
        assert_eq!(source.points(), 3);
        assert!(built.kernel_moves_lifts);
        let report = source.validate();
        assert!(report.violations.is_empty());
        assert!(report.proper);
        assert!(built.cover.classify().cover);
    }

    #[test]
    fn doubled_group_covers_the_sylow_structure() {
        let s = Arc::new(fixtures::s3_sylow2());
        let partition = sylow_partition(&s);
        let h = Arc::new(catalog::direct_product(
            &catalog::symmetric(3),
            &catalog::cyclic(2),
        ));
        let pi = GroupHom::new(
            Arc::clone(&h),
            Arc::clone(s.group()),
            (0..12).map(|e| e / 2).collect(),
        )
        .unwrap();
        let lift = h.closure(&[3]).unwrap();
        assert_eq!(lift.members(), &[0, 3]);
        let built = build_special_cover(&s, &partition, &pi, &[lift]).unwrap();
        let source = built.cover.source();
        assert_eq!(source.points(), 6);
        assert!(built.cover.classify().cover);
        // the kernel is central, so it fixes every lift elementwise
        assert!(!built.kernel_moves_lifts);
        assert!(!source.validate().proper);
        // each subgroup still travels isomorphically to its image
        for y in 0..source.points() {
            let down = pi.image_of(source.assigned(y));
            let target = s.assigned(built.cover.apply_point(y));
            assert_eq!(source.assigned(y).len(), target.len());
            assert_eq!(down, *target);
        }
    }

    #[test]
    fn sections_sit_over_their_blocks() {
        let s = Arc::new(fixtures::s3_sylow2());
        let partition = sylow_partition(&s);
        let h = Arc::new(catalog::direct_product(
            &catalog::symmetric(3),
            &catalog::cyclic(2),
        ));
        let pi = GroupHom::new(
            Arc::clone(&h),
            Arc::clone(s.group()),
            (0..12).map(|e| e / 2).collect(),
        )
        .unwrap();
        let lift = h.closure(&[3]).unwrap();
        let built = build_special_cover(&s, &partition, &pi, &[lift.clone()]).unwrap();
        for (i, block) in partition.blocks.iter().enumerate() {
            let section = &built.sections[i];
            assert_eq!(section.len(), block.points.len());
            for (y, &x) in section.iter().zip(&block.points) {
                assert_eq!(built.cover.apply_point(*y), x);
                assert!(built
                    .cover
                    .source()
                    .assigned(*y)
                    .is_subset_of(&lift));
            }
        }
    }

    #[test]
    fn broken_partition_is_rejected() {
        let s = Arc::new(fixtures::s3_sylow2());
        let mut partition = sylow_partition(&s);
        partition.blocks[0].transversal.truncate(1);
        let pi = GroupHom::identity(s.group());
        let lifts = vec![partition.blocks[0].group.clone()];
        assert!(matches!(
            build_special_cover(&s, &partition, &pi, &lifts),
            Err(CoverError::InvalidPartition(_))
        ));
    }
}
