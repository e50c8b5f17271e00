//! Ready-made structures used by tests, examples, and the CLI demos.

use crate::group::{FiniteGroup, Subgroup};
use crate::structure::GroupStructure;
use std::sync::Arc;

/// Conjugation on a family of subgroups closed under conjugation; each point
/// carries the subgroup it names. Panics if the family is not closed.
pub fn conjugation_structure(
    group: Arc<FiniteGroup>,
    mut family: Vec<Subgroup>,
) -> GroupStructure {
    crate::group::sort_subgroups(&mut family);
    family.dedup();
    let rows: Vec<Vec<usize>> = family
        .iter()
        .map(|sub| {
            (0..group.order())
                .map(|g| {
                    let conj = group.conjugate_subgroup(sub, g).expect("subgroup");
                    family
                        .iter()
                        .position(|t| *t == conj)
                        .expect("family closed under conjugation")
                })
                .collect()
        })
        .collect();
    GroupStructure::candidate(group, rows, family).unwrap()
}

/// Conjugation on a family of subgroups closed under conjugation, with each
/// point carrying the *normalizer* of its subgroup. Valid for any family,
/// since the stabilizer of a point is exactly the normalizer.
pub fn normalizer_structure(
    group: Arc<FiniteGroup>,
    mut family: Vec<Subgroup>,
) -> GroupStructure {
    crate::group::sort_subgroups(&mut family);
    family.dedup();
    let rows: Vec<Vec<usize>> = family
        .iter()
        .map(|sub| {
            (0..group.order())
                .map(|g| {
                    let conj = group.conjugate_subgroup(sub, g).expect("subgroup");
                    family
                        .iter()
                        .position(|t| *t == conj)
                        .expect("family closed under conjugation")
                })
                .collect()
        })
        .collect();
    let assigned = family.iter().map(|sub| group.normalizer(sub)).collect();
    GroupStructure::candidate(group, rows, assigned).unwrap()
}

/// S3 acting by conjugation on its three subgroups of order two.
pub fn s3_sylow2() -> GroupStructure {
    let s3 = Arc::new(crate::catalog::symmetric(3));
    let family: Vec<Subgroup> = s3
        .all_subgroups()
        .into_iter()
        .filter(|s| s.len() == 2)
        .collect();
    assert_eq!(family.len(), 3);
    conjugation_structure(s3, family)
}

/// The group acting on itself by right multiplication, trivial subgroups.
pub fn regular(group: FiniteGroup) -> GroupStructure {
    let group = Arc::new(group);
    let rows: Vec<Vec<usize>> = (0..group.order())
        .map(|x| (0..group.order()).map(|g| group.mul(x, g)).collect())
        .collect();
    let assigned = vec![group.trivial_subgroup(); group.order()];
    GroupStructure::candidate(group, rows, assigned).unwrap()
}

/// The group acting on itself by right multiplication, with every point
/// carrying the whole group. Every embedding problem over such a source is
/// solvable.
pub fn saturated_regular(group: FiniteGroup) -> GroupStructure {
    let group = Arc::new(group);
    let rows: Vec<Vec<usize>> = (0..group.order())
        .map(|x| (0..group.order()).map(|g| group.mul(x, g)).collect())
        .collect();
    let assigned = vec![group.full_subgroup(); group.order()];
    GroupStructure::candidate(group, rows, assigned).unwrap()
}

/// No points at all; the axioms hold vacuously.
pub fn bare(group: FiniteGroup) -> GroupStructure {
    GroupStructure::candidate(Arc::new(group), Vec::new(), Vec::new()).unwrap()
}

/// A single fixed point carrying the whole group.
pub fn one_point(group: FiniteGroup) -> GroupStructure {
    let group = Arc::new(group);
    let full = group.full_subgroup();
    GroupStructure::candidate(group.clone(), vec![vec![0; group.order()]], vec![full]).unwrap()
}
