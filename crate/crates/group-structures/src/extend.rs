//! Extending a surjective group map to a structure epimorphism onto a finite
//! target, factoring any morphism through such an extension, and completing
//! a cover to a cartesian square with a finite cover at the bottom.
//!
//! The extension partitions the points along their stabilizers enlarged by
//! the kernel, takes block translates as target points, and assigns to each
//! translate the image of the base point's subgroup, conjugated along.

use crate::group::{FiniteGroup, GroupError, GroupHom, Subgroup};
use crate::partition::{special_partition, LocalData, PartitionError, SpecialPartition};
use crate::structure::{
    quotient_structure, GroupStructure, StructureError, StructureMorphism,
};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExtendError {
    #[error("group map source is not the structure's group")]
    WrongSource,
    #[error("group map is not surjective")]
    NotSurjective,
    #[error("separating parts are invalid: {0}")]
    BadParts(String),
    #[error("chosen points {first} and {second} share an orbit")]
    SharedOrbit { first: usize, second: usize },
    #[error("morphism is not a cover: {0}")]
    NotACover(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Default)]
pub struct ExtendOptions {
    /// Points whose subgroup image must equal the target subgroup at their
    /// image; one per orbit becomes that orbit's base point.
    pub pins: Vec<usize>,
    /// A partition of the points, permuted by the group and fixed setwise by
    /// the kernel; images of distinct parts stay disjoint.
    pub separate_blocks: Option<Vec<Vec<usize>>>,
    /// Points in pairwise distinct orbits whose images must land in pairwise
    /// distinct target orbits.
    pub distinct_orbits: Vec<usize>,
}

/// Extends a surjective group map to a structure epimorphism onto a finite
/// structure over the map's target. Returns the morphism together with the
/// partition that produced it.
pub fn extend_epimorphism(
    s: &Arc<GroupStructure>,
    phi: &GroupHom,
    options: &ExtendOptions,
) -> Result<(StructureMorphism, SpecialPartition), ExtendError> {
    if phi.source().as_ref() != s.group().as_ref() {
        return Err(ExtendError::WrongSource);
    }
    if !phi.is_surjective() {
        return Err(ExtendError::NotSurjective);
    }
    let kernel = phi.kernel();
    let orbits = s.orbits();
    let orbit_of = |x: usize| orbits.iter().position(|o| o.contains(&x)).unwrap();

    // one base point per orbit: first pin wins, then distinct-orbit choices
    let mut base_of_orbit: Vec<Option<usize>> = vec![None; orbits.len()];
    for &p in &options.pins {
        if p >= s.points() {
            return Err(PartitionError::PinOutOfRange(p).into());
        }
        let o = orbit_of(p);
        base_of_orbit[o].get_or_insert(p);
    }
    for (k, &p) in options.distinct_orbits.iter().enumerate() {
        if p >= s.points() {
            return Err(PartitionError::PinOutOfRange(p).into());
        }
        if let Some(&q) = options.distinct_orbits[..k]
            .iter()
            .find(|&&q| orbit_of(q) == orbit_of(p) && q != p)
        {
            return Err(ExtendError::SharedOrbit { first: q, second: p });
        }
        base_of_orbit[orbit_of(p)].get_or_insert(p);
    }
    let pins: Vec<usize> = base_of_orbit.iter().flatten().copied().collect();

    if let Some(parts) = &options.separate_blocks {
        check_parts(s, parts, &kernel)?;
    }

    // partition the stabilizer structure, enlarging each stabilizer by the
    // kernel
    let stab = Arc::new(s.stabilizer_structure());
    let local: Vec<LocalData> = (0..s.points())
        .map(|y| {
            let enlarged = Subgroup::from_sorted_members(s.group().product_set(
                stab.assigned(y).members(),
                kernel.members(),
            ));
            let neighborhood = s.orbit_under(y, enlarged.members());
            LocalData {
                group: enlarged,
                neighborhood,
            }
        })
        .collect();
    let partition = special_partition(&stab, &local, &pins)?;

    // target points: block translates, labeled by smallest member
    let mut translates: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (i, block) in partition.blocks.iter().enumerate() {
        for &rho in &block.transversal {
            let mut t: Vec<usize> = block.points.iter().map(|&x| s.act(x, rho)).collect();
            t.sort_unstable();
            translates.push((i, rho, t));
        }
    }
    translates.sort_by(|a, b| a.2.cmp(&b.2));
    let find = |set: &[usize]| translates.iter().position(|(_, _, t)| t == set).unwrap();

    let mut point_map = vec![usize::MAX; s.points()];
    for (idx, (_, _, t)) in translates.iter().enumerate() {
        for &x in t {
            assert_eq!(point_map[x], usize::MAX, "translates must tile the points");
            point_map[x] = idx;
        }
    }
    assert!(point_map.iter().all(|&v| v != usize::MAX));

    let agroup = Arc::clone(phi.target());
    let rows: Vec<Vec<usize>> = translates
        .iter()
        .map(|(_, _, t)| {
            (0..agroup.order())
                .map(|a| {
                    let g = phi.preimages_of(a)[0];
                    let mut moved: Vec<usize> = t.iter().map(|&x| s.act(x, g)).collect();
                    moved.sort_unstable();
                    find(&moved)
                })
                .collect()
        })
        .collect();
    let assigned: Vec<Subgroup> = translates
        .iter()
        .map(|&(i, rho, _)| {
            let base = partition.blocks[i].base;
            let image = phi.image_of(s.assigned(base));
            agroup
                .conjugate_subgroup(&image, phi.apply(rho))
                .expect("image is a subgroup")
        })
        .collect();
    let target = Arc::new(GroupStructure::candidate(agroup, rows, assigned)?);
    let morphism =
        StructureMorphism::new(Arc::clone(s), target, phi.map().to_vec(), point_map)?;
    Ok((morphism, partition))
}

fn check_parts(
    s: &GroupStructure,
    parts: &[Vec<usize>],
    kernel: &Subgroup,
) -> Result<(), ExtendError> {
    let mut owner = vec![usize::MAX; s.points()];
    for (j, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(ExtendError::BadParts(format!("part {j} is empty")));
        }
        for &x in part {
            if x >= s.points() {
                return Err(ExtendError::BadParts(format!(
                    "part {j} contains out-of-range point {x}"
                )));
            }
            if owner[x] != usize::MAX {
                return Err(ExtendError::BadParts(format!(
                    "point {x} lies in parts {} and {j}",
                    owner[x]
                )));
            }
            owner[x] = j;
        }
    }
    if let Some(x) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(ExtendError::BadParts(format!("point {x} lies in no part")));
    }
    let sorted: Vec<Vec<usize>> = parts
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.sort_unstable();
            q
        })
        .collect();
    for (j, part) in sorted.iter().enumerate() {
        for g in 0..s.group().order() {
            let mut moved: Vec<usize> = part.iter().map(|&x| s.act(x, g)).collect();
            moved.sort_unstable();
            if !sorted.contains(&moved) {
                return Err(ExtendError::BadParts(format!(
                    "element {g} maps part {j} onto no part"
                )));
            }
            if kernel.contains(g) && moved != *part {
                return Err(ExtendError::BadParts(format!(
                    "kernel element {g} moves part {j}"
                )));
            }
        }
    }
    Ok(())
}

/// Splits a morphism into an epimorphism onto a finite intermediate
/// structure followed by a morphism into the original target.
pub fn factor_morphism(
    phi: &StructureMorphism,
) -> Result<(StructureMorphism, StructureMorphism), ExtendError> {
    let s = phi.source();
    let n = phi.hom().kernel();
    let (_, qhom) = s.group().quotient(&n)?;

    let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); phi.target().points()];
    for x in 0..s.points() {
        fibers[phi.apply_point(x)].push(x);
    }
    let parts: Vec<Vec<usize>> = fibers.into_iter().filter(|f| !f.is_empty()).collect();
    let options = ExtendOptions {
        separate_blocks: Some(parts),
        ..ExtendOptions::default()
    };
    let (hat, _) = extend_epimorphism(s, &qhom, &options)?;

    let bar_group: Vec<usize> = (0..hat.target().group().order())
        .map(|c| phi.apply_group(hat.hom().preimages_of(c)[0]))
        .collect();
    let bar_points: Vec<usize> = (0..hat.target().points())
        .map(|j| {
            let x = (0..s.points()).find(|&x| hat.apply_point(x) == j).unwrap();
            phi.apply_point(x)
        })
        .collect();
    let bar = StructureMorphism::new(
        Arc::clone(hat.target()),
        Arc::clone(phi.target()),
        bar_group,
        bar_points,
    )?;
    Ok((hat, bar))
}

/// A commuting square over a cover psi: H -> G with finite bottom row.
pub struct CartesianSquare {
    pub beta: StructureMorphism,
    pub alpha: StructureMorphism,
    pub phi: StructureMorphism,
    /// The normal subgroup the bottom row was built from.
    pub shrink: Subgroup,
}

/// Normal subgroups, largest first, members ascending among equals.
pub fn normal_subgroups_desc(group: &FiniteGroup) -> Vec<Subgroup> {
    let mut normals: Vec<Subgroup> = group
        .all_subgroups()
        .into_iter()
        .filter(|n| group.is_normal(n))
        .collect();
    normals.sort_by(|a, b| b.len().cmp(&a.len()).then(a.members().cmp(b.members())));
    normals
}

/// Completes a cover psi to a commuting square whose bottom row is a cover
/// of finite structures, mediated isomorphically by (beta, psi). The normal
/// subgroup is chosen largest-first among those keeping the kernel separated
/// from all point subgroups.
pub fn complete_to_cartesian(psi: &StructureMorphism) -> Result<CartesianSquare, ExtendError> {
    let class = psi.classify();
    if !class.cover {
        return Err(ExtendError::NotACover(
            class
                .defect
                .map(|d| d.to_string())
                .unwrap_or_else(|| "unclassified".into()),
        ));
    }
    let h = psi.source();
    let k = psi.hom().kernel();

    let mut union_members = vec![false; h.group().order()];
    for x in 0..h.points() {
        for &m in h.assigned(x).members() {
            union_members[m] = true;
        }
    }
    let union_subs: Vec<usize> = (0..h.group().order())
        .filter(|&m| union_members[m])
        .collect();

    let shrink = normal_subgroups_desc(h.group())
        .into_iter()
        .find(|n| {
            let disjoint = k
                .members()
                .iter()
                .all(|&m| m == 0 || !n.contains(m));
            if !disjoint {
                return false;
            }
            let spread = h.group().product_set(&union_subs, n.members());
            k.members().iter().all(|&m| m == 0 || !spread.contains(&m))
        })
        .expect("the trivial subgroup always qualifies");

    let (_, qhom) = h.group().quotient(&shrink)?;
    let (beta, _) = extend_epimorphism(h, &qhom, &ExtendOptions::default())?;
    let beta_k = beta.hom().image_of(&k);
    let (_, alpha) = quotient_structure(beta.target(), &beta_k)?;

    let g = psi.target();
    let phi_group: Vec<usize> = (0..g.group().order())
        .map(|e| alpha.apply_group(beta.apply_group(psi.hom().preimages_of(e)[0])))
        .collect();
    let phi_points: Vec<usize> = (0..g.points())
        .map(|x| {
            let y = (0..h.points()).find(|&y| psi.apply_point(y) == x).unwrap();
            alpha.apply_point(beta.apply_point(y))
        })
        .collect();
    let phi = StructureMorphism::new(
        Arc::clone(g),
        Arc::clone(alpha.target()),
        phi_group,
        phi_points,
    )?;
    Ok(CartesianSquare {
        beta,
        alpha,
        phi,
        shrink,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fiber::check_cartesian;
    use crate::fixtures;

    fn identity_hom(s: &Arc<GroupStructure>) -> GroupHom {
        GroupHom::identity(s.group())
    }

    #[test]
    fn extending_along_identity_gives_isomorphic_target() {
        let s = Arc::new(fixtures::s3_sylow2());
        let (m, p) = extend_epimorphism(&s, &identity_hom(&s), &ExtendOptions::default())
            .unwrap();
        assert_eq!(p.blocks.len(), 1);
        assert_eq!(m.target().points(), 3);
        let class = m.classify();
        assert!(class.cover);
        assert!(m.hom().is_injective());
        assert!(m.target().validate().violations.is_empty());
        // subgroups carried exactly at every point
        for x in 0..3 {
            assert_eq!(
                m.hom().image_of(s.assigned(x)),
                *m.target().assigned(m.apply_point(x))
            );
        }
    }

    #[test]
    fn extension_matches_quotient_on_sylow_fixture() {
        let s = Arc::new(fixtures::s3_sylow2());
        let a3 = s.group().closure(&[3]).unwrap();
        let (_, qhom) = s.group().quotient(&a3).unwrap();
        let (m, _) = extend_epimorphism(&s, &qhom, &ExtendOptions::default()).unwrap();
        assert_eq!(m.target().points(), 1);
        assert_eq!(m.target().group().order(), 2);
        assert_eq!(m.target().assigned(0).len(), 2);
        assert!(m.classify().epimorphism);
        assert!(m.target().validate().violations.is_empty());
    }

    #[test]
    fn regular_z4_extends_mod_two() {
        let s = Arc::new(fixtures::regular(catalog::cyclic(4)));
        let two = s.group().closure(&[2]).unwrap();
        let (_, qhom) = s.group().quotient(&two).unwrap();
        let (m, p) = extend_epimorphism(&s, &qhom, &ExtendOptions::default()).unwrap();
        assert_eq!(p.blocks[0].points, vec![0, 2]);
        assert_eq!(m.target().points(), 2);
        assert_eq!(m.apply_point(0), m.apply_point(2));
        assert_ne!(m.apply_point(0), m.apply_point(1));
        let class = m.classify();
        assert!(class.cover, "defect: {:?}", class.defect);
        assert!(m.target().validate().violations.is_empty());
    }

    #[test]
    fn epimorphism_holds_at_every_point() {
        // the image of each point's subgroup equals the target subgroup even
        // without pinning
        let structures = [
            fixtures::s3_sylow2(),
            fixtures::regular(catalog::dihedral(4)),
            fixtures::one_point(catalog::quaternion8()),
        ];
        for s in structures {
            let s = Arc::new(s);
            for n in normal_subgroups_desc(s.group()) {
                let (_, qhom) = s.group().quotient(&n).unwrap();
                let (m, _) =
                    extend_epimorphism(&s, &qhom, &ExtendOptions::default()).unwrap();
                assert!(m.classify().epimorphism);
                assert!(m.target().validate().violations.is_empty());
                for x in 0..s.points() {
                    assert_eq!(
                        m.hom().image_of(s.assigned(x)),
                        *m.target().assigned(m.apply_point(x)),
                        "{} mod N of order {}",
                        s.group().name(),
                        n.len()
                    );
                }
            }
        }
    }

    #[test]
    fn pins_choose_base_points() {
        let s = Arc::new(fixtures::s3_sylow2());
        let options = ExtendOptions {
            pins: vec![2],
            ..ExtendOptions::default()
        };
        let (m, p) = extend_epimorphism(&s, &identity_hom(&s), &options).unwrap();
        assert_eq!(p.blocks[0].base, 2);
        assert!(m.classify().epimorphism);
    }

    #[test]
    fn distinct_orbit_images_stay_distinct() {
        // two fixed points in distinct orbits: images must differ
        let z2 = Arc::new(catalog::cyclic(2));
        let full = z2.full_subgroup();
        let s = Arc::new(
            GroupStructure::candidate(
                Arc::clone(&z2),
                vec![vec![0, 0], vec![1, 1]],
                vec![full.clone(), full],
            )
            .unwrap(),
        );
        let options = ExtendOptions {
            distinct_orbits: vec![0, 1],
            ..ExtendOptions::default()
        };
        let (m, _) = extend_epimorphism(&s, &identity_hom(&s), &options).unwrap();
        let a = m.target();
        let orbit_of = |i: usize| a.orbit(i);
        assert_ne!(orbit_of(m.apply_point(0)), orbit_of(m.apply_point(1)));
    }

    #[test]
    fn shared_orbit_request_is_rejected() {
        let s = Arc::new(fixtures::s3_sylow2());
        let options = ExtendOptions {
            distinct_orbits: vec![0, 1],
            ..ExtendOptions::default()
        };
        match extend_epimorphism(&s, &identity_hom(&s), &options) {
            Err(ExtendError::SharedOrbit { first: 0, second: 1 }) => {}
            other => panic!("expected SharedOrbit, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn separate_blocks_keep_images_apart() {
        let s = Arc::new(fixtures::regular(catalog::cyclic(4)));
        let two = s.group().closure(&[2]).unwrap();
        let (_, qhom) = s.group().quotient(&two).unwrap();
        let options = ExtendOptions {
            separate_blocks: Some(vec![vec![0, 2], vec![1, 3]]),
            ..ExtendOptions::default()
        };
        let (m, _) = extend_epimorphism(&s, &qhom, &options).unwrap();
        let images: Vec<usize> = vec![m.apply_point(0), m.apply_point(2)];
        assert!(!images.contains(&m.apply_point(1)));
        assert!(!images.contains(&m.apply_point(3)));
    }

    #[test]
    fn kernel_moving_parts_are_rejected() {
        let s = Arc::new(fixtures::regular(catalog::cyclic(4)));
        let two = s.group().closure(&[2]).unwrap();
        let (_, qhom) = s.group().quotient(&two).unwrap();
        let options = ExtendOptions {
            separate_blocks: Some(vec![vec![0, 1], vec![2, 3]]),
            ..ExtendOptions::default()
        };
        assert!(matches!(
            extend_epimorphism(&s, &qhom, &options),
            Err(ExtendError::BadParts(_))
        ));
    }

    #[test]
    fn factoring_splits_through_an_epimorphism() {
        // a non-surjective morphism: Z2 one-point into Z4 one-point
        let src = Arc::new(fixtures::one_point(catalog::cyclic(2)));
        let dst = Arc::new(fixtures::one_point(catalog::cyclic(4)));
        let phi =
            StructureMorphism::new(Arc::clone(&src), dst, vec![0, 2], vec![0]).unwrap();
        assert!(phi.classify().morphism);
        assert!(!phi.classify().epimorphism);
        let (hat, bar) = factor_morphism(&phi).unwrap();
        assert!(hat.classify().epimorphism);
        assert!(bar.classify().morphism);
        let composite = hat.then(&bar).unwrap();
        assert_eq!(composite.hom().map(), phi.hom().map());
        assert_eq!(composite.point_map(), phi.point_map());
    }

    #[test]
    fn factoring_covers_recovers_them() {
        let s = Arc::new(fixtures::s3_sylow2());
        let a3 = s.group().closure(&[3]).unwrap();
        let (_, pi) = quotient_structure(&s, &a3).unwrap();
        let (hat, bar) = factor_morphism(&pi).unwrap();
        assert!(hat.classify().epimorphism);
        let composite = hat.then(&bar).unwrap();
        assert_eq!(composite.hom().map(), pi.hom().map());
        assert_eq!(composite.point_map(), pi.point_map());
        // target fibers refine the original fibers
        for x1 in 0..s.points() {
            for x2 in 0..s.points() {
                if hat.apply_point(x1) == hat.apply_point(x2) {
                    assert_eq!(pi.apply_point(x1), pi.apply_point(x2));
                }
            }
        }
    }

    #[test]
    fn cartesian_completion_of_klein_cover() {
        // V4 regular over Z2: a normal complement of the kernel exists, so
        // the search finds a proper shrink
        let v4 = Arc::new(catalog::klein_four());
        let s = Arc::new(fixtures::regular(catalog::klein_four()));
        let k = v4.closure(&[2]).unwrap();
        let (_, pi) = quotient_structure(&s, &k).unwrap();
        let square = complete_to_cartesian(&pi).unwrap();
        assert_eq!(square.shrink.len(), 2);
        assert!(!square.shrink.contains(2));
        assert!(square.alpha.classify().cover);
        let report = check_cartesian(&square.beta, &pi, &square.alpha, &square.phi).unwrap();
        assert!(report.is_cartesian(), "{report:?}");
    }

    #[test]
    fn cartesian_completion_of_sylow_quotient() {
        let s = Arc::new(fixtures::s3_sylow2());
        let a3 = s.group().closure(&[3]).unwrap();
        let (_, pi) = quotient_structure(&s, &a3).unwrap();
        let square = complete_to_cartesian(&pi).unwrap();
        assert!(square.alpha.classify().cover);
        let report = check_cartesian(&square.beta, &pi, &square.alpha, &square.phi).unwrap();
        assert!(report.is_cartesian(), "{report:?}");
    }

    #[test]
    fn non_covers_are_refused() {
        let s = Arc::new(fixtures::one_point(catalog::cyclic(2)));
        let (_, pi) = quotient_structure(&s, &s.group().full_subgroup()).unwrap();
        assert!(matches!(
            complete_to_cartesian(&pi),
            Err(ExtendError::NotACover(_))
        ));
    }

    #[test]
    fn completion_sweep_over_quotient_covers() {
        for group in [catalog::quaternion8(), catalog::dihedral(4)] {
            let s = Arc::new(fixtures::regular(group));
            for n in normal_subgroups_desc(s.group()) {
                if n.len() > 4 || n.is_trivial() {
                    continue;
                }
                let (_, pi) = quotient_structure(&s, &n).unwrap();
                assert!(pi.classify().cover);
                let square = complete_to_cartesian(&pi).unwrap();
                assert!(square.alpha.classify().cover);
                let report =
                    check_cartesian(&square.beta, &pi, &square.alpha, &square.phi).unwrap();
                assert!(report.is_cartesian());
            }
        }
    }
}
