//! Fiber products of group structures and the cartesian-square test.
//!
//! Given morphisms alpha: B -> A and phi: G -> A, the fiber product lives on
//! the pairs (b, g) with alpha(b) = phi(g), acts on the pairs of points whose
//! images agree, and assigns to (j, x) the pairs lying in B_j x G_x. Both
//! projections are morphisms; a square is cartesian when its mediator into
//! this product is an isomorphism of structures.

use crate::group::Subgroup;
use crate::structure::{GroupStructure, StructureError, StructureMorphism};
use std::sync::Arc;

pub struct FiberProduct {
    pub product: Arc<GroupStructure>,
    /// Projection onto the source of the first morphism (b-coordinate).
    pub proj_first: StructureMorphism,
    /// Projection onto the source of the second morphism (g-coordinate).
    pub proj_second: StructureMorphism,
    /// Element index -> (b, g), in lexicographic order; identity is index 0.
    pub pairs: Vec<(usize, usize)>,
    /// Point index -> (j, x), in lexicographic order.
    pub point_pairs: Vec<(usize, usize)>,
}

fn require_morphism(m: &StructureMorphism, role: &str) -> Result<(), StructureError> {
    let class = m.classify();
    if !class.morphism {
        return Err(StructureError::NotAMorphism(format!(
            "{role}: {}",
            class
                .defect
                .map(|d| d.to_string())
                .unwrap_or_else(|| "unknown defect".into())
        )));
    }
    Ok(())
}

pub fn fiber_product(
    alpha: &StructureMorphism,
    phi: &StructureMorphism,
) -> Result<FiberProduct, StructureError> {
    if alpha.target().as_ref() != phi.target().as_ref() {
        return Err(StructureError::TargetMismatch);
    }
    require_morphism(alpha, "first morphism")?;
    require_morphism(phi, "second morphism")?;
    let b = alpha.source().as_ref();
    let g = phi.source().as_ref();

    let mut pairs = Vec::new();
    for eb in 0..b.group().order() {
        for eg in 0..g.group().order() {
            if alpha.apply_group(eb) == phi.apply_group(eg) {
                pairs.push((eb, eg));
            }
        }
    }
    let pair_at = |p: (usize, usize)| pairs.binary_search(&p).unwrap();
    let n = pairs.len();
    let mut table = vec![0; n * n];
    for (i, &(b1, g1)) in pairs.iter().enumerate() {
        for (j, &(b2, g2)) in pairs.iter().enumerate() {
            table[i * n + j] =
                pair_at((b.group().mul(b1, b2), g.group().mul(g1, g2)));
        }
    }
    let name = format!(
        "{} x_{} {}",
        b.group().name(),
        alpha.target().group().name(),
        g.group().name()
    );
    let group = Arc::new(crate::group::FiniteGroup::from_table(name, table)?);

    let mut point_pairs = Vec::new();
    for pj in 0..b.points() {
        for px in 0..g.points() {
            if alpha.apply_point(pj) == phi.apply_point(px) {
                point_pairs.push((pj, px));
            }
        }
    }
    let point_at = |p: (usize, usize)| point_pairs.binary_search(&p).unwrap();
    let rows: Vec<Vec<usize>> = point_pairs
        .iter()
        .map(|&(pj, px)| {
            pairs
                .iter()
                .map(|&(eb, eg)| point_at((b.act(pj, eb), g.act(px, eg))))
                .collect()
        })
        .collect();
    let assigned: Vec<Subgroup> = point_pairs
        .iter()
        .map(|&(pj, px)| {
            Subgroup::from_sorted_members(
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(_, &(eb, eg))| {
                        b.assigned(pj).contains(eb) && g.assigned(px).contains(eg)
                    })
                    .map(|(i, _)| i)
                    .collect(),
            )
        })
        .collect();
    let product = Arc::new(GroupStructure::candidate(group, rows, assigned)?);

    let proj_first = StructureMorphism::new(
        Arc::clone(&product),
        Arc::clone(alpha.source()),
        pairs.iter().map(|&(eb, _)| eb).collect(),
        point_pairs.iter().map(|&(pj, _)| pj).collect(),
    )?;
    let proj_second = StructureMorphism::new(
        Arc::clone(&product),
        Arc::clone(phi.source()),
        pairs.iter().map(|&(_, eg)| eg).collect(),
        point_pairs.iter().map(|&(_, px)| px).collect(),
    )?;
    Ok(FiberProduct {
        product,
        proj_first,
        proj_second,
        pairs,
        point_pairs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartesianReport {
    pub commutes: bool,
    pub group_bijective: bool,
    pub points_bijective: bool,
    pub subgroups_match: bool,
}

impl CartesianReport {
    pub fn is_cartesian(&self) -> bool {
        self.commutes && self.group_bijective && self.points_bijective && self.subgroups_match
    }

    fn failed() -> Self {
        CartesianReport {
            commutes: false,
            group_bijective: false,
            points_bijective: false,
            subgroups_match: false,
        }
    }
}

/// Tests whether the square with legs p: P -> B, q: P -> G over alpha, phi is
/// cartesian: the mediator into the fiber product must be bijective on
/// elements and points and carry each assigned subgroup onto its image's.
pub fn check_cartesian(
    p: &StructureMorphism,
    q: &StructureMorphism,
    alpha: &StructureMorphism,
    phi: &StructureMorphism,
) -> Result<CartesianReport, StructureError> {
    if p.source().as_ref() != q.source().as_ref() {
        return Err(StructureError::ShapeMismatch("legs have different sources".into()));
    }
    if p.target().as_ref() != alpha.source().as_ref()
        || q.target().as_ref() != phi.source().as_ref()
    {
        return Err(StructureError::ShapeMismatch(
            "legs do not land in the morphism sources".into(),
        ));
    }
    require_morphism(p, "first leg")?;
    require_morphism(q, "second leg")?;
    let fp = fiber_product(alpha, phi)?;
    let top = p.source().as_ref();

    let around_first = p.then(alpha)?;
    let around_second = q.then(phi)?;
    if around_first.hom().map() != around_second.hom().map()
        || around_first.point_map() != around_second.point_map()
    {
        return Ok(CartesianReport::failed());
    }

    // mediator on elements and points
    let med_elt: Vec<usize> = (0..top.group().order())
        .map(|h| {
            fp.pairs
                .binary_search(&(p.apply_group(h), q.apply_group(h)))
                .unwrap()
        })
        .collect();
    let med_pt: Vec<usize> = (0..top.points())
        .map(|y| {
            fp.point_pairs
                .binary_search(&(p.apply_point(y), q.apply_point(y)))
                .unwrap()
        })
        .collect();

    let bijective = |map: &[usize], size: usize| {
        let mut hit = vec![false; size];
        for &v in map {
            hit[v] = true;
        }
        map.len() == size && hit.iter().all(|&h| h)
    };
    let group_bijective = bijective(&med_elt, fp.pairs.len());
    let points_bijective = bijective(&med_pt, fp.point_pairs.len());
    let subgroups_match = group_bijective
        && points_bijective
        && (0..top.points()).all(|y| {
            let mut image: Vec<usize> = top
                .assigned(y)
                .members()
                .iter()
                .map(|&h| med_elt[h])
                .collect();
            image.sort_unstable();
            image == fp.product.assigned(med_pt[y]).members()
        });
    Ok(CartesianReport {
        commutes: true,
        group_bijective,
        points_bijective,
        subgroups_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fixtures;
    use crate::structure::quotient_structure;

    fn one_point_mod2_square() -> (StructureMorphism, StructureMorphism) {
        let b = Arc::new(fixtures::one_point(catalog::cyclic(4)));
        let a = Arc::new(fixtures::one_point(catalog::cyclic(2)));
        let g = Arc::new(fixtures::one_point(catalog::cyclic(2)));
        let alpha =
            StructureMorphism::new(b, Arc::clone(&a), vec![0, 1, 0, 1], vec![0]).unwrap();
        let phi = StructureMorphism::new(g, a, vec![0, 1], vec![0]).unwrap();
        (alpha, phi)
    }

    #[test]
    fn mod2_pullback_of_z4_is_cyclic() {
        let (alpha, phi) = one_point_mod2_square();
        let fp = fiber_product(&alpha, &phi).unwrap();
        assert_eq!(fp.pairs, vec![(0, 0), (1, 1), (2, 0), (3, 1)]);
        // generated by (1, 1), so cyclic of order four
        assert_eq!(fp.product.group().element_order(1), 4);
        assert_eq!(fp.product.points(), 1);
        assert_eq!(fp.product.assigned(0).len(), 4);
        assert!(fp.product.validate().violations.is_empty());
        assert!(fp.proj_first.classify().morphism);
        assert!(fp.proj_second.classify().morphism);
    }

    #[test]
    fn projection_kernel_matches_opposite_kernel() {
        // the second projection's kernel maps isomorphically onto Ker(alpha)
        let (alpha, phi) = one_point_mod2_square();
        let fp = fiber_product(&alpha, &phi).unwrap();
        let ker = fp.proj_second.hom().kernel();
        let image = fp.proj_first.hom().image_of(&ker);
        assert_eq!(image, alpha.hom().kernel());
        assert!(fp.proj_first.hom().is_injective_on(&ker));
    }

    #[test]
    fn own_projections_are_cartesian() {
        let (alpha, phi) = one_point_mod2_square();
        let fp = fiber_product(&alpha, &phi).unwrap();
        let report =
            check_cartesian(&fp.proj_first, &fp.proj_second, &alpha, &phi).unwrap();
        assert!(report.is_cartesian());
    }

    #[test]
    fn too_small_top_is_not_cartesian() {
        let (alpha, phi) = one_point_mod2_square();
        let p = Arc::new(fixtures::one_point(catalog::cyclic(1)));
        let leg_b = StructureMorphism::new(
            Arc::clone(&p),
            Arc::clone(alpha.source()),
            vec![0],
            vec![0],
        )
        .unwrap();
        let leg_g =
            StructureMorphism::new(p, Arc::clone(phi.source()), vec![0], vec![0]).unwrap();
        let report = check_cartesian(&leg_b, &leg_g, &alpha, &phi).unwrap();
        assert!(report.commutes);
        assert!(!report.group_bijective);
        assert!(!report.is_cartesian());
    }

    #[test]
    fn wrong_subgroup_is_caught() {
        // same group and points as the fiber product, but a smaller assigned
        // subgroup at the single point
        let (alpha, phi) = one_point_mod2_square();
        let fp = fiber_product(&alpha, &phi).unwrap();
        let lean = Arc::new(
            GroupStructure::candidate(
                Arc::clone(fp.product.group()),
                fp.product.action_rows(),
                vec![fp.product.group().trivial_subgroup()],
            )
            .unwrap(),
        );
        let leg_b = StructureMorphism::new(
            Arc::clone(&lean),
            Arc::clone(alpha.source()),
            fp.pairs.iter().map(|&(b, _)| b).collect(),
            vec![0],
        )
        .unwrap();
        let leg_g = StructureMorphism::new(
            lean,
            Arc::clone(phi.source()),
            fp.pairs.iter().map(|&(_, g)| g).collect(),
            vec![0],
        )
        .unwrap();
        let report = check_cartesian(&leg_b, &leg_g, &alpha, &phi).unwrap();
        assert!(report.commutes && report.group_bijective && report.points_bijective);
        assert!(!report.subgroups_match);
        assert!(!report.is_cartesian());
    }

    #[test]
    fn non_commuting_square_reports_failure() {
        // legs into B = G = Z2 one-point structures over A = Z2, with the
        // identity on one leg and the flip... a hom must fix 0, so use the
        // zero map on one leg to break commutation
        let a = Arc::new(fixtures::one_point(catalog::cyclic(2)));
        let alpha = StructureMorphism::identity(&a);
        let phi = StructureMorphism::identity(&a);
        let top = Arc::new(fixtures::one_point(catalog::cyclic(2)));
        let leg_id =
            StructureMorphism::new(Arc::clone(&top), Arc::clone(&a), vec![0, 1], vec![0])
                .unwrap();
        let leg_zero =
            StructureMorphism::new(top, a, vec![0, 0], vec![0]).unwrap();
        let report = check_cartesian(&leg_id, &leg_zero, &alpha, &phi).unwrap();
        assert!(!report.commutes);
        assert!(!report.is_cartesian());
    }

    #[test]
    fn pullback_of_cover_is_cover() {
        // alpha: regular Z4 -> regular Z2 is a cover; pulling back along any
        // morphism keeps it one (checked on the second projection)
        let b = Arc::new(fixtures::regular(catalog::cyclic(4)));
        let a = Arc::new(fixtures::regular(catalog::cyclic(2)));
        let alpha = StructureMorphism::new(
            b,
            Arc::clone(&a),
            vec![0, 1, 0, 1],
            vec![0, 1, 0, 1],
        )
        .unwrap();
        assert!(alpha.classify().cover);
        let phi = StructureMorphism::identity(&a);
        let fp = fiber_product(&alpha, &phi).unwrap();
        let class = fp.proj_second.classify();
        assert!(class.cover, "defect: {:?}", class.defect);
        // and the pulled-back cover has the same kernel size
        assert_eq!(
            fp.proj_second.hom().kernel().len(),
            alpha.hom().kernel().len()
        );
    }

    #[test]
    fn quotient_covers_pull_back_to_covers() {
        // sweep: quotient the Sylow structure by each normal subgroup meeting
        // every assigned subgroup trivially, pull the cover back along itself,
        // and check the projections
        let s = Arc::new(fixtures::s3_sylow2());
        for n in s.group().all_subgroups() {
            if !s.group().is_normal(&n) {
                continue;
            }
            let meets = (0..s.points()).any(|x| {
                s.assigned(x)
                    .members()
                    .iter()
                    .any(|&m| m != 0 && n.contains(m))
            });
            if meets {
                continue;
            }
            let (_, pi) = quotient_structure(&s, &n).unwrap();
            assert!(pi.classify().cover);
            let fp = fiber_product(&pi, &pi).unwrap();
            assert!(fp.product.validate().violations.is_empty());
            assert!(fp.proj_first.classify().cover);
            assert!(fp.proj_second.classify().cover);
            let report =
                check_cartesian(&fp.proj_first, &fp.proj_second, &pi, &pi).unwrap();
            assert!(report.is_cartesian());
        }
    }
}
