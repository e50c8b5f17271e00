//! The subgroup space of a finite group, its basic opens, and a separation
//! test for families of subgroups.
//!
//! For a normal subgroup N, the subgroups A with AN = HN form the basic open
//! neighborhood of H at level N. A family of subgroups also carries the
//! coarser topology generated by the sets Subgr(U) cut down to the family;
//! there the smallest open around H is the set of members contained in H, so
//! two members separate exactly when no member lies under both.

use crate::group::{sort_subgroups, FiniteGroup, GroupError, Subgroup};

/// All subgroups A of `group` with A N = H N, canonically sorted.
/// N must be normal.
pub fn strict_basis_set(
    group: &FiniteGroup,
    h: &Subgroup,
    n: &Subgroup,
) -> Result<Vec<Subgroup>, GroupError> {
    group.verify_subgroup(h.members())?;
    group.verify_subgroup(n.members())?;
    if !group.is_normal(n) {
        return Err(GroupError::NotNormal);
    }
    let hn = group.product_set(h.members(), n.members());
    let mut out: Vec<Subgroup> = group
        .all_subgroups()
        .into_iter()
        .filter(|a| group.product_set(a.members(), n.members()) == hn)
        .collect();
    sort_subgroups(&mut out);
    Ok(out)
}

/// Two family members that no pair of opens can separate, together with the
/// member witnessing it (a subgroup of both). Indices into the sorted family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InseparablePair {
    pub first: usize,
    pub second: usize,
    pub common: usize,
}

#[derive(Debug, Clone)]
pub struct SeparationReport {
    /// The family after canonical sorting and deduplication.
    pub family: Vec<Subgroup>,
    pub hausdorff: bool,
    pub witness: Option<InseparablePair>,
}

/// Decides whether a family of subgroups is Hausdorff in the topology whose
/// opens are generated by containment: distinct H, H' separate exactly when
/// no family member is contained in both.
pub fn etale_separation(
    group: &FiniteGroup,
    family: &[Subgroup],
) -> Result<SeparationReport, GroupError> {
    let mut fam: Vec<Subgroup> = Vec::with_capacity(family.len());
    for sub in family {
        fam.push(group.verify_subgroup(sub.members())?);
    }
    sort_subgroups(&mut fam);
    fam.dedup();
    for i in 0..fam.len() {
        for j in (i + 1)..fam.len() {
            let meet: Vec<usize> = fam[i]
                .members()
                .iter()
                .copied()
                .filter(|&m| fam[j].contains(m))
                .collect();
            let meet = Subgroup::from_sorted_members(meet);
            if let Some(k) = fam.iter().position(|a| a.is_subset_of(&meet)) {
                return Ok(SeparationReport {
                    family: fam,
                    hausdorff: false,
                    witness: Some(InseparablePair {
                        first: i,
                        second: j,
                        common: k,
                    }),
                });
            }
        }
    }
    Ok(SeparationReport {
        family: fam,
        hausdorff: true,
        witness: None,
    })
}
