//! Catalog enumeration. Every action on a finite point set is a
//! homomorphism into a symmetric group, and every equivariant subgroup
//! assignment is a per-orbit choice of a subgroup containing the
//! representative's stabilizer; enumerating both gives every structure on a
//! given group up to a point bound. On top of that: all quotient covers of
//! a structure, and all morphisms between two structures.

use crate::catalog;
use crate::extend::normal_subgroups_desc;
use crate::group::{hom_search, FiniteGroup, Subgroup};
use crate::structure::{quotient_structure, GroupStructure, StructureMorphism};
use std::sync::Arc;

/// The groups the structure catalog is built over.
pub fn default_groups() -> Vec<Arc<FiniteGroup>> {
    vec![
        Arc::new(catalog::cyclic(1)),
        Arc::new(catalog::cyclic(2)),
        Arc::new(catalog::cyclic(3)),
        Arc::new(catalog::cyclic(4)),
        Arc::new(catalog::klein_four()),
        Arc::new(catalog::symmetric(3)),
    ]
}

/// All structures of the group on 0..=max_points points.
pub fn structures_on(group: &Arc<FiniteGroup>, max_points: usize) -> Vec<Arc<GroupStructure>> {
    let subgroups = group.all_subgroups();
    let mut out = Vec::new();
    for m in 0..=max_points {
        let sym = Arc::new(catalog::symmetric(m));
        let perms = catalog::permutations(m);
        let homs = crate::group::enumerate_homs(group, &sym, &[]).unwrap();
        for hom in homs {
            let rows: Vec<Vec<usize>> = (0..m)
                .map(|x| (0..group.order()).map(|g| perms[hom.apply(g)][x]).collect())
                .collect();
            out.extend(assignments(group, &subgroups, rows));
        }
    }
    out
}

/// All structures over all the groups.
pub fn structure_catalog(
    groups: &[Arc<FiniteGroup>],
    max_points: usize,
) -> Vec<Arc<GroupStructure>> {
    groups
        .iter()
        .flat_map(|g| structures_on(g, max_points))
        .collect()
}

/// Every way to complete an action to a structure: per orbit, any subgroup
/// containing the representative's stabilizer, spread by conjugation.
fn assignments(
    group: &Arc<FiniteGroup>,
    subgroups: &[Subgroup],
    rows: Vec<Vec<usize>>,
) -> Vec<Arc<GroupStructure>> {
    let m = rows.len();
    // orbits with a witness element carrying the representative to each point
    let mut rep_of = vec![usize::MAX; m];
    let mut witness = vec![0usize; m];
    let mut orbit_index = vec![usize::MAX; m];
    let mut reps = Vec::new();
    for x in 0..m {
        if rep_of[x] != usize::MAX {
            continue;
        }
        let k = reps.len();
        reps.push(x);
        rep_of[x] = x;
        orbit_index[x] = k;
        let mut queue = vec![x];
        while let Some(y) = queue.pop() {
            for g in 0..group.order() {
                let z = rows[y][g];
                if rep_of[z] == usize::MAX {
                    rep_of[z] = x;
                    orbit_index[z] = k;
                    witness[z] = group.mul(witness[y], g);
                    queue.push(z);
                }
            }
        }
    }
    let options: Vec<Vec<usize>> = reps
        .iter()
        .map(|&rep| {
            let stab = Subgroup::from_sorted_members(
                (0..group.order()).filter(|&g| rows[rep][g] == rep).collect(),
            );
            (0..subgroups.len())
                .filter(|&s| stab.is_subset_of(&subgroups[s]))
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut choice = vec![0usize; reps.len()];
    loop {
        let assigned: Vec<Subgroup> = (0..m)
            .map(|x| {
                let sub = &subgroups[options[orbit_index[x]][choice[orbit_index[x]]]];
                group.conjugate_subgroup(sub, witness[x]).unwrap()
            })
            .collect();
        out.push(Arc::new(
            GroupStructure::candidate(Arc::clone(group), rows.clone(), assigned).unwrap(),
        ));
        let mut k = reps.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < options[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Every cover with this source: one quotient projection per normal
/// subgroup meeting each assigned subgroup trivially, largest kernel first.
pub fn covers_from(s: &Arc<GroupStructure>) -> Vec<StructureMorphism> {
    normal_subgroups_desc(s.group())
        .into_iter()
        .filter(|n| {
            (0..s.points()).all(|x| {
                s.assigned(x)
                    .members()
                    .iter()
                    .all(|&g| g == 0 || !n.contains(g))
            })
        })
        .map(|n| quotient_structure(s, &n).unwrap().1)
        .collect()
}

/// Every morphism from `source` to `target`, in lexicographic order (group
/// images first, then per-orbit point choices), cut off at `cap`.
pub fn morphisms_between(
    source: &Arc<GroupStructure>,
    target: &Arc<GroupStructure>,
    cap: usize,
) -> Vec<StructureMorphism> {
    let mut out: Vec<StructureMorphism> = Vec::new();
    if cap == 0 {
        return out;
    }
    let orbits = source.orbits();
    hom_search(source.group(), target.group(), &[], |_, _| true, &mut |map| {
        let image = |sub: &[usize]| -> Vec<usize> {
            let mut v: Vec<usize> = sub.iter().map(|&m| map[m]).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut options: Vec<Vec<usize>> = Vec::with_capacity(orbits.len());
        for orbit in &orbits {
            let x = orbit[0];
            let gx = image(source.assigned(x).members());
            let sx = image(source.stabilizer(x).members());
            let cands: Vec<usize> = (0..target.points())
                .filter(|&j| {
                    gx.iter().all(|&e| target.assigned(j).contains(e))
                        && sx.iter().all(|&e| target.stabilizer(j).contains(e))
                })
                .collect();
            if cands.is_empty() {
                return true;
            }
            options.push(cands);
        }
        let mut choice = vec![0usize; options.len()];
        loop {
            let mut pm = vec![usize::MAX; source.points()];
            for (k, orbit) in orbits.iter().enumerate() {
                let j = options[k][choice[k]];
                for e in 0..source.group().order() {
                    pm[source.act(orbit[0], e)] = target.act(j, map[e]);
                }
            }
            let morphism = StructureMorphism::new(
                Arc::clone(source),
                Arc::clone(target),
                map.to_vec(),
                pm,
            )
            .unwrap();
            debug_assert!(morphism.classify().morphism);
            out.push(morphism);
            if out.len() >= cap {
                return false;
            }
            let mut k = options.len();
            loop {
                if k == 0 {
                    return true;
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
            }
        }
    })
    .unwrap();
    out
}
