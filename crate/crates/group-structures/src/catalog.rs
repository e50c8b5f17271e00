//! Constructors for the small groups used throughout the test suites:
//! cyclic, dihedral, dicyclic, symmetric and alternating groups, direct
//! products, and a catalog of every group of order at most 12.

use crate::group::FiniteGroup;

pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = (a + b) % n;
        }
    }
    let g = FiniteGroup::from_table(format!("Z{n}"), table).unwrap();
    if n > 1 {
        g.with_generators(vec![1])
    } else {
        g
    }
}

pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (n, m) = (g.order(), h.order());
    let idx = |a: usize, b: usize| a * m + b;
    let order = n * m;
    let mut table = vec![0; order * order];
    for a1 in 0..n {
        for b1 in 0..m {
            for a2 in 0..n {
                for b2 in 0..m {
                    table[idx(a1, b1) * order + idx(a2, b2)] = idx(g.mul(a1, a2), h.mul(b1, b2));
                }
            }
        }
    }
    FiniteGroup::from_table(format!("{}x{}", g.name(), h.name()), table).unwrap()
}

pub fn klein_four() -> FiniteGroup {
    direct_product(&cyclic(2), &cyclic(2)).rename("V4")
}

/// Dihedral group of order 2n: elements f*n + k encode s^f r^k.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let order = 2 * n;
    let idx = |f: usize, k: usize| f * n + k % n;
    let mut table = vec![0; order * order];
    for f1 in 0..2 {
        for k1 in 0..n {
            for f2 in 0..2 {
                for k2 in 0..n {
                    // s^f1 r^k1 * s^f2 r^k2 = s^(f1+f2) r^(±k1 + k2)
                    let k = if f2 == 0 { k1 + k2 } else { n - k1 % n + k2 };
                    table[idx(f1, k1) * order + idx(f2, k2)] = idx((f1 + f2) % 2, k % n);
                }
            }
        }
    }
    FiniteGroup::from_table(format!("D{n}"), table).unwrap()
}

/// Dicyclic group of order 4n: elements e*2n + k encode b^e a^k, with
/// a^(2n) = 1, b^2 = a^n, b^-1 a b = a^-1. dicyclic(2) is the quaternion
/// group.
pub fn dicyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let m = 2 * n;
    let order = 4 * n;
    let idx = |e: usize, k: usize| e * m + k % m;
    let mut table = vec![0; order * order];
    for e1 in 0..2 {
        for k1 in 0..m {
            for e2 in 0..2 {
                for k2 in 0..m {
                    let (e, k) = match (e1, e2) {
                        (0, 0) => (0, k1 + k2),
                        (0, 1) => (1, m - k1 % m + k2),
                        (1, 0) => (1, k1 + k2),
                        _ => (0, n + m - k1 % m + k2),
                    };
                    table[idx(e1, k1) * order + idx(e2, k2)] = idx(e % 2, k % m);
                }
            }
        }
    }
    FiniteGroup::from_table(format!("Dic{n}"), table).unwrap()
}

pub fn quaternion8() -> FiniteGroup {
    dicyclic(2).rename("Q8")
}

/// Symmetric group on n letters (n <= 5 is plenty here). Elements are the
/// permutations of 0..n in lexicographic one-line order, so the identity is
/// index 0. Product p*q applies p first, then q — matching right actions
/// written x^g.
pub fn symmetric(n: usize) -> FiniteGroup {
    let perms = permutations(n);
    let order = perms.len();
    let index_of = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
    let mut table = vec![0; order * order];
    for (i, p) in perms.iter().enumerate() {
        for (j, q) in perms.iter().enumerate() {
            let composed: Vec<usize> = (0..n).map(|x| q[p[x]]).collect();
            table[i * order + j] = index_of(&composed);
        }
    }
    FiniteGroup::from_table(format!("S{n}"), table).unwrap()
}

/// Alternating group on 4 letters as a relabeled subgroup of S4.
pub fn alternating4() -> FiniteGroup {
    let s4 = symmetric(4);
    let perms = permutations(4);
    let members: Vec<usize> = (0..24).filter(|&i| perm_sign(&perms[i]) == 1).collect();
    let sub = s4.verify_subgroup(&members).unwrap();
    let (a4, _) = s4.subgroup_group(&sub, "A4").unwrap();
    a4
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for x in 0..n {
                if !p.contains(&x) {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out.sort();
    out
}

fn perm_sign(p: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Every group of order at most 12 up to isomorphism (24 groups).
pub fn small_groups() -> Vec<FiniteGroup> {
    vec![
        cyclic(1),
        cyclic(2),
        cyclic(3),
        cyclic(4),
        klein_four(),
        cyclic(5),
        cyclic(6),
        symmetric(3),
        cyclic(7),
        cyclic(8),
        direct_product(&cyclic(4), &cyclic(2)),
        direct_product(&direct_product(&cyclic(2), &cyclic(2)), &cyclic(2)).rename("Z2^3"),
        dihedral(4),
        quaternion8(),
        cyclic(9),
        direct_product(&cyclic(3), &cyclic(3)),
        cyclic(10),
        dihedral(5),
        cyclic(11),
        cyclic(12),
        direct_product(&cyclic(6), &cyclic(2)),
        alternating4(),
        dihedral(6),
        dicyclic(3),
    ]
}
