//! Structural invariants of a finite quandle: the inner automorphism group,
//! connected components, the exponent, the sub-quandle lattice and the
//! dimension.

use std::collections::HashSet;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::perm::PermGroup;
use crate::quandle::Quandle;

/// Largest quandle for which the sub-quandle lattice is enumerated.
pub const LATTICE_LIMIT: usize = 16;

/// Default element cap for materialising `Inn(Q)`.
pub const DEFAULT_GROUP_CAP: u64 = 1_000_000;

/// The group generated by the rows `φ_x`.
pub fn inn_group(q: &Quandle, cap: u64) -> Result<PermGroup> {
    let gens = (0..q.size()).map(|x| q.inner(x)).collect();
    PermGroup::closure(q.size(), gens, cap)
}

/// Connected components: classes of the equivalence generated by `x ▷ y ~ y`.
/// Each component is sorted; components are ordered by least element.
pub fn pi0(q: &Quandle) -> Vec<Vec<usize>> {
    let n = q.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for x in 0..n {
        for y in 0..n {
            let a = find(&mut parent, y);
            let b = find(&mut parent, q.op(x, y));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[slot[r]].push(x);
    }
    comps
}

/// Least `N > 0` with `φ_x^N = id` for every `x`.
pub fn exp_q(q: &Quandle) -> Result<u64> {
    if q.is_empty() {
        return Err(Error::EmptyQuandle);
    }
    Ok((0..q.size())
        .map(|x| q.inner(x).order())
        .fold(1, |acc, o| acc.lcm(&o)))
}

/// Smallest closed subset containing `mask`.
pub fn close(q: &Quandle, mask: u64) -> u64 {
    let n = q.size();
    debug_assert!(n <= 64);
    let mut closed = mask;
    loop {
        let mut next = closed;
        for x in bits(closed) {
            let row = q.row(x);
            for y in bits(closed) {
                next |= 1 << row[y];
            }
        }
        if next == closed {
            return closed;
        }
        closed = next;
    }
}

pub fn is_closed(q: &Quandle, mask: u64) -> bool {
    close(q, mask) == mask
}

/// Indices of set bits, ascending.
pub fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn mask_elements(mask: u64) -> Vec<usize> {
    bits(mask).collect()
}

/// All closed subsets of a quandle, as bitmasks in increasing numeric order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubquandleLattice {
    size: usize,
    subsets: Vec<u64>,
}

impl SubquandleLattice {
    pub fn subsets(&self) -> &[u64] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn full(&self) -> u64 {
        full_mask(self.size)
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.subsets.binary_search(&mask).is_ok()
    }

    /// Closed subsets strictly contained in `mask`.
    pub fn proper_below(&self, mask: u64) -> impl Iterator<Item = u64> + '_ {
        self.subsets
            .iter()
            .copied()
            .filter(move |&s| s != mask && s & !mask == 0)
    }
}

pub fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Enumerates the sub-quandle lattice by worklist closure: start from the
/// empty set, and extend each closed set found by one outside element at a
/// time, re-closing and deduplicating.
pub fn subquandles(q: &Quandle) -> Result<SubquandleLattice> {
    let n = q.size();
    if n > LATTICE_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: LATTICE_LIMIT,
        });
    }
    let full = full_mask(n);
    let mut seen: HashSet<u64> = HashSet::new();
    let mut work = vec![0u64];
    seen.insert(0);
    while let Some(s) = work.pop() {
        for e in bits(full & !s) {
            let t = close(q, s | (1 << e));
            if seen.insert(t) {
                work.push(t);
            }
        }
    }
    let mut subsets: Vec<u64> = seen.into_iter().collect();
    subsets.sort_unstable();
    Ok(SubquandleLattice { size: n, subsets })
}

/// The sub-quandle on a closed mask, renumbered.
pub fn subquandle(q: &Quandle, mask: u64) -> Quandle {
    q.restrict(&mask_elements(mask)).expect("mask is closed").0
}

/// `max |π₀(R)|` over sub-quandles `R` (the empty one contributing 0).
pub fn dim_q(q: &Quandle) -> Result<usize> {
    let lattice = subquandles(q)?;
    Ok(lattice
        .subsets()
        .iter()
        .map(|&m| pi0(&subquandle(q, m)).len())
        .max()
        .unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::{dihedral, trivial, twisted_pointed};

    fn j() -> Quandle {
        twisted_pointed(&trivial(2), &[1, 0]).unwrap()
    }

    fn c3() -> Quandle {
        twisted_pointed(&trivial(3), &[1, 2, 0]).unwrap()
    }

    /// 2^|Q| scan, independent of the worklist.
    fn closed_subsets_by_scan(q: &Quandle) -> Vec<u64> {
        let n = q.size();
        (0..1u64 << n)
            .filter(|&m| {
                mask_elements(m)
                    .iter()
                    .all(|&x| mask_elements(m).iter().all(|&y| m >> q.op(x, y) & 1 == 1))
            })
            .collect()
    }

    #[test]
    fn inner_group_orders() {
        assert_eq!(
            inn_group(&trivial(3), DEFAULT_GROUP_CAP).unwrap().order(),
            1
        );
        // three reflections of Z/3 generate all of S3
        assert_eq!(
            inn_group(&dihedral(3), DEFAULT_GROUP_CAP).unwrap().order(),
            6
        );
        let g = inn_group(&j(), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.order(), 2);
        assert!(g.contains(&j().inner(2)));
        assert_eq!(inn_group(&trivial(0), 10).unwrap().order(), 1);
        assert_eq!(
            inn_group(&dihedral(5), 3).unwrap_err(),
            Error::GroupTooLarge(3)
        );
    }

    #[test]
    fn components() {
        assert_eq!(pi0(&trivial(3)), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(pi0(&dihedral(3)), vec![vec![0, 1, 2]]);
        assert_eq!(pi0(&j()), vec![vec![0, 1], vec![2]]);
        assert!(pi0(&trivial(0)).is_empty());
        // D4 splits into even and odd residues
        assert_eq!(pi0(&dihedral(4)), vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn components_match_group_orbits() {
        for q in [dihedral(4), dihedral(6), j(), c3(), trivial(2)] {
            let g = inn_group(&q, DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(g.orbits(), pi0(&q));
        }
    }

    #[test]
    fn exponents() {
        assert_eq!(exp_q(&trivial(4)).unwrap(), 1);
        assert_eq!(exp_q(&dihedral(3)).unwrap(), 2);
        assert_eq!(exp_q(&c3()).unwrap(), 3);
        assert_eq!(exp_q(&trivial(0)).unwrap_err(), Error::EmptyQuandle);
    }

    #[test]
    fn lattices() {
        let d3 = subquandles(&dihedral(3)).unwrap();
        assert_eq!(d3.subsets(), &[0b000, 0b001, 0b010, 0b100, 0b111]);
        let jl = subquandles(&j()).unwrap();
        assert_eq!(jl.subsets(), &[0b000, 0b001, 0b010, 0b011, 0b100, 0b111]);
        assert_eq!(subquandles(&trivial(2)).unwrap().len(), 4);
        assert_eq!(subquandles(&trivial(0)).unwrap().subsets(), &[0]);
        assert!(matches!(
            subquandles(&trivial(17)),
            Err(Error::TooLarge { size: 17, .. })
        ));
    }

    #[test]
    fn lattice_matches_scan() {
        for q in [dihedral(6), dihedral(9), j(), c3(), trivial(4), dihedral(8)] {
            assert_eq!(
                subquandles(&q).unwrap().subsets(),
                closed_subsets_by_scan(&q)
            );
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(dim_q(&trivial(3)).unwrap(), 3);
        assert_eq!(dim_q(&trivial(0)).unwrap(), 0);
        assert_eq!(dim_q(&dihedral(3)).unwrap(), 1);
        assert_eq!(dim_q(&j()).unwrap(), 2);
        assert_eq!(dim_q(&dihedral(4)).unwrap(), 2);
    }

    #[test]
    fn proper_below_excludes_self() {
        let l = subquandles(&j()).unwrap();
        let below: Vec<u64> = l.proper_below(0b011).collect();
        assert_eq!(below, vec![0b000, 0b001, 0b010]);
    }
}
