use std::collections::HashMap;

use quandle_hilbert::braid::DEFAULT_STATE_BUDGET;
use quandle_hilbert::catalog::{self, fit_series, CatalogEntry};
use quandle_hilbert::invariants::{dim_q, mask_elements, pi0, subquandles};
use quandle_hilbert::polyfit::{IntValuedPoly, RationalGenFunc};
use quandle_hilbert::quandle::{dihedral, disjoint_union, product, Quandle};
use quandle_hilbert::series::{
    dominant_decomposition, graded_cardinality, graded_series, incremental_series, orbit_labels,
};

fn entries() -> Vec<CatalogEntry> {
    catalog::all()
}

#[test]
fn components_multiply() {
    let all = entries();
    for a in &all {
        for b in &all {
            let p = product(&a.quandle, &b.quandle);
            assert_eq!(
                pi0(&p).len(),
                pi0(&a.quandle).len() * pi0(&b.quandle).len(),
                "{} x {}",
                a.name,
                b.name
            );
        }
    }
}

#[test]
fn dimensions_multiply_and_add() {
    let all = entries();
    for a in &all {
        for b in &all {
            let (q, r) = (&a.quandle, &b.quandle);
            if q.size() * r.size() <= 16 {
                assert_eq!(
                    dim_q(&product(q, r)).unwrap(),
                    dim_q(q).unwrap() * dim_q(r).unwrap(),
                    "{} x {}",
                    a.name,
                    b.name
                );
            }
            if q.size() + r.size() <= 16 {
                assert_eq!(
                    dim_q(&disjoint_union(q, r)).unwrap(),
                    dim_q(q).unwrap() + dim_q(r).unwrap()
                );
            }
        }
    }
}

#[test]
fn dihedral_subquandles_are_cosets() {
    for l in 1..=9usize {
        let mut cosets: Vec<u64> = vec![0];
        for d in (1..=l).filter(|d| l % d == 0) {
            // subgroup generated by d, shifted by each residue
            for shift in 0..d {
                let mask = (0..l / d).fold(0u64, |m, k| m | 1 << ((shift + k * d) % l));
                cosets.push(mask);
            }
        }
        cosets.sort_unstable();
        cosets.dedup();
        assert_eq!(subquandles(&dihedral(l)).unwrap().subsets(), cosets, "D{l}");
    }
}

#[test]
fn decomposition_identity() {
    for e in entries() {
        let dec = dominant_decomposition(&e.quandle, 8, DEFAULT_STATE_BUDGET).unwrap();
        let total = graded_series(&e.quandle, 8, DEFAULT_STATE_BUDGET).unwrap();
        for n in 0..=8 {
            let sum: u64 = dec.dominant.iter().map(|s| s.values[n]).sum();
            assert_eq!(sum, total.values[n], "{} n={n}", e.name);
        }
    }
}

#[test]
fn sub_quandle_orbits_inject() {
    for e in entries() {
        let q = &e.quandle;
        let lattice = subquandles(q).unwrap();
        for n in 1..=4 {
            if (q.size() as u64).pow(n as u32) > 100_000 {
                continue;
            }
            let big = orbit_labels(q, n, DEFAULT_STATE_BUDGET).unwrap();
            for &mask in lattice.subsets() {
                let elems = mask_elements(mask);
                let (sub, embed) = q.restrict(&elems).unwrap();
                let small = orbit_labels(&sub, n, DEFAULT_STATE_BUDGET).unwrap();
                // each R-orbit lands in one Q-orbit, and distinct R-orbits in distinct ones
                let mut image: HashMap<u32, u32> = HashMap::new();
                let mut preimage: HashMap<u32, u32> = HashMap::new();
                for (t, &label) in small.iter().enumerate() {
                    let coords = unpack(t as u64, sub.size(), n);
                    let packed = pack(coords.iter().map(|&c| embed[c]), q.size());
                    let target = big[packed as usize];
                    assert_eq!(*image.entry(label).or_insert(target), target);
                    assert_eq!(*preimage.entry(target).or_insert(label), label);
                }
            }
        }
    }
}

fn unpack(mut t: u64, base: usize, n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let d = (t % base as u64) as usize;
            t /= base as u64;
            d
        })
        .collect()
}

fn pack(coords: impl Iterator<Item = usize>, base: usize) -> u64 {
    let mut place = 1u64;
    let mut t = 0;
    for c in coords {
        t += c as u64 * place;
        place *= base as u64;
    }
    t
}

#[test]
fn incremental_agrees_with_union_find() {
    for e in entries() {
        let n = if e.quandle.size() <= 3 { 8 } else { 7 };
        assert_eq!(
            incremental_series(&e.quandle, n, DEFAULT_STATE_BUDGET)
                .unwrap()
                .values,
            graded_series(&e.quandle, n, DEFAULT_STATE_BUDGET)
                .unwrap()
                .values,
            "{}",
            e.name
        );
    }
}

#[test]
fn coprime_dihedral_split() {
    let (d2, d3, d6) = (dihedral(2), dihedral(3), dihedral(6));
    for n in 0..=6 {
        let a = |q: &Quandle| graded_cardinality(q, n, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(a(&d6), a(&d2) * a(&d3), "n={n}");
    }
}

/// `(r+1)p^r` for odd `p`, `2^r + 2^{r−1}r(n−1)` for `p = 2`.
fn dihedral_total(p: u64, r: u32, n: u64) -> u64 {
    if p == 2 {
        2u64.pow(r) + 2u64.pow(r - 1) * r as u64 * (n - 1)
    } else {
        (r as u64 + 1) * p.pow(r)
    }
}

#[test]
fn dihedral_closed_forms() {
    for (p, r) in [(3u64, 1u32), (2, 2), (5, 1), (2, 3), (3, 2)] {
        let l = p.pow(r) as usize;
        for n in 3..=6 {
            assert_eq!(
                graded_cardinality(&dihedral(l), n, DEFAULT_STATE_BUDGET).unwrap(),
                dihedral_total(p, r, n as u64),
                "D{l} n={n}"
            );
        }
    }
}

#[test]
fn dihedral_generating_functions() {
    // odd p: (1−t)^{-1}(1 + (p^r−1)t + r(p^r−p^{r−1})t² + rp^{r−1}t³)
    for (p, r) in [(3i64, 1u32), (5, 1), (7, 1), (3, 2)] {
        let l = p.pow(r);
        let q = dihedral(l as usize);
        let f = fit_series(graded_series(&q, 6, DEFAULT_STATE_BUDGET).unwrap(), 0).unwrap();
        let pr1 = p.pow(r - 1);
        let expect =
            RationalGenFunc::from_i64(&[1, l - 1, r as i64 * (l - pr1), r as i64 * pr1], 1);
        assert_eq!(f.eta, expect, "D{l}");
        assert_eq!(f.poly, IntValuedPoly::from_i64(&[(r as i64 + 1) * l]));
    }
    // p = 2: (1−t)^{-2}(1 + (2^r−2)t + (r2^{r−1}−2^r+1)t²)
    for r in 1..=3u32 {
        let l = 2i64.pow(r);
        let q = dihedral(l as usize);
        let f = fit_series(graded_series(&q, 6, DEFAULT_STATE_BUDGET).unwrap(), 1).unwrap();
        let h = 2i64.pow(r - 1);
        let expect = RationalGenFunc::from_i64(&[1, l - 2, r as i64 * h - l + 1], 2);
        assert_eq!(f.eta, expect, "D{l}");
        assert_eq!(
            f.poly,
            IntValuedPoly::from_monomial(&[l - r as i64 * h, r as i64 * h], 1).unwrap()
        );
    }
}

#[test]
fn dominant_dihedral_counts() {
    // D_{p^r} has p^r dominant classes for odd p, 2^{r−1}(n−1) for p = 2
    for (l, odd) in [(3usize, true), (5, true), (9, true), (4, false), (8, false)] {
        let dec = dominant_decomposition(&dihedral(l), 5, DEFAULT_STATE_BUDGET).unwrap();
        for n in 3..=5u64 {
            let v = dec.full().values[n as usize];
            let expect = if odd {
                l as u64
            } else {
                l as u64 / 2 * (n - 1)
            };
            assert_eq!(v, expect, "D{l} n={n}");
        }
    }
}
