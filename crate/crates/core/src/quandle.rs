//! Finite quandles as dense operation tables.
//!
//! Elements are `0..size`. `table[x * size + y]` holds `x ▷ y`, with `x` the
//! acting element, so row `x` is the inner map `φ_x`. The inverse rows are
//! stored alongside so that `φ_x⁻¹` is a lookup as well.

use serde::{Deserialize, Serialize};

use crate::error::{Axiom, Error, Result};
use crate::perm::Perm;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Quandle {
    size: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

impl Quandle {
    /// Validates a square table given row by row (`rows[x][y] = x ▷ y`).
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let size = rows.len();
        let mut flat = Vec::with_capacity(size * size);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::MalformedTable(format!(
                    "row {x} has {} entries, expected {size}",
                    row.len()
                )));
            }
            for (y, &v) in row.iter().enumerate() {
                if v >= size {
                    return Err(Error::MalformedTable(format!(
                        "entry ({x},{y}) = {v} is out of range"
                    )));
                }
                flat.push(v as u32);
            }
        }
        Self::from_flat(size, flat)
    }

    /// Validates a row-major table of `size * size` entries.
    pub fn from_flat(size: usize, table: Vec<u32>) -> Result<Self> {
        if table.len() != size * size {
            return Err(Error::MalformedTable(format!(
                "expected {} entries, found {}",
                size * size,
                table.len()
            )));
        }
        if let Some(v) = table.iter().find(|&&v| v as usize >= size) {
            return Err(Error::MalformedTable(format!("entry {v} is out of range")));
        }
        let at = |x: usize, y: usize| table[x * size + y] as usize;

        for x in 0..size {
            if at(x, x) != x {
                return Err(Error::AxiomViolation {
                    axiom: Axiom::Q1,
                    witness: vec![x],
                });
            }
        }
        let mut inverse = vec![u32::MAX; size * size];
        for x in 0..size {
            for y in 0..size {
                let z = at(x, y);
                let slot = &mut inverse[x * size + z];
                if *slot != u32::MAX {
                    return Err(Error::AxiomViolation {
                        axiom: Axiom::Q2,
                        witness: vec![x, y],
                    });
                }
                *slot = y as u32;
            }
        }
        for x in 0..size {
            for y in 0..size {
                let xy = at(x, y);
                for z in 0..size {
                    if at(x, at(y, z)) != at(xy, at(x, z)) {
                        return Err(Error::AxiomViolation {
                            axiom: Axiom::Q3,
                            witness: vec![x, y, z],
                        });
                    }
                }
            }
        }
        Ok(Quandle {
            size,
            table,
            inverse,
        })
    }

    /// Builds from a table already known to satisfy the axioms.
    fn trusted(size: usize, table: Vec<u32>) -> Self {
        debug_assert!(Self::from_flat(size, table.clone()).is_ok());
        let mut inverse = vec![0u32; size * size];
        for x in 0..size {
            for y in 0..size {
                let z = table[x * size + y] as usize;
                inverse[x * size + z] = y as u32;
            }
        }
        Quandle {
            size,
            table,
            inverse,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// `x ▷ y`.
    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y] as usize
    }

    /// `φ_x⁻¹(z)`, the unique `y` with `x ▷ y = z`.
    #[inline]
    pub fn op_inv(&self, x: usize, z: usize) -> usize {
        self.inverse[x * self.size + z] as usize
    }

    /// Row `x` of the table, i.e. the images of `φ_x`.
    pub fn row(&self, x: usize) -> &[u32] {
        &self.table[x * self.size..(x + 1) * self.size]
    }

    pub fn flat_table(&self) -> &[u32] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.size)
            .map(|x| self.row(x).iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// `φ_x` as a permutation.
    pub fn inner(&self, x: usize) -> Perm {
        Perm::from_images_unchecked(self.row(x).to_vec())
    }

    /// The restriction to a closed subset, with elements renumbered in
    /// increasing order. Returns the quandle and the embedding into `self`.
    pub fn restrict(&self, elements: &[usize]) -> Result<(Quandle, Vec<usize>)> {
        let mut index = vec![usize::MAX; self.size];
        for (i, &e) in elements.iter().enumerate() {
            index[e] = i;
        }
        let k = elements.len();
        let mut table = Vec::with_capacity(k * k);
        for &x in elements {
            for &y in elements {
                let z = index[self.op(x, y)];
                if z == usize::MAX {
                    return Err(Error::MalformedTable(format!(
                        "subset is not closed: {x} ▷ {y} leaves it"
                    )));
                }
                table.push(z as u32);
            }
        }
        Ok((Quandle::trusted(k, table), elements.to_vec()))
    }

    /// True when `map` is a quandle morphism `self → target`.
    pub fn is_morphism_to(&self, target: &Quandle, map: &[usize]) -> bool {
        map.len() == self.size
            && map.iter().all(|&m| m < target.size)
            && (0..self.size)
                .all(|x| (0..self.size).all(|y| map[self.op(x, y)] == target.op(map[x], map[y])))
    }

    /// The same quandle with elements relabelled through the bijection `perm`
    /// (element `x` becomes `perm[x]`).
    pub fn relabel(&self, perm: &[usize]) -> Quandle {
        let n = self.size;
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                table[perm[x] * n + perm[y]] = perm[self.op(x, y)] as u32;
            }
        }
        Quandle::trusted(n, table)
    }
}

/// A morphism between two quandles, checked on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuandleMorphism {
    source: Quandle,
    target: Quandle,
    map: Vec<usize>,
}

impl QuandleMorphism {
    pub fn new(source: Quandle, target: Quandle, map: Vec<usize>) -> Option<Self> {
        source
            .is_morphism_to(&target, &map)
            .then_some(QuandleMorphism {
                source,
                target,
                map,
            })
    }

    pub fn source(&self) -> &Quandle {
        &self.source
    }

    pub fn target(&self) -> &Quandle {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size == self.target.size && {
            let mut seen = vec![false; self.target.size];
            self.map
                .iter()
                .all(|&m| !std::mem::replace(&mut seen[m], true))
        }
    }

    /// Bitmask of the image, which is always a sub-quandle of the target.
    pub fn image_mask(&self) -> u64 {
        self.map.iter().fold(0u64, |acc, &m| acc | (1 << m))
    }
}

/// Validates a square table given row by row.
pub fn validate(rows: &[Vec<usize>]) -> Result<Quandle> {
    Quandle::from_rows(rows)
}

/// `T_α`: `x ▷ y = y`.
pub fn trivial(alpha: usize) -> Quandle {
    let table = (0..alpha).flat_map(|_| 0..alpha as u32).collect::<Vec<_>>();
    Quandle::trusted(alpha, table)
}

/// `D_ℓ`: `x ▷ y = 2x − y mod ℓ`.
pub fn dihedral(l: usize) -> Quandle {
    assert!(l >= 1, "dihedral quandle needs ℓ ≥ 1");
    let mut table = Vec::with_capacity(l * l);
    for x in 0..l {
        for y in 0..l {
            table.push(((2 * x + l - y) % l) as u32);
        }
    }
    Quandle::trusted(l, table)
}

/// Conjugation quandle of a finite group given by its Cayley table
/// (`cayley[g][h] = g·h`): `g ▷ h = g h g⁻¹`.
pub fn conj(cayley: &[Vec<usize>]) -> Result<Quandle> {
    let n = cayley.len();
    for (g, row) in cayley.iter().enumerate() {
        if row.len() != n {
            return Err(Error::MalformedTable(format!("row {g} has wrong length")));
        }
        if let Some(h) = row.iter().position(|&v| v >= n) {
            return Err(Error::NotAGroup {
                axiom: "closure",
                witness: vec![g, h],
            });
        }
    }
    if n == 0 {
        return Err(Error::NotAGroup {
            axiom: "identity",
            witness: vec![],
        });
    }
    let mul = |a: usize, b: usize| cayley[a][b];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    return Err(Error::NotAGroup {
                        axiom: "associativity",
                        witness: vec![a, b, c],
                    });
                }
            }
        }
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|g| mul(e, g) == g && mul(g, e) == g))
        .ok_or(Error::NotAGroup {
            axiom: "identity",
            witness: vec![],
        })?;
    let mut inv = vec![0; n];
    for g in 0..n {
        inv[g] = (0..n)
            .find(|&h| mul(g, h) == e && mul(h, g) == e)
            .ok_or(Error::NotAGroup {
                axiom: "inverse",
                witness: vec![g],
            })?;
    }
    let mut table = Vec::with_capacity(n * n);
    for g in 0..n {
        for h in 0..n {
            table.push(mul(mul(g, h), inv[g]) as u32);
        }
    }
    Ok(Quandle::trusted(n, table))
}

/// Cayley table of `Z/n`.
pub fn cyclic_group(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect()
}

/// Cayley table of the symmetric group on `k` letters, elements in
/// lexicographic order of their image vectors (element 0 is the identity).
pub fn symmetric_group(k: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..k).collect();
    let mut out = vec![p.clone()];
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    let index = |p: &[usize]| out.iter().position(|q| q == p).unwrap();
    out.iter()
        .map(|a| {
            out.iter()
                .map(|b| {
                    // (a·b)(i) = a(b(i))
                    let c: Vec<usize> = (0..k).map(|i| a[b[i]]).collect();
                    index(&c)
                })
                .collect()
        })
        .collect()
}

pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `Q × R` with `(x, y)` encoded as `x·|R| + y`.
pub fn product(q: &Quandle, r: &Quandle) -> Quandle {
    let (a, b) = (q.size, r.size);
    let n = a * b;
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        let (x1, x2) = (x / b, x % b);
        for y in 0..n {
            let (y1, y2) = (y / b, y % b);
            table.push((q.op(x1, y1) * b + r.op(x2, y2)) as u32);
        }
    }
    Quandle::trusted(n, table)
}

/// `Q ⊔ R`: each side acts on itself and trivially on the other.
/// `R`'s elements are shifted by `|Q|`.
pub fn disjoint_union(q: &Quandle, r: &Quandle) -> Quandle {
    let (a, b) = (q.size, r.size);
    let n = a + b;
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let v = match (x < a, y < a) {
                (true, true) => q.op(x, y),
                (false, false) => a + r.op(x - a, y - a),
                _ => y,
            };
            table.push(v as u32);
        }
    }
    Quandle::trusted(n, table)
}

/// `Q ⊔_ψ *`: a new element `*` at index `|Q|` acting on `Q` through `ψ`
/// and fixed by everything.
///
/// `ψ` must be an automorphism of `Q` with `φ_{ψ(x)} = φ_x` for every `x`.
pub fn twisted_pointed(q: &Quandle, psi: &[usize]) -> Result<Quandle> {
    let n = q.size;
    if psi.len() != n || Perm::from_images(psi.iter().map(|&v| v as u32).collect()).is_none() {
        return Err(Error::NotAutomorphism);
    }
    if !q.is_morphism_to(q, psi) {
        return Err(Error::NotAutomorphism);
    }
    if let Some(x) = (0..n).find(|&x| q.row(psi[x]) != q.row(x)) {
        return Err(Error::TwistConditionViolated { x });
    }
    let m = n + 1;
    let mut table = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            let v = if y == n {
                n
            } else if x == n {
                psi[y]
            } else {
                q.op(x, y)
            };
            table.push(v as u32);
        }
    }
    Ok(Quandle::trusted(m, table))
}

/// Isomorphism search. Returns `m` with `m[x ▷ y] = m[x] ▷ m[y]` when one exists.
///
/// Candidates are pruned by a per-element profile (cycle type of `φ_x`, the
/// number of elements acting trivially on `x`, the size of `x`'s component),
/// and every assignment is propagated through the table before branching.
pub fn find_isomorphism(q: &Quandle, r: &Quandle) -> Option<Vec<usize>> {
    if q.size != r.size {
        return None;
    }
    let n = q.size;
    let pq = profiles(q);
    let pr = profiles(r);
    {
        let mut a = pq.clone();
        let mut b = pr.clone();
        a.sort();
        b.sort();
        if a != b {
            return None;
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(q, r, &pq, &pr, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

type Profile = (Vec<usize>, usize, usize);

fn profiles(q: &Quandle) -> Vec<Profile> {
    let comps = crate::invariants::pi0(q);
    let mut comp_size = vec![0; q.size];
    for c in &comps {
        for &x in c {
            comp_size[x] = c.len();
        }
    }
    (0..q.size)
        .map(|x| {
            let stabilisers = (0..q.size).filter(|&y| q.op(y, x) == x).count();
            (q.inner(x).cycle_type(), stabilisers, comp_size[x])
        })
        .collect()
}

/// Assigns `x ↦ y` and everything it forces. Returns the list of newly
/// assigned elements, or `None` on contradiction (after undoing).
fn assign(
    q: &Quandle,
    r: &Quandle,
    pq: &[Profile],
    pr: &[Profile],
    map: &mut [usize],
    used: &mut [bool],
    x: usize,
    y: usize,
) -> Option<Vec<usize>> {
    let n = q.size;
    let mut assigned = Vec::new();
    let mut pending = vec![(x, y)];
    let mut ok = true;
    'outer: while let Some((a, b)) = pending.pop() {
        if map[a] != usize::MAX {
            if map[a] != b {
                ok = false;
                break;
            }
            continue;
        }
        if used[b] || pq[a] != pr[b] {
            ok = false;
            break;
        }
        map[a] = b;
        used[b] = true;
        assigned.push(a);
        for c in 0..n {
            if map[c] == usize::MAX {
                continue;
            }
            for (u, v) in [(a, c), (c, a)] {
                let uv = q.op(u, v);
                let img = r.op(map[u], map[v]);
                if map[uv] == usize::MAX {
                    pending.push((uv, img));
                } else if map[uv] != img {
                    ok = false;
                    break 'outer;
                }
            }
        }
    }
    if ok {
        Some(assigned)
    } else {
        for a in assigned {
            used[map[a]] = false;
            map[a] = usize::MAX;
        }
        None
    }
}

fn search(
    q: &Quandle,
    r: &Quandle,
    pq: &[Profile],
    pr: &[Profile],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(x) = map.iter().position(|&m| m == usize::MAX) else {
        return true;
    };
    for y in 0..r.size {
        if used[y] || pq[x] != pr[y] {
            continue;
        }
        if let Some(assigned) = assign(q, r, pq, pr, map, used, x, y) {
            if search(q, r, pq, pr, map, used) {
                return true;
            }
            for a in assigned {
                used[map[a]] = false;
                map[a] = usize::MAX;
            }
        }
    }
    false
}

pub fn is_isomorphic(q: &Quandle, r: &Quandle) -> bool {
    find_isomorphism(q, r).is_some()
}

/// On-disk JSON form: `{"name": string?, "size": int, "table": [[int]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct QuandleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub size: usize,
    pub table: Vec<Vec<usize>>,
}

impl QuandleFile {
    pub fn new(name: Option<String>, q: &Quandle) -> Self {
        QuandleFile {
            name,
            size: q.size,
            table: q.rows(),
        }
    }

    /// Validates the table, including that `size` agrees with it.
    pub fn to_quandle(&self) -> Result<Quandle> {
        if self.table.len() != self.size {
            return Err(Error::MalformedTable(format!(
                "size is {} but the table has {} rows",
                self.size,
                self.table.len()
            )));
        }
        Quandle::from_rows(&self.table)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("quandle file serializes")
    }
}
