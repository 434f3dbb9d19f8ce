//! Permutations of `0..degree` and finite permutation groups.
//!
//! Two closure strategies live here: [`PermGroup::closure`] materialises every
//! element by breadth-first multiplication (fine for the inner automorphism
//! groups of small quandles), while [`StabChain`] is a Schreier–Sims
//! stabilizer chain that knows the group order without listing it and can
//! stream the elements one coset representative product at a time.

use std::collections::{HashSet, VecDeque};

use num_integer::Integer;

use crate::error::{Error, Result};

/// A permutation of `0..len`, stored as its image vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    /// Builds a permutation from its image vector, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= seen.len() || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Perm(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self.then(other)` maps `x` to `other(self(x))`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn fixed_points(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i as u32 == x)
            .count()
    }

    /// Cycle lengths in non-increasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut lens = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .into_iter()
            .fold(1u64, |acc, len| acc.lcm(&(len as u64)))
    }
}

/// A permutation group given by generators, optionally with its full element list.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
}

impl PermGroup {
    /// Breadth-first closure of `generators` under composition. The identity is
    /// always included; the search fails once more than `cap` elements are found.
    pub fn closure(degree: usize, generators: Vec<Perm>, cap: u64) -> Result<Self> {
        debug_assert!(generators.iter().all(|g| g.degree() == degree));
        let id = Perm::identity(degree);
        let mut seen: HashSet<Perm> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(g) = queue.pop_front() {
            for s in &generators {
                let h = g.then(s);
                if !seen.contains(&h) {
                    if seen.len() as u64 >= cap {
                        return Err(Error::GroupTooLarge(cap));
                    }
                    seen.insert(h.clone());
                    queue.push_back(h);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_iter().collect();
        elements.sort();
        Ok(PermGroup {
            degree,
            generators,
            elements,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// All elements, sorted lexicographically by image vector.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Orbits of the group on `0..degree`, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits(self.degree, &self.generators)
    }
}

/// Orbits of the group generated by `generators` on `0..degree`.
pub fn orbits(degree: usize, generators: &[Perm]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut orbit = vec![start];
        label[start] = id;
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for g in generators {
                let y = g.apply(x);
                if label[y] == usize::MAX {
                    label[y] = id;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

struct Level {
    base: usize,
    generators: Vec<Perm>,
    orbit: Vec<usize>,
    /// `transversal[k]` maps `base` to `orbit[k]`.
    transversal: Vec<Perm>,
    inverse: Vec<Perm>,
    position: Vec<u32>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut position = vec![u32::MAX; degree];
        position[base] = 0;
        Level {
            base,
            generators: Vec::new(),
            orbit: vec![base],
            transversal: vec![Perm::identity(degree)],
            inverse: vec![Perm::identity(degree)],
            position,
        }
    }

    fn extend_orbit(&mut self) {
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i];
            for g in &self.generators {
                let y = g.apply(x);
                if self.position[y] == u32::MAX {
                    self.position[y] = self.orbit.len() as u32;
                    self.orbit.push(y);
                    let rep = self.transversal[i].then(g);
                    self.inverse.push(rep.inverse());
                    self.transversal.push(rep);
                }
            }
            i += 1;
        }
    }
}

/// Deterministic Schreier–Sims stabilizer chain.
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
    cap: u128,
    exceeded: bool,
}

impl StabChain {
    pub fn new(degree: usize, generators: &[Perm]) -> Self {
        Self::build(degree, generators, u128::MAX)
    }

    /// Like [`Self::new`], but gives up with `None` as soon as the group is
    /// known to have more than `cap` elements.
    pub fn with_cap(degree: usize, generators: &[Perm], cap: u128) -> Option<Self> {
        let chain = Self::build(degree, generators, cap);
        (!chain.exceeded).then_some(chain)
    }

    fn build(degree: usize, generators: &[Perm], cap: u128) -> Self {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
            cap,
            exceeded: false,
        };
        for g in generators {
            if !g.is_identity() && !chain.exceeded {
                chain.add_generator(0, g.clone());
            }
        }
        chain
    }

    // orbits only grow, so this is a lower bound on the final order
    fn partial_order(&self) -> u128 {
        self.levels
            .iter()
            .fold(1u128, |acc, l| acc.saturating_mul(l.orbit.len() as u128))
    }

    /// Residue of `g` after stripping through levels `from..`, and the level where it stopped.
    fn sift(&self, from: usize, g: &Perm) -> (Perm, usize) {
        let mut h = g.clone();
        for (depth, level) in self.levels.iter().enumerate().skip(from) {
            let b = h.apply(level.base);
            let pos = level.position[b];
            if pos == u32::MAX {
                return (h, depth);
            }
            h = h.then(&level.inverse[pos as usize]);
        }
        (h, self.levels.len())
    }

    fn add_generator(&mut self, depth: usize, g: Perm) {
        if depth == self.levels.len() {
            let base = (0..self.degree)
                .find(|&x| g.apply(x) != x)
                .expect("identity is never added");
            self.levels.push(Level::new(base, self.degree));
        }
        self.levels[depth].generators.push(g);
        self.levels[depth].extend_orbit();
        if self.partial_order() > self.cap {
            self.exceeded = true;
            return;
        }
        // Schreier generators of every (orbit point, generator) pair must sift
        // into the next level; recheck until nothing new is added.
        loop {
            let mut residue = None;
            let level = &self.levels[depth];
            'search: for u in &level.transversal {
                for s in &level.generators {
                    let us = u.then(s);
                    let target = level.position[us.apply(level.base)] as usize;
                    let schreier = us.then(&level.inverse[target]);
                    if schreier.is_identity() {
                        continue;
                    }
                    let (h, _) = self.sift(depth + 1, &schreier);
                    if !h.is_identity() {
                        residue = Some(h);
                        break 'search;
                    }
                }
            }
            match residue {
                Some(h) => self.add_generator(depth + 1, h),
                None => break,
            }
            if self.exceeded {
                return;
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.partial_order()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (h, _) = self.sift(0, g);
        h.is_identity()
    }

    /// Visits every group element exactly once, as `u_k ⋯ u_1` products of
    /// transversal elements (deepest level applied first).
    pub fn for_each_element<F: FnMut(&Perm)>(&self, mut f: F) {
        let id = Perm::identity(self.degree);
        self.walk(self.levels.len(), &id, &mut f);
    }

    fn walk<F: FnMut(&Perm)>(&self, depth: usize, acc: &Perm, f: &mut F) {
        if depth == 0 {
            f(acc);
            return;
        }
        for u in &self.levels[depth - 1].transversal {
            self.walk(depth - 1, &acc.then(u), f);
        }
    }

    /// Transversal of the top level, for splitting enumeration across workers.
    pub(crate) fn top_transversal(&self) -> &[Perm] {
        self.levels
            .first()
            .map(|l| l.transversal.as_slice())
            .unwrap_or(&[])
    }

    /// Like [`Self::for_each_element`] but restricted to the levels below the top,
    /// each result premultiplied by `prefix`.
    pub(crate) fn for_each_below_top<F: FnMut(&Perm)>(&self, prefix: &Perm, mut f: F) {
        if self.levels.is_empty() {
            f(prefix);
            return;
        }
        // elements are u_k ⋯ u_2 then u_1 of the top level last
        self.walk_below(
            self.levels.len(),
            1,
            &Perm::identity(self.degree),
            prefix,
            &mut f,
        );
    }

    fn walk_below<F: FnMut(&Perm)>(
        &self,
        depth: usize,
        stop: usize,
        acc: &Perm,
        last: &Perm,
        f: &mut F,
    ) {
        if depth == stop {
            f(&acc.then(last));
            return;
        }
        for u in &self.levels[depth - 1].transversal {
            self.walk_below(depth - 1, stop, &acc.then(u), last, f);
        }
    }
}
