//! Braid words and the action of `B_n` on `Q^n`.
//!
//! `σ_i` sends `(…, x_i, x_{i+1}, …)` to `(…, x_i ▷ x_{i+1}, x_i, …)`.
//! Tuples are packed base `|Q|` with `x_1` in the least significant digit, so
//! every generator rewrites two adjacent digits via a precomputed pair table.
//! The number of `Q`-colorings of a braid closure is the number of tuples
//! the braid fixes.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::invariants;
use crate::quandle::Quandle;

/// Default limit on `|Q|^n` for anything that walks the tuple space.
pub const DEFAULT_STATE_BUDGET: u64 = 1 << 24;

/// A word in `σ_1^{±1}, …, σ_{n-1}^{±1}`; letter `k > 0` is `σ_k`, `k < 0` is `σ_{|k|}⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::IndexOutOfRange {
                index: 0,
                strands: 0,
            });
        }
        for &k in &letters {
            check_letter(k, strands)?;
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord::new(strands, Vec::new()).expect("strands ≥ 1")
    }

    /// Parses whitespace-separated signed generator indices, e.g. `"1 1 -2"`.
    pub fn parse(strands: usize, text: &str) -> Result<Self> {
        let letters = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i32>()
                    .map_err(|_| Error::Parse(format!("bad braid letter `{tok}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        BraidWord::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&k| -k).collect(),
        }
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        assert_eq!(self.strands, other.strands, "strand counts differ");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    /// `u · self · u⁻¹`.
    pub fn conjugate_by(&self, u: &BraidWord) -> BraidWord {
        u.concat(self).concat(&u.inverse())
    }

    /// Markov stabilisation: the same word in `B_{n+1}` followed by `σ_n^{±1}`.
    pub fn stabilize(&self, positive: bool) -> BraidWord {
        let n = self.strands as i32;
        let mut letters = self.letters.clone();
        if self.strands >= 1 {
            letters.push(if positive { n } else { -n });
        }
        BraidWord {
            strands: self.strands + 1,
            letters,
        }
    }

    /// The permutation of strand positions underlying the braid.
    pub fn underlying_permutation(&self) -> Vec<usize> {
        let mut p: Vec<usize> = (0..self.strands).collect();
        for &k in &self.letters {
            let i = k.unsigned_abs() as usize - 1;
            p.swap(i, i + 1);
        }
        p
    }

    /// Number of cycles of [`Self::underlying_permutation`], i.e. the number
    /// of components of the closure.
    pub fn closure_components(&self) -> usize {
        let p = self.underlying_permutation();
        let mut seen = vec![false; p.len()];
        let mut cycles = 0;
        for s in 0..p.len() {
            if !seen[s] {
                cycles += 1;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = p[x];
                }
            }
        }
        cycles
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|k| k.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// `"n: letters"`, e.g. `"2: 1 1 1"`.
    fn from_str(s: &str) -> Result<Self> {
        let (n, word) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse("expected `strands: letters`".into()))?;
        let n = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad strand count `{}`", n.trim())))?;
        BraidWord::parse(n, word)
    }
}

fn check_letter(k: i32, strands: usize) -> Result<()> {
    let i = k.unsigned_abs() as usize;
    if k == 0 || i >= strands {
        return Err(Error::IndexOutOfRange {
            index: k as i64,
            strands,
        });
    }
    Ok(())
}

/// A packed element of `Q^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple(pub u64);

impl Tuple {
    pub fn pack(coords: &[usize], base: usize) -> Tuple {
        Tuple(
            coords
                .iter()
                .rev()
                .fold(0u64, |acc, &x| acc * base as u64 + x as u64),
        )
    }

    pub fn unpack(self, base: usize, n: usize) -> Vec<usize> {
        let mut t = self.0;
        (0..n)
            .map(|_| {
                let d = (t % base as u64) as usize;
                t /= base as u64;
                d
            })
            .collect()
    }
}

/// `|Q|^n` as an exact count, failing if it exceeds `budget`.
pub fn state_count(q: usize, n: usize, budget: u64) -> Result<u64> {
    let states = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if states > budget as u128 {
        return Err(Error::BudgetExceeded { states, budget });
    }
    Ok(states as u64)
}

/// Precomputed `B_n` action on packed tuples of `Q^n`.
#[derive(Clone, Debug)]
pub struct BraidAction {
    base: u64,
    strands: usize,
    states: u64,
    place: Vec<u64>,
    /// `forward[x + q*y]` is the packed pair `(x ▷ y, x)`.
    forward: Vec<u32>,
    /// `backward[x + q*y]` is the packed pair `(y, φ_y⁻¹(x))`.
    backward: Vec<u32>,
}

impl BraidAction {
    pub fn new(q: &Quandle, strands: usize, budget: u64) -> Result<Self> {
        let states = state_count(q.size(), strands, budget)?;
        let b = q.size();
        let mut forward = vec![0u32; b * b];
        let mut backward = vec![0u32; b * b];
        for x in 0..b {
            for y in 0..b {
                forward[x + b * y] = (q.op(x, y) + b * x) as u32;
                backward[x + b * y] = (y + b * q.op_inv(y, x)) as u32;
            }
        }
        let place = (0..=strands as u32)
            .map(|i| (b as u64).saturating_pow(i))
            .collect();
        Ok(BraidAction {
            base: b as u64,
            strands,
            states,
            place,
            forward,
            backward,
        })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    /// `|Q|^n`.
    pub fn states(&self) -> u64 {
        self.states
    }

    /// Applies one letter; `letter` must already be in range.
    #[inline]
    pub fn step(&self, letter: i32, t: u64) -> u64 {
        let i = letter.unsigned_abs() as usize - 1;
        let unit = self.place[i];
        let q = self.base;
        let x = (t / unit) % q;
        let y = (t / (unit * q)) % q;
        let old = x + q * y;
        let table = if letter > 0 {
            &self.forward
        } else {
            &self.backward
        };
        let new = table[old as usize] as u64;
        t - old * unit + new * unit
    }

    pub fn apply_letter(&self, letter: i32, t: Tuple) -> Result<Tuple> {
        check_letter(letter, self.strands)?;
        Ok(Tuple(self.step(letter, t.0)))
    }

    /// Applies the letters of `w` left to right.
    #[inline]
    pub fn run(&self, letters: &[i32], t: u64) -> u64 {
        letters.iter().fold(t, |t, &k| self.step(k, t))
    }

    /// The word as a permutation of all packed tuples.
    pub fn word_permutation(&self, w: &BraidWord) -> Vec<u32> {
        assert_eq!(w.strands(), self.strands);
        (0..self.states)
            .map(|t| self.run(w.letters(), t) as u32)
            .collect()
    }

    /// Number of tuples fixed by `w`, streamed in parallel chunks.
    pub fn fixed_point_count(&self, w: &BraidWord) -> u64 {
        assert_eq!(w.strands(), self.strands);
        let letters = w.letters();
        (0..self.states)
            .into_par_iter()
            .filter(|&t| self.run(letters, t) == t)
            .count() as u64
    }
}

/// `σ_i^{±1}` applied to one tuple.
pub fn apply_generator(q: &Quandle, strands: usize, letter: i32, t: Tuple) -> Result<Tuple> {
    check_letter(letter, strands)?;
    BraidAction::new(q, strands, u64::MAX)?.apply_letter(letter, t)
}

pub fn apply_word(q: &Quandle, w: &BraidWord, t: Tuple) -> Result<Tuple> {
    let action = BraidAction::new(q, w.strands(), u64::MAX)?;
    Ok(Tuple(action.run(w.letters(), t.0)))
}

/// Number of `Q`-colorings of the closure of `w`: tuples fixed by `w`.
pub fn coloring_count(q: &Quandle, w: &BraidWord, budget: u64) -> Result<u64> {
    Ok(BraidAction::new(q, w.strands(), budget)?.fixed_point_count(w))
}

/// Surjective colorings: fixed tuples whose coordinates generate all of `Q`.
pub fn dominant_coloring_count(q: &Quandle, w: &BraidWord, budget: u64) -> Result<u64> {
    let action = BraidAction::new(q, w.strands(), budget)?;
    if q.size() > invariants::LATTICE_LIMIT {
        return Err(Error::TooLarge {
            size: q.size(),
            limit: invariants::LATTICE_LIMIT,
        });
    }
    let generates = generation_table(q);
    let full = invariants::full_mask(q.size());
    let b = q.size() as u64;
    let n = w.strands();
    let letters = w.letters();
    Ok((0..action.states())
        .into_par_iter()
        .filter(|&t| {
            if action.run(letters, t) != t {
                return false;
            }
            let mut mask = 0u64;
            let mut s = t;
            for _ in 0..n {
                mask |= 1 << (s % b);
                s /= b;
            }
            generates[mask as usize] == full
        })
        .count() as u64)
}

/// Closure of every subset of `Q` (indexed by bitmask).
pub(crate) fn generation_table(q: &Quandle) -> Vec<u64> {
    (0..1u64 << q.size())
        .map(|m| invariants::close(q, m))
        .collect()
}
