//! Graded cardinalities `|Q^n / B_n|` and their dominant parts.
//!
//! The orbit count in degree `n` is the number of connected components of
//! the graph on `Q^n` with an edge from `t` to each `σ_i(t)`. Orbits of a group are the
//! components of its generator graph, so inverse letters never need to be
//! walked.

use serde::Serialize;

use crate::braid::{state_count, BraidAction};
use crate::error::{Error, Result};
use crate::invariants::{self, SubquandleLattice};
use crate::quandle::Quandle;

/// Union–find over a flat `u32` parent array with path halving.
pub struct UnionFind {
    parent: Vec<u32>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize);
        UnionFind {
            parent: (0..n as u32).collect(),
            components: n,
        }
    }

    #[inline]
    pub fn find(&mut self, mut x: u32) -> u32 {
        loop {
            let p = self.parent[x as usize];
            if p == x {
                return x;
            }
            let gp = self.parent[p as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
    }

    /// Returns true if the two classes were distinct.
    #[inline]
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if ra < rb {
            self.parent[rb as usize] = ra;
        } else {
            self.parent[ra as usize] = rb;
        }
        self.components -= 1;
        true
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// Dense labels `0..components`, numbered by first occurrence.
    pub fn labels(&mut self) -> Vec<u32> {
        let n = self.parent.len();
        let mut slot = vec![u32::MAX; n];
        let mut next = 0u32;
        let mut out = Vec::with_capacity(n);
        for x in 0..n as u32 {
            let r = self.find(x) as usize;
            if slot[r] == u32::MAX {
                slot[r] = next;
                next += 1;
            }
            out.push(slot[r]);
        }
        out
    }
}

/// Visits every packed tuple of `Q^n` in increasing order together with its
/// digit vector.
fn for_each_tuple<F: FnMut(u64, &[u32])>(base: u32, n: usize, states: u64, mut f: F) {
    let mut digits = vec![0u32; n];
    for t in 0..states {
        f(t, &digits);
        for d in digits.iter_mut() {
            *d += 1;
            if *d < base {
                break;
            }
            *d = 0;
        }
    }
}

fn forward_table(q: &Quandle) -> Vec<u32> {
    let b = q.size();
    let mut fwd = vec![0u32; b * b];
    for x in 0..b {
        for y in 0..b {
            fwd[x + b * y] = (q.op(x, y) + b * x) as u32;
        }
    }
    fwd
}

fn orbit_union_find(q: &Quandle, n: usize, budget: u64) -> Result<UnionFind> {
    let states = state_count(q.size(), n, budget)?;
    if states > u32::MAX as u64 {
        return Err(Error::BudgetExceeded {
            states: states as u128,
            budget,
        });
    }
    let b = q.size() as u64;
    let fwd = forward_table(q);
    let place: Vec<u64> = (0..n as u32).map(|i| b.pow(i)).collect();
    let mut uf = UnionFind::new(states as usize);
    for_each_tuple(b as u32, n, states, |t, d| {
        for i in 0..n.saturating_sub(1) {
            let old = d[i] as u64 + b * d[i + 1] as u64;
            let new = fwd[old as usize] as u64;
            if new != old {
                let s = t - old * place[i] + new * place[i];
                uf.union(t as u32, s as u32);
            }
        }
    });
    Ok(uf)
}

/// `|Q^n / B_n|` by union–find over packed tuples.
pub fn graded_cardinality(q: &Quandle, n: usize, budget: u64) -> Result<u64> {
    match n {
        0 => Ok(1),
        1 => Ok(q.size() as u64),
        _ => Ok(orbit_union_find(q, n, budget)?.components() as u64),
    }
}

/// Orbit label of every packed tuple of `Q^n`, numbered by first occurrence.
pub fn orbit_labels(q: &Quandle, n: usize, budget: u64) -> Result<Vec<u32>> {
    Ok(orbit_union_find(q, n, budget)?.labels())
}

/// Exact values `a_0, …, a_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedSeries {
    pub label: String,
    pub values: Vec<u64>,
    /// Degree that was asked for; `values.len() - 1` may be smaller.
    pub requested: usize,
    /// True when higher degrees were skipped because of the state budget.
    pub truncated: bool,
}

impl GradedSeries {
    pub fn new(label: impl Into<String>, values: Vec<u64>) -> Self {
        let requested = values.len().saturating_sub(1);
        GradedSeries {
            label: label.into(),
            values,
            requested,
            truncated: false,
        }
    }

    /// Highest degree available.
    pub fn max_degree(&self) -> Option<usize> {
        self.values.len().checked_sub(1)
    }

    pub fn get(&self, n: usize) -> Option<u64> {
        self.values.get(n).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn truncating<F>(label: String, max_degree: usize, mut f: F) -> Result<GradedSeries>
where
    F: FnMut(usize) -> Result<u64>,
{
    let mut values = Vec::with_capacity(max_degree + 1);
    let mut truncated = false;
    for n in 0..=max_degree {
        match f(n) {
            Ok(v) => values.push(v),
            Err(Error::BudgetExceeded { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(GradedSeries {
        label,
        values,
        requested: max_degree,
        truncated,
    })
}

/// `|Q^n / B_n|` for `n = 0..=max_degree`, cut short (and flagged) once
/// `|Q|^n` exceeds the budget.
pub fn graded_series(q: &Quandle, max_degree: usize, budget: u64) -> Result<GradedSeries> {
    truncating("graded".into(), max_degree, |n| {
        graded_cardinality(q, n, budget)
    })
}

/// Dominant series of every closed subset, keyed by bitmask in lattice order.
#[derive(Clone, Debug)]
pub struct DominantDecomposition {
    pub lattice: SubquandleLattice,
    /// `graded[k]` is the graded series of the `k`-th lattice member.
    pub graded: Vec<GradedSeries>,
    /// `dominant[k]` is its dominant series.
    pub dominant: Vec<GradedSeries>,
}

impl DominantDecomposition {
    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.lattice.subsets().binary_search(&mask).ok()
    }

    pub fn full(&self) -> &GradedSeries {
        self.dominant.last().expect("lattice contains the full set")
    }
}

/// Runs the recursion `dom(R, n) = |A_{R,n}| − Σ_{S ⊊ R} dom(S, n)` over every
/// closed subset `R`, memoised by bitmask.
pub fn dominant_decomposition(
    q: &Quandle,
    max_degree: usize,
    budget: u64,
) -> Result<DominantDecomposition> {
    let lattice = invariants::subquandles(q)?;
    let masks = lattice.subsets().to_vec();
    let mut graded = Vec::with_capacity(masks.len());
    for &m in &masks {
        let sub = invariants::subquandle(q, m);
        let mut s = graded_series(&sub, max_degree, budget)?;
        s.label = format!("graded[{m:#x}]");
        graded.push(s);
    }
    let len = graded.iter().map(|s| s.len()).min().unwrap_or(0);
    let truncated = len < max_degree + 1;
    let mut dominant: Vec<GradedSeries> = Vec::with_capacity(masks.len());
    // proper subsets have smaller masks, so lattice order is a topological order
    for (k, &m) in masks.iter().enumerate() {
        let mut values = graded[k].values[..len].to_vec();
        for (j, &s) in masks[..k].iter().enumerate() {
            if s & !m == 0 {
                for (v, d) in values.iter_mut().zip(&dominant[j].values) {
                    *v = v
                        .checked_sub(*d)
                        .expect("dominant decomposition went negative");
                }
            }
        }
        dominant.push(GradedSeries {
            label: format!("dominant[{m:#x}]"),
            values,
            requested: max_degree,
            truncated,
        });
    }
    Ok(DominantDecomposition {
        lattice,
        graded,
        dominant,
    })
}

/// `|A^dom_{Q,n}|` for `n = 0..=max_degree`.
pub fn dominant_series(q: &Quandle, max_degree: usize, budget: u64) -> Result<GradedSeries> {
    let mut s = dominant_decomposition(q, max_degree, budget)?
        .dominant
        .pop()
        .expect("lattice is never empty");
    s.label = "dominant".into();
    Ok(s)
}

/// Degree-by-degree orbit computation: the `B_{n-1}` classes of `Q^{n-1}`
/// times the last coordinate are merged along `σ_{n-1}` to give the `B_n`
/// classes of `Q^n`.
pub fn incremental_series(q: &Quandle, max_degree: usize, budget: u64) -> Result<GradedSeries> {
    let b = q.size();
    let mut values = vec![1u64];
    if max_degree == 0 {
        return Ok(GradedSeries {
            label: "incremental".into(),
            values,
            requested: 0,
            truncated: false,
        });
    }
    values.push(b as u64);
    // labels of Q^1: each element its own class
    let mut labels: Vec<u32> = (0..b as u32).collect();
    let mut classes = b;
    let action = |n: usize| BraidAction::new(q, n, budget);
    let mut truncated = false;
    for n in 2..=max_degree {
        let act = match action(n) {
            Ok(a) => a,
            Err(Error::BudgetExceeded { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let prefix_states = labels.len() as u64;
        let node = |t: u64| -> u32 {
            let prefix = t % prefix_states;
            let last = t / prefix_states;
            labels[prefix as usize] * b as u32 + last as u32
        };
        let mut uf = UnionFind::new(classes * b);
        let letter = (n - 1) as i32;
        for t in 0..act.states() {
            uf.union(node(t), node(act.step(letter, t)));
        }
        let node_labels = uf.labels();
        classes = uf.components();
        labels = (0..act.states())
            .map(|t| node_labels[node(t) as usize])
            .collect();
        values.push(classes as u64);
    }
    Ok(GradedSeries {
        label: "incremental".into(),
        values,
        requested: max_degree,
        truncated,
    })
}
