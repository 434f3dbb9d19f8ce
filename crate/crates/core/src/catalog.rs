//! The quandles of order at most four, their published invariants, and an
//! exhaustive classifier for small orders.

use std::fmt;

use crate::error::{Error, Result};
use crate::invariants::{dim_q, pi0};
use crate::polyfit::{
    fit_hilbert, genfunc, threshold, FitCertificate, IntValuedPoly, RationalGenFunc, MIN_SURPLUS,
};
use crate::quandle::{
    dihedral, disjoint_union, find_isomorphism, trivial, twisted_pointed, Quandle,
};
use crate::series::{dominant_series, graded_series, GradedSeries};

/// Catalog names in the order of the published table.
pub const NAMES: [&str; 12] = [
    "empty", "T1", "T2", "T3", "J", "D3", "T4", "J_plus", "D3_plus", "J_prime", "D4", "C3",
];

/// Largest order [`enumerate_quandles`] accepts.
pub const ENUMERATION_LIMIT: usize = 5;

/// A generating function exactly as printed: `(1−t)^exponent · N(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublishedEta {
    pub exponent: i32,
    pub numerator: Vec<i64>,
}

impl PublishedEta {
    /// The printed value as a reduced function, when it has that shape.
    pub fn as_genfunc(&self) -> Option<RationalGenFunc> {
        (self.exponent <= 0)
            .then(|| RationalGenFunc::from_i64(&self.numerator, self.exponent.unsigned_abs()))
    }
}

impl fmt::Display for PublishedEta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent != 0 {
            write!(f, "(1-t)^{{{}}}", self.exponent)?;
        }
        if self.exponent == 0 || self.numerator != [1] {
            let g = RationalGenFunc::from_i64(&self.numerator, 0);
            if self.exponent == 0 {
                write!(f, "{g}")?;
            } else {
                write!(f, "({g})")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Published {
    pub p: IntValuedPoly,
    pub p_dom: IntValuedPoly,
    pub eta: PublishedEta,
}

impl Published {
    /// `deg P + 1`, the dimension the printed polynomial implies.
    pub fn dim(&self) -> i64 {
        self.p.degree() + 1
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub quandle: Quandle,
    pub published: Published,
    /// Known problem with the printed row, if any.
    pub annotation: Option<&'static str>,
}

fn poly(num: &[i64], den: i64) -> IntValuedPoly {
    IntValuedPoly::from_monomial(num, den).expect("published polynomial is integer-valued")
}

fn published(p: (&[i64], i64), p_dom: (&[i64], i64), exponent: i32, eta: &[i64]) -> Published {
    Published {
        p: poly(p.0, p.1),
        p_dom: poly(p_dom.0, p_dom.1),
        eta: PublishedEta {
            exponent,
            numerator: eta.to_vec(),
        },
    }
}

/// Printed tables put the acting element on columns: `printed[y][x] = x ▷ y`.
const PRINTED_J: [[usize; 3]; 3] = [[0, 0, 1], [1, 1, 0], [2, 2, 2]];
const PRINTED_J_PLUS: [[usize; 4]; 4] = [[0, 0, 1, 0], [1, 1, 0, 1], [2, 2, 2, 2], [3, 3, 3, 3]];
const PRINTED_C3: [[usize; 4]; 4] = [[0, 0, 0, 1], [1, 1, 1, 2], [2, 2, 2, 0], [3, 3, 3, 3]];
const PRINTED_J_PRIME: [[usize; 4]; 4] = [[0, 0, 1, 1], [1, 1, 0, 0], [2, 2, 2, 2], [3, 3, 3, 3]];

/// A printed column-as-actor table, as rows in our row-as-actor convention.
pub fn printed_table(name: &str) -> Option<Vec<Vec<usize>>> {
    fn transpose<const N: usize>(t: &[[usize; N]; N]) -> Vec<Vec<usize>> {
        (0..N).map(|x| (0..N).map(|y| t[y][x]).collect()).collect()
    }
    match name {
        "J" => Some(transpose(&PRINTED_J)),
        "J_plus" => Some(transpose(&PRINTED_J_PLUS)),
        "C3" => Some(transpose(&PRINTED_C3)),
        "J_prime" => Some(transpose(&PRINTED_J_PRIME)),
        _ => None,
    }
}

fn j() -> Quandle {
    twisted_pointed(&trivial(2), &[1, 0]).expect("swap twists T2")
}

pub fn builtin(name: &str) -> Result<CatalogEntry> {
    let (quandle, published, annotation) = match name {
        "empty" => (trivial(0), published((&[], 1), (&[], 1), 0, &[1]), None),
        "T1" => (trivial(1), published((&[1], 1), (&[1], 1), -1, &[1]), None),
        "T2" => (
            trivial(2),
            published((&[1, 1], 1), (&[-1, 1], 1), -2, &[1]),
            None,
        ),
        "T3" => (
            trivial(3),
            published((&[2, 3, 1], 2), (&[2, -3, 1], 2), -3, &[1]),
            None,
        ),
        "J" => (
            j(),
            published((&[1, 2], 1), (&[-1, 1], 1), -2, &[1, 1]),
            None,
        ),
        "D3" => (
            dihedral(3),
            published((&[6], 1), (&[3], 1), -1, &[1, 2, 2, 1]),
            None,
        ),
        "T4" => (
            trivial(4),
            published((&[6, 11, 6, 1], 6), (&[-6, 11, -6, 1], 6), -4, &[1]),
            None,
        ),
        "J_plus" => (
            disjoint_union(&j(), &trivial(1)),
            published((&[1, 2, 1], 1), (&[2, -3, 1], 2), -3, &[1, 1]),
            None,
        ),
        "D3_plus" => (
            disjoint_union(&dihedral(3), &trivial(1)),
            published((&[-3, 6], 1), (&[-7, 3], 1), -2, &[1, 2, 2, 1]),
            Some(
                "printed P_dom obtained through the sum rule; recomputed from the dominant series",
            ),
        ),
        "J_prime" => (
            twisted_pointed(&j(), &[1, 0, 2]).expect("phi_b twists J"),
            published((&[2, 5, 1], 2), (&[2, -3, 1], 2), -3, &[1, 1, -1]),
            None,
        ),
        "D4" => (
            dihedral(4),
            published((&[0, 4], 1), (&[-2, 2], 1), -2, &[1, 2, 1]),
            None,
        ),
        "C3" => (
            twisted_pointed(&trivial(3), &[1, 2, 0]).expect("3-cycle twists T3"),
            published((&[2, 5, 1], 2), (&[-1, 1], 1), 3, &[1, 1, -1]),
            Some("eta printed with exponent +3; a pole of order dim = 3 needs -3"),
        ),
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    let name = NAMES
        .iter()
        .copied()
        .find(|&n| n == name)
        .expect("matched above");
    Ok(CatalogEntry {
        name,
        quandle,
        published,
        annotation,
    })
}

pub fn all() -> Vec<CatalogEntry> {
    NAMES
        .iter()
        .map(|n| builtin(n).expect("every listed name is built in"))
        .collect()
}

/// Series length used for table reproduction: `N = 10` up to order 3,
/// `N = 8` for order 4 and above.
pub fn table_degree(size: usize) -> usize {
    if size <= 3 {
        10
    } else {
        8
    }
}

/// A Hilbert polynomial with its certificate and generating function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fitted {
    pub series: GradedSeries,
    pub poly: IntValuedPoly,
    pub certificate: FitCertificate,
    pub eta: RationalGenFunc,
    /// `deg N − d`; the series equals the polynomial above this degree.
    pub threshold: Option<i64>,
}

/// Fits the series with the degree predicted by `expected_degree` and
/// derives its generating function.
pub fn fit_series(series: GradedSeries, expected_degree: i64) -> Result<Fitted> {
    let (poly, certificate) = fit_hilbert(&series, Some(expected_degree), MIN_SURPLUS)?;
    let eta = genfunc(&series, &poly, certificate.n0)?;
    Ok(Fitted {
        threshold: threshold(&eta),
        series,
        poly,
        certificate,
        eta,
    })
}

#[derive(Clone, Debug)]
pub struct RowReport {
    pub name: &'static str,
    pub size: usize,
    pub dim: usize,
    pub components: usize,
    pub graded: Fitted,
    pub dominant: Fitted,
    pub published: Published,
    pub p_matches: bool,
    pub p_dom_matches: bool,
    pub eta_matches: bool,
    pub annotation: Option<&'static str>,
}

impl RowReport {
    pub fn matches(&self) -> bool {
        self.p_matches && self.p_dom_matches && self.eta_matches
    }

    /// Human-readable differences between the printed and computed row.
    pub fn discrepancies(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.p_matches {
            out.push(format!(
                "P: printed {}, computed {}",
                self.published.p, self.graded.poly
            ));
        }
        if !self.p_dom_matches {
            out.push(format!(
                "P_dom: printed {}, computed {}",
                self.published.p_dom, self.dominant.poly
            ));
        }
        if !self.eta_matches {
            out.push(format!(
                "eta: printed {}, computed {}",
                self.published.eta, self.graded.eta
            ));
        }
        out
    }
}

/// Recomputes one row of the table from scratch.
pub fn table_row(entry: &CatalogEntry, max_degree: usize, budget: u64) -> Result<RowReport> {
    let q = &entry.quandle;
    let dim = dim_q(q)?;
    let components = pi0(q).len();
    let graded = fit_series(graded_series(q, max_degree, budget)?, dim as i64 - 1)?;
    let dominant = fit_series(
        dominant_series(q, max_degree, budget)?,
        components as i64 - 1,
    )?;
    let published = entry.published.clone();
    Ok(RowReport {
        name: entry.name,
        size: q.size(),
        dim,
        components,
        p_matches: graded.poly == published.p,
        p_dom_matches: dominant.poly == published.p_dom,
        eta_matches: published.eta.as_genfunc().as_ref() == Some(&graded.eta),
        graded,
        dominant,
        published,
        annotation: entry.annotation,
    })
}

/// Every row, each at its [`table_degree`].
pub fn table_report(budget: u64) -> Result<Vec<RowReport>> {
    all()
        .iter()
        .map(|e| table_row(e, table_degree(e.quandle.size()), budget))
        .collect()
}

/// One quandle per isomorphism class of the given order, each the
/// lexicographically least table in its class, in lexicographic order.
pub fn enumerate_quandles(order: usize) -> Result<Vec<Quandle>> {
    if order > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            size: order,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut reps: Vec<Quandle> = Vec::new();
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(order);
    let choices: Vec<Vec<Vec<usize>>> = (0..order).map(|x| row_choices(order, x)).collect();
    extend(order, &choices, &mut rows, &mut |rows| {
        let q = Quandle::from_rows(rows).expect("search only emits quandles");
        if !reps.iter().any(|r| find_isomorphism(r, &q).is_some()) {
            reps.push(q);
        }
    });
    Ok(reps)
}

/// Permutations of `0..n` fixing `x`, in lexicographic order.
fn row_choices(n: usize, x: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        if p[x] == x {
            out.push(p.clone());
        }
        if !crate::quandle::next_permutation(&mut p) {
            return out;
        }
    }
}

fn extend<F: FnMut(&[Vec<usize>])>(
    n: usize,
    choices: &[Vec<Vec<usize>>],
    rows: &mut Vec<Vec<usize>>,
    emit: &mut F,
) {
    let r = rows.len();
    if r == n {
        emit(rows);
        return;
    }
    for row in &choices[r] {
        rows.push(row.clone());
        if distributive_so_far(rows) {
            extend(n, choices, rows, emit);
        }
        rows.pop();
    }
}

/// Checks `x▷(y▷z) = (x▷y)▷(x▷z)` on every triple whose rows are all
/// assigned and which involves the newest row.
fn distributive_so_far(rows: &[Vec<usize>]) -> bool {
    let r = rows.len() - 1;
    let n = rows[0].len();
    for x in 0..=r {
        for y in 0..=r {
            let xy = rows[x][y];
            if xy > r || (x != r && y != r && xy != r) {
                continue;
            }
            for z in 0..n {
                if rows[x][rows[y][z]] != rows[xy][rows[x][z]] {
                    return false;
                }
            }
        }
    }
    true
}

/// The catalog entry isomorphic to `q`, if any.
pub fn identify(q: &Quandle) -> Option<&'static str> {
    NAMES.iter().copied().find(|n| {
        let e = builtin(n).expect("listed");
        find_isomorphism(&e.quandle, q).is_some()
    })
}
