//! Exact detection of Hilbert polynomials and rational generating functions
//! from graded series.
//!
//! Polynomials are kept in the basis `C(x+k−1, k−1)`, `k = 1..d`, which is the
//! coefficient sequence of `1/(1−t)^k`. That makes the passage between a
//! polynomial and its generating function a change of variable `t = 1 − u`.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::GradedSeries;

/// Points beyond the interpolation window a certified fit must reproduce.
pub const MIN_SURPLUS: usize = 3;

/// Generalised binomial coefficient `C(m, j)`, valid for negative `m`.
pub fn binomial(m: i64, j: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..j {
        r = r * BigInt::from(m - i as i64) / BigInt::from(i + 1);
    }
    r
}

/// Integer-valued polynomial `Σ_{k=1..d} c_k·C(x+k−1, k−1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntValuedPoly {
    coeffs: Vec<BigInt>,
}

impl IntValuedPoly {
    pub fn zero() -> Self {
        IntValuedPoly { coeffs: Vec::new() }
    }

    /// From binomial coordinates `c_1, c_2, …`; trailing zeros are dropped.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntValuedPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Binomial coordinates `c_1..c_d`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `d − 1`; the zero polynomial has degree −1.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn eval(&self, x: i64) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * binomial(x + i as i64, i))
            .sum()
    }

    /// The unique polynomial of degree `< values.len()` with
    /// `P(start + j) = values[j]`.
    pub fn interpolate(start: i64, values: &[BigInt]) -> Self {
        let d = values.len();
        // forward differences at `start`
        let mut diffs = values.to_vec();
        for i in 1..d {
            for j in (i..d).rev() {
                diffs[j] = &diffs[j] - &diffs[j - 1];
            }
        }
        let at_origin: Vec<BigInt> = (0..d as i64)
            .map(|m| {
                diffs
                    .iter()
                    .enumerate()
                    .map(|(i, dv)| dv * binomial(m - start, i))
                    .sum()
            })
            .collect();
        // h(t) = (Σ P(n) tⁿ)(1−t)^d truncated below degree d
        let h = truncated_mul(&at_origin, &one_minus_t_pow(d), d);
        // c_k is the coefficient of u^{d−k} in h(1−u)
        let hu = substitute_one_minus(&h);
        let coeffs = (1..=d)
            .map(|k| hu.get(d - k).cloned().unwrap_or_default())
            .collect();
        Self::new(coeffs)
    }

    /// From a monomial numerator `Σ a_i x^i` over `den`; `None` unless the
    /// result is integer-valued.
    pub fn from_monomial(numerator: &[i64], den: i64) -> Option<Self> {
        assert!(den != 0, "zero denominator");
        let d = numerator.len();
        let den = BigInt::from(den);
        let mut values = Vec::with_capacity(d);
        for x in 0..d as i64 {
            let mut acc = BigInt::zero();
            for &a in numerator.iter().rev() {
                acc = acc * x + a;
            }
            let (q, r) = acc.div_rem(&den);
            if !r.is_zero() {
                return None;
            }
            values.push(q);
        }
        let p = Self::interpolate(0, &values);
        // integer values at 0..d do not make a rational polynomial
        // integer-valued, so compare coefficients exactly
        let (num, pden) = p.to_monomial();
        let len = num.len().max(numerator.len());
        let same = (0..len).all(|i| {
            let a = num.get(i).cloned().unwrap_or_default();
            let b = BigInt::from(numerator.get(i).copied().unwrap_or(0));
            a * &den == b * &pden
        });
        same.then_some(p)
    }

    /// Monomial coefficients (ascending) over a positive common denominator,
    /// in lowest terms.
    pub fn to_monomial(&self) -> (Vec<BigInt>, BigInt) {
        let d = self.coeffs.len();
        if d == 0 {
            return (Vec::new(), BigInt::one());
        }
        let fact = |n: usize| (1..=n).fold(BigInt::one(), |a, i| a * i);
        let den = fact(d - 1);
        let mut num = vec![BigInt::zero(); d];
        for (i, c) in self.coeffs.iter().enumerate() {
            // C(x+i, i)·(d−1)! = (x+1)…(x+i)·(d−1)!/i!
            let mut basis = vec![BigInt::one()];
            for j in 1..=i {
                let mut next = vec![BigInt::zero(); basis.len() + 1];
                for (e, b) in basis.iter().enumerate() {
                    next[e] += b * j;
                    next[e + 1] += b;
                }
                basis = next;
            }
            let scale = c * (&den / fact(i));
            for (e, b) in basis.iter().enumerate() {
                num[e] += b * &scale;
            }
        }
        while num.last().is_some_and(Zero::is_zero) {
            num.pop();
        }
        let g = num.iter().fold(den.clone(), |g, a| g.gcd(a));
        (num.iter().map(|a| a / &g).collect(), den / g)
    }
}

impl Add for &IntValuedPoly {
    type Output = IntValuedPoly;

    fn add(self, other: &IntValuedPoly) -> IntValuedPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
        IntValuedPoly::new(
            (0..n)
                .map(|i| get(&self.coeffs, i) + get(&other.coeffs, i))
                .collect(),
        )
    }
}

impl std::iter::Sum for IntValuedPoly {
    fn sum<I: Iterator<Item = IntValuedPoly>>(iter: I) -> Self {
        iter.fold(IntValuedPoly::zero(), |a, b| &a + &b)
    }
}

/// Writes `Σ a_i v^i`, e.g. `x^2+5x+2` or, ascending, `1+t-t^2`.
fn write_poly(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[BigInt],
    var: &str,
    ascending: bool,
) -> fmt::Result {
    let mut first = true;
    let mut order: Vec<usize> = (0..coeffs.len()).collect();
    if !ascending {
        order.reverse();
    }
    for e in order {
        let a = &coeffs[e];
        if a.is_zero() {
            continue;
        }
        let mag = a.abs();
        if a.is_negative() {
            f.write_str("-")?;
        } else if !first {
            f.write_str("+")?;
        }
        first = false;
        if e == 0 || !mag.is_one() {
            write!(f, "{mag}")?;
        }
        match e {
            0 => {}
            1 => f.write_str(var)?,
            _ => write!(f, "{var}^{e}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

struct PolyDisplay<'a>(&'a [BigInt], &'a str, bool);

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.0, self.1, self.2)
    }
}

impl fmt::Display for IntValuedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.to_monomial();
        if den.is_one() {
            return write_poly(f, &num, "x", false);
        }
        let terms = num.iter().filter(|a| !a.is_zero()).count();
        if terms > 1 {
            write!(f, "({})/{den}", PolyDisplay(&num, "x", false))
        } else {
            write!(f, "{}/{den}", PolyDisplay(&num, "x", false))
        }
    }
}

fn one_minus_t_pow(d: usize) -> Vec<BigInt> {
    (0..=d)
        .map(|i| {
            let c = binomial(d as i64, i);
            if i % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

fn truncated_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn full_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    truncated_mul(a, b, a.len() + b.len() - 1)
}

/// Coefficients of `h(1 − u)` in `u`.
fn substitute_one_minus(h: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); h.len()];
    for (e, a) in h.iter().enumerate() {
        for (i, c) in one_minus_t_pow(e).into_iter().enumerate() {
            out[i] += a * c;
        }
    }
    out
}

/// `N(t) / (1−t)^d` with `(1−t) ∤ N` unless `N = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalGenFunc {
    numerator: Vec<BigInt>,
    den_power: u32,
}

impl RationalGenFunc {
    pub fn new(numerator: Vec<BigInt>, den_power: u32) -> Self {
        let mut g = RationalGenFunc {
            numerator,
            den_power,
        };
        g.reduce();
        g
    }

    pub fn from_i64(numerator: &[i64], den_power: u32) -> Self {
        Self::new(
            numerator.iter().map(|&a| BigInt::from(a)).collect(),
            den_power,
        )
    }

    pub fn one() -> Self {
        Self::from_i64(&[1], 0)
    }

    fn reduce(&mut self) {
        let n = &mut self.numerator;
        while n.last().is_some_and(Zero::is_zero) {
            n.pop();
        }
        if n.is_empty() {
            self.den_power = 0;
            return;
        }
        while self.den_power > 0 && n.iter().sum::<BigInt>().is_zero() {
            // N = (1−t)·Q with Q the prefix sums of N
            let mut acc = BigInt::zero();
            let mut q = Vec::with_capacity(n.len() - 1);
            for a in &n[..n.len() - 1] {
                acc += a;
                q.push(acc.clone());
            }
            *n = q;
            self.den_power -= 1;
        }
    }

    /// Numerator coefficients, ascending in `t`.
    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn den_power(&self) -> u32 {
        self.den_power
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    /// The first `terms` power-series coefficients.
    pub fn expand(&self, terms: usize) -> Vec<BigInt> {
        let mut s: Vec<BigInt> = (0..terms)
            .map(|i| self.numerator.get(i).cloned().unwrap_or_default())
            .collect();
        for _ in 0..self.den_power {
            for i in 1..terms {
                let prev = s[i - 1].clone();
                s[i] += prev;
            }
        }
        s
    }
}

impl fmt::Display for RationalGenFunc {
    /// `(1-t)^{-d}(N)` in the style of the published table.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = self.numerator.len() == 1 && self.numerator[0].is_one();
        if self.den_power == 0 {
            return write_poly(f, &self.numerator, "t", true);
        }
        write!(f, "(1-t)^{{-{}}}", self.den_power)?;
        if !unit {
            write!(f, "({})", PolyDisplay(&self.numerator, "t", true))?;
        }
        Ok(())
    }
}

/// Order of the pole at `t = 1`.
pub fn pole_order(g: &RationalGenFunc) -> u32 {
    g.den_power
}

/// `deg N − d`: the series equals the polynomial part for every degree
/// strictly above this value. `None` for the zero function.
pub fn threshold(g: &RationalGenFunc) -> Option<i64> {
    if g.is_zero() {
        None
    } else {
        Some(g.numerator.len() as i64 - 1 - g.den_power as i64)
    }
}

pub fn series_product(a: &RationalGenFunc, b: &RationalGenFunc) -> RationalGenFunc {
    RationalGenFunc::new(
        full_mul(&a.numerator, &b.numerator),
        a.den_power + b.den_power,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitCertificate {
    /// Least degree from which every available value matches.
    pub n0: usize,
    /// Values verified beyond the interpolation window.
    pub surplus: usize,
    /// Whether the degree equals the expected one; `None` when none was given.
    pub degree_matches_dim: Option<bool>,
    pub certified: bool,
}

/// Finds the eventual polynomial of a series.
///
/// Without `expected_degree` the smallest degree is tried first, and for
/// each degree the least start `n₀` whose window interpolant reproduces all
/// later values, with at least `min_surplus` of them. With an expected
/// degree the window has that size and any other detected degree is an
/// error.
pub fn fit_hilbert(
    series: &GradedSeries,
    expected_degree: Option<i64>,
    min_surplus: usize,
) -> Result<(IntValuedPoly, FitCertificate)> {
    let a: Vec<BigInt> = series.values.iter().map(|&v| BigInt::from(v)).collect();
    let len = a.len();
    let sizes: Vec<usize> = match expected_degree {
        Some(e) => {
            let d = (e + 1).max(0) as usize;
            if len < d + min_surplus {
                return Err(Error::InsufficientData {
                    len,
                    needed: d + min_surplus,
                });
            }
            vec![d]
        }
        None => {
            if len < min_surplus.max(1) {
                return Err(Error::InsufficientData {
                    len,
                    needed: min_surplus.max(1),
                });
            }
            (0..=len - min_surplus).collect()
        }
    };
    for d in sizes {
        for n0 in 0..=len - d - min_surplus {
            let p = IntValuedPoly::interpolate(n0 as i64, &a[n0..n0 + d]);
            if (n0 + d..len).all(|n| p.eval(n as i64) == a[n]) {
                let detected = p.degree();
                if let Some(e) = expected_degree {
                    if detected != e {
                        return Err(Error::DegreeMismatch {
                            detected,
                            expected: e,
                        });
                    }
                }
                let surplus = len - n0 - d;
                let degree_matches_dim = expected_degree.map(|e| e == detected);
                return Ok((
                    p,
                    FitCertificate {
                        n0,
                        surplus,
                        degree_matches_dim,
                        certified: surplus >= min_surplus && degree_matches_dim == Some(true),
                    },
                ));
            }
        }
    }
    Err(Error::NoStablePolynomial)
}

/// `Σ c_k/(1−t)^k + Σ_{n<n₀} (a_n − P(n)) tⁿ`, reduced, checked against
/// every value of the series.
pub fn genfunc(series: &GradedSeries, p: &IntValuedPoly, n0: usize) -> Result<RationalGenFunc> {
    let d = p.coeffs().len();
    // Σ c_k (1−t)^{d−k}
    let mut num = vec![BigInt::zero(); d.max(1)];
    for (i, c) in p.coeffs().iter().enumerate() {
        for (e, b) in one_minus_t_pow(d - 1 - i).into_iter().enumerate() {
            num[e] += c * b;
        }
    }
    let correction: Vec<BigInt> = (0..n0.min(series.len()))
        .map(|n| BigInt::from(series.values[n]) - p.eval(n as i64))
        .collect();
    let extra = full_mul(&correction, &one_minus_t_pow(d));
    if num.len() < extra.len() {
        num.resize(extra.len(), BigInt::zero());
    }
    for (x, e) in num.iter_mut().zip(extra) {
        *x += e;
    }
    let g = RationalGenFunc::new(num, d as u32);
    let expanded = g.expand(series.len());
    for (n, (got, &want)) in expanded.iter().zip(&series.values).enumerate() {
        if *got != BigInt::from(want) {
            return Err(Error::InconsistentFit(n));
        }
    }
    Ok(g)
}
