//! Coloring counts as random variables on braids.
//!
//! The count `c_{Q,n}(β)` only depends on the image of `β` in the finite group
//! generated by the `σ_i` acting on `Q^n`, so its expectation is a finite
//! average, which Burnside's lemma turns into the orbit count `|Q^n / B_n|`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::braid::{BraidAction, BraidWord};
use crate::error::{Error, Result};
use crate::invariants::DEFAULT_GROUP_CAP;
use crate::perm::{Perm, StabChain};
use crate::quandle::{product, trivial, Quandle};
use crate::series::graded_cardinality;

/// Largest `|Q|^n` accepted by [`burnside_exact`].
pub const BURNSIDE_STATE_LIMIT: u64 = 10_000;

/// Recorded in every estimate so runs can be reproduced elsewhere.
pub const RNG_ALGORITHM: &str =
    "ChaCha8Rng (rand_chacha 0.3), seed_from_u64(seed), stream = sample index";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurnsideReport {
    pub group_order: u128,
    pub fixed_point_total: u128,
    pub average_fixed_points: BigRational,
    pub orbit_count: u64,
    pub equal: bool,
}

/// Averages fixed points over the whole image of `B_n` in `Sym(Q^n)` and
/// compares with the orbit count.
pub fn burnside_exact(q: &Quandle, n: usize, cap: u64) -> Result<BurnsideReport> {
    let states = (q.size() as u128).pow(n as u32);
    if states > BURNSIDE_STATE_LIMIT as u128 {
        return Err(Error::StateSpaceTooLarge {
            states,
            limit: BURNSIDE_STATE_LIMIT,
        });
    }
    let action = BraidAction::new(q, n, BURNSIDE_STATE_LIMIT)?;
    let degree = action.states() as usize;
    let gens: Vec<Perm> = (1..n as i32)
        .map(|i| {
            let w = BraidWord::new(n, vec![i]).expect("letter in range");
            Perm::from_images(action.word_permutation(&w)).expect("braid letters are bijective")
        })
        .collect();
    let chain = StabChain::with_cap(degree, &gens, cap as u128).ok_or(Error::GroupTooLarge(cap))?;
    let group_order = chain.order();
    let fixed_point_total: u128 = if chain.top_transversal().is_empty() {
        degree as u128
    } else {
        chain
            .top_transversal()
            .par_iter()
            .map(|u| {
                let mut sum = 0u128;
                chain.for_each_below_top(u, |g| sum += g.fixed_points() as u128);
                sum
            })
            .sum()
    };
    let orbit_count = graded_cardinality(q, n, BURNSIDE_STATE_LIMIT)?;
    let average_fixed_points =
        BigRational::new(BigInt::from(fixed_point_total), BigInt::from(group_order));
    let equal = average_fixed_points == BigRational::from_integer(orbit_count.into());
    Ok(BurnsideReport {
        group_order,
        fixed_point_total,
        average_fixed_points,
        orbit_count,
        equal,
    })
}

/// [`burnside_exact`] with the default group cap.
pub fn burnside(q: &Quandle, n: usize) -> Result<BurnsideReport> {
    burnside_exact(q, n, DEFAULT_GROUP_CAP)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonteCarloEstimate {
    pub samples: u64,
    pub walk_length: usize,
    pub mean: BigRational,
    /// Unbiased sample variance (zero for a single sample).
    pub sample_variance: BigRational,
    pub seed: u64,
    pub rng: &'static str,
}

impl MonteCarloEstimate {
    /// `sqrt(variance / samples)`.
    pub fn standard_error(&self) -> f64 {
        let v = self.sample_variance.to_f64().unwrap_or(f64::NAN);
        (v / self.samples as f64).sqrt()
    }

    pub fn mean_f64(&self) -> f64 {
        self.mean.to_f64().unwrap_or(f64::NAN)
    }

    /// Whether `target` lies within `k` standard errors of the mean.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean_f64() - target).abs() <= k * self.standard_error()
    }
}

/// One lazy random word: each step holds with probability 1/2, otherwise
/// picks one of the `2(n−1)` letters `σ_i^{±1}` uniformly.
pub fn lazy_random_word(strands: usize, walk_length: usize, rng: &mut impl Rng) -> BraidWord {
    let letters = 2 * strands.saturating_sub(1);
    let mut word = Vec::new();
    if letters > 0 {
        for _ in 0..walk_length {
            let j = rng.gen_range(0..2 * letters);
            if j >= letters {
                continue;
            }
            let i = (j / 2 + 1) as i32;
            word.push(if j % 2 == 0 { i } else { -i });
        }
    }
    BraidWord::new(strands, word).expect("letters in range")
}

/// The generator used for sample `index`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Estimates `E[c_{Q,n}]` from `samples` lazy walks of `walk_length` steps.
/// Each sample draws from its own stream, so the result does not depend on
/// how samples are scheduled.
pub fn monte_carlo_mean(
    q: &Quandle,
    n: usize,
    samples: u64,
    walk_length: usize,
    seed: u64,
    budget: u64,
) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::InsufficientData { len: 0, needed: 1 });
    }
    let action = BraidAction::new(q, n, budget)?;
    let counts: Vec<u64> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let w = lazy_random_word(n, walk_length, &mut sample_rng(seed, k));
            let letters = w.letters();
            (0..action.states())
                .filter(|&t| action.run(letters, t) == t)
                .count() as u64
        })
        .collect();
    let sum: BigInt = counts.iter().map(|&c| BigInt::from(c)).sum();
    let sum_sq: BigInt = counts.iter().map(|&c| BigInt::from(c) * c).sum();
    let n_big = BigInt::from(samples);
    let mean = BigRational::new(sum.clone(), n_big.clone());
    let sample_variance = if samples > 1 {
        let centred = BigRational::from_integer(sum_sq) - BigRational::new(&sum * &sum, n_big);
        centred / BigRational::from_integer(BigInt::from(samples - 1))
    } else {
        BigRational::zero()
    };
    Ok(MonteCarloEstimate {
        samples,
        walk_length,
        mean,
        sample_variance,
        seed,
        rng: RNG_ALGORITHM,
    })
}

/// `Q × ⋯ × Q` with `k` factors; the singleton for `k = 0`.
pub fn power(q: &Quandle, k: usize) -> Quandle {
    (0..k).fold(trivial(1), |acc, _| product(&acc, q))
}

/// `E[c_{Q,n}^k]`, exactly, as the orbit count of the `k`-fold product.
pub fn moment(q: &Quandle, n: usize, k: usize, budget: u64) -> Result<u64> {
    graded_cardinality(&power(q, k), n, budget)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covariance {
    /// `E[c_Q c_R] = |(Q×R)^n / B_n|`.
    pub joint: u64,
    pub mean_q: u64,
    pub mean_r: u64,
    pub covariance: i128,
}

pub fn covariance(q: &Quandle, r: &Quandle, n: usize, budget: u64) -> Result<Covariance> {
    let joint = graded_cardinality(&product(q, r), n, budget)?;
    let mean_q = graded_cardinality(q, n, budget)?;
    let mean_r = graded_cardinality(r, n, budget)?;
    Ok(Covariance {
        joint,
        mean_q,
        mean_r,
        covariance: joint as i128 - mean_q as i128 * mean_r as i128,
    })
}
