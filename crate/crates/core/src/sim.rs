//! Random utilities from ranking distributions, and synthetic observations.
//!
//! The generator is ChaCha20 (`rand_chacha`) seeded through `seed_from_u64`.
//! Rankings are drawn exactly: masses are put over their least common
//! denominator `D` and a uniform integer in `0..D` is found by rejection from
//! raw random bits, so no rounding enters the sampling law.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::measure::RankingDistribution;
use crate::rational::{common_denominator, Rational};
use crate::rankings::Ranking;
use crate::subset::{Alt, Subset};
use crate::system::{offered_sets, ordered_pairs, BwSystem, ChoiceCountDataset, CountRecord, Limits};

/// Name of the generator, for reports.
pub const ALGORITHM: &str = "chacha20/seed_from_u64";

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Reproducible random stream; one consumer at a time.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            seed,
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream for parallel work: seed `seed ^ splitmix64(stream)`.
    pub fn split(&self, stream: u64) -> SeededRng {
        SeededRng::new(self.seed ^ splitmix64(stream))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `0..bound` by rejection. `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// Uniform in `0..bound` for arbitrary-size `bound`, by drawing exactly
    /// `bits(bound)` random bits and rejecting values that are too large.
    pub fn below_big(&mut self, bound: &BigUint) -> BigUint {
        assert!(!bound.is_zero());
        let bits = bound.bits();
        let words = bits.div_ceil(64) as usize;
        loop {
            let mut digits: Vec<u64> = (0..words).map(|_| self.next_u64()).collect();
            let spare = words as u64 * 64 - bits;
            if spare > 0 {
                let last = digits.last_mut().expect("bound is nonzero");
                *last >>= spare;
            }
            let candidate = BigUint::from_slice(
                &digits
                    .iter()
                    .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                    .collect::<Vec<u32>>(),
            );
            if candidate < *bound {
                return candidate;
            }
        }
    }
}

/// Exact sampler over a fixed distribution.
#[derive(Debug, Clone)]
pub struct RankingSampler {
    rankings: Vec<Ranking>,
    /// Running totals of `mass * denominator`.
    cumulative: Vec<BigUint>,
    denominator: BigUint,
}

impl RankingSampler {
    pub fn new(dist: &RankingDistribution) -> Self {
        let denom = common_denominator(dist.support().map(|(_, p)| p));
        let mut total = BigUint::zero();
        let mut rankings = Vec::new();
        let mut cumulative = Vec::new();
        for (r, p) in dist.support() {
            let scaled = (p.numer() * &denom) / p.denom();
            total += scaled.to_biguint().expect("masses are nonnegative");
            rankings.push(r.clone());
            cumulative.push(total.clone());
        }
        RankingSampler {
            rankings,
            cumulative,
            denominator: denom.to_biguint().expect("positive denominator"),
        }
    }

    /// The common denominator `D`; draws are integers in `0..D`.
    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// Ranking chosen by the integer draw `u` in `0..D`.
    pub fn index_for(&self, u: &BigUint) -> &Ranking {
        let i = self.cumulative.partition_point(|c| c <= u);
        &self.rankings[i]
    }

    pub fn sample(&self, rng: &mut SeededRng) -> &Ranking {
        let u = rng.below_big(&self.denominator);
        self.index_for(&u)
    }

    /// Best and worst of `subset` under a drawn ranking's utilities.
    pub fn best_worst(&self, subset: Subset, rng: &mut SeededRng) -> (Alt, Alt) {
        let u = utilities_from_ranking(self.sample(rng));
        u.best_worst_in(subset)
    }
}

pub fn sample_ranking(dist: &RankingDistribution, rng: &mut SeededRng) -> Ranking {
    RankingSampler::new(dist).sample(rng).clone()
}

/// Integer utilities `values[i]`, a permutation of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityVector(pub Vec<usize>);

impl UtilityVector {
    /// `(argmax, argmin)` of the utilities restricted to `subset`.
    pub fn best_worst_in(&self, subset: Subset) -> (Alt, Alt) {
        assert!(subset.len() >= 2, "need two alternatives to choose from");
        let best = subset.iter().max_by_key(|&a| self.0[a]).expect("nonempty");
        let worst = subset.iter().min_by_key(|&a| self.0[a]).expect("nonempty");
        (best, worst)
    }

    /// The ranking listing alternatives by decreasing utility.
    pub fn to_ranking(&self) -> Ranking {
        let mut order: Vec<Alt> = (0..self.0.len()).collect();
        order.sort_by_key(|&a| core::cmp::Reverse(self.0[a]));
        Ranking::new(order).expect("utilities are distinct")
    }
}

/// `xi_i = n - position(i)`: the best alternative gets `n`, the worst 1.
pub fn utilities_from_ranking(ranking: &Ranking) -> UtilityVector {
    let n = ranking.n();
    let mut values = vec![0; n];
    for (pos, &a) in ranking.order().iter().enumerate() {
        values[a] = n - pos;
    }
    UtilityVector(values)
}

pub fn sample_best_worst(dist: &RankingDistribution, subset: Subset, rng: &mut SeededRng) -> (Alt, Alt) {
    RankingSampler::new(dist).best_worst(subset, rng)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("design subset {0:?} needs at least two alternatives inside 0..n")]
    InvalidDesign(Subset),
}

/// Independent best-worst draws per designed subset. Every cell of a
/// designed subset is reported, including zero counts.
pub fn simulate_dataset(
    dist: &RankingDistribution,
    design: &[(Subset, u64)],
    rng: &mut SeededRng,
) -> Result<ChoiceCountDataset, SimError> {
    let n = dist.n();
    if let Some(&(bad, _)) = design.iter().find(|(s, _)| s.len() < 2 || !s.fits(n)) {
        return Err(SimError::InvalidDesign(bad));
    }
    let sampler = RankingSampler::new(dist);
    let mut records = Vec::new();
    for &(subset, trials) in design {
        let pairs: Vec<(Alt, Alt)> = ordered_pairs(subset).collect();
        let mut counts = vec![0u64; pairs.len()];
        for _ in 0..trials {
            let drawn = sampler.best_worst(subset, rng);
            let i = pairs.iter().position(|&p| p == drawn).expect("drawn pair lies in subset");
            counts[i] += 1;
        }
        records.extend(pairs.into_iter().zip(counts).map(|((best, worst), count)| CountRecord {
            subset,
            best,
            worst,
            count,
        }));
    }
    Ok(ChoiceCountDataset { n, records })
}

/// Every offered set of `n` alternatives with the same number of trials.
pub fn full_design(n: usize, trials: u64) -> Vec<(Subset, u64)> {
    offered_sets(n).map(|s| (s, trials)).collect()
}

/// Distribution with independent integer weights in `0..=max_weight` per
/// ranking, normalized. Sparse supports arise naturally from zero weights.
pub fn random_distribution(n: usize, max_weight: u64, rng: &mut SeededRng) -> RankingDistribution {
    let rankings = Ranking::all(n);
    loop {
        let weights: Vec<u64> = rankings.iter().map(|_| rng.below(max_weight + 1)).collect();
        let total: u64 = weights.iter().sum();
        if total == 0 {
            continue;
        }
        let entries = rankings
            .iter()
            .cloned()
            .zip(weights)
            .map(|(r, w)| (r, Rational::new(BigInt::from(w), BigInt::from(total))));
        return RankingDistribution::new(n, entries).expect("normalized weights");
    }
}

/// A valid system with independent random weights per offered set. Usually
/// not induced by any ranking distribution.
pub fn random_system(n: usize, max_weight: u64, rng: &mut SeededRng) -> BwSystem {
    let mut entries = Vec::new();
    for s in offered_sets(n) {
        let pairs: Vec<(Alt, Alt)> = ordered_pairs(s).collect();
        let (weights, total) = loop {
            let w: Vec<u64> = pairs.iter().map(|_| rng.below(max_weight + 1)).collect();
            let t: u64 = w.iter().sum();
            if t > 0 {
                break (w, t);
            }
        };
        for ((a, b), w) in pairs.into_iter().zip(weights) {
            entries.push((s, a, b, Rational::new(BigInt::from(w), BigInt::from(total))));
        }
    }
    BwSystem::new_with_limits(n, entries, Limits::with_max(n)).expect("normalized per subset")
}

/// Random subset of `universe`, each member kept with probability one half.
pub fn random_subset(universe: Subset, rng: &mut SeededRng) -> Subset {
    universe.iter().filter(|_| rng.next_u64() & 1 == 1).collect()
}
