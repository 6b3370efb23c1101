//! Ranking distributions, the forward oracle, and the recursive witness
//! construction.
//!
//! The forward direction is plain enumeration: a distribution on rankings
//! induces `BW_B(a, b)` as the mass of rankings placing `a` first and `b`
//! last among `B`. The reverse direction builds a function `F'` on two-sided
//! patterns from the polynomials and sums it over the splits of each full
//! ranking. Its index conventions admit several readings; each is exposed as
//! a [`Reading`], and a result is only accepted once it reproduces the input.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::poly::{all_polynomials, negative_polynomials, Certificate, PolynomialTable};
use crate::rational::{factorial, Rational};
use crate::rankings::{permutations, Pattern, Ranking, MAX_ENUMERATION};
use crate::subset::{Alt, Subset};
use crate::system::{offered_sets, ordered_pairs, BwSystem, Limits};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DistributionError {
    #[error("ranking {0:?} is not a permutation of 0..n")]
    BadRanking(Vec<Alt>),
    #[error("ranking {0:?} listed twice")]
    DuplicateRanking(Vec<Alt>),
    #[error("negative mass on {0:?}")]
    NegativeMass(Vec<Alt>),
    #[error("masses sum to {0}, not 1")]
    NotNormalized(String),
    #[error("{n} alternatives is outside 2..={max}", max = MAX_ENUMERATION)]
    Size { n: usize },
}

/// Exact probability mass on full rankings; absent rankings carry zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingDistribution {
    n: usize,
    mass: BTreeMap<Ranking, Rational>,
}

impl RankingDistribution {
    pub fn new<I>(n: usize, entries: I) -> Result<Self, DistributionError>
    where
        I: IntoIterator<Item = (Ranking, Rational)>,
    {
        if !(2..=MAX_ENUMERATION).contains(&n) {
            return Err(DistributionError::Size { n });
        }
        let mut mass = BTreeMap::new();
        let mut total = Rational::zero();
        for (r, p) in entries {
            if r.n() != n {
                return Err(DistributionError::BadRanking(r.order().to_vec()));
            }
            if p.is_negative() {
                return Err(DistributionError::NegativeMass(r.order().to_vec()));
            }
            total += &p;
            if mass.contains_key(&r) {
                return Err(DistributionError::DuplicateRanking(r.order().to_vec()));
            }
            if !p.is_zero() {
                mass.insert(r, p);
            } else {
                mass.entry(r).or_insert(p);
            }
        }
        if !total.is_one() {
            return Err(DistributionError::NotNormalized(format!("{}/{}", total.numer(), total.denom())));
        }
        mass.retain(|_, p| !p.is_zero());
        Ok(RankingDistribution { n, mass })
    }

    pub fn uniform(n: usize) -> Self {
        let all = Ranking::all(n);
        let p = Rational::new(1.into(), factorial(n));
        Self::new(n, all.into_iter().map(|r| (r, p.clone()))).expect("uniform distribution")
    }

    pub fn point_mass(ranking: Ranking) -> Self {
        let n = ranking.n();
        Self::new(n, [(ranking, Rational::one())]).expect("point mass")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mass(&self, ranking: &Ranking) -> Rational {
        self.mass.get(ranking).cloned().unwrap_or_else(Rational::zero)
    }

    /// Rankings with positive mass, in lexicographic order.
    pub fn support(&self) -> impl Iterator<Item = (&Ranking, &Rational)> {
        self.mass.iter()
    }

    pub fn support_len(&self) -> usize {
        self.mass.len()
    }
}

/// `P[S(a; B; b)]`: mass of rankings with `a` first and `b` last among `B`.
pub fn bw_from_distribution(dist: &RankingDistribution, subset: Subset, best: Alt, worst: Alt) -> Rational {
    assert!(best != worst && subset.contains(best) && subset.contains(worst));
    let pattern = Pattern::new(alloc::vec![best], subset, alloc::vec![worst]);
    dist.support()
        .filter(|(r, _)| pattern.matches_positions(&r.positions()))
        .fold(Rational::zero(), |acc, (_, p)| acc + p)
}

/// The system a distribution induces, by one scan of each supported ranking.
pub fn system_from_distribution(dist: &RankingDistribution) -> BwSystem {
    let n = dist.n();
    let mut acc: BTreeMap<(Subset, Alt, Alt), Rational> = offered_sets(n)
        .flat_map(|s| ordered_pairs(s).map(move |(a, b)| ((s, a, b), Rational::zero())))
        .collect();
    for (r, p) in dist.support() {
        for s in offered_sets(n) {
            let (a, b) = r.best_worst_in(s).expect("offered set has two members");
            *acc.get_mut(&(s, a, b)).expect("cell") += p;
        }
    }
    BwSystem::new_with_limits(n, acc.into_iter().map(|((s, a, b), p)| (s, a, b, p)), Limits::with_max(n))
        .expect("a distribution induces a valid system")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub subset: Subset,
    pub best: Alt,
    pub worst: Alt,
    pub expected: Rational,
    pub actual: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub dimension_mismatch: bool,
    pub mismatches: Vec<Mismatch>,
}

impl VerificationReport {
    pub fn is_exact(&self) -> bool {
        !self.dimension_mismatch && self.mismatches.is_empty()
    }
}

/// Compares every cell of `system` with what `dist` induces.
pub fn verify_reconstruction(system: &BwSystem, dist: &RankingDistribution) -> VerificationReport {
    if system.n() != dist.n() {
        return VerificationReport {
            dimension_mismatch: true,
            mismatches: Vec::new(),
        };
    }
    let induced = system_from_distribution(dist);
    let mismatches = system
        .cells()
        .filter_map(|(subset, best, worst, expected)| {
            let actual = induced.bw(subset, best, worst);
            (actual != expected).then(|| Mismatch {
                subset,
                best,
                worst,
                expected: expected.clone(),
                actual: actual.clone(),
            })
        })
        .collect();
    VerificationReport {
        dimension_mismatch: false,
        mismatches,
    }
}

/// Which elements the recursive step drops to find the parent pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParentRule {
    /// Drop the prefix end and the suffix start; the polynomial's context is
    /// every other listed element.
    DropInnerPair,
    /// As printed: additionally drop the last suffix element, from both the
    /// parent and the context.
    Printed,
}

/// What the normalizing sum ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DenominatorRule {
    /// Orderings of the context placed into the parent's prefix and suffix lengths.
    ParentSlots,
    /// Orderings of the context and every cut point.
    AllSplits,
}

/// Value of the two-element base case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BaseRule {
    /// `K_{ab,∅}`.
    Plain,
    /// `K_{ab,∅} / (n-2)!`, the scaling the sum identity implies at `B = ∅`.
    Factorial,
}

/// Value given to patterns with an empty prefix or suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OneSidedRule {
    Zero,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Reading {
    pub parent: ParentRule,
    pub denominator: DenominatorRule,
    pub base: BaseRule,
    pub one_sided: OneSidedRule,
}

impl Reading {
    /// The default: inner-pair parent, slot-preserving denominator, plain
    /// base case, one-sided patterns worth one.
    pub const R1: Reading = Reading {
        parent: ParentRule::DropInnerPair,
        denominator: DenominatorRule::ParentSlots,
        base: BaseRule::Plain,
        one_sided: OneSidedRule::Unit,
    };

    /// All sixteen readings, [`Reading::R1`] first.
    pub fn all() -> Vec<Reading> {
        let mut out = alloc::vec![Reading::R1];
        for parent in [ParentRule::DropInnerPair, ParentRule::Printed] {
            for denominator in [DenominatorRule::ParentSlots, DenominatorRule::AllSplits] {
                for base in [BaseRule::Plain, BaseRule::Factorial] {
                    for one_sided in [OneSidedRule::Zero, OneSidedRule::Unit] {
                        let r = Reading {
                            parent,
                            denominator,
                            base,
                            one_sided,
                        };
                        if r != Reading::R1 {
                            out.push(r);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Reading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parent = match self.parent {
            ParentRule::DropInnerPair => "inner-pair",
            ParentRule::Printed => "printed",
        };
        let den = match self.denominator {
            DenominatorRule::ParentSlots => "slots",
            DenominatorRule::AllSplits => "all-splits",
        };
        let base = match self.base {
            BaseRule::Plain => "plain",
            BaseRule::Factorial => "factorial",
        };
        let one = match self.one_sided {
            OneSidedRule::Zero => "zero",
            OneSidedRule::Unit => "unit",
        };
        write!(f, "{parent}/{den}/{base}/one-sided-{one}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error("K_({best},{worst}),{context:?} = {value} is negative", value = crate::rational::to_fraction_string(.value))]
    NotRepresentable {
        best: Alt,
        worst: Alt,
        context: Subset,
        value: Rational,
    },
    #[error("malformed pattern: {0}")]
    MalformedPattern(&'static str),
    #[error("{n} alternatives is outside 2..={max}", max = MAX_ENUMERATION)]
    Size { n: usize },
}

impl From<Certificate> for MeasureError {
    fn from(c: Certificate) -> Self {
        MeasureError::NotRepresentable {
            best: c.best,
            worst: c.worst,
            context: c.context,
            value: c.value,
        }
    }
}

/// How often the normalizing sum vanished.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ZeroDenominatorStats {
    pub zero_denominators: u64,
    /// Zero denominators whose numerator was not zero; these discard mass.
    pub nonzero_numerators: u64,
}

/// Memoized `F'` for one system and one reading.
#[derive(Debug, Clone)]
pub struct FPrimeTable {
    reading: Reading,
    polys: PolynomialTable,
    values: BTreeMap<(Vec<Alt>, Vec<Alt>), Rational>,
    stats: ZeroDenominatorStats,
}

impl FPrimeTable {
    pub fn new(system: &BwSystem, reading: Reading) -> Self {
        FPrimeTable {
            reading,
            polys: all_polynomials(system),
            values: BTreeMap::new(),
            stats: ZeroDenominatorStats::default(),
        }
    }

    pub fn reading(&self) -> Reading {
        self.reading
    }

    pub fn n(&self) -> usize {
        self.polys.n()
    }

    pub fn polynomials(&self) -> &PolynomialTable {
        &self.polys
    }

    pub fn stats(&self) -> ZeroDenominatorStats {
        self.stats
    }

    fn k(&self, best: Alt, worst: Alt, context: Subset) -> Result<Rational, MeasureError> {
        let value = self.polys.get(best, worst, context).expect("admissible context").clone();
        if value.is_negative() {
            return Err(MeasureError::NotRepresentable {
                best,
                worst,
                context,
                value,
            });
        }
        Ok(value)
    }

    /// `F'[S(prefix A suffix)]`.
    pub fn value(&mut self, prefix: &[Alt], suffix: &[Alt]) -> Result<Rational, MeasureError> {
        let n = self.n();
        let listed: Subset = prefix.iter().chain(suffix).copied().collect();
        if prefix.iter().chain(suffix).any(|&a| a >= n) || listed.len() != prefix.len() + suffix.len() {
            return Err(MeasureError::MalformedPattern("listed alternatives must be distinct members of A"));
        }
        self.eval(prefix, suffix)
    }

    fn eval(&mut self, prefix: &[Alt], suffix: &[Alt]) -> Result<Rational, MeasureError> {
        if prefix.is_empty() || suffix.is_empty() {
            return Ok(match self.reading.one_sided {
                OneSidedRule::Zero => Rational::zero(),
                OneSidedRule::Unit => Rational::one(),
            });
        }
        let key = (prefix.to_vec(), suffix.to_vec());
        if let Some(v) = self.values.get(&key) {
            return Ok(v.clone());
        }
        let n = self.n();
        let k = prefix.len() + suffix.len();
        let value = if k == 2 {
            let base = self.k(prefix[0], suffix[0], Subset::EMPTY)?;
            match self.reading.base {
                BaseRule::Plain => base,
                BaseRule::Factorial => base / Rational::from_integer(factorial(n - 2)),
            }
        } else {
            let (a, b) = (prefix[prefix.len() - 1], suffix[0]);
            let parent_prefix = &prefix[..prefix.len() - 1];
            let parent_suffix = match self.reading.parent {
                ParentRule::DropInnerPair => &suffix[1..],
                ParentRule::Printed => &suffix[1..suffix.len().max(2) - 1],
            };
            let context: Subset = parent_prefix.iter().chain(parent_suffix).copied().collect();
            let numerator = self.eval(parent_prefix, parent_suffix)? * self.k(a, b, context)?
                / Rational::from_integer(factorial(n - k));
            let mut denominator = Rational::zero();
            for order in permutations(&context.to_vec()) {
                match self.reading.denominator {
                    DenominatorRule::ParentSlots => {
                        let (p, s) = order.split_at(parent_prefix.len());
                        denominator += self.eval(p, s)?;
                    }
                    DenominatorRule::AllSplits => {
                        for cut in 0..=order.len() {
                            let (p, s) = order.split_at(cut);
                            denominator += self.eval(p, s)?;
                        }
                    }
                }
            }
            if denominator.is_zero() {
                self.stats.zero_denominators += 1;
                if !numerator.is_zero() {
                    self.stats.nonzero_numerators += 1;
                }
                Rational::zero()
            } else {
                numerator / denominator
            }
        };
        self.values.insert(key, value.clone());
        Ok(value)
    }

    /// Left side of the sum identity: `F'[S(π1 a A b π2)]` summed over every
    /// ordering of `context` and every cut of it.
    pub fn split_sum(&mut self, best: Alt, worst: Alt, context: Subset) -> Result<Rational, MeasureError> {
        let mut total = Rational::zero();
        for order in permutations(&context.to_vec()) {
            for cut in 0..=order.len() {
                let mut prefix = order[..cut].to_vec();
                prefix.push(best);
                let mut suffix = alloc::vec![worst];
                suffix.extend_from_slice(&order[cut..]);
                total += self.eval(&prefix, &suffix)?;
            }
        }
        Ok(total)
    }

    /// Checks `split_sum(a, b, B) = K_{ab,B} / (n-k)!` with `k = |B| + 2`.
    pub fn lemma_b(&mut self, best: Alt, worst: Alt, context: Subset) -> Result<bool, MeasureError> {
        let n = self.n();
        let k = context.len() + 2;
        let rhs = self.k(best, worst, context)? / Rational::from_integer(factorial(n - k));
        Ok(self.split_sum(best, worst, context)? == rhs)
    }

    /// Mass of a full ranking: `F'` summed over its `n - 1` cuts.
    pub fn ranking_mass(&mut self, ranking: &Ranking) -> Result<Rational, MeasureError> {
        let order = ranking.order();
        let mut total = Rational::zero();
        for cut in 1..order.len() {
            total += self.eval(&order[..cut], &order[cut..])?;
        }
        Ok(total)
    }
}

/// `F'` under the default reading.
pub fn f_prime(system: &BwSystem, prefix: &[Alt], suffix: &[Alt]) -> Result<Rational, MeasureError> {
    FPrimeTable::new(system, Reading::R1).value(prefix, suffix)
}

/// `lemma_b` under the default reading.
pub fn lemma_b_check(system: &BwSystem, best: Alt, worst: Alt, context: Subset) -> Result<bool, MeasureError> {
    let n = system.n();
    if best == worst || best >= n || worst >= n || !context.fits(n) || context.contains(best) || context.contains(worst)
    {
        return Err(MeasureError::MalformedPattern("best and worst must be distinct and outside the context"));
    }
    FPrimeTable::new(system, Reading::R1).lemma_b(best, worst, context)
}

/// Masses assigned by one reading, before any acceptance test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawConstruction {
    pub reading: Reading,
    pub masses: Vec<(Ranking, Rational)>,
    pub total: Rational,
    pub stats: ZeroDenominatorStats,
}

impl RawConstruction {
    pub fn is_nonnegative(&self) -> bool {
        self.masses.iter().all(|(_, p)| !p.is_negative())
    }
}

fn ensure_buildable(system: &BwSystem) -> Result<(), MeasureError> {
    let n = system.n();
    if n > MAX_ENUMERATION {
        return Err(MeasureError::Size { n });
    }
    if let Some(c) = negative_polynomials(&all_polynomials(system), &Rational::zero()).into_iter().next() {
        return Err(c.into());
    }
    Ok(())
}

/// Runs one reading over all `n!` rankings.
pub fn raw_construction(system: &BwSystem, reading: Reading) -> Result<RawConstruction, MeasureError> {
    ensure_buildable(system)?;
    let mut table = FPrimeTable::new(system, reading);
    let mut masses = Vec::new();
    let mut total = Rational::zero();
    for r in Ranking::all(system.n()) {
        let p = table.ranking_mass(&r)?;
        total += &p;
        masses.push((r, p));
    }
    Ok(RawConstruction {
        reading,
        masses,
        total,
        stats: table.stats(),
    })
}

/// Outcome of one reading on one system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attempt {
    pub reading: Reading,
    pub total: Rational,
    pub nonnegative: bool,
    /// Cells the masses fail to reproduce; `None` when they could not be
    /// read as a distribution at all.
    pub mismatches: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("no recursion reading reproduces the system ({} tried)", attempts.len())]
    ConstructionInconsistent { attempts: Vec<Attempt> },
    #[error("witness misses {mismatches} cells")]
    Unverified { mismatches: usize },
}

fn attempt(system: &BwSystem, reading: Reading) -> Result<(Attempt, Option<RankingDistribution>), MeasureError> {
    let raw = raw_construction(system, reading)?;
    let nonnegative = raw.is_nonnegative();
    let mut out = Attempt {
        reading,
        total: raw.total.clone(),
        nonnegative,
        mismatches: None,
    };
    if !nonnegative || !raw.total.is_one() {
        return Ok((out, None));
    }
    let dist = RankingDistribution::new(system.n(), raw.masses).expect("checked nonnegative and normalized");
    let report = verify_reconstruction(system, &dist);
    out.mismatches = Some(report.mismatches.len());
    Ok((out, report.is_exact().then_some(dist)))
}

/// Witness under a single reading, accepted only if it is a distribution that
/// reproduces every cell.
pub fn build_distribution_with(system: &BwSystem, reading: Reading) -> Result<RankingDistribution, BuildError> {
    match attempt(system, reading)? {
        (_, Some(dist)) => Ok(dist),
        (a, None) => Err(BuildError::ConstructionInconsistent { attempts: alloc::vec![a] }),
    }
}

/// Tries [`Reading::R1`], then every other reading, and returns the first
/// witness that reproduces the system.
pub fn build_distribution(system: &BwSystem) -> Result<RankingDistribution, BuildError> {
    let mut attempts = Vec::new();
    for reading in Reading::all() {
        match attempt(system, reading)? {
            (_, Some(dist)) => return Ok(dist),
            (a, None) => attempts.push(a),
        }
    }
    Err(BuildError::ConstructionInconsistent { attempts })
}

/// How one reading fared on a suite of representable systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadingVerdict {
    pub reading: Reading,
    pub systems: usize,
    pub normalized: usize,
    pub lemma_b: usize,
    pub reconstructed: usize,
    /// Zero denominators met with a nonzero numerator, over the suite.
    pub discarded_mass_events: u64,
}

impl ReadingVerdict {
    pub fn passes(&self) -> bool {
        self.normalized == self.systems && self.lemma_b == self.systems && self.reconstructed == self.systems
    }
}

/// Runs every reading through normalization, the sum identity on every
/// admissible `(a, b, B)`, and reconstruction.
pub fn adjudicate(systems: &[BwSystem]) -> Result<Vec<ReadingVerdict>, MeasureError> {
    let mut out = Vec::new();
    for reading in Reading::all() {
        let mut v = ReadingVerdict {
            reading,
            systems: systems.len(),
            normalized: 0,
            lemma_b: 0,
            reconstructed: 0,
            discarded_mass_events: 0,
        };
        for system in systems {
            let (a, _) = attempt(system, reading)?;
            if a.nonnegative && a.total.is_one() {
                v.normalized += 1;
            }
            if a.mismatches == Some(0) {
                v.reconstructed += 1;
            }
            let mut table = FPrimeTable::new(system, reading);
            let mut all_hold = true;
            let n = system.n();
            'outer: for best in 0..n {
                for worst in (0..n).filter(|&w| w != best) {
                    for context in Subset::full(n).without(best).without(worst).subsets() {
                        if !table.lemma_b(best, worst, context)? {
                            all_hold = false;
                            break 'outer;
                        }
                    }
                }
            }
            if all_hold {
                v.lemma_b += 1;
            }
            v.discarded_mass_events += table.stats().nonzero_numerators;
        }
        out.push(v);
    }
    Ok(out)
}

/// Readings that pass every check on `systems`.
pub fn passing_readings(systems: &[BwSystem]) -> Result<Vec<Reading>, MeasureError> {
    Ok(adjudicate(systems)?
        .into_iter()
        .filter(ReadingVerdict::passes)
        .map(|v| v.reading)
        .collect())
}
