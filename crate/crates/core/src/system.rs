//! Systems of best-worst choice probabilities.
//!
//! A [`BwSystem`] stores, for every offered set `B` with `|B| >= 2`, the exact
//! probability `BW_B(a, b)` that `a` is picked as best and `b` as worst. The
//! cells of one offered set sum to one.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::rational::{int, is_probability, to_fraction_string, Rational};
use crate::subset::{Alt, Subset};

/// Default ceiling on the number of alternatives (2^n tables, n! rankings).
pub const DEFAULT_MAX_ALTERNATIVES: usize = 10;
/// Storage is dense over all 2^n subsets; beyond this it stops being practical.
pub const HARD_MAX_ALTERNATIVES: usize = 12;

/// Size guard applied when a system or dataset is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_alternatives: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_alternatives: DEFAULT_MAX_ALTERNATIVES,
        }
    }
}

impl Limits {
    /// Raises the cap up to [`HARD_MAX_ALTERNATIVES`]. Callers are expected to
    /// warn the user when this exceeds the default.
    pub fn with_max(max_alternatives: usize) -> Self {
        Limits {
            max_alternatives: max_alternatives.min(HARD_MAX_ALTERNATIVES),
        }
    }

    pub fn is_override(&self) -> bool {
        self.max_alternatives > DEFAULT_MAX_ALTERNATIVES
    }

    pub fn check(&self, n: usize) -> Result<(), SystemError> {
        if n < 2 {
            Err(SystemError::TooFewAlternatives { n })
        } else if n > self.max_alternatives {
            Err(SystemError::TooManyAlternatives {
                n,
                cap: self.max_alternatives,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("a system needs at least two alternatives, got {n}")]
    TooFewAlternatives { n: usize },
    #[error("{n} alternatives exceeds the configured cap of {cap}")]
    TooManyAlternatives { n: usize, cap: usize },
    #[error("cell BW_{subset:?}({best}, {worst}) is not admissible")]
    InvalidCell { subset: Subset, best: Alt, worst: Alt },
    #[error("cell BW_{subset:?}({best}, {worst}) is missing")]
    MissingCell { subset: Subset, best: Alt, worst: Alt },
    #[error("cell BW_{subset:?}({best}, {worst}) is given more than once")]
    DuplicateCell { subset: Subset, best: Alt, worst: Alt },
    #[error("cell BW_{subset:?}({best}, {worst}) = {} is outside [0, 1]", to_fraction_string(value))]
    OutOfRangeProbability {
        subset: Subset,
        best: Alt,
        worst: Alt,
        value: Rational,
    },
    #[error("cells of {subset:?} sum to {}, not 1", to_fraction_string(sum))]
    NormalizationViolation { subset: Subset, sum: Rational },
}

/// Exact best-worst probabilities for every offered set of size two or more.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BwSystem {
    n: usize,
    cells: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub subset: Subset,
    /// Pair-sum minus one.
    pub deviation: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellRef {
    pub subset: Subset,
    pub best: Alt,
    pub worst: Alt,
    pub value: Rational,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub normalization: Vec<Deviation>,
    pub out_of_range: Vec<CellRef>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.normalization.is_empty() && self.out_of_range.is_empty()
    }
}

impl BwSystem {
    /// Builds and fully validates a system: every admissible cell supplied
    /// once, every value in `[0, 1]`, every offered set summing to one.
    pub fn new<I>(n: usize, entries: I) -> Result<Self, SystemError>
    where
        I: IntoIterator<Item = (Subset, Alt, Alt, Rational)>,
    {
        Self::new_with_limits(n, entries, Limits::default())
    }

    pub fn new_with_limits<I>(n: usize, entries: I, limits: Limits) -> Result<Self, SystemError>
    where
        I: IntoIterator<Item = (Subset, Alt, Alt, Rational)>,
    {
        let system = Self::assemble_with_limits(n, entries, limits)?;
        if let Some(d) = system.validate().normalization.into_iter().next() {
            return Err(SystemError::NormalizationViolation {
                subset: d.subset,
                sum: d.deviation + Rational::one(),
            });
        }
        Ok(system)
    }

    /// Like [`BwSystem::new`] but leaves normalization to [`BwSystem::validate`].
    pub fn assemble<I>(n: usize, entries: I) -> Result<Self, SystemError>
    where
        I: IntoIterator<Item = (Subset, Alt, Alt, Rational)>,
    {
        Self::assemble_with_limits(n, entries, Limits::default())
    }

    pub fn assemble_with_limits<I>(n: usize, entries: I, limits: Limits) -> Result<Self, SystemError>
    where
        I: IntoIterator<Item = (Subset, Alt, Alt, Rational)>,
    {
        limits.check(n)?;
        let mut cells = vec![Rational::zero(); (1usize << n) * n * n];
        let mut seen = vec![false; cells.len()];
        for (subset, best, worst, value) in entries {
            if !admissible(n, subset, best, worst) {
                return Err(SystemError::InvalidCell { subset, best, worst });
            }
            let i = index(n, subset, best, worst);
            if seen[i] {
                return Err(SystemError::DuplicateCell { subset, best, worst });
            }
            if !is_probability(&value) {
                return Err(SystemError::OutOfRangeProbability {
                    subset,
                    best,
                    worst,
                    value,
                });
            }
            seen[i] = true;
            cells[i] = value;
        }
        for subset in offered_sets(n) {
            for (best, worst) in ordered_pairs(subset) {
                if !seen[index(n, subset, best, worst)] {
                    return Err(SystemError::MissingCell { subset, best, worst });
                }
            }
        }
        Ok(BwSystem { n, cells })
    }

    /// Every cell `1 / (j (j - 1))`: the system induced by uniformly random rankings.
    pub fn uniform(n: usize) -> Self {
        let entries = offered_sets(n).flat_map(|subset| {
            let j = subset.len() as i64;
            let p = Rational::new(1.into(), (j * (j - 1)).into());
            ordered_pairs(subset).map(move |(a, b)| (subset, a, b, p.clone()))
        });
        Self::new_with_limits(n, entries, Limits::with_max(n.max(2)))
            .expect("uniform system is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The whole alternative set `A`.
    pub fn universe(&self) -> Subset {
        Subset::full(self.n)
    }

    /// `BW_subset(best, worst)`. Panics on an inadmissible cell.
    pub fn bw(&self, subset: Subset, best: Alt, worst: Alt) -> &Rational {
        assert!(
            admissible(self.n, subset, best, worst),
            "BW_{subset:?}({best}, {worst}) is not a cell of an n={} system",
            self.n
        );
        &self.cells[index(self.n, subset, best, worst)]
    }

    pub fn get(&self, subset: Subset, best: Alt, worst: Alt) -> Option<&Rational> {
        admissible(self.n, subset, best, worst).then(|| &self.cells[index(self.n, subset, best, worst)])
    }

    /// Returns a copy with one cell replaced, without re-validating.
    #[must_use]
    pub fn with_cell(&self, subset: Subset, best: Alt, worst: Alt, value: Rational) -> Self {
        assert!(admissible(self.n, subset, best, worst));
        let mut next = self.clone();
        next.cells[index(self.n, subset, best, worst)] = value;
        next
    }

    /// All cells in (subset bits, best, worst) order.
    pub fn cells(&self) -> impl Iterator<Item = (Subset, Alt, Alt, &Rational)> + '_ {
        offered_sets(self.n).flat_map(move |subset| {
            ordered_pairs(subset).map(move |(a, b)| (subset, a, b, self.bw(subset, a, b)))
        })
    }

    /// Lists every offered set whose cells do not sum to one, and every cell
    /// outside `[0, 1]`.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for subset in offered_sets(self.n) {
            let mut sum = Rational::zero();
            for (a, b) in ordered_pairs(subset) {
                let p = self.bw(subset, a, b);
                if !is_probability(p) {
                    report.out_of_range.push(CellRef {
                        subset,
                        best: a,
                        worst: b,
                        value: p.clone(),
                    });
                }
                sum += p;
            }
            if !sum.is_one() {
                report.normalization.push(Deviation {
                    subset,
                    deviation: sum - Rational::one(),
                });
            }
        }
        report
    }

    /// `BW_{a,b}(a, b) + BW_{a,b}(b, a) = 1` on every two-element set.
    pub fn pair_complement_check(&self) -> bool {
        offered_sets(self.n)
            .filter(|s| s.len() == 2)
            .all(|s| {
                let v = s.to_vec();
                (self.bw(s, v[0], v[1]) + self.bw(s, v[1], v[0])).is_one()
            })
    }
}

fn admissible(n: usize, subset: Subset, best: Alt, worst: Alt) -> bool {
    best != worst && best < n && worst < n && subset.fits(n) && subset.contains(best) && subset.contains(worst)
}

fn index(n: usize, subset: Subset, best: Alt, worst: Alt) -> usize {
    (subset.bits() as usize * n + best) * n + worst
}

/// All subsets of `{0..n}` with at least two members, in increasing bit order.
pub fn offered_sets(n: usize) -> impl Iterator<Item = Subset> + Clone {
    Subset::full(n).subsets().filter(|s| s.len() >= 2)
}

/// Ordered pairs of distinct members, lexicographic.
pub fn ordered_pairs(subset: Subset) -> impl Iterator<Item = (Alt, Alt)> + Clone {
    subset
        .iter()
        .flat_map(move |a| subset.iter().filter(move |&b| b != a).map(move |b| (a, b)))
}

/// One tally of best-worst observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRecord {
    pub subset: Subset,
    pub best: Alt,
    pub worst: Alt,
    pub count: u64,
}

/// Observed best-worst choice counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceCountDataset {
    pub n: usize,
    pub records: Vec<CountRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IngestError {
    #[error("{subset:?} appears in the data with zero total count and no smoothing")]
    EmptySubsetNoSmoothing { subset: Subset },
    #[error("record BW_{subset:?}({best}, {worst}) does not fit an n={n} dataset")]
    InconsistentDimensions {
        n: usize,
        subset: Subset,
        best: Alt,
        worst: Alt,
    },
    #[error("smoothing must be non-negative")]
    NegativeSmoothing,
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Result of turning counts into a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ingested {
    pub system: BwSystem,
    /// Offered sets with no record at all; filled uniformly.
    pub unobserved: Vec<Subset>,
}

/// Plug-in relative frequencies with optional additive smoothing:
/// `(count + s) / (total + s |B| (|B| - 1))`.
pub fn from_counts(data: &ChoiceCountDataset, smoothing: Option<&Rational>) -> Result<Ingested, IngestError> {
    from_counts_with_limits(data, smoothing, Limits::default())
}

pub fn from_counts_with_limits(
    data: &ChoiceCountDataset,
    smoothing: Option<&Rational>,
    limits: Limits,
) -> Result<Ingested, IngestError> {
    let n = data.n;
    limits.check(n)?;
    let smoothing = smoothing.cloned().unwrap_or_else(Rational::zero);
    if smoothing.is_negative() {
        return Err(IngestError::NegativeSmoothing);
    }
    let width = 1usize << n;
    let mut counts = vec![0u64; width * n * n];
    let mut present = vec![false; width];
    for r in &data.records {
        if !admissible(n, r.subset, r.best, r.worst) {
            return Err(IngestError::InconsistentDimensions {
                n,
                subset: r.subset,
                best: r.best,
                worst: r.worst,
            });
        }
        present[r.subset.bits() as usize] = true;
        counts[index(n, r.subset, r.best, r.worst)] += r.count;
    }

    let mut entries = Vec::new();
    let mut unobserved = Vec::new();
    for subset in offered_sets(n) {
        let j = subset.len() as i64;
        let cells = int(j * (j - 1));
        if !present[subset.bits() as usize] {
            unobserved.push(subset);
            let p = Rational::one() / &cells;
            entries.extend(ordered_pairs(subset).map(|(a, b)| (subset, a, b, p.clone())));
            continue;
        }
        let total: u64 = ordered_pairs(subset).map(|(a, b)| counts[index(n, subset, a, b)]).sum();
        let denom = int(total as i64) + &smoothing * &cells;
        if denom.is_zero() {
            return Err(IngestError::EmptySubsetNoSmoothing { subset });
        }
        for (a, b) in ordered_pairs(subset) {
            let c = Rational::from_integer(counts[index(n, subset, a, b)].into());
            entries.push((subset, a, b, (c + &smoothing) / &denom));
        }
    }
    let system = BwSystem::new_with_limits(n, entries, limits)?;
    Ok(Ingested { system, unobserved })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn uniform_entries(n: usize) -> Vec<(Subset, Alt, Alt, Rational)> {
        BwSystem::uniform(n).cells().map(|(s, a, b, p)| (s, a, b, p.clone())).collect()
    }

    #[test]
    fn two_alternative_point_mass_is_valid() {
        let ab = Subset::pair(0, 1);
        let s = BwSystem::new(2, [(ab, 0, 1, int(1)), (ab, 1, 0, int(0))]).unwrap();
        assert!(s.validate().is_valid());
        assert!(s.pair_complement_check());
        assert_eq!(*s.bw(ab, 0, 1), int(1));
    }

    #[test]
    fn uniform_three_is_valid() {
        let s = BwSystem::new(3, uniform_entries(3)).unwrap();
        assert_eq!(*s.bw(Subset::full(3), 2, 0), ratio(1, 6));
        assert_eq!(*s.bw(Subset::pair(0, 2), 2, 0), ratio(1, 2));
        assert!(s.pair_complement_check());
    }

    #[test]
    fn pair_sum_above_one_is_rejected() {
        let ab = Subset::pair(0, 1);
        let entries = uniform_entries(3).into_iter().map(|(s, a, b, p)| {
            if s == ab {
                (s, a, b, ratio(3, 5))
            } else {
                (s, a, b, p)
            }
        });
        match BwSystem::new(3, entries) {
            Err(SystemError::NormalizationViolation { subset, sum }) => {
                assert_eq!(subset, ab);
                assert_eq!(sum, ratio(6, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_duplicate_and_range_errors() {
        let mut entries = uniform_entries(3);
        let dropped = entries.pop().unwrap();
        assert!(matches!(BwSystem::new(3, entries.clone()), Err(SystemError::MissingCell { .. })));
        entries.push(dropped.clone());
        entries.push(dropped);
        assert!(matches!(BwSystem::new(3, entries), Err(SystemError::DuplicateCell { .. })));

        let bad = uniform_entries(3).into_iter().map(|(s, a, b, p)| {
            if s == Subset::pair(1, 2) && a == 1 {
                (s, a, b, ratio(3, 2))
            } else {
                (s, a, b, p)
            }
        });
        assert!(matches!(
            BwSystem::new(3, bad),
            Err(SystemError::OutOfRangeProbability { .. })
        ));
        let stray = [(Subset::full(3), 0, 0, int(0))];
        assert!(matches!(BwSystem::assemble(3, stray), Err(SystemError::InvalidCell { .. })));
    }

    #[test]
    fn size_limits() {
        assert!(matches!(BwSystem::assemble(1, []), Err(SystemError::TooFewAlternatives { n: 1 })));
        assert!(matches!(
            BwSystem::assemble(11, []),
            Err(SystemError::TooManyAlternatives { n: 11, cap: 10 })
        ));
        assert!(Limits::with_max(11).is_override());
        assert_eq!(Limits::with_max(40).max_alternatives, HARD_MAX_ALTERNATIVES);
    }

    #[test]
    fn validate_reports_exact_deviation() {
        let s = BwSystem::uniform(4);
        assert!(s.validate().is_valid());
        let abc: Subset = [0, 1, 2].into_iter().collect();
        let bumped = s.with_cell(abc, 0, 2, ratio(1, 6) + ratio(1, 100));
        let report = bumped.validate();
        assert_eq!(
            report.normalization,
            [Deviation {
                subset: abc,
                deviation: ratio(1, 100)
            }]
        );
        assert!(report.out_of_range.is_empty());
    }

    #[test]
    fn pair_complement_detects_deficit() {
        let ab = Subset::pair(0, 1);
        let s = BwSystem::uniform(3).with_cell(ab, 0, 1, ratio(2, 5)).with_cell(ab, 1, 0, ratio(2, 5));
        assert!(!s.pair_complement_check());
        assert_eq!(s.validate().normalization.len(), 1);
    }

    fn record(subset: Subset, best: Alt, worst: Alt, count: u64) -> CountRecord {
        CountRecord {
            subset,
            best,
            worst,
            count,
        }
    }

    #[test]
    fn counts_become_relative_frequencies() {
        let b = Subset::full(3);
        let mut records = vec![record(b, 0, 2, 2), record(b, 0, 1, 1)];
        for (x, y) in ordered_pairs(b) {
            if (x, y) != (0, 2) && (x, y) != (0, 1) {
                records.push(record(b, x, y, 0));
            }
        }
        let data = ChoiceCountDataset { n: 3, records };
        let out = from_counts(&data, None).unwrap();
        assert_eq!(*out.system.bw(b, 0, 2), ratio(2, 3));
        assert_eq!(*out.system.bw(b, 0, 1), ratio(1, 3));
        assert_eq!(*out.system.bw(b, 1, 0), int(0));
        // the three pairs never appear: filled uniformly and flagged
        assert_eq!(out.unobserved.len(), 3);
        assert_eq!(*out.system.bw(Subset::pair(0, 1), 1, 0), ratio(1, 2));
    }

    #[test]
    fn equal_counts_give_uniform_system() {
        let records = BwSystem::uniform(4)
            .cells()
            .map(|(s, a, b, _)| record(s, a, b, 1))
            .collect();
        let out = from_counts(&ChoiceCountDataset { n: 4, records }, None).unwrap();
        assert_eq!(out.system, BwSystem::uniform(4));
        assert!(out.unobserved.is_empty());
    }

    #[test]
    fn empty_dataset_with_smoothing_is_uniform_and_flagged() {
        let data = ChoiceCountDataset { n: 4, records: vec![] };
        let out = from_counts(&data, Some(&int(1))).unwrap();
        assert_eq!(out.system, BwSystem::uniform(4));
        assert_eq!(out.unobserved.len(), 11);
    }

    #[test]
    fn observed_empty_subset_needs_smoothing() {
        let ab = Subset::pair(0, 1);
        let data = ChoiceCountDataset {
            n: 2,
            records: vec![record(ab, 0, 1, 0)],
        };
        assert_eq!(
            from_counts(&data, None),
            Err(IngestError::EmptySubsetNoSmoothing { subset: ab })
        );
        let out = from_counts(&data, Some(&ratio(1, 2))).unwrap();
        assert_eq!(*out.system.bw(ab, 0, 1), ratio(1, 2));

        let bad = ChoiceCountDataset {
            n: 2,
            records: vec![record(Subset::pair(0, 2), 0, 2, 1)],
        };
        assert!(matches!(
            from_counts(&bad, None),
            Err(IngestError::InconsistentDimensions { .. })
        ));
        assert_eq!(from_counts(&data, Some(&int(-1))), Err(IngestError::NegativeSmoothing));
    }
}
