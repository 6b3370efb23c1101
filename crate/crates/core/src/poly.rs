//! Best-worst Block-Marschak polynomials and the representability test.
//!
//! `K_{ab,B} = sum over C ⊆ B of (-1)^{|B|-|C|} BW_{A∖C}(a, b)`, defined for
//! `a != b` outside `B`. A system has a random utility representation exactly
//! when the question "is every K nonnegative" is answered yes, so the sign test
//! here is the verdict.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::measure::{build_distribution, verify_reconstruction, BuildError, RankingDistribution};
use crate::rational::Rational;
use crate::subset::{Alt, Subset};
use crate::system::BwSystem;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("K_({best},{worst}),{context:?} is undefined for n={n}")]
    InvalidContext {
        n: usize,
        best: Alt,
        worst: Alt,
        context: Subset,
    },
    #[error("inequality needs best and worst inside {base:?}, and family members inside the alternative set")]
    InvalidFamily { base: Subset },
    #[error("families of more than {max} nonempty sets are not evaluated")]
    FamilyTooLarge { max: usize },
}

/// Largest number of nonempty family members `falmagne_inequality` expands.
pub const MAX_FAMILY: usize = 16;

fn context_ok(n: usize, best: Alt, worst: Alt, context: Subset) -> bool {
    best != worst && best < n && worst < n && context.fits(n) && !context.contains(best) && !context.contains(worst)
}

fn invalid(n: usize, best: Alt, worst: Alt, context: Subset) -> PolyError {
    PolyError::InvalidContext {
        n,
        best,
        worst,
        context,
    }
}

/// Direct alternating sum over the subsets of `context`.
pub fn bm_polynomial(system: &BwSystem, best: Alt, worst: Alt, context: Subset) -> Result<Rational, PolyError> {
    let n = system.n();
    if !context_ok(n, best, worst, context) {
        return Err(invalid(n, best, worst, context));
    }
    let universe = system.universe();
    let mut total = Rational::zero();
    for c in context.subsets() {
        let term = system.bw(universe.difference(c), best, worst);
        if (context.len() - c.len()).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// Every `K_{ab,B}` of one system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialTable {
    n: usize,
    values: Vec<Rational>,
}

impl PolynomialTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, best: Alt, worst: Alt, context: Subset) -> Option<&Rational> {
        context_ok(self.n, best, worst, context).then(|| &self.values[slot(self.n, best, worst, context)])
    }

    /// Entries ordered by best, then worst, then context bits.
    pub fn iter(&self) -> impl Iterator<Item = (Alt, Alt, Subset, &Rational)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |a| {
            (0..n).filter(move |&b| b != a).flat_map(move |b| {
                Subset::full(n)
                    .without(a)
                    .without(b)
                    .subsets()
                    .map(move |c| (a, b, c, &self.values[slot(n, a, b, c)]))
            })
        })
    }

    pub fn len(&self) -> usize {
        let n = self.n;
        (n * (n - 1)) << (n - 2)
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn slot(n: usize, best: Alt, worst: Alt, context: Subset) -> usize {
    (context.bits() as usize * n + best) * n + worst
}

/// Builds the table by the recurrence `K_{ab,B} = BW_{A∖B}(a,b) - sum of K_{ab,C}`
/// over proper subsets `C` of `B`, visiting contexts in increasing bit order
/// so every proper subset is ready first.
pub fn all_polynomials(system: &BwSystem) -> PolynomialTable {
    let n = system.n();
    let universe = system.universe();
    let mut values = vec![Rational::zero(); (1usize << n) * n * n];
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            for context in universe.without(a).without(b).subsets() {
                let mut k = system.bw(universe.difference(context), a, b).clone();
                for c in context.subsets().filter(|&c| c != context) {
                    k -= &values[slot(n, a, b, c)];
                }
                values[slot(n, a, b, context)] = k;
            }
        }
    }
    PolynomialTable { n, values }
}

/// `BW_{A∖B}(a, b)` recovered as the sum of `K_{ab,C}` over `C ⊆ B`.
pub fn moebius_reconstruct(table: &PolynomialTable, best: Alt, worst: Alt, context: Subset) -> Result<Rational, PolyError> {
    if !context_ok(table.n, best, worst, context) {
        return Err(invalid(table.n, best, worst, context));
    }
    Ok(context
        .subsets()
        .map(|c| &table.values[slot(table.n, best, worst, c)])
        .fold(Rational::zero(), |acc, k| acc + k))
}

/// The alternating sum `sum over index sets I of (-1)^{|I|} BW_{B0 ∪ B(I)}(a, b)`
/// where `B(I)` is the union of the chosen family members. Empty members are
/// skipped, so a family of only empty sets gives `BW_{B0}(a, b)`.
pub fn falmagne_inequality(
    system: &BwSystem,
    best: Alt,
    worst: Alt,
    base: Subset,
    family: &[Subset],
) -> Result<Rational, PolyError> {
    let n = system.n();
    if best == worst || !base.fits(n) || !base.contains(best) || !base.contains(worst) {
        return Err(PolyError::InvalidFamily { base });
    }
    if family.iter().any(|f| !f.fits(n)) {
        return Err(PolyError::InvalidFamily { base });
    }
    let members: Vec<Subset> = family.iter().copied().filter(|f| !f.is_empty()).collect();
    if members.len() > MAX_FAMILY {
        return Err(PolyError::FamilyTooLarge { max: MAX_FAMILY });
    }
    let mut total = Rational::zero();
    for pick in 0u32..(1 << members.len()) {
        let chosen = Subset::from_bits(pick);
        let offered = chosen.iter().fold(base, |acc, i| acc.union(members[i]));
        let term = system.bw(offered, best, worst);
        if chosen.len().is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Representable,
    NotRepresentable,
}

/// A negative polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub best: Alt,
    pub worst: Alt,
    pub context: Subset,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOptions {
    pub construct_witness: bool,
    /// Values in `[-tolerance, 0)` count as nonnegative. Nonzero only for data
    /// that went through floating point; the report is then marked approximate.
    pub tolerance: Rational,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            construct_witness: false,
            tolerance: Rational::zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentabilityReport {
    pub verdict: Verdict,
    /// Most negative first; ties by best, worst, then context members.
    pub negatives: Vec<Certificate>,
    pub witness: Option<RankingDistribution>,
    pub approximate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("negative tolerance")]
    NegativeTolerance,
    #[error("nonnegative polynomials but no verified witness: {0}")]
    WitnessConstructionFailed(BuildError),
}

/// Orders certificates by value, then lexicographically by (best, worst, context).
pub fn certificate_order(x: &Certificate, y: &Certificate) -> Ordering {
    x.value
        .cmp(&y.value)
        .then(x.best.cmp(&y.best))
        .then(x.worst.cmp(&y.worst))
        .then(x.context.lex_cmp(y.context))
}

/// Every certificate below `-tolerance`, sorted by [`certificate_order`].
pub fn negative_polynomials(table: &PolynomialTable, tolerance: &Rational) -> Vec<Certificate> {
    let floor = -tolerance;
    let mut out: Vec<Certificate> = table
        .iter()
        .filter(|(_, _, _, k)| **k < floor)
        .map(|(best, worst, context, k)| Certificate {
            best,
            worst,
            context,
            value: k.clone(),
        })
        .collect();
    out.sort_by(certificate_order);
    out
}

pub fn check_representable(system: &BwSystem, options: &CheckOptions) -> Result<RepresentabilityReport, CheckError> {
    if options.tolerance.is_negative() {
        return Err(CheckError::NegativeTolerance);
    }
    let negatives = negative_polynomials(&all_polynomials(system), &options.tolerance);
    let verdict = if negatives.is_empty() {
        Verdict::Representable
    } else {
        Verdict::NotRepresentable
    };
    let witness = if verdict == Verdict::Representable && options.construct_witness {
        let dist = build_distribution(system).map_err(CheckError::WitnessConstructionFailed)?;
        let report = verify_reconstruction(system, &dist);
        if !report.is_exact() {
            return Err(CheckError::WitnessConstructionFailed(BuildError::Unverified {
                mismatches: report.mismatches.len(),
            }));
        }
        Some(dist)
    } else {
        None
    };
    Ok(RepresentabilityReport {
        verdict,
        negatives,
        witness,
        approximate: !options.tolerance.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn negk3() -> BwSystem {
        let s = BwSystem::uniform(3);
        s.with_cell(Subset::pair(1, 2), 1, 2, int(0)).with_cell(Subset::pair(1, 2), 2, 1, int(1))
    }

    #[test]
    fn empty_context_is_full_set_cell() {
        let s = negk3();
        for (_, a, b, p) in s.cells().filter(|c| c.0 == Subset::full(3)) {
            assert_eq!(bm_polynomial(&s, a, b, Subset::EMPTY).unwrap(), *p);
        }
    }

    #[test]
    fn uniform_four_single_context() {
        let s = BwSystem::uniform(4);
        assert_eq!(bm_polynomial(&s, 0, 1, Subset::singleton(2)).unwrap(), ratio(1, 12));
    }

    #[test]
    fn negative_k_example() {
        let s = negk3();
        assert_eq!(bm_polynomial(&s, 1, 2, Subset::singleton(0)).unwrap(), ratio(-1, 6));
        let report = check_representable(&s, &CheckOptions::default()).unwrap();
        assert_eq!(report.verdict, Verdict::NotRepresentable);
        assert_eq!(
            report.negatives[0],
            Certificate {
                best: 1,
                worst: 2,
                context: Subset::singleton(0),
                value: ratio(-1, 6)
            }
        );
        assert!(report.witness.is_none());
    }

    #[test]
    fn invalid_contexts() {
        let s = BwSystem::uniform(3);
        assert!(bm_polynomial(&s, 0, 1, Subset::singleton(0)).is_err());
        assert!(bm_polynomial(&s, 0, 0, Subset::EMPTY).is_err());
        assert!(bm_polynomial(&s, 0, 3, Subset::EMPTY).is_err());
        assert!(bm_polynomial(&s, 0, 1, Subset::singleton(5)).is_err());
    }

    #[test]
    fn recurrence_matches_direct_sum() {
        for s in [BwSystem::uniform(4), negk3()] {
            let table = all_polynomials(&s);
            for (a, b, c, k) in table.iter() {
                assert_eq!(*k, bm_polynomial(&s, a, b, c).unwrap());
            }
            assert_eq!(table.iter().count(), table.len());
        }
    }

    #[test]
    fn two_alternatives() {
        let ab = Subset::pair(0, 1);
        let s = BwSystem::new(2, [(ab, 0, 1, ratio(2, 7)), (ab, 1, 0, ratio(5, 7))]).unwrap();
        let t = all_polynomials(&s);
        assert_eq!(t.len(), 2);
        assert_eq!(t.get(0, 1, Subset::EMPTY), Some(&ratio(2, 7)));
        assert_eq!(t.get(1, 0, Subset::EMPTY), Some(&ratio(5, 7)));
    }

    #[test]
    fn moebius_single_step() {
        let s = negk3();
        let t = all_polynomials(&s);
        let c = Subset::singleton(0);
        assert_eq!(moebius_reconstruct(&t, 1, 2, c).unwrap(), *s.bw(Subset::pair(1, 2), 1, 2));
        assert!(moebius_reconstruct(&t, 1, 2, Subset::singleton(1)).is_err());
    }

    #[test]
    fn falmagne_small_families() {
        let s = BwSystem::uniform(4);
        let b0 = Subset::pair(0, 1);
        let (b1, b2) = (Subset::singleton(2), Subset::singleton(3));
        assert_eq!(falmagne_inequality(&s, 0, 1, b0, &[Subset::EMPTY]).unwrap(), ratio(1, 2));
        assert_eq!(
            falmagne_inequality(&s, 0, 1, b0, &[b1]).unwrap(),
            s.bw(b0, 0, 1) - s.bw(b0.union(b1), 0, 1)
        );
        let four = s.bw(b0, 0, 1) - (s.bw(b0.union(b1), 0, 1) + s.bw(b0.union(b2), 0, 1))
            + s.bw(Subset::full(4), 0, 1);
        assert_eq!(falmagne_inequality(&s, 0, 1, b0, &[b1, b2]).unwrap(), four);
        assert!(falmagne_inequality(&s, 0, 2, b0, &[]).is_err());
    }

    #[test]
    fn tolerance_marks_approximate() {
        let s = negk3();
        let opts = CheckOptions {
            construct_witness: false,
            tolerance: ratio(1, 5),
        };
        let r = check_representable(&s, &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Representable);
        assert!(r.approximate);
        let bad = CheckOptions {
            construct_witness: false,
            tolerance: ratio(-1, 5),
        };
        assert_eq!(check_representable(&s, &bad), Err(CheckError::NegativeTolerance));
    }

    #[test]
    fn certificates_sorted_with_ties() {
        let mk = |best, worst, context: &[usize], v| Certificate {
            best,
            worst,
            context: context.iter().copied().collect(),
            value: ratio(v, 10),
        };
        let mut v = [mk(2, 0, &[1], -1), mk(0, 2, &[3], -1), mk(0, 2, &[1], -1), mk(1, 0, &[], -3)];
        v.sort_by(certificate_order);
        assert_eq!(v[0].value, ratio(-3, 10));
        assert_eq!((v[1].best, v[1].context), (0, Subset::singleton(1)));
        assert_eq!((v[2].best, v[2].context), (0, Subset::singleton(3)));
        assert_eq!(v[3].best, 2);
    }
}
