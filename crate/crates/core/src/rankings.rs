//! Full rankings and the pattern sets `S(prefix; ground; suffix)`.
//!
//! A pattern fixes two chains of alternatives. A ranking belongs to it when
//! the prefix chain comes first in the given order, every ground element that
//! is not listed sits strictly between the end of the prefix and the start of
//! the suffix, and the suffix chain follows in order. Two extensions apply:
//! a two-sided pattern whose ground has nothing unlisted still requires the
//! prefix to precede the suffix, and either side may be empty.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::rational::factorial;
use crate::subset::{Alt, Subset, MAX_BITS};

/// Largest `n` for which pattern sets are materialized (n! rankings).
pub const MAX_ENUMERATION: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("malformed pattern: {0}")]
    MalformedDescriptor(&'static str),
    #[error("not a permutation of 0..{n}")]
    NotAPermutation { n: usize },
    #[error("argument out of range: {0}")]
    OutOfRange(&'static str),
    #[error("refusing to enumerate {n}! rankings (limit n={max})", max = MAX_ENUMERATION)]
    TooLarge { n: usize },
    #[error("{best} and {worst} must be distinct alternatives outside {context:?}")]
    InvalidContext { best: Alt, worst: Alt, context: Subset },
}

/// A strict order on all alternatives, best first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ranking(Vec<Alt>);

impl Ranking {
    pub fn new(order: Vec<Alt>) -> Result<Self, PatternError> {
        let n = order.len();
        if n > MAX_BITS {
            return Err(PatternError::NotAPermutation { n });
        }
        let seen: Subset = order.iter().copied().filter(|&a| a < n).collect();
        if seen != Subset::full(n) {
            return Err(PatternError::NotAPermutation { n });
        }
        Ok(Ranking(order))
    }

    pub fn identity(n: usize) -> Self {
        Ranking((0..n).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> &[Alt] {
        &self.0
    }

    /// Index of `a` in the best-first order.
    pub fn position(&self, a: Alt) -> usize {
        self.0.iter().position(|&x| x == a).expect("alternative in ranking")
    }

    /// `positions()[a]` is the index of `a`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &a) in self.0.iter().enumerate() {
            pos[a] = i;
        }
        pos
    }

    /// Rank value: `n` for the best alternative down to 1 for the worst.
    pub fn rank_value(&self, a: Alt) -> usize {
        self.n() - self.position(a)
    }

    /// First and last member of `subset` in this order.
    pub fn best_worst_in(&self, subset: Subset) -> Option<(Alt, Alt)> {
        let mut inside = self.0.iter().copied().filter(|&a| subset.contains(a));
        let best = inside.next()?;
        let worst = inside.next_back()?;
        Some((best, worst))
    }

    /// All `n!` rankings in lexicographic order.
    pub fn all(n: usize) -> Vec<Ranking> {
        permutations(&(0..n).collect::<Vec<_>>()).into_iter().map(Ranking).collect()
    }
}

/// Every ordering of `items`, lexicographic in the order `items` is given.
pub fn permutations(items: &[Alt]) -> Vec<Vec<Alt>> {
    let mut idx: Vec<usize> = (0..items.len()).collect();
    let mut out = Vec::new();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // next lexicographic permutation of idx
        let Some(i) = (1..idx.len()).rev().find(|&i| idx[i - 1] < idx[i]) else {
            return out;
        };
        let j = (i..idx.len()).rev().find(|&j| idx[j] > idx[i - 1]).unwrap();
        idx.swap(i - 1, j);
        idx[i..].reverse();
    }
}

/// `S(prefix; ground; suffix)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    pub prefix: Vec<Alt>,
    pub ground: Subset,
    pub suffix: Vec<Alt>,
}

impl Pattern {
    pub fn new(prefix: Vec<Alt>, ground: Subset, suffix: Vec<Alt>) -> Self {
        Pattern { prefix, ground, suffix }
    }

    /// The pattern `S(prefix A suffix)` over the whole set `A = {0..n}`.
    pub fn around_all(n: usize, prefix: &[Alt], suffix: &[Alt]) -> Self {
        Pattern::new(prefix.to_vec(), Subset::full(n), suffix.to_vec())
    }

    pub fn listed(&self) -> Subset {
        self.prefix.iter().chain(&self.suffix).copied().collect()
    }

    /// Number of listed elements.
    pub fn k(&self) -> usize {
        self.prefix.len() + self.suffix.len()
    }

    /// Ground elements the pattern places between the two chains.
    pub fn unlisted(&self) -> Subset {
        self.ground.difference(self.listed())
    }

    /// True for the standard form: listed elements drawn from the ground and
    /// both chains nonempty.
    pub fn is_standard(&self) -> bool {
        !self.prefix.is_empty() && !self.suffix.is_empty() && self.listed().is_subset_of(self.ground)
    }

    pub fn validate(&self, n: usize) -> Result<(), PatternError> {
        if n > MAX_BITS || !self.ground.fits(n) {
            return Err(PatternError::MalformedDescriptor("ground outside the alternative set"));
        }
        if self.prefix.iter().chain(&self.suffix).any(|&a| a >= n) {
            return Err(PatternError::MalformedDescriptor("listed alternative outside the alternative set"));
        }
        if self.listed().len() != self.k() {
            return Err(PatternError::MalformedDescriptor("listed alternatives repeat"));
        }
        Ok(())
    }

    pub fn matches(&self, ranking: &Ranking) -> Result<bool, PatternError> {
        self.validate(ranking.n())?;
        Ok(self.matches_positions(&ranking.positions()))
    }

    /// Membership given `pos[a]` for every alternative; the pattern must
    /// already be valid for `pos.len()`.
    pub fn matches_positions(&self, pos: &[usize]) -> bool {
        let chained = |chain: &[Alt]| chain.windows(2).all(|w| pos[w[0]] < pos[w[1]]);
        if !chained(&self.prefix) || !chained(&self.suffix) {
            return false;
        }
        let lo = self.prefix.last().map(|&a| pos[a]);
        let hi = self.suffix.first().map(|&a| pos[a]);
        let unlisted = self.unlisted();
        if unlisted.is_empty() {
            return match (lo, hi) {
                (Some(lo), Some(hi)) => lo < hi,
                _ => true,
            };
        }
        unlisted
            .iter()
            .all(|u| lo.is_none_or(|lo| lo < pos[u]) && hi.is_none_or(|hi| pos[u] < hi))
    }
}

/// Matching rankings in lexicographic order.
pub fn enumerate_pattern(pattern: &Pattern, n: usize) -> Result<Vec<Ranking>, PatternError> {
    pattern.validate(n)?;
    if n > MAX_ENUMERATION {
        return Err(PatternError::TooLarge { n });
    }
    Ok(Ranking::all(n)
        .into_iter()
        .filter(|r| pattern.matches_positions(&r.positions()))
        .collect())
}

/// Memo of enumerated pattern sets, owned by whoever drives the computation.
#[derive(Debug, Default, Clone)]
pub struct PatternCache {
    sets: BTreeMap<(usize, Pattern), Vec<Ranking>>,
}

impl PatternCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn members(&mut self, pattern: &Pattern, n: usize) -> Result<&[Ranking], PatternError> {
        let key = (n, pattern.clone());
        if !self.sets.contains_key(&key) {
            let set = enumerate_pattern(pattern, n)?;
            self.sets.insert(key.clone(), set);
        }
        Ok(&self.sets[&key])
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Size of a standard pattern set: `(n-m-k)! n! / (n-m)!`, where `m` counts
/// the alternatives outside the ground and `k` the listed ones. The split of
/// `k` between prefix and suffix does not matter.
pub fn count_pattern(n: usize, m: usize, k: usize) -> Result<u128, PatternError> {
    if !(2..=34).contains(&n) {
        return Err(PatternError::OutOfRange("need 2 <= n <= 34"));
    }
    if k < 1 || m + k > n {
        return Err(PatternError::OutOfRange("need 1 <= k <= n - m"));
    }
    let value = factorial(n - m - k) * factorial(n) / factorial(n - m);
    Ok(u128::try_from(value).expect("fits for n <= 34"))
}

/// The pieces `S(π1 a A π2)`-style that partition `S(a; A∖B; b)`: one per
/// subset `C` of `B`, ordering of `C`, and cut of that ordering into a part
/// above `a` and a part below `b`.
pub fn split_partition(n: usize, best: Alt, worst: Alt, context: Subset) -> Result<Vec<Pattern>, PatternError> {
    if best == worst || best >= n || worst >= n || !context.fits(n) || context.contains(best) || context.contains(worst)
    {
        return Err(PatternError::InvalidContext { best, worst, context });
    }
    let all = Subset::full(n);
    let mut out = Vec::new();
    for c in context.subsets() {
        for order in permutations(&c.to_vec()) {
            for cut in (0..=order.len()).rev() {
                let mut prefix = order[..cut].to_vec();
                prefix.push(best);
                let mut suffix = vec![worst];
                suffix.extend_from_slice(&order[cut..]);
                out.push(Pattern::new(prefix, all, suffix));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InsertionCheck {
    pub holds: bool,
    /// No unlisted alternative exists, so both sums are empty.
    pub degenerate: bool,
}

/// Inserting one unlisted alternative at the end of the prefix (or the start
/// of the suffix), over all choices, partitions `S(prefix A suffix)`.
pub fn insertion_identity_check(prefix: &[Alt], suffix: &[Alt], n: usize) -> Result<InsertionCheck, PatternError> {
    let parent = Pattern::around_all(n, prefix, suffix);
    parent.validate(n)?;
    if prefix.is_empty() || suffix.is_empty() {
        return Err(PatternError::MalformedDescriptor("insertion needs a two-sided pattern"));
    }
    let free = parent.unlisted();
    if free.is_empty() {
        return Ok(InsertionCheck {
            holds: true,
            degenerate: true,
        });
    }
    let target = enumerate_pattern(&parent, n)?;
    let mut holds = true;
    for side in [true, false] {
        let mut union = Vec::new();
        for a in free.iter() {
            let child = if side {
                let mut p = prefix.to_vec();
                p.push(a);
                Pattern::around_all(n, &p, suffix)
            } else {
                let mut s = vec![a];
                s.extend_from_slice(suffix);
                Pattern::around_all(n, prefix, &s)
            };
            union.extend(enumerate_pattern(&child, n)?);
        }
        union.sort();
        // a repeated ranking would mean the pieces overlap
        holds &= union == target;
    }
    Ok(InsertionCheck {
        holds,
        degenerate: false,
    })
}

/// The `k - 1` patterns `S(a_1..a_j A a_{j+1}..a_k)` for `j = 1..k-1`.
pub fn s_union(elements: &[Alt], n: usize) -> Result<Vec<Pattern>, PatternError> {
    if elements.len() < 2 {
        return Err(PatternError::MalformedDescriptor("need at least two elements"));
    }
    let whole = Pattern::around_all(n, elements, &[]);
    whole.validate(n)?;
    Ok((1..elements.len())
        .map(|j| Pattern::around_all(n, &elements[..j], &elements[j..]))
        .collect())
}

/// The nested sum
/// `sum_{i1=1}^{n-m+1} sum_{i2=i1}^{n-m+1} .. sum_{i_{m-1}=i_{m-2}}^{n-m+1} (n-m+2-i_{m-1})`,
/// evaluated term by term.
pub fn nested_sum_identity(n: usize, m: usize) -> Result<u128, PatternError> {
    if m < 2 || m >= n || n > 40 {
        return Err(PatternError::OutOfRange("need 2 <= m < n <= 40"));
    }
    let top = (n - m + 1) as u128;
    fn level(depth: usize, from: u128, top: u128) -> u128 {
        if depth == 0 {
            // innermost summand, with `from` the last index
            return top + 1 - from;
        }
        (from..=top).map(|i| level(depth - 1, i, top)).sum()
    }
    // m - 1 summations; the first starts at 1
    Ok((1..=top).map(|i1| level(m - 2, i1, top)).sum())
}
