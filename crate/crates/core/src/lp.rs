//! Exact linear feasibility: is there a distribution on rankings whose
//! induced best-worst probabilities equal the system's?
//!
//! Variables are the `n!` ranking masses. Each cell contributes the equation
//! "mass of rankings with `a` first and `b` last in `B` equals `BW_B(a, b)`",
//! plus one row for total mass. Dependent rows are set aside once per `n`, and
//! any solution of the remaining rows is checked against all of them.
//! Feasibility is settled by a phase-one simplex with Bland's rule in exact
//! rationals.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::measure::RankingDistribution;
use crate::rational::Rational;
use crate::rankings::Ranking;
use crate::system::{offered_sets, ordered_pairs, BwSystem};

/// Largest `n` the oracle accepts (`6! = 720` variables).
pub const MAX_LP_ALTERNATIVES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("{n} alternatives gives {n}! variables; the oracle stops at n={max}", max = MAX_LP_ALTERNATIVES)]
    DimensionTooLarge { n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(RankingDistribution),
    Infeasible,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

/// Constraint rows for one `n`, independent of any system.
#[derive(Debug, Clone)]
pub struct ConstraintBasis {
    n: usize,
    rankings: Vec<Ranking>,
    /// Support of each constraint row (total-mass row first, then cells in
    /// [`BwSystem::cells`] order).
    rows: Vec<Vec<usize>>,
    /// Rows independent modulo a large prime, hence independent over the
    /// rationals. Normally a basis of the row space; the solver checks the
    /// remaining rows and falls back to all of them if that ever fails.
    kept: Vec<usize>,
}

impl ConstraintBasis {
    pub fn new(n: usize) -> Result<Self, LpError> {
        if !(2..=MAX_LP_ALTERNATIVES).contains(&n) {
            return Err(LpError::DimensionTooLarge { n });
        }
        let rankings = Ranking::all(n);
        let mut rows = vec![(0..rankings.len()).collect::<Vec<_>>()];
        for s in offered_sets(n) {
            for (a, b) in ordered_pairs(s) {
                rows.push(
                    rankings
                        .iter()
                        .enumerate()
                        .filter(|(_, r)| r.best_worst_in(s) == Some((a, b)))
                        .map(|(i, _)| i)
                        .collect(),
                );
            }
        }
        let kept = independent_rows(&rows, rankings.len());
        Ok(ConstraintBasis { n, rankings, rows, kept })
    }

    pub fn rank(&self) -> usize {
        self.kept.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a, PRIME - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Greedy independent subset of 0/1 rows, by elimination modulo [`PRIME`].
fn independent_rows(rows: &[Vec<usize>], width: usize) -> Vec<usize> {
    let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut kept = Vec::new();
    for (i, support) in rows.iter().enumerate() {
        let mut row = vec![0u64; width];
        for &j in support {
            row[j] = 1;
        }
        for (col, prow) in &pivots {
            let f = row[*col];
            if f == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(prow) {
                if y != 0 {
                    *x = (*x + PRIME - mul_mod(f, y)) % PRIME;
                }
            }
        }
        if let Some(col) = row.iter().position(|&x| x != 0) {
            let inv = inv_mod(row[col]);
            for x in row.iter_mut() {
                *x = mul_mod(*x, inv);
            }
            pivots.push((col, row));
            kept.push(i);
        }
    }
    kept
}

/// Feasibility of the system as a mixture of rankings.
pub fn lp_feasibility_oracle(system: &BwSystem) -> Result<LpOutcome, LpError> {
    let basis = ConstraintBasis::new(system.n())?;
    Ok(lp_feasibility_with(system, &basis))
}

/// As [`lp_feasibility_oracle`] with a precomputed basis for `system.n()`.
pub fn lp_feasibility_with(system: &BwSystem, basis: &ConstraintBasis) -> LpOutcome {
    assert_eq!(system.n(), basis.n, "basis built for a different n");
    let mut rhs = vec![Rational::one()];
    rhs.extend(system.cells().map(|(_, _, _, p)| p.clone()));
    let satisfies_all = |x: &[Rational]| {
        basis
            .rows
            .iter()
            .zip(&rhs)
            .all(|(support, b)| support.iter().fold(Rational::zero(), |acc, &j| acc + &x[j]) == *b)
    };
    let reduced: Vec<(&[usize], &Rational)> = basis.kept.iter().map(|&i| (&basis.rows[i][..], &rhs[i])).collect();
    let x = match phase_one(&reduced, basis.rankings.len()) {
        None => return LpOutcome::Infeasible,
        Some(x) if satisfies_all(&x) => Some(x),
        Some(_) if basis.kept.len() == basis.rows.len() => None,
        Some(_) => {
            // either the right-hand sides are inconsistent, or the kept rows
            // do not span after all; only the full problem can tell
            let full: Vec<(&[usize], &Rational)> = basis.rows.iter().map(|r| &r[..]).zip(&rhs).collect();
            phase_one(&full, basis.rankings.len())
        }
    };
    match x {
        Some(x) => {
            let entries = basis.rankings.iter().cloned().zip(x).filter(|(_, p)| !p.is_zero());
            LpOutcome::Feasible(RankingDistribution::new(basis.n, entries).expect("feasible point is a distribution"))
        }
        None => LpOutcome::Infeasible,
    }
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule
/// for the rest of the run.
const DEGENERATE_LIMIT: usize = 50;

/// Finds `x >= 0` with `sum_{j in support_i} x_j = b_i` for every row, or
/// reports none exists. Artificial columns leave the tableau once they leave
/// the basis. Entering columns follow the most negative reduced cost until
/// the run stalls on degenerate pivots, then Bland's rule takes over, which
/// rules out cycling.
fn phase_one(rows: &[(&[usize], &Rational)], width: usize) -> Option<Vec<Rational>> {
    let m = rows.len();
    // tableau[i] = [x_0 .. x_{width-1}, rhs]; artificial i is implicit
    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut basic: Vec<usize> = Vec::with_capacity(m);
    for (i, (support, b)) in rows.iter().enumerate() {
        let mut row = vec![Rational::zero(); width + 1];
        for &j in support.iter() {
            row[j] = Rational::one();
        }
        // b >= 0 holds for probabilities; flip otherwise
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
            row[width] = -(*b).clone();
        } else {
            row[width] = (*b).clone();
        }
        tableau.push(row);
        basic.push(width + i);
    }
    // objective: minimize sum of artificials; reduced costs of x are
    // -(column sums), objective value is -(rhs sum)
    let mut cost = vec![Rational::zero(); width + 1];
    for row in &tableau {
        for (c, x) in cost.iter_mut().zip(row) {
            if !x.is_zero() {
                *c -= x;
            }
        }
    }
    let mut degenerate_run = 0;
    let mut bland = false;
    loop {
        let enter = if bland {
            // lowest-index column with negative reduced cost
            (0..width).find(|&j| cost[j].is_negative())
        } else {
            // most negative reduced cost, lowest index on ties
            (0..width)
                .filter(|&j| cost[j].is_negative())
                .min_by(|&x, &y| cost[x].cmp(&cost[y]).then(x.cmp(&y)))
        };
        let Some(enter) = enter else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in tableau.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio == *best && basic[i] < basic[*l]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (pivot_row, step) = leave.expect("phase one objective is bounded below");
        if step.is_zero() {
            degenerate_run += 1;
            // Dantzig's rule can cycle on degenerate vertices; Bland's cannot
            bland |= degenerate_run > DEGENERATE_LIMIT;
        } else {
            degenerate_run = 0;
        }
        pivot(&mut tableau, &mut cost, pivot_row, enter);
        basic[pivot_row] = enter;
    }
    if !cost[width].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); width];
    for (i, &j) in basic.iter().enumerate() {
        if j < width {
            x[j] = tableau[i][width].clone();
        }
    }
    Some(x)
}

fn pivot(tableau: &mut [Vec<Rational>], cost: &mut [Rational], r: usize, c: usize) {
    let inv = tableau[r][c].recip();
    let nz: Vec<usize> = tableau[r].iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, _)| j).collect();
    for &j in &nz {
        tableau[r][j] *= &inv;
    }
    let prow: Vec<(usize, Rational)> = nz.iter().map(|&j| (j, tableau[r][j].clone())).collect();
    let eliminate = |row: &mut [Rational]| {
        let f = row[c].clone();
        if f.is_zero() {
            return;
        }
        for (j, v) in &prow {
            row[*j] -= &f * v;
        }
    };
    for (i, row) in tableau.iter_mut().enumerate() {
        if i != r {
            eliminate(row);
        }
    }
    eliminate(cost);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::verify_reconstruction;
    use crate::rational::{int, ratio};
    use crate::subset::Subset;

    #[test]
    fn uniform_three_is_feasible() {
        let s = BwSystem::uniform(3);
        match lp_feasibility_oracle(&s).unwrap() {
            LpOutcome::Feasible(d) => assert!(verify_reconstruction(&s, &d).is_exact()),
            LpOutcome::Infeasible => panic!("uniform system is a mixture"),
        }
    }

    #[test]
    fn two_alternatives_have_unique_witness() {
        let ab = Subset::pair(0, 1);
        let s = BwSystem::new(2, [(ab, 0, 1, ratio(1, 3)), (ab, 1, 0, ratio(2, 3))]).unwrap();
        let LpOutcome::Feasible(d) = lp_feasibility_oracle(&s).unwrap() else {
            panic!()
        };
        assert_eq!(d.mass(&Ranking::identity(2)), ratio(1, 3));
    }

    #[test]
    fn negative_polynomial_system_is_infeasible() {
        let s = BwSystem::uniform(3)
            .with_cell(Subset::pair(1, 2), 1, 2, int(0))
            .with_cell(Subset::pair(1, 2), 2, 1, int(1));
        assert_eq!(lp_feasibility_oracle(&s).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn constraint_rank_by_n() {
        assert_eq!(ConstraintBasis::new(3).unwrap().rank(), 6);
        assert_eq!(ConstraintBasis::new(4).unwrap().rank(), 23);
        assert!(matches!(lp_feasibility_oracle(&BwSystem::uniform(7)), Err(LpError::DimensionTooLarge { n: 7 })));
    }

    // Every polynomial is nonnegative here, yet no mixture of rankings
    // reproduces the pair {0,1}: the sign test alone does not settle it.
    #[test]
    fn nonnegative_polynomials_without_a_witness() {
        let ab = Subset::pair(0, 1);
        let s = BwSystem::uniform(3).with_cell(ab, 0, 1, ratio(3, 5)).with_cell(ab, 1, 0, ratio(2, 5));
        assert!(s.validate().is_valid());
        assert!(crate::poly::negative_polynomials(&crate::poly::all_polynomials(&s), &int(0)).is_empty());
        assert_eq!(lp_feasibility_oracle(&s).unwrap(), LpOutcome::Infeasible);
    }
}
