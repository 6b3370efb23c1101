//! Behaviour of the witness pipeline end to end: sign test, recursive
//! construction, and the linear feasibility oracle.

use bwrum_core::lp::{lp_feasibility_oracle, LpOutcome};
use bwrum_core::measure::{
    adjudicate, build_distribution, f_prime, lemma_b_check, raw_construction, system_from_distribution,
    verify_reconstruction, BuildError, Reading, RankingDistribution,
};
use bwrum_core::poly::{check_representable, CheckError, CheckOptions, Verdict};
use bwrum_core::rankings::Ranking;
use bwrum_core::rational::{int, ratio};
use bwrum_core::sim::{random_distribution, SeededRng};
use bwrum_core::{BwSystem, Subset};

fn with_witness() -> CheckOptions {
    CheckOptions {
        construct_witness: true,
        ..CheckOptions::default()
    }
}

#[test]
fn two_alternatives_get_a_verified_witness() {
    let ab = Subset::pair(0, 1);
    let s = BwSystem::new(2, [(ab, 0, 1, ratio(1, 4)), (ab, 1, 0, ratio(3, 4))]).unwrap();
    let report = check_representable(&s, &with_witness()).unwrap();
    assert_eq!(report.verdict, Verdict::Representable);
    let w = report.witness.unwrap();
    assert!(verify_reconstruction(&s, &w).is_exact());
}

// Past two alternatives no reading of the recursion yields masses that sum
// to one on the uniform system, so the witness request fails loudly rather
// than returning an unverified distribution.
#[test]
fn recursion_does_not_normalize_on_uniform_systems() {
    for n in 3..=4 {
        let s = BwSystem::uniform(n);
        match build_distribution(&s) {
            Err(BuildError::ConstructionInconsistent { attempts }) => {
                assert_eq!(attempts.len(), 16);
                assert!(attempts.iter().all(|a| a.mismatches != Some(0)));
            }
            other => panic!("n={n}: {other:?}"),
        }
        assert!(matches!(
            check_representable(&s, &with_witness()),
            Err(CheckError::WitnessConstructionFailed(_))
        ));
    }
}

#[test]
fn default_reading_totals() {
    // frozen from an independent rational prototype
    let three = raw_construction(&BwSystem::uniform(3), Reading::R1).unwrap();
    let four = raw_construction(&BwSystem::uniform(4), Reading::R1).unwrap();
    assert_eq!(three.total, int(4));
    assert_eq!(four.total, int(9));
}

#[test]
fn base_case_values_sum_to_one() {
    let mut rng = SeededRng::new(11);
    for n in 2..=4 {
        let s = system_from_distribution(&random_distribution(n, 5, &mut rng));
        let mut total = int(0);
        for a in 0..n {
            for b in (0..n).filter(|&b| b != a) {
                let v = f_prime(&s, &[a], &[b]).unwrap();
                assert!(v >= int(0));
                total += v;
            }
        }
        assert_eq!(total, int(1));
    }
}

#[test]
fn f_prime_is_nonnegative_on_representable_systems() {
    let mut rng = SeededRng::new(12);
    let s = system_from_distribution(&random_distribution(4, 5, &mut rng));
    for r in Ranking::all(4) {
        let o = r.order();
        for cut in 1..4 {
            assert!(f_prime(&s, &o[..cut], &o[cut..]).unwrap() >= int(0));
        }
    }
}

#[test]
fn sum_identity_fails_at_empty_context_for_n_above_three() {
    // F'(a, b) is K_{ab,∅} while the identity asks for K_{ab,∅} / (n-2)!
    let s = BwSystem::uniform(4);
    assert!(!lemma_b_check(&s, 0, 1, Subset::EMPTY).unwrap());
    assert!(lemma_b_check(&BwSystem::uniform(3), 0, 1, Subset::EMPTY).unwrap());
}

#[test]
fn no_reading_passes_adjudication_on_small_suite() {
    let suite = vec![BwSystem::uniform(3), BwSystem::uniform(4)];
    let verdicts = adjudicate(&suite).unwrap();
    assert_eq!(verdicts.len(), 16);
    assert!(verdicts.iter().all(|v| !v.passes()));
}

#[test]
fn lp_recovers_witnesses_for_induced_systems() {
    let mut rng = SeededRng::new(13);
    for n in 3..=4 {
        let d = random_distribution(n, 5, &mut rng);
        let s = system_from_distribution(&d);
        let LpOutcome::Feasible(w) = lp_feasibility_oracle(&s).unwrap() else {
            panic!("n={n} infeasible")
        };
        // any witness will do; it need not equal the generating distribution
        assert!(verify_reconstruction(&s, &w).is_exact());
    }
    let u = BwSystem::uniform(5);
    let LpOutcome::Feasible(w) = lp_feasibility_oracle(&u).unwrap() else {
        panic!("uniform n=5 infeasible")
    };
    assert!(verify_reconstruction(&u, &w).is_exact());
}

// Nonnegative polynomials do not guarantee a mixture of rankings. With the
// full three-element set uniform, each ranking must carry 1/6, which fixes
// every pair; moving the pair {0,1} to 3/5 keeps all polynomials
// nonnegative but leaves no feasible distribution.
#[test]
fn sign_test_and_lp_disagree_on_a_three_alternative_system() {
    let ab = Subset::pair(0, 1);
    let s = BwSystem::uniform(3).with_cell(ab, 0, 1, ratio(3, 5)).with_cell(ab, 1, 0, ratio(2, 5));
    assert!(s.validate().is_valid());
    let report = check_representable(&s, &CheckOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Representable);
    assert_eq!(lp_feasibility_oracle(&s).unwrap(), LpOutcome::Infeasible);
}

#[test]
fn negative_certificate_agrees_with_lp() {
    let bc = Subset::pair(1, 2);
    let s = BwSystem::uniform(3).with_cell(bc, 1, 2, int(0)).with_cell(bc, 2, 1, int(1));
    let report = check_representable(&s, &with_witness()).unwrap();
    assert_eq!(report.verdict, Verdict::NotRepresentable);
    assert_eq!(report.negatives.len(), 1);
    assert_eq!(report.negatives[0].value, ratio(-1, 6));
    assert_eq!(lp_feasibility_oracle(&s).unwrap(), LpOutcome::Infeasible);
}

#[test]
fn point_mass_round_trip_through_lp() {
    let rho = Ranking::new(vec![3, 1, 0, 2]).unwrap();
    let s = system_from_distribution(&RankingDistribution::point_mass(rho.clone()));
    let LpOutcome::Feasible(w) = lp_feasibility_oracle(&s).unwrap() else {
        panic!()
    };
    assert_eq!(w.mass(&rho), int(1));
}
