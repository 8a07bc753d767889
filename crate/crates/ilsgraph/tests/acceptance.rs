//! Acceptance suite: one test per standing criterion, each printing a
//! PASS/FAIL line. Run with `--test-threads=1 --nocapture` for ordered
//! output.

use std::panic::AssertUnwindSafe;

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ilsgraph::campaign::{run_campaign, CampaignConfig, GenerationMode, Property};
use ilsgraph::elimination::{find_elimination_ordering, greedy_reduce};
use ilsgraph::graph::{enumerate_feasible, is_connected};
use ilsgraph::matrix::{flip_columns, CoeffMatrix, DomainBound, RhsVector};
use ilsgraph::pattern::find_minimal_pattern;
use ilsgraph::rational::Rational;
use ilsgraph::witness::analytic_witness;

fn criterion(number: u32, name: &str, body: impl FnOnce() -> String) {
    match std::panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(detail) => println!("acceptance {number:02} {name}: PASS ({detail})"),
        Err(payload) => {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".to_string());
            println!("acceptance {number:02} {name}: FAIL ({message})");
            panic!("acceptance criterion {number} failed");
        }
    }
}

fn mat(rows: &[&[i64]]) -> CoeffMatrix {
    CoeffMatrix::from_integer_rows(rows).unwrap()
}

fn d(v: u32) -> DomainBound {
    DomainBound::new(v).unwrap()
}

#[test]
fn acceptance_01_micro_witness_fixtures() {
    criterion(1, "micro witness fixtures", || {
        let two = mat(&[&[1, 1], &[-1, -1]]);
        let witness = analytic_witness(&two, d(1)).unwrap().unwrap();
        assert_eq!(witness.b, RhsVector::from_integers(&[1, -1]));
        let report = is_connected(&two, &witness.b, d(1)).unwrap();
        assert_eq!(report.feasible.points(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(report.component_count, 2);

        let three = mat(&[&[1, 0, -1], &[-1, 1, 0], &[0, -1, 1]]);
        let witness = analytic_witness(&three, d(1)).unwrap().unwrap();
        assert_eq!(witness.b, RhsVector::from_integers(&[0, 0, 0]));
        let report = is_connected(&three, &witness.b, d(1)).unwrap();
        assert_eq!(report.feasible.points(), &[vec![0, 0, 0], vec![1, 1, 1]]);
        assert_eq!(report.component_count, 2);
        "both fixtures match exactly".to_string()
    });
}

#[test]
fn acceptance_02_four_cycle_example() {
    criterion(2, "4x4 sign-cycle example", || {
        let a = mat(&[
            &[1, 0, 0, -1],
            &[-1, 1, 0, 0],
            &[0, -1, 1, 0],
            &[0, 0, -1, 1],
        ]);
        let pattern = find_minimal_pattern(&a).unwrap().unwrap();
        assert_eq!(pattern.lambda(), 4);
        let reduction = greedy_reduce(&a);
        assert!(reduction.eliminated_order.is_empty());
        assert_eq!(reduction.delta, vec![0, 1, 2, 3]);
        "minimal pattern size 4, residual keeps all columns".to_string()
    });
}

const ORDERING_SHAPES: [(usize, usize); 5] = [(3, 3), (1, 2), (2, 2), (3, 2), (4, 2)];

#[test]
fn acceptance_03_pattern_ordering_laws() {
    criterion(3, "pattern/ordering laws on exhaustive shapes", || {
        let mut total = 0;
        for shape in ORDERING_SHAPES {
            for property in [
                Property::PatternForbidsOrdering,
                Property::OrderingPatternEquivalence,
            ] {
                let report = run_campaign(property, &CampaignConfig::exhaustive(shape)).unwrap();
                assert!(
                    report.passed(),
                    "{property:?} failed on {shape:?}: {:?}",
                    report.first_counterexample
                );
                total += report.checked;
            }
        }
        format!("{total} checks across {} shapes", ORDERING_SHAPES.len())
    });
}

#[test]
fn acceptance_04_greedy_matches_oracle() {
    criterion(4, "greedy reduction matches the factorial oracle", || {
        let mut total = 0;
        for shape in ORDERING_SHAPES {
            let report = run_campaign(
                Property::GreedyMatchesOracle,
                &CampaignConfig::exhaustive(shape),
            )
            .unwrap();
            assert!(
                report.passed(),
                "disagreement on {shape:?}: {:?}",
                report.first_counterexample
            );
            total += report.checked;
        }
        format!("{total} matrices, zero disagreements")
    });
}

#[test]
fn acceptance_05_planted_patterns_yield_witnesses() {
    criterion(5, "planted patterns always disconnect", || {
        let cfg = CampaignConfig::sampled(None, 1000, 20_240_601)
            .with_entry_range(-2, 2)
            .with_d_list(&[1, 2]);
        let report = run_campaign(Property::WitnessFromPattern, &cfg).unwrap();
        assert!(report.passed(), "{:?}", report.first_counterexample);
        assert_eq!(report.checked, 1000);
        format!(
            "1000 planted matrices at d in {{1,2}}, {} ms",
            report.runtime_millis
        )
    });
}

#[test]
fn acceptance_06_pattern_free_shapes_stay_connected() {
    criterion(6, "pattern-free matrices survive the full scan", || {
        let shapes = [(3, 3), (1, 2), (2, 2), (3, 2), (4, 2), (4, 3)];
        for (index, shape) in shapes.into_iter().enumerate() {
            let cfg = CampaignConfig::sampled(Some(shape), 500, 1_000 + index as u64)
                .with_entry_range(-2, 2)
                .with_d_list(&[1]);
            let report = run_campaign(Property::ConnectedWithoutPattern, &cfg).unwrap();
            assert!(
                report.passed(),
                "shape {shape:?}: {:?}",
                report.first_counterexample
            );
            assert_eq!(report.checked, 500);
        }
        "6 shapes x 500 pattern-free matrices, zero disconnections".to_string()
    });
}

#[test]
fn acceptance_07_canonical_form_match() {
    criterion(
        7,
        "nowhere-eliminable pattern-free 4x3 matrices are canonical",
        || {
            let sampled = CampaignConfig::sampled(Some((4, 3)), 500, 7)
                .with_entry_range(-2, 2)
                .with_d_list(&[1, 2]);
            let report = run_campaign(Property::CanonicalFormMatch, &sampled).unwrap();
            assert!(report.passed(), "{:?}", report.first_counterexample);
            assert_eq!(report.checked, 500);

            let mut exhaustive = CampaignConfig::exhaustive((4, 3)).with_d_list(&[1, 2]);
            exhaustive.mode = GenerationMode::Exhaustive {
                column_normalized: true,
            };
            let full = run_campaign(Property::CanonicalFormMatch, &exhaustive).unwrap();
            assert!(full.passed(), "{:?}", full.first_counterexample);
            assert!(full.checked > 0);
            format!(
                "500 sampled plus {} column-normalized candidates, all canonical",
                full.checked
            )
        },
    );
}

#[test]
fn acceptance_08_canonical_path_feasibility() {
    criterion(8, "canonical three-hop paths stay feasible", || {
        let cfg = CampaignConfig::sampled(Some((4, 3)), 200, 88)
            .with_entry_range(-2, 2)
            .with_d_list(&[1, 2]);
        let report = run_campaign(Property::CanonicalPathFeasible, &cfg).unwrap();
        assert!(report.passed(), "{:?}", report.first_counterexample);
        assert_eq!(report.checked, 200);
        "200 instances, every path point feasible".to_string()
    });
}

#[test]
fn acceptance_09_cycle_slack_identities() {
    criterion(9, "cycle slack identities and isolated neighbors", || {
        let cfg = CampaignConfig::sampled(None, 1000, 20_240_601)
            .with_entry_range(-2, 2)
            .with_d_list(&[1, 2]);
        let report = run_campaign(Property::CycleSlackIdentities, &cfg).unwrap();
        assert!(report.passed(), "{:?}", report.first_counterexample);
        assert_eq!(report.checked, 1000);
        "1000 cycle matrices, exact slacks, all neighbors strictly infeasible".to_string()
    });
}

#[test]
fn acceptance_10_transformation_invariance() {
    criterion(
        10,
        "verdicts invariant under permutations and flips",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(2024);
            for trial in 0..200 {
                let rows = rng.random_range(2..=4usize);
                let cols = rng.random_range(2..=4usize);
                let entries: Vec<Rational> = (0..rows * cols)
                    .map(|_| Rational::integer(rng.random_range(-2..=2i64)))
                    .collect();
                let a = CoeffMatrix::new(rows, cols, entries).unwrap();
                let bound = d(rng.random_range(1..=2u32));

                // Right-hand side drawn from the attainable row values keeps a
                // healthy mix of tight and slack instances.
                let everything = RhsVector::new(vec![Rational::integer(-1_000); rows]);
                let all_points = enumerate_feasible(&a, &everything, bound).unwrap();
                let b = RhsVector::new(
                    (0..rows)
                        .map(|i| {
                            let mut values: Vec<Rational> = all_points
                                .points()
                                .iter()
                                .map(|x| {
                                    (0..cols).fold(Rational::zero(), |acc, j| {
                                        &acc + &a.get(i, j).scaled(x[j])
                                    })
                                })
                                .collect();
                            values.sort();
                            values.dedup();
                            values[rng.random_range(0..values.len())].clone()
                        })
                        .collect(),
                );

                let mut row_perm: Vec<usize> = (0..rows).collect();
                row_perm.shuffle(&mut rng);
                let mut col_perm: Vec<usize> = (0..cols).collect();
                col_perm.shuffle(&mut rng);
                let flips: Vec<usize> = (0..cols).filter(|_| rng.random_bool(0.5)).collect();

                let permuted = a.permute(&row_perm, &col_perm).unwrap();
                let permuted_b =
                    RhsVector::new(row_perm.iter().map(|&i| b.get(i).clone()).collect());
                let flipped = flip_columns(&permuted, &permuted_b, &flips, bound).unwrap();

                let base = is_connected(&a, &b, bound).unwrap();
                let transformed = is_connected(&flipped.matrix, &flipped.rhs, bound).unwrap();
                assert_eq!(
                    base.feasible_count(),
                    transformed.feasible_count(),
                    "trial {trial}"
                );
                assert_eq!(
                    base.component_count, transformed.component_count,
                    "trial {trial}"
                );
                assert_eq!(base.verdict, transformed.verdict, "trial {trial}");

                let base_pattern = find_minimal_pattern(&a).unwrap().is_some();
                let transformed_pattern = find_minimal_pattern(&flipped.matrix).unwrap().is_some();
                assert_eq!(base_pattern, transformed_pattern, "trial {trial}");

                let base_ordering = find_elimination_ordering(&a).is_some();
                let transformed_ordering = find_elimination_ordering(&flipped.matrix).is_some();
                assert_eq!(base_ordering, transformed_ordering, "trial {trial}");
            }
            "200 instances invariant under row/column permutation and column flips".to_string()
        },
    );
}
