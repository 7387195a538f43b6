mod common;

use common::{int, ratio};
use prenash::search::{
    classify_cell, find_pre_equilibria, scan, solve, CellClassification, SolveOptions,
    DEFAULT_BUDGET,
};
use prenash::subdivision::{cell_diameter, diameter_bound};
use prenash::{root_label, Game, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_game() -> impl Strategy<Value = (Game<Rational>, Vec<u32>)> {
    (prop::collection::vec(2usize..=3, 1..=3), any::<u64>()).prop_flat_map(|(shape, seed)| {
        let n = shape.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let game = common::random_game(&mut rng, &shape, -5, 5);
        (Just(game), prop::collection::vec(1u32..=3, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certificates_reverify((game, res) in small_game()) {
        let certs = find_pre_equilibria(&game, &res).unwrap();
        for cert in &certs {
            prop_assert!(cert.verify(&game));
            let mut labels: Vec<usize> = cert.label_map.iter().map(|l| game.pure_index(l)).collect();
            labels.sort_unstable();
            prop_assert_eq!(labels, (0..game.profile_count()).collect::<Vec<_>>());
            for (v, label) in cert.cell.vertex_profiles.iter().zip(&cert.label_map) {
                prop_assert_eq!(&root_label(&game, v).unwrap(), label);
            }
            prop_assert!(cell_diameter(&cert.cell) <= diameter_bound(&game.shape(), &res) + 1e-12);
        }
        // independent brute force over every cell
        let brute: Vec<usize> = prenash::product_cells(&game, &res)
            .unwrap()
            .filter(|cell| {
                let mut seen = vec![false; game.profile_count()];
                cell.vertex_profiles.iter().all(|v| {
                    let idx = game.pure_index(&root_label(&game, v).unwrap());
                    !std::mem::replace(&mut seen[idx], true)
                })
            })
            .map(|cell| cell.index)
            .collect();
        prop_assert_eq!(certs.iter().map(|c| c.cell.index).collect::<Vec<_>>(), brute);
    }

    #[test]
    fn scans_are_deterministic((game, res) in small_game()) {
        let a = scan(&game, &res, DEFAULT_BUDGET).unwrap();
        let b = scan(&game, &res, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn exactly_one_classification_case((game, res) in small_game()) {
        for cell in prenash::product_cells(&game, &res).unwrap().take(20) {
            let tables: Vec<_> = cell.vertex_profiles.iter().map(|v| prenash::gain_table(&game, v).unwrap()).collect();
            match classify_cell(&game, &cell) {
                CellClassification::PlayerUpEverywhere { player } => {
                    prop_assert!(tables.iter().all(|t| t.up[player]));
                    prop_assert!((0..player).all(|i| tables.iter().any(|t| !t.up[i])));
                }
                CellClassification::SomePlayerNotUp { witnesses } => {
                    for (i, &w) in witnesses.iter().enumerate() {
                        prop_assert!(!tables[w].up[i]);
                    }
                }
            }
        }
    }
}

#[test]
fn single_player_regret_halves_each_stage() {
    let game = common::int_game(&[2], &[vec![0, 1]]);
    let mut opts = SolveOptions::new(int(0));
    opts.max_stages = 6;
    let report = solve(&game, &opts).unwrap();
    for (k, stage) in report.stages.iter().enumerate() {
        let chosen = stage.chosen.as_ref().unwrap();
        assert_eq!(chosen.max_regret, ratio(1, 2 << k));
    }
    assert!(!report.final_result.converged);
}

#[test]
fn prisoners_dilemma_regret_shrinks_but_never_reaches_zero() {
    let game = common::prisoners_dilemma();
    let mut opts = SolveOptions::new(int(0));
    opts.max_stages = 5;
    let report = solve(&game, &opts).unwrap();
    let regrets: Vec<Rational> = report
        .stages
        .iter()
        .map(|s| s.chosen.as_ref().unwrap().max_regret.clone())
        .collect();
    assert!(regrets.windows(2).all(|w| w[1] < w[0]), "{regrets:?}");
    assert!(!report.final_result.converged);
}

/// Chosen-cell regret is monotone in at least 90% of stage transitions across
/// the fixture suite, and the m=64 regret is within a tenth of the payoff range.
#[test]
fn shrinking_regret() {
    let mut transitions = 0;
    let mut violations = Vec::new();
    let mut final_misses = Vec::new();
    for (name, game) in common::fixture_suite() {
        let mut opts = SolveOptions::new(int(0));
        opts.m0 = 2;
        opts.max_stages = 6;
        let Ok(report) = solve(&game, &opts) else {
            final_misses.push(format!("{name}: no certificate at any stage"));
            continue;
        };
        let chosen: Vec<_> = report
            .stages
            .iter()
            .filter_map(|s| {
                s.chosen
                    .as_ref()
                    .map(|c| (s.resolutions[0], c.max_regret.clone()))
            })
            .collect();
        for w in chosen.windows(2) {
            transitions += 1;
            if w[1].1 > w[0].1 {
                violations.push(format!("{name}: m={} -> m={}", w[0].0, w[1].0));
            }
        }
        let bound = game.payoff_range() / int(10);
        match chosen.last() {
            Some((_, r)) if report.final_result.converged && *r <= bound => {}
            Some((64, r)) if *r <= bound => {}
            other => final_misses.push(format!(
                "{name}: last chosen stage {:?}",
                other.map(|(m, r)| (m, r.to_string()))
            )),
        }
    }
    assert!(
        violations.len() * 10 <= transitions,
        "{violations:?} of {transitions}"
    );
    assert!(final_misses.is_empty(), "{final_misses:?}");
}
