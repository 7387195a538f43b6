mod common;

use common::int;
use num_traits::Zero;
use prenash::search::find_pre_equilibria;
use prenash::volume::{moved_cell_volume, total_volume_polynomial};
use prenash::{triangulate, Error};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn moved_volume_is_conserved(payoffs in prop::collection::vec(-2i64..=2, 2..=4), m in 1u32..=4) {
        let game = common::int_game(&[payoffs.len()], &[payoffs]);
        let vol = total_volume_polynomial(&game, m).unwrap();
        prop_assert!(vol.constant);
        prop_assert_eq!(vol.total.coeffs(), &[int(1)]);
        prop_assert!(vol.interpolation_check(&game).unwrap());
        prop_assert!(!vol.nonzero_at_one.is_empty());
        let certs: Vec<usize> = find_pre_equilibria(&game, &[m]).unwrap().iter().map(|c| c.cell.index).collect();
        for c in &vol.nonzero_at_one {
            prop_assert!(certs.contains(c));
        }
        // every cell keeps nonnegative volume along the motion
        let tri = triangulate(payoffs_len(&game) - 1, m).unwrap();
        for c in 0..tri.cell_count() {
            for k in 0..=4 {
                let t = common::ratio(k, 4);
                prop_assert!(moved_cell_volume(&game, &tri, c, &t).unwrap() >= prenash::Rational::zero());
            }
        }
    }
}

fn payoffs_len(game: &prenash::Game<prenash::Rational>) -> usize {
    game.num_strategies(0)
}

#[test]
fn rejects_multiplayer_games() {
    assert_eq!(
        total_volume_polynomial(&common::matching_pennies(), 2).unwrap_err(),
        Error::NotSinglePlayer(2)
    );
}
