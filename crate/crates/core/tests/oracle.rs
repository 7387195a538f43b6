mod common;

use common::{int, int_game, ratio};
use num_traits::{One, Zero};
use prenash::oracle::{grid_min_regret, support_enumeration_2p, verify_profile};
use prenash::search::{solve, SolveOptions, DEFAULT_BUDGET};
use prenash::{gain_table, is_equilibrium, Game, MixedProfile, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Extreme points of the equilibrium set of a 2x2 game by direct case
/// analysis of the best-response correspondences. `p` is the probability of
/// row 0, `q` of column 0.
fn case_analysis(a: [i64; 4], b: [i64; 4]) -> Vec<(Rational, Rational)> {
    // row 0 minus row 1 for player 1, as a function of q
    let d1 = |q: &Rational| q * int(a[0] - a[2]) + (int(1) - q) * int(a[1] - a[3]);
    // column 0 minus column 1 for player 2, as a function of p
    let d2 = |p: &Rational| p * int(b[0] - b[1]) + (int(1) - p) * int(b[2] - b[3]);
    let interior_root = |at0: i64, at1: i64| {
        // linear function with values at0, at1 at the endpoints
        (at0 != at1)
            .then(|| ratio(at0, at0 - at1))
            .filter(|r| *r > Rational::zero() && *r < Rational::one())
    };
    let mut qs = vec![int(0), int(1)];
    qs.extend(interior_root(a[1] - a[3], a[0] - a[2]));
    let mut ps = vec![int(0), int(1)];
    ps.extend(interior_root(b[2] - b[3], b[0] - b[1]));
    let best_reply = |diff: Rational, x: &Rational| {
        if diff > Rational::zero() {
            x.is_one()
        } else if diff < Rational::zero() {
            x.is_zero()
        } else {
            true
        }
    };
    let mut out = Vec::new();
    for p in &ps {
        for q in &qs {
            if best_reply(d1(q), p) && best_reply(d2(p), q) {
                out.push((p.clone(), q.clone()));
            }
        }
    }
    out
}

fn as_pq(profile: &MixedProfile<Rational>) -> (Rational, Rational) {
    (profile.dist[0][0].clone(), profile.dist[1][0].clone())
}

fn same_set(mut x: Vec<(Rational, Rational)>, mut y: Vec<(Rational, Rational)>) -> bool {
    x.sort();
    x.dedup();
    y.sort();
    y.dedup();
    x == y
}

fn check_2x2(a: [i64; 4], b: [i64; 4]) {
    let game = int_game(&[2, 2], &[a.to_vec(), b.to_vec()]);
    let found = support_enumeration_2p(&game).unwrap();
    for e in &found.equilibria {
        assert!(
            is_equilibrium(&game, e, &int(0)).unwrap(),
            "{a:?} {b:?}: {e:?}"
        );
        assert!(gain_table(&game, e).unwrap().total.is_zero());
    }
    let got: Vec<_> = found.equilibria.iter().map(as_pq).collect();
    assert!(
        same_set(got.clone(), case_analysis(a, b)),
        "{a:?} {b:?}: {got:?} vs {:?}",
        case_analysis(a, b)
    );
}

#[test]
fn support_enumeration_is_complete_on_small_2x2_games() {
    // every 2x2 game with payoffs in [-1, 1]
    for code in 0..3usize.pow(8) {
        let mut c = code;
        let mut v = [0i64; 8];
        for x in v.iter_mut() {
            *x = (c % 3) as i64 - 1;
            c /= 3;
        }
        check_2x2([v[0], v[1], v[2], v[3]], [v[4], v[5], v[6], v[7]]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn support_enumeration_matches_case_analysis(v in prop::array::uniform8(-2i64..=2)) {
        check_2x2([v[0], v[1], v[2], v[3]], [v[4], v[5], v[6], v[7]]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_enumeration_output_is_exact(rows in 1usize..=3, cols in 1usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let game = common::random_game(&mut rng, &[rows, cols], -3, 3);
        let found = support_enumeration_2p(&game).unwrap();
        prop_assert!(!found.equilibria.is_empty());
        for e in &found.equilibria {
            prop_assert!(is_equilibrium(&game, e, &int(0)).unwrap());
        }
    }

    #[test]
    fn grid_minimum_is_a_lower_envelope(seed in any::<u64>(), m in 1u32..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let game = common::random_game(&mut rng, &[2, 3], -4, 4);
        let best = grid_min_regret(&game, m, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(prenash::max_regret(&game, &best.profile).unwrap(), best.max_regret.clone());
        // a pure profile is a lattice point at every resolution
        for idx in 0..game.profile_count() {
            let pure = MixedProfile::pure(&game.shape(), &game.pure_from_index(idx));
            prop_assert!(prenash::max_regret(&game, &pure).unwrap() >= best.max_regret);
        }
    }
}

#[test]
fn equilibria_of_classic_games() {
    let mp = support_enumeration_2p(&common::matching_pennies()).unwrap();
    assert_eq!(mp.equilibria, vec![MixedProfile::uniform(&[2, 2])]);
    let rps = support_enumeration_2p(&common::rock_paper_scissors()).unwrap();
    assert_eq!(rps.equilibria, vec![MixedProfile::uniform(&[3, 3])]);
    let bos = support_enumeration_2p(&common::battle_of_sexes()).unwrap();
    assert_eq!(bos.equilibria.len(), 3);
}

/// Solver output against both oracles on fixtures with a unique equilibrium.
#[test]
fn cross_validation() {
    let fixtures: Vec<Game<Rational>> = common::fixture_suite()
        .into_iter()
        .map(|(_, g)| g)
        .filter(|g| g.num_players() == 2)
        .filter(|g| {
            let se = support_enumeration_2p(g).unwrap();
            se.equilibria.len() == 1 && !se.degenerate
        })
        .collect();
    assert!(fixtures.len() >= 3);
    for game in fixtures {
        let eps = game.payoff_range() / int(10);
        let mut opts = SolveOptions::new(eps.clone());
        opts.m0 = 2;
        let report = match solve(&game, &opts) {
            Ok(r) => r,
            Err(e) => panic!("{}: {e}", game.name()),
        };
        let fin = &report.final_result;
        assert!(fin.max_regret <= eps, "{}", game.name());
        // barycenters of resolution-m cells live on the lattice of resolution
        // m·lcm(k_j); the grid is searched there so it contains the solver output
        let m = report.stages.last().unwrap().resolutions[0];
        let lcm = game
            .shape()
            .iter()
            .fold(1u32, |acc, &k| num_integer::lcm(acc, k as u32));
        let grid = grid_min_regret(&game, m * lcm, DEFAULT_BUDGET).unwrap();
        assert!(grid.max_regret <= fin.max_regret, "{}", game.name());
    }
}

#[test]
fn verify_reports_evidence() {
    let mp = common::matching_pennies();
    let v = verify_profile(
        &mp,
        &MixedProfile::pure(&[2, 2], &prenash::PureProfile(vec![0, 0])),
        &int(0),
    )
    .unwrap();
    assert!(!v.equilibrium);
    assert_eq!(v.table.best, vec![int(0), int(2)]);

    let mut opts = SolveOptions::new(ratio(1, 10));
    opts.m0 = 2;
    let report = solve(&mp, &opts).unwrap();
    assert!(
        verify_profile(&mp, &report.final_result.profile, &ratio(1, 10))
            .unwrap()
            .equilibrium
    );
}
