//! Fixture games and random corpora shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use prenash::io::parse_game;
use prenash::{Game, MixedProfile, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn load(name: &str) -> Game<Rational> {
    parse_game(data(name)).expect("fixture parses")
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_game(shape: &[usize], payoffs: &[Vec<i64>]) -> Game<Rational> {
    Game::from_shape(
        shape,
        payoffs
            .iter()
            .map(|t| t.iter().map(|&v| int(v)).collect())
            .collect(),
    )
    .unwrap()
}

pub fn matching_pennies() -> Game<Rational> {
    load("matching_pennies.json")
}

pub fn prisoners_dilemma() -> Game<Rational> {
    load("prisoners_dilemma.json")
}

pub fn battle_of_sexes() -> Game<Rational> {
    load("battle_of_sexes.json")
}

pub fn rock_paper_scissors() -> Game<Rational> {
    load("rock_paper_scissors.json")
}

/// Seed for every generated corpus.
pub const SEED: u64 = 0x5eed_2024;

pub fn random_game(rng: &mut impl Rng, shape: &[usize], lo: i64, hi: i64) -> Game<Rational> {
    let count: usize = shape.iter().product();
    let payoffs: Vec<Vec<i64>> = (0..shape.len())
        .map(|_| (0..count).map(|_| rng.random_range(lo..=hi)).collect())
        .collect();
    int_game(shape, &payoffs)
}

/// A distribution over `k` strategies with small rational weights; roughly
/// one entry in three is zero so supports vary.
pub fn random_distribution(rng: &mut impl Rng, k: usize) -> Vec<Rational> {
    loop {
        let w: Vec<i64> = (0..k)
            .map(|_| {
                if rng.random_bool(1.0 / 3.0) {
                    0
                } else {
                    rng.random_range(1..=12)
                }
            })
            .collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w.iter().map(|&x| ratio(x, total)).collect();
        }
    }
}

pub fn random_profile(rng: &mut impl Rng, shape: &[usize]) -> MixedProfile<Rational> {
    MixedProfile::new(shape.iter().map(|&k| random_distribution(rng, k)).collect())
}

/// 50 integer games with payoffs in [-5, 5] and shapes up to 3x3x3.
pub fn random_corpus() -> Vec<Game<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..50)
        .map(|_| {
            let n = rng.random_range(1..=3);
            let shape: Vec<usize> = (0..n).map(|_| rng.random_range(1..=3)).collect();
            random_game(&mut rng, &shape, -5, 5)
        })
        .collect()
}

/// Named fixture suite: the four classic games, 20 random 2x2 and 5 random
/// 2x2x2 games with payoffs in [-5, 5].
pub fn fixture_suite() -> Vec<(String, Game<Rational>)> {
    let mut out = vec![
        ("matching pennies".to_string(), matching_pennies()),
        ("rock paper scissors".to_string(), rock_paper_scissors()),
        ("prisoner's dilemma".to_string(), prisoners_dilemma()),
        ("battle of the sexes".to_string(), battle_of_sexes()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for k in 0..20 {
        out.push((
            format!("random 2x2 #{k}"),
            random_game(&mut rng, &[2, 2], -5, 5),
        ));
    }
    for k in 0..5 {
        out.push((
            format!("random 2x2x2 #{k}"),
            random_game(&mut rng, &[2, 2, 2], -5, 5),
        ));
    }
    out
}

/// Ten single-player games with two or three strategies, several with ties.
pub fn single_player_suite() -> Vec<Game<Rational>> {
    [
        vec![0, 1],
        vec![1, 0],
        vec![2, 2],
        vec![-3, 5],
        vec![0, 1, 2],
        vec![2, 1, 0],
        vec![1, 1, 0],
        vec![0, 1, 1],
        vec![4, 4, 4],
        vec![3, -1, 3],
    ]
    .iter()
    .map(|p| int_game(&[p.len()], std::slice::from_ref(p)))
    .collect()
}
