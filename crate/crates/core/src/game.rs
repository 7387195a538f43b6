//! Finite normal-form games, mixed profiles, and the gain functionals.
//!
//! For a profile `σ`, player `i` and pure strategy `s`, the gain
//! `A_i^s(σ) = max(f_i(σ(i,s)) - f_i(σ), 0)` measures what `i` would win by
//! switching to `s`. `A_i` is the best such gain and `T` the sum of best gains
//! over players; `T(σ) = 0` exactly when `σ` is a Nash equilibrium.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// A finite game in normal form.
///
/// Payoff tensors are stored flattened, row-major over `(s_1, …, s_n)` with the
/// last player's strategy varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Game<S> {
    name: String,
    strategy_names: Vec<Vec<String>>,
    payoffs: Vec<Vec<S>>,
    strides: Vec<usize>,
}

impl<S: Scalar> Game<S> {
    pub fn new(
        name: impl Into<String>,
        strategy_names: Vec<Vec<String>>,
        payoffs: Vec<Vec<S>>,
    ) -> Result<Self> {
        let n = strategy_names.len();
        if n == 0 {
            return Err(Error::InvalidGame(
                "a game needs at least one player".into(),
            ));
        }
        for (i, names) in strategy_names.iter().enumerate() {
            if names.is_empty() {
                return Err(Error::InvalidGame(format!("player {i} has no strategies")));
            }
            let mut seen = HashSet::new();
            for name in names {
                if !seen.insert(name.as_str()) {
                    return Err(Error::InvalidGame(format!(
                        "player {i} has duplicate strategy name `{name}`"
                    )));
                }
            }
        }
        if payoffs.len() != n {
            return Err(Error::Shape(format!(
                "expected {n} payoff tensors, got {}",
                payoffs.len()
            )));
        }
        let shape: Vec<usize> = strategy_names.iter().map(Vec::len).collect();
        let size: usize = shape.iter().product();
        for (i, tensor) in payoffs.iter().enumerate() {
            if tensor.len() != size {
                return Err(Error::Shape(format!(
                    "payoff tensor of player {i} has {} entries, expected {size}",
                    tensor.len()
                )));
            }
        }
        let mut strides = vec![1; n];
        for j in (0..n.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * shape[j + 1];
        }
        Ok(Game {
            name: name.into(),
            strategy_names,
            payoffs,
            strides,
        })
    }

    /// Builds a game with strategies named `s0, s1, …`.
    pub fn from_shape(shape: &[usize], payoffs: Vec<Vec<S>>) -> Result<Self> {
        let names = shape
            .iter()
            .map(|&k| (0..k).map(|s| format!("s{s}")).collect())
            .collect();
        Game::new("", names, payoffs)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_players(&self) -> usize {
        self.strategy_names.len()
    }

    pub fn num_strategies(&self, player: usize) -> usize {
        self.strategy_names[player].len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.strategy_names.iter().map(Vec::len).collect()
    }

    pub fn strategy_names(&self) -> &[Vec<String>] {
        &self.strategy_names
    }

    /// Number of pure profiles, `|S|`.
    pub fn profile_count(&self) -> usize {
        self.payoffs[0].len()
    }

    pub fn payoff_tensor(&self, player: usize) -> &[S] {
        &self.payoffs[player]
    }

    /// Flat tensor index of a pure profile.
    pub fn pure_index(&self, profile: &PureProfile) -> usize {
        profile
            .0
            .iter()
            .zip(&self.strides)
            .map(|(s, st)| s * st)
            .sum()
    }

    pub fn pure_from_index(&self, mut index: usize) -> PureProfile {
        let choice = self
            .strides
            .iter()
            .map(|st| {
                let s = index / st;
                index %= st;
                s
            })
            .collect();
        PureProfile(choice)
    }

    pub fn payoff(&self, player: usize, profile: &PureProfile) -> &S {
        &self.payoffs[player][self.pure_index(profile)]
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Game<T> {
        Game {
            name: self.name.clone(),
            strategy_names: self.strategy_names.clone(),
            payoffs: self
                .payoffs
                .iter()
                .map(|t| t.iter().map(&f).collect())
                .collect(),
            strides: self.strides.clone(),
        }
    }

    /// Largest payoff minus smallest payoff, over all players and profiles.
    pub fn payoff_range(&self) -> S {
        let mut entries = self.payoffs.iter().flatten();
        let first = entries.next().cloned().unwrap_or_else(S::zero);
        let (mut lo, mut hi) = (first.clone(), first);
        for v in entries {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        hi - lo
    }

    /// Checks that `sigma` has this game's shape and holds probability vectors.
    pub fn check_profile(&self, sigma: &MixedProfile<S>) -> Result<()> {
        if sigma.dist.len() != self.num_players() {
            return Err(Error::DimensionMismatch(format!(
                "profile has {} components, game has {} players",
                sigma.dist.len(),
                self.num_players()
            )));
        }
        for (i, d) in sigma.dist.iter().enumerate() {
            if d.len() != self.num_strategies(i) {
                return Err(Error::DimensionMismatch(format!(
                    "component {i} has length {}, player has {} strategies",
                    d.len(),
                    self.num_strategies(i)
                )));
            }
            let mut sum = S::zero();
            for p in d {
                if p.is_negative_tol() {
                    return Err(Error::InvalidDistribution {
                        player: i,
                        reason: format!("negative probability {p}"),
                    });
                }
                sum = sum + p.clone();
            }
            if !sum.eq_tol(&S::one()) {
                return Err(Error::InvalidDistribution {
                    player: i,
                    reason: format!("probabilities sum to {sum}"),
                });
            }
        }
        Ok(())
    }

    fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.num_players() {
            return Err(Error::IndexOutOfRange(format!(
                "player {player} of {}",
                self.num_players()
            )));
        }
        Ok(())
    }
}

impl Game<Rational> {
    pub fn to_float(&self) -> Game<f64> {
        self.map(|v| v.to_f64())
    }
}

/// One pure strategy index per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PureProfile(pub Vec<usize>);

impl PureProfile {
    pub fn choice(&self, player: usize) -> usize {
        self.0[player]
    }
}

/// One probability vector per player.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile<S> {
    pub dist: Vec<Vec<S>>,
}

impl<S: Scalar> MixedProfile<S> {
    pub fn new(dist: Vec<Vec<S>>) -> Self {
        MixedProfile { dist }
    }

    /// The degenerate profile identified with a pure profile.
    pub fn pure(shape: &[usize], profile: &PureProfile) -> Self {
        let dist = shape
            .iter()
            .zip(&profile.0)
            .map(|(&k, &s)| degenerate(k, s))
            .collect();
        MixedProfile { dist }
    }

    pub fn uniform(shape: &[usize]) -> Self {
        let dist = shape
            .iter()
            .map(|&k| {
                let p = S::one() / S::from_i64(k as i64);
                vec![p; k]
            })
            .collect();
        MixedProfile { dist }
    }

    pub fn prob(&self, player: usize, strategy: usize) -> &S {
        &self.dist[player][strategy]
    }

    /// Indices with positive probability for `player`.
    pub fn support(&self, player: usize) -> Vec<usize> {
        self.dist[player]
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_positive_tol())
            .map(|(s, _)| s)
            .collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MixedProfile<T> {
        MixedProfile {
            dist: self
                .dist
                .iter()
                .map(|d| d.iter().map(&f).collect())
                .collect(),
        }
    }

    /// ℓ∞ distance between two profiles of the same shape.
    pub fn linf_distance(&self, other: &Self) -> S {
        let mut best = S::zero();
        for (a, b) in self.dist.iter().flatten().zip(other.dist.iter().flatten()) {
            let d = if a > b {
                a.clone() - b.clone()
            } else {
                b.clone() - a.clone()
            };
            if d > best {
                best = d;
            }
        }
        best
    }
}

impl MixedProfile<Rational> {
    pub fn to_float(&self) -> MixedProfile<f64> {
        self.map(|v| v.to_f64())
    }
}

pub(crate) fn degenerate<S: Scalar>(k: usize, s: usize) -> Vec<S> {
    (0..k)
        .map(|t| if t == s { S::one() } else { S::zero() })
        .collect()
}

/// Gain functionals evaluated at one profile.
#[derive(Debug, Clone, PartialEq)]
pub struct GainTable<S> {
    /// `gains[i][s] = A_i^s(σ)`.
    pub gains: Vec<Vec<S>>,
    /// `best[i] = A_i(σ)`.
    pub best: Vec<S>,
    /// `T(σ)`.
    pub total: S,
    /// `up[i]` iff `A_i(σ) > T(σ)/(n+1)`.
    pub up: Vec<bool>,
}

/// Expected payoff `f_i(σ)`, by direct expansion over all pure profiles.
pub fn evaluate_payoff<S: Scalar>(
    game: &Game<S>,
    sigma: &MixedProfile<S>,
    player: usize,
) -> Result<S> {
    game.check_player(player)?;
    game.check_profile(sigma)?;
    Ok(expected_payoff(game, sigma, player))
}

pub(crate) fn expected_payoff<S: Scalar>(
    game: &Game<S>,
    sigma: &MixedProfile<S>,
    player: usize,
) -> S {
    let tensor = &game.payoffs[player];
    let mut total = S::zero();
    for_each_weighted(game, sigma, None, |idx, w| {
        total = total.clone() + w * tensor[idx].clone();
    });
    total
}

/// `f_i(σ(i,s))` for every `s ∈ S_i`, by contracting the tensor against the
/// other players' distributions.
pub(crate) fn deviation_payoffs<S: Scalar>(
    game: &Game<S>,
    sigma: &MixedProfile<S>,
    player: usize,
) -> Vec<S> {
    let tensor = &game.payoffs[player];
    let stride = game.strides[player];
    let k = game.num_strategies(player);
    let mut out = vec![S::zero(); k];
    for_each_weighted(game, sigma, Some(player), |idx, w| {
        let s = (idx / stride) % k;
        out[s] = out[s].clone() + w * tensor[idx].clone();
    });
    out
}

/// Visits every pure profile with nonzero weight `∏_j σ_j(s_j)`; the factor of
/// `skip` (if any) is left out of the product.
fn for_each_weighted<S: Scalar>(
    game: &Game<S>,
    sigma: &MixedProfile<S>,
    skip: Option<usize>,
    mut visit: impl FnMut(usize, S),
) {
    let n = game.num_players();
    let shape = game.shape();
    let mut choice = vec![0usize; n];
    // prefix[j] = weight of players 0..j
    let mut prefix: Vec<S> = vec![S::one(); n + 1];
    let factor = |j: usize, s: usize| -> S {
        if Some(j) == skip {
            S::one()
        } else {
            sigma.dist[j][s].clone()
        }
    };
    for j in 0..n {
        prefix[j + 1] = prefix[j].clone() * factor(j, 0);
    }
    loop {
        let w = prefix[n].clone();
        if !w.is_zero() {
            let idx = choice.iter().zip(&game.strides).map(|(s, st)| s * st).sum();
            visit(idx, w);
        }
        // odometer, last player fastest
        let mut j = n;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            choice[j] += 1;
            if choice[j] < shape[j] {
                break;
            }
            choice[j] = 0;
        }
        for t in j..n {
            prefix[t + 1] = prefix[t].clone() * factor(t, choice[t]);
        }
        // skip whole subtrees of zero weight
        if prefix[j + 1].is_zero() && j + 1 < n {
            for t in j + 1..n {
                choice[t] = shape[t] - 1;
            }
        }
    }
}

/// `σ(i,s)`: player `i` switches to the pure strategy `s`.
pub fn deviation_profile<S: Scalar>(
    sigma: &MixedProfile<S>,
    player: usize,
    strategy: usize,
) -> Result<MixedProfile<S>> {
    let k = match sigma.dist.get(player) {
        Some(d) => d.len(),
        None => {
            return Err(Error::IndexOutOfRange(format!(
                "player {player} of {}",
                sigma.dist.len()
            )))
        }
    };
    if strategy >= k {
        return Err(Error::IndexOutOfRange(format!(
            "strategy {strategy} of {k} for player {player}"
        )));
    }
    let mut out = sigma.clone();
    out.dist[player] = degenerate(k, strategy);
    Ok(out)
}

pub fn gain_table<S: Scalar>(game: &Game<S>, sigma: &MixedProfile<S>) -> Result<GainTable<S>> {
    game.check_profile(sigma)?;
    Ok(gain_table_unchecked(game, sigma))
}

pub(crate) fn gain_table_unchecked<S: Scalar>(
    game: &Game<S>,
    sigma: &MixedProfile<S>,
) -> GainTable<S> {
    let n = game.num_players();
    let mut gains = Vec::with_capacity(n);
    let mut best = Vec::with_capacity(n);
    let mut total = S::zero();
    for i in 0..n {
        let current = expected_payoff(game, sigma, i);
        let row: Vec<S> = deviation_payoffs(game, sigma, i)
            .into_iter()
            .map(|v| {
                let diff = v - current.clone();
                if diff.is_positive_tol() {
                    diff
                } else {
                    S::zero()
                }
            })
            .collect();
        let mut b = S::zero();
        for g in &row {
            if *g > b {
                b = g.clone();
            }
        }
        total = total + b.clone();
        best.push(b);
        gains.push(row);
    }
    let threshold = total.clone() / S::from_i64(n as i64 + 1);
    let up = best.iter().map(|b| b.gt_tol(&threshold)).collect();
    GainTable {
        gains,
        best,
        total,
        up,
    }
}

/// `max_i A_i(σ)`: the largest gain any single player can secure by deviating.
pub fn max_regret<S: Scalar>(game: &Game<S>, sigma: &MixedProfile<S>) -> Result<S> {
    let table = gain_table(game, sigma)?;
    Ok(table.max_regret())
}

impl<S: Scalar> GainTable<S> {
    pub fn max_regret(&self) -> S {
        let mut m = S::zero();
        for b in &self.best {
            if *b > m {
                m = b.clone();
            }
        }
        m
    }
}

/// Whether `σ` is an `eps`-equilibrium. Pure deviations suffice: any mixed
/// deviation pays a convex combination of pure deviation payoffs.
pub fn is_equilibrium<S: Scalar>(game: &Game<S>, sigma: &MixedProfile<S>, eps: &S) -> Result<bool> {
    if eps.is_negative_tol() {
        return Err(Error::NegativeEpsilon);
    }
    let regret = max_regret(game, sigma)?;
    Ok(!regret.gt_tol(eps))
}
