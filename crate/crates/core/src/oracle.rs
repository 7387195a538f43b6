//! Ground truth that shares nothing with the root-function machinery beyond
//! payoff evaluation: exhaustive lattice regret minimization, and exact
//! support enumeration for two-player games.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{gain_table, gain_table_unchecked, GainTable, Game, MixedProfile};
use crate::linalg::{solve, Solution};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Grid,
    SupportEnum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<S> {
    pub profile: MixedProfile<S>,
    pub max_regret: S,
    pub method: OracleMethod,
}

/// Every distribution over `k` strategies with coordinates in `(1/m)ℤ`,
/// as numerator vectors in lexicographic order.
fn lattice(k: usize, m: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; k];
    fn go(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur[pos] = a;
            go(pos + 1, left - a, cur, out);
        }
    }
    go(0, m, &mut cur, &mut out);
    out
}

/// Minimizes the max regret over all lattice profiles at resolution `m`.
/// The first minimizer in lexicographic order wins ties.
pub fn grid_min_regret<S: Scalar>(game: &Game<S>, m: u32, budget: u128) -> Result<OracleResult<S>> {
    if m == 0 {
        return Err(Error::ResolutionZero);
    }
    let per_player: Vec<Vec<Vec<u32>>> = game.shape().iter().map(|&k| lattice(k, m)).collect();
    let total = per_player
        .iter()
        .fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128));
    if total > budget {
        return Err(Error::BudgetExceeded {
            required: total,
            budget,
        });
    }
    let denom = S::from_i64(m as i64);
    let profile_at = |mut idx: usize| -> MixedProfile<S> {
        let mut dist = vec![Vec::new(); per_player.len()];
        for (j, l) in per_player.iter().enumerate().rev() {
            dist[j] = l[idx % l.len()]
                .iter()
                .map(|&a| S::from_i64(a as i64) / denom.clone())
                .collect();
            idx /= l.len();
        }
        MixedProfile::new(dist)
    };
    let (idx, max_regret) = (0..total as usize)
        .into_par_iter()
        .map(|idx| {
            (
                idx,
                gain_table_unchecked(game, &profile_at(idx)).max_regret(),
            )
        })
        .reduce_with(|a, b| {
            if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        })
        .expect("at least one lattice profile");
    Ok(OracleResult {
        profile: profile_at(idx),
        max_regret,
        method: OracleMethod::Grid,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportEnumeration {
    pub equilibria: Vec<MixedProfile<Rational>>,
    /// Some equilibrium found has a player with more pure best responses than
    /// the opponent's support size. Such games can have equilibrium
    /// components; only their extreme points are listed.
    pub degenerate: bool,
}

/// All equilibria of a nondegenerate bimatrix game, by solving the
/// indifference equations of every support pair exactly.
///
/// When a support system has a continuum of solutions it is re-solved with
/// the indifference condition extended to supersets of the opponent's
/// support, which pins down the extreme points of each equilibrium component.
pub fn support_enumeration_2p(game: &Game<Rational>) -> Result<SupportEnumeration> {
    if game.num_players() != 2 {
        return Err(Error::NotTwoPlayer(game.num_players()));
    }
    let rows = game.num_strategies(0);
    let cols = game.num_strategies(1);
    let a: Vec<Vec<Rational>> = (0..rows)
        .map(|r| game.payoff_tensor(0)[r * cols..(r + 1) * cols].to_vec())
        .collect();
    // b_t[c][r]: player 2's payoff, indexed by player 2's own strategy first
    let b_t: Vec<Vec<Rational>> = (0..cols)
        .map(|c| {
            (0..rows)
                .map(|r| game.payoff_tensor(1)[r * cols + c].clone())
                .collect()
        })
        .collect();

    let mut found: Vec<MixedProfile<Rational>> = Vec::new();
    for row_support in 1u64..(1 << rows) {
        for col_support in 1u64..(1 << cols) {
            // player 2's mix on its support makes player 1 indifferent over player 1's support
            let ys = mixes(&a, col_support, row_support, rows);
            if ys.is_empty() {
                continue;
            }
            let xs = mixes(&b_t, row_support, col_support, cols);
            for x in &xs {
                for y in &ys {
                    if is_bimatrix_equilibrium(&a, &b_t, x, y) {
                        let p = MixedProfile::new(vec![x.clone(), y.clone()]);
                        if !found.contains(&p) {
                            found.push(p);
                        }
                    }
                }
            }
        }
    }
    let degenerate = found.iter().any(|p| {
        let (x, y) = (&p.dist[0], &p.dist[1]);
        best_responses(&a, y) > support_size(y) || best_responses(&b_t, x) > support_size(x)
    });
    Ok(SupportEnumeration {
        equilibria: found,
        degenerate,
    })
}

fn members(mask: u64, len: usize) -> Vec<usize> {
    (0..len).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Mixed strategies of the "mixer" supported on `mix_mask` that make the
/// opponent (whose payoffs are `payoff[opp][mixer]`) indifferent over
/// `opp_mask`. Returns full-length nonnegative vectors.
fn mixes(
    payoff: &[Vec<Rational>],
    mix_mask: u64,
    opp_mask: u64,
    opp_len: usize,
) -> Vec<Vec<Rational>> {
    let mix_len = payoff[0].len();
    let support = members(mix_mask, mix_len);
    let mut out = Vec::new();
    match indifference(payoff, &support, &members(opp_mask, opp_len)) {
        Solution::Unique(x) => out.push(x),
        Solution::Inconsistent => {}
        Solution::Many(_) => {
            let free = ((1u64 << opp_len) - 1) & !opp_mask;
            // every nonempty subset of the remaining opponent strategies
            let mut extra = free;
            while extra != 0 {
                if let Solution::Unique(x) =
                    indifference(payoff, &support, &members(opp_mask | extra, opp_len))
                {
                    out.push(x);
                }
                extra = (extra - 1) & free;
            }
        }
    }
    out.into_iter()
        .filter(|x| x.iter().all(|p| *p >= Rational::zero()))
        .map(|x| {
            let mut full = vec![Rational::zero(); mix_len];
            for (k, &s) in support.iter().enumerate() {
                full[s] = x[k].clone();
            }
            full
        })
        .collect()
}

/// Solves `Σ_{s∈support} payoff[o][s]·x_s = v` for `o ∈ indifferent`,
/// `Σ x_s = 1`, in unknowns `(x_support, v)`. Returns only the `x` part.
fn indifference(payoff: &[Vec<Rational>], support: &[usize], indifferent: &[usize]) -> Solution {
    let width = support.len() + 1;
    let mut lhs = Vec::with_capacity(indifferent.len() + 1);
    let mut rhs = Vec::with_capacity(indifferent.len() + 1);
    for &o in indifferent {
        let mut row: Vec<Rational> = support.iter().map(|&s| payoff[o][s].clone()).collect();
        row.push(-Rational::one());
        lhs.push(row);
        rhs.push(Rational::zero());
    }
    let mut norm = vec![Rational::one(); width];
    norm[width - 1] = Rational::zero();
    lhs.push(norm);
    rhs.push(Rational::one());
    let strip = |mut x: Vec<Rational>| {
        x.pop();
        x
    };
    match solve(&lhs, &rhs) {
        Solution::Unique(x) => Solution::Unique(strip(x)),
        Solution::Many(x) => Solution::Many(strip(x)),
        Solution::Inconsistent => Solution::Inconsistent,
    }
}

/// Best-response check with plain matrix arithmetic.
fn is_bimatrix_equilibrium(
    a: &[Vec<Rational>],
    b_t: &[Vec<Rational>],
    x: &[Rational],
    y: &[Rational],
) -> bool {
    let row_values: Vec<Rational> = a.iter().map(|row| dot(row, y)).collect();
    let col_values: Vec<Rational> = b_t.iter().map(|col| dot(col, x)).collect();
    let u1 = dot(&row_values, x);
    let u2 = dot(&col_values, y);
    row_values.iter().all(|v| *v <= u1) && col_values.iter().all(|v| *v <= u2)
}

fn best_responses(payoff: &[Vec<Rational>], opponent: &[Rational]) -> usize {
    let values: Vec<Rational> = payoff.iter().map(|row| dot(row, opponent)).collect();
    let best = values.iter().max().expect("nonempty strategy set");
    values.iter().filter(|v| *v == best).count()
}

fn support_size(x: &[Rational]) -> usize {
    x.iter().filter(|p| !p.is_zero()).count()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification<S> {
    pub equilibrium: bool,
    pub max_regret: S,
    pub table: GainTable<S>,
}

/// Recomputes all gains at `σ` and judges it against `eps`.
pub fn verify_profile<S: Scalar>(
    game: &Game<S>,
    sigma: &MixedProfile<S>,
    eps: &S,
) -> Result<Verification<S>> {
    if eps.is_negative_tol() {
        return Err(Error::NegativeEpsilon);
    }
    let table = gain_table(game, sigma)?;
    let max_regret = table.max_regret();
    Ok(Verification {
        equilibrium: !max_regret.gt_tol(eps),
        max_regret,
        table,
    })
}
