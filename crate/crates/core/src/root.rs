//! The canonical root function and its straight-line motion.
//!
//! `root_label` picks, for every player, the pure strategy in the support of
//! `σ_i` whose deviation payoff `f_i(σ(i,s))` is smallest (lowest index on
//! ties). The support-weighted average of these payoffs is `f_i(σ)`, so the
//! minimum never exceeds it and the chosen strategy carries zero gain.

use crate::error::{Error, Result};
use crate::game::{deviation_payoffs, gain_table_unchecked, Game, MixedProfile, PureProfile};
use crate::scalar::Scalar;

pub fn root_label<S: Scalar>(game: &Game<S>, sigma: &MixedProfile<S>) -> Result<PureProfile> {
    game.check_profile(sigma)?;
    root_label_unchecked(game, sigma)
}

pub(crate) fn root_label_unchecked<S: Scalar>(
    game: &Game<S>,
    sigma: &MixedProfile<S>,
) -> Result<PureProfile> {
    let mut label = Vec::with_capacity(game.num_players());
    for i in 0..game.num_players() {
        let values = deviation_payoffs(game, sigma, i);
        let mut best: Option<(usize, &S)> = None;
        for (s, v) in values.iter().enumerate() {
            if !sigma.dist[i][s].is_positive_tol() {
                continue;
            }
            match best {
                Some((_, b)) if !b.gt_tol(v) => {}
                _ => best = Some((s, v)),
            }
        }
        match best {
            Some((s, _)) => label.push(s),
            None => return Err(Error::EmptySupport { player: i }),
        }
    }
    Ok(PureProfile(label))
}

/// `h(σ, t)`: per-player interpolation from `σ_i` toward the root label.
pub fn root_motion<S: Scalar>(
    game: &Game<S>,
    sigma: &MixedProfile<S>,
    t: &S,
) -> Result<MixedProfile<S>> {
    if t.is_negative_tol() || t.gt_tol(&S::one()) {
        return Err(Error::ParameterOutOfRange(format!(
            "motion time {t} outside [0, 1]"
        )));
    }
    let label = root_label(game, sigma)?;
    Ok(motion_toward(sigma, &label, t))
}

pub(crate) fn motion_toward<S: Scalar>(
    sigma: &MixedProfile<S>,
    label: &PureProfile,
    t: &S,
) -> MixedProfile<S> {
    let keep = S::one() - t.clone();
    let dist = sigma
        .dist
        .iter()
        .zip(&label.0)
        .map(|(d, &target)| {
            d.iter()
                .enumerate()
                .map(|(s, p)| {
                    let moved = keep.clone() * p.clone();
                    if s == target {
                        moved + t.clone()
                    } else {
                        moved
                    }
                })
                .collect()
        })
        .collect();
    MixedProfile::new(dist)
}

/// Re-checks the two pointwise root-function laws at `σ`: each label lies in
/// the support and carries zero gain, and the label's degenerate distribution
/// puts no mass outside the support.
pub fn check_root_properties<S: Scalar>(game: &Game<S>, sigma: &MixedProfile<S>) -> bool {
    if game.check_profile(sigma).is_err() {
        return false;
    }
    let Ok(label) = root_label_unchecked(game, sigma) else {
        return false;
    };
    let table = gain_table_unchecked(game, sigma);
    let image = motion_toward(sigma, &label, &S::one());
    label.0.iter().enumerate().all(|(i, &s)| {
        let in_support = sigma.dist[i][s].is_positive_tol();
        let zero_gain = table.gains[i][s].is_zero();
        let outside_clean = sigma.dist[i]
            .iter()
            .zip(&image.dist[i])
            .all(|(before, after)| before.is_positive_tol() || after.is_zero());
        in_support && zero_gain && outside_clean
    })
}
