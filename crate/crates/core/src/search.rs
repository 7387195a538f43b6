//! Completely-labeled cells of the product subdivision, and the refinement
//! loop built on them.
//!
//! A product cell is a pre-equilibrium certificate when the root labels of its
//! `∏_j |S_j|` vertex profiles are pairwise distinct, i.e. they hit every pure
//! profile exactly once. [`solve`] looks for such cells on successively finer
//! grids and reports the regret of the best cell's barycenter at each stage.

use std::sync::atomic::{AtomicU32, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{gain_table_unchecked, Game, MixedProfile, PureProfile};
use crate::root::root_label_unchecked;
use crate::scalar::{Rational, Scalar};
use crate::subdivision::{cell_diameter, ProductCell, ProductGrid};

/// Default cap on the number of distinct vertex profiles a scan may label.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "NASH_BUDGET";

pub fn default_budget() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// A product cell whose vertex labels cover every pure profile.
#[derive(Debug, Clone, PartialEq)]
pub struct PreEquilibriumCert {
    pub cell: ProductCell,
    /// `label_map[v]` is the root label of `cell.vertex_profiles[v]`.
    pub label_map: Vec<PureProfile>,
}

impl PreEquilibriumCert {
    /// Recomputes every label from scratch and checks bijectivity.
    pub fn verify<S: Scalar>(&self, game: &Game<S>) -> bool {
        if self.label_map.len() != game.profile_count()
            || self.cell.vertex_profiles.len() != self.label_map.len()
        {
            return false;
        }
        let mut seen = vec![false; game.profile_count()];
        for (profile, label) in self.cell.vertex_profiles.iter().zip(&self.label_map) {
            let sigma = profile.map(S::from_rational);
            match root_label_unchecked(game, &sigma) {
                Ok(l) if l == *label => {}
                _ => return false,
            }
            let idx = game.pure_index(label);
            if std::mem::replace(&mut seen[idx], true) {
                return false;
            }
        }
        true
    }
}

/// Which branch of the two-case limit argument a cell falls into, judged on
/// its vertex profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellClassification {
    /// Every player fails the share test somewhere; `witnesses[i]` is the
    /// first vertex profile where player `i` is not up.
    SomePlayerNotUp { witnesses: Vec<usize> },
    /// The lowest-index player that is up at every vertex profile.
    PlayerUpEverywhere { player: usize },
}

pub fn classify_cell<S: Scalar>(game: &Game<S>, cell: &ProductCell) -> CellClassification {
    let n = game.num_players();
    let tables: Vec<_> = cell
        .vertex_profiles
        .iter()
        .map(|p| gain_table_unchecked(game, &p.map(S::from_rational)))
        .collect();
    for i in 0..n {
        if tables.iter().all(|t| t.up[i]) {
            return CellClassification::PlayerUpEverywhere { player: i };
        }
    }
    let witnesses = (0..n)
        .map(|i| tables.iter().position(|t| !t.up[i]).unwrap_or(0))
        .collect();
    CellClassification::SomePlayerNotUp { witnesses }
}

/// Barycenter of the certificate's cell.
pub fn representative(cert: &PreEquilibriumCert) -> MixedProfile<Rational> {
    barycenter(&cert.cell)
}

pub fn barycenter(cell: &ProductCell) -> MixedProfile<Rational> {
    let count = Rational::from_integer(BigInt::from(cell.vertex_profiles.len()));
    let first = &cell.vertex_profiles[0];
    let mut dist: Vec<Vec<Rational>> = first
        .dist
        .iter()
        .map(|d| vec![Rational::zero(); d.len()])
        .collect();
    for p in &cell.vertex_profiles {
        for (acc, d) in dist.iter_mut().zip(&p.dist) {
            for (a, x) in acc.iter_mut().zip(d) {
                *a += x;
            }
        }
    }
    for d in dist.iter_mut().flatten() {
        *d /= &count;
    }
    MixedProfile::new(dist)
}

/// Result of a full cell scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutcome {
    pub certs: Vec<PreEquilibriumCert>,
    pub cells_scanned: usize,
    pub vertex_profiles: usize,
}

/// All completely-labeled product cells at the given per-player resolutions,
/// in canonical cell order. An empty list is a legitimate outcome.
pub fn find_pre_equilibria<S: Scalar>(
    game: &Game<S>,
    resolutions: &[u32],
) -> Result<Vec<PreEquilibriumCert>> {
    Ok(scan(game, resolutions, default_budget())?.certs)
}

/// Vertex-profile count of a grid, computed without building it.
pub fn vertex_profile_count(shape: &[usize], resolutions: &[u32]) -> u128 {
    shape.iter().zip(resolutions).fold(1u128, |acc, (&k, &m)| {
        let d = (k - 1) as u128;
        let mut c = 1u128;
        for t in 0..d {
            c = c.saturating_mul(m as u128 + d - t) / (t + 1);
        }
        acc.saturating_mul(c)
    })
}

pub fn scan<S: Scalar>(game: &Game<S>, resolutions: &[u32], budget: u128) -> Result<ScanOutcome> {
    let shape = game.shape();
    if resolutions.len() != shape.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} resolutions for {} players",
            resolutions.len(),
            shape.len()
        )));
    }
    if resolutions.contains(&0) {
        return Err(Error::ResolutionZero);
    }
    let required = vertex_profile_count(&shape, resolutions);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    if game.profile_count() >= u32::MAX as usize {
        return Err(Error::BudgetExceeded {
            required: game.profile_count() as u128,
            budget: u32::MAX as u128,
        });
    }
    let grid = ProductGrid::for_game(game, resolutions)?;
    let labeler = Labeler::new(game, &grid);
    let profiles = game.profile_count();
    let hits: Vec<usize> = (0..grid.cell_count())
        .into_par_iter()
        .map_init(
            || (Vec::new(), vec![false; profiles]),
            |(keys, seen), c| labeler.completely_labeled(c, keys, seen).then_some(c),
        )
        .flatten()
        .collect();
    let certs = hits
        .into_iter()
        .map(|c| {
            let cell = grid.cell(c);
            let label_map = cell
                .vertex_ids
                .iter()
                .map(|ids| game.pure_from_index(labeler.label(grid.vertex_key(ids)) as usize))
                .collect();
            PreEquilibriumCert { cell, label_map }
        })
        .collect();
    Ok(ScanOutcome {
        certs,
        cells_scanned: grid.cell_count(),
        vertex_profiles: grid.vertex_profile_count(),
    })
}

const UNLABELED: u32 = u32::MAX;

/// Memoized root labels of lattice vertex profiles.
///
/// In exact mode with representable payoffs, labels come from integer
/// arithmetic: scaling every payoff of player `i` by a common denominator and
/// every lattice coordinate by its resolution multiplies all of player `i`'s
/// deviation payoffs by the same positive constant, which leaves the argmin
/// unchanged. Otherwise labels are computed by the generic root function.
struct Labeler<'a, S> {
    game: &'a Game<S>,
    grid: &'a ProductGrid,
    scaled: Option<Vec<Vec<i128>>>,
    memo: Vec<AtomicU32>,
}

impl<'a, S: Scalar> Labeler<'a, S> {
    fn new(game: &'a Game<S>, grid: &'a ProductGrid) -> Self {
        let memo = (0..grid.vertex_profile_count())
            .map(|_| AtomicU32::new(UNLABELED))
            .collect();
        Labeler {
            game,
            grid,
            scaled: integer_payoffs(game),
            memo,
        }
    }

    fn label(&self, key: usize) -> u32 {
        let cached = self.memo[key].load(Ordering::Relaxed);
        if cached != UNLABELED {
            return cached;
        }
        let ids = self.grid.vertex_ids_of_key(key);
        let label = self
            .scaled
            .as_ref()
            .and_then(|scaled| self.integer_label(scaled, &ids))
            .unwrap_or_else(|| self.generic_label(&ids));
        let idx = self.game.pure_index(&label) as u32;
        // concurrent duplicates write the same value
        self.memo[key].store(idx, Ordering::Relaxed);
        idx
    }

    fn generic_label(&self, ids: &[usize]) -> PureProfile {
        let sigma = self.grid.vertex_profile(ids).map(S::from_rational);
        root_label_unchecked(self.game, &sigma)
            .expect("lattice vertex profiles have nonempty supports")
    }

    fn integer_label(&self, scaled: &[Vec<i128>], ids: &[usize]) -> Option<PureProfile> {
        let tris = self.grid.triangulations();
        let weights: Vec<&[u32]> = ids
            .iter()
            .zip(tris)
            .map(|(&v, t)| t.numerators(v))
            .collect();
        let shape = self.game.shape();
        let n = shape.len();
        let mut label = Vec::with_capacity(n);
        for i in 0..n {
            let values = integer_deviation_payoffs(&scaled[i], &shape, &weights, i)?;
            let mut best: Option<(usize, i128)> = None;
            for (s, &v) in values.iter().enumerate() {
                if weights[i][s] == 0 {
                    continue;
                }
                if best.is_none_or(|(_, b)| v < b) {
                    best = Some((s, v));
                }
            }
            label.push(best?.0);
        }
        Some(PureProfile(label))
    }

    fn completely_labeled(&self, cell: usize, keys: &mut Vec<usize>, seen: &mut [bool]) -> bool {
        self.cell_keys(cell, keys);
        seen.iter_mut().for_each(|x| *x = false);
        for &key in keys.iter() {
            let l = self.label(key) as usize;
            if std::mem::replace(&mut seen[l], true) {
                return false;
            }
        }
        true
    }

    fn cell_keys(&self, cell: usize, keys: &mut Vec<usize>) {
        let factor = self.grid.factor_of(cell);
        keys.clear();
        keys.push(0);
        for (t, &c) in self.grid.triangulations().iter().zip(&factor) {
            let radix = t.vertex_count();
            let verts = t.cell(c);
            let prev = std::mem::take(keys);
            for k in prev {
                for &v in verts {
                    keys.push(k * radix + v);
                }
            }
        }
    }
}

/// Payoff tensors scaled to integers, one common denominator per player.
fn integer_payoffs<S: Scalar>(game: &Game<S>) -> Option<Vec<Vec<i128>>> {
    (0..game.num_players())
        .map(|i| {
            let exact: Vec<Rational> = game
                .payoff_tensor(i)
                .iter()
                .map(Scalar::to_rational)
                .collect::<Option<_>>()?;
            let lcm = exact
                .iter()
                .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            exact
                .iter()
                .map(|r| {
                    let v = r.numer() * (&lcm / r.denom());
                    // headroom for the lattice-weight products
                    v.to_i64().map(i128::from)
                })
                .collect()
        })
        .collect()
}

/// `Σ_{s_-i} ∏_{j≠i} a_j(s_j) · G_i(s, s_-i)` for each `s`, with integer
/// lattice numerators `a_j`; `None` on overflow.
fn integer_deviation_payoffs(
    tensor: &[i128],
    shape: &[usize],
    weights: &[&[u32]],
    player: usize,
) -> Option<Vec<i128>> {
    let n = shape.len();
    let k = shape[player];
    let mut out = vec![0i128; k];
    let mut choice = vec![0usize; n];
    for &g in tensor {
        let mut w: i128 = 1;
        for j in 0..n {
            if j != player {
                w = w.checked_mul(weights[j][choice[j]] as i128)?;
                if w == 0 {
                    break;
                }
            }
        }
        if w != 0 {
            let s = choice[player];
            out[s] = out[s].checked_add(w.checked_mul(g)?)?;
        }
        let mut j = n;
        while j > 0 {
            j -= 1;
            choice[j] += 1;
            if choice[j] < shape[j] {
                break;
            }
            choice[j] = 0;
        }
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions<S> {
    pub eps: S,
    pub m0: u32,
    pub refine_factor: u32,
    pub max_stages: usize,
    pub budget: u128,
}

impl<S: Scalar> SolveOptions<S> {
    pub fn new(eps: S) -> Self {
        SolveOptions {
            eps,
            m0: 1,
            refine_factor: 2,
            max_stages: 6,
            budget: default_budget(),
        }
    }
}

/// The certificate chosen at one stage and its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ChosenCell<S> {
    pub cell_index: usize,
    pub factor: Vec<usize>,
    pub classification: CellClassification,
    pub representative: MixedProfile<S>,
    pub t_value: S,
    pub max_regret: S,
    pub diameter: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord<S> {
    pub stage: usize,
    pub resolutions: Vec<u32>,
    pub cells_scanned: usize,
    pub pre_equilibria_found: usize,
    /// `None` when the stage found no certificate.
    pub chosen: Option<ChosenCell<S>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    StagesExhausted,
    BudgetExceeded,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::StagesExhausted => "stages_exhausted",
            StopReason::BudgetExceeded => "budget_exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinalRecord<S> {
    pub profile: MixedProfile<S>,
    pub max_regret: S,
    pub converged: bool,
    pub stop_reason: StopReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<S> {
    pub stages: Vec<StageRecord<S>>,
    pub final_result: FinalRecord<S>,
}

/// Refines the grid geometrically until the chosen barycenter is an
/// `eps`-equilibrium or the stage limit is reached.
///
/// A stage without certificates is recorded and refinement continues; only a
/// run in which no stage finds one fails with `NoPreEquilibriumFound`.
pub fn solve<S: Scalar>(game: &Game<S>, opts: &SolveOptions<S>) -> Result<SolveReport<S>> {
    solve_timed(game, opts).map(|(report, _)| report)
}

/// [`solve`], plus wall-clock time per stage.
pub fn solve_timed<S: Scalar>(
    game: &Game<S>,
    opts: &SolveOptions<S>,
) -> Result<(SolveReport<S>, Vec<Duration>)> {
    if opts.eps.is_negative_tol() {
        return Err(Error::NegativeEpsilon);
    }
    if opts.m0 == 0 {
        return Err(Error::ResolutionZero);
    }
    if opts.refine_factor < 2 {
        return Err(Error::ParameterOutOfRange(format!(
            "refine factor {} < 2",
            opts.refine_factor
        )));
    }
    if opts.max_stages == 0 {
        return Err(Error::ParameterOutOfRange(
            "max_stages must be at least 1".into(),
        ));
    }
    let n = game.num_players();
    let mut stages = Vec::new();
    let mut timings = Vec::new();
    let mut last: Option<MixedProfile<S>> = None;
    let mut stop = StopReason::StagesExhausted;
    let mut m = opts.m0;
    for stage in 0..opts.max_stages {
        let started = Instant::now();
        let resolutions = vec![m; n];
        let outcome = match scan(game, &resolutions, opts.budget) {
            Ok(o) => o,
            Err(Error::BudgetExceeded { .. }) if stage > 0 => {
                stop = StopReason::BudgetExceeded;
                break;
            }
            Err(e) => return Err(e),
        };
        let chosen = choose(game, &outcome.certs);
        let converged = chosen
            .as_ref()
            .is_some_and(|c| !c.max_regret.gt_tol(&opts.eps));
        if let Some(c) = &chosen {
            last = Some(c.representative.clone());
        }
        stages.push(StageRecord {
            stage,
            resolutions,
            cells_scanned: outcome.cells_scanned,
            pre_equilibria_found: outcome.certs.len(),
            chosen,
        });
        timings.push(started.elapsed());
        if converged {
            stop = StopReason::Converged;
            break;
        }
        match m.checked_mul(opts.refine_factor) {
            Some(next) => m = next,
            None => break,
        }
    }
    let Some(profile) = last else {
        return Err(Error::NoPreEquilibriumFound {
            stage: stages.len(),
            resolutions: stages.iter().map(|s| s.resolutions.clone()).collect(),
        });
    };
    let max_regret = gain_table_unchecked(game, &profile).max_regret();
    let converged = !max_regret.gt_tol(&opts.eps);
    if !converged && stop == StopReason::Converged {
        stop = StopReason::StagesExhausted;
    }
    let final_result = FinalRecord {
        profile,
        max_regret,
        converged,
        stop_reason: stop,
    };
    Ok((
        SolveReport {
            stages,
            final_result,
        },
        timings,
    ))
}

/// The certificate whose barycenter has the smallest `T`; ties go to the
/// earliest cell.
fn choose<S: Scalar>(game: &Game<S>, certs: &[PreEquilibriumCert]) -> Option<ChosenCell<S>> {
    let mut best: Option<(usize, MixedProfile<S>, crate::game::GainTable<S>)> = None;
    for (k, cert) in certs.iter().enumerate() {
        let rep = representative(cert).map(S::from_rational);
        let table = gain_table_unchecked(game, &rep);
        let better = match &best {
            None => true,
            Some((_, _, b)) => b.total.gt_tol(&table.total),
        };
        if better {
            best = Some((k, rep, table));
        }
    }
    let (k, representative, table) = best?;
    let cert = &certs[k];
    Some(ChosenCell {
        cell_index: cert.cell.index,
        factor: cert.cell.factor.clone(),
        classification: classify_cell(game, &cert.cell),
        max_regret: table.max_regret(),
        t_value: table.total,
        representative,
        diameter: cell_diameter(&cert.cell),
    })
}
