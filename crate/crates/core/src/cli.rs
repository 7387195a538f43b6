//! Command-line front end. [`run_cli`] is pure apart from the files it is
//! asked to write, so tests drive it directly.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::game::Game;
use crate::io::{
    eval_json, parse_game, parse_profile, profile_json, scalar_json, verification_json,
    ReportClassification, ReportFile,
};
use crate::oracle::{grid_min_regret, support_enumeration_2p, verify_profile};
use crate::scalar::{parse_rational, NumericMode, Rational, Scalar};
use crate::search::{
    barycenter, classify_cell, default_budget, find_pre_equilibria, scan, solve_timed, SolveOptions,
};
use crate::volume::total_volume_polynomial;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_FOUND: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "prenash",
    version,
    about = "Approximate Nash equilibria of normal-form games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Refine the grid until a cell barycenter is an eps-equilibrium.
    Solve {
        game: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[arg(long, default_value_t = 1)]
        m0: u32,
        #[arg(long, default_value_t = 2)]
        factor: u32,
        #[arg(long = "max-stages", default_value_t = 6)]
        max_stages: usize,
        #[arg(long, default_value = "rational")]
        mode: NumericMode,
        /// Also write the report, with per-stage timings, to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gain table and root label at a profile.
    Eval {
        game: PathBuf,
        #[arg(long)]
        profile: String,
        #[arg(long, default_value = "rational")]
        mode: NumericMode,
    },
    /// List the completely-labeled cells at a resolution.
    Cells {
        game: PathBuf,
        /// One resolution for every player, or a comma-separated list.
        #[arg(long)]
        m: String,
        #[arg(long, default_value = "rational")]
        mode: NumericMode,
    },
    /// Check that the moved volume is constant (single-player games).
    VolumeCheck {
        game: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long = "samples-out")]
        samples_out: Option<PathBuf>,
        /// Number of sampling intervals on [0, 1] for the CSV.
        #[arg(long, default_value_t = 10)]
        samples: u32,
    },
    /// Brute-force grid minimum and, for two players, support enumeration.
    Oracle {
        game: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "rational")]
        mode: NumericMode,
    },
    /// Recompute the gain table at a profile and judge it against eps.
    Verify {
        game: PathBuf,
        #[arg(long)]
        profile: String,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[arg(long, default_value = "rational")]
        mode: NumericMode,
    },
}

fn error_json(code: &str, message: &str) -> String {
    pretty(&json!({ "error": { "code": code, "message": message } }))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

/// Runs one command; returns the exit code and everything meant for stdout.
pub fn run_cli<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (EXIT_OK, e.to_string()),
                _ => (EXIT_INPUT, error_json("USAGE_ERROR", e.to_string().trim())),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(out) => out,
        Err(e) => {
            let code = match e {
                Error::NoPreEquilibriumFound { .. } => EXIT_NOT_FOUND,
                _ => EXIT_INPUT,
            };
            (code, error_json(e.code(), &e.to_string()))
        }
    }
}

fn dispatch(command: Command) -> Result<(i32, String)> {
    let rendered = |r: Result<(i32, Value)>| r.map(|(code, v)| (code, pretty(&v)));
    match command {
        Command::Solve {
            game,
            eps,
            m0,
            factor,
            max_stages,
            mode,
            out,
        } => {
            let args = SolveArgs {
                eps,
                m0,
                factor,
                max_stages,
                out,
            };
            match mode {
                NumericMode::Rational => run_solve::<Rational>(&game, args),
                NumericMode::Float => run_solve::<f64>(&game, args),
            }
        }
        Command::Eval {
            game,
            profile,
            mode,
        } => rendered(match mode {
            NumericMode::Rational => run_eval::<Rational>(&game, &profile),
            NumericMode::Float => run_eval::<f64>(&game, &profile),
        }),
        Command::Cells { game, m, mode } => rendered(match mode {
            NumericMode::Rational => run_cells::<Rational>(&game, &m),
            NumericMode::Float => run_cells::<f64>(&game, &m),
        }),
        Command::VolumeCheck {
            game,
            m,
            samples_out,
            samples,
        } => rendered(run_volume(&game, m, samples_out.as_deref(), samples)),
        Command::Oracle { game, m, mode } => rendered(match mode {
            NumericMode::Rational => run_oracle::<Rational>(&game, m),
            NumericMode::Float => run_oracle::<f64>(&game, m),
        }),
        Command::Verify {
            game,
            profile,
            eps,
            mode,
        } => rendered(match mode {
            NumericMode::Rational => run_verify::<Rational>(&game, &profile, &eps),
            NumericMode::Float => run_verify::<f64>(&game, &profile, &eps),
        }),
    }
}

pub fn parse_eps<S: Scalar>(text: &str) -> Result<S> {
    let eps = parse_rational(text)?;
    if eps < Rational::from_integer(0.into()) {
        return Err(Error::NegativeEpsilon);
    }
    Ok(S::from_rational(&eps))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

struct SolveArgs {
    eps: String,
    m0: u32,
    factor: u32,
    max_stages: usize,
    out: Option<PathBuf>,
}

fn run_solve<S: Scalar>(path: &Path, args: SolveArgs) -> Result<(i32, String)> {
    let game: Game<S> = parse_game(path)?;
    let opts = SolveOptions {
        eps: parse_eps(&args.eps)?,
        m0: args.m0,
        refine_factor: args.factor,
        max_stages: args.max_stages,
        budget: default_budget(),
    };
    let (report, timings) = solve_timed(&game, &opts)?;
    let mut file = ReportFile::new(&game, &opts, &report);
    if let Some(out) = &args.out {
        let mut timed = file.clone();
        timed.timings_ms = Some(timings.iter().map(|d| d.as_secs_f64() * 1e3).collect());
        write_file(out, &(timed.to_json() + "\n"))?;
    }
    file.timings_ms = None;
    let code = if report.final_result.converged {
        EXIT_OK
    } else {
        EXIT_NOT_FOUND
    };
    Ok((code, file.to_json() + "\n"))
}

fn run_eval<S: Scalar>(path: &Path, profile: &str) -> Result<(i32, Value)> {
    let game: Game<S> = parse_game(path)?;
    Ok((EXIT_OK, eval_json(&game, &parse_profile::<S>(profile)?)?))
}

fn parse_resolutions(text: &str, players: usize) -> Result<Vec<u32>> {
    let values = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Error::Value(format!("bad resolution `{p}`")))
        })
        .collect::<Result<Vec<u32>>>()?;
    match values.len() {
        1 => Ok(vec![values[0]; players]),
        n if n == players => Ok(values),
        n => Err(Error::DimensionMismatch(format!(
            "{n} resolutions for {players} players"
        ))),
    }
}

fn run_cells<S: Scalar>(path: &Path, m: &str) -> Result<(i32, Value)> {
    let game: Game<S> = parse_game(path)?;
    let resolutions = parse_resolutions(m, game.num_players())?;
    let outcome = scan(&game, &resolutions, default_budget())?;
    let certs: Vec<Value> = outcome
        .certs
        .iter()
        .map(|c| {
            let labels: Vec<Vec<&str>> = c
                .label_map
                .iter()
                .map(|l| {
                    l.0.iter()
                        .enumerate()
                        .map(|(i, &s)| game.strategy_names()[i][s].as_str())
                        .collect()
                })
                .collect();
            json!({
                "cell_index": c.cell.index,
                "factor": c.cell.factor,
                "vertices": c.cell.vertex_profiles.iter().map(profile_json).collect::<Vec<_>>(),
                "labels": labels,
                "barycenter": profile_json(&barycenter(&c.cell)),
                "classification": ReportClassification::from(&classify_cell(&game, &c.cell)),
            })
        })
        .collect();
    let code = if certs.is_empty() {
        EXIT_NOT_FOUND
    } else {
        EXIT_OK
    };
    Ok((
        code,
        json!({
            "resolutions": resolutions,
            "cells_scanned": outcome.cells_scanned,
            "vertex_profiles": outcome.vertex_profiles,
            "certificates": certs,
        }),
    ))
}

fn run_volume(
    path: &Path,
    m: u32,
    samples_out: Option<&Path>,
    samples: u32,
) -> Result<(i32, Value)> {
    let game: Game<Rational> = parse_game(path)?;
    let vol = total_volume_polynomial(&game, m)?;
    let interpolation = vol.interpolation_check(&game)?;
    let certified: Vec<usize> = find_pre_equilibria(&game, &[m])?
        .iter()
        .map(|c| c.cell.index)
        .collect();
    let all_certified = vol.nonzero_at_one.iter().all(|c| certified.contains(c));
    if let Some(out) = samples_out {
        write_file(out, &vol.samples_csv(samples))?;
    }
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    let ok = vol.constant && interpolation && all_certified && !vol.nonzero_at_one.is_empty();
    Ok((
        if ok { EXIT_OK } else { EXIT_NOT_FOUND },
        json!({
            "resolution": m,
            "coefficients": vol.total.coeffs().iter().map(scalar_json).collect::<Vec<_>>(),
            "constant": vol.constant,
            "g_at_0": scalar_json(&vol.total.eval(&zero)),
            "g_at_1": scalar_json(&vol.total.eval(&one)),
            "nonzero_at_one": vol.nonzero_at_one,
            "certified_cells": certified,
            "interpolation_check": interpolation,
        }),
    ))
}

fn run_oracle<S: Scalar>(path: &Path, m: u32) -> Result<(i32, Value)> {
    let game: Game<S> = parse_game(path)?;
    let grid = grid_min_regret(&game, m, default_budget())?;
    let mut out = json!({
        "grid": {
            "resolution": m,
            "profile": profile_json(&grid.profile),
            "max_regret": scalar_json(&grid.max_regret),
        }
    });
    if game.num_players() == 2 && S::MODE == NumericMode::Rational {
        let exact: Game<Rational> = game.map(|x| x.to_rational().expect("exact mode"));
        let se = support_enumeration_2p(&exact)?;
        out["support_enumeration"] = json!({
            "degenerate": se.degenerate,
            "equilibria": se.equilibria.iter().map(profile_json).collect::<Vec<_>>(),
        });
    }
    Ok((EXIT_OK, out))
}

fn run_verify<S: Scalar>(path: &Path, profile: &str, eps: &str) -> Result<(i32, Value)> {
    let game: Game<S> = parse_game(path)?;
    let sigma = parse_profile::<S>(profile)?;
    let v = verify_profile(&game, &sigma, &parse_eps::<S>(eps)?)?;
    Ok((
        if v.equilibrium {
            EXIT_OK
        } else {
            EXIT_NOT_FOUND
        },
        verification_json(&v),
    ))
}
