//! C ABI for the `prenash` solver.
//!
//! Games live behind an opaque [`PrenashGame`] handle. Every fallible call
//! returns a [`PrenashStatus`]; on failure the message is available from
//! [`prenash_last_error`] on the same thread. Strings returned through out
//! parameters are owned by the caller and released with
//! [`prenash_string_free`]. All numbers cross the boundary as text in the
//! scalar grammar of game files (`"3"`, `"0.25"`, `"-1/3"`), and results are
//! returned as JSON documents.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use prenash::cli::parse_eps;
use prenash::io::{eval_json, parse_game_str, parse_profile, verification_json, ReportFile};
use prenash::oracle::verify_profile;
use prenash::search::{default_budget, solve, SolveOptions};
use prenash::{Error, Game, Rational};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrenashStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ShapeError = 4,
    ValueError = 5,
    InvalidGame = 6,
    InvalidDistribution = 7,
    DimensionMismatch = 8,
    IndexOutOfRange = 9,
    NegativeEpsilon = 10,
    EmptySupport = 11,
    ParameterOutOfRange = 12,
    ResolutionZero = 13,
    BudgetExceeded = 14,
    NoPreEquilibriumFound = 15,
    NotSinglePlayer = 16,
    NotTwoPlayer = 17,
    IoError = 18,
    Panic = 99,
}

impl From<&Error> for PrenashStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimensionMismatch(_) => PrenashStatus::DimensionMismatch,
            Error::InvalidDistribution { .. } => PrenashStatus::InvalidDistribution,
            Error::IndexOutOfRange(_) => PrenashStatus::IndexOutOfRange,
            Error::NegativeEpsilon => PrenashStatus::NegativeEpsilon,
            Error::EmptySupport { .. } => PrenashStatus::EmptySupport,
            Error::ParameterOutOfRange(_) => PrenashStatus::ParameterOutOfRange,
            Error::ResolutionZero => PrenashStatus::ResolutionZero,
            Error::BudgetExceeded { .. } => PrenashStatus::BudgetExceeded,
            Error::NoPreEquilibriumFound { .. } => PrenashStatus::NoPreEquilibriumFound,
            Error::NotSinglePlayer(_) => PrenashStatus::NotSinglePlayer,
            Error::NotTwoPlayer(_) => PrenashStatus::NotTwoPlayer,
            Error::InvalidGame(_) => PrenashStatus::InvalidGame,
            Error::Parse { .. } => PrenashStatus::ParseError,
            Error::Shape(_) => PrenashStatus::ShapeError,
            Error::Value(_) => PrenashStatus::ValueError,
            Error::Io(_) => PrenashStatus::IoError,
        }
    }
}

/// Opaque game handle; exact rational payoffs.
pub struct PrenashGame {
    game: Game<Rational>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

enum Failure {
    Status(PrenashStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, converting errors and panics into a status plus last-error text.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PrenashStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PrenashStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(format!("{}: {e}", e.code()));
            PrenashStatus::from(&e)
        }
        Ok(Err(Failure::Status(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            PrenashStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(
            PrenashStatus::NullPointer,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(PrenashStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(p: *const PrenashGame) -> Result<&'a PrenashGame, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::Status(PrenashStatus::NullPointer, "game handle is null".into()))
}

unsafe fn emit(out: *mut *mut c_char, value: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Status(
            PrenashStatus::NullPointer,
            "output pointer is null".into(),
        ));
    }
    *out = CString::new(value)
        .expect("JSON has no nul bytes")
        .into_raw();
    Ok(())
}

/// Parses a game document (same schema as game files). On success `*out`
/// receives a handle to release with [`prenash_game_free`].
#[no_mangle]
pub unsafe extern "C" fn prenash_game_from_json(
    json: *const c_char,
    out: *mut *mut PrenashGame,
) -> PrenashStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Status(
                PrenashStatus::NullPointer,
                "output pointer is null".into(),
            ));
        }
        *out = ptr::null_mut();
        let game = parse_game_str::<Rational>(text(json, "json")?)?;
        *out = Box::into_raw(Box::new(PrenashGame { game }));
        Ok(())
    })
}

/// Releases a game handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn prenash_game_free(game: *mut PrenashGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Number of players, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn prenash_game_num_players(game: *const PrenashGame) -> usize {
    game.as_ref().map_or(0, |g| g.game.num_players())
}

/// Number of pure strategies of `player`, or 0 if the handle is null or the
/// player does not exist.
#[no_mangle]
pub unsafe extern "C" fn prenash_game_num_strategies(
    game: *const PrenashGame,
    player: usize,
) -> usize {
    match game.as_ref() {
        Some(g) if player < g.game.num_players() => g.game.num_strategies(player),
        _ => 0,
    }
}

/// Runs the refinement loop and writes the JSON report to `*out_json`.
/// Non-convergence is not an error: inspect `final.converged` in the report.
#[no_mangle]
pub unsafe extern "C" fn prenash_solve(
    game: *const PrenashGame,
    eps: *const c_char,
    m0: u32,
    refine_factor: u32,
    max_stages: u32,
    out_json: *mut *mut c_char,
) -> PrenashStatus {
    guard(|| {
        let g = &handle(game)?.game;
        let opts = SolveOptions {
            eps: parse_eps::<Rational>(text(eps, "eps")?)?,
            m0,
            refine_factor,
            max_stages: max_stages as usize,
            budget: default_budget(),
        };
        let report = solve(g, &opts)?;
        emit(out_json, ReportFile::new(g, &opts, &report).to_json())
    })
}

/// Gain table and root label at a profile given as a JSON array of arrays.
#[no_mangle]
pub unsafe extern "C" fn prenash_eval(
    game: *const PrenashGame,
    profile_json: *const c_char,
    out_json: *mut *mut c_char,
) -> PrenashStatus {
    guard(|| {
        let g = &handle(game)?.game;
        let sigma = parse_profile::<Rational>(text(profile_json, "profile")?)?;
        emit(out_json, eval_json(g, &sigma)?.to_string())
    })
}

/// Judges a profile against `eps`. `*out_equilibrium` receives the verdict;
/// `out_json` may be null when the evidence is not wanted.
#[no_mangle]
pub unsafe extern "C" fn prenash_verify(
    game: *const PrenashGame,
    profile_json: *const c_char,
    eps: *const c_char,
    out_equilibrium: *mut bool,
    out_json: *mut *mut c_char,
) -> PrenashStatus {
    guard(|| {
        let g = &handle(game)?.game;
        let sigma = parse_profile::<Rational>(text(profile_json, "profile")?)?;
        let v = verify_profile(g, &sigma, &parse_eps::<Rational>(text(eps, "eps")?)?)?;
        if out_equilibrium.is_null() {
            return Err(Failure::Status(
                PrenashStatus::NullPointer,
                "output pointer is null".into(),
            ));
        }
        *out_equilibrium = v.equilibrium;
        if !out_json.is_null() {
            emit(out_json, verification_json(&v).to_string())?;
        }
        Ok(())
    })
}

/// Releases a string produced by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn prenash_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn prenash_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn prenash_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
