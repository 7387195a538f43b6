use std::ffi::{CStr, CString};
use std::ptr;

use prenash_ffi::*;

const MP: &str = r#"{"name":"mp","players":2,"strategies":[["H","T"],["H","T"]],"payoffs":[[1,-1,-1,1],[-1,1,1,-1]]}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn load(json: &str) -> (PrenashStatus, *mut PrenashGame) {
    let mut game = ptr::null_mut();
    let status = unsafe { prenash_game_from_json(c(json).as_ptr(), &mut game) };
    (status, game)
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { prenash_string_free(s) };
    out
}

fn last_error() -> String {
    let p = prenash_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn game_lifecycle() {
    let (status, game) = load(MP);
    assert_eq!(status, PrenashStatus::Ok);
    assert!(prenash_last_error().is_null());
    unsafe {
        assert_eq!(prenash_game_num_players(game), 2);
        assert_eq!(prenash_game_num_strategies(game, 1), 2);
        assert_eq!(prenash_game_num_strategies(game, 2), 0);
        prenash_game_free(game);
        prenash_game_free(ptr::null_mut());
        assert_eq!(prenash_game_num_players(ptr::null()), 0);
    }
}

#[test]
fn parse_errors_map_to_status_codes() {
    let (status, game) = load(&MP.replace("[1,-1,-1,1]", "[1,-1,-1]"));
    assert_eq!(status, PrenashStatus::ShapeError);
    assert!(game.is_null());
    assert!(last_error().starts_with("SHAPE_ERROR"));
    assert_eq!(
        load(&MP.replace("[1,-1,-1,1]", r#"["1/0",-1,-1,1]"#)).0,
        PrenashStatus::ValueError
    );
    assert_eq!(load("{").0, PrenashStatus::ParseError);
    let status = unsafe { prenash_game_from_json(ptr::null(), &mut ptr::null_mut()) };
    assert_eq!(status, PrenashStatus::NullPointer);
}

#[test]
fn solve_returns_report() {
    let (_, game) = load(MP);
    let mut out = ptr::null_mut();
    let status = unsafe { prenash_solve(game, c("1/10").as_ptr(), 2, 2, 6, &mut out) };
    assert_eq!(status, PrenashStatus::Ok);
    let report = prenash::io::parse_report(&take(out)).unwrap();
    assert!(report.final_result.converged);

    let status = unsafe { prenash_solve(game, c("-1").as_ptr(), 2, 2, 6, &mut out) };
    assert_eq!(status, PrenashStatus::NegativeEpsilon);
    let status = unsafe { prenash_solve(game, c("1/10").as_ptr(), 0, 2, 6, &mut out) };
    assert_eq!(status, PrenashStatus::ResolutionZero);
    unsafe { prenash_game_free(game) };
}

#[test]
fn solve_reports_missing_certificates() {
    let degenerate = MP.replace("[1,-1,-1,1],[-1,1,1,-1]", "[5,3,0,0],[-1,-1,2,-4]");
    let (_, game) = load(&degenerate);
    let mut out = ptr::null_mut();
    let status = unsafe { prenash_solve(game, c("0").as_ptr(), 2, 2, 3, &mut out) };
    assert_eq!(status, PrenashStatus::NoPreEquilibriumFound);
    assert!(last_error().starts_with("NO_PRE_EQUILIBRIUM_FOUND"));
    unsafe { prenash_game_free(game) };
}

#[test]
fn eval_and_verify() {
    let (_, game) = load(MP);
    let mut out = ptr::null_mut();
    let status = unsafe { prenash_eval(game, c("[[1,0],[1,0]]").as_ptr(), &mut out) };
    assert_eq!(status, PrenashStatus::Ok);
    let json = take(out);
    assert!(json.contains(r#""best":["0","2"]"#), "{json}");
    assert!(json.contains(r#""root":["H","H"]"#), "{json}");

    let mut eq = false;
    let status = unsafe {
        prenash_verify(
            game,
            c(r#"[["1/2","1/2"],["1/2","1/2"]]"#).as_ptr(),
            c("0").as_ptr(),
            &mut eq,
            ptr::null_mut(),
        )
    };
    assert_eq!(status, PrenashStatus::Ok);
    assert!(eq);

    let status = unsafe { prenash_eval(game, c("[[1,1],[1,0]]").as_ptr(), &mut out) };
    assert_eq!(status, PrenashStatus::InvalidDistribution);
    unsafe { prenash_game_free(game) };
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(prenash_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
