//! Game files, profile literals and solve reports.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::game::{evaluate_payoff, gain_table, Game, MixedProfile};
use crate::oracle::Verification;
use crate::root::root_label;
use crate::scalar::{parse_rational, rational_from_f64, NumericMode, Scalar};
use crate::search::{CellClassification, SolveOptions, SolveReport};

pub const TOOL: &str = "prenash";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn parse_err(context: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        context: context.into(),
        message: message.into(),
    }
}

/// One payoff or probability entry: an integer, a decimal or `p/q` string,
/// or (float mode only) a JSON floating-point number.
pub fn parse_scalar<S: Scalar>(value: &Value, context: &str) -> Result<S> {
    match value {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(S::from_i64(i))
            } else if S::MODE == NumericMode::Float {
                let f = n
                    .as_f64()
                    .ok_or_else(|| parse_err(context, "number out of range"))?;
                Ok(S::from_rational(&rational_from_f64(f)?))
            } else {
                Err(parse_err(
                    context,
                    format!("floating-point literal {n} in rational mode; write it as a string"),
                ))
            }
        }
        Value::String(s) => match parse_rational(s) {
            Ok(r) => Ok(S::from_rational(&r)),
            Err(Error::Value(m)) => Err(Error::Value(format!("{context}: {m}"))),
            Err(Error::Parse { message, .. }) => Err(parse_err(context, message)),
            Err(e) => Err(e),
        },
        other => Err(parse_err(
            context,
            format!("expected a number or string, found {}", kind(other)),
        )),
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        parse_err(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| parse_err(name, "missing field"))
}

fn array<'a>(v: &'a Value, context: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| parse_err(context, format!("expected an array, found {}", kind(v))))
}

pub fn parse_game_str<S: Scalar>(text: &str) -> Result<Game<S>> {
    let root = parse_json(text)?;
    let obj = root
        .as_object()
        .ok_or_else(|| parse_err("document", "expected an object"))?;
    let name = field(obj, "name")?
        .as_str()
        .ok_or_else(|| parse_err("name", "expected a string"))?
        .to_string();
    let players = field(obj, "players")?
        .as_u64()
        .ok_or_else(|| parse_err("players", "expected a nonnegative integer"))?
        as usize;

    let strategies = array(field(obj, "strategies")?, "strategies")?;
    if strategies.len() != players {
        return Err(Error::Shape(format!(
            "{} strategy lists for {players} players",
            strategies.len()
        )));
    }
    let mut names = Vec::with_capacity(players);
    for (i, list) in strategies.iter().enumerate() {
        let ctx = format!("strategies[{i}]");
        let list = array(list, &ctx)?;
        let mut own = Vec::with_capacity(list.len());
        for (s, entry) in list.iter().enumerate() {
            let ctx = format!("strategies[{i}][{s}]");
            own.push(
                entry
                    .as_str()
                    .ok_or_else(|| parse_err(ctx, "expected a string"))?
                    .to_string(),
            );
        }
        names.push(own);
    }

    let tensors = array(field(obj, "payoffs")?, "payoffs")?;
    if tensors.len() != players {
        return Err(Error::Shape(format!(
            "{} payoff tensors for {players} players",
            tensors.len()
        )));
    }
    let mut payoffs = Vec::with_capacity(players);
    for (i, tensor) in tensors.iter().enumerate() {
        let ctx = format!("payoffs[{i}]");
        let entries = array(tensor, &ctx)?;
        payoffs.push(
            entries
                .iter()
                .enumerate()
                .map(|(k, v)| parse_scalar(v, &format!("payoffs[{i}][{k}]")))
                .collect::<Result<Vec<S>>>()?,
        );
    }
    Game::new(name, names, payoffs)
}

pub fn parse_game<S: Scalar>(path: impl AsRef<Path>) -> Result<Game<S>> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_game_str(&text)
}

/// Scalar as JSON: a `p/q` string for exact values, a number otherwise.
pub fn scalar_json<S: Scalar>(x: &S) -> Value {
    match x.to_rational() {
        Some(r) => Value::String(r.to_string()),
        None => serde_json::json!(x.to_f64()),
    }
}

pub fn profile_json<S: Scalar>(p: &MixedProfile<S>) -> Value {
    Value::Array(
        p.dist
            .iter()
            .map(|d| Value::Array(d.iter().map(scalar_json).collect()))
            .collect(),
    )
}

/// Payoffs, gain table and root label at `sigma`, with strategy names.
pub fn eval_json<S: Scalar>(game: &Game<S>, sigma: &MixedProfile<S>) -> Result<Value> {
    let table = gain_table(game, sigma)?;
    let root = root_label(game, sigma)?;
    let payoffs = (0..game.num_players())
        .map(|i| evaluate_payoff(game, sigma, i).map(|v| scalar_json(&v)))
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<&str> = root
        .0
        .iter()
        .enumerate()
        .map(|(i, &s)| game.strategy_names()[i][s].as_str())
        .collect();
    Ok(serde_json::json!({
        "payoffs": payoffs,
        "gains": table.gains.iter().map(|g| g.iter().map(scalar_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "best": table.best.iter().map(scalar_json).collect::<Vec<_>>(),
        "total": scalar_json(&table.total),
        "up": table.up,
        "max_regret": scalar_json(&table.max_regret()),
        "root": names,
    }))
}

pub fn verification_json<S: Scalar>(v: &Verification<S>) -> Value {
    serde_json::json!({
        "equilibrium": v.equilibrium,
        "max_regret": scalar_json(&v.max_regret),
        "best": v.table.best.iter().map(scalar_json).collect::<Vec<_>>(),
        "total": scalar_json(&v.table.total),
    })
}

#[derive(Serialize)]
struct GameFileOut<'a> {
    name: &'a str,
    players: usize,
    strategies: &'a [Vec<String>],
    payoffs: Vec<Vec<Value>>,
}

pub fn serialize_game<S: Scalar>(game: &Game<S>) -> String {
    let out = GameFileOut {
        name: game.name(),
        players: game.num_players(),
        strategies: game.strategy_names(),
        payoffs: (0..game.num_players())
            .map(|i| game.payoff_tensor(i).iter().map(scalar_json).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&out).expect("game serializes")
}

/// Parses a profile literal such as `[[1,0],["1/2","1/2"]]`.
pub fn parse_profile<S: Scalar>(text: &str) -> Result<MixedProfile<S>> {
    parse_profile_value(&parse_json(text)?, "profile")
}

fn parse_profile_value<S: Scalar>(v: &Value, context: &str) -> Result<MixedProfile<S>> {
    let players = array(v, context)?;
    let mut dist = Vec::with_capacity(players.len());
    for (i, d) in players.iter().enumerate() {
        let ctx = format!("{context}[{i}]");
        let entries = array(d, &ctx)?;
        dist.push(
            entries
                .iter()
                .enumerate()
                .map(|(s, x)| parse_scalar(x, &format!("{ctx}[{s}]")))
                .collect::<Result<Vec<S>>>()?,
        );
    }
    Ok(MixedProfile::new(dist))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    pub eps: Value,
    pub m0: u32,
    pub factor: u32,
    pub max_stages: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportClassification {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub player: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witnesses: Option<Vec<usize>>,
}

impl From<&CellClassification> for ReportClassification {
    fn from(c: &CellClassification) -> Self {
        match c {
            CellClassification::SomePlayerNotUp { witnesses } => ReportClassification {
                kind: "some_player_not_up".into(),
                player: None,
                witnesses: Some(witnesses.clone()),
            },
            CellClassification::PlayerUpEverywhere { player } => ReportClassification {
                kind: "player_up_everywhere".into(),
                player: Some(*player),
                witnesses: None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportChosen {
    pub cell_index: usize,
    pub factor: Vec<usize>,
    pub classification: ReportClassification,
    pub representative: Value,
    pub t_value: Value,
    pub max_regret: Value,
    pub diameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportStage {
    pub stage: usize,
    pub resolutions: Vec<u32>,
    pub cells_scanned: usize,
    pub pre_equilibria_found: usize,
    pub chosen: Option<ReportChosen>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFinal {
    pub profile: Value,
    pub max_regret: Value,
    pub converged: bool,
    pub stop_reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool: String,
    pub version: String,
    pub game: String,
    pub mode: NumericMode,
    pub budget: u64,
    pub options: ReportOptions,
    pub stages: Vec<ReportStage>,
    #[serde(rename = "final")]
    pub final_result: ReportFinal,
    /// Wall-clock milliseconds per stage; omitted where output must be reproducible.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings_ms: Option<Vec<f64>>,
}

impl ReportFile {
    pub fn new<S: Scalar>(game: &Game<S>, opts: &SolveOptions<S>, report: &SolveReport<S>) -> Self {
        let stages = report
            .stages
            .iter()
            .map(|s| ReportStage {
                stage: s.stage,
                resolutions: s.resolutions.clone(),
                cells_scanned: s.cells_scanned,
                pre_equilibria_found: s.pre_equilibria_found,
                chosen: s.chosen.as_ref().map(|c| ReportChosen {
                    cell_index: c.cell_index,
                    factor: c.factor.clone(),
                    classification: (&c.classification).into(),
                    representative: profile_json(&c.representative),
                    t_value: scalar_json(&c.t_value),
                    max_regret: scalar_json(&c.max_regret),
                    diameter: c.diameter,
                }),
            })
            .collect();
        ReportFile {
            tool: TOOL.into(),
            version: VERSION.into(),
            game: game.name().into(),
            mode: S::MODE,
            budget: u64::try_from(opts.budget).unwrap_or(u64::MAX),
            options: ReportOptions {
                eps: scalar_json(&opts.eps),
                m0: opts.m0,
                factor: opts.refine_factor,
                max_stages: opts.max_stages,
            },
            stages,
            final_result: ReportFinal {
                profile: profile_json(&report.final_result.profile),
                max_regret: scalar_json(&report.final_result.max_regret),
                converged: report.final_result.converged,
                stop_reason: report.final_result.stop_reason.as_str().into(),
            },
            timings_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn final_profile<S: Scalar>(&self) -> Result<MixedProfile<S>> {
        parse_profile_value(&self.final_result.profile, "final.profile")
    }

    pub fn final_max_regret<S: Scalar>(&self) -> Result<S> {
        parse_scalar(&self.final_result.max_regret, "final.max_regret")
    }
}

pub fn parse_report(text: &str) -> Result<ReportFile> {
    serde_json::from_str(text).map_err(|e| {
        parse_err(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::max_regret;
    use crate::scalar::{int, ratio, Rational};
    use crate::search::solve;

    const MP: &str = r#"{
        "name": "matching pennies",
        "players": 2,
        "strategies": [["H", "T"], ["H", "T"]],
        "payoffs": [[1, -1, -1, 1], [-1, 1, 1, -1]]
    }"#;

    #[test]
    fn parses_fixture() {
        let g: Game<Rational> = parse_game_str(MP).unwrap();
        assert_eq!(g.num_players(), 2);
        assert_eq!(g.payoff_tensor(0), &[int(1), int(-1), int(-1), int(1)]);
        assert_eq!(g.payoff_tensor(1), &[int(-1), int(1), int(1), int(-1)]);
        assert_eq!(
            g.strategy_names()[1],
            vec!["H".to_string(), "T".to_string()]
        );
    }

    #[test]
    fn scalar_grammar() {
        let g: Game<Rational> =
            parse_game_str(&MP.replace("[1, -1, -1, 1]", r#"["1/2", "-0.25", "3", -1]"#)).unwrap();
        assert_eq!(
            g.payoff_tensor(0),
            &[ratio(1, 2), ratio(-1, 4), int(3), int(-1)]
        );
        let float = MP.replace("[1, -1, -1, 1]", "[0.5, -1, -1, 1]");
        assert!(
            matches!(parse_game_str::<Rational>(&float), Err(Error::Parse { context, .. }) if context == "payoffs[0][0]")
        );
        let g: Game<f64> = parse_game_str(&float).unwrap();
        assert_eq!(g.payoff_tensor(0)[0], 0.5);
    }

    #[test]
    fn errors() {
        let truncated = MP.replace("[1, -1, -1, 1]", "[1, -1, -1]");
        assert!(matches!(
            parse_game_str::<Rational>(&truncated),
            Err(Error::Shape(_))
        ));
        let zero = MP.replace("[1, -1, -1, 1]", r#"["1/0", -1, -1, 1]"#);
        assert!(matches!(
            parse_game_str::<Rational>(&zero),
            Err(Error::Value(_))
        ));
        let dup = MP.replace(r#"["H", "T"], ["H", "T"]"#, r#"["H", "H"], ["H", "T"]"#);
        assert!(matches!(
            parse_game_str::<Rational>(&dup),
            Err(Error::InvalidGame(_))
        ));
        assert!(
            matches!(parse_game_str::<Rational>("{\"name\": "), Err(Error::Parse { context, .. }) if context.starts_with("line 1"))
        );
        let bad = MP.replace("[1, -1, -1, 1]", r#"[true, -1, -1, 1]"#);
        assert!(
            matches!(parse_game_str::<Rational>(&bad), Err(Error::Parse { context, .. }) if context == "payoffs[0][0]")
        );
        assert!(matches!(
            parse_game_str::<Rational>(&MP.replace("\"players\": 2", "\"players\": 3")),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn round_trip() {
        let g: Game<Rational> =
            parse_game_str(&MP.replace("[1, -1, -1, 1]", r#"["1/3", "-7/2", 0, 1]"#)).unwrap();
        let again: Game<Rational> = parse_game_str(&serialize_game(&g)).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn profiles() {
        let p: MixedProfile<Rational> = parse_profile(r#"[[1,0],["1/2","0.5"]]"#).unwrap();
        assert_eq!(
            p.dist,
            vec![vec![int(1), int(0)], vec![ratio(1, 2), ratio(1, 2)]]
        );
        assert!(parse_profile::<Rational>("[1,0]").is_err());
    }

    #[test]
    fn report_round_trip_reverifies() {
        let g: Game<Rational> = parse_game_str(MP).unwrap();
        let mut opts = SolveOptions::new(ratio(1, 10));
        opts.m0 = 2;
        let report = solve(&g, &opts).unwrap();
        let file = ReportFile::new(&g, &opts, &report);
        let parsed = parse_report(&file.to_json()).unwrap();
        assert_eq!(parsed, file);
        let profile: MixedProfile<Rational> = parsed.final_profile().unwrap();
        assert_eq!(
            max_regret(&g, &profile).unwrap(),
            parsed.final_max_regret::<Rational>().unwrap()
        );
        assert!(file.to_json().contains("\"final\""));
        assert!(!file.to_json().contains("timings_ms"));
    }
}
