//! Game file formats and JSON encodings of exact values.
//!
//! A game can be given three ways:
//!
//! * inline, `"q;w1,w2,…"` (whitespace allowed);
//! * a text file whose first non-empty line is the quota and whose second
//!   holds the weights, separated by commas or whitespace;
//! * a JSON file `{"quota": q, "weights": [..], "label": ".."}`.

use std::fs;
use std::path::Path;

use num_rational::BigRational;
use powersplit_core::rational::{to_decimal, to_fraction};
use powersplit_core::{Game, IndexVector};
use serde::{Deserialize, Serialize};

/// Significant digits used for display decimals.
pub const DECIMAL_DIGITS: usize = 15;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed game: {0}")]
    Syntax(String),
    #[error(transparent)]
    Invalid(#[from] powersplit_core::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameJson {
    pub quota: u64,
    pub weights: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl From<&Game> for GameJson {
    fn from(g: &Game) -> Self {
        GameJson {
            quota: g.quota(),
            weights: g.weights().to_vec(),
            label: g.label().map(str::to_owned),
        }
    }
}

impl TryFrom<GameJson> for Game {
    type Error = powersplit_core::Error;

    fn try_from(j: GameJson) -> Result<Self, Self::Error> {
        let g = Game::new(j.quota, j.weights)?;
        Ok(match j.label {
            Some(l) => g.with_label(l),
            None => g,
        })
    }
}

fn parse_u64(tok: &str, what: &str) -> Result<u64, FormatError> {
    tok.trim().parse().map_err(|_| {
        FormatError::Syntax(format!(
            "{what} {:?} is not a non-negative integer",
            tok.trim()
        ))
    })
}

fn parse_weights(s: &str) -> Result<Vec<u64>, FormatError> {
    let toks: Vec<&str> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    if toks.is_empty() {
        return Err(FormatError::Syntax("no weights given".into()));
    }
    toks.iter().map(|t| parse_u64(t, "weight")).collect()
}

/// Parses `"q;w1,w2,…"`.
pub fn parse_inline(s: &str) -> Result<Game, FormatError> {
    let (q, w) = s
        .split_once(';')
        .ok_or_else(|| FormatError::Syntax("expected \"quota;w1,w2,...\"".into()))?;
    Ok(Game::new(parse_u64(q, "quota")?, parse_weights(w)?)?)
}

/// Parses the two-line text format.
pub fn parse_text(s: &str) -> Result<Game, FormatError> {
    let mut lines = s
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let q = lines
        .next()
        .ok_or_else(|| FormatError::Syntax("missing quota line".into()))?;
    let w = lines
        .next()
        .ok_or_else(|| FormatError::Syntax("missing weights line".into()))?;
    if lines.next().is_some() {
        return Err(FormatError::Syntax(
            "unexpected content after the weights line".into(),
        ));
    }
    Ok(Game::new(parse_u64(q, "quota")?, parse_weights(w)?)?)
}

pub fn parse_json(s: &str) -> Result<Game, FormatError> {
    let j: GameJson = serde_json::from_str(s)?;
    Ok(Game::try_from(j)?)
}

/// Either format, decided by the first non-blank character.
pub fn parse_file_contents(s: &str) -> Result<Game, FormatError> {
    if s.trim_start().starts_with('{') {
        parse_json(s)
    } else {
        parse_text(s)
    }
}

pub fn read_game_file(path: &Path) -> Result<Game, FormatError> {
    let s = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_file_contents(&s)
}

/// An inline spec when `source` contains `;`, otherwise a file path.
pub fn load_game(source: &str) -> Result<Game, FormatError> {
    if source.contains(';') {
        parse_inline(source)
    } else {
        read_game_file(Path::new(source))
    }
}

pub fn write_text(game: &Game) -> String {
    let w: Vec<String> = game.weights().iter().map(u64::to_string).collect();
    format!("{}\n{}\n", game.quota(), w.join(" "))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub numerator: String,
    pub denominator: String,
    pub decimal: String,
}

impl From<&BigRational> for RationalJson {
    fn from(r: &BigRational) -> Self {
        RationalJson {
            numerator: r.numer().to_string(),
            denominator: r.denom().to_string(),
            decimal: to_decimal(r, DECIMAL_DIGITS),
        }
    }
}

impl RationalJson {
    pub fn to_rational(&self) -> Result<BigRational, FormatError> {
        parse_fraction(&format!("{}/{}", self.numerator, self.denominator))
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_fraction(s: &str) -> Result<BigRational, FormatError> {
    let bad = || FormatError::Syntax(format!("{s:?} is not a fraction"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
    if d == num_bigint::BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerValue {
    pub player: usize,
    #[serde(flatten)]
    pub value: RationalJson,
}

pub fn index_values_json(v: &IndexVector) -> Vec<PlayerValue> {
    v.values
        .iter()
        .enumerate()
        .map(|(player, r)| PlayerValue {
            player,
            value: r.into(),
        })
        .collect()
}

/// `"p/q (≈ d)"`
pub fn display_rational(r: &BigRational) -> String {
    format!("{} (≈ {})", to_fraction(r), to_decimal(r, 10))
}
