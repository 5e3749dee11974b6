//! Game files: JSON with exact rational fields.
//!
//! A rational field is either a string (`"3/20"`, `".15"`, `"7"`) or a JSON
//! number. Numbers are read from their source text, so `0.15` is exactly
//! `3/20` and never passes through a float.

use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use search_pursuit::closed_forms::TwoTypeSpec;
use search_pursuit::learning::LearningSpec;
use search_pursuit::rational::parse_rational;
use search_pursuit::{GameSpec, Rational};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => {
                return Err(D::Error::custom(format!(
                    "expected a rational string or number, found {other}"
                )))
            }
        };
        parse_rational(&text).map(Exact).map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    General,
    ConstantTimes,
    ArithmeticTimes,
    TwoType,
    Learning,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::General => "general",
            Mode::ConstantTimes => "constant-times",
            Mode::ArithmeticTimes => "arithmetic-times",
            Mode::TwoType => "two-type",
            Mode::Learning => "learning",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Location {
    pub time: Exact,
    pub capture: Exact,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoTypeBlock {
    pub a: u32,
    pub b: u32,
    pub tau: u32,
    pub p: Exact,
    pub q: Exact,
    pub k: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearningBlock {
    pub low: Exact,
    pub high: Exact,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    #[serde(default)]
    pub locations: Vec<Location>,
    pub budget: Option<Exact>,
    pub mode: Option<Mode>,
    pub two_type: Option<TwoTypeBlock>,
    pub learning: Option<LearningBlock>,
}

impl GameFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
            .map_err(|e| CliError::input(format!("{}: {}", path.display(), e.message)))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::input(e.to_string()))
    }

    /// The command-line mode wins, then the file's; without either, a file
    /// holding only a two-type or learning block runs in that mode.
    pub fn resolve_mode(&self, flag: Option<Mode>) -> Mode {
        flag.or(self.mode).unwrap_or(if !self.locations.is_empty() {
            Mode::General
        } else if self.two_type.is_some() {
            Mode::TwoType
        } else if self.learning.is_some() {
            Mode::Learning
        } else {
            Mode::General
        })
    }

    /// The explicit location list, or the expanded two-type block when no
    /// locations are given.
    pub fn game_spec(&self) -> Result<GameSpec, CliError> {
        if self.locations.is_empty() {
            if let Some(block) = &self.two_type {
                return Ok(block.spec().to_game_spec()?);
            }
            return Err(CliError::input("game file has no locations"));
        }
        let budget = self
            .budget
            .as_ref()
            .ok_or_else(|| CliError::input("game file has locations but no budget"))?;
        let times = self.locations.iter().map(|l| l.time.0.clone()).collect();
        let captures = self.locations.iter().map(|l| l.capture.0.clone()).collect();
        Ok(GameSpec::new(times, captures, budget.0.clone())?)
    }

    pub fn two_type_spec(&self) -> Result<TwoTypeSpec, CliError> {
        self.two_type
            .as_ref()
            .map(TwoTypeBlock::spec)
            .ok_or_else(|| CliError::input("mode two-type needs a two_type block"))
    }

    pub fn learning_spec(&self) -> Result<LearningSpec, CliError> {
        let block = self
            .learning
            .as_ref()
            .ok_or_else(|| CliError::input("mode learning needs a learning block"))?;
        Ok(LearningSpec::new(
            block.low.0.clone(),
            block.high.0.clone(),
        )?)
    }
}

impl TwoTypeBlock {
    pub fn spec(&self) -> TwoTypeSpec {
        TwoTypeSpec {
            a: self.a,
            b: self.b,
            tau: self.tau,
            p: self.p.0.clone(),
            q: self.q.0.clone(),
            k: self.k,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use search_pursuit::rational::{int, ratio};

    #[test]
    fn decimals_and_fractions_are_exact() {
        let f = GameFile::parse(
            r#"{"locations": [{"time": 5, "capture": 0.15}, {"time": "3", "capture": "3/20"}], "budget": 1.5e1}"#,
        )
        .unwrap();
        assert_eq!(f.locations[0].capture.0, ratio(3, 20));
        assert_eq!(f.locations[1].capture.0, ratio(3, 20));
        assert_eq!(f.budget.unwrap().0, int(15));
    }

    #[test]
    fn unknown_fields_are_rejected_with_a_position() {
        let err = GameFile::parse("{\n  \"locations\": [],\n  \"budgt\": 3\n}").unwrap_err();
        assert!(err.message.contains("budgt"), "{}", err.message);
        assert!(err.message.contains("line 3"), "{}", err.message);
    }

    #[test]
    fn bad_rationals_name_the_input() {
        let err = GameFile::parse(r#"{"locations": [{"time": 1, "capture": "1/0"}], "budget": 1}"#)
            .unwrap_err();
        assert!(err.message.contains("1/0"), "{}", err.message);
    }

    #[test]
    fn mode_resolution() {
        let f = GameFile::parse(
            r#"{"two_type": {"a": 4, "b": 2, "tau": 2, "p": "3/10", "q": "1/5", "k": 4}}"#,
        )
        .unwrap();
        assert_eq!(f.resolve_mode(None), Mode::TwoType);
        assert_eq!(f.resolve_mode(Some(Mode::General)), Mode::General);
        assert_eq!(f.game_spec().unwrap().n(), 6);
        let f = GameFile::parse(r#"{"learning": {"low": "1/3", "high": "2/3"}}"#).unwrap();
        assert_eq!(f.resolve_mode(None), Mode::Learning);
        assert!(f.game_spec().is_err());
    }
}
