//! Command line tool and HTTP service around the prover and game engine.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use clarena_core::prover::{decide, Decision, System};
use clarena_core::{parse, parse_fo};

pub mod api;
pub mod commands;
pub mod journal;
pub mod session;
pub mod view;

/// Proof system names as they appear on the command line and in the API.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemName {
    #[default]
    Cl9,
    Cl9circ,
    Cl10,
    Cl10circ,
    Cl11qf,
}

impl SystemName {
    pub const ALL: [SystemName; 5] =
        [SystemName::Cl9, SystemName::Cl9circ, SystemName::Cl10, SystemName::Cl10circ, SystemName::Cl11qf];

    pub fn system(self) -> System {
        match self {
            SystemName::Cl9 => System::Cl9,
            SystemName::Cl9circ => System::Cl9Circ,
            SystemName::Cl10 => System::Cl10,
            SystemName::Cl10circ => System::Cl10Circ,
            SystemName::Cl11qf => System::Cl11,
        }
    }
}

impl fmt::Display for SystemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemName::Cl9 => "cl9",
            SystemName::Cl9circ => "cl9circ",
            SystemName::Cl10 => "cl10",
            SystemName::Cl10circ => "cl10circ",
            SystemName::Cl11qf => "cl11qf",
        })
    }
}

impl FromStr for SystemName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SystemName::ALL
            .into_iter()
            .find(|n| n.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown system {s:?} (expected cl9, cl9circ, cl10, cl10circ or cl11qf)"))
    }
}

/// Parses `text` with the syntax the system expects and decides it.
pub fn decide_text(text: &str, system: SystemName) -> Result<Decision, String> {
    let formula = match system {
        SystemName::Cl11qf => parse_fo(text),
        _ => parse(text),
    }
    .map_err(|e| format!("cannot parse formula: {e}"))?;
    decide(&formula, system.system()).map_err(|e| e.to_string())
}
