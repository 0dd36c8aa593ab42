//! The expressions shipped with the crate, embedded from `builtins/*.json`.
//!
//! | id         | expression                                   | local range |
//! |------------|----------------------------------------------|-------------|
//! | `equality` | pair `E1`, `E2` with `\|E1\| + \|E2\| = 1`   | equality    |
//! | `ch`       | Clauser-Horne form `CH`                      | `[0, 1]`    |
//! | `eq33`     | `K`, bounds `c = 1`, `d = 1`                 | `[-1, 1]`   |
//! | `eq34`     | `J`, bounds `c = 2`, `d = 1`                 | `[-1, 2]`   |

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expression::BellExpression;
use crate::lhv::EqualityPair;

const E1_JSON: &str = include_str!("../builtins/e1.json");
const E2_JSON: &str = include_str!("../builtins/e2.json");
const CH_JSON: &str = include_str!("../builtins/ch.json");
const EQ33_JSON: &str = include_str!("../builtins/eq33.json");
const EQ34_JSON: &str = include_str!("../builtins/eq34.json");

fn load(text: &str) -> BellExpression {
    serde_json::from_str(text).expect("embedded expression is valid")
}

pub fn e1() -> BellExpression {
    load(E1_JSON)
}

pub fn e2() -> BellExpression {
    load(E2_JSON)
}

pub fn ch() -> BellExpression {
    load(CH_JSON)
}

pub fn eq33() -> BellExpression {
    load(EQ33_JSON)
}

pub fn eq34() -> BellExpression {
    load(EQ34_JSON)
}

pub fn equality_pair() -> EqualityPair {
    EqualityPair::new(e1(), e2()).expect("embedded pair is complementary")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    Ch,
    Eq33,
    Eq34,
    Equality,
}

/// A builtin resolved to what it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subject {
    Expression(BellExpression),
    Pair(EqualityPair),
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::Ch, Builtin::Eq33, Builtin::Eq34, Builtin::Equality];

    pub fn id(self) -> &'static str {
        match self {
            Builtin::Ch => "ch",
            Builtin::Eq33 => "eq33",
            Builtin::Eq34 => "eq34",
            Builtin::Equality => "equality",
        }
    }

    pub fn subject(self) -> Subject {
        match self {
            Builtin::Ch => Subject::Expression(ch()),
            Builtin::Eq33 => Subject::Expression(eq33()),
            Builtin::Eq34 => Subject::Expression(eq34()),
            Builtin::Equality => Subject::Pair(equality_pair()),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.id() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown builtin {s:?}; expected one of ch, eq33, eq34, equality"
                ))
            })
    }
}
