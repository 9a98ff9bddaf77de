use std::fmt;

use serde::{Deserialize, Serialize};

use super::certificate::Certificate;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Proved,
    Refuted,
    Unknown,
}

impl Status {
    pub fn is_decided(self) -> bool {
        self != Status::Unknown
    }

    /// Kleene conjunction: a refutation wins, otherwise an unknown part
    /// leaves the whole unknown.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Refuted, _) | (_, Status::Refuted) => Status::Refuted,
            (Status::Unknown, _) | (_, Status::Unknown) => Status::Unknown,
            _ => Status::Proved,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Proved => "proved",
            Status::Refuted => "refuted",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    GraphReduction,
    BoundedSearch,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exhaustive => "exhaustive",
            Method::GraphReduction => "graph-reduction",
            Method::BoundedSearch => "bounded-search",
        })
    }
}

/// Exactly one of witness, counterexample or budget note, matching the status.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case", bound = "T: Scalar")]
pub enum Outcome<T> {
    Proved { witness: Certificate<T> },
    Refuted { counterexample: Certificate<T> },
    Unknown { budget_note: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Verdict<T> {
    #[serde(flatten)]
    pub outcome: Outcome<T>,
    pub method: Method,
}

impl<T> Verdict<T> {
    pub fn proved(method: Method, witness: Certificate<T>) -> Self {
        Verdict { outcome: Outcome::Proved { witness }, method }
    }

    pub fn refuted(method: Method, counterexample: Certificate<T>) -> Self {
        Verdict { outcome: Outcome::Refuted { counterexample }, method }
    }

    pub fn unknown(method: Method, note: impl Into<String>) -> Self {
        Verdict { outcome: Outcome::Unknown { budget_note: note.into() }, method }
    }

    pub fn status(&self) -> Status {
        match self.outcome {
            Outcome::Proved { .. } => Status::Proved,
            Outcome::Refuted { .. } => Status::Refuted,
            Outcome::Unknown { .. } => Status::Unknown,
        }
    }

    pub fn is_proved(&self) -> bool {
        self.status() == Status::Proved
    }

    /// Proved, but only relative to a finite resolution (cylinder level or
    /// dyadic depth) rather than for every open set.
    pub fn is_proved_at_resolution(&self) -> bool {
        self.is_proved() && self.method == Method::BoundedSearch
    }

    pub fn certificate(&self) -> Option<&Certificate<T>> {
        match &self.outcome {
            Outcome::Proved { witness } => Some(witness),
            Outcome::Refuted { counterexample } => Some(counterexample),
            Outcome::Unknown { .. } => None,
        }
    }

    pub fn note(&self) -> Option<&str> {
        match &self.outcome {
            Outcome::Unknown { budget_note } => Some(budget_note),
            _ => None,
        }
    }
}
