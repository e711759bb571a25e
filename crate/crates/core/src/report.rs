//! Outcome records shared by the verification suites.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        })
    }
}

/// One named check. A failing check carries the first offending inputs as
/// its witness; `data` holds measured values worth reporting either way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub witness: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, String>,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Pass,
            samples: 0,
            witness: BTreeMap::new(),
            data: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Records one sample; the first failure keeps its witness.
    pub fn record<I, K, V>(&mut self, ok: bool, witness: I)
    where
        I: FnOnce() -> Vec<(K, V)>,
        K: Into<String>,
        V: fmt::Display,
    {
        self.samples += 1;
        if !ok && self.status != Status::Fail {
            self.status = Status::Fail;
            self.witness = witness()
                .into_iter()
                .map(|(k, v)| (k.into(), v.to_string()))
                .collect();
        }
    }

    pub fn fail(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.status = Status::Fail;
        self.witness.insert(key.into(), value.to_string());
    }

    pub fn skip(mut self, reason: impl fmt::Display) -> Self {
        self.status = Status::Skip;
        self.data.insert("reason".into(), reason.to_string());
        self
    }

    pub fn with(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.data.insert(key.into(), value.to_string());
        self
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.data.insert(key.into(), value.to_string());
    }
}
