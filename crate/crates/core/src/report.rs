//! Structured outcome of one identity check.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lgroup::Place;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub place: Option<Place>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// Free-form recorded values: subject of the check, object counts,
    /// observed constants.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub detail: BTreeMap<String, String>,
}

impl Params {
    pub fn ranks(r: usize, m: usize, place: Place) -> Self {
        Params { r: Some(r), m: Some(m), place: Some(place), ..Default::default() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.detail.insert(key.to_string(), value.to_string());
        self
    }

    pub fn order(mut self, n: usize) -> Self {
        self.order = Some(n);
        self
    }

    pub fn mode(mut self, mode: &str) -> Self {
        self.mode = Some(mode.to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_id: String,
    pub params: Params,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn skipped(id: &str, params: Params, reason: impl ToString) -> Self {
        VerificationReport {
            identity_id: id.to_string(),
            params,
            status: Status::Skipped,
            witness: Some(reason.to_string()),
            elapsed_ms: 0,
        }
    }
}

/// Outcome of a check body before timing is attached.
pub enum Outcome {
    Pass { checked: usize },
    Fail { witness: String },
}

/// Runs `body`, timing it, and folds errors into the report: capacity
/// problems become skips, everything else a failure with the error as witness.
pub fn run_check(
    id: &str,
    params: Params,
    body: impl FnOnce(&mut Params) -> Result<Outcome, Error>,
) -> VerificationReport {
    let start = Instant::now();
    let mut params = params;
    let result = body(&mut params);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let (status, witness) = match result {
        Ok(Outcome::Pass { checked }) => {
            params.detail.insert("checked".into(), checked.to_string());
            (Status::Pass, None)
        }
        Ok(Outcome::Fail { witness }) => (Status::Fail, Some(witness)),
        Err(e @ Error::CapacityExceeded { .. }) => (Status::Skipped, Some(format!("CapacityExceeded: {e}"))),
        Err(e) => (Status::Fail, Some(e.to_string())),
    };
    VerificationReport { identity_id: id.to_string(), params, status, witness, elapsed_ms }
}

/// Pass if `ok`, otherwise fail with the lazily built witness.
pub fn outcome(ok: bool, checked: usize, witness: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass { checked }
    } else {
        Outcome::Fail { witness: witness() }
    }
}
