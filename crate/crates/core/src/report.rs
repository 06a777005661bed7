//! Shared verification report and witness types.  Reports merge
//! associatively; witnesses carry the concrete inputs of the failing check
//! so a failure replays without re-deriving any randomness.

use serde::{Deserialize, Serialize};

use crate::orders::TotalOrder;

/// A replayable record of one failed check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Instance spec string, parseable by
    /// [`crate::sgroup::parse_instance_spec`].
    pub instance: String,
    pub n: usize,
    pub check: String,
    pub seed: u64,
    pub trial: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order: Option<TotalOrder>,
    /// Concrete inputs of the check, element payloads included.
    pub inputs: serde_json::Value,
    pub expected: serde_json::Value,
    pub got: serde_json::Value,
}

/// Tally for one named check across its instantiations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub checks: u64,
    pub passes: u64,
    pub failures: u64,
    /// Observations outside any claimed property, tallied for information.
    #[serde(default)]
    pub out_of_claim: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_witness: Option<Box<Witness>>,
}

impl CheckReport {
    pub fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            checks: 0,
            passes: 0,
            failures: 0,
            out_of_claim: 0,
            first_witness: None,
        }
    }

    /// Records one check outcome; the witness closure only runs on the first
    /// failure.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.checks += 1;
        if ok {
            self.passes += 1;
        } else {
            self.failures += 1;
            if self.first_witness.is_none() {
                self.first_witness = Some(Box::new(witness()));
            }
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        debug_assert_eq!(self.name, other.name);
        self.checks += other.checks;
        self.passes += other.passes;
        self.failures += other.failures;
        self.out_of_claim += other.out_of_claim;
        if self.first_witness.is_none() {
            self.first_witness = other.first_witness;
        }
    }
}

/// A bundle of check tallies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckReport>,
}

impl VerifyReport {
    pub fn new(checks: Vec<CheckReport>) -> Self {
        VerifyReport { checks }
    }

    pub fn total_failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failures).sum()
    }

    pub fn total_checks(&self) -> u64 {
        self.checks.iter().map(|c| c.checks).sum()
    }

    pub fn all_pass(&self) -> bool {
        self.total_failures() == 0
    }

    pub fn first_witness(&self) -> Option<&Witness> {
        self.checks.iter().find_map(|c| c.first_witness.as_deref())
    }

    pub fn extend(&mut self, other: VerifyReport) {
        self.checks.extend(other.checks);
    }
}
