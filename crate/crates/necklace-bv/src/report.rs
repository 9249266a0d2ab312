//! JSON report records for the verifier suites.

use serde::Serialize;

/// One identity check: trial counts, failures, and the first
/// counterexample in necklace syntax when one exists.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityReport {
    pub name: String,
    pub identity: String,
    pub trials: u64,
    pub failures: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_counterexample: Option<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// A trial-loop harness that tracks failures and keeps the first
/// counterexample.
pub struct Recorder {
    pub report: IdentityReport,
}

impl Recorder {
    pub fn new(suite: &str, identity: &str, seed: u64) -> Self {
        Recorder {
            report: IdentityReport {
                name: suite.to_owned(),
                identity: identity.to_owned(),
                trials: 0,
                failures: 0,
                seed,
                first_counterexample: None,
            },
        }
    }

    pub fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> String) {
        self.report.trials += 1;
        if !ok {
            self.report.failures += 1;
            if self.report.first_counterexample.is_none() {
                self.report.first_counterexample = Some(counterexample());
            }
        }
    }

    pub fn finish(self) -> IdentityReport {
        self.report
    }
}
