use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::arith::Integer;
use crate::cohomology::{Cocycle, GaloisAction};
use crate::quat::{Quaternion, SubalgebraReport};

use super::weil::TableObservation;

pub(crate) fn serialize_int<S: Serializer>(n: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleValue {
    pub element: String,
    pub value: Quaternion,
}

/// One twist: the cocycle, its class size and the twisted fixed algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistClassReport {
    pub group: String,
    pub cocycle: Vec<CocycleValue>,
    pub orbit_size: usize,
    pub fixed_algebra: SubalgebraReport,
}

impl TwistClassReport {
    pub fn new(action: &GaloisAction, xi: &Cocycle, orbit_size: usize, fixed_algebra: SubalgebraReport) -> Self {
        let g = action.group();
        let cocycle = (0..g.order())
            .map(|s| CocycleValue { element: g.word(s).to_string(), value: xi.value(action, s).clone() })
            .collect();
        TwistClassReport { group: g.kind().to_string(), cocycle, orbit_size, fixed_algebra }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Outcome of one scenario. `verdict` is true exactly when every check passed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub id: String,
    pub p: u64,
    pub inputs: BTreeMap<String, String>,
    pub classes: Vec<TwistClassReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<TableObservation>,
    pub checks: Vec<Check>,
    pub verdict: bool,
    pub narrative: Vec<String>,
}

impl ScenarioReport {
    pub(crate) fn new(id: &str, p: u64) -> Self {
        ScenarioReport {
            id: id.to_string(),
            p,
            inputs: BTreeMap::new(),
            classes: Vec::new(),
            table: Vec::new(),
            checks: Vec::new(),
            verdict: false,
            narrative: Vec::new(),
        }
    }

    pub(crate) fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub(crate) fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check { name: name.into(), passed });
    }

    pub(crate) fn note(&mut self, line: impl Into<String>) {
        self.narrative.push(line.into());
    }

    pub(crate) fn finish(mut self) -> Self {
        self.verdict = !self.checks.is_empty() && self.checks.iter().all(|c| c.passed);
        self
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}
