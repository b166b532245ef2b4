//! Brute-force cross-check: enumerate `G`, compute its degrees, derived length and Fitting height.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{Caps, Certificate, Instance};
use crate::chardeg;
use crate::grp::{self, GroupHandle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OracleStatus {
    Verified,
    SkippedOracle,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub status: OracleStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub order: String,
    pub class_count: Option<usize>,
    /// Degree multiset, ascending.
    pub degrees: Option<Vec<u64>>,
    pub cd: Option<Vec<u64>>,
    pub dl: Option<usize>,
    pub fitting_height: Option<usize>,
    /// One line per disagreement with the certificate.
    pub diff: Vec<String>,
}

/// Wall-clock seconds per stage; reported outside the canonical output.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub stages: Vec<(String, f64)>,
}

impl Timings {
    fn record(&mut self, stage: &str, start: Instant) {
        self.stages.push((stage.to_string(), start.elapsed().as_secs_f64()));
    }
}

impl OracleResult {
    fn skipped(order: String, reason: impl Into<String>) -> Self {
        Self {
            status: OracleStatus::SkippedOracle,
            reason: Some(reason.into()),
            order,
            class_count: None,
            degrees: None,
            cd: None,
            dl: None,
            fitting_height: None,
            diff: Vec::new(),
        }
    }
}

/// Enumerated `G = P ⋊ H`, if it fits under the caps.
pub fn enumerate_g(inst: &Instance, caps: &Caps) -> Result<GroupHandle, String> {
    let order = inst.order().filter(|&n| n <= caps.max_order).ok_or_else(|| {
        format!("|G| = {} exceeds the order cap {}", inst.order_string(), caps.max_order)
    })?;
    let s = inst.semidirect().map_err(|e| e.to_string())?;
    let e = s.enumerate(order as usize).map_err(|e| e.to_string())?;
    Ok(e)
}

/// Computes the oracle quantities without comparing them to anything.
pub fn run_oracle(inst: &Instance, caps: &Caps) -> (OracleResult, Timings) {
    let mut timings = Timings::default();
    let order = inst.order_string();
    let start = Instant::now();
    let g = match enumerate_g(inst, caps) {
        Ok(g) => g,
        Err(reason) => return (OracleResult::skipped(order, reason), timings),
    };
    timings.record("enumerate", start);
    let start = Instant::now();
    let report = match chardeg::degrees(&g, caps.max_classes) {
        Ok(r) => r,
        Err(crate::error::CharError::ClassCapExceeded { count, cap }) => {
            return (OracleResult::skipped(order, format!("{count} classes exceed the class cap {cap}")), timings)
        }
        Err(e) => {
            let mut r = OracleResult::skipped(order, e.to_string());
            r.status = OracleStatus::Failed;
            return (r, timings);
        }
    };
    timings.record("degrees", start);
    let start = Instant::now();
    let dl = grp::derived_length(g.as_ref());
    timings.record("derived_length", start);
    let start = Instant::now();
    let fh = grp::fitting_height(&g);
    timings.record("fitting_height", start);
    let result = OracleResult {
        status: OracleStatus::Verified,
        reason: None,
        order,
        class_count: Some(report.degrees.len()),
        degrees: Some(report.degrees.clone()),
        cd: Some(report.degree_set.clone()),
        dl,
        fitting_height: Some(fh),
        diff: Vec::new(),
    };
    (result, timings)
}

/// Runs the oracle and compares with the certificate's predictions.
pub fn verify_against_oracle(inst: &Instance, cert: &Certificate, caps: &Caps) -> (OracleResult, Timings) {
    let (mut result, timings) = run_oracle(inst, caps);
    if !cert.pass {
        result.diff.push(format!("certificate failed: {}", cert.failed_checks().join(", ")));
    }
    if result.status != OracleStatus::Verified {
        if !cert.pass {
            result.status = OracleStatus::Failed;
        }
        return (result, timings);
    }
    match &cert.predicted {
        Some(pr) => {
            if result.cd.as_ref() != Some(&pr.cd) {
                result.diff.push(format!("cd: predicted {:?}, oracle {:?}", pr.cd, result.cd.as_deref().unwrap_or_default()));
            }
            if result.dl != Some(pr.dl) {
                result.diff.push(format!("dl: predicted {}, oracle {:?}", pr.dl, result.dl));
            }
            if result.fitting_height != Some(pr.fitting_height) {
                result.diff.push(format!("fitting height: predicted {}, oracle {:?}", pr.fitting_height, result.fitting_height));
            }
        }
        None => result.diff.push("no predictions to compare".into()),
    }
    if !result.diff.is_empty() {
        result.status = OracleStatus::Failed;
    }
    (result, timings)
}
