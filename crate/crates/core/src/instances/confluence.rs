use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fabric::Instance;
use crate::scheduler::{
    enumerate_interleavings, run, Caps, EnumerationReport, RunStatus, SchedulePolicy,
};
use crate::value::Value;

#[derive(Clone, Debug, Default)]
pub struct ConfluenceOptions {
    pub caps: Caps,
    /// Fan the runs out over the rayon pool; the report is identical either way.
    pub parallel: bool,
    /// Also explore every interleaving, bounded by `caps.enumeration_bound`.
    pub enumerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub policy: String,
    pub seed: Option<u64>,
    pub status: RunStatus,
    pub final_states: Vec<Value>,
    pub events: usize,
    /// sha256 of the canonical trace.
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfluenceReport {
    pub instance: String,
    pub fingerprint: String,
    pub runs: Vec<RunSummary>,
    /// The synchronous run to a fixed point, always included.
    pub synchronous: RunSummary,
    pub enumeration: Option<EnumerationReport>,
    /// Distinct final vectors over every run that completed, and over the
    /// enumeration when requested.
    pub distinct_finals: Vec<Vec<Value>>,
    /// Runs that hit the cap, deadlocked or ran out of script.
    pub incomplete: usize,
    pub oracle: Option<Vec<Value>>,
    pub oracle_match: Option<bool>,
    pub passed: bool,
}

/// Fifo, the synchronous fixed point and `seeds` random schedules.
pub fn standard_policies(seeds: u64) -> Vec<SchedulePolicy> {
    let mut policies = vec![
        SchedulePolicy::Fifo,
        SchedulePolicy::Synchronous { rounds: None },
    ];
    policies.extend((0..seeds).map(|seed| SchedulePolicy::Random { seed }));
    policies
}

fn summarize(inst: &Instance, policy: &SchedulePolicy, caps: &Caps) -> Result<RunSummary> {
    let out = run(inst, policy, caps)?;
    Ok(RunSummary {
        policy: policy.label().into(),
        seed: match policy {
            SchedulePolicy::Random { seed } => Some(*seed),
            _ => None,
        },
        status: out.status,
        events: out.trace.records.len(),
        digest: out.trace.digest(),
        final_states: out.final_states,
    })
}

/// Runs `inst` under every policy plus the synchronous fixed point and
/// compares the final states with each other and with `oracle`. Runs that
/// fail to terminate are recorded, not fatal; the check passes when every
/// run completed, exactly one final vector was seen and it equals the oracle.
pub fn confluence_check(
    inst: &Instance,
    policies: &[SchedulePolicy],
    oracle: Option<&[Value]>,
    options: &ConfluenceOptions,
) -> Result<ConfluenceReport> {
    let caps = &options.caps;
    let runs: Vec<RunSummary> = if options.parallel {
        policies
            .par_iter()
            .map(|p| summarize(inst, p, caps))
            .collect::<Result<_>>()?
    } else {
        policies
            .iter()
            .map(|p| summarize(inst, p, caps))
            .collect::<Result<_>>()?
    };
    let synchronous = summarize(inst, &SchedulePolicy::Synchronous { rounds: None }, caps)?;
    let enumeration = if options.enumerate {
        Some(enumerate_interleavings(inst, caps)?)
    } else {
        None
    };

    let mut finals = BTreeSet::new();
    let mut incomplete = 0;
    for r in runs.iter().chain(std::iter::once(&synchronous)) {
        if r.status == RunStatus::Quiescent {
            finals.insert(r.final_states.clone());
        } else {
            incomplete += 1;
        }
    }
    if let Some(e) = &enumeration {
        finals.extend(e.finals.iter().cloned());
        incomplete += e.stuck as usize;
    }
    let distinct_finals: Vec<Vec<Value>> = finals.into_iter().collect();
    let oracle_match = oracle.map(|o| distinct_finals.len() == 1 && distinct_finals[0] == o);
    let complete = enumeration.as_ref().is_none_or(|e| e.complete);
    let passed =
        incomplete == 0 && complete && distinct_finals.len() == 1 && oracle_match != Some(false);
    Ok(ConfluenceReport {
        instance: inst.name.clone(),
        fingerprint: inst.fingerprint().into(),
        runs,
        synchronous,
        enumeration,
        distinct_finals,
        incomplete,
        oracle: oracle.map(<[Value]>::to_vec),
        oracle_match,
        passed,
    })
}
