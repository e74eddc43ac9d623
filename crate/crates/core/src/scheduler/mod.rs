//! Discrete-event execution of an [`Instance`](crate::fabric::Instance)
//! under seeded, reproducible schedules, with traces that replay exactly.

mod run;
mod trace;
mod world;

pub use run::{
    enumerate_interleavings, run, synchronous_run, Caps, EnumerationReport, RunOutcome, RunStatus,
    SchedulePolicy, DEFAULT_ENUMERATION_BOUND, DEFAULT_EVENT_CAP,
};
pub use trace::{Record, RecordKind, ScriptStep, Trace, TraceHeader, RNG_NAME, TRACE_FORMAT};
pub use world::{detect_quiescence, step, Event, EventKind, WorldState};
