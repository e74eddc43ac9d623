//! Monoids, actions, argument functions (1-cocycles), readouts and the
//! semidirect product, each with a law checker that returns concrete
//! counterexamples.

mod action;
mod carrier;
mod cocycle;
mod monoid;
mod readout;
pub(crate) mod report;
pub mod stock;

pub use action::{check_action, ActionSpec};
pub use carrier::Carrier;
pub use cocycle::{
    check_cocycle, cocycle_from_pointwise, naive_delta, naive_delta_with, star_act, star_action,
    ArgumentFn,
};
pub use monoid::{check_monoid_laws, is_idempotent, BinOp, MonoidSpec};
pub use readout::{
    check_splitting, readout_add, readout_ract, semidirect_monoid, semidirect_mul,
    splitting_is_hom, ReadoutTable, SemidirectElement,
};
pub use report::{CheckConfig, Coverage, Law, ViolationReport, Witness};
