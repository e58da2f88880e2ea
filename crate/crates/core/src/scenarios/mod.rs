//! End-to-end constructions: nontrivial twists, twists with `End^0 = Q`,
//! the cyclic and `p = 1 mod 12` obstructions, and the Weil-number table.
//!
//! Each scenario returns a [`ScenarioReport`] whose verdict is the
//! conjunction of its checks.

mod report;
mod twists;
mod weil;

pub use report::{Check, CocycleValue, ScenarioReport, TwistClassReport};
pub use twists::{scenario_counterexample, scenario_cyclic_galois, scenario_end_q, scenario_sign_units};
pub use weil::{
    classify_weil, quadratic_embeds_in_bp, supersingular_traces, tate_label, verify_table, PiForm, TableObservation,
    TableStatus, WeilClass,
};
