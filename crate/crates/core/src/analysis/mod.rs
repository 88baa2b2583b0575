//! Checks on what Bob can learn and what the protocols cost.

pub mod blindness;
pub mod bounds;
pub mod equivalence;
pub mod report;

pub use blindness::{
    blindness_distance, iterated_view_density, maximally_mixed, program_view_density,
    trace_distance, ViewDensity,
};
pub use bounds::{gate_set_cardinality, no_programming_bound, pigeonhole_bound, BoundParams};
pub use equivalence::{verify_program, Coverage, EquivalenceReport};
pub use report::{cost_report, CostReport};
