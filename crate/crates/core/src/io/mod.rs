//! Corridor files, demand overrides, synthetic corridors and result emission.

pub mod config;
pub mod demand_csv;
pub mod emit;
pub mod synthetic;

pub use config::{
    bundled_corridor, emit_corridor, load_corridor, parse_corridor, CorridorConfig, BUNDLED,
    SCHEMA_VERSION,
};
pub use demand_csv::{
    apply_overrides, load_demand_csv, od_id, parse_demand_csv, DemandOverrides, Reconciliation,
};
pub use emit::{emit_results, emit_solution, read_results_csv, RESULT_COLUMNS};
