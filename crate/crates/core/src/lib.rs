//! Joint dispatch, repositioning and pricing optimization for regional air
//! mobility corridors.
//!
//! A [`Corridor`] is expanded into a time-expanded [`Network`] of flight legs
//! and repositioning arcs. Fares enter the model through the logit share of
//! each leg, so the optimizer chooses shares and recovers fares afterwards.
//! The resulting mixed-integer program is solved by a [`SolverBackend`]
//! (HiGHS by default, or an exhaustive oracle for tiny instances).

// `!(x >= 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod choice;
pub mod domain;
pub mod error;
pub mod io;
pub mod linearize;
pub mod metrics;
pub mod milp;
pub mod network;
pub mod scenario;

pub use domain::{
    scaled_costs, AircraftConfig, ClockTime, Corridor, CostCoefficientConvention, CostModel,
    DemandProfile, DriveAlternative, FatoCapacity, FerryLink, FerryMatrix, ODPair, ScaledCosts,
    ServiceParams, Side, TimeGrid, Vertiport,
};
pub use error::{Error, Result};
pub use metrics::{compute_metrics, MetricBundle};
pub use milp::{
    DispatchSolution, Instance, ModelOptions, SolveStatus, SolverBackend, SolverSettings,
};
pub use network::{FlightLeg, Network, RepositionArc};
pub use scenario::{run_sweep, CellResult, SweepResult, SweepSpec};
