//! Fixtures shared by the criterion benches.

use std::sync::Arc;

use ramflow_core::scenario::{truncate_horizon, DESK_WINDOWS};
use ramflow_core::{io, AircraftConfig, Corridor, CostModel, Instance, ModelOptions, Network};

/// A bundled corridor cut to the desk-scale horizon.
pub fn desk_corridor(name: &str) -> Corridor {
    truncate_horizon(
        &io::bundled_corridor(name).expect("bundled corridor"),
        DESK_WINDOWS,
    )
}

pub fn instance(corridor: Corridor, seats: u32, fleet: u32) -> Instance {
    let net = Network::build(&corridor).expect("network");
    Instance::new(
        Arc::new(corridor),
        Arc::new(net),
        AircraftConfig::new(seats).expect("seats"),
        CostModel::with_scale(0.6).expect("scale"),
        fleet,
        ModelOptions::default(),
    )
    .expect("instance")
}
