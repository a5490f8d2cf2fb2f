use std::sync::Arc;

use ramflow_core::io::synthetic;
use ramflow_core::milp::{assemble, solve, HighsBackend};
use ramflow_core::{
    compute_metrics, AircraftConfig, Corridor, CostModel, DemandProfile, DispatchSolution,
    Instance, ModelOptions, Network, SolverSettings,
};

fn instance(c: Corridor, seats: u32, fleet: u32, scale: f64) -> Instance {
    let net = Network::build(&c).unwrap();
    Instance::new(
        Arc::new(c),
        Arc::new(net),
        AircraftConfig::new(seats).unwrap(),
        CostModel::with_scale(scale).unwrap(),
        fleet,
        ModelOptions::default(),
    )
    .unwrap()
}

fn solved(inst: Instance) -> (Instance, DispatchSolution) {
    let model = assemble(inst).unwrap();
    let sol = solve(&model, &HighsBackend, &SolverSettings::default()).unwrap();
    (model.instance, sol)
}

/// Demand only outbound, so a one-aircraft schedule has to ferry back.
fn one_way_corridor() -> Corridor {
    let mut c = synthetic::two_node_corridor(12, 15, 15.0, 240.0);
    c.demand[1] = DemandProfile {
        daily_trips: 0.0,
        window_weights: vec![1.0 / 12.0; 12],
    };
    c
}

#[test]
fn no_dispatch_is_flagged_empty() {
    let (inst, sol) = solved(instance(synthetic::tiny_corridor(0), 4, 0, 0.6));
    let m = compute_metrics(&sol, &inst);
    assert!(m.empty);
    assert_eq!(
        (
            m.profit,
            m.throughput,
            m.rasm,
            m.cost_per_mile,
            m.load_factor
        ),
        (0.0, 0.0, 0.0, 0.0, 0.0)
    );
    assert_eq!(m.flights, 0);
}

#[test]
fn single_flight_example() {
    let mut c = synthetic::two_node_corridor(4, 15, 30.0, 0.0);
    c.od_pairs[0].flight_miles = 100.0;
    c.demand[0] = DemandProfile {
        daily_trips: 8.0,
        window_weights: vec![1.0, 0.0, 0.0, 0.0],
    };
    let (inst, mut sol) = solved(instance(c, 4, 0, 1.0));
    let k = inst
        .network
        .legs
        .iter()
        .position(|l| l.demand == 8.0)
        .unwrap();
    sol.dispatch[k] = 1;
    sol.sourced[k] = 1;
    sol.shares[k] = 0.25;
    sol.fares[k] = Some(120.0);
    sol.revenue = 240.0;
    let m = compute_metrics(&sol, &inst);
    assert_eq!(m.load_factor, 0.5);
    assert_eq!(m.throughput, 2.0);
    assert!((m.fare_per_mile.mean - 1.2).abs() < 1e-12);
    assert!(m
        .fare_per_mile
        .quantiles
        .iter()
        .all(|q| (q - 1.2).abs() < 1e-12));
    assert!((m.rasm - 0.6).abs() < 1e-12);
    assert!(!m.empty);
}

#[test]
fn revenue_identity_holds() {
    for (c, seats, fleet) in [
        (synthetic::tiny_corridor(2), 4, 2),
        (synthetic::two_node_corridor(12, 15, 30.0, 300.0), 6, 3),
        (one_way_corridor(), 4, 1),
    ] {
        let (inst, sol) = solved(instance(c, seats, fleet, 0.4));
        let m = compute_metrics(&sol, &inst);
        let collected: f64 = (0..inst.network.legs.len())
            .filter_map(|k| sol.fares[k].map(|f| f * inst.network.legs[k].demand * sol.shares[k]))
            .sum();
        assert!((m.profit + m.cost - collected).abs() <= 1e-6 * collected.abs().max(1.0));
        let demand: f64 = inst.network.legs.iter().map(|l| l.demand).sum();
        assert!(m.throughput <= demand + 1e-9);
        assert!((0.0..=1.0 + 1e-12).contains(&m.load_factor));
    }
}

#[test]
fn rasm_and_cost_per_mile_recomputed() {
    let (inst, sol) = solved(instance(one_way_corridor(), 4, 1, 0.4));
    let m = compute_metrics(&sol, &inst);
    assert!(
        m.reposition_flights > 0,
        "scenario should need a ferry back"
    );

    let grid = inst.corridor.time_grid;
    let fh = 113.0 * 4.0 * 0.4;
    let fc = 64.0 * 4.0 * 0.4;
    let mut cost = 0.0;
    let mut revenue_miles = 0.0;
    for (k, leg) in inst.network.legs.iter().enumerate() {
        let x = f64::from(sol.dispatch[k]);
        cost += x * (fc + fh * f64::from(leg.flight_windows * grid.window_minutes) / 60.0);
        revenue_miles += x * inst.corridor.od_pairs[leg.od_ref].flight_miles;
    }
    let mut ferry_miles = 0.0;
    for (a, arc) in inst.network.arcs.iter().enumerate() {
        let y = f64::from(sol.reposition[a]);
        if arc.ferry_windows > 0 {
            cost += y * (fc + fh * f64::from(arc.ferry_windows * grid.window_minutes) / 60.0);
            // the one-way corridor ferries are 1.6 miles per minute, 15 minutes
            ferry_miles += y * 24.0;
        }
    }
    assert!((m.cost - cost).abs() < 1e-9 * cost);
    assert!((m.reposition_miles - ferry_miles).abs() < 1e-9);
    assert!((m.cost_per_mile - cost / (revenue_miles + ferry_miles)).abs() < 1e-12);
    assert!((m.rasm - sol.revenue / (4.0 * revenue_miles)).abs() < 1e-12);
    // seat miles exclude ferries, cost miles include them
    assert!(m.rasm > sol.revenue / (4.0 * (revenue_miles + ferry_miles)));
}

#[test]
fn fare_quantiles_are_ordered() {
    let (inst, sol) = solved(instance(
        synthetic::two_node_corridor(16, 15, 30.0, 600.0),
        4,
        4,
        0.4,
    ));
    let m = compute_metrics(&sol, &inst);
    assert!(m.flights > 1);
    let q = m.fare_per_mile.quantiles;
    assert!(q.windows(2).all(|p| p[0] <= p[1]), "{q:?}");
    assert!(q[0] <= m.fare_per_mile.mean && m.fare_per_mile.mean <= q[4]);
}
