use std::sync::Arc;

use ramflow_core::choice::leg_revenue_slope;
use ramflow_core::io::synthetic;
use ramflow_core::milp::oracle::best_leg_share;
use ramflow_core::milp::{
    assemble, audit_solution, enumeration_oracle, lp_format, solve, EnumerationBackend,
    HighsBackend, PwlEncoding,
};
use ramflow_core::{
    AircraftConfig, Corridor, CostModel, DemandProfile, Error, FatoCapacity, Instance,
    ModelOptions, Network, SolveStatus, SolverSettings,
};

fn instance(c: Corridor, seats: u32, fleet: u32, scale: f64, options: ModelOptions) -> Instance {
    let net = Network::build(&c).unwrap();
    Instance::new(
        Arc::new(c),
        Arc::new(net),
        AircraftConfig::new(seats).unwrap(),
        CostModel::with_scale(scale).unwrap(),
        fleet,
        options,
    )
    .unwrap()
}

/// One leg only: T = 2 windows, a 15-minute flight, demand only outbound.
fn single_leg(trips_in_window: f64) -> Corridor {
    let mut c = synthetic::two_node_corridor(2, 15, 15.0, 0.0);
    c.demand[0] = DemandProfile {
        daily_trips: trips_in_window,
        window_weights: vec![1.0, 0.0],
    };
    c
}

#[test]
fn cost_of_one_four_seat_flight() {
    let c = synthetic::two_node_corridor(10, 15, 60.0, 8.0);
    let inst = instance(c, 4, 1, 1.0, ModelOptions::default());
    assert_eq!(inst.network.legs[0].flight_windows, 4);
    assert_eq!(inst.leg_costs[0], 256.0 + 452.0 * (4.0 * 15.0 / 60.0));
    assert_eq!(inst.leg_costs[0], 708.0);
    let wait = inst.network.arcs.iter().position(|a| a.is_wait()).unwrap();
    assert_eq!(inst.arc_costs[wait], 0.0);
}

#[test]
fn seat_coupling_caps_share_at_half() {
    let inst = instance(single_leg(8.0), 4, 1, 0.1, ModelOptions::default());
    let leg = inst
        .network
        .legs
        .iter()
        .position(|l| l.demand > 0.0)
        .unwrap();
    assert_eq!(inst.network.legs[leg].demand, 8.0);
    // unconstrained optimum lies above 0.5 for this cheap, attractive leg
    let ctx = inst.leg_context(leg);
    assert!(leg_revenue_slope(0.5, ctx, 8.0) > 0.0);
    let model = assemble(inst).unwrap();
    let sol = solve(&model, &HighsBackend, &SolverSettings::default()).unwrap();
    assert_eq!(sol.dispatch[leg], 1);
    assert!((sol.shares[leg] - 0.5).abs() < 1e-9, "{}", sol.shares[leg]);
    assert!(sol.audit.passed());
}

#[test]
fn empty_fleet_flies_nothing() {
    let inst = instance(
        synthetic::tiny_corridor(3),
        4,
        0,
        0.6,
        ModelOptions::default(),
    );
    let model = assemble(inst).unwrap();
    for backend in [
        &HighsBackend as &dyn ramflow_core::SolverBackend,
        &EnumerationBackend,
    ] {
        let sol = solve(&model, backend, &SolverSettings::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!(sol
            .dispatch
            .iter()
            .chain(&sol.reposition)
            .chain(&sol.sourced)
            .all(|&v| v == 0));
        assert_eq!(sol.objective, 0.0);
        assert!(sol.model_objective.abs() < 1e-9);
    }
}

#[test]
fn golden_section_meets_first_order_condition() {
    let inst = instance(single_leg(8.0), 8, 1, 1.0, ModelOptions::default());
    let leg = inst
        .network
        .legs
        .iter()
        .position(|l| l.demand > 0.0)
        .unwrap();
    let (w, _) = best_leg_share(&inst, leg, 1);
    let ctx = inst.leg_context(leg);
    assert!(w > 1e-3 && w < 0.999, "interior optimum expected, got {w}");
    assert!(leg_revenue_slope(w - 1e-6, ctx, 8.0) > 0.0);
    assert!(leg_revenue_slope(w + 1e-6, ctx, 8.0) < 0.0);
}

#[test]
fn zero_demand_means_no_flights() {
    let inst = instance(
        synthetic::two_node_corridor(5, 15, 15.0, 0.0),
        4,
        2,
        0.6,
        ModelOptions::default(),
    );
    let oracle = enumeration_oracle(&inst).unwrap();
    assert_eq!(oracle.objective, Some(0.0));
    assert!(oracle.dispatch.iter().all(|&x| x == 0));
}

#[test]
fn milp_matches_oracle_on_tiny_instances() {
    for seed in 0..6 {
        for fleet in [1, 2] {
            let inst = instance(
                synthetic::tiny_corridor(seed),
                4,
                fleet,
                0.6,
                ModelOptions::default(),
            );
            let oracle = enumeration_oracle(&inst).unwrap();
            let bound = inst.pwl_objective_bound();
            let model = assemble(inst).unwrap();
            let sol = solve(&model, &HighsBackend, &SolverSettings::default()).unwrap();
            let exact = oracle.objective.unwrap();
            assert!(
                (sol.model_objective - exact).abs() <= bound + sol.absolute_gap + 1e-6,
                "seed {seed} K={fleet}: milp {} oracle {exact} bound {bound}",
                sol.model_objective
            );
            // polishing can only close the gap to the exact optimum
            assert!(sol.objective <= exact + 1e-6);
            assert!(sol.audit.passed(), "{:?}", sol.audit.violations);
        }
    }
}

#[test]
fn oracle_point_is_feasible_for_the_model() {
    for encoding in [PwlEncoding::Epigraph, PwlEncoding::Sos2Binary] {
        let options = ModelOptions {
            encoding,
            ..ModelOptions::default()
        };
        let model = assemble(instance(synthetic::tiny_corridor(1), 4, 2, 0.6, options)).unwrap();
        let out = ramflow_core::SolverBackend::solve(
            &EnumerationBackend,
            &model,
            &SolverSettings::default(),
        )
        .unwrap();
        assert!(
            model.program.max_violation(&out.values) < 1e-7,
            "{encoding:?}"
        );
    }
}

#[test]
fn encodings_agree() {
    for seed in [0, 4] {
        let objective = |encoding| {
            let options = ModelOptions {
                encoding,
                ..ModelOptions::default()
            };
            let model =
                assemble(instance(synthetic::tiny_corridor(seed), 4, 2, 0.6, options)).unwrap();
            solve(&model, &HighsBackend, &SolverSettings::default())
                .unwrap()
                .model_objective
        };
        let (a, b) = (
            objective(PwlEncoding::Epigraph),
            objective(PwlEncoding::Sos2Binary),
        );
        assert!((a - b).abs() < 1e-4 * a.abs().max(1.0), "{a} vs {b}");
    }
}

#[test]
fn objective_monotone_in_fleet_and_cost() {
    for seed in 0..4 {
        let mut last = f64::NEG_INFINITY;
        for fleet in 1..=3 {
            let inst = instance(
                synthetic::tiny_corridor(seed),
                4,
                fleet,
                0.6,
                ModelOptions::default(),
            );
            let v = enumeration_oracle(&inst).unwrap().objective.unwrap();
            assert!(v >= last - 1e-9);
            last = v;
        }
        let mut last = f64::INFINITY;
        for scale in [0.4, 0.6, 0.8, 1.0] {
            let model = assemble(instance(
                synthetic::tiny_corridor(seed),
                4,
                2,
                scale,
                ModelOptions::default(),
            ))
            .unwrap();
            let v = solve(&model, &HighsBackend, &SolverSettings::default())
                .unwrap()
                .model_objective;
            assert!(v <= last + 1e-6);
            last = v;
        }
    }
}

#[test]
fn zero_capacity_with_service_floor_is_infeasible() {
    let c = synthetic::two_node_corridor(6, 15, 15.0, 20.0);
    let net = Network::build(&c).unwrap();
    let mut closed = c.clone();
    for v in &mut closed.vertiports {
        v.fato_capacity = FatoCapacity::Uniform(0);
    }
    let make = |min_flights| {
        Instance::new(
            Arc::new(closed.clone()),
            Arc::new(net.clone()),
            AircraftConfig::new(4).unwrap(),
            CostModel::default(),
            2,
            ModelOptions {
                min_flights,
                ..ModelOptions::default()
            },
        )
        .unwrap()
    };
    assert!(matches!(assemble(make(None)), Err(Error::Config(_))));
    let model = assemble(make(Some(1))).unwrap();
    let sol = solve(&model, &HighsBackend, &SolverSettings::default()).unwrap();
    assert_eq!(sol.status, SolveStatus::Infeasible);
    assert_eq!(
        solve(&model, &EnumerationBackend, &SolverSettings::default())
            .unwrap()
            .status,
        SolveStatus::Infeasible
    );
}

#[test]
fn repeated_solves_are_identical() {
    let c = synthetic::two_node_corridor(12, 15, 30.0, 200.0);
    let model = assemble(instance(c, 4, 3, 0.6, ModelOptions::default())).unwrap();
    let a = solve(&model, &HighsBackend, &SolverSettings::default()).unwrap();
    let b = solve(&model, &HighsBackend, &SolverSettings::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn audit_catches_tampering() {
    let c = synthetic::two_node_corridor(12, 15, 30.0, 200.0);
    let model = assemble(instance(c, 4, 3, 0.6, ModelOptions::default())).unwrap();
    let sol = solve(&model, &HighsBackend, &SolverSettings::default()).unwrap();
    assert!(sol.audit.passed());
    assert!(sol.flights() > 0);

    let mut extra = sol.clone();
    let k = extra.dispatch.iter().position(|&x| x > 0).unwrap();
    extra.dispatch[k] += 1;
    assert!(!audit_solution(&model.instance, &extra).passed());

    let mut fleet = sol.clone();
    fleet.sourced[k] += 5;
    fleet.dispatch[k] += 5;
    assert!(audit_solution(&model.instance, &fleet)
        .violations
        .iter()
        .any(|v| v.starts_with("fleet")));

    let mut crowded = sol.clone();
    crowded.shares[k] = 0.9999;
    assert!(!audit_solution(&model.instance, &crowded).passed());
}

#[test]
fn oracle_refuses_large_instances() {
    let inst = instance(
        synthetic::two_node_corridor(20, 15, 15.0, 50.0),
        4,
        2,
        0.6,
        ModelOptions::default(),
    );
    assert!(matches!(enumeration_oracle(&inst), Err(Error::TooLarge(_))));
    let inst = instance(
        synthetic::tiny_corridor(0),
        4,
        4,
        0.6,
        ModelOptions::default(),
    );
    assert!(matches!(enumeration_oracle(&inst), Err(Error::TooLarge(_))));
}

#[test]
fn lp_export_uses_documented_names() {
    let model = assemble(instance(
        synthetic::tiny_corridor(2),
        4,
        1,
        0.6,
        ModelOptions::default(),
    ))
    .unwrap();
    let text = lp_format::to_lp_string(&model.program);
    for name in ["x_leg0", "s_leg0", "w_leg0", "y_0_"] {
        assert!(text.contains(name), "{name}");
    }
    assert!(text.starts_with("\\ ramflow dispatch model\nMaximize\n"));
    assert!(text.ends_with("End\n"));
    assert_eq!(text, lp_format::to_lp_string(&model.program));
}
