use proptest::prelude::*;
use ramflow_core::{scaled_costs, AircraftConfig, CostModel, DemandProfile, TimeGrid};

#[test]
fn reference_costs() {
    let four = scaled_costs(&AircraftConfig::new(4).unwrap(), &CostModel::default());
    assert_eq!(
        (four.per_flight_hour, four.per_flight_cycle),
        (452.0, 256.0)
    );
    let eight = scaled_costs(
        &AircraftConfig::new(8).unwrap(),
        &CostModel::with_scale(0.5).unwrap(),
    );
    assert_eq!(four, eight);
    assert!(CostModel::with_scale(0.0).is_err());
    assert!(CostModel::with_scale(1.51).is_err());
    assert!(AircraftConfig::new(0).is_err());
}

#[test]
fn flight_cost_of_one_hour() {
    let grid = TimeGrid::weekday_default();
    let c = scaled_costs(&AircraftConfig::new(4).unwrap(), &CostModel::default());
    assert_eq!(c.flight(4, &grid), 708.0);
    assert_eq!(c.flight(0, &grid), 0.0);
}

#[test]
fn weekday_profile_shape() {
    let grid = TimeGrid::weekday_default();
    let p = DemandProfile::bimodal_weekday(88.0, &grid);
    // 06:00 base, 07:00 peak, 10:00 base, 16:00 peak, 19:00 base
    let expect = [
        (1, 1.0),
        (5, 2.0),
        (16, 2.0),
        (17, 1.0),
        (41, 2.0),
        (52, 2.0),
        (53, 1.0),
        (64, 1.0),
    ];
    for (t, trips) in expect {
        assert!((p.trips_in(t) - trips).abs() < 1e-12, "window {t}");
    }
    p.validate(&grid).unwrap();
}

proptest! {
    #[test]
    fn costs_linear_in_scale_and_seats(seats in 1u32..20, a in 0.01f64..0.7, b in 0.01f64..0.7) {
        let cfg = AircraftConfig::new(seats).unwrap();
        let at = |s: f64| scaled_costs(&cfg, &CostModel::with_scale(s).unwrap());
        let (ca, cb, cab) = (at(a), at(b), at(a + b));
        prop_assert!((cab.per_flight_hour - ca.per_flight_hour - cb.per_flight_hour).abs() < 1e-9);
        prop_assert!((cab.per_flight_cycle - ca.per_flight_cycle - cb.per_flight_cycle).abs() < 1e-9);
        let one = scaled_costs(&AircraftConfig::new(1).unwrap(), &CostModel::with_scale(a).unwrap());
        prop_assert!((ca.per_flight_hour - f64::from(seats) * one.per_flight_hour).abs() < 1e-9);
    }

    #[test]
    fn demand_is_conserved(total in 0.0f64..1e5, raw in prop::collection::vec(0.0f64..10.0, 64)) {
        let sum: f64 = raw.iter().sum();
        prop_assume!(sum > 0.0);
        let grid = TimeGrid::weekday_default();
        let p = DemandProfile { daily_trips: total, window_weights: raw.iter().map(|w| w / sum).collect() };
        p.validate(&grid).unwrap();
        let back: f64 = (1..=64).map(|t| p.trips_in(t)).sum();
        prop_assert!((back - total).abs() <= 1e-6 * total.max(1.0));
    }
}
