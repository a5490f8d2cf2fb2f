use proptest::prelude::*;
use ramflow_core::choice::{
    door_to_door_time, drive_cost, invert_share_to_fare, leg_revenue_direct, leg_revenue_term,
    logit_share, ModeContext, SHARE_EPSILON,
};
use ramflow_core::io::bundled_corridor;
use ramflow_core::{DriveAlternative, Error, Side};

#[test]
fn bundled_door_to_door_times() {
    let c = bundled_corridor("tamu_houston").unwrap();
    for od in &c.od_pairs {
        let t = door_to_door_time(od, &c.service);
        let expected = od.access_minutes + 5.0 + 10.0 + od.flight_minutes + od.egress_minutes + 5.0;
        assert!((t - expected).abs() < 1e-12);
    }
}

#[test]
fn drive_costs_of_the_houston_market() {
    assert!((drive_cost(&DriveAlternative::new(95.5, 102.0), true) - 81.12).abs() < 1e-9);
    assert!((drive_cost(&DriveAlternative::new(95.7, 100.0), false) - 61.248).abs() < 1e-9);
    let c = bundled_corridor("tamu_houston").unwrap();
    let od = c
        .od_pairs
        .iter()
        .find(|o| {
            c.vertiports[o.destination].side == Side::Metro
                && c.vertiports[o.origin].side == Side::Campus
        })
        .unwrap();
    assert!(od.city_heading);
}

#[test]
fn logit_is_overflow_safe() {
    assert_eq!(logit_share(1e6, 0.0), 1.0);
    assert_eq!(logit_share(-1e6, 0.0), 0.0);
    assert!((logit_share(800.0 + 3f64.ln(), 800.0) - 0.75).abs() < 1e-12);
}

#[test]
fn share_outside_open_interval() {
    let ctx = ModeContext::new(100.0, 120.0, 80.0, -0.03, -0.05);
    for w in [0.0, 1.0, -0.1, f64::NAN] {
        assert!(matches!(
            invert_share_to_fare(w, &ctx),
            Err(Error::ShareDomain(_))
        ));
    }
}

fn any_ctx() -> impl Strategy<Value = ModeContext> {
    (
        40.0f64..250.0,
        40.0f64..250.0,
        0.0f64..150.0,
        -0.08f64..-0.005,
        -0.15f64..-0.005,
    )
        .prop_map(|(tr, td, rd, tt, trr)| ModeContext::new(tr, td, rd, tt, trr))
}

proptest! {
    #[test]
    fn fare_round_trip(c in any_ctx(), w in SHARE_EPSILON..1.0 - SHARE_EPSILON) {
        let fare = invert_share_to_fare(w, &c).unwrap();
        let v_ram = c.theta_t * c.t_ram + c.theta_r * (fare + c.access_egress_cost);
        prop_assert!((logit_share(v_ram, c.v_drive) - w).abs() <= 1e-9);
    }

    #[test]
    fn two_revenue_paths_agree(c in any_ctx(), w in 0.01f64..0.99, d in 0.0f64..500.0) {
        let a = leg_revenue_term(w, &c, d).unwrap();
        let b = leg_revenue_direct(w, &c, d).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn higher_share_means_lower_fare(c in any_ctx(), a in 0.001f64..0.99, b in 0.001f64..0.99) {
        prop_assume!(a < b);
        prop_assert!(invert_share_to_fare(a, &c).unwrap() > invert_share_to_fare(b, &c).unwrap());
    }
}
