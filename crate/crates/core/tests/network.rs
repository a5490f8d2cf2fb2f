use std::collections::BTreeSet;

use proptest::prelude::*;
use ramflow_core::io::synthetic;
use ramflow_core::{Error, Network};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn arcs_are_exactly_the_timed_pairs(seed in any::<u64>(), nv in 2usize..5, windows in 4u32..14, flight in 10.0f64..50.0) {
        let c = synthetic::random_corridor(seed, nv, windows, flight);
        let Ok(net) = Network::build(&c) else { return Ok(()) };
        let grid = c.time_grid;
        let ferry = |a: usize, b: usize| {
            if a == b { 0 } else { grid.windows_for(c.ferries.get(a, b).unwrap().minutes) }
        };
        let mut expected = BTreeSet::new();
        for (i, li) in net.legs.iter().enumerate() {
            prop_assert!(li.dep_window >= 1 && li.arr_window <= windows);
            prop_assert_eq!(li.arr_window, li.dep_window + li.flight_windows);
            for (j, lj) in net.legs.iter().enumerate() {
                if li.arr_window + ferry(li.destination, lj.origin) <= lj.dep_window {
                    expected.insert((i, j));
                }
            }
        }
        let got: BTreeSet<_> = net.arcs.iter().map(|a| (a.from_leg, a.to_leg)).collect();
        prop_assert_eq!(got.len(), net.arcs.len());
        prop_assert_eq!(got, expected);
        for a in &net.arcs {
            let (i, j) = (&net.legs[a.from_leg], &net.legs[a.to_leg]);
            prop_assert_eq!(a.ferry_windows, ferry(i.destination, j.origin));
            prop_assert_eq!(a.ferry_arr_window, j.dep_window);
            prop_assert_eq!(a.ferry_dep_window + a.ferry_windows, j.dep_window);
        }
    }

    #[test]
    fn window_index_partitions_operations(seed in any::<u64>(), nv in 2usize..4, windows in 4u32..12) {
        let c = synthetic::random_corridor(seed, nv, windows, 20.0);
        let Ok(net) = Network::build(&c) else { return Ok(()) };
        let mut leg_dep = vec![0; net.legs.len()];
        let mut leg_arr = vec![0; net.legs.len()];
        let mut arc_dep = vec![0; net.arcs.len()];
        let mut arc_arr = vec![0; net.arcs.len()];
        for (v, t, ops) in net.windows.iter() {
            for &k in &ops.leg_dep {
                prop_assert!(net.legs[k].origin == v && net.legs[k].dep_window == t);
                leg_dep[k] += 1;
            }
            for &k in &ops.leg_arr {
                prop_assert!(net.legs[k].destination == v && net.legs[k].arr_window == t);
                leg_arr[k] += 1;
            }
            for &a in &ops.arc_dep {
                prop_assert_eq!(net.arcs[a].ferry_dep_window, t);
                prop_assert_eq!(net.legs[net.arcs[a].from_leg].destination, v);
                arc_dep[a] += 1;
            }
            for &a in &ops.arc_arr {
                prop_assert_eq!(net.arcs[a].ferry_arr_window, t);
                prop_assert_eq!(net.legs[net.arcs[a].to_leg].origin, v);
                arc_arr[a] += 1;
            }
        }
        prop_assert!(leg_dep.iter().chain(&leg_arr).all(|&n| n == 1));
        for (a, arc) in net.arcs.iter().enumerate() {
            let n = if arc.is_wait() { 0 } else { 1 };
            prop_assert_eq!((arc_dep[a], arc_arr[a]), (n, n));
        }
    }
}

#[test]
fn two_vertiport_arc_count() {
    // f = 2 both ways, T = 8: legs depart 1..=6 in each direction
    let c = synthetic::two_node_corridor(8, 15, 30.0, 10.0);
    let net = Network::build(&c).unwrap();
    assert_eq!(net.legs.len(), 12);
    let mut n = 0;
    for a in 1..=6u32 {
        for b in 1..=6u32 {
            // same-place chain: a + 2 <= b; opposite: a + 2 + 2 <= b
            n += usize::from(a + 2 <= b) + usize::from(a + 4 <= b);
        }
    }
    assert_eq!(net.arcs.len(), 2 * n);
}

#[test]
fn short_horizon_is_a_config_error() {
    let c = synthetic::two_node_corridor(3, 15, 75.0, 10.0);
    assert!(matches!(Network::build(&c), Err(Error::Config(_))));
}

#[test]
fn bundled_leg_counts() {
    for (name, legs) in [("tamu_houston", 8 * 60), ("uiuc_chicago", 6 * 59)] {
        let c = ramflow_core::io::bundled_corridor(name).unwrap();
        let net = Network::build(&c).unwrap();
        assert_eq!(net.legs.len(), legs, "{name}");
    }
}
