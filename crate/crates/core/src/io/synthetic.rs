//! Seeded synthetic corridors for tests, benches and the verify command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{
    ClockTime, Corridor, CostModel, DemandProfile, DriveAlternative, FatoCapacity, FerryLink,
    FerryMatrix, ODPair, ServiceParams, Side, TimeGrid, Vertiport,
};

fn vertiport(id: &str, side: Side, cap: u32) -> Vertiport {
    Vertiport {
        id: id.into(),
        name: id.into(),
        fato_capacity: FatoCapacity::Uniform(cap),
        side,
    }
}

fn uniform(daily_trips: f64, windows: u32) -> DemandProfile {
    DemandProfile {
        daily_trips,
        window_weights: vec![1.0 / f64::from(windows); windows as usize],
    }
}

/// A drive alternative that makes air travel clearly attractive.
fn slow_drive(flight_minutes: f64) -> DriveAlternative {
    DriveAlternative::new(2.0 * flight_minutes, 2.5 * flight_minutes + 60.0)
}

fn od(origin: usize, destination: usize, flight_minutes: f64, city_heading: bool) -> ODPair {
    ODPair {
        origin,
        destination,
        flight_minutes,
        flight_miles: 1.6 * flight_minutes,
        access_minutes: 5.0,
        egress_minutes: 5.0,
        access_cost: 0.0,
        egress_cost: 0.0,
        drive: slow_drive(flight_minutes),
        city_heading,
    }
}

/// Campus and city, one OD pair each way with the same flight time, ferry
/// links equal to the flight, uniform demand.
pub fn two_node_corridor(
    num_windows: u32,
    window_minutes: u32,
    flight_minutes: f64,
    daily_trips: f64,
) -> Corridor {
    let mut ferries = FerryMatrix::new(2);
    let link = FerryLink {
        minutes: flight_minutes,
        miles: 1.6 * flight_minutes,
    };
    ferries.set(0, 1, link);
    ferries.set(1, 0, link);
    Corridor {
        name: "two-node".into(),
        vertiports: vec![
            vertiport("CAMP", Side::Campus, 4),
            vertiport("CITY", Side::Metro, 4),
        ],
        od_pairs: vec![
            od(0, 1, flight_minutes, true),
            od(1, 0, flight_minutes, false),
        ],
        demand: vec![
            uniform(daily_trips, num_windows),
            uniform(daily_trips, num_windows),
        ],
        time_grid: TimeGrid {
            window_minutes,
            num_windows,
            day_start: ClockTime::from_hm(6, 0).expect("valid clock"),
        },
        ferries,
        service: ServiceParams::default(),
        costs: CostModel::default(),
    }
}

/// Random corridor on `num_vertiports` nodes: random subset of OD pairs (at
/// least one), asymmetric ferry times around `flight_minutes`, random caps and
/// demand weights.
pub fn random_corridor(
    seed: u64,
    num_vertiports: usize,
    num_windows: u32,
    flight_minutes: f64,
) -> Corridor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertiports = (0..num_vertiports)
        .map(|v| {
            let side = if v == 0 { Side::Campus } else { Side::Metro };
            vertiport(&format!("V{v}"), side, rng.gen_range(1..=4))
        })
        .collect();
    let mut ferries = FerryMatrix::new(num_vertiports);
    let mut od_pairs = Vec::new();
    let mut demand = Vec::new();
    for a in 0..num_vertiports {
        for b in 0..num_vertiports {
            if a == b {
                continue;
            }
            let minutes = flight_minutes * rng.gen_range(0.5..1.5);
            ferries.set(
                a,
                b,
                FerryLink {
                    minutes,
                    miles: 1.6 * minutes,
                },
            );
            if od_pairs.is_empty() || rng.gen_bool(0.6) {
                let raw: Vec<f64> = (0..num_windows).map(|_| rng.gen_range(0.0..1.0)).collect();
                let total: f64 = raw.iter().sum();
                od_pairs.push(od(a, b, flight_minutes, b != 0));
                demand.push(DemandProfile {
                    daily_trips: rng.gen_range(0.0..200.0),
                    window_weights: raw.iter().map(|w| w / total).collect(),
                });
            }
        }
    }
    Corridor {
        name: format!("random-{seed}"),
        vertiports,
        od_pairs,
        demand,
        time_grid: TimeGrid {
            window_minutes: 15,
            num_windows,
            day_start: ClockTime::from_hm(6, 0).expect("valid clock"),
        },
        ferries,
        service: ServiceParams::default(),
        costs: CostModel::default(),
    }
}

/// Oracle-sized corridor: 2 vertiports, T <= 6, at most 8 legs, per-window
/// demand comparable to a few seats so that capacity coupling binds.
pub fn tiny_corridor(seed: u64) -> Corridor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // (T, flight minutes) pairs with 2 * (T - f) <= 8
    let shapes = [(5u32, 15.0), (6, 30.0), (4, 15.0), (5, 30.0), (6, 25.0)];
    let (windows, flight) = shapes[rng.gen_range(0..shapes.len())];
    let mut c = two_node_corridor(windows, 15, flight, 1.0);
    c.name = format!("tiny-{seed}");
    for (k, profile) in c.demand.iter_mut().enumerate() {
        let raw: Vec<f64> = (0..windows).map(|_| rng.gen_range(0.2..1.0)).collect();
        let total: f64 = raw.iter().sum();
        profile.daily_trips =
            f64::from(windows) * rng.gen_range(2.0..14.0) * if k == 0 { 1.0 } else { 0.6 };
        profile.window_weights = raw.iter().map(|w| w / total).collect();
    }
    for v in &mut c.vertiports {
        v.fato_capacity = FatoCapacity::Uniform(rng.gen_range(1..=3));
    }
    let back = c.ferries.get(1, 0).expect("set above");
    c.ferries.set(
        1,
        0,
        FerryLink {
            minutes: back.minutes * rng.gen_range(0.6..1.4),
            ..back
        },
    );
    c
}
