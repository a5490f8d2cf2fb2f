//! Reporting quantities of a solved cell.

use serde::{Deserialize, Serialize};

use crate::milp::{DispatchSolution, Instance};

pub const FARE_QUANTILES: [f64; 5] = [0.10, 0.25, 0.50, 0.75, 0.90];

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FareSummary {
    /// Passenger-weighted fare per mile at [`FARE_QUANTILES`].
    pub quantiles: [f64; 5],
    pub mean: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricBundle {
    pub profit: f64,
    pub revenue: f64,
    pub cost: f64,
    pub throughput: f64,
    pub rasm: f64,
    pub fare_per_mile: FareSummary,
    pub cost_per_mile: f64,
    pub load_factor: f64,
    pub flights: u32,
    pub reposition_flights: u32,
    pub revenue_miles: f64,
    pub reposition_miles: f64,
    /// Nothing was dispatched; ratios are reported as 0.
    pub empty: bool,
}

/// Inverse-CDF quantile of `(value, weight)` pairs.
pub fn weighted_quantile(sorted: &[(f64, f64)], q: f64) -> f64 {
    let total: f64 = sorted.iter().map(|p| p.1).sum();
    if sorted.is_empty() || total <= 0.0 {
        return 0.0;
    }
    let target = q * total;
    let mut acc = 0.0;
    for &(v, w) in sorted {
        acc += w;
        if acc >= target - 1e-12 * total {
            return v;
        }
    }
    sorted[sorted.len() - 1].0
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

pub fn compute_metrics(sol: &DispatchSolution, inst: &Instance) -> MetricBundle {
    let net = &inst.network;
    let corridor = &inst.corridor;
    let seats = f64::from(inst.seats());
    let mut throughput = 0.0;
    let mut revenue_miles = 0.0;
    let mut seat_miles = 0.0;
    let mut fares = Vec::new();
    for (k, leg) in net.legs.iter().enumerate() {
        let x = f64::from(sol.dispatch[k]);
        let miles = corridor.od_pairs[leg.od_ref].flight_miles;
        revenue_miles += x * miles;
        seat_miles += x * seats * miles;
        let pax = leg.demand * sol.shares[k];
        throughput += pax;
        if let Some(fare) = sol.fares[k] {
            fares.push((fare / miles, pax));
        }
    }
    let mut reposition_flights = 0;
    let mut reposition_miles = 0.0;
    for (a, arc) in net.arcs.iter().enumerate() {
        if arc.is_wait() || sol.reposition[a] == 0 {
            continue;
        }
        let from = net.legs[arc.from_leg].destination;
        let to = net.legs[arc.to_leg].origin;
        let miles = corridor.ferries.get(from, to).map_or(0.0, |l| l.miles);
        reposition_flights += sol.reposition[a];
        reposition_miles += f64::from(sol.reposition[a]) * miles;
    }
    fares.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total_pax: f64 = fares.iter().map(|p| p.1).sum();
    let fare_per_mile = FareSummary {
        quantiles: FARE_QUANTILES.map(|q| weighted_quantile(&fares, q)),
        mean: ratio(fares.iter().map(|p| p.0 * p.1).sum(), total_pax),
    };
    let flights = sol.flights();
    MetricBundle {
        profit: sol.objective,
        revenue: sol.revenue,
        cost: sol.cost,
        throughput,
        rasm: ratio(sol.revenue, seat_miles),
        fare_per_mile,
        cost_per_mile: ratio(sol.cost, revenue_miles + reposition_miles),
        load_factor: ratio(throughput, seats * f64::from(flights)),
        flights,
        reposition_flights,
        revenue_miles,
        reposition_miles,
        empty: flights == 0,
    }
}
