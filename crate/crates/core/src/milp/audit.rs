//! Independent feasibility re-check of a decoded solution.
//!
//! Works from the raw leg/arc timing fields, not from the assembled rows or the
//! window index, and uses integer arithmetic for every flow quantity.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::milp::assemble::Instance;
use crate::milp::solution::DispatchSolution;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const SHARE_TOLERANCE: f64 = 1e-9;

pub fn audit_solution(inst: &Instance, sol: &DispatchSolution) -> AuditReport {
    let mut bad = Vec::new();
    if !sol.has_solution() {
        return AuditReport::default();
    }
    let net = &inst.network;
    let legs = &net.legs;
    let x: Vec<i64> = sol.dispatch.iter().map(|&v| i64::from(v)).collect();
    let s: Vec<i64> = sol.sourced.iter().map(|&v| i64::from(v)).collect();
    let y: Vec<i64> = sol.reposition.iter().map(|&v| i64::from(v)).collect();

    let mut inflow = vec![0i64; legs.len()];
    let mut outflow = vec![0i64; legs.len()];
    for (a, arc) in net.arcs.iter().enumerate() {
        let (i, j) = (&legs[arc.from_leg], &legs[arc.to_leg]);
        let f = net.ferry.get(i.destination, j.origin);
        if i.arr_window + f > j.dep_window {
            bad.push(format!(
                "arc {}->{} breaks timing",
                arc.from_leg, arc.to_leg
            ));
        }
        inflow[arc.to_leg] += y[a];
        outflow[arc.from_leg] += y[a];
    }
    for k in 0..legs.len() {
        if inflow[k] + s[k] != x[k] {
            bad.push(format!(
                "leg {k}: inbound {} + sourced {} != dispatched {}",
                inflow[k], s[k], x[k]
            ));
        }
        if outflow[k] > x[k] {
            bad.push(format!(
                "leg {k}: outbound {} > dispatched {}",
                outflow[k], x[k]
            ));
        }
    }
    let fleet: i64 = s.iter().sum();
    if fleet > i64::from(inst.fleet) {
        bad.push(format!(
            "fleet: {fleet} aircraft sourced, {} available",
            inst.fleet
        ));
    }

    let mut ops: BTreeMap<(usize, u32), i64> = BTreeMap::new();
    for (k, leg) in legs.iter().enumerate() {
        if leg.arr_window != leg.dep_window + leg.flight_windows || leg.dep_window < 1 {
            bad.push(format!("leg {k}: bad timing"));
        }
        *ops.entry((leg.origin, leg.dep_window)).or_default() += x[k];
        *ops.entry((leg.destination, leg.arr_window)).or_default() += x[k];
    }
    for (a, arc) in net.arcs.iter().enumerate() {
        let (from, to) = (legs[arc.from_leg].destination, legs[arc.to_leg].origin);
        if from == to {
            continue;
        }
        let arrive = legs[arc.to_leg].dep_window;
        let depart = arrive - net.ferry.get(from, to);
        *ops.entry((from, depart)).or_default() += y[a];
        *ops.entry((to, arrive)).or_default() += y[a];
    }
    for (&(v, t), &n) in &ops {
        let cap = i64::from(inst.corridor.vertiports[v].fato_capacity.at(t));
        if n > cap {
            bad.push(format!(
                "FATO {} window {t}: {n} ops > cap {cap}",
                inst.corridor.vertiports[v].id
            ));
        }
    }

    let seats = f64::from(inst.seats());
    let eps = inst.options.epsilon;
    for (k, leg) in legs.iter().enumerate() {
        let w = sol.shares[k];
        let carried = leg.demand * w;
        if carried > seats * x[k] as f64 + SHARE_TOLERANCE * leg.demand.max(1.0) {
            bad.push(format!(
                "leg {k}: {carried} passengers on {} seats",
                seats * x[k] as f64
            ));
        }
        if x[k] == 0 && w != 0.0 {
            bad.push(format!("leg {k}: share {w} on an undispatched leg"));
        }
        if x[k] > 0
            && leg.demand > 0.0
            && !(eps - SHARE_TOLERANCE..=1.0 - eps + SHARE_TOLERANCE).contains(&w)
        {
            bad.push(format!("leg {k}: share {w} outside the clamp"));
        }
    }
    AuditReport { violations: bad }
}
