//! Brute-force verification oracle for tiny instances.
//!
//! Every feasible integer flow is a multiset of at most K aircraft itineraries
//! (chains of legs joined by repositioning arcs), so enumerating those
//! multisets covers every (x, y, s). Shares are then optimized per leg on the
//! exact revenue, with no linearization.

use crate::choice::leg_revenue_term;
use crate::error::{Error, Result};
use crate::milp::assemble::{Instance, Model, PwlEncoding};
use crate::milp::backend::{
    BackendOutput, Capabilities, SolveStatus, SolverBackend, SolverSettings,
};

pub const MAX_LEGS: usize = 12;
pub const MAX_FLEET: u32 = 3;
pub const MAX_ITINERARIES: usize = 20_000;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSolution {
    /// Exact profit. `None` when no flow meets the service floor.
    pub objective: Option<f64>,
    pub dispatch: Vec<u32>,
    pub reposition: Vec<u32>,
    pub sourced: Vec<u32>,
    /// Optimal share per leg; 0 where nothing flies or nobody travels.
    pub shares: Vec<f64>,
    pub flows_evaluated: u64,
}

/// Maximizes a unimodal function on `[a, b]`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    // the optimum may sit on a bound
    [a, mid, b]
        .into_iter()
        .fold((mid, f(mid)), |best, w| {
            let v = f(w);
            if v > best.1 {
                (w, v)
            } else {
                best
            }
        })
        .0
}

/// Best share and revenue of `leg` when `x` aircraft fly it.
pub fn best_leg_share(inst: &Instance, leg: usize, x: u32) -> (f64, f64) {
    let d = inst.network.legs[leg].demand;
    if x == 0 || d <= 0.0 {
        return (0.0, 0.0);
    }
    let eps = inst.options.epsilon;
    let hi = (1.0 - eps).min(f64::from(inst.seats() * x) / d).max(eps);
    let ctx = inst.leg_context(leg);
    let rev = |w: f64| leg_revenue_term(w, ctx, d).unwrap_or(f64::NEG_INFINITY);
    let w = golden_section_max(rev, eps, hi, 1e-10);
    (w, rev(w))
}

struct Itinerary {
    legs: Vec<usize>,
    arcs: Vec<usize>,
    /// FATO slots touched, one entry per operation.
    slots: Vec<usize>,
}

fn itineraries(inst: &Instance) -> Result<Vec<Itinerary>> {
    let net = &inst.network;
    let horizon = inst.corridor.time_grid.num_windows as usize + 1;
    let slot = |v: usize, t: u32| v * horizon + t as usize;
    let (_, outbound) = net.arc_adjacency();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, Vec<usize>)> = (0..net.legs.len())
        .rev()
        .map(|k| (vec![k], vec![]))
        .collect();
    while let Some((legs, arcs)) = stack.pop() {
        let last = *legs.last().unwrap();
        for &a in outbound[last].iter().rev() {
            let mut l = legs.clone();
            l.push(net.arcs[a].to_leg);
            let mut r = arcs.clone();
            r.push(a);
            stack.push((l, r));
        }
        let mut slots = Vec::new();
        for &k in &legs {
            let leg = &net.legs[k];
            slots.push(slot(leg.origin, leg.dep_window));
            slots.push(slot(leg.destination, leg.arr_window));
        }
        for &a in &arcs {
            let arc = &net.arcs[a];
            if !arc.is_wait() {
                slots.push(slot(
                    net.legs[arc.from_leg].destination,
                    arc.ferry_dep_window,
                ));
                slots.push(slot(net.legs[arc.to_leg].origin, arc.ferry_arr_window));
            }
        }
        out.push(Itinerary { legs, arcs, slots });
        if out.len() > MAX_ITINERARIES {
            return Err(Error::TooLarge(format!(
                "more than {MAX_ITINERARIES} aircraft itineraries"
            )));
        }
    }
    Ok(out)
}

/// Objective with the x, y and s vectors that reach it.
type Incumbent = (f64, Vec<u32>, Vec<u32>, Vec<u32>);

struct Search<'a> {
    inst: &'a Instance,
    paths: Vec<Itinerary>,
    /// revenue[k][x] for x = 0..=K
    revenue: Vec<Vec<f64>>,
    caps: Vec<u32>,
    used: Vec<u32>,
    x: Vec<u32>,
    y: Vec<u32>,
    s: Vec<u32>,
    min_flights: u32,
    flights: u32,
    value: f64,
    best: Option<Incumbent>,
    evaluated: u64,
}

impl Search<'_> {
    fn visit(&mut self, from: usize, remaining: u32) {
        self.evaluated += 1;
        if self.flights >= self.min_flights && self.best.as_ref().is_none_or(|b| self.value > b.0) {
            self.best = Some((self.value, self.x.clone(), self.y.clone(), self.s.clone()));
        }
        if remaining == 0 {
            return;
        }
        for p in from..self.paths.len() {
            if !self.fits(p) {
                continue;
            }
            self.apply(p, true);
            self.visit(p, remaining - 1);
            self.apply(p, false);
        }
    }

    fn fits(&self, p: usize) -> bool {
        let slots = &self.paths[p].slots;
        slots.iter().all(|&q| {
            let extra = slots.iter().filter(|&&r| r == q).count() as u32;
            self.used[q] + extra <= self.caps[q]
        })
    }

    fn apply(&mut self, p: usize, add: bool) {
        let path = &self.paths[p];
        let step = |v: &mut u32| if add { *v += 1 } else { *v -= 1 };
        for &q in &path.slots {
            step(&mut self.used[q]);
        }
        for &k in &path.legs {
            let before = self.revenue[k][self.x[k] as usize];
            step(&mut self.x[k]);
            let after = self.revenue[k][self.x[k] as usize];
            let cost = self.inst.leg_costs[k];
            self.value += after - before + if add { -cost } else { cost };
        }
        for &a in &path.arcs {
            step(&mut self.y[a]);
            let cost = self.inst.arc_costs[a];
            self.value += if add { -cost } else { cost };
        }
        step(&mut self.s[path.legs[0]]);
        if add {
            self.flights += path.legs.len() as u32;
        } else {
            self.flights -= path.legs.len() as u32;
        }
    }
}

/// Exhaustive optimum of the exact (non-linearized) profit.
pub fn enumeration_oracle(inst: &Instance) -> Result<OracleSolution> {
    let net = &inst.network;
    if net.legs.len() > MAX_LEGS {
        return Err(Error::TooLarge(format!(
            "{} legs (oracle limit {MAX_LEGS})",
            net.legs.len()
        )));
    }
    if inst.fleet > MAX_FLEET {
        return Err(Error::TooLarge(format!(
            "fleet {} (oracle limit {MAX_FLEET})",
            inst.fleet
        )));
    }
    let grid = &inst.corridor.time_grid;
    let horizon = grid.num_windows as usize + 1;
    let mut caps = vec![0; inst.corridor.vertiports.len() * horizon];
    for (v, vp) in inst.corridor.vertiports.iter().enumerate() {
        for t in 1..=grid.num_windows {
            caps[v * horizon + t as usize] = vp.fato_capacity.at(t);
        }
    }
    let revenue = (0..net.legs.len())
        .map(|k| {
            (0..=inst.fleet)
                .map(|x| best_leg_share(inst, k, x).1)
                .collect()
        })
        .collect();
    let mut search = Search {
        inst,
        paths: itineraries(inst)?,
        revenue,
        used: vec![0; caps.len()],
        caps,
        x: vec![0; net.legs.len()],
        y: vec![0; net.arcs.len()],
        s: vec![0; net.legs.len()],
        min_flights: inst.options.min_flights.unwrap_or(0),
        flights: 0,
        value: 0.0,
        best: None,
        evaluated: 0,
    };
    search.visit(0, inst.fleet);
    let evaluated = search.evaluated;
    Ok(match search.best {
        Some((value, x, y, s)) => OracleSolution {
            objective: Some(value),
            shares: x
                .iter()
                .enumerate()
                .map(|(k, &n)| best_leg_share(inst, k, n).0)
                .collect(),
            dispatch: x,
            reposition: y,
            sourced: s,
            flows_evaluated: evaluated,
        },
        None => OracleSolution {
            objective: None,
            dispatch: vec![0; net.legs.len()],
            reposition: vec![0; net.arcs.len()],
            sourced: vec![0; net.legs.len()],
            shares: vec![0.0; net.legs.len()],
            flows_evaluated: evaluated,
        },
    })
}

/// Backend wrapper around [`enumeration_oracle`]. The column values it returns
/// are a feasible point of the assembled model carrying the exact optimum's
/// flow and shares.
#[derive(Clone, Copy, Debug, Default)]
pub struct EnumerationBackend;

impl SolverBackend for EnumerationBackend {
    fn name(&self) -> &'static str {
        "enumeration"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            integers: true,
            general_milp: false,
        }
    }

    fn solve(&self, model: &Model, _settings: &SolverSettings) -> Result<BackendOutput> {
        let inst = &model.instance;
        let sol = enumeration_oracle(inst)?;
        if sol.objective.is_none() {
            return Ok(BackendOutput {
                status: SolveStatus::Infeasible,
                values: Vec::new(),
                objective: 0.0,
                dual_bound: None,
            });
        }
        let lp = &model.program;
        let vars = &model.vars;
        let mut values = vec![0.0; lp.columns.len()];
        for k in 0..inst.network.legs.len() {
            values[vars.dispatch[k]] = f64::from(sol.dispatch[k]);
            values[vars.sourced[k]] = f64::from(sol.sourced[k]);
        }
        for (a, &c) in vars.reposition.iter().enumerate() {
            values[c] = f64::from(sol.reposition[a]);
        }
        let eps = inst.options.epsilon;
        let pwls = [&inst.pwl_x_ln_x, &inst.pwl_x_ln_one_minus_x];
        for (k, cols) in vars.shares.iter().enumerate() {
            let Some(cols) = cols else { continue };
            let flown = sol.dispatch[k] > 0;
            let w = if flown { sol.shares[k] } else { eps };
            let e1 = pwls[0].eval(w);
            let e2 = pwls[1].eval(w);
            values[cols.share] = w;
            values[cols.served] = if flown { 1.0 } else { 0.0 };
            values[cols.x_ln_x] = e1;
            values[cols.x_ln_one_minus_x] = e2;
            if flown {
                let ctx = inst.leg_context(k);
                let c = inst.network.legs[k].demand / ctx.theta_r;
                values[cols.revenue] = c * (e1 - e2 + ctx.revenue_offset() * w);
            }
            if let (Some(sos), PwlEncoding::Sos2Binary) = (&cols.sos, inst.options.encoding) {
                for (pwl, s) in pwls.iter().zip(sos) {
                    let bp = &pwl.breakpoints;
                    let seg = bp
                        .windows(2)
                        .position(|p| w <= p[1].0)
                        .unwrap_or(bp.len() - 2);
                    let t = ((w - bp[seg].0) / (bp[seg + 1].0 - bp[seg].0)).clamp(0.0, 1.0);
                    values[s.selectors[seg]] = 1.0;
                    values[s.lambdas[seg]] = 1.0 - t;
                    values[s.lambdas[seg + 1]] = t;
                }
            }
        }
        Ok(BackendOutput {
            status: SolveStatus::Optimal,
            objective: lp.objective_value(&values),
            values,
            dual_bound: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_peak() {
        let w = golden_section_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10);
        assert!((w - 0.3).abs() < 1e-8);
        assert_eq!(golden_section_max(|x| x, 0.0, 1.0, 1e-10), 1.0);
    }
}
