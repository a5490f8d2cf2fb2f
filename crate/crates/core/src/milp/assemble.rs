//! Builds the joint dispatch / repositioning / share model for one scenario cell.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::choice::{ModeContext, SHARE_EPSILON};
use crate::domain::{scaled_costs, AircraftConfig, Corridor, CostModel, ScaledCosts};
use crate::error::{Error, Result};
use crate::linearize::{
    build_pwl, mccormick_constraints, EntropyTerm, Interval, McCormickBox, PwlApprox,
    DEFAULT_SEGMENTS,
};
use crate::milp::program::{LinearProgram, VarKind};
use crate::network::Network;

/// How the entropy interpolants enter the model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PwlEncoding {
    /// One inequality per segment; exact for the interpolant because the revenue is concave.
    #[default]
    Epigraph,
    /// Convex-combination weights with binary segment selectors.
    Sos2Binary,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelOptions {
    pub num_segments: usize,
    pub epsilon: f64,
    pub encoding: PwlEncoding,
    /// Optional lower bound on total revenue flights.
    pub min_flights: Option<u32>,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions {
            num_segments: DEFAULT_SEGMENTS,
            epsilon: SHARE_EPSILON,
            encoding: PwlEncoding::Epigraph,
            min_flights: None,
        }
    }
}

/// Fully resolved inputs of one scenario cell.
#[derive(Clone, Debug)]
pub struct Instance {
    pub corridor: Arc<Corridor>,
    pub network: Arc<Network>,
    pub aircraft: AircraftConfig,
    pub cost_model: CostModel,
    pub costs: ScaledCosts,
    pub fleet: u32,
    pub options: ModelOptions,
    /// One per OD pair.
    pub contexts: Vec<ModeContext>,
    pub leg_costs: Vec<f64>,
    pub arc_costs: Vec<f64>,
    /// Dispatch bound per leg: fleet size and FATO capacity at both ends.
    pub max_dispatch: Vec<u32>,
    pub pwl_x_ln_x: PwlApprox,
    pub pwl_x_ln_one_minus_x: PwlApprox,
}

impl Instance {
    pub fn new(
        corridor: Arc<Corridor>,
        network: Arc<Network>,
        aircraft: AircraftConfig,
        cost_model: CostModel,
        fleet: u32,
        options: ModelOptions,
    ) -> Result<Self> {
        cost_model.validate()?;
        if aircraft.seats == 0 {
            return Err(Error::invalid("aircraft", "seats must be at least 1"));
        }
        let grid = corridor.time_grid;
        let costs = scaled_costs(&aircraft, &cost_model);
        let contexts = corridor
            .od_pairs
            .iter()
            .map(|od| ModeContext::for_od(od, &corridor.service))
            .collect();
        let leg_costs = network
            .legs
            .iter()
            .map(|l| costs.flight(l.flight_windows, &grid))
            .collect();
        let arc_costs = network
            .arcs
            .iter()
            .map(|a| costs.flight(a.ferry_windows, &grid))
            .collect();
        let cap = |v: usize, t: u32| corridor.vertiports[v].fato_capacity.at(t);
        let max_dispatch = network
            .legs
            .iter()
            .map(|l| {
                fleet
                    .min(cap(l.origin, l.dep_window))
                    .min(cap(l.destination, l.arr_window))
            })
            .collect();
        Ok(Instance {
            pwl_x_ln_x: build_pwl(EntropyTerm::XLnX, options.epsilon, options.num_segments)?,
            pwl_x_ln_one_minus_x: build_pwl(
                EntropyTerm::XLnOneMinusX,
                options.epsilon,
                options.num_segments,
            )?,
            corridor,
            network,
            aircraft,
            cost_model,
            costs,
            fleet,
            options,
            contexts,
            leg_costs,
            arc_costs,
            max_dispatch,
        })
    }

    pub fn leg_context(&self, leg: usize) -> &ModeContext {
        &self.contexts[self.network.legs[leg].od_ref]
    }

    pub fn seats(&self) -> u32 {
        self.aircraft.seats
    }

    /// Worst-case objective shift caused by the two interpolants:
    /// `(err(w ln w) + err(w ln(1-w))) * sum(d) / |theta_r|`.
    pub fn pwl_objective_bound(&self) -> f64 {
        let err = self.pwl_x_ln_x.max_abs_error + self.pwl_x_ln_one_minus_x.max_abs_error;
        self.network
            .legs
            .iter()
            .map(|l| err * l.demand / self.contexts[l.od_ref].theta_r.abs())
            .sum()
    }
}

/// Columns attached to a leg with positive demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareColumns {
    pub share: usize,
    pub served: usize,
    pub x_ln_x: usize,
    pub x_ln_one_minus_x: usize,
    pub revenue: usize,
    /// Convex-combination weights and segment selectors per entropy term (SOS2 encoding only).
    pub sos: Option<[SosColumns; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SosColumns {
    pub lambdas: Vec<usize>,
    pub selectors: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariableMap {
    pub dispatch: Vec<usize>,
    pub sourced: Vec<usize>,
    pub reposition: Vec<usize>,
    pub shares: Vec<Option<ShareColumns>>,
}

#[derive(Clone, Debug)]
pub struct Model {
    pub program: LinearProgram,
    pub vars: VariableMap,
    pub instance: Instance,
}

/// Assemble flow conservation, fleet bound, FATO capacity, seat coupling,
/// share pinning and the linearized revenue into one MILP.
pub fn assemble(instance: Instance) -> Result<Model> {
    let net = &instance.network;
    let corridor = &instance.corridor;
    // with a service floor the solver reports the infeasibility instead
    if instance.max_dispatch.iter().all(|&m| m == 0)
        && instance.fleet > 0
        && instance.options.min_flights.is_none()
    {
        return Err(Error::Config(format!(
            "no leg of `{}` can be dispatched: FATO capacity is zero at every used window",
            corridor.name
        )));
    }
    let eps = instance.options.epsilon;
    let fleet = f64::from(instance.fleet);
    let seats = f64::from(instance.seats());
    let mut lp = LinearProgram::default();
    let mut vars = VariableMap::default();

    for (k, _) in net.legs.iter().enumerate() {
        let hi = f64::from(instance.max_dispatch[k]);
        vars.dispatch.push(lp.add_column(
            format!("x_leg{k}"),
            0.0,
            hi,
            VarKind::Integer,
            -instance.leg_costs[k],
        ));
    }
    for (k, _) in net.legs.iter().enumerate() {
        let hi = f64::from(instance.max_dispatch[k]);
        vars.sourced
            .push(lp.add_column(format!("s_leg{k}"), 0.0, hi, VarKind::Integer, 0.0));
    }
    for (a, arc) in net.arcs.iter().enumerate() {
        let hi = fleet
            .min(f64::from(instance.max_dispatch[arc.from_leg]))
            .min(f64::from(instance.max_dispatch[arc.to_leg]));
        vars.reposition.push(lp.add_column(
            format!("y_{}_{}", arc.from_leg, arc.to_leg),
            0.0,
            hi,
            VarKind::Integer,
            -instance.arc_costs[a],
        ));
    }

    let (inbound, outbound) = net.arc_adjacency();
    for k in 0..net.legs.len() {
        // aircraft reaching the start of leg k all fly it
        let mut terms: Vec<(usize, f64)> = inbound[k]
            .iter()
            .map(|&a| (vars.reposition[a], 1.0))
            .collect();
        terms.push((vars.sourced[k], 1.0));
        terms.push((vars.dispatch[k], -1.0));
        lp.add_eq(format!("start_leg{k}"), terms, 0.0);
        if !outbound[k].is_empty() {
            let mut terms: Vec<(usize, f64)> = outbound[k]
                .iter()
                .map(|&a| (vars.reposition[a], 1.0))
                .collect();
            terms.push((vars.dispatch[k], -1.0));
            lp.add_le(format!("end_leg{k}"), terms, 0.0);
        }
    }
    lp.add_le(
        "fleet".into(),
        vars.sourced.iter().map(|&c| (c, 1.0)).collect(),
        fleet,
    );

    for (v, t, ops) in net.windows.iter() {
        if ops.is_empty() {
            continue;
        }
        let mut terms: Vec<(usize, f64)> = ops
            .leg_dep
            .iter()
            .chain(&ops.leg_arr)
            .map(|&i| (vars.dispatch[i], 1.0))
            .collect();
        terms.extend(
            ops.arc_dep
                .iter()
                .chain(&ops.arc_arr)
                .map(|&a| (vars.reposition[a], 1.0)),
        );
        let cap = corridor.vertiports[v].fato_capacity.at(t);
        lp.add_le(
            format!("fato_{}_{t}", corridor.vertiports[v].id),
            terms,
            f64::from(cap),
        );
    }

    if let Some(min) = instance.options.min_flights {
        lp.add_ge(
            "min_service".into(),
            vars.dispatch.iter().map(|&c| (c, 1.0)).collect(),
            f64::from(min),
        );
    }

    let p1 = &instance.pwl_x_ln_x;
    let p2 = &instance.pwl_x_ln_one_minus_x;
    let e1_lo = p1
        .breakpoints
        .iter()
        .map(|b| b.1)
        .fold(f64::INFINITY, f64::min);
    let e1_hi = p1
        .breakpoints
        .iter()
        .map(|b| b.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let e2_lo = p2
        .breakpoints
        .iter()
        .map(|b| b.1)
        .fold(f64::INFINITY, f64::min);
    let e2_hi = p2
        .breakpoints
        .iter()
        .map(|b| b.1)
        .fold(f64::NEG_INFINITY, f64::max);

    for (k, leg) in net.legs.iter().enumerate() {
        if leg.demand <= 0.0 {
            vars.shares.push(None);
            continue;
        }
        let d = leg.demand;
        let ctx = instance.leg_context(k);
        let x = vars.dispatch[k];
        let w = lp.add_column(
            format!("w_leg{k}"),
            eps,
            1.0 - eps,
            VarKind::Continuous,
            0.0,
        );
        let z = lp.add_column(format!("z_leg{k}"), 0.0, 1.0, VarKind::Binary, 0.0);
        let e1 = lp.add_column(format!("e1_leg{k}"), e1_lo, e1_hi, VarKind::Continuous, 0.0);
        let e2 = lp.add_column(format!("e2_leg{k}"), e2_lo, e2_hi, VarKind::Continuous, 0.0);

        // revenue R = c * (e1 - e2 + offset * w), c = d / theta_r < 0
        let c = d / ctx.theta_r;
        let offset = ctx.revenue_offset();
        let inner_lo = e1_lo - e2_hi + (offset * eps).min(offset * (1.0 - eps));
        let inner_hi = e1_hi - e2_lo + (offset * eps).max(offset * (1.0 - eps));
        let (r_lo, r_hi) = (c * inner_hi, c * inner_lo);
        let rev = lp.add_column(
            format!("r_leg{k}"),
            r_lo.min(0.0),
            r_hi.max(0.0),
            VarKind::Continuous,
            1.0,
        );

        lp.add_le(
            format!("seat_leg{k}"),
            vec![(w, d), (x, -seats), (z, d * eps)],
            d * eps,
        );
        lp.add_le(
            format!("pin_leg{k}"),
            vec![(w, 1.0), (z, -(1.0 - 2.0 * eps))],
            eps,
        );
        lp.add_le(format!("link_lo_leg{k}"), vec![(z, 1.0), (x, -1.0)], 0.0);
        lp.add_le(
            format!("link_hi_leg{k}"),
            vec![(x, 1.0), (z, -f64::from(instance.max_dispatch[k]))],
            0.0,
        );

        let sos = match instance.options.encoding {
            PwlEncoding::Epigraph => {
                for (s, seg) in p1.segments().enumerate() {
                    lp.add_ge(
                        format!("pwl1_leg{k}_{s}"),
                        vec![(e1, 1.0), (w, -seg.slope)],
                        seg.intercept,
                    );
                }
                for (s, seg) in p2.segments().enumerate() {
                    lp.add_le(
                        format!("pwl2_leg{k}_{s}"),
                        vec![(e2, 1.0), (w, -seg.slope)],
                        seg.intercept,
                    );
                }
                None
            }
            PwlEncoding::Sos2Binary => Some([
                add_sos2(&mut lp, k, "1", p1, w, e1),
                add_sos2(&mut lp, k, "2", p2, w, e2),
            ]),
        };

        // rev = z * R, with R expanded as its linear expression in (e1, e2, w)
        let bx = McCormickBox {
            u: Interval::new(0.0, 1.0),
            v: Interval::new(r_lo, r_hi),
        };
        for (m, ineq) in mccormick_constraints(&bx)?.iter().enumerate() {
            let mut terms = vec![(rev, ineq.coef_w), (z, ineq.coef_u)];
            let cv = ineq.coef_v;
            if cv != 0.0 {
                terms.push((e1, cv * c));
                terms.push((e2, -cv * c));
                terms.push((w, cv * c * offset));
            }
            lp.add_le(format!("mc{m}_leg{k}"), terms, ineq.rhs);
        }

        vars.shares.push(Some(ShareColumns {
            share: w,
            served: z,
            x_ln_x: e1,
            x_ln_one_minus_x: e2,
            revenue: rev,
            sos,
        }));
    }

    Ok(Model {
        program: lp,
        vars,
        instance,
    })
}

/// `w = sum(l_p * w_p)`, `e = sum(l_p * f(w_p))`, `sum(l) = 1`, one active segment,
/// and only the two weights bordering it may be nonzero.
fn add_sos2(
    lp: &mut LinearProgram,
    leg: usize,
    tag: &str,
    pwl: &PwlApprox,
    w: usize,
    e: usize,
) -> SosColumns {
    let n = pwl.breakpoints.len();
    let lambdas: Vec<usize> = (0..n)
        .map(|p| {
            lp.add_column(
                format!("l{tag}_leg{leg}_{p}"),
                0.0,
                1.0,
                VarKind::Continuous,
                0.0,
            )
        })
        .collect();
    let selectors: Vec<usize> = (0..n - 1)
        .map(|s| {
            lp.add_column(
                format!("b{tag}_leg{leg}_{s}"),
                0.0,
                1.0,
                VarKind::Binary,
                0.0,
            )
        })
        .collect();
    lp.add_eq(
        format!("sos{tag}_sum_leg{leg}"),
        lambdas.iter().map(|&l| (l, 1.0)).collect(),
        1.0,
    );
    lp.add_eq(
        format!("sos{tag}_pick_leg{leg}"),
        selectors.iter().map(|&b| (b, 1.0)).collect(),
        1.0,
    );
    let mut wx: Vec<(usize, f64)> = lambdas
        .iter()
        .zip(&pwl.breakpoints)
        .map(|(&l, bp)| (l, -bp.0))
        .collect();
    wx.push((w, 1.0));
    lp.add_eq(format!("sos{tag}_w_leg{leg}"), wx, 0.0);
    let mut ex: Vec<(usize, f64)> = lambdas
        .iter()
        .zip(&pwl.breakpoints)
        .map(|(&l, bp)| (l, -bp.1))
        .collect();
    ex.push((e, 1.0));
    lp.add_eq(format!("sos{tag}_e_leg{leg}"), ex, 0.0);
    for (p, &l) in lambdas.iter().enumerate() {
        let mut terms = vec![(l, 1.0)];
        if p > 0 {
            terms.push((selectors[p - 1], -1.0));
        }
        if p < n - 1 {
            terms.push((selectors[p], -1.0));
        }
        lp.add_le(format!("sos{tag}_adj_leg{leg}_{p}"), terms, 0.0);
    }
    SosColumns { lambdas, selectors }
}
