//! Decoding, share polishing and the result record of one solve.

use serde::{Deserialize, Serialize};

use crate::choice::{invert_share_to_fare, leg_revenue_slope, leg_revenue_term};
use crate::error::{Error, Result};
use crate::milp::assemble::{Instance, Model};
use crate::milp::audit::{audit_solution, AuditReport};
use crate::milp::backend::{BackendOutput, SolveStatus};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispatchSolution {
    pub status: SolveStatus,
    pub backend: String,
    pub dispatch: Vec<u32>,
    pub reposition: Vec<u32>,
    pub sourced: Vec<u32>,
    /// Market share per leg; 0 where the leg is not flown or has no demand.
    pub shares: Vec<f64>,
    /// Operator fare per flown leg with demand.
    pub fares: Vec<Option<f64>>,
    /// Exact daily profit after share polishing.
    pub objective: f64,
    /// Objective of the linearized model at the solver's point.
    pub model_objective: f64,
    pub revenue: f64,
    pub cost: f64,
    /// Proven bound minus `model_objective`; 0 for exhaustive backends.
    pub absolute_gap: f64,
    pub audit: AuditReport,
}

impl DispatchSolution {
    pub fn has_solution(&self) -> bool {
        self.status.has_solution()
    }

    pub fn passengers(&self, inst: &Instance, leg: usize) -> f64 {
        inst.network.legs[leg].demand * self.shares[leg]
    }

    pub fn flights(&self) -> u32 {
        self.dispatch.iter().sum()
    }

    fn empty(status: SolveStatus, backend: &str, inst: &Instance) -> Self {
        let n = inst.network.legs.len();
        DispatchSolution {
            status,
            backend: backend.to_string(),
            dispatch: vec![0; n],
            reposition: vec![0; inst.network.arcs.len()],
            sourced: vec![0; n],
            shares: vec![0.0; n],
            fares: vec![None; n],
            objective: 0.0,
            model_objective: 0.0,
            revenue: 0.0,
            cost: 0.0,
            absolute_gap: 0.0,
            audit: AuditReport::default(),
        }
    }
}

/// Revenue-maximizing share on `[eps, min(1 - eps, S x / d)]`, found by
/// bisection on the sign of the (decreasing) derivative.
pub fn polish_share(inst: &Instance, leg: usize, x: u32) -> f64 {
    let d = inst.network.legs[leg].demand;
    let eps = inst.options.epsilon;
    let ctx = inst.leg_context(leg);
    let mut lo = eps;
    let mut hi = (1.0 - eps).min(f64::from(inst.seats() * x) / d).max(eps);
    if leg_revenue_slope(hi, ctx, d) >= 0.0 {
        return hi;
    }
    if leg_revenue_slope(lo, ctx, d) <= 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if leg_revenue_slope(mid, ctx, d) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn to_count(v: f64, name: &str) -> Result<u32> {
    let r = v.round();
    if (v - r).abs() > 1e-6 || r < 0.0 {
        return Err(Error::Backend {
            backend: "decode".into(),
            message: format!("{name} = {v} is not a nonnegative integer"),
        });
    }
    Ok(r as u32)
}

pub fn decode(model: &Model, out: &BackendOutput, backend: &str) -> Result<DispatchSolution> {
    let inst = &model.instance;
    if !out.status.has_solution() {
        return Ok(DispatchSolution::empty(out.status, backend, inst));
    }
    let lp = &model.program;
    let vars = &model.vars;
    let col = |c: usize| -> Result<u32> { to_count(out.values[c], &lp.columns[c].name) };
    let dispatch = vars
        .dispatch
        .iter()
        .map(|&c| col(c))
        .collect::<Result<Vec<_>>>()?;
    let sourced = vars
        .sourced
        .iter()
        .map(|&c| col(c))
        .collect::<Result<Vec<_>>>()?;
    let reposition = vars
        .reposition
        .iter()
        .map(|&c| col(c))
        .collect::<Result<Vec<_>>>()?;

    let n = inst.network.legs.len();
    let mut shares = vec![0.0; n];
    let mut fares = vec![None; n];
    let mut revenue = 0.0;
    // PWL objective re-evaluated at the solver's shares, free of solver tolerance noise
    let mut model_revenue = 0.0;
    for k in 0..n {
        let d = inst.network.legs[k].demand;
        if dispatch[k] == 0 || d <= 0.0 {
            continue;
        }
        if let Some(cols) = &vars.shares[k] {
            let eps = inst.options.epsilon;
            let cap = (1.0 - eps)
                .min(f64::from(inst.seats() * dispatch[k]) / d)
                .max(eps);
            let w = out.values[cols.share].clamp(eps, cap);
            let ctx = inst.leg_context(k);
            let inner = inst.pwl_x_ln_x.eval(w) - inst.pwl_x_ln_one_minus_x.eval(w)
                + ctx.revenue_offset() * w;
            model_revenue += d / ctx.theta_r * inner;
        }
        let w = polish_share(inst, k, dispatch[k]);
        let ctx = inst.leg_context(k);
        shares[k] = w;
        fares[k] = Some(invert_share_to_fare(w, ctx)?);
        revenue += leg_revenue_term(w, ctx, d)?;
    }
    let cost: f64 = dispatch
        .iter()
        .zip(&inst.leg_costs)
        .map(|(&x, c)| f64::from(x) * c)
        .sum::<f64>()
        + reposition
            .iter()
            .zip(&inst.arc_costs)
            .map(|(&y, c)| f64::from(y) * c)
            .sum::<f64>();
    let mut sol = DispatchSolution {
        status: out.status,
        backend: backend.to_string(),
        dispatch,
        reposition,
        sourced,
        shares,
        fares,
        objective: revenue - cost,
        model_objective: model_revenue - cost,
        revenue,
        cost,
        absolute_gap: out
            .dual_bound
            .map_or(0.0, |b| (b - (model_revenue - cost)).max(0.0)),
        audit: AuditReport::default(),
    };
    sol.audit = audit_solution(inst, &sol);
    Ok(sol)
}
