//! Sweeps over corridor x seats x fleet size x cost scale.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{AircraftConfig, Corridor, CostModel, DemandProfile, FatoCapacity, TimeGrid};
use crate::error::{Error, Result};
use crate::metrics::{compute_metrics, MetricBundle};
use crate::milp::{
    self, assemble, DispatchSolution, Instance, ModelOptions, SolveStatus, SolverBackend,
    SolverSettings,
};
use crate::network::Network;

pub const DEFAULT_SEATS: [u32; 3] = [4, 6, 8];
pub const DEFAULT_FLEETS: [u32; 4] = [12, 18, 24, 30];
pub const DEFAULT_SCALES: [f64; 4] = [0.4, 0.6, 0.8, 1.0];

/// Horizon of the desk-scale preset: 06:00 to 11:00 at 15-minute windows.
pub const DESK_WINDOWS: u32 = 20;
pub const DESK_FLEETS: [u32; 2] = [6, 12];

/// Slack added to solver gaps when comparing neighbouring cells.
pub const MONOTONICITY_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub corridors: Vec<Arc<Corridor>>,
    pub seat_options: Vec<u32>,
    pub fleet_sizes: Vec<u32>,
    pub cost_scales: Vec<f64>,
    pub model: ModelOptions,
    pub solver: SolverSettings,
    /// Worker threads; 0 uses all cores.
    pub jobs: usize,
}

impl SweepSpec {
    pub fn new(corridors: Vec<Corridor>) -> Self {
        SweepSpec {
            corridors: corridors.into_iter().map(Arc::new).collect(),
            seat_options: DEFAULT_SEATS.to_vec(),
            fleet_sizes: DEFAULT_FLEETS.to_vec(),
            cost_scales: DEFAULT_SCALES.to_vec(),
            model: ModelOptions::default(),
            solver: SolverSettings::default(),
            jobs: 1,
        }
    }

    /// CI-sized grid: morning horizon, fleets {6, 12}, default seat and scale axes.
    pub fn desk_scale(corridors: Vec<Corridor>) -> Self {
        let mut spec = Self::new(
            corridors
                .iter()
                .map(|c| truncate_horizon(c, DESK_WINDOWS))
                .collect(),
        );
        spec.fleet_sizes = DESK_FLEETS.to_vec();
        spec.solver.time_limit_secs = 120.0;
        spec.solver.mip_gap = 1e-5;
        spec
    }

    pub fn validate(&self) -> Result<()> {
        let empty = |axis: &str| Err(Error::invalid("sweep", format!("`{axis}` axis is empty")));
        if self.corridors.is_empty() {
            return empty("corridors");
        }
        if self.seat_options.is_empty() {
            return empty("seats");
        }
        if self.fleet_sizes.is_empty() {
            return empty("fleets");
        }
        if self.cost_scales.is_empty() {
            return empty("scales");
        }
        for &s in &self.seat_options {
            AircraftConfig::new(s)?;
        }
        for &scale in &self.cost_scales {
            CostModel::with_scale(scale)?;
        }
        for c in &self.corridors {
            c.validate()?;
        }
        Ok(())
    }

    pub fn num_cells(&self) -> usize {
        self.corridors.len()
            * self.seat_options.len()
            * self.fleet_sizes.len()
            * self.cost_scales.len()
    }
}

/// First `windows` windows of `corridor`, keeping per-window demand unchanged.
pub fn truncate_horizon(corridor: &Corridor, windows: u32) -> Corridor {
    let windows = windows.min(corridor.time_grid.num_windows);
    let mut c = corridor.clone();
    c.time_grid = TimeGrid {
        num_windows: windows,
        ..corridor.time_grid
    };
    for d in &mut c.demand {
        let head = &d.window_weights[..windows as usize];
        let mass: f64 = head.iter().sum();
        *d = if mass > 0.0 {
            DemandProfile {
                daily_trips: d.daily_trips * mass,
                window_weights: head.iter().map(|w| w / mass).collect(),
            }
        } else {
            DemandProfile {
                daily_trips: 0.0,
                window_weights: vec![1.0 / f64::from(windows); windows as usize],
            }
        };
    }
    for v in &mut c.vertiports {
        if let FatoCapacity::PerWindow(caps) = &mut v.fato_capacity {
            caps.truncate(windows as usize);
        }
    }
    c
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellKey {
    pub corridor: String,
    pub seats: u32,
    pub fleet: u32,
    pub cost_scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub key: CellKey,
    pub status: Option<SolveStatus>,
    /// Set when the cell could not be built or solved.
    pub error: Option<String>,
    pub metrics: Option<MetricBundle>,
    pub solution: Option<DispatchSolution>,
}

impl CellResult {
    pub fn audit_violations(&self) -> &[String] {
        self.solution.as_ref().map_or(&[], |s| &s.audit.violations)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityViolation {
    pub axis: String,
    pub smaller: CellKey,
    pub larger: CellKey,
    pub objectives: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub cells: Vec<CellResult>,
    pub monotonicity: Vec<MonotonicityViolation>,
}

impl SweepResult {
    pub fn find(
        &self,
        corridor: &str,
        seats: u32,
        fleet: u32,
        cost_scale: f64,
    ) -> Option<&CellResult> {
        self.cells.iter().find(|c| {
            c.key.corridor == corridor
                && c.key.seats == seats
                && c.key.fleet == fleet
                && c.key.cost_scale == cost_scale
        })
    }
}

/// Build, solve and measure one cell.
#[allow(clippy::too_many_arguments)]
pub fn solve_cell(
    corridor: Arc<Corridor>,
    network: Arc<Network>,
    seats: u32,
    fleet: u32,
    cost_scale: f64,
    options: ModelOptions,
    backend: &dyn SolverBackend,
    settings: &SolverSettings,
) -> Result<(Instance, DispatchSolution, MetricBundle)> {
    let cost_model = CostModel {
        cost_scale,
        ..corridor.costs
    };
    let inst = Instance::new(
        corridor,
        network,
        AircraftConfig::new(seats)?,
        cost_model,
        fleet,
        options,
    )?;
    let model = assemble(inst)?;
    let sol = milp::solve(&model, backend, settings)?;
    let metrics = compute_metrics(&sol, &model.instance);
    Ok((model.instance, sol, metrics))
}

pub fn run_sweep(spec: &SweepSpec, backend: &dyn SolverBackend) -> Result<SweepResult> {
    spec.validate()?;
    let networks = spec
        .corridors
        .iter()
        .map(|c| Network::build(c).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    let mut jobs = Vec::with_capacity(spec.num_cells());
    for (ci, c) in spec.corridors.iter().enumerate() {
        for &seats in &spec.seat_options {
            for &fleet in &spec.fleet_sizes {
                for &cost_scale in &spec.cost_scales {
                    jobs.push((
                        ci,
                        CellKey {
                            corridor: c.name.clone(),
                            seats,
                            fleet,
                            cost_scale,
                        },
                    ));
                }
            }
        }
    }
    let run = |(ci, key): &(usize, CellKey)| {
        let started = std::time::Instant::now();
        let out = solve_cell(
            spec.corridors[*ci].clone(),
            networks[*ci].clone(),
            key.seats,
            key.fleet,
            key.cost_scale,
            spec.model,
            backend,
            &spec.solver,
        );
        log::info!(
            "{} seats={} K={} scale={}: {:.1}s",
            key.corridor,
            key.seats,
            key.fleet,
            key.cost_scale,
            started.elapsed().as_secs_f64()
        );
        match out {
            Ok((_, sol, metrics)) => CellResult {
                key: key.clone(),
                status: Some(sol.status),
                error: None,
                metrics: sol.has_solution().then_some(metrics),
                solution: Some(sol),
            },
            Err(e) => {
                log::warn!(
                    "{} seats={} K={} scale={}: {e}",
                    key.corridor,
                    key.seats,
                    key.fleet,
                    key.cost_scale
                );
                CellResult {
                    key: key.clone(),
                    status: None,
                    error: Some(e.to_string()),
                    metrics: None,
                    solution: None,
                }
            }
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let cells: Vec<CellResult> = pool.install(|| jobs.par_iter().map(run).collect());
    let monotonicity = monotonicity_audit(&cells);
    for v in &monotonicity {
        log::warn!(
            "objective not monotone in {}: {:?} -> {:?} ({} vs {})",
            v.axis,
            v.smaller,
            v.larger,
            v.objectives.0,
            v.objectives.1
        );
    }
    Ok(SweepResult {
        cells,
        monotonicity,
    })
}

fn solved(c: &CellResult) -> Option<&DispatchSolution> {
    c.solution.as_ref().filter(|s| s.has_solution())
}

/// Objective must not fall as the fleet grows or rise as costs grow.
pub fn monotonicity_audit(cells: &[CellResult]) -> Vec<MonotonicityViolation> {
    let mut out = Vec::new();
    for a in cells {
        for b in cells {
            let same_line = a.key.corridor == b.key.corridor && a.key.seats == b.key.seats;
            let (Some(sa), Some(sb)) = (solved(a), solved(b)) else {
                continue;
            };
            let tol = MONOTONICITY_TOLERANCE + sa.absolute_gap + sb.absolute_gap;
            if same_line
                && a.key.cost_scale == b.key.cost_scale
                && a.key.fleet < b.key.fleet
                && sb.model_objective < sa.model_objective - tol
            {
                out.push(MonotonicityViolation {
                    axis: "fleet".into(),
                    smaller: a.key.clone(),
                    larger: b.key.clone(),
                    objectives: (sa.model_objective, sb.model_objective),
                });
            }
            if same_line
                && a.key.fleet == b.key.fleet
                && a.key.cost_scale < b.key.cost_scale
                && sb.model_objective > sa.model_objective + tol
            {
                out.push(MonotonicityViolation {
                    axis: "cost_scale".into(),
                    smaller: a.key.clone(),
                    larger: b.key.clone(),
                    objectives: (sa.model_objective, sb.model_objective),
                });
            }
        }
    }
    out
}
