//! Pluggable exact solvers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::milp::assemble::Model;
use crate::milp::oracle::EnumerationBackend;

/// Environment variable naming the default backend (`highs` or `enumeration`).
pub const SOLVER_ENV: &str = "RAMFLOW_SOLVER";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub time_limit_secs: f64,
    /// Relative optimality gap at which the search stops.
    pub mip_gap: f64,
    pub threads: u32,
    pub seed: u32,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            time_limit_secs: 600.0,
            mip_gap: 1e-6,
            threads: 1,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Feasible,
    Infeasible,
    Timeout,
}

impl SolveStatus {
    pub fn has_solution(self) -> bool {
        matches!(self, SolveStatus::Optimal | SolveStatus::Feasible)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Capabilities {
    pub integers: bool,
    /// Accepts any model, not only the structured dispatch model.
    pub general_milp: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BackendOutput {
    pub status: SolveStatus,
    /// Column values, empty unless `status.has_solution()`.
    pub values: Vec<f64>,
    pub objective: f64,
    /// Best proven upper bound on the maximization objective.
    pub dual_bound: Option<f64>,
}

pub trait SolverBackend: Send + Sync {
    fn name(&self) -> &'static str;

    fn capabilities(&self) -> Capabilities;

    fn solve(&self, model: &Model, settings: &SolverSettings) -> Result<BackendOutput>;
}

pub fn backend_by_name(name: &str) -> Result<Box<dyn SolverBackend>> {
    match name.trim().to_ascii_lowercase().as_str() {
        #[cfg(feature = "highs")]
        "highs" => Ok(Box::new(HighsBackend)),
        "enumeration" | "oracle" => Ok(Box::new(EnumerationBackend)),
        other => Err(Error::Backend {
            backend: other.to_string(),
            message: "unknown or not compiled in (available: highs, enumeration)".into(),
        }),
    }
}

/// `$RAMFLOW_SOLVER` if set, else HiGHS when compiled in, else the enumeration oracle.
pub fn default_backend() -> Result<Box<dyn SolverBackend>> {
    match std::env::var(SOLVER_ENV) {
        Ok(name) if !name.trim().is_empty() => backend_by_name(&name),
        _ => {
            #[cfg(feature = "highs")]
            {
                Ok(Box::new(HighsBackend))
            }
            #[cfg(not(feature = "highs"))]
            {
                Ok(Box::new(EnumerationBackend))
            }
        }
    }
}

#[cfg(feature = "highs")]
pub use self::highs_backend::HighsBackend;

#[cfg(feature = "highs")]
mod highs_backend {
    use highs::{ColProblem, HighsModelStatus, HighsSolutionStatus, Sense};

    use super::*;
    use crate::milp::program::VarKind;

    /// HiGHS branch-and-cut, single-threaded with a fixed seed.
    #[derive(Clone, Copy, Debug, Default)]
    pub struct HighsBackend;

    impl SolverBackend for HighsBackend {
        fn name(&self) -> &'static str {
            "highs"
        }

        fn capabilities(&self) -> Capabilities {
            Capabilities {
                integers: true,
                general_milp: true,
            }
        }

        fn solve(&self, model: &Model, settings: &SolverSettings) -> Result<BackendOutput> {
            let lp = &model.program;
            let mut pb = ColProblem::default();
            let rows: Vec<_> = lp.rows.iter().map(|r| pb.add_row(r.lo..=r.hi)).collect();
            let mut col_terms: Vec<Vec<(highs::Row, f64)>> = vec![Vec::new(); lp.columns.len()];
            for (r, row) in lp.rows.iter().enumerate() {
                for &(j, a) in &row.terms {
                    col_terms[j].push((rows[r], a));
                }
            }
            for (col, terms) in lp.columns.iter().zip(col_terms) {
                let integer = col.kind != VarKind::Continuous;
                pb.add_column_with_integrality(col.objective, col.lo..=col.hi, terms, integer);
            }

            let mut solver = pb.optimise(Sense::Maximise);
            solver.make_quiet();
            solver.set_option("threads", settings.threads.max(1) as i32);
            solver.set_option("random_seed", settings.seed as i32);
            solver.set_option("time_limit", settings.time_limit_secs);
            solver.set_option("mip_rel_gap", settings.mip_gap);
            let solved = solver.try_solve().map_err(|s| Error::Backend {
                backend: self.name().into(),
                message: format!("run failed: {s:?}"),
            })?;

            let has_primal = solved.primal_solution_status() == HighsSolutionStatus::Feasible;
            let status = match solved.status() {
                HighsModelStatus::Optimal => SolveStatus::Optimal,
                HighsModelStatus::Infeasible | HighsModelStatus::UnboundedOrInfeasible => {
                    SolveStatus::Infeasible
                }
                HighsModelStatus::ReachedTimeLimit
                | HighsModelStatus::ReachedIterationLimit
                | HighsModelStatus::ReachedSolutionLimit
                | HighsModelStatus::ReachedInterrupt => {
                    if has_primal {
                        SolveStatus::Feasible
                    } else {
                        SolveStatus::Timeout
                    }
                }
                other => {
                    return Err(Error::Backend {
                        backend: self.name().into(),
                        message: format!("unexpected model status {other:?}"),
                    })
                }
            };
            if !status.has_solution() {
                return Ok(BackendOutput {
                    status,
                    values: Vec::new(),
                    objective: 0.0,
                    dual_bound: None,
                });
            }
            let values = solved.get_solution().columns().to_vec();
            let dual_bound = solved
                .double_info_value(c"mip_dual_bound")
                .ok()
                .filter(|b| b.is_finite());
            Ok(BackendOutput {
                status,
                objective: lp.objective_value(&values),
                values,
                dual_bound,
            })
        }
    }
}
