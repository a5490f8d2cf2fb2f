//! Dispatch, repositioning and pricing model: assembly, solvers, decoding, audit.

pub mod assemble;
pub mod audit;
pub mod backend;
pub mod lp_format;
pub mod oracle;
pub mod program;
pub mod solution;

pub use assemble::{
    assemble, Instance, Model, ModelOptions, PwlEncoding, ShareColumns, VariableMap,
};
pub use audit::{audit_solution, AuditReport};
#[cfg(feature = "highs")]
pub use backend::HighsBackend;
pub use backend::{
    backend_by_name, default_backend, BackendOutput, Capabilities, SolveStatus, SolverBackend,
    SolverSettings,
};
pub use oracle::{enumeration_oracle, EnumerationBackend, OracleSolution};
pub use program::{LinearProgram, VarKind};
pub use solution::{decode, polish_share, DispatchSolution};

use crate::error::Result;

/// Run `model` through `backend`, decode, polish shares and audit.
pub fn solve(
    model: &Model,
    backend: &dyn SolverBackend,
    settings: &SolverSettings,
) -> Result<DispatchSolution> {
    let out = backend.solve(model, settings)?;
    log::debug!(
        "{}: {:?}, model objective {:.4} ({} columns, {} rows)",
        backend.name(),
        out.status,
        out.objective,
        model.program.columns.len(),
        model.program.rows.len()
    );
    decode(model, &out, backend.name())
}
