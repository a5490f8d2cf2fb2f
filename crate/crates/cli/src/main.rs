//! `ramflow`: solve one corridor cell, run sweeps, or audit a corridor.
//!
//! Exit codes: 0 success, 1 solve or audit failure, 2 usage or validation
//! error, 3 I/O, parse or configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use ramflow_core::choice::{invert_share_to_fare, logit_share, ModeContext, SHARE_EPSILON};
use ramflow_core::io::{self, synthetic};
use ramflow_core::milp::{
    self, assemble, backend_by_name, enumeration_oracle, lp_format, SolverBackend,
};
use ramflow_core::network::{Network, RepositionArc};
use ramflow_core::scenario::{self, solve_cell, truncate_horizon, SweepSpec};
use ramflow_core::{
    AircraftConfig, Corridor, CostModel, Error, Instance, ModelOptions, SolverSettings,
};

#[derive(Parser)]
#[command(
    name = "ramflow",
    version,
    about = "Regional air mobility dispatch and pricing optimizer"
)]
struct Cli {
    /// Solver backend: highs or enumeration.
    #[arg(long, global = true, env = "RAMFLOW_SOLVER", default_value = "highs")]
    solver: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one (seats, fleet, cost scale) cell and write its solution.
    Solve(SolveArgs),
    /// Solve every cell of a seats x fleets x scales grid.
    Sweep(SweepArgs),
    /// Run the invariant audits against a corridor.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SolverArgs {
    /// Wall-clock limit per cell, seconds.
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    /// Relative MIP gap.
    #[arg(long, default_value_t = 1e-6)]
    gap: f64,
    /// Segments per entropy interpolant.
    #[arg(long, default_value_t = ramflow_core::linearize::DEFAULT_SEGMENTS)]
    segments: usize,
}

#[derive(Args)]
struct SolveArgs {
    /// Corridor TOML file, or `bundled:<name>`.
    #[arg(long)]
    config: String,
    #[arg(long)]
    seats: u32,
    #[arg(long)]
    fleet: u32,
    #[arg(long)]
    cost_scale: f64,
    #[arg(long)]
    out: PathBuf,
    /// Per-window demand overrides (od_id, window, trips).
    #[arg(long)]
    demand: Option<PathBuf>,
    /// Shrink the horizon to the desk-scale morning window.
    #[arg(long)]
    desk_scale: bool,
    /// Also write the model in LP format.
    #[arg(long)]
    export_lp: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Corridor files or `bundled:<name>`; `bundled:all` for the three shipped corridors.
    #[arg(long, required = true, num_args = 1..)]
    config: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values_t = scenario::DEFAULT_SEATS)]
    seats: Vec<u32>,
    /// Defaults to 12,18,24,30 (6,12 with --desk-scale).
    #[arg(long, value_delimiter = ',')]
    fleets: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',', default_values_t = scenario::DEFAULT_SCALES)]
    scales: Vec<f64>,
    #[arg(long)]
    desk_scale: bool,
    /// Parallel cells; 0 uses every core.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    gap: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    config: String,
    /// Number of tiny oracle instances.
    #[arg(long, default_value_t = 5)]
    oracle_instances: u64,
}

enum Failure {
    Solve(String),
    Usage(anyhow::Error),
    Io(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let usage = e.chain().any(|c| {
            matches!(
                c.downcast_ref::<Error>(),
                Some(Error::Invalid { .. } | Error::ShareDomain(_))
            )
        });
        if usage {
            Failure::Usage(e)
        } else {
            Failure::Io(e)
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

fn load(spec: &str) -> anyhow::Result<Corridor> {
    match spec.strip_prefix("bundled:") {
        Some(name) => Ok(io::bundled_corridor(name)?),
        None => io::load_corridor(Path::new(spec)).with_context(|| format!("loading {spec}")),
    }
}

fn load_many(specs: &[String]) -> anyhow::Result<Vec<Corridor>> {
    let mut out = Vec::new();
    for s in specs {
        if s == "bundled:all" {
            for (name, _) in io::BUNDLED {
                out.push(io::bundled_corridor(name)?);
            }
        } else {
            out.push(load(s)?);
        }
    }
    Ok(out)
}

fn check_settings(time_limit: f64, gap: f64) -> Result<SolverSettings, Error> {
    if time_limit.is_nan() || time_limit <= 0.0 {
        return Err(Error::Invalid {
            what: "flag",
            reason: "--time-limit must be positive".into(),
        });
    }
    if !(0.0..1.0).contains(&gap) {
        return Err(Error::Invalid {
            what: "flag",
            reason: "--gap must lie in [0, 1)".into(),
        });
    }
    Ok(SolverSettings {
        time_limit_secs: time_limit,
        mip_gap: gap,
        ..SolverSettings::default()
    })
}

fn cmd_solve(args: SolveArgs, backend: &dyn SolverBackend) -> Result<(), Failure> {
    CostModel::with_scale(args.cost_scale)?;
    AircraftConfig::new(args.seats)?;
    let settings = check_settings(args.solver.time_limit, args.solver.gap)?;
    let mut corridor = load(&args.config)?;
    if let Some(path) = &args.demand {
        let overrides = io::load_demand_csv(path, &corridor)?;
        io::apply_overrides(&mut corridor, &overrides);
        corridor.validate()?;
    }
    if args.desk_scale {
        corridor = truncate_horizon(&corridor, scenario::DESK_WINDOWS);
    }
    let options = ModelOptions {
        num_segments: args.solver.segments,
        ..ModelOptions::default()
    };
    let corridor = Arc::new(corridor);
    let network = Arc::new(Network::build(&corridor)?);
    if let Some(path) = &args.export_lp {
        let cost_model = CostModel {
            cost_scale: args.cost_scale,
            ..corridor.costs
        };
        let inst = Instance::new(
            corridor.clone(),
            network.clone(),
            AircraftConfig::new(args.seats)?,
            cost_model,
            args.fleet,
            options,
        )?;
        lp_format::write_lp(&assemble(inst)?.program, path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let (inst, sol, metrics) = solve_cell(
        corridor,
        network,
        args.seats,
        args.fleet,
        args.cost_scale,
        options,
        backend,
        &settings,
    )?;
    io::emit_solution(&inst, &sol, &metrics, &args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "{} seats={} K={} scale={}: {:?}, profit {:.2} USD/day, {} flights, {:.1} passengers",
        inst.corridor.name,
        args.seats,
        args.fleet,
        args.cost_scale,
        sol.status,
        metrics.profit,
        metrics.flights,
        metrics.throughput
    );
    if !sol.has_solution() {
        return Err(Failure::Solve(format!("no solution ({:?})", sol.status)));
    }
    if !sol.audit.passed() {
        return Err(Failure::Solve(format!(
            "audit failed: {}",
            sol.audit.violations.join("; ")
        )));
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs, backend: &dyn SolverBackend) -> Result<(), Failure> {
    if matches!(&args.fleets, Some(f) if f.is_empty())
        || args.seats.is_empty()
        || args.scales.is_empty()
    {
        return Err(Failure::Usage(anyhow::anyhow!(
            "sweep axes must not be empty"
        )));
    }
    let corridors = load_many(&args.config)?;
    let mut spec = if args.desk_scale {
        SweepSpec::desk_scale(corridors)
    } else {
        SweepSpec::new(corridors)
    };
    spec.seat_options = args.seats;
    if let Some(f) = args.fleets {
        spec.fleet_sizes = f;
    }
    spec.cost_scales = args.scales;
    spec.jobs = args.jobs;
    spec.solver = check_settings(
        args.time_limit.unwrap_or(spec.solver.time_limit_secs),
        args.gap.unwrap_or(spec.solver.mip_gap),
    )?;
    let result = scenario::run_sweep(&spec, backend)?;
    let files = io::emit_results(&result, &args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    let failed: Vec<_> = result
        .cells
        .iter()
        .filter(|c| c.error.is_some() || c.metrics.is_none() || !c.audit_violations().is_empty())
        .collect();
    println!(
        "{} cells, {} failed, {} monotonicity warnings; wrote {} files to {}",
        result.cells.len(),
        failed.len(),
        result.monotonicity.len(),
        files.len(),
        args.out.display()
    );
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Solve(format!("{} cells failed", failed.len())))
    }
}

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, ok: bool, name: &str, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn arc_scan(net: &Network) -> (bool, String) {
    let mut expected = 0usize;
    for li in &net.legs {
        for lj in &net.legs {
            if li.arr_window + net.ferry.get(li.destination, lj.origin) <= lj.dep_window {
                expected += 1;
            }
        }
    }
    let valid = |a: &RepositionArc| {
        let (li, lj) = (&net.legs[a.from_leg], &net.legs[a.to_leg]);
        li.arr_window + net.ferry.get(li.destination, lj.origin) <= lj.dep_window
    };
    let ok = expected == net.arcs.len() && net.arcs.iter().all(valid);
    (
        ok,
        format!(
            "{} arcs, {expected} expected from exhaustive scan",
            net.arcs.len()
        ),
    )
}

fn cmd_verify(args: VerifyArgs, backend: &dyn SolverBackend) -> Result<(), Failure> {
    let mut report = Report { failures: 0 };
    let corridor = match load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            if e.chain()
                .any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Invalid { .. })))
            {
                report.line(false, "corridor", format!("{e:#}"));
                return Err(Failure::Solve("corridor failed validation".into()));
            }
            return Err(e.into());
        }
    };
    report.line(true, "corridor", format!("`{}` validated", corridor.name));

    let net = Network::build(&corridor)?;
    let horizon = corridor.time_grid.num_windows;
    let in_horizon = net
        .legs
        .iter()
        .all(|l| l.dep_window >= 1 && l.arr_window <= horizon);
    report.line(
        in_horizon,
        "legs",
        format!("{} legs within [1, {horizon}]", net.legs.len()),
    );
    let (ok, detail) = arc_scan(&net);
    report.line(ok, "arcs", detail);

    let mut worst: f64 = 0.0;
    for od in &corridor.od_pairs {
        let ctx = ModeContext::for_od(od, &corridor.service);
        for k in 0..99 {
            let w = SHARE_EPSILON + (1.0 - 2.0 * SHARE_EPSILON) * f64::from(k) / 98.0;
            let fare = invert_share_to_fare(w, &ctx)?;
            worst = worst.max((logit_share(ctx.ram_utility(fare), ctx.v_drive) - w).abs());
        }
    }
    report.line(
        worst <= 1e-9,
        "inversion",
        format!("max round-trip error {worst:.3e}"),
    );

    let options = ModelOptions::default();
    for seed in 0..args.oracle_instances {
        let mut tiny = synthetic::tiny_corridor(seed);
        tiny.service = corridor.service;
        tiny.costs = corridor.costs;
        let tiny = Arc::new(tiny);
        let tnet = Arc::new(Network::build(&tiny)?);
        for fleet in [1, 2] {
            let inst = Instance::new(
                tiny.clone(),
                tnet.clone(),
                AircraftConfig::new(4)?,
                CostModel {
                    cost_scale: 0.6,
                    ..tiny.costs
                },
                fleet,
                options,
            )?;
            let oracle = enumeration_oracle(&inst)?;
            let bound = inst.pwl_objective_bound();
            let model = assemble(inst)?;
            let sol = milp::solve(&model, backend, &SolverSettings::default())?;
            let exact = oracle.objective.unwrap_or(0.0);
            let diff = (sol.model_objective - exact).abs();
            let ok = diff <= bound + sol.absolute_gap + 1e-6 && sol.audit.passed();
            report.line(
                ok,
                &format!("oracle tiny-{seed} K={fleet}"),
                format!(
                    "{} {:.4} vs oracle {exact:.4}, bound {bound:.4}",
                    backend.name(),
                    sol.model_objective
                ),
            );
        }
    }
    println!("{} failures", report.failures);
    if report.failures == 0 {
        Ok(())
    } else {
        Err(Failure::Solve(format!("{} checks failed", report.failures)))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let backend = match backend_by_name(&cli.solver) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(a, backend.as_ref()),
        Command::Sweep(a) => cmd_sweep(a, backend.as_ref()),
        Command::Verify(a) => cmd_verify(a, backend.as_ref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Solve(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
