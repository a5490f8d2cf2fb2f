//! Result files. Floats are written in shortest round-trip form; row order is
//! the sweep's canonical order, so identical sweeps give identical bytes.
//!
//! | file | columns |
//! |---|---|
//! | `results.csv` | [`RESULT_COLUMNS`] |
//! | `results.json` | full [`SweepResult`] including per-cell solutions |
//! | `plot_cost_per_mile.csv` | corridor, seats, fleet, scale, cost_per_mile_usd |
//! | `plot_profit.csv` | corridor, seats, fleet, scale, profit_usd |
//! | `plot_throughput.csv` | corridor, seats, fleet, scale, throughput_pax |
//! | `plot_fare_per_mile.csv` | corridor, seats, fleet, scale, p10, p25, p50, p75, p90, mean (USD/mile) |
//! | `plot_rasm.csv` | corridor, seats, fleet, scale, rasm_usd |

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{FareSummary, MetricBundle};
use crate::milp::{DispatchSolution, Instance};
use crate::scenario::{CellKey, CellResult, SweepResult};

pub const RESULT_COLUMNS: [&str; 27] = [
    "corridor",
    "seats",
    "fleet",
    "scale",
    "status",
    "error",
    "profit_usd",
    "revenue_usd",
    "cost_usd",
    "throughput_pax",
    "rasm_usd",
    "cost_per_mile_usd",
    "load_factor",
    "flights",
    "reposition_flights",
    "revenue_miles",
    "reposition_miles",
    "fare_per_mile_p10",
    "fare_per_mile_p25",
    "fare_per_mile_p50",
    "fare_per_mile_p75",
    "fare_per_mile_p90",
    "fare_per_mile_mean",
    "empty",
    "model_objective_usd",
    "absolute_gap_usd",
    "audit_violations",
];

fn key_fields(k: &CellKey) -> Vec<String> {
    vec![
        k.corridor.clone(),
        k.seats.to_string(),
        k.fleet.to_string(),
        k.cost_scale.to_string(),
    ]
}

fn status_name(c: &CellResult) -> String {
    match c.status {
        Some(s) => serde_json::to_value(s)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default(),
        None => "error".into(),
    }
}

fn result_row(c: &CellResult) -> Vec<String> {
    let mut row = key_fields(&c.key);
    row.push(status_name(c));
    row.push(c.error.clone().unwrap_or_default());
    let m = c.metrics.unwrap_or_default();
    let f = |v: f64| {
        if c.metrics.is_some() {
            v.to_string()
        } else {
            String::new()
        }
    };
    row.extend(
        [
            m.profit,
            m.revenue,
            m.cost,
            m.throughput,
            m.rasm,
            m.cost_per_mile,
            m.load_factor,
        ]
        .map(f),
    );
    row.push(if c.metrics.is_some() {
        m.flights.to_string()
    } else {
        String::new()
    });
    row.push(if c.metrics.is_some() {
        m.reposition_flights.to_string()
    } else {
        String::new()
    });
    row.extend([m.revenue_miles, m.reposition_miles].map(f));
    row.extend(m.fare_per_mile.quantiles.map(f));
    row.push(f(m.fare_per_mile.mean));
    row.push(if c.metrics.is_some() {
        m.empty.to_string()
    } else {
        String::new()
    });
    let sol = c.solution.as_ref().filter(|s| s.has_solution());
    row.push(sol.map_or(String::new(), |s| s.model_objective.to_string()));
    row.push(sol.map_or(String::new(), |s| s.absolute_gap.to_string()));
    row.push(c.audit_violations().len().to_string());
    row
}

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Write every result file into `out_dir` (created if missing) and return their paths.
pub fn emit_results(result: &SweepResult, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let path = out_dir.join("results.csv");
    write_csv(&path, &RESULT_COLUMNS, result.cells.iter().map(result_row))?;
    written.push(path);
    let path = out_dir.join("results.json");
    write_json(&path, result)?;
    written.push(path);

    type Extract = fn(&MetricBundle) -> Vec<f64>;
    let plots: [(&str, &[&str], Extract); 5] = [
        ("plot_cost_per_mile.csv", &["cost_per_mile_usd"], |m| {
            vec![m.cost_per_mile]
        }),
        ("plot_profit.csv", &["profit_usd"], |m| vec![m.profit]),
        ("plot_throughput.csv", &["throughput_pax"], |m| {
            vec![m.throughput]
        }),
        (
            "plot_fare_per_mile.csv",
            &["p10", "p25", "p50", "p75", "p90", "mean"],
            |m| {
                let FareSummary { quantiles, mean } = m.fare_per_mile;
                quantiles.iter().copied().chain([mean]).collect()
            },
        ),
        ("plot_rasm.csv", &["rasm_usd"], |m| vec![m.rasm]),
    ];
    for (name, cols, extract) in plots {
        let header: Vec<&str> = ["corridor", "seats", "fleet", "scale"]
            .into_iter()
            .chain(cols.iter().copied())
            .collect();
        let rows = result.cells.iter().filter_map(|c| {
            let m = c.metrics.as_ref()?;
            let mut row = key_fields(&c.key);
            row.extend(extract(m).iter().map(|v| v.to_string()));
            Some(row)
        });
        let path = out_dir.join(name);
        write_csv(&path, &header, rows)?;
        written.push(path);
    }
    Ok(written)
}

/// Metrics rows of a `results.csv`, skipping cells without a solution.
pub fn read_results_csv(path: &Path) -> Result<Vec<(CellKey, MetricBundle)>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let bad = |what: &str| Error::Parse {
            path: path.to_path_buf(),
            message: format!("row {}: bad {what}", n + 1),
        };
        let get = |i: usize| rec.get(i).unwrap_or("");
        if get(6).is_empty() {
            continue;
        }
        let num = |i: usize| get(i).parse::<f64>().map_err(|_| bad(RESULT_COLUMNS[i]));
        let int = |i: usize| get(i).parse::<u32>().map_err(|_| bad(RESULT_COLUMNS[i]));
        let key = CellKey {
            corridor: get(0).to_string(),
            seats: int(1)?,
            fleet: int(2)?,
            cost_scale: num(3)?,
        };
        let m = MetricBundle {
            profit: num(6)?,
            revenue: num(7)?,
            cost: num(8)?,
            throughput: num(9)?,
            rasm: num(10)?,
            cost_per_mile: num(11)?,
            load_factor: num(12)?,
            flights: int(13)?,
            reposition_flights: int(14)?,
            revenue_miles: num(15)?,
            reposition_miles: num(16)?,
            fare_per_mile: FareSummary {
                quantiles: [num(17)?, num(18)?, num(19)?, num(20)?, num(21)?],
                mean: num(22)?,
            },
            empty: get(23).parse().map_err(|_| bad("empty"))?,
        };
        out.push((key, m));
    }
    Ok(out)
}

#[derive(Serialize)]
struct SolveReport<'a> {
    corridor: &'a str,
    seats: u32,
    fleet: u32,
    cost_scale: f64,
    metrics: &'a MetricBundle,
    solution: &'a DispatchSolution,
}

/// Files for a single solved cell: `solution.json`, `metrics.csv`, `legs.csv`.
pub fn emit_solution(
    inst: &Instance,
    sol: &DispatchSolution,
    metrics: &MetricBundle,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let corridor = &inst.corridor;
    let mut written = Vec::new();
    let path = out_dir.join("solution.json");
    write_json(
        &path,
        &SolveReport {
            corridor: &corridor.name,
            seats: inst.seats(),
            fleet: inst.fleet,
            cost_scale: inst.cost_model.cost_scale,
            metrics,
            solution: sol,
        },
    )?;
    written.push(path);

    let cell = CellResult {
        key: CellKey {
            corridor: corridor.name.clone(),
            seats: inst.seats(),
            fleet: inst.fleet,
            cost_scale: inst.cost_model.cost_scale,
        },
        status: Some(sol.status),
        error: None,
        metrics: sol.has_solution().then_some(*metrics),
        solution: Some(sol.clone()),
    };
    let path = out_dir.join("metrics.csv");
    write_csv(&path, &RESULT_COLUMNS, std::iter::once(result_row(&cell)))?;
    written.push(path);

    let grid = &corridor.time_grid;
    let rows = inst
        .network
        .legs
        .iter()
        .enumerate()
        .filter(|(k, _)| sol.dispatch[*k] > 0)
        .map(|(k, leg)| {
            let clock = |t: u32| {
                let m = grid.window_start_minutes(t) % (24 * 60);
                format!("{:02}:{:02}", m / 60, m % 60)
            };
            vec![
                k.to_string(),
                corridor.vertiports[leg.origin].id.clone(),
                corridor.vertiports[leg.destination].id.clone(),
                clock(leg.dep_window),
                clock(leg.arr_window),
                sol.dispatch[k].to_string(),
                leg.demand.to_string(),
                sol.shares[k].to_string(),
                sol.passengers(inst, k).to_string(),
                sol.fares[k].map_or(String::new(), |f| f.to_string()),
            ]
        });
    let path = out_dir.join("legs.csv");
    write_csv(
        &path,
        &[
            "leg",
            "origin",
            "destination",
            "departs",
            "arrives",
            "aircraft",
            "demand_trips",
            "share",
            "passengers",
            "fare_usd",
        ],
        rows,
    )?;
    written.push(path);
    Ok(written)
}
