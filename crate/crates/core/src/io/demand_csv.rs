//! Per-window demand overrides from CSV.
//!
//! Header `od_id,window,trips`; `od_id` is `<origin id>-<destination id>`,
//! `window` is 1-based. An OD pair with at least one row gets its profile
//! replaced: daily trips become the row total, unlisted windows get zero.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::domain::{Corridor, DemandProfile};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct Row {
    od_id: String,
    window: i64,
    trips: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DemandOverrides {
    /// OD index to trips per window (index 0 is window 1).
    pub by_od: BTreeMap<usize, Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reconciliation {
    pub od_id: String,
    pub previous_total: f64,
    pub new_total: f64,
}

pub fn od_id(corridor: &Corridor, k: usize) -> String {
    let od = &corridor.od_pairs[k];
    format!(
        "{}-{}",
        corridor.vertiports[od.origin].id, corridor.vertiports[od.destination].id
    )
}

pub fn parse_demand_csv<R: std::io::Read>(
    reader: R,
    corridor: &Corridor,
    origin: &Path,
) -> Result<DemandOverrides> {
    let ids: Vec<String> = (0..corridor.od_pairs.len())
        .map(|k| od_id(corridor, k))
        .collect();
    let horizon = corridor.time_grid.num_windows;
    let fail = |line: u64, message: String| Error::Parse {
        path: origin.to_path_buf(),
        message: format!("line {line}: {message}"),
    };
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = DemandOverrides::default();
    let headers = rdr.headers()?.clone();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let row: Row = rec
            .deserialize(Some(&headers))
            .map_err(|e| fail(line, e.to_string()))?;
        let k = ids
            .iter()
            .position(|id| *id == row.od_id)
            .ok_or_else(|| fail(line, format!("unknown od_id `{}`", row.od_id)))?;
        if row.window < 1 || row.window > i64::from(horizon) {
            return Err(fail(
                line,
                format!("window {} outside [1, {horizon}]", row.window),
            ));
        }
        if !(row.trips >= 0.0) || !row.trips.is_finite() {
            return Err(fail(
                line,
                format!("trips must be nonnegative, got {}", row.trips),
            ));
        }
        let slots = out
            .by_od
            .entry(k)
            .or_insert_with(|| vec![f64::NAN; horizon as usize]);
        let slot = &mut slots[row.window as usize - 1];
        if !slot.is_nan() {
            return Err(fail(
                line,
                format!("duplicate row for {} window {}", row.od_id, row.window),
            ));
        }
        *slot = row.trips;
    }
    for slots in out.by_od.values_mut() {
        for v in slots.iter_mut().filter(|v| v.is_nan()) {
            *v = 0.0;
        }
    }
    if out.by_od.is_empty() {
        log::warn!(
            "{}: no demand rows; keeping the configured profiles",
            origin.display()
        );
    }
    Ok(out)
}

pub fn load_demand_csv(path: &Path, corridor: &Corridor) -> Result<DemandOverrides> {
    parse_demand_csv(std::fs::File::open(path)?, corridor, path)
}

/// Replace the overridden profiles in place and report old and new daily totals.
pub fn apply_overrides(
    corridor: &mut Corridor,
    overrides: &DemandOverrides,
) -> Vec<Reconciliation> {
    let mut report = Vec::new();
    for (&k, trips) in &overrides.by_od {
        let total: f64 = trips.iter().sum();
        let weights = if total > 0.0 {
            trips.iter().map(|t| t / total).collect()
        } else {
            vec![1.0 / trips.len() as f64; trips.len()]
        };
        report.push(Reconciliation {
            od_id: od_id(corridor, k),
            previous_total: corridor.demand[k].daily_trips,
            new_total: total,
        });
        corridor.demand[k] = DemandProfile {
            daily_trips: total,
            window_weights: weights,
        };
    }
    for r in &report {
        log::info!(
            "demand {}: {} -> {} trips/day",
            r.od_id,
            r.previous_total,
            r.new_total
        );
    }
    report
}
