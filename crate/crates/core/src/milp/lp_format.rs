//! CPLEX LP text export for debugging.
//!
//! Layout: objective, constraints in assembly order, bounds in column order,
//! then the `General` and `Binary` sections. Column names are the assembled
//! names (`x_leg<k>`, `s_leg<k>`, `y_<i>_<j>`, `w_leg<k>`, ...).

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::milp::program::{LinearProgram, VarKind};

fn push_terms(out: &mut String, terms: impl Iterator<Item = (f64, String)>) {
    let mut first = true;
    for (coef, name) in terms {
        if coef == 0.0 {
            continue;
        }
        match (coef < 0.0, first) {
            (true, _) => out.push_str(" -"),
            (false, false) => out.push_str(" +"),
            (false, true) => {}
        }
        let _ = write!(out, " {} {name}", coef.abs());
        first = false;
    }
    if first {
        out.push_str(" 0");
    }
}

pub fn to_lp_string(lp: &LinearProgram) -> String {
    let mut out = String::from("\\ ramflow dispatch model\nMaximize\n obj:");
    push_terms(
        &mut out,
        lp.columns.iter().map(|c| (c.objective, c.name.clone())),
    );
    out.push_str("\nSubject To\n");
    for row in &lp.rows {
        let terms = || {
            row.terms
                .iter()
                .map(|&(j, a)| (a, lp.columns[j].name.clone()))
        };
        let mut emit = |suffix: &str, op: &str, rhs: f64| {
            let _ = write!(out, " {}{suffix}:", row.name);
            push_terms(&mut out, terms());
            let _ = writeln!(out, " {op} {rhs}");
        };
        if row.lo == row.hi {
            emit("", "=", row.hi);
        } else {
            match (row.lo.is_finite(), row.hi.is_finite()) {
                (true, true) => {
                    emit("_lo", ">=", row.lo);
                    emit("_hi", "<=", row.hi);
                }
                (false, _) => emit("", "<=", row.hi),
                (true, false) => emit("", ">=", row.lo),
            }
        }
    }
    out.push_str("Bounds\n");
    for c in &lp.columns {
        let lo = if c.lo.is_finite() {
            c.lo.to_string()
        } else {
            "-inf".into()
        };
        let hi = if c.hi.is_finite() {
            c.hi.to_string()
        } else {
            "+inf".into()
        };
        let _ = writeln!(out, " {lo} <= {} <= {hi}", c.name);
    }
    for (header, kind) in [("General", VarKind::Integer), ("Binary", VarKind::Binary)] {
        let names: Vec<&str> = lp
            .columns
            .iter()
            .filter(|c| c.kind == kind)
            .map(|c| c.name.as_str())
            .collect();
        if !names.is_empty() {
            let _ = writeln!(out, "{header}\n {}", names.join(" "));
        }
    }
    out.push_str("End\n");
    out
}

pub fn write_lp(lp: &LinearProgram, path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(to_lp_string(lp).as_bytes())?;
    Ok(())
}
