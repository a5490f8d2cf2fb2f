//! Solver-neutral sparse mixed-integer program.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarKind {
    Continuous,
    Integer,
    Binary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub kind: VarKind,
    pub objective: f64,
}

/// `lo <= sum(coef * col) <= hi`; at most one side may be infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub terms: Vec<(usize, f64)>,
}

/// A maximization problem.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearProgram {
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    pub fn add_column(
        &mut self,
        name: String,
        lo: f64,
        hi: f64,
        kind: VarKind,
        objective: f64,
    ) -> usize {
        self.columns.push(Column {
            name,
            lo,
            hi,
            kind,
            objective,
        });
        self.columns.len() - 1
    }

    pub fn add_row(&mut self, name: String, lo: f64, hi: f64, terms: Vec<(usize, f64)>) -> usize {
        debug_assert!(lo.is_finite() || hi.is_finite());
        self.rows.push(Row {
            name,
            lo,
            hi,
            terms,
        });
        self.rows.len() - 1
    }

    pub fn add_le(&mut self, name: String, terms: Vec<(usize, f64)>, rhs: f64) -> usize {
        self.add_row(name, f64::NEG_INFINITY, rhs, terms)
    }

    pub fn add_ge(&mut self, name: String, terms: Vec<(usize, f64)>, rhs: f64) -> usize {
        self.add_row(name, rhs, f64::INFINITY, terms)
    }

    pub fn add_eq(&mut self, name: String, terms: Vec<(usize, f64)>, rhs: f64) -> usize {
        self.add_row(name, rhs, rhs, terms)
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.columns
            .iter()
            .zip(values)
            .map(|(c, v)| c.objective * v)
            .sum()
    }

    pub fn num_integer(&self) -> usize {
        self.columns
            .iter()
            .filter(|c| c.kind != VarKind::Continuous)
            .count()
    }

    /// Largest bound or row violation of `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (c, v) in self.columns.iter().zip(values) {
            worst = worst.max(c.lo - v).max(v - c.hi);
        }
        for r in &self.rows {
            let lhs: f64 = r.terms.iter().map(|&(j, a)| a * values[j]).sum();
            worst = worst.max(r.lo - lhs).max(lhs - r.hi);
        }
        worst
    }
}
