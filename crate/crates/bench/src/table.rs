//! The ten-row forward-error comparison: problem generation and the text
//! report built from bench records.

use std::collections::BTreeMap;
use std::fmt::Write;

use qls_core::problems::{assemble_problem, derive_seed, orthogonal_factor, sigma_c1, sigma_c2, uniform_vector};

use crate::config::{NamedProblem, SolverKind};
use crate::error::{BenchError, Result};
use crate::suite::BenchRecord;

pub const TABLE_M: usize = 40;
pub const TABLE_N: usize = 20;
/// Orthogonal-factor kinds `(U, V)` used by default.
pub const TABLE_KINDS: (u32, u32) = (6, 5);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spectrum {
    C1 { a: f64 },
    C2 { dw: f64, up: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub spectrum: Spectrum,
    /// `c = α·rand(n)`.
    pub alpha: f64,
}

impl TableRow {
    /// Row label, e.g. `a=0.5, α=1` or `up=1e2, dw=1e-4, α=1e-4`.
    pub fn label(&self) -> String {
        match self.spectrum {
            Spectrum::C1 { a } => format!("a={a}, α={:e}", self.alpha),
            Spectrum::C2 { dw, up } => format!("up={up:e}, dw={dw:e}, α={:e}", self.alpha),
        }
    }
}

pub const TABLE_ROWS: [TableRow; 10] = [
    TableRow { spectrum: Spectrum::C1 { a: 2.0 }, alpha: 1e-10 },
    TableRow { spectrum: Spectrum::C1 { a: 0.4 }, alpha: 1e-12 },
    TableRow { spectrum: Spectrum::C1 { a: 0.7 }, alpha: 1e-1 },
    TableRow { spectrum: Spectrum::C1 { a: 1.3 }, alpha: 1e-4 },
    TableRow { spectrum: Spectrum::C2 { dw: 1e-4, up: 1e2 }, alpha: 1e-4 },
    TableRow { spectrum: Spectrum::C2 { dw: 1e-6, up: 1e-2 }, alpha: 1e-5 },
    TableRow { spectrum: Spectrum::C1 { a: 1.9 }, alpha: -1e-6 },
    TableRow { spectrum: Spectrum::C2 { dw: 1e-1, up: 1e3 }, alpha: 1e2 },
    TableRow { spectrum: Spectrum::C2 { dw: 1e-3, up: 1e4 }, alpha: -1e-2 },
    TableRow { spectrum: Spectrum::C1 { a: 0.5 }, alpha: 1.0 },
];

/// Record identifier of row `i` (0-based): `ET-01` … `ET-10`.
pub fn table_id(i: usize) -> String {
    format!("ET-{:02}", i + 1)
}

/// Problem for row `i`: row seed `s = derive(seed, i)`, `U` from `s`, `V`
/// from `derive(s, 1)`, `c = α·rand(n)` from `derive(s, 2)`.
pub fn table_problem(i: usize, seed: u64, (ku, kv): (u32, u32)) -> Result<NamedProblem> {
    let row = TABLE_ROWS
        .get(i)
        .ok_or_else(|| BenchError::MissingConfiguration(format!("no table row {i}")))?;
    let sigma = match row.spectrum {
        Spectrum::C1 { a } => sigma_c1(TABLE_N, a)?,
        Spectrum::C2 { dw, up } => sigma_c2(TABLE_N, dw, up)?,
    };
    let s = derive_seed(seed, i as u64);
    let u = orthogonal_factor(TABLE_M, ku, s);
    let v = orthogonal_factor(TABLE_N, kv, derive_seed(s, 1));
    let c: Vec<f64> = uniform_vector(TABLE_N, derive_seed(s, 2))
        .into_iter()
        .map(|t| row.alpha * t)
        .collect();
    let problem = assemble_problem(&u, &sigma, &v, &c, row.label())?;
    Ok(NamedProblem {
        id: table_id(i),
        problem,
    })
}

pub fn table_problems(seed: u64, kinds: (u32, u32)) -> Result<Vec<NamedProblem>> {
    (0..TABLE_ROWS.len()).map(|i| table_problem(i, seed, kinds)).collect()
}

const METHODS: [SolverKind; 3] = [SolverKind::Cg, SolverKind::Cglsi, SolverKind::Cglseps];

/// One row of the report, pulled out of the records.
#[derive(Debug, Clone, PartialEq)]
pub struct TableEntry {
    pub label: String,
    pub kappa: f64,
    /// `κ(A)²·η̄` at the CGLSI solution.
    pub kappa2_eta: f64,
    /// `(E, Ê)` for CG, CGLSI and CGLSε.
    pub errors: [(f64, f64); 3],
}

/// Collects the ten rows from records whose ids are `ET-01` … `ET-10` and
/// that include CG, CGLSI and CGLSEPS.
pub fn table_entries(records: &[BenchRecord]) -> Result<Vec<TableEntry>> {
    let mut by_key: BTreeMap<(&str, SolverKind), &BenchRecord> = BTreeMap::new();
    for r in records {
        by_key.insert((r.problem_id.as_str(), r.solver), r);
    }
    let mut out = Vec::with_capacity(TABLE_ROWS.len());
    for (i, row) in TABLE_ROWS.iter().enumerate() {
        let id = table_id(i);
        let mut errors = [(0.0, 0.0); 3];
        for (slot, solver) in errors.iter_mut().zip(METHODS) {
            let rec = by_key
                .get(&(id.as_str(), solver))
                .ok_or_else(|| BenchError::MissingConfiguration(format!("{id} ({}) has no {solver} record", row.label())))?;
            *slot = (rec.rel_error, rec.estimate);
        }
        let lsi = by_key[&(id.as_str(), SolverKind::Cglsi)];
        out.push(TableEntry {
            label: row.label(),
            kappa: lsi.kappa,
            kappa2_eta: lsi.kappa * lsi.kappa * lsi.eta_bar,
            errors,
        });
    }
    Ok(out)
}

/// Aligned text table: row label, κ(A), κ²η̄, then `E` and `Ê` for CG,
/// CGLSI and CGLSε.
pub fn report_table(records: &[BenchRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(BenchError::MissingConfiguration("no records".into()));
    }
    let entries = table_entries(records)?;
    let header = [
        "problem", "κ(A)", "κ²η̄", "E_CG", "Ê_CG", "E_CGLSI", "Ê_CGLSI", "E_CGLSε", "Ê_CGLSε",
    ];
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            let mut cells = vec![e.label.clone(), sci(e.kappa), sci(e.kappa2_eta)];
            for (err, est) in e.errors {
                cells.push(sci(err));
                cells.push(sci(est));
            }
            cells
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut text = String::new();
    let line = |cells: &[String], text: &mut String| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(j, (c, w))| {
                let pad = w - c.chars().count();
                if j == 0 {
                    format!("{c}{}", " ".repeat(pad))
                } else {
                    format!("{}{c}", " ".repeat(pad))
                }
            })
            .collect();
        let _ = writeln!(text, "{}", padded.join("  ").trim_end());
    };
    line(&header.map(String::from), &mut text);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(&rule, &mut text);
    for row in &rows {
        line(row, &mut text);
    }
    Ok(text)
}

/// One significant digit: `2e-10`, `1e0`.
fn sci(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.0e}")
    } else {
        v.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_and_ids() {
        assert_eq!(TABLE_ROWS[9].label(), "a=0.5, α=1e0");
        assert_eq!(TABLE_ROWS[4].label(), "up=1e2, dw=1e-4, α=1e-4");
        assert_eq!(table_id(0), "ET-01");
        assert_eq!(table_id(9), "ET-10");
    }

    #[test]
    fn problems_are_deterministic() {
        let a = table_problem(3, 7, TABLE_KINDS).unwrap();
        let b = table_problem(3, 7, TABLE_KINDS).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.problem.m(), TABLE_M);
        assert_eq!(a.problem.n(), TABLE_N);
        assert!(table_problem(10, 7, TABLE_KINDS).is_err());
    }

    #[test]
    fn sci_rounds_to_one_digit() {
        assert_eq!(sci(2.3e-10), "2e-10");
        assert_eq!(sci(1.0), "1e0");
        assert_eq!(sci(f64::INFINITY), "inf");
    }

    #[test]
    fn empty_records_are_missing_configuration() {
        assert!(matches!(report_table(&[]), Err(BenchError::MissingConfiguration(_))));
    }
}
