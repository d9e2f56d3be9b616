//! Containment check on the transcribed LiH tables (energies in Hartree).

use std::path::Path;

use robint::verify::SuiteReport;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::io::SCHEMA_VERSION;

/// Both tables, 23 bond distances each, as printed.
pub const BUILTIN_FIXTURE: &str = include_str!("../fixtures/lih_tables.csv");

#[derive(Deserialize, Serialize, Debug, Clone, PartialEq)]
pub struct TableRow {
    pub table: String,
    pub bond_distance: f64,
    pub e0: f64,
    pub vqe: f64,
    pub fidelity: f64,
    pub gram_eig_lower: f64,
    pub gram_eig_upper: f64,
    pub gram_exp_lower: f64,
    pub sdp_lower: f64,
    pub sdp_upper: f64,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct RowCheck {
    pub table: String,
    pub bond_distance: f64,
    pub eigenvalue_contains: bool,
    pub expectation_below: bool,
    pub sdp_contains: bool,
    pub ordered: bool,
    pub passed: bool,
    /// `|(gram_lb + gram_ub) - 2 VQE|`, informational.
    pub midpoint_residual: f64,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct TableReport {
    pub schema_version: u32,
    pub rows: Vec<RowCheck>,
    pub failures: usize,
}

pub fn parse_rows(text: &str) -> CliResult<Vec<TableRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    reader
        .deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| CliError::Parse(format!("fixture row {}: {e}", i + 1))))
        .collect()
}

pub fn check_row(row: &TableRow) -> RowCheck {
    let e0 = row.e0;
    let eigenvalue_contains = row.gram_eig_lower <= e0 && e0 <= row.gram_eig_upper;
    let expectation_below = row.gram_exp_lower <= e0;
    let sdp_contains = row.sdp_lower <= e0 && e0 <= row.sdp_upper;
    let ordered = row.gram_eig_lower <= row.gram_eig_upper && row.sdp_lower <= row.sdp_upper;
    RowCheck {
        table: row.table.clone(),
        bond_distance: row.bond_distance,
        eigenvalue_contains,
        expectation_below,
        sdp_contains,
        ordered,
        passed: eigenvalue_contains && expectation_below && sdp_contains && ordered,
        midpoint_residual: (row.gram_eig_lower + row.gram_eig_upper - 2.0 * row.vqe).abs(),
    }
}

pub fn check_tables(text: &str) -> CliResult<TableReport> {
    let rows: Vec<RowCheck> = parse_rows(text)?.iter().map(check_row).collect();
    let failures = rows.iter().filter(|r| !r.passed).count();
    Ok(TableReport {
        schema_version: SCHEMA_VERSION,
        rows,
        failures,
    })
}

/// The builtin tables as a verification suite: every row checked, 23 per table.
pub fn table_suite() -> CliResult<SuiteReport> {
    let report = check_tables(BUILTIN_FIXTURE)?;
    let count = |t: &str| report.rows.iter().filter(|r| r.table == t).count();
    let (first, second) = (count("I"), count("II"));
    Ok(SuiteReport {
        name: "tables",
        cases: report.rows.len(),
        checks: report.rows.len() * 4,
        violations: report.failures,
        worst: 0.0,
        passed: report.failures == 0 && first == 23 && second == 23,
        detail: format!(
            "{} failures over {} rows (table I: {first}, table II: {second})",
            report.failures,
            report.rows.len()
        ),
    })
}

pub fn load(path: Option<&Path>) -> CliResult<String> {
    match path {
        None => Ok(BUILTIN_FIXTURE.to_string()),
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Other(anyhow::anyhow!("reading {}: {e}", p.display()))),
    }
}

/// One line per row plus a summary.
pub fn render(report: &TableReport) -> String {
    let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
    let mut out = String::from("table  R(A)   eigenvalue  expectation  sdp   residual\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{:<6} {:<6.2} {:<11} {:<12} {:<5} {:.5}\n",
            r.table,
            r.bond_distance,
            mark(r.eigenvalue_contains && r.ordered),
            mark(r.expectation_below),
            mark(r.sdp_contains),
            r.midpoint_residual
        ));
    }
    out.push_str(&format!(
        "{} rows, {} failures\n",
        report.rows.len(),
        report.failures
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_fixture_has_both_tables() {
        let rows = parse_rows(BUILTIN_FIXTURE).unwrap();
        assert_eq!(rows.iter().filter(|r| r.table == "I").count(), 23);
        assert_eq!(rows.iter().filter(|r| r.table == "II").count(), 23);
    }

    #[test]
    fn first_rows_as_printed() {
        let rows = parse_rows(BUILTIN_FIXTURE).unwrap();
        let first = &rows[0];
        assert_eq!(
            (first.e0, first.gram_eig_lower, first.gram_eig_upper),
            (-7.21863, -7.25193, -6.52475)
        );
        assert_eq!((first.sdp_lower, first.sdp_upper), (-7.34604, -5.78115));
        let second = rows.iter().find(|r| r.table == "II").unwrap();
        assert_eq!(
            (second.gram_eig_lower, second.gram_eig_upper),
            (-7.71356, -5.61455)
        );
        assert!(check_row(first).passed && check_row(second).passed);
    }

    #[test]
    fn malformed_row_names_its_number() {
        let text = "table,bond_distance,e0,vqe,fidelity,gram_eig_lower,gram_eig_upper,gram_exp_lower,sdp_lower,sdp_upper\n\
                    I,0.5,-7.2,-6.9,0.6,-7.3,-6.5,-7.3,-7.3,-5.8\n\
                    I,0.75,oops,-7.3,0.6,-7.7,-6.8,-7.8,-7.9,-5.9\n";
        match check_tables(text) {
            Err(CliError::Parse(msg)) => assert!(msg.contains("row 2"), "{msg}"),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn violated_row_fails() {
        let mut row = parse_rows(BUILTIN_FIXTURE).unwrap().remove(0);
        row.gram_eig_upper = -7.3;
        let check = check_row(&row);
        assert!(!check.passed && !check.eigenvalue_contains);
    }
}
