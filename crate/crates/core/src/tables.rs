//! The two reference price grids: `C = 100`, `r_A = r_B = 0.2`,
//! `lambda_B = 0.1`, `theta = 1..5`, with a standard column and revocatory
//! columns at `lambda_A = 0.1` and `0.2`.
//!
//! Grid 1 uses `delta = 0.5, T = 1` (printed to 3 decimals), grid 2 uses
//! `delta = 1, T = 0.5` (printed to 5 decimals).

use std::fmt::Write;

use crate::dependence::{GumbelDependence, MarginalIntensity};
use crate::error::Result;
use crate::montecarlo::{mc_price, mc_standard_price, McConfig};
use crate::pricing::{revocatory_price_closed, standard_price_exponential, DealTerms};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceTable {
    pub number: u8,
    pub delta: f64,
    pub maturity: f64,
    pub decimals: usize,
}

pub const FACE_VALUE: f64 = 100.0;
pub const RECOVERY: f64 = 0.2;
pub const LAMBDA_B: f64 = 0.1;
pub const LAMBDA_A_COLUMNS: [f64; 2] = [0.1, 0.2];
pub const THETAS: [f64; 5] = [1.0, 2.0, 3.0, 4.0, 5.0];

pub const TABLE_1: ReferenceTable = ReferenceTable {
    number: 1,
    delta: 0.5,
    maturity: 1.0,
    decimals: 3,
};

pub const TABLE_2: ReferenceTable = ReferenceTable {
    number: 2,
    delta: 1.0,
    maturity: 0.5,
    decimals: 5,
};

pub fn reference_table(number: u8) -> Option<ReferenceTable> {
    match number {
        1 => Some(TABLE_1),
        2 => Some(TABLE_2),
        _ => None,
    }
}

impl ReferenceTable {
    pub fn terms(&self) -> DealTerms {
        DealTerms::new(FACE_VALUE, self.maturity, self.delta, RECOVERY, RECOVERY).expect("reference terms are valid")
    }
}

/// One row of a grid: `[standard, revocatory(lambda_A = 0.1), revocatory(lambda_A = 0.2)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub theta: f64,
    pub kendall_tau: f64,
    pub prices: [f64; 3],
}

/// `|MC - closed| / SE` for each of the three cells of a row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McCheckRow {
    pub mc_prices: [f64; 3],
    pub std_errors: [f64; 3],
    pub z_scores: [f64; 3],
}

pub fn compute(table: &ReferenceTable) -> Result<Vec<TableRow>> {
    let terms = table.terms();
    let lam_b = MarginalIntensity::new(LAMBDA_B)?;
    let standard = standard_price_exponential(&lam_b, &terms)?.price;
    THETAS
        .iter()
        .map(|&theta| {
            let dep = GumbelDependence::new(theta)?;
            let mut prices = [standard; 3];
            for (slot, &la) in prices[1..].iter_mut().zip(&LAMBDA_A_COLUMNS) {
                *slot = revocatory_price_closed(&MarginalIntensity::new(la)?, &lam_b, &dep, &terms)?.price;
            }
            Ok(TableRow {
                theta,
                kendall_tau: dep.kendall_tau(),
                prices,
            })
        })
        .collect()
}

/// Re-prices every cell by simulation and compares with `rows`.
pub fn mc_check(table: &ReferenceTable, rows: &[TableRow], cfg: &McConfig) -> Result<Vec<McCheckRow>> {
    let terms = table.terms();
    let lam_b = MarginalIntensity::new(LAMBDA_B)?;
    let standard = mc_standard_price(&lam_b, &terms, cfg)?;
    rows.iter()
        .map(|row| {
            let dep = GumbelDependence::new(row.theta)?;
            let mut mc_prices = [standard.result.price; 3];
            let mut std_errors = [standard.estimate.std_error; 3];
            for (i, &la) in LAMBDA_A_COLUMNS.iter().enumerate() {
                let mc = mc_price(&MarginalIntensity::new(la)?, &lam_b, &dep, &terms, cfg)?;
                mc_prices[i + 1] = mc.result.price;
                std_errors[i + 1] = mc.estimate.std_error;
            }
            let mut z_scores = [0.0; 3];
            for i in 0..3 {
                z_scores[i] = (mc_prices[i] - row.prices[i]).abs() / std_errors[i];
            }
            Ok(McCheckRow {
                mc_prices,
                std_errors,
                z_scores,
            })
        })
        .collect()
}

/// Renders the grid as text. With `checks`, each row gets the three z-scores,
/// coloured green/red against `sigmas` when `color` is set.
pub fn render(
    table: &ReferenceTable,
    rows: &[TableRow],
    checks: Option<&[McCheckRow]>,
    sigmas: f64,
    color: bool,
) -> String {
    let d = table.decimals;
    let w = d + 5;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Table {}: delta = {}, T = {}, C = {}, r_A = r_B = {}",
        table.number, table.delta, table.maturity, FACE_VALUE, RECOVERY
    );
    let _ = write!(
        out,
        "{:>5} | {:>5} | {:>w$} | {:>w$} | {:>w$}",
        "theta", "tau_K", "std", "la=0.1", "la=0.2"
    );
    if checks.is_some() {
        let _ = write!(out, " | {:>6} {:>6} {:>6}", "z_std", "z_0.1", "z_0.2");
    }
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        let _ = write!(
            out,
            "{:>5} | {:>5.2} | {:>w$.d$} | {:>w$.d$} | {:>w$.d$}",
            row.theta, row.kendall_tau, row.prices[0], row.prices[1], row.prices[2]
        );
        if let Some(checks) = checks {
            out.push_str(" |");
            for z in checks[i].z_scores {
                let cell = format!("{z:>6.2}");
                match (color, z < sigmas) {
                    (false, _) => {
                        let _ = write!(out, " {cell}");
                    }
                    (true, true) => {
                        let _ = write!(out, " \x1b[32m{cell}\x1b[0m");
                    }
                    (true, false) => {
                        let _ = write!(out, " \x1b[31m{cell}\x1b[0m");
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}
