//! Prices a scenario file and writes CSV to stdout.
//!
//! cargo run --example scenario_pricing -- crates/core/examples/data/table1.json

use std::path::PathBuf;

use factoring::report::{price_scenario, write_rows, ModelSelection, OutputFormat};
use factoring::scenario::load_scenario;

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/table1.json")));
    let scenario = match load_scenario(&path) {
        Ok(s) => s,
        Err(errors) => {
            eprintln!("{errors}");
            std::process::exit(2);
        }
    };
    let rows = price_scenario(&scenario, ModelSelection::Both, None);
    write_rows(std::io::stdout().lock(), &rows, OutputFormat::Csv).expect("stdout");
}
