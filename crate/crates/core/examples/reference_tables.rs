//! Prints both reference grids, with simulated z-scores when `--mc` is given.
//!
//! cargo run --release --example reference_tables -- --mc

use factoring::tables::{self, TABLE_1, TABLE_2};
use factoring::McConfig;

fn main() -> factoring::Result<()> {
    let with_mc = std::env::args().any(|a| a == "--mc");
    let cfg = McConfig::default();
    for table in [TABLE_1, TABLE_2] {
        let rows = tables::compute(&table)?;
        let checks = if with_mc {
            Some(tables::mc_check(&table, &rows, &cfg)?)
        } else {
            None
        };
        println!(
            "{}",
            tables::render(&table, &rows, checks.as_deref(), cfg.confidence_sigmas, false)
        );
    }
    Ok(())
}
