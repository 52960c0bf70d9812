//! A coarse (p, q) sweep of the worked example written as CSV to stdout, in
//! the same layout the `example` subcommand writes per figure.

use skewchain::example::{sweep, Grid, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SweepSpec::new(Grid::point(1.0), Grid::new(0.0, 1.0, 5)?, Grid::new(0.0, 1.0, 5)?, Grid::point(0.5));
    let table = sweep(&spec)?;
    print!("{}", table.to_csv());
    eprintln!("{} rows, clean={}", table.rows.len(), table.is_clean());
    Ok(())
}
