//! Measured moments of the four reference configurations next to the published table.

use pngauss::cli::table1::{render_table1, reproduce_table1, Table1Config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = reproduce_table1(&Table1Config::default(), None)?;
    print!("{}", render_table1(&report));
    println!("all within tolerance: {}", report.all_pass);
    Ok(())
}
