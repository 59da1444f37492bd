//! Table reproduction, sweeps, contour grids and oracle validation, with CSV
//! output (one header line, '.' decimals, LF endings).

pub mod contour;
pub mod fixtures;
pub mod reproduce;
pub mod sweep;
pub mod validate;

pub use contour::{contour_csv, run_contour, Axis, GridSpec, Quantity};
pub use fixtures::Fixtures;
pub use reproduce::{reproduce_csv, run_reproduce, TableReport};
pub use sweep::{run_sweep, sweep_csv, Axes, SweepMode, SweepSpec};
pub use validate::{omitted_path_mass, run_validate, validate_csv, ValidationReport};

use crate::error::{Error, Result};

fn csv_err(e: csv::Error) -> Error {
    Error::Input(format!("csv: {e}"))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Input(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Shortest round-trip representation.
fn num(x: f64) -> String {
    format!("{x}")
}
