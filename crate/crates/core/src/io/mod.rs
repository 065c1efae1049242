//! Configuration files, coefficient snapshots and CSV output.

pub mod config;
pub mod csv;
pub mod snapshot;

pub use config::{parse_config, InitialSpec, RunConfig};
pub use csv::{convergence_csv, diagnostics_csv, CONVERGENCE_HEADER, DIAGNOSTICS_HEADER};
pub use snapshot::{format_snapshot, parse_snapshot, read_snapshot, write_snapshot};

use crate::error::Result;
use crate::initial;
use crate::spectral::{GridSpec, SpectralField};

/// Builds the configured initial condition on `grid`. Snapshot files are
/// truncated or zero-padded to the grid's mode count.
pub fn initial_field(cfg: &RunConfig, grid: &GridSpec) -> Result<SpectralField> {
    match &cfg.initial {
        InitialSpec::Zero => Ok(SpectralField::zeros(grid)),
        InitialSpec::Smooth => Ok(initial::smooth(grid)),
        InitialSpec::Borderline => Ok(initial::borderline(grid)),
        InitialSpec::Manufactured => cfg.manufactured.exact(0.0, grid),
        InitialSpec::Mode { k1, k2, amplitude } => initial::mode(grid, *k1, *k2, *amplitude),
        InitialSpec::File(path) => read_snapshot(path)?.0.resample(grid),
    }
}
