//! Output formats: CSV tables, a small binary grid format, PPM rasters and the
//! run manifest that records a digest of every file a run writes.

mod csv;
mod grid_file;
mod manifest;
mod ppm;

pub use csv::{format_float, read_csv, render_csv, Column};
pub use grid_file::{decode_grid, encode_grid, GridFile};
pub use manifest::{OutputEntry, OutputSet, RunManifest};
pub use ppm::{encode_ppm, Colormap};
