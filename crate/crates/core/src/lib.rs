//! Bent matter-wave waveguides from curvature profiles.
//!
//! A waveguide whose axis is bent feels an attractive curvature-induced
//! potential `V(q1) = -κ(q1)²/8` along its arc length `q1`. This crate
//! designs guides by prescribing `κ(q1)` directly:
//!
//! * [`geometry`] integrates curvature (and an optional constant torsion) into
//!   a sampled curve, finds its multiple points and checks the tight-confinement
//!   conditions.
//! * [`potentials`] turns profiles into potentials and back, builds
//!   supersymmetric partner pairs, reflectionless determinant curvatures,
//!   shape-invariance chains, elliptical loops and depth-compensation barriers.
//! * [`scattering`] solves the stationary problem: reflection/transmission
//!   amplitudes, bound-state spectra and the partner amplitude map.
//! * [`dynamics`] propagates wave packets with a split-step spectral method in
//!   1D (open or periodic) and 2D painted guides, relaxes ground states in
//!   imaginary time and records Talbot carpets.
//! * [`pipeline`] and [`config`] wire these together into the reproducible
//!   runs exposed by the `bentguide` binary.
//!
//! All quantities use natural units `ħ = m = 1`, lengths in units of the
//! transverse ground-state width `σ0` and times in `1/ω⊥`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod dynamics;
mod error;
pub(crate) mod fd;
pub mod geometry;
pub mod grid;
pub mod interp;
pub mod io;
pub mod pipeline;
pub mod potentials;
pub mod scattering;

pub use error::{Error, Result};
pub use grid::{Grid1D, Grid2D};

pub use num_complex::Complex64;
