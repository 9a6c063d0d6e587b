//! Curves from curvature: Frenet–Serret integration, torsion lift, multiple
//! points, curvature reconstruction and tight-confinement checks.

mod curve;
mod ellipse;
mod intersect;
mod profile;
mod reconstruct;
mod validity;

pub use curve::{integrate_frenet_serret, Frame, SampledCurve};
pub use ellipse::EllipseArc;
pub use intersect::{detect_self_intersections, Crossing};
pub(crate) use profile::validate_eta;
pub use profile::{evaluate_curvature, CurvatureProfile, ProfileKind, SignMask, Tabulated};
pub use reconstruct::{reconstruct_curvature, ReconstructedCurvature};
pub use validity::{
    check_validity, check_validity_with_samples, ValidityReport, ValidityThresholds, Verdict, DEFAULT_KAPPA_FLOOR,
};
