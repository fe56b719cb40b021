//! Spacelike curves in Minkowski 4-space: Frenet apparatus reconstruction,
//! general-helix detection, and helix synthesis from curvature profiles.
//!
//! The ambient space carries the metric g = -dx1^2 + dx2^2 + dx3^2 + dx4^2.
//! For a unit-speed spacelike curve with Frenet frame {T, N, B1, B2}, sign
//! constants (eps1, eps2), and curvatures (k1, k2, k3), the curve is a
//! general helix exactly when the invariant
//!
//! ```text
//! H(s) = (k1/k2)^2 - eps1 * (1/k3^2) * ((k1/k2)')^2
//! ```
//!
//! is constant *and* the associated axis field
//! U = T - eps2 r B1 + eps1 eps2 (r'/k3) B2 (with r = k1/k2) is parallel.
//! See the `analysis` module for the full set of equivalent tests and the
//! one genuinely degenerate family (constant ratio with nonzero k3) where
//! the invariant alone is not decisive.

pub mod analysis;
pub mod cli;
pub mod curve;
pub mod error;
pub mod frenet;
pub mod minkowski;
pub mod numerics;
pub mod presets;
pub mod synthesis;
pub mod verify;

pub use analysis::{detect_helix, HelixReport, Tolerances, Verdict};
pub use curve::{AnalyticCurve, Curve, SampledCurve};
pub use error::{Error, Result};
pub use frenet::{compute_frame_field, FrameField, FrenetApparatus};
pub use minkowski::{CausalCharacter, Vec4};
pub use synthesis::{synthesize, CurvatureProfile, SynthesisOptions, SynthesizedCurve};
