//! Numerical toolkit for decorated Mandelbrot sets and parabolic window
//! asymptotics of the quadratic family `z^2 + c`.
//!
//! The numerical modules are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the renderer and the
//! command-line tool use.

pub mod atlas;
pub mod boettcher;
pub mod decoration;
pub mod dynamics;
pub mod error;
pub mod parabolic;
pub mod render;
pub mod scalar;

pub use error::{Error, Result};
pub use num_complex::Complex;
pub use scalar::{format_complex, parse_complex, Real};

/// Double-precision complex number used throughout the f64 API.
pub type ComplexValue = num_complex::Complex64;
pub type OrbitRecord = dynamics::OrbitRecord<f64>;
pub type PeriodicPointResult = dynamics::PeriodicPoint<f64>;
pub type Center = dynamics::Center<f64>;
pub type PotentialResult = boettcher::PotentialResult<f64>;
pub type DecorationModel = decoration::DecorationModel<f64>;
pub type MembershipVerdict = decoration::MembershipVerdict<f64>;
pub use decoration::MembershipKind;
pub type SectorConstants = parabolic::SectorConstants<f64>;
pub type WindowPrediction = parabolic::WindowPrediction<f64>;
pub type CenterRecord = atlas::CenterRecord<f64>;
pub type SequenceFit = atlas::SequenceFit<f64>;
