//! Holomorphic regluing of quadratic maps: the Riemann sphere toolkit, the
//! two normalized quadratic families, square-root branch continuation on
//! slit spheres, the iterative regluing engine, external rays and rendering.

pub mod branch;
pub mod curve;
pub mod engine;
pub mod error;
pub mod family;
pub mod par;
pub mod rays;
pub mod render;
pub mod report;
pub mod sphere;

pub use curve::{CurveFamily, SampledCurve};
pub use error::{Error, Result};
pub use family::{QuadMap, PolyParam, RatParam};
pub use par::Exec;
pub use sphere::{chordal_distance, ExtComplex};
