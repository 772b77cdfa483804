//! Verification kernel for parallelism structures on a coordinate chart.
//!
//! A connection is given by coefficient functions relative to a frame. From it
//! the crate builds covariant derivatives, the plus and minus Cartan
//! connections, the torsion and curvature families and the residuals of the
//! identities they satisfy. All derivatives are exact, taken through nested
//! forward-mode jets.
//!
//! Indices in this API are 0-based.

pub mod cartan;
pub mod chart;
pub mod connection;
pub mod error;
pub mod expr;
pub mod exterior;
pub mod frame;
pub mod jet;
pub mod linalg;
pub mod sample;
pub mod zoo;

pub use chart::{Chart, FormField, Point, ScalarField, VectorField};
pub use connection::Connection;
pub use error::{GeomError, Result};
pub use exterior::{KForm, KVector};
pub use frame::FramePair;
pub use jet::{Jet, Num, Scalar};
