//! Finite CAT(0) cube complexes and their stable cylinders.
//!
//! A complex is given by its 1-skeleton (a median graph). From it the crate
//! derives hyperplanes and halfspaces, intervals and gates, the hyperbolicity
//! constants `δ`, `d`, `D`, the cylinders `C(x, y) = I_D(x, y)`, and
//! exhaustive or sampled checks of cylinder stability.

pub mod bitset;
pub mod complex;
pub mod cylinders;
pub mod error;
pub mod generators;
pub mod half;
pub mod hyperbolicity;
pub mod intervals;
pub mod io;
pub mod stability;

pub use bitset::BitSet;
pub use complex::{CubeComplex, Edge, Halfspace, Hyperplane, PocsetRelations, Vertex};
pub use cylinders::Cylinder;
pub use error::{Error, Result};
pub use half::HalfInt;
pub use hyperbolicity::{GeometryConstants, Grid, PigeonholeBounds};
pub use intervals::{Interval, IntervalEmbedding};
