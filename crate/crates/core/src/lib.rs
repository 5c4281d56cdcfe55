//! Two-tree covers of planar point sets built from a recursive red/blue
//! subdivision of the triangular grid, together with verifiers, a one-tree
//! lower-bound witness and a three-tree cover of the 3D grid.

pub mod cube3d;
pub mod error;
pub mod grid;
pub mod lower_bound;
pub mod model;
pub mod pipeline;
pub mod verify;

pub use error::{Error, Result};
