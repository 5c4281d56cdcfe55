//! Points, exact lengths, weighted trees, distance indexing, tree covers and
//! their JSON documents.

pub mod cover;
pub mod index;
pub mod length;
pub mod point;
pub mod report;
pub mod tree;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub use cover::{cover_distance, IndexedCover, TreeCover};
pub use index::{tree_distance, DistanceIndex};
pub use length::{ExactLength, Length};
pub use point::{GridPoint, GridPoint3, Metric, Norm, PlanePoint, Site};
pub use report::{Sampling, StretchReport};
pub use tree::{Edge, WeightedTree};

/// Pretty JSON document for any serializable model object.
pub fn serialize<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::parse("serialize", e.to_string()))
}

/// Parses a JSON document; errors carry the line and column of the failure.
pub fn deserialize<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}
