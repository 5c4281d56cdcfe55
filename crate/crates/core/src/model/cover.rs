use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::index::DistanceIndex;
use super::length::Length;
use super::point::Site;
use super::tree::WeightedTree;
use crate::error::{Error, Result};

/// An ordered family of trees over a shared set of point ids.
///
/// `points[id][i]` is the vertex of point `id` in tree `i`, or `None` when
/// the point is absent from that tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoverDoc")]
pub struct TreeCover {
    pub trees: Vec<WeightedTree>,
    pub points: BTreeMap<usize, Vec<Option<usize>>>,
}

#[derive(Deserialize)]
struct CoverDoc {
    trees: Vec<WeightedTree>,
    points: BTreeMap<usize, Vec<Option<usize>>>,
}

impl TryFrom<CoverDoc> for TreeCover {
    type Error = Error;
    fn try_from(d: CoverDoc) -> Result<Self> {
        TreeCover::new(d.trees, d.points)
    }
}

impl TreeCover {
    pub fn new(trees: Vec<WeightedTree>, points: BTreeMap<usize, Vec<Option<usize>>>) -> Result<Self> {
        for (id, slots) in &points {
            if slots.len() != trees.len() {
                return Err(Error::parse(
                    format!("points[{id}]"),
                    format!("{} slots for {} trees", slots.len(), trees.len()),
                ));
            }
            for (i, s) in slots.iter().enumerate() {
                if let Some(v) = *s {
                    if v >= trees[i].len() {
                        return Err(Error::parse(
                            format!("points[{id}][{i}]"),
                            format!("vertex {v} out of range"),
                        ));
                    }
                }
            }
            if slots.iter().all(Option::is_none) {
                log::debug!("point {id} is absent from every tree");
            }
        }
        Ok(TreeCover { trees, points })
    }

    /// A cover where every point id `i` is vertex `i` of every tree.
    pub fn on_shared_vertices(trees: Vec<WeightedTree>) -> Result<Self> {
        let n = trees.first().map_or(0, WeightedTree::len);
        if trees.iter().any(|t| t.len() != n) {
            return Err(Error::domain("trees differ in vertex count"));
        }
        let k = trees.len();
        let points = (0..n).map(|i| (i, vec![Some(i); k])).collect();
        TreeCover::new(trees, points)
    }

    pub fn slots(&self, id: usize) -> Result<&[Option<usize>]> {
        self.points
            .get(&id)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::domain(format!("unknown point id {id}")))
    }

    /// Location of a point, taken from the first tree that contains it.
    pub fn site(&self, id: usize) -> Option<Site> {
        let slots = self.points.get(&id)?;
        slots
            .iter()
            .enumerate()
            .find_map(|(i, s)| s.map(|v| *self.trees[i].site(v)))
    }
}

/// A cover with one distance index per tree.
#[derive(Debug, Clone)]
pub struct IndexedCover {
    pub cover: TreeCover,
    pub indices: Vec<DistanceIndex>,
}

impl IndexedCover {
    pub fn new(cover: TreeCover) -> Self {
        let indices = cover.trees.iter().map(DistanceIndex::new).collect();
        IndexedCover { cover, indices }
    }

    /// Minimum distance over the trees containing both points, with the
    /// smallest witnessing tree index.
    pub fn cover_distance(&self, p: usize, q: usize) -> Result<(Length, usize)> {
        let (sp, sq) = (self.cover.slots(p)?, self.cover.slots(q)?);
        let mut best: Option<(Length, usize)> = None;
        for (i, (a, b)) in sp.iter().zip(sq).enumerate() {
            if let (Some(a), Some(b)) = (a, b) {
                let d = self.indices[i].distance(*a, *b)?;
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, i));
                }
            }
        }
        best.ok_or(Error::DisconnectedInCover { p, q })
    }

    /// Float cover distance; `None` when no tree holds both points.
    #[inline]
    pub fn cover_dist(&self, p: usize, q: usize) -> Option<f64> {
        self.slot_dist(&self.cover.points[&p], &self.cover.points[&q])
    }

    /// Float cover distance between two slot vectors.
    #[inline]
    pub fn slot_dist(&self, sp: &[Option<usize>], sq: &[Option<usize>]) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, (a, b)) in sp.iter().zip(sq).enumerate() {
            if let (Some(a), Some(b)) = (a, b) {
                let d = self.indices[i].dist(*a, *b);
                best = Some(best.map_or(d, |x| x.min(d)));
            }
        }
        best
    }
}

/// Cover distance with the witnessing tree index.
pub fn cover_distance(cover: &IndexedCover, p: usize, q: usize) -> Result<(Length, usize)> {
    cover.cover_distance(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::length::ExactLength;
    use crate::model::point::{GridPoint, Metric};
    use crate::model::tree::Edge;

    fn collinear_path() -> WeightedTree {
        let sites = (0..3).map(|i| Site::Grid2(GridPoint::new(i, 0))).collect();
        let edges = vec![
            Edge { u: 0, v: 1, len: ExactLength::ONE.into() },
            Edge { u: 1, v: 2, len: ExactLength::ONE.into() },
        ];
        WeightedTree::new(Metric::Euclid2, sites, edges, None).unwrap()
    }

    #[test]
    fn single_path_tree() {
        let cover = IndexedCover::new(TreeCover::on_shared_vertices(vec![collinear_path()]).unwrap());
        let (d, i) = cover.cover_distance(0, 2).unwrap();
        assert_eq!(d, Length::Exact(ExactLength::new(2, 0)));
        assert_eq!(i, 0);
    }

    #[test]
    fn ties_pick_smallest_tree_and_absence_is_an_error() {
        let t = collinear_path();
        let mut points = BTreeMap::new();
        points.insert(0, vec![Some(0), Some(0)]);
        points.insert(1, vec![Some(2), Some(2)]);
        points.insert(2, vec![None, Some(1)]);
        points.insert(3, vec![None, None]);
        let cover = IndexedCover::new(TreeCover::new(vec![t.clone(), t], points).unwrap());
        assert_eq!(cover.cover_distance(0, 1).unwrap().1, 0);
        assert_eq!(cover.cover_distance(0, 2).unwrap().1, 1);
        assert_eq!(
            cover.cover_distance(0, 3).unwrap_err(),
            Error::DisconnectedInCover { p: 0, q: 3 }
        );
        assert!(matches!(cover.cover_distance(0, 9), Err(Error::Domain(_))));
    }
}
