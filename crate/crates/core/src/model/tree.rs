use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::length::Length;
use super::point::{Metric, PlanePoint, Site};
use crate::error::{Error, Result};

/// Relative tolerance used when checking that an edge length matches the
/// metric distance between its endpoints.
const EDGE_LENGTH_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: Length,
}

/// An edge-weighted tree on located vertices.
///
/// Trees are validated on construction (connected, acyclic, positive edge
/// lengths that equal the metric distance between the endpoints unless the
/// metric is [`Metric::Abstract`]) and are immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTree {
    metric: Metric,
    sites: Vec<Site>,
    edges: Vec<Edge>,
    root: Option<usize>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl WeightedTree {
    pub fn new(
        metric: Metric,
        sites: Vec<Site>,
        edges: Vec<Edge>,
        root: Option<usize>,
    ) -> Result<Self> {
        let n = sites.len();
        if n == 0 {
            return Err(Error::parse("vertices", "a tree needs at least one vertex"));
        }
        if edges.len() + 1 != n {
            return Err(Error::parse(
                "edges",
                format!("{} edges for {} vertices; a tree has |V|-1", edges.len(), n),
            ));
        }
        if let Some(r) = root {
            if r >= n {
                return Err(Error::parse("root", format!("root {r} out of range")));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            let loc = || format!("edges[{i}]");
            if e.u >= n || e.v >= n {
                return Err(Error::parse(loc(), "endpoint out of range"));
            }
            if e.u == e.v {
                return Err(Error::parse(loc(), "self loop"));
            }
            if !e.len.is_positive() {
                return Err(Error::parse(loc(), format!("non-positive length {}", e.len)));
            }
            let d = metric.distance(&sites[e.u], &sites[e.v]);
            if metric != Metric::Abstract && (e.len.value() - d).abs() > EDGE_LENGTH_RTOL * d.max(1.0) {
                return Err(Error::parse(
                    loc(),
                    format!("length {} differs from metric distance {d}", e.len),
                ));
            }
            adjacency[e.u].push((e.v, i));
            adjacency[e.v].push((e.u, i));
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        if reached != n {
            return Err(Error::parse(
                "edges",
                format!("only {reached} of {n} vertices reachable from vertex 0"),
            ));
        }
        Ok(WeightedTree {
            metric,
            sites,
            edges,
            root,
            adjacency,
        })
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn site(&self, v: usize) -> &Site {
        &self.sites[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// Neighbours of `v` as `(vertex, edge index)` pairs.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// True when every edge carries an exact length.
    pub fn is_exact(&self) -> bool {
        self.edges.iter().all(|e| matches!(e.len, Length::Exact(_)))
    }

    pub(crate) fn zero_length(&self) -> Length {
        if self.is_exact() {
            Length::Exact(Default::default())
        } else {
            Length::Real(0.0)
        }
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.sites.len() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "vertex {v} is not in a tree with {} vertices",
                self.sites.len()
            )))
        }
    }

    /// Parent array and vertex order of a breadth-first traversal from `root`.
    /// A tree with free edge weights; vertex `i` is placed at `(i, 0)`.
    pub fn abstract_tree(n: usize, edges: Vec<Edge>, root: Option<usize>) -> Result<Self> {
        let sites = (0..n).map(|i| Site::Plane(PlanePoint::new(i as f64, 0.0))).collect();
        WeightedTree::new(Metric::Abstract, sites, edges, root)
    }

    /// Same vertices and edges under a different metric, revalidated.
    pub fn with_metric(&self, metric: Metric, lengths: impl Fn(&Edge) -> Length) -> Result<Self> {
        let edges = self.edges.iter().map(|e| Edge { len: lengths(e), ..*e }).collect();
        WeightedTree::new(metric, self.sites.clone(), edges, self.root)
    }

    pub fn bfs_from(&self, root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
        let n = self.len();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &(y, _) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        (parent, order)
    }

    /// Length of the unique `u`–`v` path by explicit traversal. Linear time;
    /// used as the reference the indexed distances are checked against.
    pub fn path_length_naive(&self, u: usize, v: usize) -> Length {
        let n = self.len();
        let mut dist: Vec<Option<Length>> = vec![None; n];
        dist[u] = Some(self.zero_length());
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            if x == v {
                break;
            }
            let dx = dist[x].unwrap();
            for &(y, e) in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(dx + self.edges[e].len);
                    stack.push(y);
                }
            }
        }
        dist[v].expect("tree is connected")
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct TreeDoc {
    pub metric: Metric,
    pub vertices: Vec<Site>,
    pub edges: Vec<(usize, usize, Length)>,
    pub root: Option<usize>,
}

impl From<&WeightedTree> for TreeDoc {
    fn from(t: &WeightedTree) -> Self {
        TreeDoc {
            metric: t.metric,
            vertices: t.sites.clone(),
            edges: t.edges.iter().map(|e| (e.u, e.v, e.len)).collect(),
            root: t.root,
        }
    }
}

impl TryFrom<TreeDoc> for WeightedTree {
    type Error = Error;
    fn try_from(d: TreeDoc) -> Result<Self> {
        let edges = d
            .edges
            .into_iter()
            .map(|(u, v, len)| Edge { u, v, len })
            .collect();
        WeightedTree::new(d.metric, d.vertices, edges, d.root)
    }
}

impl Serialize for WeightedTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TreeDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = TreeDoc::deserialize(d)?;
        WeightedTree::try_from(doc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::length::ExactLength;
    use crate::model::point::GridPoint;

    fn unit_path(k: i64) -> WeightedTree {
        let sites = (0..k).map(|i| Site::Grid2(GridPoint::new(i, 0))).collect();
        let edges = (0..k as usize - 1)
            .map(|i| Edge {
                u: i,
                v: i + 1,
                len: Length::Exact(ExactLength::ONE),
            })
            .collect();
        WeightedTree::new(Metric::Euclid2, sites, edges, Some(0)).unwrap()
    }

    #[test]
    fn rejects_cycle_count() {
        let sites = vec![
            Site::Grid2(GridPoint::new(0, 0)),
            Site::Grid2(GridPoint::new(1, 0)),
        ];
        let e = Edge {
            u: 0,
            v: 1,
            len: ExactLength::ONE.into(),
        };
        let err = WeightedTree::new(Metric::Euclid2, sites, vec![e, e], None).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn rejects_zero_and_wrong_lengths() {
        let sites = vec![
            Site::Grid2(GridPoint::new(0, 0)),
            Site::Grid2(GridPoint::new(1, 0)),
        ];
        let zero = Edge {
            u: 0,
            v: 1,
            len: ExactLength::ZERO.into(),
        };
        assert!(WeightedTree::new(Metric::Euclid2, sites.clone(), vec![zero], None).is_err());
        let wrong = Edge {
            u: 0,
            v: 1,
            len: ExactLength::SQRT2.into(),
        };
        assert!(WeightedTree::new(Metric::Euclid2, sites, vec![wrong], None).is_err());
    }

    #[test]
    fn naive_path_length_on_chain() {
        let t = unit_path(3);
        assert_eq!(t.path_length_naive(0, 2), Length::Exact(ExactLength::new(2, 0)));
        assert_eq!(t.path_length_naive(1, 1), Length::Exact(ExactLength::ZERO));
    }
}
