//! Constant-time tree distance queries.
//!
//! The tree is rooted, an Euler tour is recorded, and a sparse table over the
//! tour answers range-minimum queries on hop depth, which gives the lowest
//! common ancestor of any two vertices in O(1) after O(N log N) preprocessing.
//! Distances then follow from prefix path lengths from the root.

use super::length::{ExactLength, Length};
use super::tree::WeightedTree;
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct DistanceIndex {
    first: Vec<u32>,
    hops: Vec<u32>,
    depth: Vec<f64>,
    exact_depth: Option<Vec<ExactLength>>,
    // sparse[k][i] = vertex of minimum hop depth in tour[i .. i + 2^k]
    sparse: Vec<Vec<u32>>,
}

impl DistanceIndex {
    pub fn new(tree: &WeightedTree) -> Self {
        let n = tree.len();
        let root = tree.root().unwrap_or(0);
        let exact = tree.is_exact();

        let mut first = vec![u32::MAX; n];
        let mut hops = vec![0u32; n];
        let mut depth = vec![0.0f64; n];
        let mut exact_depth = if exact {
            Some(vec![ExactLength::ZERO; n])
        } else {
            None
        };
        let mut tour: Vec<u32> = Vec::with_capacity(2 * n);

        // (vertex, parent, next neighbour slot)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        first[root] = 0;
        tour.push(root as u32);
        while let Some(top) = stack.last_mut() {
            let (v, parent, slot) = *top;
            let nbrs = tree.neighbors(v);
            if slot < nbrs.len() {
                top.2 += 1;
                let (w, e) = nbrs[slot];
                if w == parent {
                    continue;
                }
                let len = tree.edges()[e].len;
                hops[w] = hops[v] + 1;
                depth[w] = depth[v] + len.value();
                if let Some(ed) = exact_depth.as_mut() {
                    ed[w] = ed[v] + len.exact().expect("exact tree");
                }
                first[w] = tour.len() as u32;
                tour.push(w as u32);
                stack.push((w, v, 0));
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    tour.push(p as u32);
                }
            }
        }

        let m = tour.len();
        let mut sparse = vec![tour];
        let mut width = 1;
        while 2 * width <= m {
            let prev = sparse.last().unwrap();
            let next: Vec<u32> = (0..=m - 2 * width)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + width]);
                    if hops[a as usize] <= hops[b as usize] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            sparse.push(next);
            width *= 2;
        }

        DistanceIndex {
            first,
            hops,
            depth,
            exact_depth,
            sparse,
        }
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    pub fn lca(&self, u: usize, v: usize) -> usize {
        let (mut i, mut j) = (self.first[u] as usize, self.first[v] as usize);
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        let span = j - i + 1;
        let k = (usize::BITS - 1 - span.leading_zeros()) as usize;
        let a = self.sparse[k][i];
        let b = self.sparse[k][j + 1 - (1 << k)];
        if self.hops[a as usize] <= self.hops[b as usize] {
            a as usize
        } else {
            b as usize
        }
    }

    /// Tree distance as a float; panics on out-of-range ids.
    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> f64 {
        let w = self.lca(u, v);
        (self.depth[u] + self.depth[v] - 2.0 * self.depth[w]).max(0.0)
    }

    /// Tree distance, exact when the tree has exact edge lengths.
    pub fn distance(&self, u: usize, v: usize) -> Result<Length> {
        for x in [u, v] {
            if x >= self.len() {
                return Err(crate::Error::Domain(format!(
                    "vertex {x} is not in a tree with {} vertices",
                    self.len()
                )));
            }
        }
        let w = self.lca(u, v);
        Ok(match &self.exact_depth {
            Some(ed) => Length::Exact(ed[u] + ed[v] - ed[w] * 2),
            None => Length::Real((self.depth[u] + self.depth[v] - 2.0 * self.depth[w]).max(0.0)),
        })
    }

    /// Hop depth of `v` below the root.
    pub fn hop_depth(&self, v: usize) -> u32 {
        self.hops[v]
    }

    /// Weighted depth of `v` below the root.
    pub fn depth(&self, v: usize) -> f64 {
        self.depth[v]
    }
}

/// Tree distance between two vertices of `tree` using a prebuilt index.
pub fn tree_distance(
    tree: &WeightedTree,
    index: &DistanceIndex,
    u: usize,
    v: usize,
) -> Result<Length> {
    tree.check_vertex(u)?;
    tree.check_vertex(v)?;
    index.distance(u, v)
}
