//! Steiner point removal by nearest-terminal contraction.
//!
//! Every vertex is assigned to its nearest terminal in the tree metric (ties
//! go to the terminal met first in a depth-first traversal from the first
//! terminal). Each cell is a connected subtree, so contracting the cells
//! yields a tree on the terminals. An input edge joining two cells proposes
//! the terminal pair, weighted by their distance in the input tree;
//! proposals are taken in input edge order and any that would close a cycle
//! are skipped.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::model::{DistanceIndex, Edge, Metric, WeightedTree};

#[derive(PartialEq)]
struct Entry {
    dist: f64,
    rank: usize,
    vertex: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, o: &Self) -> Ordering {
        self.dist
            .total_cmp(&o.dist)
            .then(self.rank.cmp(&o.rank))
            .then(self.vertex.cmp(&o.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Nearest terminal of every vertex, as an index into `terminals`.
pub fn terminal_cells(tree: &WeightedTree, terminals: &[usize]) -> Result<Vec<usize>> {
    let n = tree.len();
    let mut slot = vec![usize::MAX; n];
    for (i, &t) in terminals.iter().enumerate() {
        tree.check_vertex(t)?;
        if slot[t] != usize::MAX {
            return Err(Error::domain(format!("terminal {t} listed twice")));
        }
        slot[t] = i;
    }
    let &root = terminals.first().ok_or_else(|| Error::domain("no terminals"))?;

    // Depth-first rank of every terminal from the root.
    let mut rank = vec![usize::MAX; terminals.len()];
    let mut seen = vec![false; n];
    let mut stack = vec![root];
    let mut next_rank = 0;
    while let Some(v) = stack.pop() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if slot[v] != usize::MAX {
            rank[slot[v]] = next_rank;
            next_rank += 1;
        }
        for &(w, _) in tree.neighbors(v).iter().rev() {
            if !seen[w] {
                stack.push(w);
            }
        }
    }

    let mut best: Vec<Option<(f64, usize)>> = vec![None; n];
    let mut cell = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    for (i, &t) in terminals.iter().enumerate() {
        best[t] = Some((0.0, rank[i]));
        heap.push(Reverse(Entry {
            dist: 0.0,
            rank: rank[i],
            vertex: t,
        }));
    }
    let by_rank: Vec<usize> = {
        let mut v = vec![0; terminals.len()];
        for (i, &r) in rank.iter().enumerate() {
            v[r] = i;
        }
        v
    };
    while let Some(Reverse(Entry { dist, rank: r, vertex })) = heap.pop() {
        if cell[vertex] != usize::MAX {
            continue;
        }
        cell[vertex] = by_rank[r];
        for &(w, e) in tree.neighbors(vertex) {
            if cell[w] != usize::MAX {
                continue;
            }
            let d = dist + tree.edges()[e].len.value();
            let better = match best[w] {
                None => true,
                Some((bd, br)) => d < bd || (d == bd && r < br),
            };
            if better {
                best[w] = Some((d, r));
                heap.push(Reverse(Entry { dist: d, rank: r, vertex: w }));
            }
        }
    }
    Ok(cell)
}

/// Tree on `terminals` only: vertex `i` of the output is `terminals[i]` of
/// the input (same site), every edge weighs the input tree distance of its
/// endpoints, and the output metric is [`Metric::Abstract`].
pub fn steiner_point_removal(tree: &WeightedTree, terminals: &[usize]) -> Result<WeightedTree> {
    let cell = terminal_cells(tree, terminals)?;
    let index = DistanceIndex::new(tree);
    let k = terminals.len();
    let mut uf = UnionFind((0..k).collect());
    let mut edges = Vec::with_capacity(k.saturating_sub(1));
    for e in tree.edges() {
        let (a, b) = (cell[e.u], cell[e.v]);
        if a != b && uf.union(a, b) {
            edges.push(Edge {
                u: a,
                v: b,
                len: index.distance(terminals[a], terminals[b])?,
            });
        }
    }
    let sites = terminals.iter().map(|&t| *tree.site(t)).collect();
    WeightedTree::new(Metric::Abstract, sites, edges, Some(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ExactLength, GridPoint, Length, Site};

    fn tree(n: usize, edges: &[(usize, usize, i64)]) -> WeightedTree {
        let edges = edges
            .iter()
            .map(|&(u, v, w)| Edge {
                u,
                v,
                len: ExactLength::new(w, 0).into(),
            })
            .collect();
        WeightedTree::abstract_tree(n, edges, Some(0)).unwrap()
    }

    fn weights(t: &WeightedTree) -> Vec<(usize, usize, Length)> {
        t.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v), e.len)).collect()
    }

    #[test]
    fn path_through_one_steiner_point() {
        let t = tree(3, &[(0, 1, 1), (1, 2, 1)]);
        let out = steiner_point_removal(&t, &[0, 2]).unwrap();
        assert_eq!(weights(&out), vec![(0, 1, ExactLength::new(2, 0).into())]);
    }

    #[test]
    fn star_with_steiner_centre() {
        let t = tree(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]);
        let out = steiner_point_removal(&t, &[1, 2, 3]).unwrap();
        let two = Length::from(ExactLength::new(2, 0));
        assert_eq!(weights(&out), vec![(0, 1, two), (0, 2, two)]);
    }

    #[test]
    fn no_steiner_points_is_identity() {
        let sites: Vec<Site> = (0..4).map(|i| Site::Grid2(GridPoint::new(i, 0))).collect();
        let edges = (0..3)
            .map(|i| Edge {
                u: i,
                v: i + 1,
                len: ExactLength::ONE.into(),
            })
            .collect();
        let t = WeightedTree::new(Metric::Euclid2, sites, edges, Some(0)).unwrap();
        let out = steiner_point_removal(&t, &[0, 1, 2, 3]).unwrap();
        assert_eq!(weights(&out), weights(&t));
        assert_eq!(out.sites(), t.sites());
    }

    #[test]
    fn bad_terminals() {
        let t = tree(3, &[(0, 1, 1), (1, 2, 1)]);
        assert!(matches!(steiner_point_removal(&t, &[0, 5]), Err(Error::Domain(_))));
        assert!(steiner_point_removal(&t, &[0, 0]).is_err());
        assert!(steiner_point_removal(&t, &[]).is_err());
    }
}
