//! Subtrees of the red or blue tree spanning a few key points, built from
//! the implicit [`Subdivision`] without materializing the grid.
//!
//! Every tree path from a key point to the root runs along its owning chain
//! to the attachment point `w`, then along the chain owning `w`, and so on;
//! orders strictly decrease, so a path has O(m) straight runs. The union of
//! these paths, with non-key leaves pruned, is the minimal subtree spanning
//! the keys. Vertices are the keys plus the attachment and branch points;
//! each edge is a straight run, so its length is the Euclidean distance.

use std::collections::{BTreeMap, BTreeSet};

use super::locate::{SegmentRecord, Subdivision};
use super::triangle::Color;
use crate::error::{Error, Result};
use crate::model::{Edge, ExactLength, GridPoint, Metric, Site, WeightedTree};

/// A subtree of one color's tree together with the vertex of every grid
/// point it contains.
#[derive(Debug, Clone)]
pub struct SparseTree {
    pub tree: WeightedTree,
    pub vertex: BTreeMap<GridPoint, usize>,
}

fn unit(seg: &SegmentRecord) -> ExactLength {
    if seg.step.x != 0 && seg.step.y != 0 {
        ExactLength::SQRT2
    } else {
        ExactLength::ONE
    }
}

/// Minimal subtree of the `color` tree spanning `keys`, rooted at `keys[0]`.
pub fn spanning_subtree(sub: &Subdivision, color: Color, keys: &[GridPoint]) -> Result<SparseTree> {
    let first = *keys.first().ok_or_else(|| Error::domain("no key points"))?;
    // creation index -> (segment, positions on it)
    let mut chains: BTreeMap<u64, (SegmentRecord, BTreeSet<i64>)> = BTreeMap::new();
    let mut seen: BTreeSet<GridPoint> = BTreeSet::new();
    let mut queue: Vec<GridPoint> = Vec::new();
    for &p in keys {
        if sub.color_of(p)? != color {
            return Err(Error::domain(format!("{p} is not a {color} point")));
        }
        if seen.insert(p) {
            queue.push(p);
        }
    }
    while let Some(p) = queue.pop() {
        let seg = sub.owner(p)?;
        let j = seg.position(p).expect("owner contains the point");
        chains
            .entry(seg.creation)
            .or_insert_with(|| (seg, BTreeSet::new()))
            .1
            .insert(j);
        if !seg.root && seen.insert(seg.w) {
            queue.push(seg.w);
        }
    }

    let mut points: Vec<GridPoint> = Vec::new();
    let mut id: BTreeMap<GridPoint, usize> = BTreeMap::new();
    for (seg, positions) in chains.values() {
        for &j in positions {
            id.insert(seg.point_at(j), points.len());
            points.push(seg.point_at(j));
        }
    }
    let mut edges: Vec<(usize, usize, ExactLength)> = Vec::new();
    for (seg, positions) in chains.values() {
        let u = unit(seg);
        let ps: Vec<i64> = positions.iter().copied().collect();
        for pair in ps.windows(2) {
            edges.push((id[&seg.point_at(pair[0])], id[&seg.point_at(pair[1])], u * (pair[1] - pair[0])));
        }
        if !seg.root {
            let last = *ps.last().unwrap();
            edges.push((id[&seg.point_at(last)], id[&seg.w], u * (seg.steps() - last)));
        }
    }

    // Prune non-key leaves.
    let n = points.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, &(a, b, _)) in edges.iter().enumerate() {
        adj[a].push(k);
        adj[b].push(k);
    }
    let key_set: BTreeSet<GridPoint> = keys.iter().copied().collect();
    let is_key: Vec<bool> = points.iter().map(|p| key_set.contains(p)).collect();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut alive_v = vec![true; n];
    let mut alive_e = vec![true; edges.len()];
    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1 && !is_key[v]).collect();
    while let Some(v) = stack.pop() {
        if !alive_v[v] || is_key[v] || degree[v] > 1 {
            continue;
        }
        alive_v[v] = false;
        for &k in &adj[v] {
            if alive_e[k] {
                alive_e[k] = false;
                let (a, b, _) = edges[k];
                let o = if a == v { b } else { a };
                degree[o] -= 1;
                if degree[o] <= 1 && !is_key[o] {
                    stack.push(o);
                }
            }
        }
    }

    let mut new_id = vec![usize::MAX; n];
    let mut sites = Vec::new();
    let mut vertex = BTreeMap::new();
    for v in (0..n).filter(|&v| alive_v[v]) {
        new_id[v] = sites.len();
        vertex.insert(points[v], sites.len());
        sites.push(Site::Grid2(points[v]));
    }
    let tree_edges = edges
        .iter()
        .zip(&alive_e)
        .filter(|(_, &alive)| alive)
        .map(|(&(a, b, len), _)| Edge {
            u: new_id[a],
            v: new_id[b],
            len: len.into(),
        })
        .collect();
    let root = vertex[&first];
    let tree = WeightedTree::new(Metric::Euclid2, sites, tree_edges, Some(root))?;
    Ok(SparseTree { tree, vertex })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Construction, TreeKind};
    use crate::model::DistanceIndex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn distances_match_the_materialized_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 1..=5 {
            let c = Construction::build(m).unwrap();
            let sub = Subdivision::new(m).unwrap();
            for (color, kind) in [(Color::Red, TreeKind::Red), (Color::Blue, TreeKind::Blue)] {
                let full = c.tree(kind);
                let full_idx = DistanceIndex::new(full);
                let pool: Vec<GridPoint> = c
                    .points()
                    .iter()
                    .copied()
                    .filter(|&p| c.color_of(p).unwrap() == color)
                    .collect();
                for _ in 0..10 {
                    let k = rng.random_range(1..=pool.len().min(12));
                    let keys: Vec<GridPoint> = (0..k).map(|_| pool[rng.random_range(0..pool.len())]).collect();
                    let st = spanning_subtree(&sub, color, &keys).unwrap();
                    let idx = DistanceIndex::new(&st.tree);
                    for &a in &keys {
                        for &b in &keys {
                            let want = full_idx
                                .distance(c.vertex(kind, a).unwrap(), c.vertex(kind, b).unwrap())
                                .unwrap();
                            let got = idx.distance(st.vertex[&a], st.vertex[&b]).unwrap();
                            assert_eq!(got, want, "m={m} {color} {a} {b}");
                        }
                    }
                    // minimal: every leaf is a key
                    for v in 0..st.tree.len() {
                        if st.tree.degree(v) <= 1 {
                            assert!(keys.contains(&st.tree.site(v).grid2().unwrap()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn wrong_color_is_rejected() {
        let sub = Subdivision::new(2).unwrap();
        assert!(spanning_subtree(&sub, Color::Blue, &[GridPoint::new(0, 0)]).is_err());
        let one = spanning_subtree(&sub, Color::Red, &[GridPoint::new(3, 0)]).unwrap();
        assert_eq!(one.tree.len(), 1);
    }

    #[test]
    fn deep_grid_subtree() {
        let sub = Subdivision::new(28).unwrap();
        let keys = [GridPoint::new(1 << 20, 12_345), GridPoint::new(77_777_777, 99_999_999)];
        let keys: Vec<GridPoint> = keys
            .iter()
            .map(|&p| {
                (0..)
                    .map(|i| p + GridPoint::new(i, 0))
                    .find(|&q| sub.color_of(q).unwrap() == Color::Red)
                    .unwrap()
            })
            .collect();
        let st = spanning_subtree(&sub, Color::Red, &keys).unwrap();
        let idx = DistanceIndex::new(&st.tree);
        let d = idx.dist(st.vertex[&keys[0]], st.vertex[&keys[1]]);
        assert!(d >= keys[0].dist(keys[1]));
        assert!(st.tree.len() < 200);
    }
}
