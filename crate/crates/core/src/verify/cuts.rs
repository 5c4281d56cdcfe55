//! Periodic depth cuts of a rooted tree and the multiplicity of the cell
//! cover they induce.
//!
//! With `M = 2(B+1)`, cut A removes every edge whose depth interval
//! `(depth(parent), depth(child)]` contains a multiple of `M`, and cut B every
//! edge whose interval contains a value `≡ B+1 (mod M)`. Level values of the
//! two kinds alternate every `B+1`, so a path of length at most `B` misses
//! one kind entirely and stays inside one component of that cut.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Length, WeightedTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CutSide {
    A,
    B,
}

impl CutSide {
    pub const BOTH: [CutSide; 2] = [CutSide::A, CutSide::B];

    fn slot(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CutDecomposition {
    pub root: usize,
    pub b: i64,
    pub depth: Vec<i64>,
    pub parent: Vec<Option<usize>>,
    /// `component[side][v]`: component id of `v` in that cut.
    pub component: [Vec<usize>; 2],
    /// `diameters[side][c]`: weighted diameter of component `c`.
    pub diameters: [Vec<i64>; 2],
}

fn integer_weight(len: Length, edge: usize) -> Result<i64> {
    let w = match len {
        Length::Exact(e) if e.b == 0 => Some(e.a),
        Length::Real(x) if x.fract() == 0.0 && x.abs() < 9.0e15 => Some(x as i64),
        _ => None,
    };
    w.filter(|&w| w > 0)
        .ok_or_else(|| Error::domain(format!("edge {edge} has non-integer length {len}")))
}

fn crosses(lo: i64, hi: i64, modulus: i64, offset: i64) -> bool {
    // some value v ≡ offset (mod modulus) with lo < v <= hi
    (hi - offset).div_euclid(modulus) > (lo - offset).div_euclid(modulus)
}

impl CutDecomposition {
    pub fn components(&self, side: CutSide) -> usize {
        self.diameters[side.slot()].len()
    }

    pub fn max_diameter(&self, side: CutSide) -> i64 {
        self.diameters[side.slot()].iter().copied().max().unwrap_or(0)
    }

    /// Upper bound `4(B+1)` on every component diameter.
    pub fn diameter_bound(&self) -> i64 {
        4 * (self.b + 1)
    }

    pub fn co_resident(&self, u: usize, v: usize) -> bool {
        CutSide::BOTH
            .iter()
            .any(|s| self.component[s.slot()][u] == self.component[s.slot()][v])
    }

    /// Checks every pair at tree distance at most `B` for co-residence.
    /// Returns the number of pairs checked, or the first pair that fails.
    pub fn check_short_pairs(&self, tree: &WeightedTree) -> std::result::Result<u64, (usize, usize)> {
        let n = tree.len();
        let weights: Vec<i64> = tree.edges().iter().map(|e| e.len.value().round() as i64).collect();
        let mut count = 0;
        for u in 0..n {
            let mut stack = vec![(u, usize::MAX, 0i64)];
            while let Some((x, from, d)) = stack.pop() {
                if x > u {
                    count += 1;
                    if !self.co_resident(u, x) {
                        return Err((u, x));
                    }
                }
                for &(y, e) in tree.neighbors(x) {
                    if y != from && d + weights[e] <= self.b {
                        stack.push((y, x, d + weights[e]));
                    }
                }
            }
        }
        Ok(count)
    }
}

/// Cuts A and B of `tree` rooted at `root` for parameter `b`. Edge lengths
/// must be positive integers.
pub fn cut_decomposition(tree: &WeightedTree, root: usize, b: i64) -> Result<CutDecomposition> {
    if b < 1 {
        return Err(Error::domain("B must be at least 1"));
    }
    tree.check_vertex(root)?;
    let weights: Vec<i64> = tree
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| integer_weight(e.len, i))
        .collect::<Result<_>>()?;
    let n = tree.len();
    let (parent, order) = tree.bfs_from(root);
    let mut depth = vec![0i64; n];
    for &v in &order {
        for &(w, e) in tree.neighbors(v) {
            if parent[w] == Some(v) {
                depth[w] = depth[v] + weights[e];
            }
        }
    }
    let modulus = 2 * (b + 1);
    let mut component: [Vec<usize>; 2] = [vec![usize::MAX; n], vec![usize::MAX; n]];
    let mut diameters: [Vec<i64>; 2] = [Vec::new(), Vec::new()];
    for side in CutSide::BOTH {
        let offset = match side {
            CutSide::A => 0,
            CutSide::B => b + 1,
        };
        let kept: Vec<bool> = (0..n)
            .map(|v| match parent[v] {
                Some(p) => !crosses(depth[p], depth[v], modulus, offset),
                None => false,
            })
            .collect();
        // BFS order visits parents first, so a kept edge inherits the id.
        let comp = &mut component[side.slot()];
        let mut count = 0;
        for &v in &order {
            comp[v] = if kept[v] {
                comp[parent[v].unwrap()]
            } else {
                count += 1;
                count - 1
            };
        }
        // Diameter per component by two farthest-point sweeps.
        let far = |start: usize, comp: &[usize]| -> (usize, i64) {
            let mut best = (start, 0);
            let mut stack = vec![(start, usize::MAX, 0i64)];
            while let Some((x, from, d)) = stack.pop() {
                if d > best.1 {
                    best = (x, d);
                }
                for &(y, e) in tree.neighbors(x) {
                    if y != from && comp[y] == comp[x] {
                        stack.push((y, x, d + weights[e]));
                    }
                }
            }
            best
        };
        let mut diam = vec![0i64; count];
        let mut seen = vec![false; count];
        for &v in &order {
            let c = comp[v];
            if !seen[c] {
                seen[c] = true;
                let (a, _) = far(v, comp);
                diam[c] = far(a, comp).1;
            }
        }
        diameters[side.slot()] = diam;
    }
    Ok(CutDecomposition {
        root,
        b,
        depth,
        parent,
        component,
        diameters,
    })
}

/// Largest number of cut components whose open cell (interior of the union
/// of closed unit cubes centred at the component's vertices) contains a
/// common point, sampled at every half-integer point of the bounding box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Multiplicity {
    pub max: usize,
    /// Sample attaining the maximum, in doubled coordinates.
    pub at: Vec<i64>,
    pub samples: u64,
}

pub fn cell_cover_multiplicity(parts: &[(&WeightedTree, &CutDecomposition)]) -> Result<Multiplicity> {
    let mut dim = None;
    let mut lookup: Vec<HashMap<Vec<i64>, usize>> = Vec::new();
    let mut lo: Vec<i64> = Vec::new();
    let mut hi: Vec<i64> = Vec::new();
    for (t, _) in parts {
        let mut map = HashMap::new();
        for (v, s) in t.sites().iter().enumerate() {
            let c = s
                .integer_coords()
                .ok_or_else(|| Error::domain("cell covers need integer vertices"))?;
            if *dim.get_or_insert(c.len()) != c.len() {
                return Err(Error::domain("trees of different dimensions"));
            }
            if lo.is_empty() {
                lo = c.clone();
                hi = c.clone();
            }
            for k in 0..c.len() {
                lo[k] = lo[k].min(c[k]);
                hi[k] = hi[k].max(c[k]);
            }
            map.insert(c, v);
        }
        lookup.push(map);
    }
    let Some(dim) = dim else {
        return Ok(Multiplicity {
            max: 0,
            at: Vec::new(),
            samples: 0,
        });
    };
    let lo2: Vec<i64> = lo.iter().map(|x| 2 * x - 1).collect();
    let hi2: Vec<i64> = hi.iter().map(|x| 2 * x + 1).collect();
    let mut best = Multiplicity {
        max: 0,
        at: lo2.clone(),
        samples: 0,
    };
    let mut s = lo2.clone();
    loop {
        best.samples += 1;
        // integer centres within L∞ distance ½ of the sample
        let mut centres: Vec<Vec<i64>> = vec![Vec::with_capacity(dim)];
        for &x in &s {
            let opts: Vec<i64> = if x % 2 == 0 { vec![x / 2] } else { vec![(x - 1) / 2, (x + 1) / 2] };
            centres = centres
                .into_iter()
                .flat_map(|c| {
                    opts.iter().map(move |&o| {
                        let mut c = c.clone();
                        c.push(o);
                        c
                    })
                })
                .collect();
        }
        let mut count = 0;
        for ((_, d), map) in parts.iter().zip(&lookup) {
            let verts: Option<Vec<usize>> = centres.iter().map(|c| map.get(c).copied()).collect();
            let Some(verts) = verts else { continue };
            for side in CutSide::BOTH {
                let comp = &d.component[side.slot()];
                if verts.iter().all(|&v| comp[v] == comp[verts[0]]) {
                    count += 1;
                }
            }
        }
        if count > best.max {
            best.max = count;
            best.at = s.clone();
        }
        // next sample in the box
        let mut k = 0;
        loop {
            if k == dim {
                return Ok(best);
            }
            s[k] += 1;
            if s[k] <= hi2[k] {
                break;
            }
            s[k] = lo2[k];
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Edge, ExactLength, GridPoint, Metric, Site};

    fn path(weights: &[i64]) -> WeightedTree {
        let edges = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| Edge {
                u: i,
                v: i + 1,
                len: ExactLength::new(w, 0).into(),
            })
            .collect();
        WeightedTree::abstract_tree(weights.len() + 1, edges, Some(0)).unwrap()
    }

    fn groups(d: &CutDecomposition, side: CutSide) -> Vec<Vec<usize>> {
        let mut g = vec![Vec::new(); d.components(side)];
        for (v, &c) in d.component[side.slot()].iter().enumerate() {
            g[c].push(v);
        }
        g
    }

    #[test]
    fn unit_path_of_ten() {
        let t = path(&[1; 9]);
        let d = cut_decomposition(&t, 0, 1).unwrap();
        assert_eq!(groups(&d, CutSide::A), vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![8, 9]]);
        assert_eq!(groups(&d, CutSide::B), vec![vec![0, 1], vec![2, 3, 4, 5], vec![6, 7, 8, 9]]);
        assert_eq!(d.check_short_pairs(&t), Ok(9));
        assert!(d.max_diameter(CutSide::A) <= d.diameter_bound());
    }

    #[test]
    fn long_edge_crosses_both_level_sets() {
        // interval (0, 2(B+1)] holds both a multiple of 2(B+1) and B+1
        let b = 3;
        let t = path(&[2 * (b + 1)]);
        let d = cut_decomposition(&t, 0, b).unwrap();
        assert_eq!(d.components(CutSide::A), 2);
        assert_eq!(d.components(CutSide::B), 2);
        let t = path(&[b]);
        let d = cut_decomposition(&t, 0, b).unwrap();
        assert_eq!(d.components(CutSide::A), 1);
        assert_eq!(d.components(CutSide::B), 1);
    }

    #[test]
    fn non_integer_weights_are_rejected() {
        let sites = vec![Site::Grid2(GridPoint::new(0, 0)), Site::Grid2(GridPoint::new(1, 1))];
        let e = Edge {
            u: 0,
            v: 1,
            len: ExactLength::SQRT2.into(),
        };
        let t = WeightedTree::new(Metric::Euclid2, sites, vec![e], Some(0)).unwrap();
        assert!(matches!(cut_decomposition(&t, 0, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn one_component_square_has_multiplicity_one() {
        let mut sites = Vec::new();
        let mut edges = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                sites.push(Site::Grid2(GridPoint::new(x, y)));
                let v = sites.len() - 1;
                if y > 0 {
                    edges.push(Edge { u: v - 1, v, len: Length::Real(1.0) });
                } else if x > 0 {
                    edges.push(Edge { u: v - 3, v, len: Length::Real(1.0) });
                }
            }
        }
        let t = WeightedTree::new(Metric::Linf2, sites, edges, Some(0)).unwrap();
        let d = cut_decomposition(&t, 0, 10).unwrap();
        assert_eq!(d.components(CutSide::A), 1);
        // both cuts keep everything: one set per partition
        let m = cell_cover_multiplicity(&[(&t, &d)]).unwrap();
        assert_eq!(m.max, 2);
        assert_eq!(m.samples, 49);
    }

    #[test]
    fn disjoint_components_never_share_a_sample() {
        let t = {
            let sites = (0..6).map(|i| Site::Grid2(GridPoint::new(i, 0))).collect();
            let edges = (0..5)
                .map(|i| Edge {
                    u: i,
                    v: i + 1,
                    len: Length::Real(1.0),
                })
                .collect();
            WeightedTree::new(Metric::Linf2, sites, edges, Some(0)).unwrap()
        };
        let d = cut_decomposition(&t, 0, 1).unwrap();
        // at x = 3.5 the cut-A cells of {0..3} and {4, 5} meet only on a face
        let m = cell_cover_multiplicity(&[(&t, &d)]).unwrap();
        assert_eq!(m.max, 2);
    }
}
