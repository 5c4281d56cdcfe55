//! Witnesses that a single spanning tree on evenly spaced points of the unit
//! circle has stretch at least `n/π`.
//!
//! A centroid `c` splits the tree into components that are packed into two
//! color classes of comparable size. Outside the arc of angular length
//! `2π/3` centred at `c` there is a consecutive pair with one point of each
//! color, whose tree path passes through `c`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DistanceIndex, Edge, Length, Metric, PlanePoint, Site, WeightedTree};

/// Smallest `n` for which [`one_tree_witness`] is offered.
pub const MIN_WITNESS_N: usize = 12;

/// `n` points at angles `2πj/n` on the unit circle and a spanning tree on
/// them with Euclidean edge lengths.
#[derive(Debug, Clone)]
pub struct CircleInstance {
    pub n: usize,
    pub points: Vec<PlanePoint>,
    pub tree: WeightedTree,
}

impl CircleInstance {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("a circle instance needs n >= 3, got {n}")));
        }
        let points: Vec<PlanePoint> = (0..n)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / n as f64;
                PlanePoint::new(t.cos(), t.sin())
            })
            .collect();
        let sites: Vec<Site> = points.iter().map(|&p| Site::Plane(p)).collect();
        let mut tree_edges = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::domain(format!("edge ({u},{v}) out of range")));
            }
            tree_edges.push(Edge {
                u,
                v,
                len: Length::Real(Metric::Euclid2.distance(&sites[u], &sites[v])),
            });
        }
        let tree = WeightedTree::new(Metric::Euclid2, sites, tree_edges, Some(0))?;
        Ok(CircleInstance { n, points, tree })
    }

    /// Star centred at point `center`.
    pub fn star(n: usize, center: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).filter(|&v| v != center).map(|v| (center, v)).collect();
        Self::new(n, &edges)
    }

    /// Path visiting the points in circle order.
    pub fn circle_path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::new(n, &edges)
    }

    /// Random recursive tree over a seeded random vertex order: every vertex
    /// attaches to a uniformly chosen earlier one.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let edges: Vec<_> = (1..n).map(|i| (order[rng.random_range(0..i)], order[i])).collect();
        Self::new(n, &edges)
    }

    /// Chord length between consecutive points, `2 sin(π/n)`.
    pub fn chord(&self) -> f64 {
        2.0 * (PI / self.n as f64).sin()
    }
}

/// Hop-count subtree sizes from a traversal rooted at vertex 0.
fn subtree_sizes(tree: &WeightedTree) -> (Vec<Option<usize>>, Vec<usize>) {
    let (parent, order) = tree.bfs_from(0);
    let mut size = vec![1usize; tree.len()];
    for &v in order.iter().rev() {
        if let Some(p) = parent[v] {
            size[p] += size[v];
        }
    }
    (parent, size)
}

/// Vertex minimising the largest component of `T − v`, smallest id on ties.
pub fn centroid(tree: &WeightedTree) -> usize {
    let n = tree.len();
    let (parent, size) = subtree_sizes(tree);
    let heaviest = |v: usize| {
        tree.neighbors(v)
            .iter()
            .map(|&(w, _)| if parent[v] == Some(w) { n - size[v] } else { size[w] })
            .max()
            .unwrap_or(0)
    };
    (0..n).min_by_key(|&v| (heaviest(v), v)).unwrap_or(0)
}

/// Vertex sets of the components of `T − c`.
fn components_without(tree: &WeightedTree, c: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; tree.len()];
    seen[c] = true;
    let mut comps = Vec::new();
    for &(start, _) in tree.neighbors(c) {
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            for &(w, _) in tree.neighbors(comp[i]) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Packs the components of `T − c` into two groups, largest component first,
/// each into the currently smaller group (red on ties). Both groups are
/// returned sorted; `c` belongs to neither.
pub fn two_color(tree: &WeightedTree, c: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = tree.len();
    if n <= 3 {
        return Err(Error::domain(format!("two-coloring needs more than 3 vertices, got {n}")));
    }
    tree.check_vertex(c)?;
    let mut comps = components_without(tree, c);
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let (mut red, mut blue) = (Vec::new(), Vec::new());
    for comp in comps {
        if red.len() <= blue.len() {
            red.extend(comp);
        } else {
            blue.extend(comp);
        }
    }
    red.sort_unstable();
    blue.sort_unstable();
    Ok((red, blue))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub n: usize,
    /// Red endpoint of the pair.
    pub r: usize,
    /// Blue endpoint of the pair, adjacent to `r` on the circle.
    pub b: usize,
    pub tree_distance: f64,
    pub euclidean: f64,
    pub ratio: f64,
    /// `n/π`, the guaranteed lower bound on `ratio`.
    pub bound: f64,
    pub centroid: usize,
    pub red: Vec<usize>,
    pub blue: Vec<usize>,
}

/// Whether point `j` lies on the closed arc of angular length `2π/3`
/// centred at point `c`.
pub fn in_arc(n: usize, c: usize, j: usize) -> bool {
    let k = (j + n - c) % n;
    let k = k.min(n - k);
    6 * k <= n
}

/// The consecutive red–blue pair outside the arc around the centroid with
/// the largest tree-to-Euclidean distance ratio (first in circle order on
/// ties).
pub fn one_tree_witness(inst: &CircleInstance) -> Result<Witness> {
    let n = inst.n;
    if n < MIN_WITNESS_N {
        return Err(Error::domain(format!("witnesses need n >= {MIN_WITNESS_N}, got {n}")));
    }
    let c = centroid(&inst.tree);
    let (red, blue) = two_color(&inst.tree, c)?;
    let mut color = vec![0u8; n];
    for &v in &red {
        color[v] = 1;
    }
    for &v in &blue {
        color[v] = 2;
    }
    let index = DistanceIndex::new(&inst.tree);
    let mut best: Option<(f64, usize, usize, f64, f64)> = None;
    for j in 0..n {
        let k = (j + 1) % n;
        if in_arc(n, c, j) || in_arc(n, c, k) || color[j] == color[k] || color[j] == 0 || color[k] == 0 {
            continue;
        }
        let (r, b) = if color[j] == 1 { (j, k) } else { (k, j) };
        let d = index.dist(r, b);
        let e = inst.points[r].dist(inst.points[b]);
        let ratio = d / e;
        if best.is_none_or(|x| ratio > x.0) {
            best = Some((ratio, r, b, d, e));
        }
    }
    let (ratio, r, b, tree_distance, euclidean) = best.ok_or_else(|| {
        Error::DegenerateInstance(format!(
            "no red-blue consecutive pair outside the arc around centroid {c}; red {red:?}, blue {blue:?}"
        ))
    })?;
    Ok(Witness {
        n,
        r,
        b,
        tree_distance,
        euclidean,
        ratio,
        bound: n as f64 / PI,
        centroid: c,
        red,
        blue,
    })
}

/// SVG drawing of the circle, the tree and the witness pair.
pub fn render_witness_svg(inst: &CircleInstance, w: &Witness) -> String {
    const R: f64 = 200.0;
    const PAD: f64 = 20.0;
    let map = |p: PlanePoint| (PAD + R + R * p.x, PAD + R - R * p.y);
    let size = 2.0 * (R + PAD);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        s,
        r#"<circle cx="{c}" cy="{c}" r="{R}" fill="none" stroke="lightgray"/>"#,
        c = PAD + R
    );
    let _ = writeln!(s, r#"<g stroke="gray" stroke-width="1">"#);
    for e in inst.tree.edges() {
        let (x1, y1) = map(inst.points[e.u]);
        let (x2, y2) = map(inst.points[e.v]);
        let _ = writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let fill = |v: usize| {
        if v == w.centroid {
            "black"
        } else if w.red.binary_search(&v).is_ok() {
            "red"
        } else {
            "blue"
        }
    };
    for (v, &p) in inst.points.iter().enumerate() {
        let (x, y) = map(p);
        let r = if v == w.r || v == w.b { 6 } else { 3 };
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{r}" fill="{}"/>"#, fill(v));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hop_tree(n: usize, edges: &[(usize, usize)]) -> WeightedTree {
        let edges = edges
            .iter()
            .map(|&(u, v)| Edge {
                u,
                v,
                len: Length::Real(1.0),
            })
            .collect();
        WeightedTree::abstract_tree(n, edges, Some(0)).unwrap()
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(centroid(&hop_tree(3, &[(0, 1), (1, 2)])), 1);
        assert_eq!(centroid(&hop_tree(5, &[(3, 0), (3, 1), (3, 2), (3, 4)])), 3);
        let binary = hop_tree(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]);
        assert_eq!(centroid(&binary), 0);
    }

    #[test]
    fn two_color_examples() {
        let star = CircleInstance::star(7, 0).unwrap();
        let (r, b) = two_color(&star.tree, 0).unwrap();
        assert_eq!((r.len(), b.len()), (3, 3));

        let path = CircleInstance::circle_path(9).unwrap();
        assert_eq!(centroid(&path.tree), 4);
        let (r, b) = two_color(&path.tree, 4).unwrap();
        assert_eq!(r, vec![0, 1, 2, 3]);
        assert_eq!(b, vec![5, 6, 7, 8]);

        assert!(two_color(&CircleInstance::circle_path(3).unwrap().tree, 1).is_err());
    }

    #[test]
    fn arc_is_closed() {
        // n = 12: the arc reaches two steps either side of the centre.
        let inside: Vec<usize> = (0..12).filter(|&j| in_arc(12, 0, j)).collect();
        assert_eq!(inside, vec![0, 1, 2, 10, 11]);
    }

    #[test]
    fn small_instances_are_rejected() {
        assert!(CircleInstance::star(2, 0).is_err());
        let inst = CircleInstance::star(11, 0).unwrap();
        assert!(matches!(one_tree_witness(&inst), Err(Error::Domain(_))));
    }

    #[test]
    fn svg_marks_the_pair() {
        let inst = CircleInstance::circle_path(30).unwrap();
        let w = one_tree_witness(&inst).unwrap();
        let svg = render_witness_svg(&inst, &w);
        assert_eq!(svg.matches("<line").count(), 29);
        assert_eq!(svg.matches(r#"r="6""#).count(), 2);
    }
}
