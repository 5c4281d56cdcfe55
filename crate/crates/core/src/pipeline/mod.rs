//! Two-tree cover of an arbitrary planar point set.
//!
//! The points are scaled until every pair is at least `D` apart and placed
//! inside the triangular grid; each point is joined to its nearest red leaf,
//! which gives two Steiner trees (the red tree and the blue tree extended by
//! the red leaves). Steiner points are then removed and the remaining edges
//! reweighted by their Euclidean lengths.

pub mod spr;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::sparse::spanning_subtree;
use crate::grid::{Color, Subdivision, MAX_IMPLICIT_M};
use crate::model::{
    Edge, ExactLength, GridPoint, IndexedCover, Length, Metric, PlanePoint, Site, StretchReport, TreeCover,
    WeightedTree,
};
use crate::verify::{cover_stretch, CheckParams};

pub use spr::{steiner_point_removal, terminal_cells};

/// Default minimum pairwise distance after scaling.
pub const DEFAULT_D: f64 = 1024.0;

/// Smallest admissible `D`; it keeps the snap leaves of distinct points
/// distinct, since every point is within 4 of its leaf.
pub const MIN_D: f64 = 16.0;

/// Largest distance from a grid-frame point to the red leaf it is joined to.
pub const SNAP_RADIUS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizeParams {
    #[serde(rename = "D")]
    pub d: f64,
}

impl Default for NormalizeParams {
    fn default() -> Self {
        NormalizeParams { d: DEFAULT_D }
    }
}

/// Similarity `p ↦ scale·p + (dx, dy)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub scale: f64,
    pub dx: f64,
    pub dy: f64,
}

impl Transform {
    pub const IDENTITY: Transform = Transform {
        scale: 1.0,
        dx: 0.0,
        dy: 0.0,
    };

    pub fn apply(&self, p: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.scale * p.x + self.dx, self.scale * p.y + self.dy)
    }

    pub fn invert(&self, p: PlanePoint) -> PlanePoint {
        PlanePoint::new((p.x - self.dx) / self.scale, (p.y - self.dy) / self.scale)
    }
}

/// Points placed in the grid frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub points: Vec<PlanePoint>,
    pub transform: Transform,
    /// Ceiling of the largest frame coordinate.
    pub n_box: i64,
    pub m: u32,
}

/// Smallest pairwise distance and a pair attaining it (plane sweep by x).
pub fn closest_pair(points: &[PlanePoint]) -> Option<(f64, usize, usize)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].x.total_cmp(&points[b].x).then(points[a].y.total_cmp(&points[b].y)));
    let mut best: Option<(f64, usize, usize)> = None;
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if best.is_some_and(|(d, _, _)| points[j].x - points[i].x > d) {
                break;
            }
            let d = points[i].dist(points[j]);
            if best.is_none_or(|(bd, _, _)| d < bd) {
                best = Some((d, i.min(j), i.max(j)));
            }
        }
    }
    best
}

/// Scales and translates `points` into the grid frame.
///
/// The scale is `max(1, D / min distance)`; an axis is shifted only when a
/// scaled coordinate is negative, so inputs that already satisfy the frame
/// constraints keep the identity transform. `m` is the least value with
/// `2^m > 2·n_box`.
pub fn normalize(points: &[PlanePoint], params: &NormalizeParams) -> Result<Normalized> {
    if !(params.d >= MIN_D) || !params.d.is_finite() {
        return Err(Error::domain(format!("D must be a finite value of at least {MIN_D}")));
    }
    if points.len() < 2 {
        return Err(Error::domain("at least two points are required"));
    }
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(Error::domain(format!("non-finite point {p:?}")));
    }
    let (min_dist, i, j) = closest_pair(points).expect("two or more points");
    if min_dist == 0.0 {
        return Err(Error::domain(format!("points {i} and {j} coincide")));
    }
    let scale = (params.d / min_dist).max(1.0);
    let min_x = points.iter().map(|p| p.x).fold(f64::INFINITY, f64::min) * scale;
    let min_y = points.iter().map(|p| p.y).fold(f64::INFINITY, f64::min) * scale;
    let transform = Transform {
        scale,
        dx: if min_x < 0.0 { -min_x } else { 0.0 },
        dy: if min_y < 0.0 { -min_y } else { 0.0 },
    };
    let framed: Vec<PlanePoint> = points
        .iter()
        .map(|&p| {
            let q = transform.apply(p);
            // clamp rounding noise at the lower edge
            PlanePoint::new(q.x.max(0.0), q.y.max(0.0))
        })
        .collect();
    let max_coord = framed.iter().map(|p| p.x.max(p.y)).fold(0.0, f64::max);
    let n_box = (max_coord.ceil() as i64).max(1);
    let mut m = 1u32;
    while (1i64 << m) <= 2 * n_box {
        m += 1;
        if m > MAX_IMPLICIT_M {
            return Err(Error::Sizing(format!(
                "the scaled point set needs a grid of side above 2^{MAX_IMPLICIT_M}"
            )));
        }
    }
    Ok(Normalized {
        points: framed,
        transform,
        n_box,
        m,
    })
}

/// Red leaf closest to a frame point within [`SNAP_RADIUS`], ties broken
/// lexicographically.
pub fn snap_leaf(sub: &Subdivision, p: PlanePoint) -> Result<(GridPoint, f64)> {
    let r = SNAP_RADIUS as i64;
    let (cx, cy) = (p.x.floor() as i64, p.y.floor() as i64);
    let mut best: Option<(f64, GridPoint)> = None;
    for x in cx - r..=cx + r + 1 {
        for y in cy - r..=cy + r + 1 {
            let q = GridPoint::new(x, y);
            let d = q.to_plane().dist(p);
            if d > SNAP_RADIUS || !sub.contains(q) {
                continue;
            }
            if best.is_some_and(|(bd, bq)| (bd, bq) <= (d, q)) {
                continue;
            }
            if sub.is_leaf(q, Color::Red)? {
                best = Some((d, q));
            }
        }
    }
    best.map(|(d, q)| (q, d))
        .ok_or_else(|| Error::domain(format!("no red leaf within {SNAP_RADIUS} of {p:?}")))
}

/// The trees `T1′` (red tree plus snap edges) and `T2′` (blue tree plus the
/// partner edges of the snap leaves plus snap edges), restricted to the
/// minimal subtrees spanning the input points.
#[derive(Debug, Clone)]
pub struct SteinerCover {
    pub m: u32,
    pub transform: Transform,
    /// Input points in input coordinates.
    pub input: Vec<PlanePoint>,
    /// Input points in the grid frame.
    pub points: Vec<PlanePoint>,
    /// Red leaf each point is joined to, and the join length.
    pub snap: Vec<(GridPoint, f64)>,
    pub trees: [WeightedTree; 2],
    /// `terminals[t][i]` is the vertex of point `i` in tree `t`.
    pub terminals: [Vec<usize>; 2],
}

impl SteinerCover {
    pub fn cover(&self) -> TreeCover {
        let points = (0..self.points.len())
            .map(|i| (i, vec![Some(self.terminals[0][i]), Some(self.terminals[1][i])]))
            .collect();
        TreeCover::new(self.trees.to_vec(), points).expect("terminal maps are in range")
    }
}

fn attach_points(
    base: &WeightedTree,
    leaf_vertex: impl Fn(GridPoint) -> usize,
    points: &[PlanePoint],
    snap: &[(GridPoint, f64)],
) -> Result<(WeightedTree, Vec<usize>)> {
    let mut sites = base.sites().to_vec();
    let mut edges = base.edges().to_vec();
    let mut terminals = Vec::with_capacity(points.len());
    for (p, &(leaf, d)) in points.iter().zip(snap) {
        let lv = leaf_vertex(leaf);
        if d == 0.0 {
            terminals.push(lv);
            continue;
        }
        terminals.push(sites.len());
        edges.push(Edge {
            u: lv,
            v: sites.len(),
            len: Length::Real(d),
        });
        sites.push(Site::Plane(*p));
    }
    let root = terminals[0];
    Ok((WeightedTree::new(Metric::Euclid2, sites, edges, Some(root))?, terminals))
}

/// Steiner cover of points already placed in the frame of the grid of side
/// `2^m`. No spacing between the points is required.
pub fn steiner_cover_in_frame(points: &[PlanePoint], m: u32, transform: Transform) -> Result<SteinerCover> {
    if points.is_empty() {
        return Err(Error::domain("no points"));
    }
    let sub = Subdivision::new(m)?;
    let snap: Vec<(GridPoint, f64)> = points.iter().map(|&p| snap_leaf(&sub, p)).collect::<Result<_>>()?;
    let leaves: Vec<GridPoint> = snap.iter().map(|s| s.0).collect();

    let red = spanning_subtree(&sub, Color::Red, &leaves)?;
    let (t1, term1) = attach_points(&red.tree, |l| red.vertex[&l], points, &snap)?;

    // B′ restricted: partners of the distinct snap leaves, then the leaves.
    let mut distinct = leaves.clone();
    distinct.sort();
    distinct.dedup();
    let partners: Vec<GridPoint> = leaves.iter().map(|&l| sub.red_partner(l)).collect::<Result<_>>()?;
    let blue = spanning_subtree(&sub, Color::Blue, &partners)?;
    let mut sites = blue.tree.sites().to_vec();
    let mut edges = blue.tree.edges().to_vec();
    let mut leaf_vertex = BTreeMap::new();
    for &l in &distinct {
        let x = sub.red_partner(l)?;
        leaf_vertex.insert(l, sites.len());
        edges.push(Edge {
            u: blue.vertex[&x],
            v: sites.len(),
            len: ExactLength::ONE.into(),
        });
        sites.push(Site::Grid2(l));
    }
    let blue_prime = WeightedTree::new(Metric::Euclid2, sites, edges, blue.tree.root())?;
    let (t2, term2) = attach_points(&blue_prime, |l| leaf_vertex[&l], points, &snap)?;

    Ok(SteinerCover {
        m,
        transform,
        input: points.iter().map(|&p| transform.invert(p)).collect(),
        points: points.to_vec(),
        snap,
        trees: [t1, t2],
        terminals: [term1, term2],
    })
}

/// Normalizes `points` and builds their Steiner cover.
pub fn steiner_cover(points: &[PlanePoint], params: &NormalizeParams) -> Result<SteinerCover> {
    let norm = normalize(points, params)?;
    let mut sc = steiner_cover_in_frame(&norm.points, norm.m, norm.transform)?;
    sc.input = points.to_vec();
    Ok(sc)
}

/// Non-Steiner two-tree cover on the input points, in input coordinates.
#[derive(Debug, Clone)]
pub struct FinalCover {
    pub m: u32,
    pub transform: Transform,
    /// Vertex `i` of both trees is input point `i`.
    pub trees: [WeightedTree; 2],
    /// The trees before Euclidean reweighting, in the grid frame, with edge
    /// weights equal to Steiner tree distances.
    pub contracted: [WeightedTree; 2],
}

impl FinalCover {
    pub fn cover(&self) -> TreeCover {
        TreeCover::on_shared_vertices(self.trees.to_vec()).expect("both trees span the same points")
    }
}

/// Removes the Steiner points of both trees and reweights every remaining
/// edge by the Euclidean distance of its endpoints in input coordinates.
pub fn finalize_cover(sc: &SteinerCover) -> Result<FinalCover> {
    let mut trees = Vec::with_capacity(2);
    let mut contracted = Vec::with_capacity(2);
    for t in 0..2 {
        let out = steiner_point_removal(&sc.trees[t], &sc.terminals[t])?;
        let sites: Vec<Site> = sc.input.iter().map(|&p| Site::Plane(p)).collect();
        let edges = out
            .edges()
            .iter()
            .map(|e| Edge {
                len: Length::Real(Metric::Euclid2.distance(&sites[e.u], &sites[e.v])),
                ..*e
            })
            .collect();
        trees.push(WeightedTree::new(Metric::Euclid2, sites, edges, Some(0))?);
        contracted.push(out);
    }
    let [t1, t2]: [WeightedTree; 2] = trees.try_into().expect("two trees");
    let [c1, c2]: [WeightedTree; 2] = contracted.try_into().expect("two trees");
    Ok(FinalCover {
        m: sc.m,
        transform: sc.transform,
        trees: [t1, t2],
        contracted: [c1, c2],
    })
}

/// Everything the end-to-end run produces.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub steiner: SteinerCover,
    pub final_cover: FinalCover,
    pub report: StretchReport,
}

impl PipelineRun {
    pub fn document(&self) -> PipelineDoc {
        let cover = self.final_cover.cover();
        PipelineDoc {
            trees: cover.trees,
            points: cover.points,
            transform: self.final_cover.transform,
            m: self.final_cover.m,
            measured_stretch: self.report.max_ratio,
        }
    }
}

/// JSON form of the final cover.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineDoc {
    pub trees: Vec<WeightedTree>,
    pub points: BTreeMap<usize, Vec<Option<usize>>>,
    pub transform: Transform,
    pub m: u32,
    pub measured_stretch: f64,
}

/// Normalize, build the Steiner cover, remove Steiner points and measure
/// the stretch of the result over all pairs.
pub fn run_pipeline(points: &[PlanePoint], params: &NormalizeParams, check: &CheckParams) -> Result<PipelineRun> {
    let steiner = steiner_cover(points, params)?;
    let final_cover = finalize_cover(&steiner)?;
    let indexed = IndexedCover::new(final_cover.cover());
    let ids: Vec<usize> = (0..points.len()).collect();
    let report = cover_stretch(&indexed, &ids, check)?;
    Ok(PipelineRun {
        steiner,
        final_cover,
        report,
    })
}
