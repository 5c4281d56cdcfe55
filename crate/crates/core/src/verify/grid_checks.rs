//! Exhaustive checks on a materialized construction.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{cover_stretch, CheckParams, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::grid::{Color, Construction, TreeKind, Triangle};
use crate::model::{DistanceIndex, ExactLength, GridPoint, Length, PlanePoint, Sampling, StretchReport};

/// Checks that the red and blue vertex sets partition the triangular grid.
pub fn check_partition(c: &Construction) -> std::result::Result<(), String> {
    let red: BTreeSet<GridPoint> = c.tree(TreeKind::Red).sites().iter().filter_map(|s| s.grid2()).collect();
    let blue: BTreeSet<GridPoint> = c.tree(TreeKind::Blue).sites().iter().filter_map(|s| s.grid2()).collect();
    if let Some(p) = red.intersection(&blue).next() {
        return Err(format!("{p} is both red and blue"));
    }
    let all: BTreeSet<GridPoint> = c.points().iter().copied().collect();
    let union: BTreeSet<GridPoint> = red.union(&blue).copied().collect();
    if union != all {
        let missing = all.difference(&union).next();
        let extra = union.difference(&all).next();
        return Err(format!("uncolored {missing:?}, outside the grid {extra:?}"));
    }
    Ok(())
}

/// Checks that red edges are unit axis steps and blue edges unit diagonal
/// steps of exact length 1 and √2.
pub fn check_edge_discipline(c: &Construction) -> std::result::Result<(), String> {
    for (kind, want) in [(TreeKind::Red, ExactLength::ONE), (TreeKind::Blue, ExactLength::SQRT2)] {
        let t = c.tree(kind);
        for e in t.edges() {
            let (a, b) = (t.site(e.u).grid2().unwrap(), t.site(e.v).grid2().unwrap());
            let d = b - a;
            let shape_ok = match kind {
                TreeKind::Red => d.x.abs() + d.y.abs() == 1,
                _ => d.x.abs() == 1 && d.y.abs() == 1,
            };
            if !shape_ok || e.len != Length::Exact(want) {
                return Err(format!("{kind:?} edge {a}-{b} has length {}", e.len));
            }
        }
    }
    Ok(())
}

/// Largest distance from a point of the square `{0..side}²` to its nearest
/// red leaf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoveringRadius {
    pub max_dist2: i64,
    pub point: GridPoint,
    pub leaf: GridPoint,
}

impl CoveringRadius {
    pub fn radius(&self) -> f64 {
        (self.max_dist2 as f64).sqrt()
    }
}

pub fn covering_radius(c: &Construction, side: i64) -> Result<CoveringRadius> {
    if side < 0 || 2 * side >= c.n() {
        return Err(Error::domain(format!(
            "square side {side} must be below half the grid side {}",
            c.n()
        )));
    }
    let mut best = CoveringRadius {
        max_dist2: -1,
        point: GridPoint::new(0, 0),
        leaf: GridPoint::new(0, 0),
    };
    for x in 0..=side {
        for y in 0..=side {
            let z = GridPoint::new(x, y);
            let (leaf, _) = c.nearest_leaf(z)?;
            let d2 = leaf.dist2(z);
            if d2 > best.max_dist2 {
                best = CoveringRadius {
                    max_dist2: d2,
                    point: z,
                    leaf,
                };
            }
        }
    }
    Ok(best)
}

/// Both parts of the leaf-cover guarantee: the stretch of `{R, B′}` on the
/// red leaves with additive slack 12 against the bound 5, and the covering
/// radius of the leaves over the embedded square against the bound 3.
#[derive(Debug, Clone, Serialize)]
pub struct Theorem2Report {
    pub excess: StretchReport,
    pub covering: CoveringRadius,
    pub pass: bool,
}

pub const THEOREM2_MULTIPLICATIVE: f64 = 5.0;
pub const THEOREM2_ADDITIVE: f64 = 12.0;
pub const THEOREM2_RADIUS2: i64 = 9;

pub fn verify_theorem2(c: &Construction, side: i64, params: &CheckParams) -> Result<Theorem2Report> {
    let covering = covering_radius(c, side)?;
    let cover = c.main_cover();
    let ids: Vec<usize> = c
        .leaves(Color::Red)
        .iter()
        .map(|&l| c.point_id(l))
        .collect::<Result<_>>()?;
    let params = CheckParams {
        bound: Some(THEOREM2_MULTIPLICATIVE),
        additive_slack: THEOREM2_ADDITIVE,
        ..params.clone()
    };
    let excess = cover_stretch(&cover, &ids, &params)?;
    let pass = excess.pass() && covering.max_dist2 <= THEOREM2_RADIUS2;
    Ok(Theorem2Report {
        excess,
        covering,
        pass,
    })
}

fn color_tree(color: Color) -> TreeKind {
    match color {
        Color::Red => TreeKind::Red,
        Color::Blue => TreeKind::Blue,
    }
}

/// Tree distance from hypotenuse endpoints of the hypotenuse color to the
/// points of that color inside every triangle, against the bound `2√2`.
/// The argmax holds the ids of `(x, u)`.
pub fn verify_lemma_interior(c: &Construction, parallel: bool) -> StretchReport {
    let idx = [
        DistanceIndex::new(c.tree(TreeKind::Red)),
        DistanceIndex::new(c.tree(TreeKind::Blue)),
    ];
    let per_triangle = |tri: &Triangle| {
        let mut r = StretchReport::empty(0.0, Sampling::Exhaustive);
        let chi = tri.hypotenuse_color();
        let kind = color_tree(chi);
        let ix = &idx[(kind == TreeKind::Blue) as usize];
        let members: Vec<(GridPoint, usize)> = tri
            .lattice_points()
            .into_iter()
            .filter_map(|p| c.vertex(kind, p).map(|v| (p, v)))
            .collect();
        for u in [tri.a, tri.b] {
            let Some(uv) = c.vertex(kind, u) else { continue };
            let uid = c.point_id(u).unwrap();
            for &(x, xv) in &members {
                if x == u {
                    continue;
                }
                r.observe(ix.dist(xv, uv) / x.dist(u), (c.point_id(x).unwrap(), uid));
            }
        }
        r
    };
    let tris: Vec<&Triangle> = c.triangles().collect();
    let empty = || StretchReport::empty(0.0, Sampling::Exhaustive);
    let r = if parallel {
        tris.par_iter().map(|t| per_triangle(t)).reduce(empty, StretchReport::merge)
    } else {
        tris.iter().map(|t| per_triangle(t)).fold(empty(), StretchReport::merge)
    };
    r.with_bound(2.0 * std::f64::consts::SQRT_2, DEFAULT_TOLERANCE)
}

/// Worst case of [`verify_lemma_cathetus`].
#[derive(Debug, Clone, Serialize)]
pub struct CathetusReport {
    pub report: StretchReport,
    pub x: Option<GridPoint>,
    pub y: Option<PlanePoint>,
    pub triangle: Option<Triangle>,
}

/// Tree distance from the points of the catheti color inside every
/// triangle to points `y` on cathetus edges of that color's tree, sampled at
/// every `1/subdivisions` of each edge, against the bound 5. The distance to
/// `y` goes through the nearer endpoint of its edge.
pub fn verify_lemma_cathetus(c: &Construction, subdivisions: u32, parallel: bool) -> Result<CathetusReport> {
    if subdivisions < 1 {
        return Err(Error::domain("subdivisions must be at least 1"));
    }
    let idx = [
        DistanceIndex::new(c.tree(TreeKind::Red)),
        DistanceIndex::new(c.tree(TreeKind::Blue)),
    ];
    let s = subdivisions as i64;
    type Worst = (StretchReport, Option<(GridPoint, PlanePoint, Triangle)>);
    let per_triangle = |tri: &Triangle| -> Worst {
        let mut r = StretchReport::empty(0.0, Sampling::Exhaustive);
        let mut worst = None;
        let chi = tri.cathetus_color();
        let kind = color_tree(chi);
        let tree = c.tree(kind);
        let ix = &idx[(kind == TreeKind::Blue) as usize];
        let members: Vec<(GridPoint, usize)> = tri
            .lattice_points()
            .into_iter()
            .filter_map(|p| c.vertex(kind, p).map(|v| (p, v)))
            .collect();
        for leg in tri.catheti() {
            for pair in leg.windows(2) {
                let (p, q) = (pair[0], pair[1]);
                let (Some(pv), Some(qv)) = (c.vertex(kind, p), c.vertex(kind, q)) else { continue };
                if !tree.neighbors(pv).iter().any(|&(w, _)| w == qv) {
                    continue;
                }
                let step = p.dist(q);
                for k in 0..=s {
                    let t = k as f64 / s as f64;
                    let y = PlanePoint::new(
                        p.x as f64 + t * (q.x - p.x) as f64,
                        p.y as f64 + t * (q.y - p.y) as f64,
                    );
                    for &(x, xv) in &members {
                        let e = x.to_plane().dist(y);
                        if e == 0.0 {
                            continue;
                        }
                        let d = (ix.dist(xv, pv) + t * step).min(ix.dist(xv, qv) + (1.0 - t) * step);
                        let ratio = d / e;
                        let before = r.max_ratio;
                        r.observe(ratio, (c.point_id(x).unwrap(), c.point_id(if t <= 0.5 { p } else { q }).unwrap()));
                        if r.max_ratio > before || worst.is_none() {
                            worst = Some((x, y, *tri));
                        }
                    }
                }
            }
        }
        (r, worst)
    };
    let merge = |a: Worst, b: Worst| -> Worst {
        let take_b = b.0.argmax.is_some() && (a.0.argmax.is_none() || b.0.max_ratio > a.0.max_ratio);
        let w = if take_b { b.1 } else { a.1 };
        (a.0.merge(b.0), w)
    };
    let tris: Vec<&Triangle> = c.triangles().collect();
    let empty = || (StretchReport::empty(0.0, Sampling::Exhaustive), None);
    let (r, w) = if parallel {
        tris.par_iter().map(|t| per_triangle(t)).reduce(empty, merge)
    } else {
        tris.iter().map(|t| per_triangle(t)).fold(empty(), merge)
    };
    Ok(CathetusReport {
        report: r.with_bound(5.0, DEFAULT_TOLERANCE),
        x: w.map(|w| w.0),
        y: w.map(|w| w.1),
        triangle: w.map(|w| w.2),
    })
}
