//! Point location in the subdivision without materializing it.
//!
//! Every colored point of the triangular grid is owned by exactly one
//! segment: one of the three initial segments, or the height segment
//! `[v, w)` added inside some triangle. The owner is found by walking down
//! the triangle hierarchy, which costs O(m) per query and works for any
//! grid size whose coordinates fit in `i64`.

use serde::{Deserialize, Serialize};

use super::triangle::{Color, Triangle};
use crate::error::{Error, Result};
use crate::model::GridPoint;

/// Largest `m` accepted by the implicit engine.
pub const MAX_IMPLICIT_M: u32 = 30;

/// A straight chain of tree edges.
///
/// Owned points run from `v` towards `w` in unit `step`s. A non-root chain
/// owns `v` up to but excluding `w`, where it attaches to a lower-order
/// chain; a root chain owns `w` too. `corner` is the lattice point one step
/// before `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "SegmentDoc")]
pub struct SegmentRecord {
    pub v: GridPoint,
    pub w: GridPoint,
    pub order: u32,
    pub color: Color,
    pub creation: u64,
    #[serde(skip)]
    pub step: GridPoint,
    #[serde(skip)]
    pub corner: GridPoint,
    #[serde(skip)]
    pub root: bool,
}

#[derive(Deserialize)]
struct SegmentDoc {
    v: GridPoint,
    w: GridPoint,
    order: u32,
    color: Color,
    #[serde(default)]
    creation: u64,
}

impl From<SegmentDoc> for SegmentRecord {
    fn from(d: SegmentDoc) -> Self {
        let diff = d.w - d.v;
        let step = GridPoint::new(diff.x.signum(), diff.y.signum());
        SegmentRecord {
            v: d.v,
            w: d.w,
            order: d.order,
            color: d.color,
            creation: d.creation,
            step,
            corner: d.v - step,
            root: d.creation == 0 || d.creation == 1,
        }
    }
}

impl SegmentRecord {
    /// Number of unit steps from `v` to `w`.
    pub fn steps(&self) -> i64 {
        let d = self.w - self.v;
        d.x.abs().max(d.y.abs())
    }

    /// Position of `p` along the chain (0 at `v`), if `p` is on the closed
    /// segment.
    pub fn position(&self, p: GridPoint) -> Option<i64> {
        let d = p - self.v;
        let j = d.x.abs().max(d.y.abs());
        if d == GridPoint::new(self.step.x * j, self.step.y * j) && j <= self.steps() {
            Some(j)
        } else {
            None
        }
    }

    pub fn owns(&self, p: GridPoint) -> bool {
        match self.position(p) {
            Some(j) => j < self.steps() || self.root,
            None => false,
        }
    }

    pub fn point_at(&self, j: i64) -> GridPoint {
        self.v + GridPoint::new(self.step.x * j, self.step.y * j)
    }

    /// Owned points in chain order.
    pub fn owned_points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        let last = if self.root { self.steps() } else { self.steps() - 1 };
        (0..=last).map(move |j| self.point_at(j))
    }

    /// Key used to rank segments: lower order first, then blue before red,
    /// then creation index.
    pub fn rank(&self) -> (u32, Color, u64) {
        (self.order, self.color, self.creation)
    }

    /// Euclidean distance from `p` to the closed segment `[v, w]`.
    pub fn distance_to(&self, p: GridPoint) -> f64 {
        let (vx, vy) = (self.v.x as f64, self.v.y as f64);
        let (dx, dy) = ((self.w.x - self.v.x) as f64, (self.w.y - self.v.y) as f64);
        let (px, py) = (p.x as f64 - vx, p.y as f64 - vy);
        let len2 = dx * dx + dy * dy;
        let t = ((px * dx + py * dy) / len2).clamp(0.0, 1.0);
        (px - t * dx).hypot(py - t * dy)
    }
}

/// Creation index of the height segment of the triangle at `pos` within
/// level `level` (three initial segments come first).
pub fn creation_index(level: u32, pos: u64) -> u64 {
    3 + ((1u64 << (level - 1)) - 1) + pos
}

/// The three segments laid down before any refinement step.
pub fn initial_segments(n: i64) -> [SegmentRecord; 3] {
    let hyp_step = GridPoint::new(1, -1);
    let x_step = GridPoint::new(-1, 0);
    let y_step = GridPoint::new(0, -1);
    [
        SegmentRecord {
            v: GridPoint::new(0, n),
            w: GridPoint::new(n, 0),
            order: 0,
            color: Color::Blue,
            creation: 0,
            step: hyp_step,
            corner: GridPoint::new(0, n) - hyp_step,
            root: true,
        },
        SegmentRecord {
            v: GridPoint::new(n - 1, 0),
            w: GridPoint::new(0, 0),
            order: 1,
            color: Color::Red,
            creation: 1,
            step: x_step,
            corner: GridPoint::new(n, 0),
            root: true,
        },
        SegmentRecord {
            v: GridPoint::new(0, n - 1),
            w: GridPoint::new(0, 0),
            order: 1,
            color: Color::Red,
            creation: 2,
            step: y_step,
            corner: GridPoint::new(0, n),
            root: false,
        },
    ]
}

/// Height segment `[v, w]` of `tri`, which sits at `pos` within its level.
pub fn height_segment(tri: &Triangle, pos: u64) -> SegmentRecord {
    let (step, _) = tri.height_steps();
    SegmentRecord {
        v: tri.right + step,
        w: tri.foot(),
        order: tri.level,
        color: tri.hypotenuse_color(),
        creation: creation_index(tri.level, pos),
        step,
        corner: tri.right,
        root: false,
    }
}

/// Implicit view of the construction for `n = 2^m`.
#[derive(Debug, Clone, Copy)]
pub struct Subdivision {
    m: u32,
    n: i64,
}

/// A triangle of the hierarchy together with its position within its level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placed {
    pub tri: Triangle,
    pub pos: u64,
}

impl Subdivision {
    pub fn new(m: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::domain("m must be at least 1"));
        }
        if m > MAX_IMPLICIT_M {
            return Err(Error::Sizing(format!(
                "m = {m} exceeds the supported maximum {MAX_IMPLICIT_M}"
            )));
        }
        Ok(Subdivision { m, n: 1i64 << m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// Number of refinement steps, 2(m-1).
    pub fn steps(&self) -> u32 {
        2 * (self.m - 1)
    }

    /// Level of the atomic triangles, 2m-1.
    pub fn atomic_level(&self) -> u32 {
        2 * self.m - 1
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        p.x >= 0 && p.y >= 0 && p.x + p.y <= self.n
    }

    fn check(&self, p: GridPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{p} is outside the triangular grid of side {}",
                self.n
            )))
        }
    }

    /// The segment owning `p`.
    pub fn owner(&self, p: GridPoint) -> Result<SegmentRecord> {
        self.check(p)?;
        let init = initial_segments(self.n);
        if let Some(s) = init.iter().find(|s| s.owns(p)) {
            return Ok(*s);
        }
        let mut placed = Placed {
            tri: Triangle::root(self.n),
            pos: 0,
        };
        for _ in 1..=self.steps() {
            let seg = height_segment(&placed.tri, placed.pos);
            if seg.owns(p) {
                return Ok(seg);
            }
            let c = placed.tri.child_index(p);
            placed = Placed {
                tri: placed.tri.split()[c],
                pos: 2 * placed.pos + c as u64,
            };
        }
        Err(Error::domain(format!("{p} is not covered by any segment")))
    }

    pub fn color_of(&self, p: GridPoint) -> Result<Color> {
        Ok(self.owner(p)?.color)
    }

    /// Every triangle of the hierarchy (all levels) whose closure holds `p`.
    pub fn triangles_containing(&self, p: GridPoint) -> Result<Vec<Placed>> {
        self.check(p)?;
        let mut out = Vec::new();
        let mut frontier = vec![Placed {
            tri: Triangle::root(self.n),
            pos: 0,
        }];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for pl in frontier {
                if pl.tri.level < self.atomic_level() {
                    for (c, child) in pl.tri.split().into_iter().enumerate() {
                        if child.contains(p) {
                            next.push(Placed {
                                tri: child,
                                pos: 2 * pl.pos + c as u64,
                            });
                        }
                    }
                }
                out.push(pl);
            }
            frontier = next;
        }
        Ok(out)
    }

    /// Segments whose attachment point `w` is `p` (excluding `p`'s own chain).
    pub fn attached_at(&self, p: GridPoint) -> Result<Vec<SegmentRecord>> {
        let mut out: Vec<SegmentRecord> = initial_segments(self.n)
            .into_iter()
            .filter(|s| !s.root && s.w == p)
            .collect();
        for pl in self.triangles_containing(p)? {
            if pl.tri.level <= self.steps() && pl.tri.foot() == p {
                out.push(height_segment(&pl.tri, pl.pos));
            }
        }
        out.sort_by_key(SegmentRecord::rank);
        Ok(out)
    }

    /// Tree neighbours of `p` in the tree of its own color.
    pub fn tree_neighbors(&self, p: GridPoint) -> Result<Vec<GridPoint>> {
        let own = self.owner(p)?;
        let j = own.position(p).expect("owner contains the point");
        let mut out = Vec::new();
        if j > 0 {
            out.push(own.point_at(j - 1));
        }
        if j < own.steps() {
            out.push(own.point_at(j + 1));
        }
        for s in self.attached_at(p)? {
            out.push(s.point_at(s.steps() - 1));
        }
        Ok(out)
    }

    pub fn degree(&self, p: GridPoint) -> Result<usize> {
        Ok(self.tree_neighbors(p)?.len())
    }

    pub fn is_leaf(&self, p: GridPoint, color: Color) -> Result<bool> {
        Ok(self.color_of(p)? == color && self.degree(p)? == 1)
    }

    /// Partner of a red leaf: the corner one step before the leaf on its own
    /// chain, i.e. the right-angle vertex of the triangle whose height
    /// created the leaf.
    pub fn red_partner(&self, leaf: GridPoint) -> Result<GridPoint> {
        if !self.is_leaf(leaf, Color::Red)? {
            return Err(Error::domain(format!("{leaf} is not a red leaf")));
        }
        Ok(self.owner(leaf)?.corner)
    }

    /// Partner of a blue leaf: the lexicographically smallest red point at
    /// Euclidean distance exactly 1.
    pub fn blue_partner(&self, leaf: GridPoint) -> Result<GridPoint> {
        if !self.is_leaf(leaf, Color::Blue)? {
            return Err(Error::domain(format!("{leaf} is not a blue leaf")));
        }
        let mut nbrs = [
            GridPoint::new(leaf.x - 1, leaf.y),
            GridPoint::new(leaf.x, leaf.y - 1),
            GridPoint::new(leaf.x, leaf.y + 1),
            GridPoint::new(leaf.x + 1, leaf.y),
        ];
        nbrs.sort();
        for q in nbrs {
            if self.contains(q) && self.color_of(q)? == Color::Red {
                return Ok(q);
            }
        }
        Err(Error::domain(format!("blue leaf {leaf} has no red point at distance 1")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: i64, y: i64) -> GridPoint {
        GridPoint::new(x, y)
    }

    #[test]
    fn colors_at_m2() {
        let s = Subdivision::new(2).unwrap();
        assert_eq!(s.color_of(g(0, 0)).unwrap(), Color::Red);
        assert_eq!(s.color_of(g(2, 2)).unwrap(), Color::Blue);
        assert_eq!(s.color_of(g(1, 1)).unwrap(), Color::Blue);
        assert_eq!(s.color_of(g(1, 2)).unwrap(), Color::Red);
        assert!(s.color_of(g(3, 3)).is_err());
    }

    #[test]
    fn leaves_and_partners_at_m2() {
        let s = Subdivision::new(2).unwrap();
        for p in [g(3, 0), g(0, 3), g(1, 2), g(2, 1)] {
            assert!(s.is_leaf(p, Color::Red).unwrap(), "{p}");
        }
        assert!(!s.is_leaf(g(0, 0), Color::Red).unwrap());
        assert!(!s.is_leaf(g(2, 0), Color::Red).unwrap());
        for p in [g(0, 4), g(4, 0), g(1, 1)] {
            assert!(s.is_leaf(p, Color::Blue).unwrap(), "{p}");
        }
        assert!(!s.is_leaf(g(2, 2), Color::Blue).unwrap());
        assert_eq!(s.red_partner(g(1, 2)).unwrap(), g(2, 2));
        assert_eq!(s.red_partner(g(3, 0)).unwrap(), g(4, 0));
        assert_eq!(s.blue_partner(g(1, 1)).unwrap(), g(0, 1));
        assert!(s.red_partner(g(2, 0)).is_err());
    }

    #[test]
    fn sizing_guard() {
        assert!(matches!(Subdivision::new(0), Err(Error::Domain(_))));
        assert!(matches!(Subdivision::new(31), Err(Error::Sizing(_))));
        let big = Subdivision::new(30).unwrap();
        let p = g(123_456_789, 876_543_210);
        assert!(big.color_of(p).is_ok());
    }
}
