//! Fully materialized red/blue tree construction on the triangular grid.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::locate::{height_segment, initial_segments, SegmentRecord};
use super::triangle::{Color, Triangle};
use crate::error::{Error, Result};
use crate::model::{Edge, ExactLength, GridPoint, IndexedCover, Metric, Site, TreeCover, WeightedTree};

/// Largest `m` the materialized builder accepts; the grid holds about
/// `2^(2m-1)` points.
pub const MAX_MATERIALIZED_M: u32 = 10;

/// The four trees of a construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TreeKind {
    /// R: red points, unit axis edges.
    Red,
    /// B: blue points, unit diagonal edges.
    Blue,
    /// B′: B plus one unit edge from every red leaf to its partner.
    BluePrime,
    /// R′: R plus one unit edge from every blue leaf to its partner.
    RedPrime,
}

impl TreeKind {
    pub const ALL: [TreeKind; 4] = [
        TreeKind::Red,
        TreeKind::Blue,
        TreeKind::BluePrime,
        TreeKind::RedPrime,
    ];

    fn slot(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone)]
pub struct Construction {
    m: u32,
    n: i64,
    levels: Vec<Vec<Triangle>>,
    segments: Vec<SegmentRecord>,
    points: Vec<GridPoint>,
    // dense (n+1)^2 tables indexed by x * (n+1) + y
    point_id: Vec<u32>,
    color: Vec<Option<Color>>,
    owner: Vec<u32>,
    trees: [WeightedTree; 4],
    vertex_of: [Vec<u32>; 4],
    red_leaves: Vec<GridPoint>,
    blue_leaves: Vec<GridPoint>,
    red_partner: BTreeMap<GridPoint, GridPoint>,
    blue_partner: BTreeMap<GridPoint, GridPoint>,
}

const NONE: u32 = u32::MAX;

impl Construction {
    /// Runs the recursive subdivision for `n = 2^m`.
    pub fn build(m: u32) -> Result<Construction> {
        if m < 1 {
            return Err(Error::domain("m must be at least 1"));
        }
        if m > MAX_MATERIALIZED_M {
            return Err(Error::Sizing(format!(
                "m = {m} exceeds the materialized maximum {MAX_MATERIALIZED_M}"
            )));
        }
        let n = 1i64 << m;
        let side = (n + 1) as usize;
        let idx = |p: GridPoint| p.x as usize * side + p.y as usize;

        // Triangulation history and segments in creation order.
        let mut levels = vec![vec![Triangle::root(n)]];
        let mut segments: Vec<SegmentRecord> = initial_segments(n).to_vec();
        for _step in 1..=2 * (m - 1) {
            let current = levels.last().unwrap();
            let mut next = Vec::with_capacity(2 * current.len());
            for (pos, tri) in current.iter().enumerate() {
                segments.push(height_segment(tri, pos as u64));
                next.extend(tri.split());
            }
            levels.push(next);
        }

        // Coloring and ownership.
        let mut color = vec![None; side * side];
        let mut owner = vec![NONE; side * side];
        for (si, seg) in segments.iter().enumerate() {
            for p in seg.owned_points() {
                let i = idx(p);
                if color[i].is_some() {
                    return Err(Error::domain(format!("{p} colored twice")));
                }
                color[i] = Some(seg.color);
                owner[i] = si as u32;
            }
            if !seg.root && color[idx(seg.w)] != Some(seg.color) {
                return Err(Error::domain(format!(
                    "segment {}-{} attaches to a point of the other color",
                    seg.v, seg.w
                )));
            }
        }

        let mut points = Vec::new();
        let mut point_id = vec![NONE; side * side];
        for x in 0..=n {
            for y in 0..=n - x {
                let p = GridPoint::new(x, y);
                if color[idx(p)].is_none() {
                    return Err(Error::domain(format!("{p} left uncolored")));
                }
                point_id[idx(p)] = points.len() as u32;
                points.push(p);
            }
        }

        // Base trees.
        let base = |c: Color, unit: ExactLength| -> Result<(WeightedTree, Vec<u32>)> {
            let mut vid = vec![NONE; side * side];
            let mut sites = Vec::new();
            for &p in &points {
                if color[idx(p)] == Some(c) {
                    vid[idx(p)] = sites.len() as u32;
                    sites.push(Site::Grid2(p));
                }
            }
            let mut edges = Vec::with_capacity(sites.len().saturating_sub(1));
            for seg in segments.iter().filter(|s| s.color == c) {
                for j in 0..seg.steps() {
                    let (p, q) = (seg.point_at(j), seg.point_at(j + 1));
                    edges.push(Edge {
                        u: vid[idx(p)] as usize,
                        v: vid[idx(q)] as usize,
                        len: unit.into(),
                    });
                }
            }
            let root = match c {
                Color::Red => GridPoint::new(0, 0),
                Color::Blue => GridPoint::new(n, 0),
            };
            let tree = WeightedTree::new(Metric::Euclid2, sites, edges, Some(vid[idx(root)] as usize))?;
            Ok((tree, vid))
        };
        let (red, red_vid) = base(Color::Red, ExactLength::ONE)?;
        let (blue, blue_vid) = base(Color::Blue, ExactLength::SQRT2)?;

        let leaves_of = |tree: &WeightedTree| -> Vec<GridPoint> {
            let mut l: Vec<GridPoint> = (0..tree.len())
                .filter(|&v| tree.degree(v) == 1)
                .map(|v| tree.site(v).grid2().unwrap())
                .collect();
            l.sort();
            l
        };
        let red_leaves = if red.len() == 1 { vec![] } else { leaves_of(&red) };
        let blue_leaves = leaves_of(&blue);

        let mut red_partner = BTreeMap::new();
        for &l in &red_leaves {
            let x = segments[owner[idx(l)] as usize].corner;
            red_partner.insert(l, x);
        }
        let mut blue_partner = BTreeMap::new();
        for &l in &blue_leaves {
            let mut nbrs = [
                GridPoint::new(l.x - 1, l.y),
                GridPoint::new(l.x, l.y - 1),
                GridPoint::new(l.x, l.y + 1),
                GridPoint::new(l.x + 1, l.y),
            ];
            nbrs.sort();
            let y = nbrs
                .into_iter()
                .find(|q| {
                    q.x >= 0 && q.y >= 0 && q.x + q.y <= n && color[idx(*q)] == Some(Color::Red)
                })
                .ok_or_else(|| Error::domain(format!("blue leaf {l} has no red neighbour")))?;
            blue_partner.insert(l, y);
        }

        // Augmented trees: the base tree plus the opposite-color leaves.
        let augment = |tree: &WeightedTree,
                       vid: &[u32],
                       leaves: &[GridPoint],
                       partner: &BTreeMap<GridPoint, GridPoint>|
         -> Result<(WeightedTree, Vec<u32>)> {
            let mut sites = tree.sites().to_vec();
            let mut edges = tree.edges().to_vec();
            let mut out_vid = vid.to_vec();
            for &l in leaves {
                let x = partner[&l];
                let xv = vid[idx(x)];
                if xv == NONE {
                    return Err(Error::domain(format!("partner {x} of {l} is not in the tree")));
                }
                out_vid[idx(l)] = sites.len() as u32;
                edges.push(Edge {
                    u: sites.len(),
                    v: xv as usize,
                    len: ExactLength::ONE.into(),
                });
                sites.push(Site::Grid2(l));
            }
            Ok((WeightedTree::new(Metric::Euclid2, sites, edges, tree.root())?, out_vid))
        };
        let (blue_prime, bp_vid) = augment(&blue, &blue_vid, &red_leaves, &red_partner)?;
        let (red_prime, rp_vid) = augment(&red, &red_vid, &blue_leaves, &blue_partner)?;

        Ok(Construction {
            m,
            n,
            levels,
            segments,
            points,
            point_id,
            color,
            owner,
            trees: [red, blue, blue_prime, red_prime],
            vertex_of: [red_vid, blue_vid, bp_vid, rp_vid],
            red_leaves,
            blue_leaves,
            red_partner,
            blue_partner,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    fn idx(&self, p: GridPoint) -> usize {
        p.x as usize * (self.n + 1) as usize + p.y as usize
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        p.x >= 0 && p.y >= 0 && p.x + p.y <= self.n
    }

    fn check(&self, p: GridPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::domain(format!("{p} is outside the triangular grid of side {}", self.n)))
        }
    }

    /// Triangles of level `i` (1-based), `i` in `1..=2m-1`.
    pub fn level(&self, i: u32) -> &[Triangle] {
        &self.levels[(i - 1) as usize]
    }

    pub fn levels(&self) -> &[Vec<Triangle>] {
        &self.levels
    }

    /// Every triangle of every level.
    pub fn triangles(&self) -> impl Iterator<Item = &Triangle> {
        self.levels.iter().flatten()
    }

    pub fn segments(&self) -> &[SegmentRecord] {
        &self.segments
    }

    /// Points of the triangular grid in lexicographic order; a point's index
    /// here is its id in every cover built from this construction.
    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn point_id(&self, p: GridPoint) -> Result<usize> {
        self.check(p)?;
        Ok(self.point_id[self.idx(p)] as usize)
    }

    pub fn color_of(&self, p: GridPoint) -> Result<Color> {
        self.check(p)?;
        Ok(self.color[self.idx(p)].expect("every grid point is colored"))
    }

    pub fn owner(&self, p: GridPoint) -> Result<&SegmentRecord> {
        self.check(p)?;
        Ok(&self.segments[self.owner[self.idx(p)] as usize])
    }

    pub fn tree(&self, kind: TreeKind) -> &WeightedTree {
        &self.trees[kind.slot()]
    }

    pub fn vertex(&self, kind: TreeKind, p: GridPoint) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        match self.vertex_of[kind.slot()][self.idx(p)] {
            NONE => None,
            v => Some(v as usize),
        }
    }

    pub fn leaves(&self, color: Color) -> &[GridPoint] {
        match color {
            Color::Red => &self.red_leaves,
            Color::Blue => &self.blue_leaves,
        }
    }

    pub fn partners(&self, color: Color) -> &BTreeMap<GridPoint, GridPoint> {
        match color {
            Color::Red => &self.red_partner,
            Color::Blue => &self.blue_partner,
        }
    }

    /// Partner of a leaf: `x(ℓ)` for red leaves, `y(ℓ)` for blue leaves.
    pub fn leaf_partner(&self, leaf: GridPoint, color: Color) -> Result<GridPoint> {
        self.check(leaf)?;
        self.partners(color)
            .get(&leaf)
            .copied()
            .ok_or_else(|| Error::domain(format!("{leaf} is not a {color} leaf")))
    }

    /// Closest red leaf to `z`, ties broken by lexicographic order.
    pub fn nearest_leaf(&self, z: GridPoint) -> Result<(GridPoint, f64)> {
        self.check(z)?;
        let best = |radius: i64| -> Option<(i64, GridPoint)> {
            let mut best: Option<(i64, GridPoint)> = None;
            for x in z.x - radius..=z.x + radius {
                for y in z.y - radius..=z.y + radius {
                    let q = GridPoint::new(x, y);
                    if self.contains(q) && self.red_partner.contains_key(&q) {
                        let d2 = q.dist2(z);
                        if d2 <= radius * radius && best.is_none_or(|b| (d2, q) < b) {
                            best = Some((d2, q));
                        }
                    }
                }
            }
            best
        };
        // Every grid point has a red leaf within √5; the wide pass only runs
        // if that ever fails.
        let found = best(3).or_else(|| {
            self.red_leaves
                .iter()
                .map(|&q| (q.dist2(z), q))
                .min()
        });
        let (d2, q) = found.ok_or_else(|| Error::domain("construction has no red leaves"))?;
        Ok((q, (d2 as f64).sqrt()))
    }

    /// Cover built from two of the trees, over every grid point.
    pub fn cover(&self, kinds: &[TreeKind]) -> TreeCover {
        let trees = kinds.iter().map(|&k| self.tree(k).clone()).collect();
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(id, &p)| (id, kinds.iter().map(|&k| self.vertex(k, p)).collect()))
            .collect();
        TreeCover::new(trees, points).expect("vertex maps are consistent")
    }

    /// The cover {R, B′}.
    pub fn main_cover(&self) -> IndexedCover {
        IndexedCover::new(self.cover(&[TreeKind::Red, TreeKind::BluePrime]))
    }

    pub fn to_document(&self) -> ConstructionDoc {
        let cover = self.cover(&TreeKind::ALL);
        ConstructionDoc {
            trees: cover.trees,
            points: cover.points,
            m: self.m,
            l: self.red_leaves.clone(),
            partners: PartnerDoc {
                red: self.red_partner.iter().map(|(a, b)| [*a, *b]).collect(),
                blue: self.blue_partner.iter().map(|(a, b)| [*a, *b]).collect(),
            },
            segments: self.segments.clone(),
        }
    }

    /// Map from grid point to owning segment index, for diagnostics.
    pub fn owner_table(&self) -> HashMap<GridPoint, usize> {
        self.points
            .iter()
            .map(|&p| (p, self.owner[self.idx(p)] as usize))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct PartnerDoc {
    pub red: Vec<[GridPoint; 2]>,
    pub blue: Vec<[GridPoint; 2]>,
}

/// JSON document of a construction: the four trees `[R, B, B′, R′]` in cover
/// form, plus the red leaves, partner maps and segment records.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct ConstructionDoc {
    pub trees: Vec<WeightedTree>,
    pub points: BTreeMap<usize, Vec<Option<usize>>>,
    pub m: u32,
    #[serde(rename = "L")]
    pub l: Vec<GridPoint>,
    pub partners: PartnerDoc,
    pub segments: Vec<SegmentRecord>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Length;

    fn g(x: i64, y: i64) -> GridPoint {
        GridPoint::new(x, y)
    }

    fn edge_set(c: &Construction, kind: TreeKind) -> Vec<(GridPoint, GridPoint)> {
        let t = c.tree(kind);
        let mut out: Vec<_> = t
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = (t.site(e.u).grid2().unwrap(), t.site(e.v).grid2().unwrap());
                (a.min(b), a.max(b))
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn m1_is_step_zero_only() {
        let c = Construction::build(1).unwrap();
        assert_eq!(edge_set(&c, TreeKind::Red), vec![(g(0, 0), g(0, 1)), (g(0, 0), g(1, 0))]);
        assert_eq!(edge_set(&c, TreeKind::Blue), vec![(g(0, 2), g(1, 1)), (g(1, 1), g(2, 0))]);
        assert_eq!(c.leaves(Color::Red), &[g(0, 1), g(1, 0)]);
        assert_eq!(c.level(1).len(), 1);
    }

    #[test]
    fn m2_trees_match_hand_simulation() {
        let c = Construction::build(2).unwrap();
        let mut red = vec![
            (g(0, 0), g(1, 0)),
            (g(1, 0), g(2, 0)),
            (g(2, 0), g(3, 0)),
            (g(0, 0), g(0, 1)),
            (g(0, 1), g(0, 2)),
            (g(0, 2), g(0, 3)),
            (g(0, 2), g(1, 2)),
            (g(2, 0), g(2, 1)),
        ];
        red.sort();
        assert_eq!(edge_set(&c, TreeKind::Red), red);
        let mut blue = vec![
            (g(0, 4), g(1, 3)),
            (g(1, 3), g(2, 2)),
            (g(2, 2), g(3, 1)),
            (g(3, 1), g(4, 0)),
            (g(1, 1), g(2, 2)),
        ];
        blue.sort();
        assert_eq!(edge_set(&c, TreeKind::Blue), blue);
        assert_eq!(c.leaves(Color::Red), &[g(0, 3), g(1, 2), g(2, 1), g(3, 0)]);
        assert_eq!(c.leaves(Color::Blue), &[g(0, 4), g(1, 1), g(4, 0)]);
        assert_eq!(c.color_of(g(0, 0)).unwrap(), Color::Red);
        assert_eq!(c.color_of(g(2, 2)).unwrap(), Color::Blue);
        assert_eq!(c.color_of(g(1, 1)).unwrap(), Color::Blue);
        assert!(c.color_of(g(4, 1)).is_err());
    }

    #[test]
    fn m2_partners_and_nearest_leaves() {
        let c = Construction::build(2).unwrap();
        assert_eq!(c.leaf_partner(g(1, 2), Color::Red).unwrap(), g(2, 2));
        assert_eq!(c.leaf_partner(g(3, 0), Color::Red).unwrap(), g(4, 0));
        assert_eq!(c.leaf_partner(g(1, 1), Color::Blue).unwrap(), g(0, 1));
        assert!(c.leaf_partner(g(2, 0), Color::Red).is_err());
        let (l, d) = c.nearest_leaf(g(0, 0)).unwrap();
        assert_eq!(l, g(1, 2));
        assert!((d - 5f64.sqrt()).abs() < 1e-12);
        assert_eq!(c.nearest_leaf(g(4, 0)).unwrap(), (g(3, 0), 1.0));
        assert_eq!(c.nearest_leaf(g(2, 2)).unwrap(), (g(1, 2), 1.0));
    }

    #[test]
    fn m2_tree_distances() {
        let c = Construction::build(2).unwrap();
        let red = c.tree(TreeKind::Red);
        let idx = crate::model::DistanceIndex::new(red);
        let (a, b) = (c.vertex(TreeKind::Red, g(3, 0)).unwrap(), c.vertex(TreeKind::Red, g(0, 3)).unwrap());
        assert_eq!(idx.distance(a, b).unwrap(), Length::Exact(ExactLength::new(6, 0)));
        let blue = c.tree(TreeKind::Blue);
        let idx = crate::model::DistanceIndex::new(blue);
        let (a, b) = (c.vertex(TreeKind::Blue, g(0, 4)).unwrap(), c.vertex(TreeKind::Blue, g(4, 0)).unwrap());
        assert_eq!(idx.distance(a, b).unwrap(), Length::Exact(ExactLength::new(0, 4)));
    }

    #[test]
    fn m2_cover_distances() {
        let c = Construction::build(2).unwrap();
        let cover = c.main_cover();
        let id = |p| c.point_id(p).unwrap();
        let (d, t) = cover.cover_distance(id(g(1, 2)), id(g(2, 1))).unwrap();
        assert_eq!((d, t), (Length::Exact(ExactLength::new(2, 0)), 1));
        let (d, t) = cover.cover_distance(id(g(3, 0)), id(g(0, 3))).unwrap();
        assert_eq!((d, t), (Length::Exact(ExactLength::new(6, 0)), 0));
    }

    #[test]
    fn size_limits() {
        assert!(matches!(Construction::build(0), Err(Error::Domain(_))));
        assert!(matches!(Construction::build(MAX_MATERIALIZED_M + 1), Err(Error::Sizing(_))));
    }
}
