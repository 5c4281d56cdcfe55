//! Three-division low-distance cover of the cube `{0..n}³` under L∞.
//!
//! Each division assigns every point a head: a point whose coordinates are
//! all congruent to the head label's offset modulo 8. The label is read from
//! a periodic 8×8×8 table of triples, one label per division. Every point is
//! joined to its head, and the heads of a division are chained in
//! lexicographic order to make a spanning tree.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Edge, ExactLength, GridPoint3, Metric, Site, TreeCover, WeightedTree};
use crate::verify::{low_distance_check, LowDistanceOutcome, NeighborhoodDomain};

/// Period of the table along each axis.
pub const PERIOD: i64 = 8;

/// Number of divisions, hence trees.
pub const DIVISIONS: usize = 3;

/// Low-distance constant the cover is claimed to achieve.
pub const DEFAULT_C: f64 = 18.0;

/// Bound on the L∞ distance from any point to its head.
pub const HEAD_RADIUS: i64 = 9;

/// The head table shipped with the crate.
pub const EMBEDDED_TABLE: &str = include_str!("../data/head_table.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum HeadLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl HeadLabel {
    pub const ALL: [HeadLabel; 8] = [
        HeadLabel::A,
        HeadLabel::B,
        HeadLabel::C,
        HeadLabel::D,
        HeadLabel::E,
        HeadLabel::F,
        HeadLabel::G,
        HeadLabel::H,
    ];

    pub fn from_char(c: char) -> Option<Self> {
        let i = (c as u32).checked_sub('A' as u32)? as usize;
        Self::ALL.get(i).copied()
    }

    pub fn as_char(self) -> char {
        (b'A' + self as u8) as char
    }

    /// Offset in `{0,4}³`: bit 0 of the label index selects x, bit 1 y, bit 2 z.
    pub fn offset(self) -> [i64; 3] {
        let i = self as i64;
        [4 * (i & 1), 4 * ((i >> 1) & 1), 4 * ((i >> 2) & 1)]
    }
}

impl fmt::Display for HeadLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Labels indexed `[a][b][c][division]` for the point `(8x+a, 8y+b, 8z+c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadTable {
    entries: Box<[[[[HeadLabel; DIVISIONS]; 8]; 8]; 8]>,
}

impl HeadTable {
    /// The embedded table.
    pub fn embedded() -> Self {
        load_head_table(EMBEDDED_TABLE).expect("embedded head table is well formed")
    }

    pub fn entry(&self, a: usize, b: usize, c: usize) -> [HeadLabel; DIVISIONS] {
        self.entries[a][b][c]
    }

    /// Label of the residue class of `p` in `division` (0-based).
    pub fn label(&self, p: GridPoint3, division: usize) -> HeadLabel {
        let r = |v: i64| v.rem_euclid(PERIOD) as usize;
        self.entries[r(p.x)][r(p.y)][r(p.z)][division]
    }

    /// The table in its text form.
    pub fn to_text(&self) -> String {
        let blocks: Vec<String> = self
            .entries
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|t| t.iter().map(|l| l.as_char()).collect::<String>())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            })
            .collect();
        blocks.join("\n\n") + "\n"
    }
}

/// Parses 8 blocks (`a`) of 8 lines (`b`) of 8 comma-separated triples
/// (`c`). Blank lines and lines starting with `#` are skipped.
///
/// The last head of the printed list carries the label `A` at offset
/// `(4,4,4)`; that offset is read as `H`, the only label consistent with it.
pub fn load_head_table(text: &str) -> Result<HeadTable> {
    log::debug!("head table: the label at offset (4,4,4) is read as H");
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if lines.len() != 64 {
        return Err(Error::parse("table", format!("expected 64 rows, found {}", lines.len())));
    }
    let mut entries = Box::new([[[[HeadLabel::A; DIVISIONS]; 8]; 8]; 8]);
    for (i, line) in lines.iter().enumerate() {
        let (a, b) = (i / 8, i % 8);
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 8 {
            return Err(Error::parse(
                format!("(a={a},b={b})"),
                format!("expected 8 triples, found {}", fields.len()),
            ));
        }
        for (c, field) in fields.iter().enumerate() {
            let loc = || format!("(a={a},b={b},c={c})");
            let chars: Vec<char> = field.chars().collect();
            if chars.len() != DIVISIONS {
                return Err(Error::parse(loc(), format!("expected 3 labels, found {field:?}")));
            }
            for (d, &ch) in chars.iter().enumerate() {
                entries[a][b][c][d] =
                    HeadLabel::from_char(ch).ok_or_else(|| Error::parse(loc(), format!("label {ch:?} is not in A..H")))?;
            }
        }
    }
    Ok(HeadTable { entries })
}

/// The closest point to `p` whose coordinates are congruent to the offset of
/// `label` modulo 8. The closest point is found per coordinate, which is the
/// Euclidean closest on this product lattice; a coordinate at distance 4
/// from both candidates is a tie and an error.
pub fn head_for_label(p: GridPoint3, label: HeadLabel) -> Result<GridPoint3> {
    let o = label.offset();
    let mut h = [0i64; 3];
    for (i, &v) in p.coords().iter().enumerate() {
        let below = v - (v - o[i]).rem_euclid(PERIOD);
        let up = v - below;
        h[i] = match up.cmp(&(PERIOD - up)) {
            std::cmp::Ordering::Less => below,
            std::cmp::Ordering::Greater => below + PERIOD,
            std::cmp::Ordering::Equal => {
                return Err(Error::AmbiguousHead {
                    point: p.coords(),
                    label: label.as_char(),
                })
            }
        };
    }
    Ok(GridPoint3::from(h))
}

/// Head of `p` in `division` (0-based).
pub fn head_of(p: GridPoint3, division: usize, table: &HeadTable) -> Result<GridPoint3> {
    if division >= DIVISIONS {
        return Err(Error::domain(format!("division {division} out of range 0..{DIVISIONS}")));
    }
    head_for_label(p, table.label(p, division))
}

/// The three trees on `{0..n}³` and the head of every point in every
/// division. Point `(x,y,z)` is vertex `(x·(n+1) + y)·(n+1) + z` of every
/// tree.
#[derive(Debug, Clone)]
pub struct CubeCover {
    pub n: i64,
    pub trees: Vec<WeightedTree>,
    pub heads: Vec<[GridPoint3; DIVISIONS]>,
}

impl CubeCover {
    pub fn side(&self) -> i64 {
        self.n + 1
    }

    pub fn index(&self, p: GridPoint3) -> usize {
        let s = self.side();
        ((p.x * s + p.y) * s + p.z) as usize
    }

    pub fn point(&self, i: usize) -> GridPoint3 {
        let s = self.side() as usize;
        GridPoint3::new((i / (s * s)) as i64, ((i / s) % s) as i64, (i % s) as i64)
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint3> + '_ {
        (0..self.heads.len()).map(|i| self.point(i))
    }

    pub fn max_head_distance(&self) -> i64 {
        self.heads
            .par_iter()
            .enumerate()
            .map(|(i, hs)| {
                let p = self.point(i);
                hs.iter().map(|&h| p.linf(h)).max().unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    pub fn cover(&self) -> Result<TreeCover> {
        TreeCover::on_shared_vertices(self.trees.clone())
    }
}

fn linf_edge(u: usize, v: usize, pu: GridPoint3, pv: GridPoint3) -> Edge {
    Edge {
        u,
        v,
        len: ExactLength::new(pu.linf(pv), 0).into(),
    }
}

/// Builds the three trees on `{0..n}³`.
pub fn build_cube_cover(n: i64, table: &HeadTable) -> Result<CubeCover> {
    if n < PERIOD || n % PERIOD != 0 {
        return Err(Error::domain(format!("n must be a positive multiple of {PERIOD}, got {n}")));
    }
    let s = n + 1;
    let total = (s * s * s) as usize;
    let mut cover = CubeCover {
        n,
        trees: Vec::new(),
        heads: Vec::new(),
    };
    let points: Vec<GridPoint3> = (0..total).map(|i| cover.point(i)).collect();
    let heads: Vec<[GridPoint3; DIVISIONS]> = points
        .par_iter()
        .map(|&p| {
            let mut hs = [p; DIVISIONS];
            for (d, h) in hs.iter_mut().enumerate() {
                *h = head_of(p, d, table)?;
                if h.coords().iter().any(|&c| !(0..=n).contains(&c)) {
                    return Err(Error::domain(format!("head {h} of {p} in division {d} lies outside the cube")));
                }
            }
            Ok(hs)
        })
        .collect::<Result<_>>()?;
    cover.heads = heads;
    let sites: Vec<Site> = points.iter().map(|&p| Site::Grid3(p)).collect();
    for d in 0..DIVISIONS {
        let mut is_head = vec![false; total];
        for hs in &cover.heads {
            is_head[cover.index(hs[d])] = true;
        }
        let mut edges = Vec::with_capacity(total - 1);
        for (i, hs) in cover.heads.iter().enumerate() {
            let h = cover.index(hs[d]);
            if is_head[i] {
                if h != i {
                    return Err(Error::domain(format!(
                        "head {} is assigned to another head {} in division {d}",
                        points[i], hs[d]
                    )));
                }
                continue;
            }
            edges.push(linf_edge(i, h, points[i], points[h]));
        }
        // Indices increase with lexicographic order of the points.
        let chain: Vec<usize> = (0..total).filter(|&i| is_head[i]).collect();
        for w in chain.windows(2) {
            edges.push(linf_edge(w[0], w[1], points[w[0]], points[w[1]]));
        }
        cover
            .trees
            .push(WeightedTree::new(Metric::Linf3, sites.clone(), edges, Some(chain[0]))?);
    }
    Ok(cover)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubeReport {
    pub n: i64,
    pub c: f64,
    pub max_head_distance: i64,
    /// An adjacent pair with no shared head in any division, if one exists.
    pub unshared: Option<([i64; 3], [i64; 3])>,
    pub low_distance: LowDistanceOutcome,
}

impl CubeReport {
    pub fn pass(&self) -> bool {
        self.max_head_distance <= HEAD_RADIUS && self.unshared.is_none() && self.low_distance.pass()
    }
}

/// First pair (in scan order) at L∞ distance 1 that shares no head.
pub fn unshared_pair(cover: &CubeCover) -> Option<(GridPoint3, GridPoint3)> {
    let n = cover.n;
    (0..cover.heads.len()).into_par_iter().find_map_first(|i| {
        let p = cover.point(i);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let q = GridPoint3::new(p.x + dx, p.y + dy, p.z + dz);
                    if q <= p || [q.x, q.y, q.z].iter().any(|&c| !(0..=n).contains(&c)) {
                        continue;
                    }
                    let (hp, hq) = (&cover.heads[i], &cover.heads[cover.index(q)]);
                    if !(0..DIVISIONS).any(|d| hp[d] == hq[d]) {
                        return Some((p, q));
                    }
                }
            }
        }
        None
    })
}

/// Low-distance check with constant `c` over all L∞-adjacent pairs, plus the
/// shared-head and head-radius checks.
pub fn verify_cube_cover(cover: &CubeCover, c: f64, tolerance: f64) -> Result<CubeReport> {
    let pts: Vec<Vec<i64>> = cover.points().map(|p| p.coords().to_vec()).collect();
    let domain = NeighborhoodDomain::new(&cover.trees, &pts)?;
    Ok(CubeReport {
        n: cover.n,
        c,
        max_head_distance: cover.max_head_distance(),
        unshared: unshared_pair(cover).map(|(p, q)| (p.coords(), q.coords())),
        low_distance: low_distance_check(&domain, c, tolerance),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_are_distinct_corners() {
        let offs: std::collections::BTreeSet<_> = HeadLabel::ALL.iter().map(|l| l.offset()).collect();
        assert_eq!(offs.len(), 8);
        assert_eq!(HeadLabel::B.offset(), [4, 0, 0]);
        assert_eq!(HeadLabel::C.offset(), [0, 4, 0]);
        assert_eq!(HeadLabel::E.offset(), [0, 0, 4]);
        assert_eq!(HeadLabel::H.offset(), [4, 4, 4]);
        assert_eq!(HeadLabel::from_char('I'), None);
        assert_eq!(HeadLabel::from_char('G'), Some(HeadLabel::G));
    }

    #[test]
    fn head_lookup_examples() {
        let p = |x, y, z| GridPoint3::new(x, y, z);
        assert_eq!(head_for_label(p(2, 2, 6), HeadLabel::A).unwrap(), p(0, 0, 8));
        assert_eq!(head_for_label(p(5, 3, 2), HeadLabel::A).unwrap(), p(8, 0, 0));
        let t = HeadTable::embedded();
        for d in 0..DIVISIONS {
            assert_eq!(head_of(p(0, 0, 0), d, &t).unwrap(), p(0, 0, 0));
        }
        assert!(matches!(
            head_for_label(p(4, 0, 0), HeadLabel::A),
            Err(Error::AmbiguousHead { label: 'A', .. })
        ));
        assert!(head_of(p(0, 0, 0), 3, &t).is_err());
    }

    #[test]
    fn loader_rejects_bad_documents() {
        let good = EMBEDDED_TABLE.to_string();
        assert!(load_head_table(&good).is_ok());
        let bad_letter = good.replacen("AAA", "AAZ", 1);
        match load_head_table(&bad_letter) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "(a=0,b=0,c=0)"),
            other => panic!("{other:?}"),
        }
        let short = good.replacen("AAA,", "", 1);
        assert!(matches!(load_head_table(&short), Err(Error::Parse { .. })));
        let pair = good.replacen("AAA", "AA", 1);
        assert!(load_head_table(&pair).is_err());
        let rows: Vec<&str> = good.lines().filter(|l| !l.is_empty()).take(63).collect();
        assert!(load_head_table(&rows.join("\n")).is_err());
    }

    #[test]
    fn text_round_trip() {
        let t = HeadTable::embedded();
        assert_eq!(t.to_text(), EMBEDDED_TABLE);
    }

    #[test]
    fn single_period_cover() {
        let t = HeadTable::embedded();
        let cover = build_cube_cover(8, &t).unwrap();
        assert_eq!(cover.trees.len(), 3);
        for tree in &cover.trees {
            assert_eq!(tree.len(), 729);
        }
        let i = cover.index(GridPoint3::new(2, 2, 6));
        assert_eq!(cover.point(i), GridPoint3::new(2, 2, 6));
        assert!(build_cube_cover(12, &t).is_err());
        assert!(build_cube_cover(0, &t).is_err());
        let report = verify_cube_cover(&cover, DEFAULT_C, 1e-9).unwrap();
        assert!(report.pass(), "{report:?}");
    }
}
