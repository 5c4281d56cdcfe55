//! Recursive subdivision of the triangular grid into a red and a blue tree.
//!
//! [`Construction`] materializes every point for small `m`; [`Subdivision`]
//! answers the same local queries implicitly for `m` up to
//! [`MAX_IMPLICIT_M`].

pub mod construction;
pub mod locate;
pub mod sparse;
pub mod triangle;

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::GridPoint;

pub use construction::{Construction, ConstructionDoc, TreeKind, MAX_MATERIALIZED_M};
pub use locate::{SegmentRecord, Subdivision, MAX_IMPLICIT_M};
pub use triangle::{Color, Triangle};

/// Outcome of [`separating_segment`].
#[derive(Debug, Clone, PartialEq)]
pub enum Separation {
    /// The height of `triangle` separates the points; `p_child` and `q_child`
    /// are the indices of the halves holding them.
    Separated {
        segment: SegmentRecord,
        triangle: Triangle,
        p_child: usize,
        q_child: usize,
    },
    /// Both points share an atomic triangle; `segment` is the smallest-rank
    /// segment within distance 1 of both.
    Proximity { segment: SegmentRecord },
}

impl Separation {
    pub fn segment(&self) -> &SegmentRecord {
        match self {
            Separation::Separated { segment, .. } | Separation::Proximity { segment } => segment,
        }
    }
}

/// Smallest-order height that splits a common triangle between `p` and `q`.
pub fn separating_segment(c: &Construction, p: GridPoint, q: GridPoint) -> Result<Separation> {
    for z in [p, q] {
        if !c.contains(z) {
            return Err(Error::domain(format!("{z} is outside the triangular grid of side {}", c.n())));
        }
    }
    if p == q {
        return Err(Error::domain("points must be distinct"));
    }
    let mut tri = Triangle::root(c.n());
    let mut pos = 0u64;
    for _ in 0..c.levels().len() - 1 {
        let (cp, cq) = (tri.child_index(p), tri.child_index(q));
        if cp != cq {
            return Ok(Separation::Separated {
                segment: locate::height_segment(&tri, pos),
                triangle: tri,
                p_child: cp,
                q_child: cq,
            });
        }
        tri = tri.split()[cp];
        pos = 2 * pos + cp as u64;
    }
    let within = |s: &&SegmentRecord| s.distance_to(p) <= 1.0 + 1e-9 && s.distance_to(q) <= 1.0 + 1e-9;
    let segment = match c.segments().iter().filter(within).min_by_key(|s| s.rank()) {
        Some(s) => s.clone(),
        None => c
            .segments()
            .iter()
            .min_by(|a, b| {
                let da = a.distance_to(p).max(a.distance_to(q));
                let db = b.distance_to(p).max(b.distance_to(q));
                da.total_cmp(&db).then(a.rank().cmp(&b.rank()))
            })
            .expect("a construction has segments")
            .clone(),
    };
    Ok(Separation::Proximity { segment })
}

/// Pixels per grid unit in [`render_svg`].
pub const SVG_SCALE: i64 = 10;

/// Draws both trees, one `<line>` per edge, y axis pointing up.
pub fn render_svg(c: &Construction) -> String {
    let margin = SVG_SCALE;
    let size = c.n() * SVG_SCALE + 2 * margin;
    let px = |p: GridPoint| (margin + p.x * SVG_SCALE, margin + (c.n() - p.y) * SVG_SCALE);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    for (kind, stroke) in [(TreeKind::Red, "red"), (TreeKind::Blue, "blue")] {
        let tree = c.tree(kind);
        let _ = writeln!(out, r#"<g stroke="{stroke}" stroke-width="2" stroke-linecap="round">"#);
        for e in tree.edges() {
            let (a, b) = (px(tree.site(e.u).grid2().unwrap()), px(tree.site(e.v).grid2().unwrap()));
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}"/>"#,
                a.0, a.1, b.0, b.1
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: i64, y: i64) -> GridPoint {
        GridPoint::new(x, y)
    }

    #[test]
    fn separation_examples() {
        let c = Construction::build(2).unwrap();
        let s = separating_segment(&c, g(3, 0), g(0, 3)).unwrap();
        let seg = s.segment();
        assert!(matches!(s, Separation::Separated { .. }));
        assert_eq!((seg.v, seg.w, seg.order, seg.color), (g(1, 1), g(2, 2), 1, Color::Blue));

        let s = separating_segment(&c, g(1, 2), g(0, 3)).unwrap();
        let seg = s.segment();
        assert_eq!((seg.v, seg.w, seg.order, seg.color), (g(1, 2), g(0, 2), 2, Color::Red));

        let c1 = Construction::build(1).unwrap();
        let s = separating_segment(&c1, g(1, 0), g(0, 1)).unwrap();
        assert!(matches!(s, Separation::Proximity { .. }));
        assert_eq!(s.segment().order, 0);
        assert!(separating_segment(&c1, g(1, 0), g(1, 0)).is_err());
        assert!(separating_segment(&c1, g(1, 0), g(3, 0)).is_err());
    }

    #[test]
    fn svg_edge_counts() {
        for (m, red, blue) in [(1, 2, 2), (2, 8, 5)] {
            let svg = render_svg(&Construction::build(m).unwrap());
            assert_eq!(svg.matches(r#"stroke="red"/>"#).count(), red);
            assert_eq!(svg.matches(r#"stroke="blue"/>"#).count(), blue);
            assert_eq!(svg, render_svg(&Construction::build(m).unwrap()));
        }
    }
}
