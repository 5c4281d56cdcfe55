use std::collections::BTreeSet;

use proptest::prelude::*;

use tree_cover::grid::{render_svg, Color, Construction, ConstructionDoc, Subdivision, TreeKind};
use tree_cover::model::{deserialize, serialize, GridPoint, IndexedCover};

const FIXTURE: &str = include_str!("fixtures/construction_m2.json");

fn g(x: i64, y: i64) -> GridPoint {
    GridPoint::new(x, y)
}

#[test]
fn fixture_round_trips() {
    let doc: ConstructionDoc = deserialize(FIXTURE).unwrap();
    assert_eq!(serialize(&doc).unwrap() + "\n", FIXTURE);
    let built = Construction::build(2).unwrap().to_document();
    assert_eq!(serialize(&built).unwrap(), serialize(&doc).unwrap());
    assert_eq!(doc.l, vec![g(0, 3), g(1, 2), g(2, 1), g(3, 0)]);
}

#[test]
fn fixture_cover_distances() {
    let doc: ConstructionDoc = deserialize(FIXTURE).unwrap();
    let c = Construction::build(2).unwrap();
    let cover = c.main_cover();
    let id = |p| c.point_id(p).unwrap();
    let (d, tree) = cover.cover_distance(id(g(1, 2)), id(g(2, 1))).unwrap();
    assert_eq!((d.value(), tree), (2.0, 1));
    let (d, tree) = cover.cover_distance(id(g(3, 0)), id(g(0, 3))).unwrap();
    assert_eq!((d.value(), tree), (6.0, 0));
    // the parsed document carries the same four trees
    assert_eq!(doc.trees.len(), 4);
    assert_eq!(&doc.trees[0], c.tree(TreeKind::Red));
    assert_eq!(&doc.trees[2], c.tree(TreeKind::BluePrime));
}

/// Two open diagonal unit segments cross only when they are the two
/// diagonals of one unit square.
#[test]
fn trees_do_not_cross() {
    for m in 1..=6 {
        let c = Construction::build(m).unwrap();
        let blue = c.tree(TreeKind::Blue);
        let mut diagonals = BTreeSet::new();
        for e in blue.edges() {
            let (p, q) = (blue.site(e.u).grid2().unwrap(), blue.site(e.v).grid2().unwrap());
            let lo = if p.x < q.x { p } else { q };
            let hi = if p.x < q.x { q } else { p };
            // key: lower-left corner of the square, and the direction
            let corner = g(lo.x, lo.y.min(hi.y));
            assert!(diagonals.insert((corner, hi.y > lo.y)));
        }
        for &(corner, up) in &diagonals {
            assert!(!diagonals.contains(&(corner, !up)), "m={m}: crossing at {corner}");
        }
        // red and blue edges meet only at lattice points, which have one color
        let red: BTreeSet<_> = c.tree(TreeKind::Red).sites().iter().map(|s| s.grid2().unwrap()).collect();
        assert!(blue.sites().iter().all(|s| !red.contains(&s.grid2().unwrap())));
    }
}

#[test]
fn side_sixteen_construction() {
    let c = Construction::build(4).unwrap();
    let (r, b) = (c.tree(TreeKind::Red), c.tree(TreeKind::Blue));
    assert_eq!(r.len() + b.len(), 17 * 18 / 2);
    assert_eq!(r.len() + b.len(), c.points().len());
    let svg = render_svg(&c);
    assert_eq!(svg.matches("stroke=\"red\"/>").count(), r.edges().len());
    assert_eq!(svg.matches("stroke=\"blue\"/>").count(), b.edges().len());
    assert_eq!(svg, render_svg(&Construction::build(4).unwrap()));
}

#[test]
fn partners_are_adjacent_and_opposite() {
    for m in 1..=6 {
        let c = Construction::build(m).unwrap();
        for color in [Color::Red, Color::Blue] {
            for &leaf in c.leaves(color) {
                let x = c.leaf_partner(leaf, color).unwrap();
                assert_eq!(leaf.dist2(x), 1, "m={m} {leaf}");
                assert_eq!(c.color_of(x).unwrap(), color.other());
            }
        }
    }
}

#[test]
fn red_partners_lie_in_every_triangle_of_their_leaf() {
    for m in 1..=6 {
        let c = Construction::build(m).unwrap();
        for tri in c.triangles() {
            for &leaf in c.leaves(Color::Red) {
                if tri.contains(leaf) {
                    let x = c.leaf_partner(leaf, Color::Red).unwrap();
                    assert!(tri.contains(x), "m={m}: {leaf} -> {x} leaves {tri:?}");
                }
            }
        }
    }
}

#[test]
fn levels_refine() {
    for m in 1..=6 {
        let c = Construction::build(m).unwrap();
        let levels = c.levels();
        for w in levels.windows(2) {
            assert_eq!(w[1].len(), 2 * w[0].len());
            for (i, t) in w[0].iter().enumerate() {
                assert_eq!(t.split().to_vec(), w[1][2 * i..2 * i + 2].to_vec());
            }
        }
        // every grid point lies in some atomic triangle
        let atomic = levels.last().unwrap();
        for &p in c.points() {
            assert!(atomic.iter().any(|t| t.contains(p)));
        }
    }
}

#[test]
fn implicit_and_materialized_agree() {
    for m in 1..=6 {
        let c = Construction::build(m).unwrap();
        let s = Subdivision::new(m).unwrap();
        for &p in c.points() {
            assert_eq!(s.color_of(p).unwrap(), c.color_of(p).unwrap());
            assert_eq!(&s.owner(p).unwrap(), c.owner(p).unwrap());
            let color = c.color_of(p).unwrap();
            let kind = if color == Color::Red { TreeKind::Red } else { TreeKind::Blue };
            let t = c.tree(kind);
            let v = c.vertex(kind, p).unwrap();
            let mut want: Vec<GridPoint> = t.neighbors(v).iter().map(|&(w, _)| t.site(w).grid2().unwrap()).collect();
            let mut got = s.tree_neighbors(p).unwrap();
            want.sort();
            got.sort();
            assert_eq!(got, want, "m={m} p={p}");
            assert_eq!(s.is_leaf(p, color).unwrap(), c.leaves(color).contains(&p));
        }
        for &l in c.leaves(Color::Red) {
            assert_eq!(s.red_partner(l).unwrap(), c.leaf_partner(l, Color::Red).unwrap());
        }
        for &l in c.leaves(Color::Blue) {
            assert_eq!(s.blue_partner(l).unwrap(), c.leaf_partner(l, Color::Blue).unwrap());
        }
    }
}

#[test]
fn oversized_constructions_are_refused() {
    assert!(Construction::build(11).is_err());
    assert!(Construction::build(0).is_err());
    assert!(Subdivision::new(31).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn implicit_owner_is_on_its_segment(x in 0i64..1 << 20, y in 0i64..1 << 20) {
        let s = Subdivision::new(21).unwrap();
        let p = g(x, y);
        let seg = s.owner(p).unwrap();
        prop_assert!(seg.owns(p));
        prop_assert_eq!(s.color_of(p).unwrap(), seg.color);
        for q in s.tree_neighbors(p).unwrap() {
            prop_assert_eq!(s.color_of(q).unwrap(), seg.color);
            let d2 = p.dist2(q);
            prop_assert_eq!(d2, if seg.color == Color::Red { 1 } else { 2 });
        }
    }

    #[test]
    fn cover_distance_is_symmetric(a in 0usize..45, b in 0usize..45) {
        let c = Construction::build(3).unwrap();
        let cover: IndexedCover = c.main_cover();
        prop_assert_eq!(cover.cover_dist(a, b), cover.cover_dist(b, a));
    }
}
