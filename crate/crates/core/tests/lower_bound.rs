use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tree_cover::lower_bound::{centroid, in_arc, one_tree_witness, two_color, CircleInstance};

/// Largest ratio over every consecutive red-blue pair outside the arc,
/// recomputed from scratch.
fn brute_best(inst: &CircleInstance) -> f64 {
    let c = centroid(&inst.tree);
    let (red, blue) = two_color(&inst.tree, c).unwrap();
    let n = inst.n;
    let mut best = f64::NEG_INFINITY;
    for j in 0..n {
        let k = (j + 1) % n;
        let colored = |v: usize| (red.contains(&v), blue.contains(&v));
        let (a, b) = (colored(j), colored(k));
        let split = (a.0 && b.1) || (a.1 && b.0);
        if split && !in_arc(n, c, j) && !in_arc(n, c, k) {
            let d = inst.tree.path_length_naive(j, k).value();
            best = best.max(d / inst.points[j].dist(inst.points[k]));
        }
    }
    best
}

#[test]
fn star_of_twelve() {
    let inst = CircleInstance::star(12, 0).unwrap();
    let w = one_tree_witness(&inst).unwrap();
    assert_eq!(w.centroid, 0);
    assert!(w.ratio >= 12.0 / PI);
    assert!((w.ratio - brute_best(&inst)).abs() < 1e-12);
}

#[test]
fn circle_path_of_hundred() {
    let inst = CircleInstance::circle_path(100).unwrap();
    let w = one_tree_witness(&inst).unwrap();
    assert!(w.ratio >= 100.0 / PI, "{}", w.ratio);
    assert!((w.ratio - brute_best(&inst)).abs() < 1e-9);
}

#[test]
fn witnesses_are_self_consistent() {
    for seed in 0..30 {
        let inst = CircleInstance::random(12, seed).unwrap();
        let Ok(w) = one_tree_witness(&inst) else { continue };
        let d = inst.tree.path_length_naive(w.r, w.b).value();
        let e = inst.points[w.r].dist(inst.points[w.b]);
        assert!((w.ratio - d / e).abs() < 1e-12);
        assert!((e - inst.chord()).abs() < 1e-12);
        assert!(w.red.contains(&w.r) && w.blue.contains(&w.b));
    }
}

#[test]
fn consecutive_points_are_one_chord_apart() {
    let inst = CircleInstance::circle_path(37).unwrap();
    for j in 0..37 {
        let d = inst.points[j].dist(inst.points[(j + 1) % 37]);
        assert!((d - 2.0 * (PI / 37.0).sin()).abs() < 1e-12);
    }
}

#[test]
fn color_classes_are_large() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let inst = CircleInstance::random(50, rng.random()).unwrap();
        let c = centroid(&inst.tree);
        let (red, blue) = two_color(&inst.tree, c).unwrap();
        assert!(red.len() >= 49 / 3 && blue.len() >= 49 / 3, "{} {}", red.len(), blue.len());
        assert_eq!(red.len() + blue.len(), 49);
        // no tree edge joins the two classes
        for e in inst.tree.edges() {
            assert!(!(red.contains(&e.u) && blue.contains(&e.v)));
            assert!(!(blue.contains(&e.u) && red.contains(&e.v)));
        }
    }
}

/// Largest component of `T − v` by flood fill.
fn heaviest_component(inst: &CircleInstance, v: usize) -> usize {
    let n = inst.n;
    let mut seen = vec![false; n];
    seen[v] = true;
    let mut best = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for &(y, _) in inst.tree.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        best = best.max(size);
    }
    best
}

#[test]
fn centroid_matches_brute_force() {
    for seed in 0..20 {
        let inst = CircleInstance::random(41, seed).unwrap();
        let want = (0..41).min_by_key(|&v| (heaviest_component(&inst, v), v)).unwrap();
        assert_eq!(centroid(&inst.tree), want);
        assert!(heaviest_component(&inst, want) <= 20);
    }
}
