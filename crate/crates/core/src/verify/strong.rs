//! Strong and low-distance tree cover checks on finite integer domains.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::DEFAULT_TOLERANCE;
use crate::error::{Error, Result};
use crate::model::{DistanceIndex, Norm, WeightedTree};

/// How a neighbourhood point missing from a tree is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// A missing point disqualifies the tree for that pair.
    Strict,
    /// Missing points are left out of the neighbourhood for that tree.
    Restricted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongCoverParams {
    pub c: f64,
    pub convention: Convention,
    pub norm: Norm,
    pub tolerance: f64,
}

impl StrongCoverParams {
    pub fn new(c: f64, convention: Convention, norm: Norm) -> Self {
        StrongCoverParams {
            c,
            convention,
            norm,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// A finite integer point set with its L∞ 1-neighbourhoods and the vertex of
/// every point in every tree.
#[derive(Debug, Clone)]
pub struct NeighborhoodDomain {
    pub points: Vec<[i64; 3]>,
    pub neighborhoods: Vec<Vec<usize>>,
    /// `slots[p][i]`: vertex of point `p` in tree `i`.
    pub slots: Vec<Vec<Option<usize>>>,
    pub indices: Vec<DistanceIndex>,
}

fn key(coords: &[i64]) -> [i64; 3] {
    let mut k = [0; 3];
    k[..coords.len()].copy_from_slice(coords);
    k
}

impl NeighborhoodDomain {
    /// `points` are integer coordinates (2 or 3 of them); tree vertices are
    /// matched to points by their integer coordinates.
    pub fn new(trees: &[WeightedTree], points: &[Vec<i64>]) -> Result<Self> {
        let dim = points.first().map_or(2, Vec::len);
        if !(2..=3).contains(&dim) || points.iter().any(|p| p.len() != dim) {
            return Err(Error::domain("domain points must all have 2 or all have 3 coordinates"));
        }
        let keys: Vec<[i64; 3]> = points.iter().map(|p| key(p)).collect();
        let pos: HashMap<[i64; 3], usize> = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        if pos.len() != keys.len() {
            return Err(Error::domain("duplicate domain point"));
        }
        let mut slots = vec![vec![None; trees.len()]; keys.len()];
        for (i, t) in trees.iter().enumerate() {
            for (v, s) in t.sites().iter().enumerate() {
                let c = s
                    .integer_coords()
                    .ok_or_else(|| Error::domain(format!("tree {i} has a non-integer vertex {v}")))?;
                if let Some(&p) = pos.get(&key(&c)) {
                    slots[p][i] = Some(v);
                }
            }
        }
        let offsets: Vec<[i64; 3]> = if dim == 2 {
            (-1..=1).flat_map(|a| (-1..=1).map(move |b| [a, b, 0])).collect()
        } else {
            (-1..=1)
                .flat_map(|a| (-1..=1).flat_map(move |b| (-1..=1).map(move |c| [a, b, c])))
                .collect()
        };
        let neighborhoods = keys
            .iter()
            .map(|k| {
                offsets
                    .iter()
                    .filter_map(|o| pos.get(&[k[0] + o[0], k[1] + o[1], k[2] + o[2]]).copied())
                    .collect()
            })
            .collect();
        Ok(NeighborhoodDomain {
            points: keys,
            neighborhoods,
            slots,
            indices: trees.iter().map(DistanceIndex::new).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn trees(&self) -> usize {
        self.indices.len()
    }

    fn point_dist(&self, norm: Norm, a: usize, b: usize) -> f64 {
        let (p, q) = (self.points[a], self.points[b]);
        let d = [(p[0] - q[0]) as f64, (p[1] - q[1]) as f64, (p[2] - q[2]) as f64];
        match norm {
            Norm::Euclidean => (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt(),
            Norm::Linf => d[0].abs().max(d[1].abs()).max(d[2].abs()),
        }
    }

    /// Largest ratio tree `i` shows over the neighbourhood pairs of `(x, y)`;
    /// `+inf` when the tree is disqualified under the strict convention.
    /// Returns the ratio and the neighbourhood pair attaining it.
    pub fn neighborhood_ratio(
        &self,
        i: usize,
        x: usize,
        y: usize,
        convention: Convention,
        norm: Norm,
    ) -> (f64, Option<(usize, usize)>) {
        let mut worst = (0.0, None);
        for &a in &self.neighborhoods[x] {
            for &b in &self.neighborhoods[y] {
                if a == b {
                    continue;
                }
                match (self.slots[a][i], self.slots[b][i]) {
                    (Some(va), Some(vb)) => {
                        let r = self.indices[i].dist(va, vb) / self.point_dist(norm, a, b);
                        if r > worst.0 || worst.1.is_none() {
                            worst = (r, Some((a, b)));
                        }
                    }
                    _ => {
                        if convention == Convention::Strict {
                            return (f64::INFINITY, Some((a, b)));
                        }
                    }
                }
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum StrongOutcome {
    Pass {
        pairs_checked: u64,
    },
    /// No tree works for `(x, y)`; `witnesses[i]` is the neighbourhood pair
    /// `(x′, y′)` and ratio that rule out tree `i`.
    Violation {
        x: [i64; 3],
        y: [i64; 3],
        witnesses: Vec<([i64; 3], [i64; 3], f64)>,
    },
}

impl StrongOutcome {
    pub fn pass(&self) -> bool {
        matches!(self, StrongOutcome::Pass { .. })
    }
}

/// For every pair `(x, y)` of the domain, `x = y` included, looks for one
/// tree whose distances stay within `C` times the point distance over all
/// pairs of the two 1-neighbourhoods. Reports the first pair in scan order
/// with no such tree.
pub fn strong_cover_check(domain: &NeighborhoodDomain, params: &StrongCoverParams) -> StrongOutcome {
    let n = domain.len();
    let limit = params.c + params.tolerance;
    let first = (0..n).into_par_iter().find_map_first(|x| {
        for y in x..n {
            let ok = (0..domain.trees())
                .any(|i| domain.neighborhood_ratio(i, x, y, params.convention, params.norm).0 <= limit);
            if !ok {
                return Some((x, y));
            }
        }
        None
    });
    match first {
        None => StrongOutcome::Pass {
            pairs_checked: (n as u64) * (n as u64 + 1) / 2,
        },
        Some((x, y)) => StrongOutcome::Violation {
            x: domain.points[x],
            y: domain.points[y],
            witnesses: (0..domain.trees())
                .map(|i| {
                    let (r, w) = domain.neighborhood_ratio(i, x, y, params.convention, params.norm);
                    let (a, b) = w.unwrap_or((x, y));
                    (domain.points[a], domain.points[b], r)
                })
                .collect(),
        },
    }
}

/// Smallest `C` the domain passes with, computed directly as the maximum
/// over pairs of the minimum over trees of the neighbourhood ratio, with
/// the pair attaining it.
pub fn minimal_strong_constant(domain: &NeighborhoodDomain, convention: Convention, norm: Norm) -> (f64, [i64; 3], [i64; 3]) {
    let n = domain.len();
    let best = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut row = (f64::NEG_INFINITY, x, x);
            for y in x..n {
                let need = (0..domain.trees())
                    .map(|i| domain.neighborhood_ratio(i, x, y, convention, norm).0)
                    .fold(f64::INFINITY, f64::min);
                if need > row.0 {
                    row = (need, x, y);
                }
            }
            row
        })
        .reduce(|| (f64::NEG_INFINITY, 0, 0), |a, b| if b.0 > a.0 { b } else { a });
    (best.0, domain.points[best.1], domain.points[best.2])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum LowDistanceOutcome {
    /// `worst` is the largest over adjacent pairs of the best tree distance.
    Pass { pairs_checked: u64, worst: f64 },
    /// No tree holds both points within distance `C`; `best` is the smallest
    /// tree distance found, if any tree holds both.
    Violation { x: [i64; 3], y: [i64; 3], best: Option<f64> },
}

impl LowDistanceOutcome {
    pub fn pass(&self) -> bool {
        matches!(self, LowDistanceOutcome::Pass { .. })
    }
}

/// Every pair of distinct domain points at L∞ distance at most 1 must be at
/// tree distance at most `c` in some tree holding both.
pub fn low_distance_check(domain: &NeighborhoodDomain, c: f64, tolerance: f64) -> LowDistanceOutcome {
    let n = domain.len();
    let best_dist = |x: usize, y: usize| -> Option<f64> {
        (0..domain.trees())
            .filter_map(|i| match (domain.slots[x][i], domain.slots[y][i]) {
                (Some(a), Some(b)) => Some(domain.indices[i].dist(a, b)),
                _ => None,
            })
            .min_by(f64::total_cmp)
    };
    let rows: Vec<std::result::Result<(u64, f64), (usize, usize, Option<f64>)>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut count = 0;
            let mut worst = 0.0f64;
            for &y in &domain.neighborhoods[x] {
                if y <= x {
                    continue;
                }
                count += 1;
                match best_dist(x, y) {
                    Some(d) if d <= c + tolerance => worst = worst.max(d),
                    other => return Err((x, y, other)),
                }
            }
            Ok((count, worst))
        })
        .collect();
    let mut pairs = 0;
    let mut worst = 0.0f64;
    for row in rows {
        match row {
            Ok((k, w)) => {
                pairs += k;
                worst = worst.max(w);
            }
            Err((x, y, best)) => {
                return LowDistanceOutcome::Violation {
                    x: domain.points[x],
                    y: domain.points[y],
                    best,
                }
            }
        }
    }
    LowDistanceOutcome::Pass {
        pairs_checked: pairs,
        worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Edge, GridPoint, Length, Metric, Site};

    fn star(center: [i64; 2], others: &[[i64; 2]]) -> WeightedTree {
        let mut sites = vec![Site::Grid2(GridPoint::new(center[0], center[1]))];
        let mut edges = Vec::new();
        for (k, o) in others.iter().enumerate() {
            sites.push(Site::Grid2(GridPoint::new(o[0], o[1])));
            let d = Metric::Linf2.distance(&sites[0], &sites[k + 1]);
            edges.push(Edge {
                u: 0,
                v: k + 1,
                len: Length::Real(d),
            });
        }
        WeightedTree::new(Metric::Linf2, sites, edges, Some(0)).unwrap()
    }

    #[test]
    fn single_point_domain_passes() {
        let t = star([0, 0], &[]);
        let d = NeighborhoodDomain::new(&[t], &[vec![0, 0]]).unwrap();
        let p = StrongCoverParams::new(1.0, Convention::Strict, Norm::Linf);
        assert!(strong_cover_check(&d, &p).pass());
    }

    #[test]
    fn two_point_stars_pass_with_one() {
        let t = star([0, 0], &[[1, 0]]);
        let d = NeighborhoodDomain::new(&[t.clone(), t], &[vec![0, 0], vec![1, 0]]).unwrap();
        let p = StrongCoverParams::new(1.0, Convention::Strict, Norm::Linf);
        assert!(strong_cover_check(&d, &p).pass());
        assert_eq!(minimal_strong_constant(&d, Convention::Strict, Norm::Linf).0, 1.0);
    }

    #[test]
    fn star_on_unit_square_has_low_distance_two() {
        let t = star([0, 0], &[[0, 1], [1, 0], [1, 1]]);
        let pts = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        let d = NeighborhoodDomain::new(&[t], &pts).unwrap();
        assert!(low_distance_check(&d, 2.0, 1e-9).pass());
        assert!(!low_distance_check(&d, 1.5, 1e-9).pass());
    }

    #[test]
    fn strict_convention_rejects_missing_points() {
        let t = star([0, 0], &[[1, 0]]);
        let d = NeighborhoodDomain::new(&[t], &[vec![0, 0], vec![1, 0], vec![2, 0]]).unwrap();
        let strict = StrongCoverParams::new(100.0, Convention::Strict, Norm::Linf);
        assert!(!strong_cover_check(&d, &strict).pass());
        let restricted = StrongCoverParams::new(1.0, Convention::Restricted, Norm::Linf);
        assert!(strong_cover_check(&d, &restricted).pass());
    }
}
