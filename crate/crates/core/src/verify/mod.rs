//! Checkers for the quantitative properties of tree covers.
//!
//! Pair sweeps split the pair range across rayon workers and merge partial
//! reports by max-reduction; setting [`CheckParams::parallel`] to `false`
//! runs the same sweep on the calling thread.

pub mod cuts;
pub mod grid_checks;
pub mod strong;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{IndexedCover, Norm, Sampling, Site, StretchReport};

pub use cuts::{cell_cover_multiplicity, cut_decomposition, CutDecomposition, CutSide};
pub use grid_checks::{
    check_edge_discipline, check_partition, covering_radius, verify_lemma_cathetus, verify_lemma_interior,
    verify_theorem2, CoveringRadius, Theorem2Report,
};
pub use strong::{
    low_distance_check, minimal_strong_constant, strong_cover_check, Convention, LowDistanceOutcome, NeighborhoodDomain,
    StrongCoverParams, StrongOutcome,
};

/// Absolute tolerance on ratio comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Sweeps over at most this many pairs are exhaustive.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000_000;

/// Pairs drawn when a sweep is too large to be exhaustive.
pub const DEFAULT_SAMPLE: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckParams {
    /// Multiplicative bound the ratio is compared against, if any.
    pub bound: Option<f64>,
    /// Subtracted from the cover distance before dividing.
    pub additive_slack: f64,
    pub tolerance: f64,
    /// Force a seeded sample of this many pairs; otherwise the sweep is
    /// exhaustive up to [`EXHAUSTIVE_LIMIT`] pairs and samples
    /// [`DEFAULT_SAMPLE`] pairs beyond.
    pub sample: Option<u64>,
    pub seed: u64,
    pub norm: Norm,
    pub parallel: bool,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams {
            bound: None,
            additive_slack: 0.0,
            tolerance: DEFAULT_TOLERANCE,
            sample: None,
            seed: 0,
            norm: Norm::Euclidean,
            parallel: true,
        }
    }
}

impl CheckParams {
    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.additive_slack = slack;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn sampled(mut self, count: u64, seed: u64) -> Self {
        self.sample = Some(count);
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::domain("tolerance must be positive"));
        }
        if self.sample == Some(0) {
            return Err(Error::domain("sample count must be at least 1"));
        }
        Ok(())
    }
}

/// `(distance - slack) / metric`, with coincident sites at ratio 0 when the
/// numerator is not positive and a missing distance at `+inf`.
#[inline]
pub fn pair_ratio(distance: Option<f64>, metric: f64, slack: f64) -> f64 {
    match distance {
        None => f64::INFINITY,
        Some(d) => {
            let num = d - slack;
            if metric > 0.0 {
                num / metric
            } else if num > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        }
    }
}

/// Generic max-ratio sweep over the pairs `i < j` of `0..k`.
///
/// `ratio(i, j)` is evaluated for every pair when there are at most
/// [`EXHAUSTIVE_LIMIT`] of them (or a forced sample is not requested), and
/// for a seeded sample otherwise; reported pairs are `(i, j)` indices.
pub fn sweep_pairs<F>(k: usize, params: &CheckParams, ratio: F) -> Result<StretchReport>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    params.validate()?;
    let total = (k as u64) * (k as u64).saturating_sub(1) / 2;
    let sample = match params.sample {
        Some(c) => Some(c),
        None if total > EXHAUSTIVE_LIMIT => Some(DEFAULT_SAMPLE),
        None => None,
    };
    let report = match sample {
        None => {
            let row = |i: usize| {
                let mut r = StretchReport::empty(params.additive_slack, Sampling::Exhaustive);
                for j in i + 1..k {
                    r.observe(ratio(i, j), (i, j));
                }
                r
            };
            let empty = || StretchReport::empty(params.additive_slack, Sampling::Exhaustive);
            if params.parallel {
                (0..k).into_par_iter().map(row).reduce(empty, StretchReport::merge)
            } else {
                (0..k).map(row).fold(empty(), StretchReport::merge)
            }
        }
        Some(count) => {
            if k < 2 {
                return Err(Error::domain("sampling needs at least two points"));
            }
            let sampling = Sampling::Sample {
                count,
                seed: params.seed,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            let pairs: Vec<(usize, usize)> = (0..count)
                .map(|_| {
                    let i = rng.random_range(0..k);
                    let mut j = rng.random_range(0..k - 1);
                    if j >= i {
                        j += 1;
                    }
                    (i.min(j), i.max(j))
                })
                .collect();
            let chunk = |ps: &[(usize, usize)]| {
                let mut r = StretchReport::empty(params.additive_slack, sampling);
                for &(i, j) in ps {
                    r.observe(ratio(i, j), (i, j));
                }
                r
            };
            let empty = || StretchReport::empty(params.additive_slack, sampling);
            if params.parallel {
                pairs.par_chunks(4096).map(chunk).reduce(empty, StretchReport::merge)
            } else {
                pairs.chunks(4096).map(chunk).fold(empty(), StretchReport::merge)
            }
        }
    };
    Ok(match params.bound {
        Some(b) => report.with_bound(b, params.tolerance),
        None => StretchReport {
            tolerance: params.tolerance,
            ..report
        },
    })
}

/// Maximum over pairs of `ids` of `(cover distance - slack) / norm distance`.
/// The reported argmax holds point ids.
pub fn cover_stretch(cover: &IndexedCover, ids: &[usize], params: &CheckParams) -> Result<StretchReport> {
    let mut slots = Vec::with_capacity(ids.len());
    let mut sites: Vec<Site> = Vec::with_capacity(ids.len());
    for &id in ids {
        slots.push(cover.cover.slots(id)?);
        sites.push(
            cover
                .cover
                .site(id)
                .ok_or_else(|| Error::domain(format!("point {id} is in no tree")))?,
        );
    }
    let mut report = sweep_pairs(ids.len(), params, |i, j| {
        let metric = params.norm.distance(&sites[i], &sites[j]);
        pair_ratio(cover.slot_dist(slots[i], slots[j]), metric, params.additive_slack)
    })?;
    report.argmax = report.argmax.map(|(i, j)| (ids[i], ids[j]));
    Ok(report)
}

/// Reference sweep: exhaustive, single-threaded, distances by explicit
/// traversal of every tree.
pub fn cover_stretch_naive(cover: &IndexedCover, ids: &[usize], norm: Norm, slack: f64) -> Result<StretchReport> {
    let mut report = StretchReport::empty(slack, Sampling::Exhaustive);
    for (a, &p) in ids.iter().enumerate() {
        for &q in &ids[a + 1..] {
            let (sp, sq) = (cover.cover.slots(p)?, cover.cover.slots(q)?);
            let mut best: Option<f64> = None;
            for (i, (x, y)) in sp.iter().zip(sq).enumerate() {
                if let (Some(x), Some(y)) = (x, y) {
                    let d = cover.cover.trees[i].path_length_naive(*x, *y).value();
                    best = Some(best.map_or(d, |b| b.min(d)));
                }
            }
            let metric = norm.distance(&cover.cover.site(p).unwrap(), &cover.cover.site(q).unwrap());
            report.observe(pair_ratio(best, metric, slack), (p, q));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Construction, TreeKind};
    use crate::model::{Edge, ExactLength, GridPoint, Metric, TreeCover, WeightedTree};

    fn unit_path(k: i64) -> WeightedTree {
        let sites = (0..k).map(|i| Site::Grid2(GridPoint::new(i, 0))).collect();
        let edges = (0..k as usize - 1)
            .map(|i| Edge {
                u: i,
                v: i + 1,
                len: ExactLength::ONE.into(),
            })
            .collect();
        WeightedTree::new(Metric::Euclid2, sites, edges, Some(0)).unwrap()
    }

    #[test]
    fn collinear_path_has_stretch_one() {
        let cover = IndexedCover::new(TreeCover::on_shared_vertices(vec![unit_path(3)]).unwrap());
        let r = cover_stretch(&cover, &[0, 1, 2], &CheckParams::default().with_bound(1.0)).unwrap();
        assert_eq!(r.max_ratio, 1.0);
        assert_eq!(r.pairs_checked, 3);
        assert!(r.pass());
    }

    #[test]
    fn missing_point_is_infinite() {
        let mut c = TreeCover::on_shared_vertices(vec![unit_path(3)]).unwrap();
        c.points.insert(7, vec![None]);
        // give point 7 a location through a second tree it is absent from the first
        let t2 = unit_path(2);
        c.trees.push(t2);
        for s in c.points.values_mut() {
            s.push(None);
        }
        c.points.get_mut(&7).unwrap()[1] = Some(1);
        let cover = IndexedCover::new(TreeCover::new(c.trees, c.points).unwrap());
        let r = cover_stretch(&cover, &[0, 7], &CheckParams::default().with_bound(5.0)).unwrap();
        assert!(r.max_ratio.is_infinite());
        assert_eq!(r.argmax, Some((0, 7)));
        assert!(!r.pass());
    }

    #[test]
    fn indexed_parallel_and_naive_sweeps_agree() {
        for m in 1..=3 {
            let c = Construction::build(m).unwrap();
            for kinds in [&[TreeKind::Red, TreeKind::BluePrime][..], &[TreeKind::RedPrime, TreeKind::BluePrime]] {
                let cover = IndexedCover::new(c.cover(kinds));
                let ids: Vec<usize> = (0..c.points().len())
                    .filter(|&i| cover.cover.slots(i).unwrap().iter().any(Option::is_some))
                    .collect();
                for slack in [0.0, 12.0] {
                    let naive = cover_stretch_naive(&cover, &ids, Norm::Euclidean, slack).unwrap();
                    let par = cover_stretch(&cover, &ids, &CheckParams::default().with_slack(slack)).unwrap();
                    let seq = cover_stretch(&cover, &ids, &CheckParams::default().with_slack(slack).sequential())
                        .unwrap();
                    assert!((naive.max_ratio - par.max_ratio).abs() <= 1e-9 || naive.max_ratio == par.max_ratio);
                    assert_eq!(par, seq);
                    assert_eq!(naive.pairs_checked, par.pairs_checked);
                }
            }
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let c = Construction::build(3).unwrap();
        let cover = c.main_cover();
        let ids: Vec<usize> = (0..c.points().len()).collect();
        let p = CheckParams::default().sampled(5000, 11);
        let a = cover_stretch(&cover, &ids, &p).unwrap();
        let b = cover_stretch(&cover, &ids, &p.clone().sequential()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.pairs_checked, 5000);
        assert_eq!(a.sampling, Sampling::Sample { count: 5000, seed: 11 });
        assert!(cover_stretch(&cover, &ids, &CheckParams::default().sampled(0, 1)).is_err());
    }
}
