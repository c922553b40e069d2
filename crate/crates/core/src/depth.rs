//! Lens depth and weighted (Fermat) lens depth.
//!
//! Both empirical depths are order-2 U-statistics: the fraction of sample
//! pairs `(X_i, X_j)` whose lens contains the query. Lens depth compares
//! base distances; weighted lens depth compares `L_p` lengths from a
//! [`LandmarkGraph`].

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::datagen::{stream_rng, PointSampler};
use crate::error::{Error, Result};
use crate::fermat::{LandmarkGraph, Sparsification};
use crate::metric::{DistanceMatrix, MetricSpace, Point};
use crate::scalar::{lit, Scalar};

/// Whether lens boundaries belong to the lens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TieRule {
    /// Closed balls: `d(x, x1) <= d(x1, x2)` and `d(x, x2) <= d(x1, x2)`.
    Closed,
    /// Open balls: both inequalities strict.
    Strict,
}

impl TieRule {
    #[inline]
    fn admits<T: Scalar>(self, to_end: T, radius: T) -> bool {
        match self {
            TieRule::Closed => to_end <= radius,
            TieRule::Strict => to_end < radius,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DepthKind {
    /// Lens depth under the base metric.
    Lens,
    /// Weighted lens depth with power parameter `p >= 1`.
    Weighted { p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthConfig {
    pub kind: DepthKind,
    pub tie_rule: TieRule,
    /// Only used by weighted depth.
    pub sparsification: Sparsification,
}

impl DepthConfig {
    /// Lens depth with closed balls.
    pub fn lens() -> Self {
        Self {
            kind: DepthKind::Lens,
            tie_rule: TieRule::Closed,
            sparsification: Sparsification::None,
        }
    }

    /// Weighted lens depth with strict inequalities on the complete graph.
    pub fn weighted(p: f64) -> Self {
        Self {
            kind: DepthKind::Weighted { p },
            tie_rule: TieRule::Strict,
            sparsification: Sparsification::None,
        }
    }

    pub fn with_tie_rule(mut self, tie_rule: TieRule) -> Self {
        self.tie_rule = tie_rule;
        self
    }

    pub fn with_sparsification(mut self, s: Sparsification) -> Self {
        self.sparsification = s;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let DepthKind::Weighted { p } = self.kind {
            if !(p >= 1.0) || !p.is_finite() {
                return Err(Error::InvalidPower(p));
            }
        }
        Ok(())
    }

    /// Short tag used in feature column names, e.g. `ld_1` or `wld_1.5`.
    pub fn tag(&self) -> String {
        match self.kind {
            DepthKind::Lens => "ld_1".to_string(),
            DepthKind::Weighted { p } => format!("wld_{p}"),
        }
    }
}

/// An empirical depth with its exact pair counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthValue {
    pub value: f64,
    /// Pairs whose lens contains the query.
    pub member_count: u64,
    /// `C(n, 2)`.
    pub pair_count: u64,
    /// Pairs where the query sat exactly on a lens boundary.
    pub ties: u64,
}

/// Is `x` in the lens of `(x1, x2)`?
pub fn lens_membership<T: Scalar>(
    x: &Point<T>,
    x1: &Point<T>,
    x2: &Point<T>,
    space: &MetricSpace<T>,
    tie_rule: TieRule,
) -> Result<bool> {
    let r = space.distance(x1, x2)?;
    let a = space.distance(x, x1)?;
    let b = space.distance(x, x2)?;
    Ok(tie_rule.admits(a, r) && tie_rule.admits(b, r))
}

/// Pair-counting kernel shared by both depths: `to_sample[i]` is the query's
/// length to `X_i`, `pair` the sample's own pairwise lengths.
fn count_lenses<T: Scalar>(to_sample: &[T], pair: &DistanceMatrix<T>, tie_rule: TieRule) -> DepthValue {
    let n = to_sample.len();
    let mut members = 0u64;
    let mut ties = 0u64;
    for i in 0..n {
        let di = to_sample[i];
        let row = pair.row(i);
        for j in (i + 1)..n {
            let r = row[j];
            let dj = to_sample[j];
            if tie_rule.admits(di, r) && tie_rule.admits(dj, r) {
                members += 1;
            }
            if di == r || dj == r {
                ties += 1;
            }
        }
    }
    let pairs = (n as u64) * (n as u64).saturating_sub(1) / 2;
    DepthValue {
        value: if pairs == 0 { 0.0 } else { members as f64 / pairs as f64 },
        member_count: members,
        pair_count: pairs,
        ties,
    }
}

fn need_two(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    Ok(())
}

/// Empirical lens depth of `x` with respect to `sample`.
pub fn empirical_lens_depth<T: Scalar>(
    x: &Point<T>,
    sample: &[Point<T>],
    space: &MetricSpace<T>,
    tie_rule: TieRule,
) -> Result<DepthValue> {
    need_two(sample.len())?;
    space.check_point(x)?;
    let pair = space.pairwise(sample)?;
    let dx = space.distances_to(x, sample);
    Ok(count_lenses(&dx, &pair, tie_rule))
}

/// Empirical weighted lens depth of `x` over the graph's sample.
pub fn empirical_wld<T: Scalar>(
    x: &Point<T>,
    graph: &LandmarkGraph<T>,
    tie_rule: TieRule,
) -> Result<DepthValue> {
    need_two(graph.len())?;
    let q = graph.query_lengths(x)?;
    Ok(count_lenses(&q.lengths, graph.apsp(), tie_rule))
}

/// A sample frozen for repeated depth queries under one [`DepthConfig`].
#[derive(Debug, Clone)]
pub enum DepthModel<T: Scalar> {
    Lens {
        sample: Vec<Point<T>>,
        space: MetricSpace<T>,
        pair: DistanceMatrix<T>,
        tie_rule: TieRule,
    },
    Weighted {
        graph: LandmarkGraph<T>,
        tie_rule: TieRule,
    },
}

impl<T: Scalar> DepthModel<T> {
    pub fn fit(sample: Vec<Point<T>>, space: MetricSpace<T>, config: &DepthConfig) -> Result<Self> {
        config.validate()?;
        need_two(sample.len())?;
        match config.kind {
            DepthKind::Lens => {
                let pair = space.pairwise(&sample)?;
                Ok(DepthModel::Lens {
                    sample,
                    space,
                    pair,
                    tie_rule: config.tie_rule,
                })
            }
            DepthKind::Weighted { p } => Ok(DepthModel::Weighted {
                graph: LandmarkGraph::build(sample, space, lit(p), config.sparsification)?,
                tie_rule: config.tie_rule,
            }),
        }
    }

    pub fn from_graph(graph: LandmarkGraph<T>, tie_rule: TieRule) -> Result<Self> {
        need_two(graph.len())?;
        Ok(DepthModel::Weighted { graph, tie_rule })
    }

    pub fn depth(&self, x: &Point<T>) -> Result<DepthValue> {
        match self {
            DepthModel::Lens {
                sample,
                space,
                pair,
                tie_rule,
            } => {
                space.check_point(x)?;
                Ok(count_lenses(&space.distances_to(x, sample), pair, *tie_rule))
            }
            DepthModel::Weighted { graph, tie_rule } => empirical_wld(x, graph, *tie_rule),
        }
    }

    pub fn depths(&self, queries: &[Point<T>]) -> Result<Vec<DepthValue>> {
        queries.par_iter().map(|q| self.depth(q)).collect()
    }
}

/// Depth of every query with respect to `sample`; the sample structure
/// (pairwise table or landmark graph) is built once.
pub fn batch_depth<T: Scalar>(
    queries: &[Point<T>],
    sample: &[Point<T>],
    space: &MetricSpace<T>,
    config: &DepthConfig,
) -> Result<Vec<DepthValue>> {
    let model = DepthModel::fit(sample.to_vec(), space.clone(), config)?;
    model.depths(queries)
}

/// Monte-Carlo estimate of the population lens depth with its binomial
/// standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
}

const ORACLE_CHUNK: usize = 1 << 16;

/// `P(x ∈ A(X1, X2))` estimated from `trials` independent pairs.
pub fn population_ld_oracle<T: Scalar, S: PointSampler<T>>(
    x: &Point<T>,
    sampler: &S,
    space: &MetricSpace<T>,
    trials: usize,
    tie_rule: TieRule,
    seed: u64,
) -> Result<PopulationEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    space.check_point(x)?;
    let chunks = trials.div_ceil(ORACLE_CHUNK);
    let hits: Result<u64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng: ChaCha8Rng = stream_rng(seed, c as u64);
            let len = ORACLE_CHUNK.min(trials - c * ORACLE_CHUNK);
            let mut hits = 0u64;
            for _ in 0..len {
                let a = sampler.sample(&mut rng);
                let b = sampler.sample(&mut rng);
                if lens_membership(x, &a, &b, space, tie_rule)? {
                    hits += 1;
                }
            }
            Ok(hits)
        })
        .sum();
    let est = hits? as f64 / trials as f64;
    Ok(PopulationEstimate {
        estimate: est,
        std_error: (est * (1.0 - est) / trials as f64).sqrt(),
        trials: trials as u64,
    })
}

/// Rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridNode {
    pub x: f64,
    pub y: f64,
    pub depth: f64,
}

/// Depth on an `nx × ny` lattice over `bounds`, ordered by `y` then `x`.
pub fn level_set_grid<T: Scalar>(
    sample: &[Point<T>],
    space: &MetricSpace<T>,
    config: &DepthConfig,
    bounds: GridBounds,
    resolution: (usize, usize),
) -> Result<Vec<GridNode>> {
    match space {
        MetricSpace::Euclidean { dim: 2 } => {}
        _ => {
            return Err(Error::InvalidParameter(
                "level sets need a 2-D euclidean space".into(),
            ))
        }
    }
    let (nx, ny) = resolution;
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidParameter("grid resolution must be at least 2x2".into()));
    }
    let axis = |lo: f64, hi: f64, k: usize, i: usize| lo + (hi - lo) * i as f64 / (k - 1) as f64;
    let mut coords = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            coords.push((
                axis(bounds.x_min, bounds.x_max, nx, i),
                axis(bounds.y_min, bounds.y_max, ny, j),
            ));
        }
    }
    let queries: Vec<Point<T>> = coords
        .iter()
        .map(|&(x, y)| Point::Euclidean(vec![lit(x), lit(y)]))
        .collect();
    let depths = batch_depth(&queries, sample, space, config)?;
    Ok(coords
        .into_iter()
        .zip(depths)
        .map(|((x, y), d)| GridNode { x, y, depth: d.value })
        .collect())
}

/// Two-sided Hoeffding bound `2 exp(-2 ⌊n/2⌋ δ²)` for an order-2
/// U-statistic with values in `[0, 1]`.
pub fn hoeffding_bound(n: usize, delta: f64) -> f64 {
    2.0 * (-2.0 * (n / 2) as f64 * delta * delta).exp()
}

/// One `(n, δ)` cell of [`hoeffding_rate_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoeffdingRow {
    pub n: usize,
    pub delta: f64,
    /// Fraction of replications with `|LD_n(x) - LD(x)| > δ`.
    pub observed: f64,
    pub bound: f64,
    /// Binomial standard error at `min(bound, 1)` over the replications.
    pub std_error: f64,
    pub median_deviation: f64,
}

impl HoeffdingRow {
    pub fn passes(&self) -> bool {
        self.observed <= self.bound + 3.0 * self.std_error
    }
}

/// `|LD_n(x) - population|` for `replications` independent samples of each
/// size. Replication `r` of size index `s` uses stream `s * replications + r`.
pub fn lens_depth_deviations<T: Scalar, S: PointSampler<T>>(
    sampler: &S,
    space: &MetricSpace<T>,
    x: &Point<T>,
    population: f64,
    sizes: &[usize],
    replications: usize,
    tie_rule: TieRule,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    sizes
        .iter()
        .enumerate()
        .map(|(si, &n)| {
            (0..replications)
                .into_par_iter()
                .map(|r| {
                    let mut rng = stream_rng(seed, (si * replications + r) as u64);
                    let sample: Vec<Point<T>> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
                    let d = empirical_lens_depth(x, &sample, space, tie_rule)?;
                    Ok((d.value - population).abs())
                })
                .collect()
        })
        .collect()
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len();
    if m == 0 {
        return f64::NAN;
    }
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

/// Compares observed tail frequencies of `|LD_n(x) - LD(x)|` with the
/// order-2 U-statistic Hoeffding bound, for every size and `δ`.
#[allow(clippy::too_many_arguments)]
pub fn hoeffding_rate_check<T: Scalar, S: PointSampler<T>>(
    sampler: &S,
    space: &MetricSpace<T>,
    x: &Point<T>,
    population: f64,
    sizes: &[usize],
    deltas: &[f64],
    replications: usize,
    seed: u64,
) -> Result<Vec<HoeffdingRow>> {
    if replications == 0 {
        return Err(Error::InvalidParameter("replications must be positive".into()));
    }
    let devs = lens_depth_deviations(
        sampler,
        space,
        x,
        population,
        sizes,
        replications,
        TieRule::Closed,
        seed,
    )?;
    let mut rows = Vec::new();
    for (&n, dev) in sizes.iter().zip(&devs) {
        let med = median(dev);
        for &delta in deltas {
            let exceed = dev.iter().filter(|&&d| d > delta).count();
            let bound = hoeffding_bound(n, delta);
            let q = bound.min(1.0);
            rows.push(HoeffdingRow {
                n,
                delta,
                observed: exceed as f64 / replications as f64,
                bound,
                std_error: (q * (1.0 - q) / replications as f64).sqrt(),
                median_deviation: med,
            });
        }
    }
    Ok(rows)
}

/// Default `δ` grid and replication count for [`hoeffding_rate_check`].
pub const HOEFFDING_DELTAS: [f64; 2] = [0.05, 0.1];
pub const HOEFFDING_REPLICATIONS: usize = 200;
