//! Power-weighted shortest paths over a sample: the empirical Fermat
//! length `L_p(x, y; X_n)`.
//!
//! Edge weights are `distance^p`. With `p > 1` long hops are penalized, so
//! optimal paths relay through dense regions of the sample.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::datagen::{stream_rng, PointSampler};
use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, MetricSpace, Point};
use crate::scalar::{pow, Scalar};

/// Which edges the sample graph keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sparsification {
    /// Complete graph (exact `L_p`).
    #[default]
    None,
    /// Symmetrized k-nearest-neighbour graph.
    Knn(usize),
}

impl std::fmt::Display for Sparsification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sparsification::None => write!(f, "none"),
            Sparsification::Knn(k) => write!(f, "knn{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct HeapEntry<T> {
    dist: T,
    node: usize,
}

impl<T: PartialOrd> PartialEq for HeapEntry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: PartialOrd> Eq for HeapEntry<T> {}
impl<T: PartialOrd> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: PartialOrd> Ord for HeapEntry<T> {
    // Reversed: BinaryHeap is a max-heap.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}

enum Adjacency {
    Complete,
    Lists(Vec<Vec<usize>>),
}

/// Binary-heap Dijkstra over `n` nodes with `weight(u, v)` on the edges
/// given by `adj`. Stops early once `target` is settled.
fn dijkstra<T: Scalar>(
    n: usize,
    source: usize,
    target: Option<usize>,
    adj: &Adjacency,
    weight: impl Fn(usize, usize) -> T,
) -> Vec<T> {
    let mut dist = vec![T::infinity(); n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = T::zero();
    heap.push(HeapEntry {
        dist: T::zero(),
        node: source,
    });
    while let Some(HeapEntry { dist: du, node: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if Some(u) == target {
            break;
        }
        let mut relax = |v: usize| {
            if done[v] {
                return;
            }
            let cand = du + weight(u, v);
            if cand < dist[v] {
                dist[v] = cand;
                heap.push(HeapEntry { dist: cand, node: v });
            }
        };
        match adj {
            Adjacency::Complete => (0..n).filter(|&v| v != u).for_each(&mut relax),
            Adjacency::Lists(lists) => lists[u].iter().copied().for_each(&mut relax),
        }
    }
    dist
}

/// Indices of the `k` smallest entries of `d` (ties by index), skipping `skip`.
fn k_nearest<T: Scalar>(d: &[T], k: usize, skip: Option<usize>) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..d.len()).filter(|&j| Some(j) != skip).collect();
    idx.sort_by(|&a, &b| {
        d[a].partial_cmp(&d[b])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    idx.truncate(k);
    idx
}

fn count_components(lists: &[Vec<usize>]) -> usize {
    let n = lists.len();
    let mut seen = vec![false; n];
    let mut components = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &v in &lists[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    components
}

fn check_power<T: Scalar>(p: T) -> Result<()> {
    if !(p >= T::one()) || !p.is_finite() {
        return Err(Error::InvalidPower(p.as_f64()));
    }
    Ok(())
}

/// A frozen sample with its all-pairs table of `L_p` lengths.
#[derive(Debug, Clone)]
pub struct LandmarkGraph<T: Scalar> {
    sample: Vec<Point<T>>,
    space: MetricSpace<T>,
    p: T,
    sparsification: Sparsification,
    weights: DistanceMatrix<T>,
    neighbors: Option<Vec<Vec<usize>>>,
    apsp: DistanceMatrix<T>,
}

impl<T: Scalar> LandmarkGraph<T> {
    /// Builds the graph and solves all-pairs shortest paths, one Dijkstra
    /// run per source.
    pub fn build(
        sample: Vec<Point<T>>,
        space: MetricSpace<T>,
        p: T,
        sparsification: Sparsification,
    ) -> Result<Self> {
        let mut g = Self::prepare(sample, space, p, sparsification)?;
        g.apsp = g.solve_apsp();
        Ok(g)
    }

    /// Reassembles a graph from a previously computed table (see
    /// [`crate::cache`]). Base distances are recomputed; the table is trusted.
    pub fn from_cached(
        sample: Vec<Point<T>>,
        space: MetricSpace<T>,
        p: T,
        sparsification: Sparsification,
        apsp: DistanceMatrix<T>,
    ) -> Result<Self> {
        if apsp.len() != sample.len() {
            return Err(Error::DimensionMismatch {
                expected: sample.len(),
                got: apsp.len(),
            });
        }
        let mut g = Self::prepare(sample, space, p, sparsification)?;
        g.apsp = apsp;
        Ok(g)
    }

    fn prepare(
        sample: Vec<Point<T>>,
        space: MetricSpace<T>,
        p: T,
        sparsification: Sparsification,
    ) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::Empty("landmark graph needs a non-empty sample"));
        }
        check_power(p)?;
        let n = sample.len();
        let base = space.pairwise(&sample)?;
        let weights = DistanceMatrix::from_raw(
            n,
            base.as_slice().iter().map(|&d| pow(d, p)).collect(),
        )?;
        let neighbors = match sparsification {
            Sparsification::None => None,
            Sparsification::Knn(k) => {
                if k == 0 || k >= n {
                    return Err(Error::InvalidParameter(format!(
                        "knn sparsification needs 1 <= k < n, got k={k}, n={n}"
                    )));
                }
                let mut lists: Vec<Vec<usize>> = (0..n)
                    .map(|i| k_nearest(base.row(i), k, Some(i)))
                    .collect();
                for i in 0..n {
                    for j in lists[i].clone() {
                        if !lists[j].contains(&i) {
                            lists[j].push(i);
                        }
                    }
                }
                for l in &mut lists {
                    l.sort_unstable();
                }
                let components = count_components(&lists);
                if components > 1 {
                    return Err(Error::Disconnected { k, components });
                }
                Some(lists)
            }
        };
        Ok(Self {
            sample,
            space,
            p,
            sparsification,
            weights,
            neighbors,
            apsp: DistanceMatrix::filled(0, T::zero()),
        })
    }

    fn adjacency(&self) -> Adjacency {
        match &self.neighbors {
            None => Adjacency::Complete,
            Some(l) => Adjacency::Lists(l.clone()),
        }
    }

    fn solve_apsp(&self) -> DistanceMatrix<T> {
        let n = self.sample.len();
        let adj = self.adjacency();
        let rows: Vec<Vec<T>> = (0..n)
            .into_par_iter()
            .map(|s| dijkstra(n, s, None, &adj, |u, v| self.weights.get(u, v)))
            .collect();
        let mut apsp = DistanceMatrix::filled(n, T::zero());
        for i in 0..n {
            for j in (i + 1)..n {
                // Both directions are valid path sums; keep the smaller so
                // the table is exactly symmetric.
                let v = rows[i][j].min(rows[j][i]);
                apsp.set(i, j, v);
                apsp.set(j, i, v);
            }
        }
        apsp
    }

    pub fn len(&self) -> usize {
        self.sample.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample.is_empty()
    }

    pub fn sample(&self) -> &[Point<T>] {
        &self.sample
    }

    pub fn space(&self) -> &MetricSpace<T> {
        &self.space
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn sparsification(&self) -> Sparsification {
        self.sparsification
    }

    /// `apsp[i][j] = L_p(X_i, X_j; X_n)`.
    pub fn apsp(&self) -> &DistanceMatrix<T> {
        &self.apsp
    }

    /// Powered edge weights `distance(X_i, X_j)^p`.
    pub fn weights(&self) -> &DistanceMatrix<T> {
        &self.weights
    }

    /// Sample indices a query attaches to, and its powered distances to
    /// every sample point.
    fn attach(&self, x: &Point<T>) -> Result<(Vec<usize>, Vec<T>)> {
        self.space.check_point(x)?;
        let d = self.space.distances_to(x, &self.sample);
        let attached = match self.sparsification {
            Sparsification::None => (0..d.len()).collect(),
            Sparsification::Knn(k) => k_nearest(&d, k, None),
        };
        let w = d.into_iter().map(|v| pow(v, self.p)).collect();
        Ok((attached, w))
    }

    /// `L_p(x, X_i; X_n)` for every sample index `i`.
    ///
    /// `x` enters the sample at a first hop `X_j` and then travels optimally
    /// inside it, so `lengths[i] = min_j (d(x, X_j)^p + apsp[j][i])` over the
    /// attached `j` (with `apsp[i][i] = 0` covering the direct edge).
    pub fn query_lengths(&self, x: &Point<T>) -> Result<QueryLengths<T>> {
        let (attached, w) = self.attach(x)?;
        let n = self.len();
        let mut lengths = vec![T::infinity(); n];
        for &j in &attached {
            let wj = w[j];
            let row = self.apsp.row(j);
            for (l, &a) in lengths.iter_mut().zip(row) {
                let cand = wj + a;
                if cand < *l {
                    *l = cand;
                }
            }
        }
        Ok(QueryLengths { lengths })
    }

    /// `L_p(x, y; X_n)` for two arbitrary points of the space.
    pub fn pair_length(&self, x: &Point<T>, y: &Point<T>) -> Result<T> {
        let from_x = self.query_lengths(x)?;
        let (attached, wy) = self.attach(y)?;
        let direct = match self.sparsification {
            Sparsification::None => pow(self.space.distance(x, y)?, self.p),
            Sparsification::Knn(_) => T::infinity(),
        };
        Ok(attached
            .iter()
            .map(|&i| from_x.lengths[i] + wy[i])
            .fold(direct, |m, v| m.min(v)))
    }
}

/// Fermat lengths from one query point to each sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryLengths<T: Scalar> {
    pub lengths: Vec<T>,
}

/// `L_p(x, y; sample)` by a single early-stopping Dijkstra run over the
/// complete graph on `sample ∪ {x, y}`. Cheaper than building a
/// [`LandmarkGraph`] when only one pair is needed.
pub fn landmark_length<T: Scalar>(
    sample: &[Point<T>],
    space: &MetricSpace<T>,
    p: T,
    x: &Point<T>,
    y: &Point<T>,
) -> Result<T> {
    check_power(p)?;
    space.check_point(x)?;
    space.check_point(y)?;
    space.check_points(sample)?;
    let n = sample.len() + 2;
    let node = |i: usize| -> &Point<T> {
        match i {
            0 => x,
            1 => y,
            _ => &sample[i - 2],
        }
    };
    let dist = dijkstra(n, 0, Some(1), &Adjacency::Complete, |u, v| {
        pow(space.distance_unchecked(node(u), node(v)), p)
    });
    Ok(dist[1])
}

/// One row of [`fermat_scaling_diagnostic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub mean: f64,
    pub stdev: f64,
}

impl ScalingRow {
    pub fn relative_stdev(&self) -> f64 {
        if self.mean == 0.0 {
            0.0
        } else {
            self.stdev / self.mean
        }
    }
}

/// Monte-Carlo distribution of `n^{(p-1)/d} · L_p(x0, y0; X_n)` for i.i.d.
/// samples of each size. Trial `t` of size `n` draws from its own stream,
/// so results do not depend on the thread count.
#[allow(clippy::too_many_arguments)]
pub fn fermat_scaling_diagnostic<T: Scalar, S: PointSampler<T>>(
    space: &MetricSpace<T>,
    sampler: &S,
    p: T,
    x0: &Point<T>,
    y0: &Point<T>,
    sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<ScalingRow>> {
    check_power(p)?;
    if space.distance(x0, y0)? <= T::zero() {
        return Err(Error::InvalidParameter("degenerate probe pair".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let d = space.intrinsic_dim() as f64;
    sizes
        .iter()
        .enumerate()
        .map(|(si, &n)| {
            if n == 0 {
                return Err(Error::InvalidParameter("sample size must be positive".into()));
            }
            let scale = (n as f64).powf((p.as_f64() - 1.0) / d);
            let stats: Result<Vec<f64>> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng: ChaCha8Rng = stream_rng(seed, (si * trials + t) as u64);
                    let sample: Vec<Point<T>> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
                    let l = landmark_length(&sample, space, p, x0, y0)?;
                    Ok(scale * l.as_f64())
                })
                .collect();
            let stats = stats?;
            let mean = stats.iter().sum::<f64>() / trials as f64;
            let var = if trials > 1 {
                stats.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
            } else {
                0.0
            };
            Ok(ScalingRow {
                n,
                mean,
                stdev: var.sqrt(),
            })
        })
        .collect()
}

/// Exhaustive reference computations, independent of the Dijkstra path.
pub mod oracle {
    use super::*;

    /// Largest `|points ∪ {x, y}|` the enumeration accepts.
    pub const MAX_LANDMARKS: usize = 10;

    /// Exact `L_p(x, y; points)` by enumerating every simple path whose
    /// intermediates are drawn from `points`. Partial sums are accumulated
    /// left to right from `x`; branches whose partial sum already reaches
    /// the best complete sum are cut (weights are nonnegative).
    pub fn lp_oracle<T: Scalar>(
        points: &[Point<T>],
        x: &Point<T>,
        y: &Point<T>,
        p: T,
        space: &MetricSpace<T>,
    ) -> Result<T> {
        check_power(p)?;
        let mut distinct: Vec<&Point<T>> = Vec::new();
        for q in points.iter().chain([x, y]) {
            if !distinct.contains(&q) {
                distinct.push(q);
            }
        }
        if distinct.len() > MAX_LANDMARKS {
            return Err(Error::TooManyLandmarks {
                limit: MAX_LANDMARKS,
                got: distinct.len(),
            });
        }
        space.check_point(x)?;
        space.check_point(y)?;
        space.check_points(points)?;
        let w = |a: &Point<T>, b: &Point<T>| -> Result<T> { Ok(pow(space.distance(a, b)?, p)) };
        let m = points.len();
        let to_y: Vec<T> = points.iter().map(|q| w(q, y)).collect::<Result<_>>()?;
        let mut hop = vec![T::zero(); m * m];
        for i in 0..m {
            for j in 0..m {
                hop[i * m + j] = w(&points[i], &points[j])?;
            }
        }
        let from_x: Vec<T> = points.iter().map(|q| w(x, q)).collect::<Result<_>>()?;

        struct Search<'a, T> {
            m: usize,
            hop: &'a [T],
            to_y: &'a [T],
            used: Vec<bool>,
            best: T,
        }
        impl<T: Scalar> Search<'_, T> {
            fn walk(&mut self, at: usize, partial: T) {
                let done = partial + self.to_y[at];
                if done < self.best {
                    self.best = done;
                }
                for next in 0..self.m {
                    if self.used[next] {
                        continue;
                    }
                    let s = partial + self.hop[at * self.m + next];
                    if s >= self.best {
                        continue;
                    }
                    self.used[next] = true;
                    self.walk(next, s);
                    self.used[next] = false;
                }
            }
        }

        let mut search = Search {
            m,
            hop: &hop,
            to_y: &to_y,
            used: vec![false; m],
            best: w(x, y)?,
        };
        for first in 0..m {
            if from_x[first] >= search.best {
                continue;
            }
            search.used[first] = true;
            search.walk(first, from_x[first]);
            search.used[first] = false;
        }
        Ok(search.best)
    }
}

#[cfg(test)]
mod tests {
    use super::oracle::lp_oracle;
    use super::*;
    use proptest::prelude::*;

    fn line(v: &[f64]) -> Vec<Point<f64>> {
        v.iter().map(|&x| Point::Euclidean(vec![x])).collect()
    }

    fn pt(x: f64) -> Point<f64> {
        Point::Euclidean(vec![x])
    }

    fn space1() -> MetricSpace<f64> {
        MetricSpace::euclidean(1).unwrap()
    }

    #[test]
    fn line_p2_relays_through_middle() {
        let g = LandmarkGraph::build(line(&[0.0, 1.0, 2.0]), space1(), 2.0, Sparsification::None)
            .unwrap();
        assert_eq!(g.apsp().get(0, 2), 2.0);
        assert_eq!(g.apsp().get(2, 0), 2.0);
        assert_eq!(g.apsp().get(0, 1), 1.0);
    }

    #[test]
    fn line_p1_uses_direct_edge() {
        let g = LandmarkGraph::build(line(&[0.0, 1.0, 2.0]), space1(), 1.0, Sparsification::None)
            .unwrap();
        assert_eq!(g.apsp().get(0, 2), 2.0);
    }

    #[test]
    fn query_lengths_examples() {
        let s = line(&[0.0, 1.0, 2.0]);
        let g2 = LandmarkGraph::build(s.clone(), space1(), 2.0, Sparsification::None).unwrap();
        let q = g2.query_lengths(&pt(0.9)).unwrap().lengths;
        // Enumerated by hand: 0.9² = 0.81; 0.1² = 0.01; via 1: 0.01 + 1.
        let expect = [0.81, 0.01, 1.01];
        for (a, b) in q.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{q:?}");
        }
        let g1 = LandmarkGraph::build(s.clone(), space1(), 1.0, Sparsification::None).unwrap();
        let q = g1.query_lengths(&pt(0.9)).unwrap().lengths;
        for (a, b) in q.iter().zip([0.9, 0.1, 1.1]) {
            assert!((a - b).abs() < 1e-12);
        }
        for (i, x) in s.iter().enumerate() {
            assert_eq!(g2.query_lengths(x).unwrap().lengths[i], 0.0);
        }
    }

    #[test]
    fn oracle_examples() {
        let s = space1();
        assert_eq!(lp_oracle(&line(&[1.0]), &pt(0.0), &pt(2.0), 2.0, &s).unwrap(), 2.0);
        assert_eq!(lp_oracle(&[], &pt(0.0), &pt(2.0), 2.0, &s).unwrap(), 4.0);
        assert_eq!(lp_oracle(&line(&[1.0]), &pt(0.0), &pt(2.0), 1.0, &s).unwrap(), 2.0);
        let many = line(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]);
        assert!(matches!(
            lp_oracle(&many, &pt(0.0), &pt(10.0), 2.0, &s),
            Err(Error::TooManyLandmarks { .. })
        ));
    }

    #[test]
    fn errors() {
        let s = space1();
        assert!(matches!(
            LandmarkGraph::build(vec![], s.clone(), 2.0, Sparsification::None),
            Err(Error::Empty(_))
        ));
        assert!(matches!(
            LandmarkGraph::build(line(&[0.0, 1.0]), s.clone(), 0.5, Sparsification::None),
            Err(Error::InvalidPower(_))
        ));
        let g = LandmarkGraph::build(line(&[0.0, 1.0]), s, 2.0, Sparsification::None).unwrap();
        assert!(g.query_lengths(&Point::Euclidean(vec![0.0, 1.0])).is_err());
    }

    #[test]
    fn disconnected_knn_reports_components() {
        let s = line(&[0.0, 0.1, 0.2, 10.0, 10.1, 10.2]);
        let err = LandmarkGraph::build(s, space1(), 2.0, Sparsification::Knn(2)).unwrap_err();
        assert_eq!(err, Error::Disconnected { k: 2, components: 2 });
    }

    #[test]
    fn knn_full_matches_complete() {
        let s = line(&[0.0, 0.3, 1.7, 2.0, 5.5, 6.1, 9.0]);
        let full = LandmarkGraph::build(s.clone(), space1(), 3.0, Sparsification::None).unwrap();
        let knn = LandmarkGraph::build(s, space1(), 3.0, Sparsification::Knn(6)).unwrap();
        assert_eq!(full.apsp(), knn.apsp());
    }

    #[test]
    fn pair_length_matches_oracle() {
        let s = line(&[0.3, 1.1, 1.9, 2.4]);
        let g = LandmarkGraph::build(s.clone(), space1(), 2.0, Sparsification::None).unwrap();
        let (x, y) = (pt(-0.2), pt(3.0));
        let a = g.pair_length(&x, &y).unwrap();
        let b = lp_oracle(&s, &x, &y, 2.0, &space1()).unwrap();
        let c = landmark_length(&s, &space1(), 2.0, &x, &y).unwrap();
        assert!((a - b).abs() < 1e-12 && (c - b).abs() < 1e-12);
    }

    #[test]
    fn overflow_propagates_as_infinity() {
        let s = line(&[0.0, 1e200]);
        let g = LandmarkGraph::build(s, space1(), 3.0, Sparsification::None).unwrap();
        assert!(g.apsp().get(0, 1).is_infinite());
        assert_eq!(g.apsp().get(0, 0), 0.0);
    }

    fn pts2(v: &[(f64, f64)]) -> Vec<Point<f64>> {
        v.iter().map(|&(a, b)| Point::Euclidean(vec![a, b])).collect()
    }

    proptest! {
        #[test]
        fn table_invariants(
            raw in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..12),
            p in 1.0f64..6.0,
        ) {
            let s = pts2(&raw);
            let sp = MetricSpace::euclidean(2).unwrap();
            let g = LandmarkGraph::build(s.clone(), sp.clone(), p, Sparsification::None).unwrap();
            let n = s.len();
            for i in 0..n {
                prop_assert_eq!(g.apsp().get(i, i), 0.0);
                for j in 0..n {
                    let a = g.apsp().get(i, j);
                    prop_assert_eq!(a, g.apsp().get(j, i));
                    prop_assert!(a <= g.weights().get(i, j));
                    for k in 0..n {
                        let relay = g.apsp().get(i, k) + g.apsp().get(k, j);
                        prop_assert!(a <= relay * (1.0 + 1e-12));
                    }
                }
            }
        }

        #[test]
        fn p1_equals_base_distance(raw in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..12)) {
            let s = pts2(&raw);
            let sp = MetricSpace::euclidean(2).unwrap();
            let g = LandmarkGraph::build(s.clone(), sp.clone(), 1.0, Sparsification::None).unwrap();
            for i in 0..s.len() {
                for j in 0..s.len() {
                    let d = sp.distance(&s[i], &s[j]).unwrap();
                    prop_assert!((g.apsp().get(i, j) - d).abs() <= 1e-9);
                }
            }
        }

        #[test]
        fn landmark_monotonicity(
            raw in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..7),
            cut in 0usize..7,
            p in 1.0f64..5.0,
        ) {
            let sp = MetricSpace::euclidean(2).unwrap();
            let big = pts2(&raw);
            let small = &big[..cut.min(big.len())];
            let (x, y) = (Point::Euclidean(vec![-3.5, 0.0]), Point::Euclidean(vec![3.5, 0.2]));
            let lb = lp_oracle(&big, &x, &y, p, &sp).unwrap();
            let ls = lp_oracle(small, &x, &y, p, &sp).unwrap();
            prop_assert!(lb <= ls);
        }
    }

    #[test]
    fn single_precision_graph() {
        let s: Vec<Point<f32>> = [0.0f32, 1.0, 2.0].iter().map(|&x| Point::Euclidean(vec![x])).collect();
        let g = LandmarkGraph::build(s, MetricSpace::euclidean(1).unwrap(), 2.0f32, Sparsification::None)
            .unwrap();
        assert_eq!(g.apsp().get(0, 2), 2.0f32);
    }
}
