//! Depth-depth classification: per-class depth features followed by a
//! k-nearest-neighbour second stage.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::datagen::seeded_rng;
use crate::depth::{DepthConfig, DepthKind, DepthModel};
use crate::error::{Error, Result};
use crate::metric::{MetricSpace, Point};
use crate::scalar::Scalar;

/// Points with integer class labels, all in one metric space.
#[derive(Debug, Clone)]
pub struct LabeledDataset<T: Scalar> {
    pub points: Vec<Point<T>>,
    pub labels: Vec<usize>,
    pub space: MetricSpace<T>,
}

impl<T: Scalar> LabeledDataset<T> {
    pub fn new(points: Vec<Point<T>>, labels: Vec<usize>, space: MetricSpace<T>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: labels.len(),
            });
        }
        space.check_points(&points)?;
        Ok(Self { points, labels, space })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sorted distinct labels.
    pub fn classes(&self) -> Vec<usize> {
        let mut c = self.labels.clone();
        c.sort_unstable();
        c.dedup();
        c
    }

    pub fn class_points(&self, class: usize) -> Vec<Point<T>> {
        self.points
            .iter()
            .zip(&self.labels)
            .filter(|(_, &l)| l == class)
            .map(|(p, _)| p.clone())
            .collect()
    }

    pub fn subset(&self, idx: &[usize]) -> Self {
        Self {
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            space: self.space.clone(),
        }
    }

    /// Checks the invariants required for classification: at least two
    /// classes, each with at least two points.
    pub fn check_classifiable(&self) -> Result<()> {
        let classes = self.classes();
        if classes.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 classes, got {}",
                classes.len()
            )));
        }
        for c in classes {
            let n = self.labels.iter().filter(|&&l| l == c).count();
            if n < 2 {
                return Err(Error::TooFewPoints { needed: 2, got: n });
            }
        }
        Ok(())
    }

    /// Replaces every point by its index into a precomputed table of all
    /// pairwise distances, so later stages never recompute the metric.
    pub fn to_precomputed(&self) -> Result<Self> {
        let matrix = self.space.pairwise(&self.points)?;
        let dim = self.space.intrinsic_dim();
        Ok(Self {
            points: (0..self.len()).map(Point::Indexed).collect(),
            labels: self.labels.clone(),
            space: MetricSpace::precomputed(matrix, dim)?,
        })
    }
}

/// One feature column: depth with respect to `class` under `config`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureColumn {
    pub class: usize,
    pub config: DepthConfig,
}

impl FeatureColumn {
    pub fn name(&self) -> String {
        format!("depth_{}_{}", self.class, self.config.tag())
    }
}

/// Depth-depth feature matrix, one row per query.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthFeatures {
    pub columns: Vec<FeatureColumn>,
    pub rows: Vec<Vec<f64>>,
}

impl DepthFeatures {
    pub fn column_names(&self) -> Vec<String> {
        self.columns.iter().map(FeatureColumn::name).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Keeps the columns whose config matches `keep`.
    pub fn select(&self, keep: impl Fn(&DepthConfig) -> bool) -> Self {
        let idx: Vec<usize> = (0..self.columns.len())
            .filter(|&i| keep(&self.columns[i].config))
            .collect();
        Self {
            columns: idx.iter().map(|&i| self.columns[i]).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| idx.iter().map(|&i| r[i]).collect())
                .collect(),
        }
    }
}

/// Maps each query to its depths with respect to every training class,
/// for every config. Columns are ordered class-major.
pub fn depth_depth_transform<T: Scalar>(
    train: &LabeledDataset<T>,
    queries: &[Point<T>],
    configs: &[DepthConfig],
) -> Result<DepthFeatures> {
    train.check_classifiable()?;
    train.space.check_points(queries)?;
    let columns: Vec<FeatureColumn> = train
        .classes()
        .into_iter()
        .flat_map(|class| configs.iter().map(move |&config| FeatureColumn { class, config }))
        .collect();
    let per_column: Result<Vec<Vec<f64>>> = columns
        .par_iter()
        .map(|col| {
            let model = DepthModel::fit(train.class_points(col.class), train.space.clone(), &col.config)?;
            Ok(model.depths(queries)?.into_iter().map(|d| d.value).collect())
        })
        .collect();
    let per_column = per_column?;
    let rows = (0..queries.len())
        .map(|q| per_column.iter().map(|c| c[q]).collect())
        .collect();
    Ok(DepthFeatures { columns, rows })
}

/// Majority vote among the `k` nearest rows of `train`, nearest-first with
/// ties on distance broken by the smaller training index. Vote ties go to
/// the smallest class label.
fn knn_vote(dist_to_train: &mut [(f64, usize)], labels: &[usize], k: usize) -> usize {
    dist_to_train.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut votes: BTreeMap<usize, usize> = BTreeMap::new();
    for &(_, i) in dist_to_train.iter().take(k) {
        *votes.entry(labels[i]).or_default() += 1;
    }
    let best = votes.values().copied().max().unwrap_or(0);
    votes
        .into_iter()
        .find(|&(_, v)| v == best)
        .map(|(c, _)| c)
        .unwrap_or(labels[0])
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "k must satisfy 1 <= k <= {n}, got {k}"
        )));
    }
    Ok(())
}

/// k-NN in depth-feature space under the Euclidean distance.
pub fn knn_classify(
    train: &DepthFeatures,
    train_labels: &[usize],
    test: &DepthFeatures,
    k: usize,
) -> Result<Vec<usize>> {
    if train.column_names() != test.column_names() {
        return Err(Error::LayoutMismatch(format!(
            "train columns {:?} vs test columns {:?}",
            train.column_names(),
            test.column_names()
        )));
    }
    if train.len() != train_labels.len() {
        return Err(Error::DimensionMismatch {
            expected: train.len(),
            got: train_labels.len(),
        });
    }
    check_k(k, train.len())?;
    Ok(test
        .rows
        .par_iter()
        .map(|q| {
            let mut d: Vec<(f64, usize)> = train
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let s: f64 = q.iter().zip(r).map(|(a, b)| (a - b) * (a - b)).sum();
                    (s.sqrt(), i)
                })
                .collect();
            knn_vote(&mut d, train_labels, k)
        })
        .collect())
}

/// k-NN on the original metric.
pub fn raw_knn_classify<T: Scalar>(
    train: &LabeledDataset<T>,
    test: &[Point<T>],
    k: usize,
) -> Result<Vec<usize>> {
    check_k(k, train.len())?;
    train.space.check_points(test)?;
    Ok(test
        .par_iter()
        .map(|q| {
            let mut d: Vec<(f64, usize)> = train
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| (train.space.distance_unchecked(q, p).as_f64(), i))
                .collect();
            knn_vote(&mut d, &train.labels, k)
        })
        .collect())
}

pub fn misclassification_rate(predicted: &[usize], actual: &[usize]) -> Result<f64> {
    if predicted.len() != actual.len() {
        return Err(Error::DimensionMismatch {
            expected: actual.len(),
            got: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::Empty("misclassification_rate needs labels"));
    }
    let wrong = predicted.iter().zip(actual).filter(|(p, a)| p != a).count();
    Ok(wrong as f64 / actual.len() as f64)
}

/// Seeded random split. With `stratified`, each class contributes
/// `round(test_fraction * class size)` test points. Both halves keep the
/// original point order.
pub fn train_test_split<T: Scalar>(
    data: &LabeledDataset<T>,
    test_fraction: f64,
    seed: u64,
    stratified: bool,
) -> Result<(LabeledDataset<T>, LabeledDataset<T>)> {
    if !(0.0..=1.0).contains(&test_fraction) {
        return Err(Error::InvalidParameter(format!(
            "test fraction must be in [0,1], got {test_fraction}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let groups: Vec<Vec<usize>> = if stratified {
        data.classes()
            .into_iter()
            .map(|c| (0..data.len()).filter(|&i| data.labels[i] == c).collect())
            .collect()
    } else {
        vec![(0..data.len()).collect()]
    };
    let mut is_test = vec![false; data.len()];
    for mut g in groups {
        let take = (test_fraction * g.len() as f64).round() as usize;
        g.shuffle(&mut rng);
        for &i in &g[..take] {
            is_test[i] = true;
        }
    }
    let (test, train): (Vec<usize>, Vec<usize>) = (0..data.len()).partition(|&i| is_test[i]);
    Ok((data.subset(&train), data.subset(&test)))
}

/// CSV with header `depth_<class>_<kind>_<p>,...[,label]`. Values are
/// written in shortest round-trip form.
pub fn export_features_csv(features: &DepthFeatures, labels: Option<&[usize]>) -> Result<String> {
    if let Some(l) = labels {
        if l.len() != features.len() {
            return Err(Error::DimensionMismatch {
                expected: features.len(),
                got: l.len(),
            });
        }
    }
    let mut header = features.column_names();
    if labels.is_some() {
        header.push("label".into());
    }
    let mut out = header.join(",");
    out.push('\n');
    for (i, row) in features.rows.iter().enumerate() {
        let mut cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        if let Some(l) = labels {
            cells.push(l[i].to_string());
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn parse_column(name: &str, column: usize) -> Result<FeatureColumn> {
    let err = |m: &str| Error::Parse {
        line: 1,
        column,
        message: format!("{m}: {name:?}"),
    };
    let mut parts = name.splitn(4, '_');
    let (Some("depth"), Some(class), Some(kind), Some(p)) =
        (parts.next(), parts.next(), parts.next(), parts.next())
    else {
        return Err(err("expected depth_<class>_<kind>_<p>"));
    };
    let class: usize = class.parse().map_err(|_| err("bad class id"))?;
    let p: f64 = p.parse().map_err(|_| err("bad power"))?;
    let config = match kind {
        "ld" => DepthConfig::lens(),
        "wld" => DepthConfig::weighted(p),
        _ => return Err(err("unknown depth kind")),
    };
    Ok(FeatureColumn { class, config })
}

/// Inverse of [`export_features_csv`]. Tie rules and sparsification are not
/// stored and come back as the per-kind defaults.
pub fn read_features_csv(text: &str) -> Result<(DepthFeatures, Option<Vec<usize>>)> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "missing header".into(),
        });
    };
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let has_label = names.last() == Some(&"label");
    let n_feat = names.len() - usize::from(has_label);
    let columns = names[..n_feat]
        .iter()
        .enumerate()
        .map(|(c, n)| parse_column(n, c + 1))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != names.len() {
            return Err(Error::Parse {
                line: ln + 1,
                column: cells.len().min(names.len()) + 1,
                message: format!("expected {} fields, got {}", names.len(), cells.len()),
            });
        }
        let row = cells[..n_feat]
            .iter()
            .enumerate()
            .map(|(c, s)| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    line: ln + 1,
                    column: c + 1,
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
        if has_label {
            labels.push(cells[n_feat].parse::<usize>().map_err(|e| Error::Parse {
                line: ln + 1,
                column: n_feat + 1,
                message: e.to_string(),
            })?);
        }
    }
    Ok((DepthFeatures { columns, rows }, has_label.then_some(labels)))
}

/// Default k for the k-NN stages: `⌊n / 10⌋`, at least 1.
pub fn default_k(n: usize) -> usize {
    (n / 10).max(1)
}

/// Is `config` a weighted depth with one of the powers `ps`?
pub fn is_weighted_with(config: &DepthConfig, ps: &[f64]) -> bool {
    matches!(config.kind, DepthKind::Weighted { p } if ps.contains(&p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::gen_interlocking_rings;

    fn line_ds(v: &[(f64, usize)]) -> LabeledDataset<f64> {
        LabeledDataset::new(
            v.iter().map(|&(x, _)| Point::Euclidean(vec![x])).collect(),
            v.iter().map(|&(_, c)| c).collect(),
            MetricSpace::euclidean(1).unwrap(),
        )
        .unwrap()
    }

    fn feats(rows: Vec<Vec<f64>>, n_cols: usize) -> DepthFeatures {
        DepthFeatures {
            columns: (0..n_cols)
                .map(|c| FeatureColumn { class: c + 1, config: DepthConfig::lens() })
                .collect(),
            rows,
        }
    }

    #[test]
    fn column_counts() {
        let d = gen_interlocking_rings::<f64>(10, 0.5, 1).unwrap();
        let f = depth_depth_transform(&d, &d.points[..3], &[DepthConfig::lens()]).unwrap();
        assert_eq!(f.columns.len(), 2);
        let f = depth_depth_transform(
            &d,
            &d.points[..3],
            &[DepthConfig::weighted(1.0), DepthConfig::weighted(10.0)],
        )
        .unwrap();
        assert_eq!(f.columns.len(), 4);
        assert_eq!(f.column_names()[1], "depth_1_wld_10");
    }

    #[test]
    fn deepest_point_feature_vector() {
        // Class 1 around 0, class 2 far away around 100.
        let ds = line_ds(&[
            (-2.0, 1),
            (-1.0, 1),
            (0.0, 1),
            (1.0, 1),
            (2.0, 1),
            (100.0, 2),
            (101.0, 2),
            (102.0, 2),
        ]);
        let q = [Point::Euclidean(vec![0.0])];
        let f = depth_depth_transform(&ds, &q, &[DepthConfig::lens()]).unwrap();
        let direct = crate::depth::empirical_lens_depth(
            &q[0],
            &ds.class_points(1),
            &ds.space,
            crate::depth::TieRule::Closed,
        )
        .unwrap();
        assert_eq!(f.rows[0], vec![direct.value, 0.0]);
        assert!(direct.value >= 0.5);
    }

    #[test]
    fn class_too_small() {
        let ds = line_ds(&[(0.0, 1), (1.0, 1), (5.0, 2)]);
        assert!(matches!(
            depth_depth_transform(&ds, &[], &[DepthConfig::lens()]),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn knn_examples() {
        let train = feats(vec![vec![0.0, 1.0], vec![0.1, 0.9], vec![1.0, 0.0], vec![0.9, 0.2]], 2);
        let labels = [1, 1, 2, 2];
        let test = feats(vec![vec![0.9, 0.2]], 2);
        assert_eq!(knn_classify(&train, &labels, &test, 1).unwrap(), vec![2]);
        assert_eq!(knn_classify(&train, &[3, 3, 3, 3], &test, 3).unwrap(), vec![3]);
        let test = feats(vec![vec![0.05, 0.95], vec![0.95, 0.1]], 2);
        assert_eq!(knn_classify(&train, &labels, &test, 3).unwrap(), vec![1, 2]);
        let wrong = feats(vec![vec![0.0]], 1);
        assert!(matches!(
            knn_classify(&train, &labels, &wrong, 1),
            Err(Error::LayoutMismatch(_))
        ));
    }

    #[test]
    fn raw_knn_tie_goes_to_smallest_class() {
        let ds = line_ds(&[(-1.0, 2), (1.0, 1), (5.0, 1), (-5.0, 2)]);
        let q = [Point::Euclidean(vec![0.0]), Point::Euclidean(vec![5.0])];
        assert_eq!(raw_knn_classify(&ds, &q, 2).unwrap(), vec![1, 1]);
        assert_eq!(raw_knn_classify(&ds, &q[1..], 1).unwrap(), vec![1]);
    }

    #[test]
    fn misclassification_examples() {
        assert_eq!(misclassification_rate(&[1, 2], &[1, 2]).unwrap(), 0.0);
        assert_eq!(misclassification_rate(&[2, 1], &[1, 2]).unwrap(), 1.0);
        assert_eq!(misclassification_rate(&[1, 1, 2, 1], &[1, 1, 2, 2]).unwrap(), 0.25);
    }

    #[test]
    fn split_examples() {
        let d = gen_interlocking_rings::<f64>(300, 0.5, 1).unwrap();
        let (tr, te) = train_test_split(&d, 0.0, 1, true).unwrap();
        assert_eq!((tr.len(), te.len()), (600, 0));
        let (tr, te) = train_test_split(&d, 0.3, 1, true).unwrap();
        assert_eq!((tr.len(), te.len()), (420, 180));
        assert_eq!(te.labels.iter().filter(|&&l| l == 1).count(), 90);
        let (_, te2) = train_test_split(&d, 0.3, 1, true).unwrap();
        assert_eq!(te.points, te2.points);
        let (_, te3) = train_test_split(&d, 0.3, 2, false).unwrap();
        assert_eq!(te3.len(), 180);
        assert_ne!(te.points, te3.points);
    }

    #[test]
    fn features_csv_roundtrip() {
        let f = DepthFeatures {
            columns: vec![
                FeatureColumn { class: 1, config: DepthConfig::weighted(1.5) },
                FeatureColumn { class: 2, config: DepthConfig::lens() },
            ],
            rows: vec![vec![0.1 + 0.2, 1.0 / 3.0], vec![0.0, 1.0]],
        };
        let csv = export_features_csv(&f, Some(&[1, 2])).unwrap();
        assert!(csv.starts_with("depth_1_wld_1.5,depth_2_ld_1,label\n"));
        let (back, labels) = read_features_csv(&csv).unwrap();
        assert_eq!(back, f);
        assert_eq!(labels, Some(vec![1, 2]));

        let empty = DepthFeatures { columns: f.columns.clone(), rows: vec![] };
        let csv = export_features_csv(&empty, None).unwrap();
        assert_eq!(csv, "depth_1_wld_1.5,depth_2_ld_1\n");
        let bad = "depth_1_ld_1\nabc\n";
        assert!(matches!(read_features_csv(bad), Err(Error::Parse { line: 2, column: 1, .. })));
    }

    #[test]
    fn twelve_columns_for_six_powers() {
        let d = gen_interlocking_rings::<f64>(8, 0.5, 3).unwrap();
        let configs: Vec<_> = [1.0, 1.5, 2.0, 3.0, 5.0, 10.0].iter().map(|&p| DepthConfig::weighted(p)).collect();
        let f = depth_depth_transform(&d, &d.points, &configs).unwrap();
        let csv = export_features_csv(&f, Some(&d.labels)).unwrap();
        assert_eq!(csv.lines().next().unwrap().split(',').count(), 13);
    }
}
