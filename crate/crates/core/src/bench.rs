//! End-to-end depth-depth classification benchmarks on the synthetic
//! examples: generate, split, compute depth features, classify, score.

use std::fmt::Write as _;

use crate::classify::{
    default_k, depth_depth_transform, knn_classify, misclassification_rate, raw_knn_classify,
    train_test_split, LabeledDataset,
};
use crate::datagen::{
    gen_interlocking_rings, gen_two_moons, gen_wishart_groups, RINGS_DEFAULT_RATE,
    WISHART_DEFAULT_M, WISHART_DEFAULT_SCALE,
};
use crate::depth::{DepthConfig, DepthKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchExample {
    Moons,
    Rings,
    Wishart,
}

impl std::str::FromStr for BenchExample {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "moons" => Ok(BenchExample::Moons),
            "rings" => Ok(BenchExample::Rings),
            "wishart" => Ok(BenchExample::Wishart),
            _ => Err(Error::InvalidParameter(format!(
                "unknown example {s:?} (expected moons, rings or wishart)"
            ))),
        }
    }
}

impl std::fmt::Display for BenchExample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BenchExample::Moons => "moons",
            BenchExample::Rings => "rings",
            BenchExample::Wishart => "wishart",
        })
    }
}

/// A second-stage input: raw points, or a set of depth configs stacked
/// into DD features.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    RawKnn,
    DepthDepth(Vec<DepthConfig>),
}

impl Method {
    pub fn weighted(ps: &[f64]) -> Self {
        Method::DepthDepth(ps.iter().map(|&p| DepthConfig::weighted(p)).collect())
    }

    pub fn name(&self) -> String {
        match self {
            Method::RawKnn => "raw-knn".into(),
            Method::DepthDepth(cfgs) => {
                let ps: Vec<String> = cfgs
                    .iter()
                    .map(|c| match c.kind {
                        DepthKind::Lens => "ld".to_string(),
                        DepthKind::Weighted { p } => p.to_string(),
                    })
                    .collect();
                format!("dd-wld p={{{}}}", ps.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSettings {
    pub example: BenchExample,
    pub n_per_group: usize,
    pub reps: usize,
    pub seed: u64,
    pub test_fraction: f64,
    pub methods: Vec<Method>,
    /// Second-stage k for DD features; default `⌊n_train / 10⌋`.
    pub dd_k: Option<usize>,
    /// k for raw k-NN; default `⌊n_per_group / 10⌋`.
    pub raw_k: Option<usize>,
    pub noise_sd: f64,
    pub ring_rate: f64,
    pub wishart_k: usize,
    pub wishart_m: usize,
    pub wishart_scale: f64,
}

impl BenchSettings {
    /// Defaults for each example: sample sizes, split fractions and the
    /// method columns of the corresponding experiment.
    pub fn for_example(example: BenchExample) -> Self {
        let (n_per_group, test_fraction, methods) = match example {
            BenchExample::Moons => (100, 0.3, vec![Method::RawKnn, Method::DepthDepth(vec![DepthConfig::lens()]), Method::weighted(&[2.0])]),
            BenchExample::Rings => (
                300,
                0.3,
                vec![
                    Method::RawKnn,
                    Method::weighted(&[1.0]),
                    Method::weighted(&[1.0, 10.0]),
                    Method::weighted(&[1.0, 1.5, 2.0, 3.0, 5.0, 10.0]),
                ],
            ),
            BenchExample::Wishart => (
                300,
                0.25,
                vec![
                    Method::weighted(&[1.0]),
                    Method::weighted(&[1.5]),
                    Method::weighted(&[2.0]),
                    Method::weighted(&[5.0]),
                    Method::RawKnn,
                ],
            ),
        };
        Self {
            example,
            n_per_group,
            reps: 1,
            seed: 0,
            test_fraction,
            methods,
            dd_k: None,
            raw_k: None,
            noise_sd: 0.1,
            ring_rate: RINGS_DEFAULT_RATE,
            wishart_k: 5,
            wishart_m: WISHART_DEFAULT_M,
            wishart_scale: WISHART_DEFAULT_SCALE,
        }
    }

    fn generate(&self, seed: u64) -> Result<LabeledDataset<f64>> {
        match self.example {
            BenchExample::Moons => gen_two_moons(self.n_per_group, self.noise_sd, seed),
            BenchExample::Rings => gen_interlocking_rings(self.n_per_group, self.ring_rate, seed),
            BenchExample::Wishart => gen_wishart_groups(
                self.n_per_group,
                self.wishart_k,
                self.wishart_m,
                self.wishart_scale,
                seed,
            ),
        }
    }
}

/// Misclassification rates, `errors[rep][method]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub settings: BenchSettings,
    pub method_names: Vec<String>,
    pub errors: Vec<Vec<f64>>,
}

impl BenchReport {
    pub fn mean_errors(&self) -> Vec<f64> {
        (0..self.method_names.len())
            .map(|m| self.errors.iter().map(|r| r[m]).sum::<f64>() / self.errors.len() as f64)
            .collect()
    }

    pub fn errors_of(&self, method: usize) -> Vec<f64> {
        self.errors.iter().map(|r| r[method]).collect()
    }

    /// Plain-text summary: one line per method.
    pub fn render(&self) -> String {
        let s = &self.settings;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "ddbench {} n_per_group={} reps={} seed={} test_fraction={}",
            s.example, s.n_per_group, s.reps, s.seed, s.test_fraction
        );
        let _ = writeln!(out, "{:<36} {:>10} {:>10}", "method", "mean_error", "sd");
        for (m, name) in self.method_names.iter().enumerate() {
            let e = self.errors_of(m);
            let mean = e.iter().sum::<f64>() / e.len() as f64;
            let sd = if e.len() > 1 {
                (e.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (e.len() - 1) as f64).sqrt()
            } else {
                0.0
            };
            let _ = writeln!(out, "{name:<36} {mean:>10.4} {sd:>10.4}");
        }
        out
    }
}

/// Runs one replication; returns one error rate per method.
pub fn run_replication(settings: &BenchSettings, rep: usize) -> Result<Vec<f64>> {
    let seed = settings.seed.wrapping_add(rep as u64);
    let data = settings.generate(seed)?.to_precomputed()?;
    let (train, test) = train_test_split(&data, settings.test_fraction, seed, true)?;
    if test.is_empty() {
        return Err(Error::InvalidParameter("test split is empty".into()));
    }
    let mut configs: Vec<DepthConfig> = Vec::new();
    for m in &settings.methods {
        if let Method::DepthDepth(c) = m {
            for cfg in c {
                if !configs.contains(cfg) {
                    configs.push(*cfg);
                }
            }
        }
    }
    let features = if configs.is_empty() {
        None
    } else {
        let mut queries = train.points.clone();
        queries.extend(test.points.iter().cloned());
        Some(depth_depth_transform(&train, &queries, &configs)?)
    };
    let dd_k = settings.dd_k.unwrap_or_else(|| default_k(train.len()));
    let raw_k = settings.raw_k.unwrap_or_else(|| default_k(settings.n_per_group));
    settings
        .methods
        .iter()
        .map(|m| {
            let predicted = match m {
                Method::RawKnn => raw_knn_classify(&train, &test.points, raw_k)?,
                Method::DepthDepth(cfgs) => {
                    let f = features
                        .as_ref()
                        .expect("depth features computed for DD methods")
                        .select(|c| cfgs.contains(c));
                    let mut train_f = f.clone();
                    train_f.rows.truncate(train.len());
                    let mut test_f = f;
                    test_f.rows.drain(..train.len());
                    knn_classify(&train_f, &train.labels, &test_f, dd_k)?
                }
            };
            misclassification_rate(&predicted, &test.labels)
        })
        .collect()
}

/// Runs `settings.reps` replications; replication `r` uses seed `seed + r`.
pub fn run_bench(settings: &BenchSettings) -> Result<BenchReport> {
    if settings.reps == 0 {
        return Err(Error::InvalidParameter("reps must be positive".into()));
    }
    let errors = (0..settings.reps)
        .map(|r| run_replication(settings, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchReport {
        settings: settings.clone(),
        method_names: settings.methods.iter().map(Method::name).collect(),
        errors,
    })
}
