use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lensdepth::bench::{run_bench, BenchExample, BenchSettings};
use lensdepth::cache::ApspCache;
use lensdepth::classify::{depth_depth_transform, export_features_csv};
use lensdepth::datagen::{
    gen_bivariate_exponential, gen_interlocking_rings, gen_ring_uniform, gen_two_moons,
    gen_wishart_groups, RINGS_DEFAULT_RATE,
};
use lensdepth::depth::{level_set_grid, GridBounds};
use lensdepth::io::{
    read_distance_matrix_csv, read_point_csv, read_spd_csv, write_point_csv, write_spd_csv,
    PointFile,
};
use lensdepth::metric::validate_distance_matrix;
use lensdepth::{
    DepthConfig, DepthKind, DepthModel, DistanceMatrix, LabeledDataset, MetricSpace, Point, Sparsification,
    TieRule,
};

#[derive(Parser)]
#[command(name = "lensdepth", version, about = "Lens depth and Fermat-weighted lens depth")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset as CSV.
    Gen(GenArgs),
    /// Depth of query points with respect to a sample.
    Depth(DepthArgs),
    /// Depth on a regular 2-D grid.
    Levelset(LevelsetArgs),
    /// Depth-depth feature matrix for an external classifier.
    Ddfeatures(DdFeaturesArgs),
    /// Run a depth-depth classification benchmark.
    Ddbench(DdBenchArgs),
    /// Check a distance-matrix CSV.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Rings,
    Moons,
    RingUniform,
    Exponential,
    Wishart,
}

#[derive(Args)]
struct GenArgs {
    family: Family,
    /// Points per class (rings, moons, wishart) or total points.
    #[arg(long, default_value_t = 300)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Two-moons noise standard deviation.
    #[arg(long, default_value_t = 0.1)]
    noise_sd: f64,
    /// Rate of the radial exponential in the rings model.
    #[arg(long, default_value_t = RINGS_DEFAULT_RATE)]
    rate: f64,
    /// Wishart matrix size.
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Wishart degrees of freedom.
    #[arg(long, default_value_t = 10)]
    m: usize,
    /// Covariance scale of the second Wishart group.
    #[arg(long, default_value_t = 2.0)]
    scale: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Metric {
    Euclidean,
    Spd,
    Precomputed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    Closed,
    Strict,
}

#[derive(Args, Clone)]
struct DataArgs {
    /// Sample file: point CSV, SPD CSV, or distance-matrix CSV.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value = "euclidean")]
    metric: Metric,
    /// Intrinsic dimension for precomputed metrics.
    #[arg(long, default_value_t = 1)]
    intrinsic_dim: usize,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Lens depth under the base metric.
    #[arg(long, conflicts_with = "p")]
    ld: bool,
    /// Weighted lens depth power(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    /// Tie rule; default closed for LD, strict for WLD.
    #[arg(long, value_enum)]
    tie: Option<Tie>,
    /// Keep only a symmetrized k-NN graph for WLD.
    #[arg(long)]
    knn: Option<usize>,
}

impl ConfigArgs {
    fn configs(&self) -> Result<Vec<DepthConfig>> {
        let mut out: Vec<DepthConfig> = if self.ld || self.p.is_empty() {
            vec![DepthConfig::lens()]
        } else {
            self.p.iter().map(|&p| DepthConfig::weighted(p)).collect()
        };
        for c in &mut out {
            if let Some(t) = self.tie {
                c.tie_rule = match t {
                    Tie::Closed => TieRule::Closed,
                    Tie::Strict => TieRule::Strict,
                };
            }
            if let Some(k) = self.knn {
                c.sparsification = Sparsification::Knn(k);
            }
            c.validate()?;
        }
        Ok(out)
    }
}

#[derive(Args)]
struct DepthArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Query file in the same format (default: the sample itself).
    #[arg(long)]
    queries: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LevelsetArgs {
    /// 2-D point CSV.
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
    /// Grid bounds xmin,xmax,ymin,ymax (default: bounding box of the data).
    #[arg(long, allow_hyphen_values = true)]
    bounds: Option<String>,
    /// Grid resolution nx,ny.
    #[arg(long, default_value = "50,50")]
    res: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DdFeaturesArgs {
    /// Labelled training sample.
    #[command(flatten)]
    data: DataArgs,
    /// Query file (default: the training sample).
    #[arg(long)]
    queries: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DdBenchArgs {
    example: String,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Points per class.
    #[arg(long)]
    n: Option<usize>,
    /// k for the depth-feature k-NN stage.
    #[arg(long)]
    k: Option<usize>,
    /// k for raw k-NN.
    #[arg(long)]
    raw_k: Option<usize>,
    #[arg(long)]
    test_fraction: Option<f64>,
}

#[derive(Args)]
struct ValidateArgs {
    matrix: PathBuf,
    /// Also scan the triangle inequality (O(n³)).
    #[arg(long)]
    triangle: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn parse_list<V: std::str::FromStr>(text: &str, count: usize, flag: &str) -> Result<Vec<V>> {
    let out = text
        .split(',')
        .map(|f| f.trim().parse::<V>().map_err(|_| anyhow::anyhow!("{flag}: bad value {f:?}")))
        .collect::<Result<Vec<_>>>()?;
    if out.len() != count {
        bail!("{flag} expects {count} comma-separated values, got {}", out.len());
    }
    Ok(out)
}

fn load(path: &Path, metric: Metric, intrinsic_dim: usize) -> Result<PointFile<f64>> {
    let text = read(path)?;
    let ctx = || format!("parsing {}", path.display());
    Ok(match metric {
        Metric::Euclidean => read_point_csv(&text).with_context(ctx)?,
        Metric::Spd => read_spd_csv(&text).with_context(ctx)?,
        Metric::Precomputed => {
            let raw = read_distance_matrix_csv::<f64>(&text).with_context(ctx)?;
            let n = raw.len();
            let m = DistanceMatrix::new(n, raw.as_slice().to_vec()).with_context(ctx)?;
            PointFile {
                points: (0..n).map(Point::Indexed).collect(),
                labels: None,
                space: MetricSpace::precomputed(m, intrinsic_dim)?,
            }
        }
    })
}

fn load_queries(data: &DataArgs, sample: &PointFile<f64>, queries: Option<&Path>) -> Result<PointFile<f64>> {
    match queries {
        None => Ok(sample.clone()),
        Some(_) if data.metric == Metric::Precomputed => {
            bail!("precomputed metrics only support the sample itself as queries")
        }
        Some(q) => load(q, data.metric, data.intrinsic_dim),
    }
}

fn fit(sample: Vec<Point>, space: MetricSpace, cfg: &DepthConfig) -> Result<DepthModel> {
    if let (DepthKind::Weighted { p }, Some(cache)) = (cfg.kind, ApspCache::from_env()) {
        let g = cache.load_or_build(sample, space, p, cfg.sparsification)?;
        return Ok(DepthModel::from_graph(g, cfg.tie_rule)?);
    }
    Ok(DepthModel::fit(sample, space, cfg)?)
}

fn cmd_gen(a: &GenArgs) -> Result<()> {
    let family = match a.family {
        Family::Rings => "rings",
        Family::Moons => "moons",
        Family::RingUniform => "ring-uniform",
        Family::Exponential => "exponential",
        Family::Wishart => "wishart",
    };
    let extra = match a.family {
        Family::Rings => format!(" rate={}", a.rate),
        Family::Moons => format!(" noise_sd={}", a.noise_sd),
        Family::Wishart => format!(" k={} m={} scale={}", a.k, a.m, a.scale),
        _ => String::new(),
    };
    let comment = format!("gen {family} n={} seed={}{extra}", a.n, a.seed);
    let text = match a.family {
        Family::Rings | Family::Moons => {
            let d: LabeledDataset = match a.family {
                Family::Rings => gen_interlocking_rings(a.n, a.rate, a.seed)?,
                _ => gen_two_moons(a.n, a.noise_sd, a.seed)?,
            };
            write_point_csv(&d.points, Some(&d.labels), Some(&comment))?
        }
        Family::RingUniform => write_point_csv(&gen_ring_uniform::<f64>(a.n, a.seed), None, Some(&comment))?,
        Family::Exponential => {
            write_point_csv(&gen_bivariate_exponential::<f64>(a.n, a.seed), None, Some(&comment))?
        }
        Family::Wishart => {
            let d: LabeledDataset = gen_wishart_groups(a.n, a.k, a.m, a.scale, a.seed)?;
            write_spd_csv(&d.points, Some(&d.labels), Some(&comment))?
        }
    };
    emit(a.output.as_deref(), &text)
}

fn cmd_depth(a: &DepthArgs) -> Result<()> {
    let sample = load(&a.data.data, a.data.metric, a.data.intrinsic_dim)?;
    let queries = load_queries(&a.data, &sample, a.queries.as_deref())?;
    let configs = a.config.configs()?;
    if configs.len() != 1 {
        bail!("depth takes a single --p value");
    }
    let model = fit(sample.points, sample.space, &configs[0])?;
    let depths = model.depths(&queries.points)?;
    let mut out = String::from("index,depth,members,pairs,ties\n");
    for (i, d) in depths.iter().enumerate() {
        out.push_str(&format!(
            "{i},{:?},{},{},{}\n",
            d.value, d.member_count, d.pair_count, d.ties
        ));
    }
    emit(a.output.as_deref(), &out)
}

fn cmd_levelset(a: &LevelsetArgs) -> Result<()> {
    let sample = load(&a.data, Metric::Euclidean, 2)?;
    let configs = a.config.configs()?;
    if configs.len() != 1 {
        bail!("levelset takes a single --p value");
    }
    let res: Vec<usize> = parse_list(&a.res, 2, "--res")?;
    let bounds = if let Some(b) = &a.bounds {
        let b: Vec<f64> = parse_list(b, 4, "--bounds")?;
        GridBounds { x_min: b[0], x_max: b[1], y_min: b[2], y_max: b[3] }
    } else {
        let coords: Vec<&[f64]> = sample.points.iter().filter_map(|p| p.as_euclidean()).collect();
        let ext = |i: usize| {
            coords.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
                (lo.min(c[i]), hi.max(c[i]))
            })
        };
        let ((x0, x1), (y0, y1)) = (ext(0), ext(1));
        GridBounds { x_min: x0, x_max: x1, y_min: y0, y_max: y1 }
    };
    let grid = level_set_grid(&sample.points, &sample.space, &configs[0], bounds, (res[0], res[1]))?;
    let mut out = String::from("x,y,depth\n");
    for n in grid {
        out.push_str(&format!("{:?},{:?},{:?}\n", n.x, n.y, n.depth));
    }
    emit(a.output.as_deref(), &out)
}

fn cmd_ddfeatures(a: &DdFeaturesArgs) -> Result<()> {
    let train = load(&a.data.data, a.data.metric, a.data.intrinsic_dim)?;
    let Some(labels) = train.labels.clone() else {
        bail!("training file has no label column");
    };
    let queries = load_queries(&a.data, &train, a.queries.as_deref())?;
    let ds = LabeledDataset::new(train.points, labels, train.space)?;
    let f = depth_depth_transform(&ds, &queries.points, &a.config.configs()?)?;
    emit(a.output.as_deref(), &export_features_csv(&f, queries.labels.as_deref())?)
}

fn cmd_ddbench(a: &DdBenchArgs) -> Result<()> {
    let example: BenchExample = a.example.parse()?;
    let mut s = BenchSettings::for_example(example);
    s.reps = a.reps;
    s.seed = a.seed;
    if let Some(n) = a.n {
        s.n_per_group = n;
    }
    if let Some(f) = a.test_fraction {
        s.test_fraction = f;
    }
    s.dd_k = a.k;
    s.raw_k = a.raw_k;
    let report = run_bench(&s)?;
    emit(None, &report.render())
}

fn cmd_validate(a: &ValidateArgs) -> Result<bool> {
    let text = read(&a.matrix)?;
    let m = read_distance_matrix_csv::<f64>(&text)
        .with_context(|| format!("parsing {}", a.matrix.display()))?;
    let report = validate_distance_matrix(&m, a.triangle);
    let mut out = format!("{}x{} matrix: {} violation(s)\n", m.len(), m.len(), report.violations.len());
    for v in &report.violations {
        out.push_str(&format!("{v}\n"));
    }
    emit(None, &out)?;
    Ok(report.is_valid())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring thread pool")?;
    }
    match &cli.command {
        Command::Gen(a) => cmd_gen(a)?,
        Command::Depth(a) => cmd_depth(a)?,
        Command::Levelset(a) => cmd_levelset(a)?,
        Command::Ddfeatures(a) => cmd_ddfeatures(a)?,
        Command::Ddbench(a) => cmd_ddbench(a)?,
        // Exit code 2 distinguishes "invalid matrix" from I/O or parse failures.
        Command::Validate(a) => return Ok(if cmd_validate(a)? { ExitCode::SUCCESS } else { ExitCode::from(2) }),
    }
    Ok(ExitCode::SUCCESS)
}
