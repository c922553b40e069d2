//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line
//! per criterion, and exits nonzero if any fails.
//!
//! `cargo test -p lensdepth --test acceptance`

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lensdepth::bench::{run_bench, BenchExample, BenchSettings, Method};
use lensdepth::datagen::{gen_bivariate_exponential, gen_ring_uniform, UniformBox};
use lensdepth::depth::{
    batch_depth, empirical_lens_depth, empirical_wld, hoeffding_rate_check, lens_depth_deviations,
    level_set_grid, median, population_ld_oracle, GridBounds, HOEFFDING_DELTAS,
    HOEFFDING_REPLICATIONS,
};
use lensdepth::fermat::oracle::lp_oracle;
use lensdepth::fermat::fermat_scaling_diagnostic;
use lensdepth::{DepthConfig, LandmarkGraph, MetricSpace, Point, Sparsification, TieRule};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn random_cloud(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<Point> {
    (0..n)
        .map(|_| {
            Point::Euclidean(vec![
                rng.random_range(-scale..scale),
                rng.random_range(-scale..scale),
            ])
        })
        .collect()
}

fn plane() -> MetricSpace {
    MetricSpace::euclidean(2).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

// 1. Dijkstra tables, query lengths and WLD against exhaustive enumeration.
fn ac1_oracle_agreement() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let powers = [1.0, 1.5, 2.0, 5.0];
    let space = plane();
    let mut checked = 0usize;
    for inst in 0..200 {
        let p = powers[inst % powers.len()];
        let n = rng.random_range(2..=8);
        let sample = random_cloud(&mut rng, n, 2.0);
        let x = random_cloud(&mut rng, 1, 2.5).remove(0);
        let g = LandmarkGraph::build(sample.clone(), space.clone(), p, Sparsification::None)
            .map_err(|e| e.to_string())?;
        let mut pair = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let o = lp_oracle(&sample, &sample[i], &sample[j], p, &space).unwrap();
                pair[i][j] = o;
                check(
                    close(g.apsp().get(i, j), o, 1e-12),
                    format!("instance {inst}: apsp[{i}][{j}]={} oracle={o}", g.apsp().get(i, j)),
                )?;
                checked += 1;
            }
        }
        let q = g.query_lengths(&x).unwrap().lengths;
        let mut qo = vec![0.0; n];
        for i in 0..n {
            qo[i] = lp_oracle(&sample, &x, &sample[i], p, &space).unwrap();
            check(
                close(q[i], qo[i], 1e-12),
                format!("instance {inst}: query[{i}]={} oracle={}", q[i], qo[i]),
            )?;
            checked += 1;
        }
        if n >= 2 {
            let mut members = 0u64;
            for i in 0..n {
                for j in (i + 1)..n {
                    if qo[i] < pair[i][j] && qo[j] < pair[i][j] {
                        members += 1;
                    }
                }
            }
            let d = empirical_wld(&x, &g, TieRule::Strict).unwrap();
            check(
                d.member_count == members,
                format!("instance {inst}: wld members {} vs enumeration {members}", d.member_count),
            )?;
        }
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(10), format!("runtime {t:?} >= 10s"))?;
    Ok(format!("{checked} lengths + 200 depths exact, {t:.2?}"))
}

// 2. WLD with p = 1 collapses to lens depth.
fn ac2_p1_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let space = plane();
    let mut compared = 0;
    for s in 0..50 {
        let sample = random_cloud(&mut rng, 100, 1.0);
        let queries = random_cloud(&mut rng, 20, 1.5);
        let g = LandmarkGraph::build(sample.clone(), space.clone(), 1.0, Sparsification::None)
            .map_err(|e| e.to_string())?;
        for rule in [TieRule::Closed, TieRule::Strict] {
            for x in &queries {
                let w = empirical_wld(x, &g, rule).unwrap();
                let l = empirical_lens_depth(x, &sample, &space, rule).unwrap();
                check(
                    w.member_count == l.member_count,
                    format!("sample {s}: wld {} vs ld {} ({rule:?})", w.value, l.value),
                )?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} depth pairs identical"))
}

/// Midpoint rule over the unit square for the lens indicator at `x`.
fn quadrature_uniform_ld(x: f64, m: usize) -> f64 {
    let h = 1.0 / m as f64;
    let mut hits = 0u64;
    for i in 0..m {
        let u = (i as f64 + 0.5) * h;
        for j in 0..m {
            let v = (j as f64 + 0.5) * h;
            let r = (u - v).abs();
            if (x - u).abs() <= r && (x - v).abs() <= r {
                hits += 1;
            }
        }
    }
    hits as f64 * h * h
}

// 3. Consistency rate and Hoeffding tail bound for uniform[0,1] at 0.5.
fn ac3_consistency() -> Outcome {
    let start = Instant::now();
    let line = MetricSpace::euclidean(1).unwrap();
    let sampler = UniformBox { lo: 0.0, hi: 1.0, dim: 1 };
    let x = Point::Euclidean(vec![0.5]);
    let mc = population_ld_oracle(&x, &sampler, &line, 1_000_000, TieRule::Closed, 303)
        .map_err(|e| e.to_string())?;
    let quad = quadrature_uniform_ld(0.5, 2000);
    check(
        (mc.estimate - quad).abs() <= 3.0 * mc.std_error,
        format!("oracle {} ± {} vs quadrature {quad}", mc.estimate, mc.std_error),
    )?;
    let sizes = [100, 400, 1600];
    let devs = lens_depth_deviations(&sampler, &line, &x, quad, &sizes, 200, TieRule::Closed, 304)
        .map_err(|e| e.to_string())?;
    let meds: Vec<f64> = devs.iter().map(|d| median(d)).collect();
    for w in meds.windows(2) {
        check(w[1] / w[0] <= 0.75, format!("median ratio {} > 0.75 ({meds:?})", w[1] / w[0]))?;
    }
    let rows = hoeffding_rate_check(
        &sampler,
        &line,
        &x,
        quad,
        &sizes,
        &HOEFFDING_DELTAS,
        HOEFFDING_REPLICATIONS,
        305,
    )
    .map_err(|e| e.to_string())?;
    for r in &rows {
        check(r.passes(), format!("hoeffding fails: {r:?}"))?;
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(120), format!("runtime {t:?} >= 2 min"))?;
    Ok(format!(
        "LD(0.5)={:.5}±{:.5} (quadrature {quad}); medians {:.2e} {:.2e} {:.2e}; {} Hoeffding cells ok, {t:.1?}",
        mc.estimate, mc.std_error, meds[0], meds[1], meds[2], rows.len()
    ))
}

// 4. Depth vanishes beyond the sample diameter.
fn ac4_vanishing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let space = plane();
    for s in 0..100 {
        let n = rng.random_range(2..40);
        let sample = random_cloud(&mut rng, n, 3.0);
        let coords: Vec<&[f64]> = sample.iter().map(|p| p.as_euclidean().unwrap()).collect();
        let mut diam: f64 = 0.0;
        for a in &coords {
            for b in &coords {
                diam = diam.max(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
            }
        }
        let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        // Every sample point is within 3√2 of the origin.
        let r = 3.0 * 2f64.sqrt() + diam + rng.random_range(0.01..5.0);
        let far = Point::Euclidean(vec![r * angle.cos(), r * angle.sin()]);
        let p = [1.5, 2.0, 5.0][s % 3];
        for rule in [TieRule::Closed, TieRule::Strict] {
            let ld = empirical_lens_depth(&far, &sample, &space, rule).unwrap();
            check(ld.member_count == 0, format!("sample {s}: LD {}", ld.value))?;
            let g = LandmarkGraph::build(sample.clone(), space.clone(), p, Sparsification::None).unwrap();
            let wld = empirical_wld(&far, &g, rule).unwrap();
            check(wld.member_count == 0, format!("sample {s}: WLD {}", wld.value))?;
        }
    }
    Ok("100 samples, LD and WLD exactly 0".into())
}

// 5. Rescaled Fermat length stabilizes with n.
fn ac5_fermat_scaling() -> Outcome {
    let space = plane();
    let sampler = UniformBox { lo: 0.0, hi: 1.0, dim: 2 };
    let x0 = Point::Euclidean(vec![0.2, 0.2]);
    let y0 = Point::Euclidean(vec![0.8, 0.8]);
    let rows = fermat_scaling_diagnostic(&space, &sampler, 2.0, &x0, &y0, &[100, 200, 400], 50, 505)
        .map_err(|e| e.to_string())?;
    let rel: Vec<f64> = rows.iter().map(|r| r.relative_stdev()).collect();
    check(rel[2] < rel[0], format!("relative stdev {rel:?}"))?;
    Ok(format!(
        "rel stdev n=100: {:.4}, n=200: {:.4}, n=400: {:.4}",
        rel[0], rel[1], rel[2]
    ))
}

// 6. Level sets adapt to the support.
fn ac6_level_sets() -> Outcome {
    let space = plane();
    let cfg = DepthConfig::weighted(5.0);
    let ring = gen_ring_uniform::<f64>(400, 606);
    let bounds = GridBounds { x_min: -2.5, x_max: 2.5, y_min: -2.5, y_max: 2.5 };
    let grid = level_set_grid(&ring, &space, &cfg, bounds, (21, 21)).map_err(|e| e.to_string())?;
    let at = |x: f64, y: f64| grid.iter().find(|n| n.x == x && n.y == y).map(|n| n.depth);
    let (c, r) = (at(0.0, 0.0).ok_or("no (0,0) node")?, at(1.25, 0.0).ok_or("no (1.25,0) node")?);
    check(c < r, format!("ring: depth(0,0)={c} >= depth(1.25,0)={r}"))?;

    let expo = gen_bivariate_exponential::<f64>(400, 607);
    let bounds = GridBounds { x_min: -0.5, x_max: 5.5, y_min: -0.5, y_max: 5.5 };
    let grid = level_set_grid(&expo, &space, &cfg, bounds, (25, 25)).map_err(|e| e.to_string())?;
    let best = grid
        .iter()
        .fold(grid[0], |b, n| if n.depth > b.depth { *n } else { b });
    check(
        best.x > 0.0 && best.y > 0.0 && best.x < 2.0 && best.y < 2.0,
        format!("exponential: deepest node at ({}, {})", best.x, best.y),
    )?;
    Ok(format!(
        "ring depth(0,0)={c:.4} < depth(1.25,0)={r:.4}; exponential deepest ({}, {}) depth {:.4}",
        best.x, best.y, best.depth
    ))
}

// 7. Two moons with WLD p=2 features.
fn ac7_two_moons() -> Outcome {
    let mut s = BenchSettings::for_example(BenchExample::Moons);
    s.methods = vec![Method::weighted(&[2.0])];
    s.reps = 100;
    s.seed = 700;
    let report = run_bench(&s).map_err(|e| e.to_string())?;
    let mean = report.mean_errors()[0];
    check(mean <= 0.05, format!("mean error {mean:.4} > 0.05"))?;
    Ok(format!("mean error {mean:.4} over 100 reps"))
}

// 8. Interlocking rings: more powers, fewer errors.
fn ac8_rings() -> Outcome {
    let start = Instant::now();
    let mut s = BenchSettings::for_example(BenchExample::Rings);
    s.methods = vec![
        Method::weighted(&[1.0]),
        Method::weighted(&[1.0, 10.0]),
        Method::weighted(&[1.0, 1.5, 2.0, 3.0, 5.0, 10.0]),
    ];
    s.reps = 50;
    s.seed = 800;
    let report = run_bench(&s).map_err(|e| e.to_string())?;
    let m = report.mean_errors();
    let t = start.elapsed();
    let summary = format!("p=1 {:.4}, p=1,10 {:.4}, all {:.4}, {t:.1?}", m[0], m[1], m[2]);
    check(m[2] <= m[1] && m[1] <= m[0], format!("ordering fails: {summary}"))?;
    check((0.12..=0.26).contains(&m[2]), format!("full-feature error out of range: {summary}"))?;
    check(t < Duration::from_secs(300), format!("runtime: {summary}"))?;
    Ok(summary)
}

// 9. Wishart matrices on the SPD cone.
fn ac9_wishart() -> Outcome {
    let start = Instant::now();
    let mut s = BenchSettings::for_example(BenchExample::Wishart);
    s.reps = 20;
    s.seed = 900;
    let report = run_bench(&s).map_err(|e| e.to_string())?;
    // Methods: p=1, 1.5, 2, 5, raw.
    let m = report.mean_errors();
    let t = start.elapsed();
    let summary = format!(
        "p=1 {:.4}, p=1.5 {:.4}, p=2 {:.4}, p=5 {:.4}, raw {:.4}",
        m[0], m[1], m[2], m[3], m[4]
    );
    check(m[1] <= 0.15 && m[2] <= 0.15, format!("DD error too high: {summary}"))?;
    check((0.14..=0.28).contains(&m[4]), format!("raw k-NN out of range: {summary}"))?;
    let best = (0..4).min_by(|&a, &b| m[a].total_cmp(&m[b])).unwrap();
    let raw = report.errors_of(4);
    let wins = report
        .errors_of(best)
        .iter()
        .zip(&raw)
        .filter(|(d, r)| d < r)
        .count();
    check(wins * 10 >= 8 * raw.len(), format!("best p wins {wins}/20: {summary}"))?;
    check(t < Duration::from_secs(600), format!("runtime {t:?}"))?;
    Ok(format!("{summary}; best ({}) beats raw in {wins}/20, {t:.1?}", report.method_names[best]))
}

fn rotate(points: &[Point], angle: f64, shift: (f64, f64)) -> Vec<Point> {
    let (s, c) = angle.sin_cos();
    points
        .iter()
        .map(|p| {
            let v = p.as_euclidean().unwrap();
            Point::Euclidean(vec![c * v[0] - s * v[1] + shift.0, s * v[0] + c * v[1] + shift.1])
        })
        .collect()
}

fn scale(points: &[Point], k: f64) -> Vec<Point> {
    points
        .iter()
        .map(|p| Point::Euclidean(p.as_euclidean().unwrap().iter().map(|v| v * k).collect()))
        .collect()
}

// 10. Invariance properties on randomized instances.
fn ac10_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let space = plane();
    for inst in 0..100 {
        let n = rng.random_range(5..30);
        let sample = random_cloud(&mut rng, n, 2.0);
        let queries = random_cloud(&mut rng, 10, 2.5);
        let p = [1.5, 2.0, 3.0, 5.0][inst % 4];
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let shift = (rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
        let c = rng.random_range(0.1..10.0);
        for cfg in [DepthConfig::lens(), DepthConfig::weighted(p)] {
            let base = batch_depth(&queries, &sample, &space, &cfg).unwrap();
            let rot = batch_depth(&rotate(&queries, angle, shift), &rotate(&sample, angle, shift), &space, &cfg)
                .unwrap();
            let sc = batch_depth(&scale(&queries, c), &scale(&sample, c), &space, &cfg).unwrap();
            for q in 0..queries.len() {
                check(
                    (base[q].value - rot[q].value).abs() <= 1e-12,
                    format!("instance {inst}: isometry {} vs {}", base[q].value, rot[q].value),
                )?;
                check(
                    (base[q].value - sc[q].value).abs() <= 1e-12,
                    format!("instance {inst}: scale {} vs {}", base[q].value, sc[q].value),
                )?;
            }
            let strict = batch_depth(&queries, &sample, &space, &cfg.with_tie_rule(TieRule::Strict)).unwrap();
            let closed = batch_depth(&queries, &sample, &space, &cfg.with_tie_rule(TieRule::Closed)).unwrap();
            for q in 0..queries.len() {
                check(closed[q].value >= strict[q].value, format!("instance {inst}: tie rule"))?;
            }
        }
        // Landmark monotonicity on nested sets of at most 8 points.
        let big: Vec<Point> = sample.iter().take(6).cloned().collect();
        let cut = rng.random_range(0..=big.len());
        let (x, y) = (&queries[0], &queries[1]);
        let lb = lp_oracle(&big, x, y, p, &space).unwrap();
        let ls = lp_oracle(&big[..cut], x, y, p, &space).unwrap();
        check(lb <= ls, format!("instance {inst}: landmark monotonicity {lb} > {ls}"))?;
        // L_p scales by c^p.
        let g = LandmarkGraph::build(sample.clone(), space.clone(), p, Sparsification::None).unwrap();
        let gs = LandmarkGraph::build(scale(&sample, c), space.clone(), p, Sparsification::None).unwrap();
        let factor = c.powf(p);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (g.apsp().get(i, j) * factor, gs.apsp().get(i, j));
                check(close(a, b, 1e-9), format!("instance {inst}: c^p equivariance {a} vs {b}"))?;
            }
        }
    }
    Ok("isometry, scale, tie-rule, landmark and c^p checks on 100 instances".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("AC1 oracle agreement", ac1_oracle_agreement),
        ("AC2 p=1 collapse", ac2_p1_collapse),
        ("AC3 consistency rate", ac3_consistency),
        ("AC4 vanishing at infinity", ac4_vanishing),
        ("AC5 Fermat scaling", ac5_fermat_scaling),
        ("AC6 level-set adaptation", ac6_level_sets),
        ("AC7 two moons", ac7_two_moons),
        ("AC8 interlocking rings", ac8_rings),
        ("AC9 Wishart SPD", ac9_wishart),
        ("AC10 invariance suite", ac10_invariance),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{:.1?}]", start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{:.1?}]", start.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
