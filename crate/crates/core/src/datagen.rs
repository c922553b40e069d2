//! Seeded synthetic generators.
//!
//! Every generator draws from ChaCha8, a counter-based generator, seeded
//! with the caller's 64-bit seed. Normal variates use the inverse normal
//! CDF applied to open-interval uniforms; exponentials use inverse-CDF too.

use nalgebra::{DMatrix, DVector};
use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::classify::LabeledDataset;
use crate::error::{Error, Result};
use crate::metric::{MetricSpace, Point};
use crate::scalar::{lit, Scalar};
use crate::spd::SpdMatrix;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[inline]
pub fn uniform01(rng: &mut impl Rng) -> f64 {
    rng.sample(Open01)
}

pub fn standard_normal(rng: &mut impl Rng) -> f64 {
    // Parameters are valid constants.
    let n = Normal::standard();
    n.inverse_cdf(uniform01(rng))
}

/// Exponential variate with the given rate (mean `1 / rate`).
pub fn exponential(rng: &mut impl Rng, rate: f64) -> f64 {
    -(1.0 - uniform01(rng)).ln() / rate
}

/// Draws one point at a time from a fixed law.
pub trait PointSampler<T: Scalar>: Sync {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Point<T>;
}

/// Uniform on the axis-aligned box `[lo, hi]^dim`.
#[derive(Debug, Clone, Copy)]
pub struct UniformBox {
    pub lo: f64,
    pub hi: f64,
    pub dim: usize,
}

impl<T: Scalar> PointSampler<T> for UniformBox {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Point<T> {
        Point::Euclidean(
            (0..self.dim)
                .map(|_| lit(self.lo + (self.hi - self.lo) * uniform01(rng)))
                .collect(),
        )
    }
}

/// Uniform on the annulus `1 <= |x| <= 1.5`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RingUniform;

impl<T: Scalar> PointSampler<T> for RingUniform {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Point<T> {
        // Area-uniform radius: r² uniform on [1, 2.25].
        let r = (1.0 + 1.25 * uniform01(rng)).sqrt();
        let theta = std::f64::consts::TAU * uniform01(rng);
        Point::Euclidean(vec![lit(r * theta.cos()), lit(r * theta.sin())])
    }
}

/// Two independent unit-rate exponentials, density `e^{-x-y}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BivariateExponential;

impl<T: Scalar> PointSampler<T> for BivariateExponential {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Point<T> {
        let a = exponential(rng, 1.0);
        let b = exponential(rng, 1.0);
        Point::Euclidean(vec![lit(a), lit(b)])
    }
}

/// `((2 + R) cos θ, (2 + R) sin θ) + shift` with `R ~ Exp(rate)`.
#[derive(Debug, Clone, Copy)]
pub struct ThickRing {
    pub rate: f64,
    pub shift: (f64, f64),
}

impl<T: Scalar> PointSampler<T> for ThickRing {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Point<T> {
        let r = 2.0 + exponential(rng, self.rate);
        let theta = std::f64::consts::TAU * uniform01(rng);
        Point::Euclidean(vec![
            lit(r * theta.cos() + self.shift.0),
            lit(r * theta.sin() + self.shift.1),
        ])
    }
}

fn draw<T: Scalar>(s: &impl PointSampler<T>, n: usize, rng: &mut ChaCha8Rng) -> Vec<Point<T>> {
    (0..n).map(|_| s.sample(rng)).collect()
}

/// Rate of `R` in the interlocking-rings model (mean radius offset 2).
pub const RINGS_DEFAULT_RATE: f64 = 0.5;

/// Interlocking rings: class 1 is the ring shifted by `(3, 0)`, class 2 is
/// centred at the origin. `rate` is the exponential rate of the radial
/// excess `R`.
pub fn gen_interlocking_rings<T: Scalar>(
    n_per_group: usize,
    rate: f64,
    seed: u64,
) -> Result<LabeledDataset<T>> {
    if n_per_group == 0 {
        return Err(Error::InvalidParameter("n_per_group must be positive".into()));
    }
    if !(rate > 0.0) {
        return Err(Error::InvalidParameter("ring rate must be positive".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut points = draw(&ThickRing { rate, shift: (3.0, 0.0) }, n_per_group, &mut rng);
    points.extend(draw(&ThickRing { rate, shift: (0.0, 0.0) }, n_per_group, &mut rng));
    let labels = [1usize, 2].iter().flat_map(|&c| std::iter::repeat_n(c, n_per_group)).collect();
    LabeledDataset::new(points, labels, MetricSpace::euclidean(2)?)
}

/// Two moons. Class 1: `(cos t, sin t)`; class 2: `(1 - cos t, 0.5 - sin t)`,
/// with `t ~ Unif(0, π)` and isotropic `N(0, noise_sd²)` noise on both
/// coordinates.
pub fn gen_two_moons<T: Scalar>(
    n_per_group: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<LabeledDataset<T>> {
    if n_per_group == 0 {
        return Err(Error::InvalidParameter("n_per_group must be positive".into()));
    }
    if !(noise_sd >= 0.0) {
        return Err(Error::InvalidParameter("noise_sd must be >= 0".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut points = Vec::with_capacity(2 * n_per_group);
    let mut labels = Vec::with_capacity(2 * n_per_group);
    for class in [1usize, 2] {
        for _ in 0..n_per_group {
            let t = std::f64::consts::PI * uniform01(&mut rng);
            let (mut x, mut y) = if class == 1 {
                (t.cos(), t.sin())
            } else {
                (1.0 - t.cos(), 0.5 - t.sin())
            };
            if noise_sd > 0.0 {
                x += noise_sd * standard_normal(&mut rng);
                y += noise_sd * standard_normal(&mut rng);
            }
            points.push(Point::Euclidean(vec![lit(x), lit(y)]));
            labels.push(class);
        }
    }
    LabeledDataset::new(points, labels, MetricSpace::euclidean(2)?)
}

/// Uniform on the annulus `B(0, 1.5) \ B(0, 1)`.
pub fn gen_ring_uniform<T: Scalar>(n: usize, seed: u64) -> Vec<Point<T>> {
    draw(&RingUniform, n, &mut seeded_rng(seed))
}

/// Independent unit exponentials on both axes.
pub fn gen_bivariate_exponential<T: Scalar>(n: usize, seed: u64) -> Vec<Point<T>> {
    draw(&BivariateExponential, n, &mut seeded_rng(seed))
}

/// `n` Wishart draws `S = Σ_{i=1}^m X_i X_iᵀ`, `X_i ~ N(0, Σ)`, each built
/// as `Σ^{1/2} z` from standard normal `k`-vectors.
pub fn gen_wishart<T: Scalar>(
    n: usize,
    m: usize,
    sigma: &SpdMatrix<T>,
    seed: u64,
) -> Result<Vec<SpdMatrix<T>>> {
    wishart_from(&mut seeded_rng(seed), n, m, sigma)
}

fn wishart_from<T: Scalar>(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    sigma: &SpdMatrix<T>,
) -> Result<Vec<SpdMatrix<T>>> {
    let k = sigma.size();
    if m < k {
        return Err(Error::InvalidParameter(format!(
            "wishart needs m >= k for a nonsingular draw, got m={m}, k={k}"
        )));
    }
    let root = sigma.sqrt();
    (0..n)
        .map(|_| {
            let mut s = DMatrix::<T>::zeros(k, k);
            for _ in 0..m {
                let z = DVector::<T>::from_fn(k, |_, _| lit(standard_normal(rng)));
                let x = root.matrix() * z;
                s += &x * x.transpose();
            }
            SpdMatrix::new(s)
        })
        .collect()
}

/// Degrees of freedom and scale of the second Wishart group (first group
/// uses `Σ = I`).
pub const WISHART_DEFAULT_M: usize = 10;
pub const WISHART_DEFAULT_SCALE: f64 = 2.0;

/// Two labelled Wishart groups on `k x k` matrices: class 1 with `Σ = I`,
/// class 2 with `Σ = scale · I`, both with `m` degrees of freedom.
pub fn gen_wishart_groups<T: Scalar>(
    n_per_group: usize,
    k: usize,
    m: usize,
    scale: f64,
    seed: u64,
) -> Result<LabeledDataset<T>> {
    let mut rng = seeded_rng(seed);
    let mut points: Vec<Point<T>> = wishart_from(&mut rng, n_per_group, m, &SpdMatrix::identity(k))?
        .into_iter()
        .map(Point::Spd)
        .collect();
    let s2 = SpdMatrix::scaled_identity(k, lit(scale))?;
    points.extend(wishart_from(&mut rng, n_per_group, m, &s2)?.into_iter().map(Point::Spd));
    let labels = [1usize, 2].iter().flat_map(|&c| std::iter::repeat_n(c, n_per_group)).collect();
    LabeledDataset::new(points, labels, MetricSpace::spd(k)?)
}
