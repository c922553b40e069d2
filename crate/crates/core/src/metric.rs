//! Point domains and the distances on them.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};
use crate::spd::{spd_distance, spd_pairwise, SpdMatrix};

/// Tolerance for symmetry checks on stored distance matrices.
pub const MATRIX_SYMMETRY_TOL: f64 = 1e-9;

/// A point of one of the supported metric spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Point<T: Scalar> {
    Euclidean(Vec<T>),
    Spd(SpdMatrix<T>),
    /// Row index into the owning space's precomputed matrix.
    Indexed(usize),
}

impl<T: Scalar> Point<T> {
    fn kind(&self) -> &'static str {
        match self {
            Point::Euclidean(_) => "euclidean",
            Point::Spd(_) => "spd",
            Point::Indexed(_) => "indexed",
        }
    }

    pub fn as_euclidean(&self) -> Option<&[T]> {
        match self {
            Point::Euclidean(v) => Some(v),
            _ => None,
        }
    }
}

/// Square, row-major table of pairwise distances.
///
/// Construction through [`DistanceMatrix::new`] enforces symmetry (1e-9),
/// a zero diagonal, and finite nonnegative entries. [`DistanceMatrix::from_raw`]
/// skips those checks so that [`validate_distance_matrix`] can report on
/// arbitrary input.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<T: Scalar> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    pub fn new(n: usize, data: Vec<T>) -> Result<Self> {
        let m = Self::from_raw(n, data)?;
        let report = validate_distance_matrix(&m, false);
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidMatrix(format!(
                "{v} ({} violation(s))",
                report.violations.len()
            )));
        }
        Ok(m)
    }

    pub fn from_raw(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Self::new(n, data)
    }

    /// Square matrix filled with `value` off the diagonal, zero on it.
    pub(crate) fn filled(n: usize, value: T) -> Self {
        let mut data = vec![value; n * n];
        for i in 0..n {
            data[i * n + i] = T::zero();
        }
        Self { n, data }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Sub-matrix on the given indices, in order.
    pub fn select(&self, idx: &[usize]) -> Self {
        let m = idx.len();
        let mut data = Vec::with_capacity(m * m);
        for &i in idx {
            for &j in idx {
                data.push(self.get(i, j));
            }
        }
        Self { n: m, data }
    }
}

/// A metric space: a point domain plus its distance rule.
#[derive(Debug, Clone)]
pub enum MetricSpace<T: Scalar> {
    Euclidean {
        dim: usize,
    },
    /// SPD `k x k` matrices with the affine-invariant geodesic distance.
    SpdGeodesic {
        k: usize,
    },
    /// Pairwise distances among a fixed, indexed set of objects.
    /// `intrinsic_dim` is only used by Fermat scaling diagnostics.
    Precomputed {
        matrix: Arc<DistanceMatrix<T>>,
        intrinsic_dim: usize,
    },
}

impl<T: Scalar> MetricSpace<T> {
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        Ok(MetricSpace::Euclidean { dim })
    }

    pub fn spd(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("matrix size must be positive".into()));
        }
        Ok(MetricSpace::SpdGeodesic { k })
    }

    /// Wraps an already-validated matrix.
    pub fn precomputed(matrix: DistanceMatrix<T>, intrinsic_dim: usize) -> Result<Self> {
        if intrinsic_dim == 0 {
            return Err(Error::InvalidParameter(
                "intrinsic dimension must be positive".into(),
            ));
        }
        Ok(MetricSpace::Precomputed {
            matrix: Arc::new(matrix),
            intrinsic_dim,
        })
    }

    /// Dimension used in `n^{(p-1)/d}` rescalings.
    pub fn intrinsic_dim(&self) -> usize {
        match self {
            MetricSpace::Euclidean { dim } => *dim,
            MetricSpace::SpdGeodesic { k } => k * (k + 1) / 2,
            MetricSpace::Precomputed { intrinsic_dim, .. } => *intrinsic_dim,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MetricSpace::Euclidean { .. } => "euclidean",
            MetricSpace::SpdGeodesic { .. } => "spd-geodesic",
            MetricSpace::Precomputed { .. } => "precomputed",
        }
    }

    /// Checks that `p` belongs to this space's point domain.
    pub fn check_point(&self, p: &Point<T>) -> Result<()> {
        match (self, p) {
            (MetricSpace::Euclidean { dim }, Point::Euclidean(v)) => {
                if v.len() != *dim {
                    return Err(Error::DimensionMismatch {
                        expected: *dim,
                        got: v.len(),
                    });
                }
                if v.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidParameter("non-finite coordinate".into()));
                }
                Ok(())
            }
            (MetricSpace::SpdGeodesic { k }, Point::Spd(m)) => {
                if m.size() != *k {
                    return Err(Error::DimensionMismatch {
                        expected: *k,
                        got: m.size(),
                    });
                }
                Ok(())
            }
            (MetricSpace::Precomputed { matrix, .. }, Point::Indexed(i)) => {
                if *i >= matrix.len() {
                    return Err(Error::IndexOutOfRange {
                        index: *i,
                        size: matrix.len(),
                    });
                }
                Ok(())
            }
            (_, p) => Err(Error::DomainMismatch(p.kind())),
        }
    }

    pub fn check_points(&self, pts: &[Point<T>]) -> Result<()> {
        pts.iter().try_for_each(|p| self.check_point(p))
    }

    /// Distance between two points of this space.
    pub fn distance(&self, a: &Point<T>, b: &Point<T>) -> Result<T> {
        self.check_point(a)?;
        self.check_point(b)?;
        Ok(self.distance_unchecked(a, b))
    }

    /// Distance without domain checks. Panics on mismatched kinds; SPD
    /// failures (which validated inputs cannot produce) surface as NaN.
    pub(crate) fn distance_unchecked(&self, a: &Point<T>, b: &Point<T>) -> T {
        match (self, a, b) {
            (MetricSpace::Euclidean { .. }, Point::Euclidean(x), Point::Euclidean(y)) => {
                euclidean(x, y)
            }
            (MetricSpace::SpdGeodesic { .. }, Point::Spd(x), Point::Spd(y)) => {
                spd_distance(x, y).unwrap_or_else(|_| T::nan())
            }
            (MetricSpace::Precomputed { matrix, .. }, Point::Indexed(i), Point::Indexed(j)) => {
                matrix.get(*i, *j)
            }
            _ => panic!("point kind does not match metric space"),
        }
    }

    /// Distance from `x` to every point of `pts`.
    pub(crate) fn distances_to(&self, x: &Point<T>, pts: &[Point<T>]) -> Vec<T> {
        pts.iter().map(|p| self.distance_unchecked(x, p)).collect()
    }

    /// All pairwise distances among `pts`.
    pub fn pairwise(&self, pts: &[Point<T>]) -> Result<DistanceMatrix<T>> {
        self.check_points(pts)?;
        let n = pts.len();
        if let MetricSpace::SpdGeodesic { .. } = self {
            let mats: Vec<SpdMatrix<T>> = pts
                .iter()
                .map(|p| match p {
                    Point::Spd(m) => m.clone(),
                    _ => unreachable!(),
                })
                .collect();
            let rows = spd_pairwise(&mats)?;
            return Ok(DistanceMatrix {
                n,
                data: rows.into_iter().flatten().collect(),
            });
        }
        let rows: Vec<Vec<T>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if j <= i {
                            T::zero()
                        } else {
                            self.distance_unchecked(&pts[i], &pts[j])
                        }
                    })
                    .collect()
            })
            .collect();
        let mut data: Vec<T> = rows.into_iter().flatten().collect();
        for i in 0..n {
            for j in 0..i {
                data[i * n + j] = data[j * n + i];
            }
        }
        Ok(DistanceMatrix { n, data })
    }
}

#[inline]
pub fn euclidean<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter()
        .zip(y)
        .fold(T::zero(), |acc, (&a, &b)| {
            let d = a - b;
            acc + d * d
        })
        .sqrt()
}

/// Hausdorff distance between two finite, non-empty point sets.
pub fn hausdorff_distance<T: Scalar>(
    a: &[Point<T>],
    c: &[Point<T>],
    space: &MetricSpace<T>,
) -> Result<T> {
    if a.is_empty() || c.is_empty() {
        return Err(Error::Empty("hausdorff_distance needs non-empty sets"));
    }
    space.check_points(a)?;
    space.check_points(c)?;
    let directed = |from: &[Point<T>], to: &[Point<T>]| {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| space.distance_unchecked(p, q))
                    .fold(T::infinity(), |m, d| m.min(d))
            })
            .fold(T::zero(), |m, d| m.max(d))
    };
    Ok(directed(a, c).max(directed(c, a)))
}

/// One defect found in a distance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    NonFinite { i: usize, j: usize },
    Negative { i: usize, j: usize },
    NonzeroDiagonal { i: usize },
    Asymmetric { i: usize, j: usize },
    /// `d(i, j) > d(i, via) + d(via, j)`.
    Triangle { i: usize, via: usize, j: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NonFinite { i, j } => write!(f, "non-finite entry at ({i},{j})"),
            Violation::Negative { i, j } => write!(f, "negative entry at ({i},{j})"),
            Violation::NonzeroDiagonal { i } => write!(f, "nonzero diagonal at ({i},{i})"),
            Violation::Asymmetric { i, j } => write!(f, "asymmetry at ({i},{j})"),
            Violation::Triangle { i, via, j } => {
                write!(f, "triangle inequality violated at ({i},{via},{j})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Reports every structural defect of `m`. Never fails.
///
/// The triangle scan is `O(n³)` and only runs when `check_triangle` is set.
pub fn validate_distance_matrix<T: Scalar>(
    m: &DistanceMatrix<T>,
    check_triangle: bool,
) -> ValidationReport {
    let n = m.len();
    let tol: T = lit(MATRIX_SYMMETRY_TOL);
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j);
            if !v.is_finite() {
                violations.push(Violation::NonFinite { i, j });
            } else if v < T::zero() {
                violations.push(Violation::Negative { i, j });
            }
        }
        if m.get(i, i) != T::zero() && m.get(i, i).is_finite() {
            violations.push(Violation::NonzeroDiagonal { i });
        }
        for j in (i + 1)..n {
            let (a, b) = (m.get(i, j), m.get(j, i));
            if (a - b).abs() > tol * T::one().max(a.abs()) {
                violations.push(Violation::Asymmetric { i, j });
            }
        }
    }
    if check_triangle {
        for i in 0..n {
            for j in (i + 1)..n {
                let direct = m.get(i, j);
                for via in 0..n {
                    if via == i || via == j {
                        continue;
                    }
                    let relay = m.get(i, via) + m.get(via, j);
                    if direct > relay + tol * T::one().max(relay) {
                        violations.push(Violation::Triangle { i, via, j });
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}
