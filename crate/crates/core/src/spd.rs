//! The cone of symmetric positive definite matrices with its
//! affine-invariant geodesic distance.
//!
//! Matrix functions (square root, logarithm, real powers) go through a
//! symmetric eigendecomposition. Eigenvalues at or below
//! `1e-12 * max eigenvalue` are rejected rather than clamped.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Absolute symmetry tolerance, scaled by the largest entry magnitude.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Relative floor below which an eigenvalue counts as non-positive.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// A validated symmetric positive definite `k x k` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix<T: Scalar> {
    m: DMatrix<T>,
}

impl<T: Scalar> SpdMatrix<T> {
    /// Validates symmetry and positive definiteness.
    pub fn new(m: DMatrix<T>) -> Result<Self> {
        check_spd(&m)?;
        Ok(Self { m })
    }

    /// Builds from `k*k` row-major entries.
    pub fn from_row_slice(k: usize, entries: &[T]) -> Result<Self> {
        if entries.len() != k * k {
            return Err(Error::DimensionMismatch {
                expected: k * k,
                got: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(k, k, entries))
    }

    pub fn identity(k: usize) -> Self {
        Self {
            m: DMatrix::identity(k, k),
        }
    }

    /// `c * I_k`; `c` must be positive.
    pub fn scaled_identity(k: usize, c: T) -> Result<Self> {
        Self::new(DMatrix::identity(k, k) * c)
    }

    pub fn size(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.m
    }

    /// Row-major entries.
    pub fn to_row_major(&self) -> Vec<T> {
        let k = self.size();
        let mut out = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    /// Congruence `G A Gᵀ`; errors if `G` is singular enough to break
    /// positive definiteness.
    pub fn congruence(&self, g: &DMatrix<T>) -> Result<Self> {
        if g.nrows() != self.size() || g.ncols() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                got: g.nrows(),
            });
        }
        let out = g * &self.m * g.transpose();
        Self::new(symmetrize(out))
    }

    pub fn sqrt(&self) -> Self {
        Self {
            m: map_eigen(&self.m, |l| l.sqrt()),
        }
    }

    pub fn inv_sqrt(&self) -> Self {
        Self {
            m: map_eigen(&self.m, |l| T::one() / l.sqrt()),
        }
    }

    pub fn powf(&self, s: T) -> Self {
        Self {
            m: map_eigen(&self.m, |l| l.powf(s)),
        }
    }

    /// Matrix logarithm (symmetric, not necessarily positive definite).
    pub fn log(&self) -> DMatrix<T> {
        map_eigen(&self.m, |l| l.ln())
    }
}

fn symmetry_tolerance<T: Scalar>(m: &DMatrix<T>) -> T {
    let scale = m.iter().fold(T::one(), |acc, &v| acc.max(v.abs()));
    let eps_floor = T::default_epsilon() * lit(64.0);
    lit::<T>(SYMMETRY_TOL).max(eps_floor) * scale
}

fn check_spd<T: Scalar>(m: &DMatrix<T>) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSpd(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotSpd("non-finite entry".into()));
    }
    let tol = symmetry_tolerance(m);
    let k = m.nrows();
    for i in 0..k {
        for j in (i + 1)..k {
            if (m[(i, j)] - m[(j, i)]).abs() > tol {
                return Err(Error::NotSpd(format!("asymmetric at ({i},{j})")));
            }
        }
    }
    let eig = SymmetricEigen::new(symmetrize(m.clone()));
    check_eigenvalues(eig.eigenvalues.as_slice())
}

fn check_eigenvalues<T: Scalar>(eigenvalues: &[T]) -> Result<()> {
    let max = eigenvalues
        .iter()
        .fold(T::zero(), |acc, &l| acc.max(l.abs()));
    let floor = max * lit(EIGEN_FLOOR);
    match eigenvalues.iter().find(|&&l| l <= floor) {
        Some(l) => Err(Error::NotSpd(format!(
            "eigenvalue {l:e} below floor {floor:e}"
        ))),
        None if max == T::zero() => Err(Error::NotSpd("zero matrix".into())),
        None => Ok(()),
    }
}

fn symmetrize<T: Scalar>(m: DMatrix<T>) -> DMatrix<T> {
    let t = m.transpose();
    (m + t) * lit::<T>(0.5)
}

/// `V f(Λ) Vᵀ` for a symmetric input.
fn map_eigen<T: Scalar>(m: &DMatrix<T>, f: impl Fn(T) -> T) -> DMatrix<T> {
    let eig = SymmetricEigen::new(m.clone());
    let mapped = eig.eigenvalues.map(f);
    let v = &eig.eigenvectors;
    let scaled = v * DMatrix::from_diagonal(&mapped);
    symmetrize(scaled * v.transpose())
}

/// `A^{-1/2} B A^{-1/2}` symmetrized.
fn whitened<T: Scalar>(a_inv_sqrt: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    symmetrize(a_inv_sqrt * b * a_inv_sqrt)
}

fn log_eigen_norm<T: Scalar>(c: DMatrix<T>) -> Result<T> {
    let eig = SymmetricEigen::new(c);
    check_eigenvalues(eig.eigenvalues.as_slice())?;
    let sum = eig
        .eigenvalues
        .iter()
        .fold(T::zero(), |acc, &l| {
            let ln = l.ln();
            acc + ln * ln
        });
    Ok(sum.sqrt())
}

fn check_same_size<T: Scalar>(a: &SpdMatrix<T>, b: &SpdMatrix<T>) -> Result<()> {
    if a.size() != b.size() {
        return Err(Error::DimensionMismatch {
            expected: a.size(),
            got: b.size(),
        });
    }
    Ok(())
}

/// Affine-invariant geodesic distance `‖ln(A^{-1/2} B A^{-1/2})‖_F`.
///
/// The Frobenius norm carries the square root, so that distances along the
/// geodesic scale linearly with the curve parameter.
pub fn spd_distance<T: Scalar>(a: &SpdMatrix<T>, b: &SpdMatrix<T>) -> Result<T> {
    check_same_size(a, b)?;
    if a == b {
        return Ok(T::zero());
    }
    log_eigen_norm(whitened(a.inv_sqrt().matrix(), b.matrix()))
}

/// Point `γ(s) = A^{1/2} (A^{-1/2} B A^{-1/2})^s A^{1/2}` on the geodesic
/// from `A` (s = 0) to `B` (s = 1).
pub fn spd_geodesic_point<T: Scalar>(
    a: &SpdMatrix<T>,
    b: &SpdMatrix<T>,
    s: T,
) -> Result<SpdMatrix<T>> {
    check_same_size(a, b)?;
    if s < T::zero() || s > T::one() {
        return Err(Error::InvalidParameter(format!(
            "geodesic parameter must be in [0,1], got {s}"
        )));
    }
    if s == T::zero() {
        return Ok(a.clone());
    }
    if s == T::one() {
        return Ok(b.clone());
    }
    let half = a.sqrt();
    let c = whitened(a.inv_sqrt().matrix(), b.matrix());
    let cs = map_eigen(&c, |l| l.powf(s));
    let out = symmetrize(half.matrix() * cs * half.matrix());
    SpdMatrix::new(out)
}

/// Pairwise geodesic distances, reusing one `A^{-1/2}` per row.
pub fn spd_pairwise<T: Scalar>(mats: &[SpdMatrix<T>]) -> Result<Vec<Vec<T>>> {
    use rayon::prelude::*;
    let n = mats.len();
    if let Some(first) = mats.first() {
        for m in mats {
            check_same_size(first, m)?;
        }
    }
    let rows: Result<Vec<Vec<T>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let w = mats[i].inv_sqrt();
            let mut row = vec![T::zero(); n];
            for j in (i + 1)..n {
                row[j] = if mats[i] == mats[j] {
                    T::zero()
                } else {
                    log_eigen_norm(whitened(w.matrix(), mats[j].matrix()))?
                };
            }
            Ok(row)
        })
        .collect();
    let mut rows = rows?;
    for i in 0..n {
        for j in 0..i {
            rows[i][j] = rows[j][i];
        }
    }
    Ok(rows)
}
