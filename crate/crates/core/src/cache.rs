//! On-disk cache for all-pairs `L_p` tables.
//!
//! File layout (little-endian): 8 magic bytes `LDAPSP01`, `n` as `u64`,
//! `p` as `f64`, then `n²` `f64` entries row-major. Files are named by a
//! SHA-256 key over the sample, the metric, `p` and the sparsification.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fermat::{LandmarkGraph, Sparsification};
use crate::metric::{DistanceMatrix, MetricSpace, Point};
use crate::scalar::Scalar;

pub const MAGIC: &[u8; 8] = b"LDAPSP01";

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "LENSDEPTH_CACHE_DIR";

fn put_scalar<T: Scalar>(h: &mut Sha256, v: T) {
    h.update(v.to_bits_u64().to_le_bytes());
}

/// Hex SHA-256 identifying a `(sample, space, p, sparsification)` build.
pub fn cache_key<T: Scalar>(
    sample: &[Point<T>],
    space: &MetricSpace<T>,
    p: T,
    sparsification: Sparsification,
) -> String {
    let mut h = Sha256::new();
    h.update(space.kind_name().as_bytes());
    h.update((std::mem::size_of::<T>() as u64).to_le_bytes());
    if let MetricSpace::Precomputed { matrix, .. } = space {
        h.update((matrix.len() as u64).to_le_bytes());
        for &v in matrix.as_slice() {
            put_scalar(&mut h, v);
        }
    }
    h.update((sample.len() as u64).to_le_bytes());
    for pt in sample {
        match pt {
            Point::Euclidean(v) => {
                h.update([0u8]);
                h.update((v.len() as u64).to_le_bytes());
                v.iter().for_each(|&c| put_scalar(&mut h, c));
            }
            Point::Spd(m) => {
                h.update([1u8]);
                h.update((m.size() as u64).to_le_bytes());
                m.to_row_major().into_iter().for_each(|c| put_scalar(&mut h, c));
            }
            Point::Indexed(i) => {
                h.update([2u8]);
                h.update((*i as u64).to_le_bytes());
            }
        }
    }
    put_scalar(&mut h, p);
    h.update(sparsification.to_string().as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn encode_apsp<T: Scalar>(apsp: &DistanceMatrix<T>, p: T) -> Vec<u8> {
    let n = apsp.len();
    let mut out = Vec::with_capacity(24 + 8 * n * n);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(n as u64).to_le_bytes());
    out.extend_from_slice(&p.as_f64().to_le_bytes());
    for &v in apsp.as_slice() {
        out.extend_from_slice(&v.as_f64().to_le_bytes());
    }
    out
}

/// Returns `(p, table)`.
pub fn decode_apsp<T: Scalar>(bytes: &[u8]) -> Result<(f64, DistanceMatrix<T>)> {
    let bad = |m: &str| Error::InvalidMatrix(format!("apsp cache: {m}"));
    if bytes.len() < 24 || &bytes[..8] != MAGIC {
        return Err(bad("bad magic"));
    }
    let word = |at: usize| -> [u8; 8] { bytes[at..at + 8].try_into().expect("8-byte slice") };
    let n = u64::from_le_bytes(word(8)) as usize;
    let p = f64::from_le_bytes(word(16));
    let expected = n
        .checked_mul(n)
        .and_then(|nn| nn.checked_mul(8))
        .and_then(|b| b.checked_add(24))
        .ok_or_else(|| bad("size overflow"))?;
    if bytes.len() != expected {
        return Err(bad("truncated table"));
    }
    let data = (0..n * n)
        .map(|i| T::from_f64_lossy(f64::from_le_bytes(word(24 + 8 * i))))
        .collect();
    Ok((p, DistanceMatrix::from_raw(n, data)?))
}

/// Directory of cached tables.
#[derive(Debug, Clone)]
pub struct ApspCache {
    dir: PathBuf,
}

impl ApspCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Cache at `$LENSDEPTH_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.apsp"))
    }

    /// Loads a cached table when one matches, otherwise builds the graph and
    /// stores its table. Unreadable cache files are rebuilt and overwritten.
    pub fn load_or_build<T: Scalar>(
        &self,
        sample: Vec<Point<T>>,
        space: MetricSpace<T>,
        p: T,
        sparsification: Sparsification,
    ) -> Result<LandmarkGraph<T>> {
        let key = cache_key(&sample, &space, p, sparsification);
        let path = self.path(&key);
        if let Ok(bytes) = fs::read(&path) {
            if let Ok((cp, table)) = decode_apsp::<T>(&bytes) {
                if cp == p.as_f64() && table.len() == sample.len() {
                    return LandmarkGraph::from_cached(sample, space, p, sparsification, table);
                }
            }
        }
        let g = LandmarkGraph::build(sample, space, p, sparsification)?;
        fs::create_dir_all(&self.dir)?;
        fs::write(&path, encode_apsp(g.apsp(), p))?;
        Ok(g)
    }
}
