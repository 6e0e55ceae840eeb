//! On-disk cache of the one-dimensional second-derivative blocks.
//!
//! File layout (little-endian): magic `LSFD2\0`, `u8` kind (1 periodic,
//! 2 Dirichlet), `u32` N, `f64` half width, then the `n_funcs^2` matrix
//! entries row-major. Files are written to a temporary name and renamed into
//! place, so concurrent writers never expose a partial file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::Result;
use crate::linalg::SymMatrix;
use crate::lsf::{BoundaryKind, LsfBasis};

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "RINGSPEC_CACHE_DIR";

const MAGIC: &[u8; 6] = b"LSFD2\0";
const HEADER_LEN: usize = 6 + 1 + 4 + 8;

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

fn kind_code(kind: BoundaryKind) -> u8 {
    match kind {
        BoundaryKind::Periodic => 1,
        BoundaryKind::Dirichlet => 2,
    }
}

/// `printf("%.12e")`: Rust writes `1.5e-1`, C writes `1.500000000000e-01`.
fn c_exponent_format(v: f64) -> String {
    let s = format!("{v:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exp),
    };
    format!("{mantissa}e{sign}{digits:0>2}")
}

/// `lsf2_{kind}_{n}_{half_width as %.12e}.bin`
pub fn cache_file_name(basis: &LsfBasis) -> String {
    format!(
        "lsf2_{}_{}_{}.bin",
        kind_code(basis.kind()),
        basis.n(),
        c_exponent_format(basis.half_width())
    )
}

pub fn encode(basis: &LsfBasis, matrix: &SymMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * matrix.as_slice().len());
    out.extend_from_slice(MAGIC);
    out.push(kind_code(basis.kind()));
    out.extend_from_slice(&basis.n().to_le_bytes());
    out.extend_from_slice(&basis.half_width().to_le_bytes());
    for v in matrix.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Decodes a file for `basis`; `None` if the header does not match exactly
/// or the payload has the wrong length.
pub fn decode(basis: &LsfBasis, bytes: &[u8]) -> Option<SymMatrix> {
    let n = basis.size();
    if bytes.len() != HEADER_LEN + 8 * n * n || &bytes[..6] != MAGIC {
        return None;
    }
    if bytes[6] != kind_code(basis.kind()) {
        return None;
    }
    let stored_n = u32::from_le_bytes(bytes[7..11].try_into().ok()?);
    let stored_width = f64::from_le_bytes(bytes[11..19].try_into().ok()?);
    if stored_n != basis.n() || stored_width.to_bits() != basis.half_width().to_bits() {
        return None;
    }
    let data: Vec<f64> = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    SymMatrix::from_row_major(n, data).ok()
}

/// Where derivative blocks are stored; a cache without a directory simply
/// recomputes every block.
#[derive(Debug, Clone, Default)]
pub struct LsfCache {
    dir: Option<PathBuf>,
}

impl LsfCache {
    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn in_dir(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: Some(dir.into()),
        }
    }

    /// Uses `$RINGSPEC_CACHE_DIR` when set and non-empty.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) if !d.is_empty() => Self::in_dir(d),
            _ => Self::disabled(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// The second-derivative matrix of `basis` and whether it came from disk.
    /// Unreadable or mismatched files are recomputed and replaced.
    pub fn second_derivative(&self, basis: &LsfBasis) -> Result<(SymMatrix, bool)> {
        let Some(dir) = &self.dir else {
            return Ok((basis.second_derivative_matrix(), false));
        };
        let path = dir.join(cache_file_name(basis));
        if let Ok(bytes) = fs::read(&path) {
            if let Some(m) = decode(basis, &bytes) {
                return Ok((m, true));
            }
        }
        let matrix = basis.second_derivative_matrix();
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(
            ".{}.{}.{}.tmp",
            cache_file_name(basis),
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&encode(basis, &matrix))?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok((matrix, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_names_use_c_exponent_format() {
        let b = LsfBasis::periodic(400, std::f64::consts::PI).unwrap();
        assert_eq!(cache_file_name(&b), "lsf2_1_400_3.141592653590e+00.bin");
        let b = LsfBasis::dirichlet(14, 0.05268026).unwrap();
        assert_eq!(cache_file_name(&b), "lsf2_2_14_5.268026000000e-02.bin");
        assert_eq!(c_exponent_format(1.5e120), "1.500000000000e+120");
    }

    #[test]
    fn encode_decode_round_trip() {
        let b = LsfBasis::dirichlet(8, 0.3).unwrap();
        let m = b.second_derivative_matrix();
        let bytes = encode(&b, &m);
        assert_eq!(&bytes[..6], b"LSFD2\0");
        assert_eq!(bytes[6], 2);
        assert_eq!(bytes.len(), 19 + 8 * 49);
        assert_eq!(decode(&b, &bytes).unwrap(), m);
        let other = LsfBasis::dirichlet(8, 0.31).unwrap();
        assert!(decode(&other, &bytes).is_none());
        assert!(decode(&b, &bytes[..bytes.len() - 1]).is_none());
    }
}
