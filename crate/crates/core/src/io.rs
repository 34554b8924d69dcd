//! Plain-text sparse triplet files.
//!
//! ```text
//! # qho-phase sparse-triplet v1
//! # basis=<tag>
//! # basis_sha256=<hex>
//! # rows=<r> cols=<c> nnz=<k>
//! <row> <col> <re> <im>
//! ```
//! Values are written with 17 significant digits, so a round trip is exact.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_complex::Complex64 as C64;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::fock::Basis3D;
use crate::phase3d::PhaseOperatorSet;
use crate::sparse::SparseMatrix;
use crate::spherical::SphericalBasis;

const MAGIC: &str = "# qho-phase sparse-triplet v1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripletHeader {
    pub basis: String,
    pub basis_sha256: String,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
}

/// Hex SHA-256 of the newline-joined basis descriptors.
pub fn hash_descriptors<I, S>(items: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut h = Sha256::new();
    for s in items {
        h.update(s.as_ref().as_bytes());
        h.update(b"\n");
    }
    h.finalize()
        .iter()
        .fold(String::with_capacity(64), |mut acc, b| {
            let _ = write!(acc, "{b:02x}");
            acc
        })
}

pub fn cartesian_basis_hash(basis: &Basis3D) -> String {
    hash_descriptors(
        basis
            .states()
            .iter()
            .map(|s| format!("{},{},{}", s[0], s[1], s[2])),
    )
}

pub fn spherical_basis_hash(basis: &SphericalBasis) -> String {
    hash_descriptors(basis.labels().iter().map(|l| l.to_string()))
}

pub fn doubled_basis_hash(ops: &PhaseOperatorSet) -> String {
    hash_descriptors((0..ops.dim()).map(|p| {
        let (label, sign) = ops.label_at(p);
        format!("{label}{}", sign.symbol())
    }))
}

pub fn write_triplets<W: Write>(
    mut out: W,
    matrix: &SparseMatrix,
    basis: &str,
    basis_sha256: &str,
) -> Result<(), IoError> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "# basis={basis}")?;
    writeln!(out, "# basis_sha256={basis_sha256}")?;
    writeln!(
        out,
        "# rows={} cols={} nnz={}",
        matrix.nrows(),
        matrix.ncols(),
        matrix.nnz()
    )?;
    for (r, c, v) in matrix.triplets() {
        writeln!(out, "{r} {c} {:.16e} {:.16e}", v.re, v.im)?;
    }
    Ok(())
}

fn header_field<'a>(line: &'a str, key: &str, lineno: usize) -> Result<&'a str, IoError> {
    line.strip_prefix("# ")
        .and_then(|s| s.strip_prefix(key))
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| IoError::Parse {
            line: lineno,
            detail: format!("expected '# {key}=...'"),
        })
}

fn parse<T: std::str::FromStr>(s: &str, what: &str, line: usize) -> Result<T, IoError> {
    s.parse().map_err(|_| IoError::Parse {
        line,
        detail: format!("invalid {what} '{s}'"),
    })
}

pub fn read_triplets<R: BufRead>(input: R) -> Result<(TripletHeader, SparseMatrix), IoError> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| -> Result<(usize, String), IoError> {
        match lines.next() {
            Some((n, l)) => Ok((n, l?)),
            None => Err(IoError::Parse {
                line: 0,
                detail: format!("unexpected end of file, expected {what}"),
            }),
        }
    };
    let (n, magic) = next("header")?;
    if magic.trim_end() != MAGIC {
        return Err(IoError::Parse {
            line: n,
            detail: format!("expected '{MAGIC}'"),
        });
    }
    let (n, l) = next("basis")?;
    let basis = header_field(&l, "basis", n)?.to_string();
    let (n, l) = next("basis hash")?;
    let basis_sha256 = header_field(&l, "basis_sha256", n)?.to_string();
    let (n, l) = next("dimensions")?;
    let dims = l.strip_prefix("# ").ok_or_else(|| IoError::Parse {
        line: n,
        detail: "expected '# rows=.. cols=.. nnz=..'".into(),
    })?;
    let mut rows = None;
    let mut cols = None;
    let mut nnz = None;
    for field in dims.split_whitespace() {
        let (k, v) = field.split_once('=').ok_or_else(|| IoError::Parse {
            line: n,
            detail: format!("malformed field '{field}'"),
        })?;
        let v: usize = parse(v, k, n)?;
        match k {
            "rows" => rows = Some(v),
            "cols" => cols = Some(v),
            "nnz" => nnz = Some(v),
            _ => {
                return Err(IoError::Parse {
                    line: n,
                    detail: format!("unknown field '{k}'"),
                })
            }
        }
    }
    let missing = |k: &str| IoError::Parse {
        line: n,
        detail: format!("missing field '{k}'"),
    };
    let header = TripletHeader {
        basis,
        basis_sha256,
        rows: rows.ok_or_else(|| missing("rows"))?,
        cols: cols.ok_or_else(|| missing("cols"))?,
        nnz: nnz.ok_or_else(|| missing("nnz"))?,
    };

    let mut triplets = Vec::with_capacity(header.nnz);
    for (n, l) in lines {
        let l = l?;
        if l.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(IoError::Parse {
                line: n,
                detail: format!("expected 4 fields, found {}", parts.len()),
            });
        }
        let r: usize = parse(parts[0], "row", n)?;
        let c: usize = parse(parts[1], "column", n)?;
        if r >= header.rows || c >= header.cols {
            return Err(IoError::Parse {
                line: n,
                detail: format!("entry ({r},{c}) outside {}x{}", header.rows, header.cols),
            });
        }
        let re: f64 = parse(parts[2], "real part", n)?;
        let im: f64 = parse(parts[3], "imaginary part", n)?;
        triplets.push((r, c, C64::new(re, im)));
    }
    if triplets.len() != header.nnz {
        return Err(IoError::Parse {
            line: 0,
            detail: format!(
                "header declares nnz={} but {} entries follow",
                header.nnz,
                triplets.len()
            ),
        });
    }
    let m = SparseMatrix::from_triplets(header.rows, header.cols, triplets);
    Ok((header, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn entries() -> impl Strategy<Value = Vec<(usize, usize, f64, f64)>> {
        prop::collection::vec((0usize..6, 0usize..5, -1e3f64..1e3, -1e3f64..1e3), 0..20)
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(e in entries()) {
            let m = SparseMatrix::from_triplets(6, 5, e.into_iter().map(|(r, c, a, b)| (r, c, C64::new(a, b))));
            let mut buf = Vec::new();
            write_triplets(&mut buf, &m, "test", "00").unwrap();
            let (h, back) = read_triplets(buf.as_slice()).unwrap();
            prop_assert_eq!(h.rows, 6);
            prop_assert_eq!(h.nnz, m.nnz());
            prop_assert_eq!(back, m);
        }
    }

    #[test]
    fn rejects_bad_lines() {
        let text =
            format!("{MAGIC}\n# basis=x\n# basis_sha256=00\n# rows=2 cols=2 nnz=1\n0 5 1.0 0.0\n");
        let err = read_triplets(text.as_bytes()).unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 5, .. }));
        let text =
            format!("{MAGIC}\n# basis=x\n# basis_sha256=00\n# rows=2 cols=2 nnz=2\n0 1 1.0 0.0\n");
        assert!(read_triplets(text.as_bytes()).is_err());
    }

    #[test]
    fn hash_is_stable() {
        let a = hash_descriptors(["a", "b"]);
        assert_eq!(a.len(), 64);
        assert_eq!(a, hash_descriptors(["a", "b"]));
        assert_ne!(a, hash_descriptors(["ab"]));
    }
}
