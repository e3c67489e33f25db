//! On-disk cache of bases and differential matrices.
//!
//! Layout: `<root>/<parity>/<constraints hash>/<v>_<e>.basis` and
//! `<v>_<e>.<operator>.matrix`. Every file starts with a `sha256 <hex>` line
//! covering the rest of the file; a file whose hash does not match is treated
//! as missing and rewritten. Writes go to a temporary file that is renamed into
//! place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use sha2::{Digest, Sha256};

use crate::calculus::OperatorTag;
use crate::error::{Error, Result};
use crate::graphcore::{GradedBasis, GraphConstraints, Parity};
use crate::linalg::io::{read_basis, read_matrix, write_basis, write_matrix};
use crate::linalg::{Field, SparseMatrix};

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

/// Directory name for a set of constraints.
pub fn constraints_key(c: &GraphConstraints) -> String {
    sha256_hex(c.tag().as_bytes())[..16].to_string()
}

#[derive(Debug, Default)]
pub struct CacheStats {
    pub hits: AtomicUsize,
    pub misses: AtomicUsize,
    pub corrupt: AtomicUsize,
}

#[derive(Debug)]
pub struct Cache {
    root: PathBuf,
    pub stats: CacheStats,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into(), stats: CacheStats::default() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn dir(&self, parity: Parity, c: &GraphConstraints) -> PathBuf {
        self.root.join(parity.letter().to_string()).join(constraints_key(c))
    }

    pub fn basis_path(&self, parity: Parity, c: &GraphConstraints, v: usize, e: usize) -> PathBuf {
        self.dir(parity, c).join(format!("{v}_{e}.basis"))
    }

    pub fn matrix_path(&self, parity: Parity, c: &GraphConstraints, op: &str, v: usize, e: usize) -> PathBuf {
        self.dir(parity, c).join(format!("{v}_{e}.{op}.matrix"))
    }

    /// Body of a file whose hash checks out.
    fn read_verified(&self, path: &Path) -> Option<String> {
        let text = fs::read_to_string(path).ok()?;
        let (head, body) = text.split_once('\n').unwrap_or((&text, ""));
        match head.strip_prefix("sha256 ") {
            Some(h) if h == sha256_hex(body.as_bytes()) => Some(body.to_string()),
            _ => {
                self.stats.corrupt.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    fn write_atomic(&self, path: &Path, body: &str) -> Result<()> {
        let dir = path.parent().ok_or_else(|| Error::Io(format!("no parent for {}", path.display())))?;
        fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        writeln!(tmp, "sha256 {}", sha256_hex(body.as_bytes()))?;
        tmp.write_all(body.as_bytes())?;
        tmp.flush()?;
        tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }

    pub fn load_basis(&self, parity: Parity, c: &GraphConstraints, v: usize, e: usize) -> Option<GradedBasis> {
        let path = self.basis_path(parity, c, v, e);
        if !path.exists() {
            return None;
        }
        let body = self.read_verified(&path)?;
        let b = read_basis(&body, parity, v, e, *c).ok();
        if b.is_none() {
            self.stats.corrupt.fetch_add(1, Ordering::Relaxed);
        }
        b
    }

    pub fn store_basis(&self, b: &GradedBasis) -> Result<()> {
        self.write_atomic(&self.basis_path(b.parity, &b.constraints, b.v, b.e), &write_basis(b))
    }

    pub fn load_matrix(
        &self,
        parity: Parity,
        c: &GraphConstraints,
        op: &str,
        v: usize,
        e: usize,
    ) -> Option<SparseMatrix> {
        let path = self.matrix_path(parity, c, op, v, e);
        if !path.exists() {
            return None;
        }
        let body = self.read_verified(&path)?;
        let m = read_matrix(&body).ok().map(|x| x.0);
        if m.is_none() {
            self.stats.corrupt.fetch_add(1, Ordering::Relaxed);
        }
        m
    }

    pub fn store_matrix(
        &self,
        parity: Parity,
        c: &GraphConstraints,
        op: &str,
        v: usize,
        e: usize,
        m: &SparseMatrix,
    ) -> Result<()> {
        self.write_atomic(&self.matrix_path(parity, c, op, v, e), &write_matrix(m, Field::Rational))
    }

    /// Basis from the cache, or computed by `make` and stored.
    pub fn basis_or(
        &self,
        parity: Parity,
        c: &GraphConstraints,
        v: usize,
        e: usize,
        make: impl FnOnce() -> Result<GradedBasis>,
    ) -> Result<GradedBasis> {
        if let Some(b) = self.load_basis(parity, c, v, e) {
            self.stats.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(b);
        }
        self.stats.misses.fetch_add(1, Ordering::Relaxed);
        let b = make()?;
        self.store_basis(&b)?;
        Ok(b)
    }

    /// Matrix of `op` out of cell `(v, e)`, from the cache or computed and stored.
    pub fn matrix_or(
        &self,
        parity: Parity,
        c: &GraphConstraints,
        op: OperatorTag,
        v: usize,
        e: usize,
        make: impl FnOnce() -> Result<SparseMatrix>,
    ) -> Result<SparseMatrix> {
        let name = op_name(op);
        if let Some(m) = self.load_matrix(parity, c, name, v, e) {
            self.stats.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(m);
        }
        self.stats.misses.fetch_add(1, Ordering::Relaxed);
        let m = make()?;
        self.store_matrix(parity, c, name, v, e, &m)?;
        Ok(m)
    }
}

pub fn op_name(op: OperatorTag) -> &'static str {
    match op {
        OperatorTag::Delta => "delta",
        OperatorTag::Nabla => "nabla",
        OperatorTag::DeltaPlusNabla => "delta+nabla",
        OperatorTag::DualContract => "contract",
        OperatorTag::DualDeleteEdge => "delete",
        OperatorTag::BracketWithTheta => "theta",
    }
}
