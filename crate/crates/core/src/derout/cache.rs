//! On-disk cache of derivation algebra bases.
//!
//! Layout of `<dir>/<sha256(key)>.der`:
//!
//! ```text
//! modlie-der-cache 1
//! key <key>
//! fingerprint <sha256 of the algebra's text form>
//! ambient <dim^2>
//! rows <count>
//! <empty line>
//! ```
//!
//! followed by one record per basis row: `u32` entry count, then per entry a
//! `u32` column and a `u8` value, little-endian.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::liealg::{text, LieAlgebraFp};
use crate::linalg::{SparseVec, Subspace};

const MAGIC: &str = "modlie-der-cache 1";

/// SHA-256 of the algebra's text serialization.
pub fn fingerprint(l: &LieAlgebraFp) -> Result<String> {
    Ok(hex::encode(Sha256::digest(text::to_text(l)?.as_bytes())))
}

#[derive(Debug, Clone)]
pub struct DerCache {
    dir: PathBuf,
}

/// Outcome of [`DerCache::store`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoreOutcome {
    Written,
    /// Another writer holds the lock; nothing was written.
    Locked,
}

impl DerCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.der", hex::encode(Sha256::digest(key.as_bytes()))))
    }

    /// Cached basis for `key`, if present and recorded for the same algebra.
    pub fn load(&self, key: &str, l: &LieAlgebraFp) -> Result<Option<Subspace>> {
        let path = self.path_for(key);
        let file = match File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let mut r = BufReader::new(file);
        let mut header = Vec::new();
        loop {
            let mut line = String::new();
            if r.read_line(&mut line)? == 0 {
                return Err(corrupt("truncated header"));
            }
            let line = line.trim_end_matches('\n').to_string();
            if line.is_empty() {
                break;
            }
            header.push(line);
        }
        let field = |name: &str| -> Result<String> {
            header
                .iter()
                .find_map(|h| h.strip_prefix(name).and_then(|x| x.strip_prefix(' ')))
                .map(str::to_string)
                .ok_or_else(|| corrupt(&format!("missing {name}")))
        };
        if header.first().map(String::as_str) != Some(MAGIC) {
            return Err(corrupt("bad magic"));
        }
        if field("key")? != key || field("fingerprint")? != fingerprint(l)? {
            return Ok(None);
        }
        let ambient: usize = field("ambient")?.parse().map_err(|_| corrupt("ambient"))?;
        let count: usize = field("rows")?.parse().map_err(|_| corrupt("rows"))?;
        if ambient != l.dim() * l.dim() {
            return Ok(None);
        }
        let p = l.p();
        let mut rows: Vec<SparseVec> = Vec::with_capacity(count);
        for _ in 0..count {
            let nnz = read_u32(&mut r)? as usize;
            let mut row = Vec::with_capacity(nnz);
            for _ in 0..nnz {
                let c = read_u32(&mut r)? as usize;
                let mut v = [0u8; 1];
                r.read_exact(&mut v)?;
                if c >= ambient || v[0] == 0 || v[0] >= p {
                    return Err(corrupt("entry out of range"));
                }
                row.push((c, v[0]));
            }
            rows.push(row);
        }
        let mut rest = Vec::new();
        r.read_to_end(&mut rest)?;
        if !rest.is_empty() {
            return Err(corrupt("trailing bytes"));
        }
        let s = Subspace::span(l.field(), ambient, &rows);
        if s.rows() != rows.as_slice() {
            return Err(corrupt("rows are not a reduced echelon basis"));
        }
        Ok(Some(s))
    }

    /// Writes through a temporary file and a rename, guarded by `<file>.lock`.
    pub fn store(&self, key: &str, l: &LieAlgebraFp, der: &Subspace) -> Result<StoreOutcome> {
        let path = self.path_for(key);
        let lock = path.with_extension("lock");
        match OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(_) => {}
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => return Ok(StoreOutcome::Locked),
            Err(e) => return Err(e.into()),
        }
        let result = self.write_file(&path, key, l, der);
        let _ = fs::remove_file(&lock);
        result.map(|_| StoreOutcome::Written)
    }

    fn write_file(&self, path: &Path, key: &str, l: &LieAlgebraFp, der: &Subspace) -> Result<()> {
        if key.contains('\n') {
            return Err(Error::InvalidParameters("cache key must be one line".into()));
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut w = BufWriter::new(File::create(&tmp)?);
            writeln!(w, "{MAGIC}")?;
            writeln!(w, "key {key}")?;
            writeln!(w, "fingerprint {}", fingerprint(l)?)?;
            writeln!(w, "ambient {}", der.ambient_dim())?;
            writeln!(w, "rows {}", der.dim())?;
            writeln!(w)?;
            for row in der.rows() {
                w.write_all(&(row.len() as u32).to_le_bytes())?;
                for &(c, v) in row {
                    w.write_all(&(c as u32).to_le_bytes())?;
                    w.write_all(&[v])?;
                }
            }
            w.flush()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn corrupt(what: &str) -> Error {
    Error::Parse {
        line: 0,
        message: format!("derivation cache: {what}"),
    }
}
