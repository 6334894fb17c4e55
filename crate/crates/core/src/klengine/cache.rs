//! On-disk KL cache. The layout is described in `docs/kl-cache-format.md`.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use super::{KLPolynomial, KlEngine};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"KLC1";
pub const VERSION: u32 = 1;

/// Default file name for a presentation inside a cache directory.
pub fn cache_path(dir: &Path, engine: &KlEngine) -> PathBuf {
    dir.join(format!("kl-{:016x}.bin", engine.presentation().hash()))
}

fn io_err(e: std::io::Error) -> Error {
    Error::resource("cache", e.to_string())
}

fn put_word(out: &mut Vec<u8>, word: &[u8]) {
    out.extend_from_slice(&(word.len() as u32).to_le_bytes());
    out.extend_from_slice(word);
}

/// Serialises every memoised polynomial of `engine`.
pub fn encode(engine: &KlEngine) -> Vec<u8> {
    let entries = engine.entries();
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&engine.presentation().hash().to_le_bytes());
    out.extend_from_slice(&(entries.len() as u64).to_le_bytes());
    for (x, w, p) in entries {
        put_word(&mut out, x.word());
        put_word(&mut out, w.word());
        out.extend_from_slice(&(p.coeffs().len() as u32).to_le_bytes());
        for c in p.coeffs() {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::domain("cache", "truncated cache file"));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn word(&mut self) -> Result<Vec<u8>> {
        let n = self.u32()? as usize;
        Ok(self.take(n)?.to_vec())
    }
}

/// Loads entries into `engine`, returning how many were read. Words are
/// re-normalised and rejected if they were not already in normal form.
pub fn decode_into(engine: &KlEngine, bytes: &[u8]) -> Result<usize> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::domain("cache", "bad magic"));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::unsupported("cache", format!("cache version {version} is not supported")));
    }
    let hash = r.u64()?;
    if hash != engine.presentation().hash() {
        return Err(Error::domain("cache", "cache belongs to a different presentation"));
    }
    let count = r.u64()? as usize;
    let pres = engine.presentation();
    let mut staged = Vec::with_capacity(count.min(1 << 20));
    for _ in 0..count {
        let x = r.word()?;
        let w = r.word()?;
        let ex = pres.element(&x)?;
        let ew = pres.element(&w)?;
        if ex.word() != x.as_slice() || ew.word() != w.as_slice() {
            return Err(Error::domain("cache", "entry is not in normal form"));
        }
        let n = r.u32()? as usize;
        let coeffs = (0..n).map(|_| r.i64()).collect::<Result<Vec<_>>>()?;
        staged.push((ex, ew, KLPolynomial::from_coeffs(coeffs)));
    }
    if r.pos != bytes.len() {
        return Err(Error::domain("cache", "trailing bytes after last entry"));
    }
    for (x, w, p) in staged {
        engine.insert(&x, &w, p);
    }
    Ok(count)
}

pub fn save(engine: &KlEngine, path: &Path) -> Result<()> {
    let bytes = encode(engine);
    let mut f = fs::File::create(path).map_err(io_err)?;
    f.write_all(&bytes).map_err(io_err)
}

/// Loads `path` if it exists; a missing file is an empty cache.
pub fn load(engine: &KlEngine, path: &Path) -> Result<usize> {
    let mut bytes = Vec::new();
    match fs::File::open(path) {
        Ok(mut f) => f.read_to_end(&mut bytes).map_err(io_err)?,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(io_err(e)),
    };
    decode_into(engine, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::klengine::{CoxeterElement, CoxeterPresentation};

    #[test]
    fn round_trip_and_rejection() {
        let p = CoxeterPresentation::parse("A3").unwrap();
        let eng = KlEngine::new(p.clone());
        let w = p.element(&[1, 0, 2, 1]).unwrap();
        for x in eng.lower_interval(&w).unwrap() {
            eng.kl_polynomial(&x, &w).unwrap();
        }
        let bytes = encode(&eng);
        let fresh = KlEngine::new(p.clone());
        let n = decode_into(&fresh, &bytes).unwrap();
        assert_eq!(n, eng.entries().len());
        assert_eq!(fresh.entries(), eng.entries());
        assert_eq!(encode(&fresh), bytes);

        let other = KlEngine::new(CoxeterPresentation::parse("B3").unwrap());
        assert!(decode_into(&other, &bytes).is_err());
        assert!(decode_into(&fresh, &bytes[..bytes.len() - 3]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode_into(&fresh, &bad).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = CoxeterPresentation::parse("~A1").unwrap();
        let eng = KlEngine::new(p.clone());
        let w = p.element(&[0, 1, 0, 1]).unwrap();
        let e = CoxeterElement { word: vec![] };
        eng.kl_polynomial(&e, &w).unwrap();
        let path = cache_path(dir.path(), &eng);
        save(&eng, &path).unwrap();
        let warm = KlEngine::new(p);
        assert!(load(&warm, &path).unwrap() > 0);
        assert_eq!(warm.kl_polynomial(&e, &w).unwrap(), eng.kl_polynomial(&e, &w).unwrap());
        assert_eq!(load(&warm, &dir.path().join("missing.bin")).unwrap(), 0);
    }
}
