//! Binary cache for sieve tables.
//!
//! Layout (little-endian): `MURM`, u32 version, u8 kind, u64 limit,
//! payload of limit + 1 entries (u32 smallest prime factors for kind 1,
//! i64 twelve-times Hurwitz values for kind 2), u64 FNV-1a of the payload.
//! Writes go to a sibling temp file that is renamed into place.

use std::hash::Hasher;
use std::io::Write;
use std::path::Path;

use fnv::FnvHasher;

use super::IngestError;
use crate::arith::FactorTable;
use crate::quadforms::HurwitzTable;

pub const CACHE_MAGIC: &[u8; 4] = b"MURM";
pub const CACHE_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 1 + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum TableKind {
    Factor = 1,
    Hurwitz = 2,
}

impl TableKind {
    fn entry_size(self) -> usize {
        match self {
            TableKind::Factor => 4,
            TableKind::Hurwitz => 8,
        }
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = FnvHasher::default();
    h.write(bytes);
    h.finish()
}

/// Hashes every byte that passes through to the inner writer.
struct HashingWriter<W> {
    inner: W,
    hasher: FnvHasher,
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.write(&buf[..n]);
        Ok(n)
    }
    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}

fn write_atomic(
    path: &Path,
    kind: TableKind,
    limit: u64,
    payload: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), IngestError> {
    let mut tmp_name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    {
        let mut f = std::io::BufWriter::new(std::fs::File::create(&tmp)?);
        f.write_all(CACHE_MAGIC)?;
        f.write_all(&CACHE_VERSION.to_le_bytes())?;
        f.write_all(&[kind as u8])?;
        f.write_all(&limit.to_le_bytes())?;
        let mut hw = HashingWriter { inner: f, hasher: FnvHasher::default() };
        payload(&mut hw)?;
        let checksum = hw.hasher.finish();
        let mut f = hw.inner;
        f.write_all(&checksum.to_le_bytes())?;
        f.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Validates framing and checksum; returns the file bytes and the payload range.
fn read_checked(path: &Path, kind: TableKind) -> Result<(Vec<u8>, std::ops::Range<usize>), IngestError> {
    let bytes = std::fs::read(path)?;
    if bytes.len() < 4 {
        return Err(IngestError::Truncated { expected: HEADER_LEN as u64, found: bytes.len() as u64 });
    }
    if &bytes[..4] != CACHE_MAGIC {
        return Err(IngestError::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(IngestError::Truncated { expected: HEADER_LEN as u64, found: bytes.len() as u64 });
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != CACHE_VERSION {
        return Err(IngestError::UnsupportedVersion(version));
    }
    if bytes[8] != kind as u8 {
        return Err(IngestError::WrongKind { expected: kind as u8, found: bytes[8] });
    }
    let limit = u64::from_le_bytes(bytes[9..17].try_into().unwrap());
    let payload_len = limit
        .checked_add(1)
        .and_then(|n| n.checked_mul(kind.entry_size() as u64))
        .ok_or(IngestError::Truncated { expected: u64::MAX, found: bytes.len() as u64 })?;
    let expected = HEADER_LEN as u64 + payload_len + 8;
    if (bytes.len() as u64) < expected {
        return Err(IngestError::Truncated { expected, found: bytes.len() as u64 });
    }
    let payload = &bytes[HEADER_LEN..HEADER_LEN + payload_len as usize];
    let stored = u64::from_le_bytes(bytes[expected as usize - 8..expected as usize].try_into().unwrap());
    let computed = fnv1a(payload);
    if stored != computed {
        return Err(IngestError::Checksum { stored, computed });
    }
    Ok((bytes, HEADER_LEN..HEADER_LEN + payload_len as usize))
}

pub fn save_factor_table(path: impl AsRef<Path>, table: &FactorTable) -> Result<(), IngestError> {
    write_atomic(path.as_ref(), TableKind::Factor, table.limit(), |w| {
        table.raw().iter().try_for_each(|v| w.write_all(&v.to_le_bytes()))
    })
}

pub fn load_factor_table(path: impl AsRef<Path>) -> Result<FactorTable, IngestError> {
    let (bytes, range) = read_checked(path.as_ref(), TableKind::Factor)?;
    let spf = bytes[range].chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();
    FactorTable::from_raw(spf).map_err(|e| IngestError::Domain(e.to_string()))
}

pub fn save_hurwitz_table(path: impl AsRef<Path>, table: &HurwitzTable) -> Result<(), IngestError> {
    write_atomic(path.as_ref(), TableKind::Hurwitz, table.limit(), |w| {
        table.raw().iter().try_for_each(|&v| w.write_all(&(v as i64).to_le_bytes()))
    })
}

pub fn load_hurwitz_table(path: impl AsRef<Path>) -> Result<HurwitzTable, IngestError> {
    let (bytes, range) = read_checked(path.as_ref(), TableKind::Hurwitz)?;
    let values = bytes[range]
        .chunks_exact(8)
        .map(|c| {
            let v = i64::from_le_bytes(c.try_into().unwrap());
            i32::try_from(v).map_err(|_| IngestError::Domain(format!("hurwitz entry {v} out of range")))
        })
        .collect::<Result<Vec<i32>, _>>()?;
    HurwitzTable::from_raw(values).map_err(|e| IngestError::Domain(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_factor_table;
    use crate::quadforms::build_hurwitz_table;

    #[test]
    fn hurwitz_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.bin");
        let t = build_hurwitz_table(10_000).unwrap();
        save_hurwitz_table(&path, &t).unwrap();
        assert_eq!(load_hurwitz_table(&path).unwrap(), t);
        let len = std::fs::metadata(&path).unwrap().len();
        assert_eq!(len, (HEADER_LEN + 10_001 * 8 + 8) as u64);
    }

    #[test]
    fn factor_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.bin");
        let t = build_factor_table(5_000).unwrap();
        save_factor_table(&path, &t).unwrap();
        assert_eq!(load_factor_table(&path).unwrap(), t);
    }

    #[test]
    fn error_kinds() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.bin");
        save_hurwitz_table(&path, &build_hurwitz_table(100).unwrap()).unwrap();
        let good = std::fs::read(&path).unwrap();

        let mut bad = good.clone();
        bad[0] = b'X';
        std::fs::write(&path, &bad).unwrap();
        assert!(matches!(load_hurwitz_table(&path), Err(IngestError::BadMagic)));

        let mut bad = good.clone();
        bad[4] = 9;
        std::fs::write(&path, &bad).unwrap();
        assert!(matches!(load_hurwitz_table(&path), Err(IngestError::UnsupportedVersion(9))));

        std::fs::write(&path, &good[..good.len() - 20]).unwrap();
        assert!(matches!(load_hurwitz_table(&path), Err(IngestError::Truncated { .. })));

        let mut bad = good.clone();
        bad[HEADER_LEN + 30] ^= 1;
        std::fs::write(&path, &bad).unwrap();
        assert!(matches!(load_hurwitz_table(&path), Err(IngestError::Checksum { .. })));

        std::fs::write(&path, &good).unwrap();
        assert!(matches!(load_factor_table(&path), Err(IngestError::WrongKind { expected: 1, found: 2 })));
    }
}
