//! On-disk integral cache.
//!
//! Little-endian layout: magic `TCI1`, format version (u32), SHA-256 of the
//! basis (32 bytes), `De`, `Rm`, `am` in internal units (3 x f64), screening
//! threshold (f64), record count (u64), then one record per nonzero canonical
//! entry: key `a, b, c, d` (4 x u32) and value (f64).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::potential::MorseParams;

use super::tensor::{IntegralTensor, QuartetKey};

pub const CACHE_MAGIC: [u8; 4] = *b"TCI1";
pub const CACHE_VERSION: u32 = 1;

pub fn basis_hash(basis: &BasisSet) -> [u8; 32] {
    Sha256::digest(basis.fingerprint_bytes()).into()
}

pub fn save_tensor(path: &Path, tensor: &IntegralTensor, basis: &BasisSet) -> Result<()> {
    if basis.len() != tensor.basis_size() {
        return Err(Error::Dimension(format!(
            "tensor for {} functions, basis has {}",
            tensor.basis_size(),
            basis.len()
        )));
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&basis_hash(basis))?;
    let m = tensor.morse();
    for v in [m.de, m.rm, m.am, tensor.threshold()] {
        w.write_all(&v.to_le_bytes())?;
    }
    let count = tensor.values().iter().filter(|&&v| v != 0.0).count() as u64;
    w.write_all(&count.to_le_bytes())?;
    for (key, v) in tensor.canonical_entries() {
        if v == 0.0 {
            continue;
        }
        for k in key.0 {
            w.write_all(&k.to_le_bytes())?;
        }
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_array<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Cache(format!("truncated file: {e}")))?;
    Ok(buf)
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    Ok(f64::from_le_bytes(read_array(r)?))
}

/// Loads a cached tensor. Returns `Ok(None)` when the file was written for a
/// different basis, potential or threshold.
pub fn load_tensor(
    path: &Path,
    basis: &BasisSet,
    morse: &MorseParams,
    threshold: f64,
) -> Result<Option<IntegralTensor>> {
    let mut r = BufReader::new(File::open(path)?);
    if read_array::<4>(&mut r)? != CACHE_MAGIC {
        return Err(Error::Cache(format!(
            "{} is not an integral cache",
            path.display()
        )));
    }
    let version = u32::from_le_bytes(read_array(&mut r)?);
    if version != CACHE_VERSION {
        return Err(Error::Cache(format!("unsupported cache version {version}")));
    }
    let hash: [u8; 32] = read_array(&mut r)?;
    let (de, rm, am, th) = (
        read_f64(&mut r)?,
        read_f64(&mut r)?,
        read_f64(&mut r)?,
        read_f64(&mut r)?,
    );
    if hash != basis_hash(basis)
        || de.to_bits() != morse.de.to_bits()
        || rm.to_bits() != morse.rm.to_bits()
        || am.to_bits() != morse.am.to_bits()
        || th.to_bits() != threshold.to_bits()
    {
        return Ok(None);
    }
    let count = u64::from_le_bytes(read_array(&mut r)?);
    let n = basis.len();
    let np = n * (n + 1) / 2;
    let total = np * (np + 1) / 2;
    if count as usize > total {
        return Err(Error::Cache(format!(
            "{count} records for {total} canonical entries"
        )));
    }
    let mut values = vec![0.0; total];
    for _ in 0..count {
        let mut key = [0usize; 4];
        for k in key.iter_mut() {
            *k = u32::from_le_bytes(read_array(&mut r)?) as usize;
        }
        let v = read_f64(&mut r)?;
        let [a, b, c, d] = key;
        if key.iter().any(|&k| k >= n)
            || QuartetKey::canonical(a, b, c, d).0.map(|x| x as usize) != key
        {
            return Err(Error::Cache(format!("bad record key {key:?}")));
        }
        let p1 = c * (c + 1) / 2 + a;
        let p2 = d * (d + 1) / 2 + b;
        let (hi, lo) = (p1.max(p2), p1.min(p2));
        values[hi * (hi + 1) / 2 + lo] = v;
    }
    if r.read(&mut [0u8; 1])? != 0 {
        return Err(Error::Cache("trailing bytes after the last record".into()));
    }
    Ok(Some(IntegralTensor::from_values(
        n, threshold, *morse, values,
    )?))
}
