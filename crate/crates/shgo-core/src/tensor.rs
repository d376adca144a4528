//! Dense integral tensors and their self-describing binary container.
//!
//! The on-disk layout is a single UTF-8 JSON header line — rank, dimensions,
//! basis label, engine, integral kind, screening threshold, and an FNV-1a 64
//! checksum of the payload — followed by `\n` and the raw data as
//! little-endian 64-bit floats in row-major order. Reading inverts writing
//! bit-exactly and verifies the checksum, so silent truncation or corruption
//! is impossible to miss.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

/// Descriptive metadata carried in the tensor header.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorMeta {
    /// Free-form label of the basis (e.g. the basis file stem).
    pub basis: String,
    /// Which integral path produced the data ("shgo" or "cgto").
    pub engine: String,
    /// Integral kind ("overlap", "nuclear", "eri").
    pub kind: String,
    /// Screening threshold in effect, if any.
    pub screening: Option<f64>,
}

/// A dense rank-2 or rank-4 result tensor over the real solid-harmonic
/// basis, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralTensor {
    pub dims: Vec<usize>,
    pub data: Vec<f64>,
    pub meta: TensorMeta,
}

#[derive(Serialize, Deserialize)]
struct Header {
    rank: usize,
    dims: Vec<usize>,
    basis: String,
    engine: String,
    kind: String,
    screening: Option<f64>,
    checksum: String,
}

/// FNV-1a 64-bit hash — tiny, dependency-free, and plenty for integrity
/// checking of a local file.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

impl IntegralTensor {
    pub fn new(dims: Vec<usize>, data: Vec<f64>, meta: TensorMeta) -> Result<IntegralTensor> {
        let expect: usize = dims.iter().product();
        if data.len() != expect {
            return Err(Error::Dimension(format!(
                "dims {:?} imply {} entries, got {}",
                dims,
                expect,
                data.len()
            )));
        }
        Ok(IntegralTensor { dims, data, meta })
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    fn payload_bytes(&self) -> Vec<u8> {
        let mut bytes = Vec::with_capacity(self.data.len() * 8);
        for v in &self.data {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        bytes
    }

    /// Writes header line + payload.
    pub fn write(&self, path: &Path) -> Result<()> {
        let payload = self.payload_bytes();
        let header = Header {
            rank: self.rank(),
            dims: self.dims.clone(),
            basis: self.meta.basis.clone(),
            engine: self.meta.engine.clone(),
            kind: self.meta.kind.clone(),
            screening: self.meta.screening,
            checksum: format!("fnv1a64:{:016x}", fnv1a64(&payload)),
        };
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer(&mut w, &header)?;
        w.write_all(b"\n")?;
        w.write_all(&payload)?;
        w.flush()?;
        Ok(())
    }

    /// Reads a tensor back, verifying structure and checksum.
    pub fn read(path: &Path) -> Result<IntegralTensor> {
        let mut r = BufReader::new(File::open(path)?);
        let mut line = String::new();
        r.read_line(&mut line)?;
        let header: Header = serde_json::from_str(line.trim_end())?;
        if header.rank != header.dims.len() {
            return Err(Error::CorruptTensor(format!(
                "rank {} does not match {} dimensions",
                header.rank,
                header.dims.len()
            )));
        }
        let expect: usize = header.dims.iter().product();
        let mut payload = Vec::new();
        r.read_to_end(&mut payload)?;
        if payload.len() != expect * 8 {
            return Err(Error::CorruptTensor(format!(
                "payload holds {} bytes, dims {:?} require {}",
                payload.len(),
                header.dims,
                expect * 8
            )));
        }
        let sum = format!("fnv1a64:{:016x}", fnv1a64(&payload));
        if sum != header.checksum {
            return Err(Error::CorruptTensor(format!(
                "checksum mismatch: header {} vs payload {}",
                header.checksum, sum
            )));
        }
        let data: Vec<f64> = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(IntegralTensor {
            dims: header.dims,
            data,
            meta: TensorMeta {
                basis: header.basis,
                engine: header.engine,
                kind: header.kind,
                screening: header.screening,
            },
        })
    }

    /// CSV export of a rank-2 tensor: one row per line, entries in `{:.16e}`
    /// (17 significant digits — enough to reproduce every f64 exactly).
    pub fn export_csv<W: Write>(&self, mut w: W) -> Result<()> {
        if self.rank() != 2 {
            return Err(Error::Dimension(format!(
                "CSV export is defined for rank 2, tensor has rank {}",
                self.rank()
            )));
        }
        let (rows, cols) = (self.dims[0], self.dims[1]);
        for i in 0..rows {
            let row: Vec<String> = (0..cols)
                .map(|j| format!("{:.16e}", self.data[i * cols + j]))
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}
