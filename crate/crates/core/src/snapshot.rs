//! Binary field snapshots.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic    8 bytes  "SKYRSNAP"
//! version  u32      1
//! ncomp    u32      1 (scalar) or 3 (vector)
//! nx ny nz u64 x 3
//! hx hy hz f64 x 3  (dimensionless)
//! L        f64      length scale in meters
//! data     f64 x ncomp*nx*ny*nz, component-major, x fastest
//! ```

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::grid::Grid;

pub const MAGIC: &[u8; 8] = b"SKYRSNAP";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 8 + 4 + 4 + 3 * 8 + 4 * 8;

#[derive(Debug, Clone, PartialEq)]
pub enum Snapshot {
    Scalar(ScalarField),
    Vector(VectorField),
}

impl Snapshot {
    pub fn grid(&self) -> &Grid {
        match self {
            Snapshot::Scalar(f) => f.grid(),
            Snapshot::Vector(f) => f.grid(),
        }
    }

    pub fn into_vector(self) -> Result<VectorField> {
        match self {
            Snapshot::Vector(f) => Ok(f),
            Snapshot::Scalar(_) => Err(Error::Decode("expected a vector snapshot".into())),
        }
    }
}

fn write_raw<W: Write>(mut w: W, grid: &Grid, ncomp: u32, data: &[f64]) -> std::io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    w.write_u32::<LittleEndian>(ncomp)?;
    for n in grid.dims() {
        w.write_u64::<LittleEndian>(n as u64)?;
    }
    for h in grid.spacing() {
        w.write_f64::<LittleEndian>(h)?;
    }
    w.write_f64::<LittleEndian>(grid.length_scale)?;
    for &v in data {
        w.write_f64::<LittleEndian>(v)?;
    }
    Ok(())
}

pub fn write_vector<W: Write>(w: W, field: &VectorField) -> std::io::Result<()> {
    write_raw(w, field.grid(), 3, field.as_slice())
}

pub fn write_scalar<W: Write>(w: W, field: &ScalarField) -> std::io::Result<()> {
    write_raw(w, field.grid(), 1, field.as_slice())
}

pub fn encode_vector(field: &VectorField) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * field.as_slice().len());
    write_vector(&mut out, field).expect("writing to a Vec cannot fail");
    out
}

pub fn encode_scalar(field: &ScalarField) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * field.as_slice().len());
    write_scalar(&mut out, field).expect("writing to a Vec cannot fail");
    out
}

fn truncated(_: std::io::Error) -> Error {
    Error::Decode("snapshot truncated".into())
}

/// Decode a complete snapshot. Trailing bytes are rejected.
pub fn decode(bytes: &[u8]) -> Result<Snapshot> {
    let mut r = bytes;
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(truncated)?;
    if &magic != MAGIC {
        return Err(Error::Decode("bad snapshot magic".into()));
    }
    let version = r.read_u32::<LittleEndian>().map_err(truncated)?;
    if version != VERSION {
        return Err(Error::Decode(format!("unsupported snapshot version {version}")));
    }
    let ncomp = r.read_u32::<LittleEndian>().map_err(truncated)?;
    if ncomp != 1 && ncomp != 3 {
        return Err(Error::Decode(format!("component count must be 1 or 3, got {ncomp}")));
    }
    let mut dims = [0usize; 3];
    for d in &mut dims {
        let n = r.read_u64::<LittleEndian>().map_err(truncated)?;
        *d = usize::try_from(n).map_err(|_| Error::Decode("grid dimension overflows".into()))?;
    }
    let mut spacing = [0.0; 3];
    for h in &mut spacing {
        *h = r.read_f64::<LittleEndian>().map_err(truncated)?;
    }
    let length_scale = r.read_f64::<LittleEndian>().map_err(truncated)?;
    let grid = Grid::new(dims, spacing, length_scale)
        .map_err(|e| Error::Decode(format!("invalid grid header: {e}")))?;

    let count = grid.cells() * ncomp as usize;
    let expected = count
        .checked_mul(8)
        .ok_or_else(|| Error::Decode("payload size overflows".into()))?;
    if r.len() != expected {
        return Err(Error::Decode(format!(
            "payload holds {} bytes, header implies {expected}",
            r.len()
        )));
    }
    let data: Vec<f64> = r
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Ok(if ncomp == 3 {
        Snapshot::Vector(VectorField::from_data(grid, data)?)
    } else {
        Snapshot::Scalar(ScalarField::from_data(grid, data)?)
    })
}

pub fn read<R: Read>(mut r: R) -> Result<Snapshot> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)
        .map_err(|e| Error::Decode(format!("read failed: {e}")))?;
    decode(&bytes)
}
