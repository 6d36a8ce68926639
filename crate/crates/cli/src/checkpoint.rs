//! Solver checkpoints.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic     8 bytes  "SKYRCKPT"
//! version   u32      1
//! hash      32 bytes physics hash of the scenario
//! step      u64
//! dt        f64      dimensionless
//! dynamics  u8       0 = LL, 1 = heat flow
//! levels    u8       1 or 2
//! seed      u64
//! stream    u64
//! word_pos  u128     position of the ChaCha8 generator
//! nx ny nz  u64 x 3
//! hx hy hz  f64 x 3
//! L         f64
//! fields    m_curr, hhat_curr, then m_prev, hhat_prev when levels = 2;
//!           each f64 x 3*nx*ny*nz, component-major, x fastest
//! ```
//!
//! A single stored level restarts with a BDF1 step.

use std::io::{Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use skyrmag::{Dynamics, Grid, SolverState, VectorField};

use crate::error::CliError;

pub const MAGIC: &[u8; 8] = b"SKYRCKPT";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngState {
    pub seed: u64,
    pub stream: u64,
    pub word_pos: u128,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub config_hash: [u8; 32],
    pub rng: RngState,
    pub state: SolverState,
}

fn write_field<W: Write>(w: &mut W, f: &VectorField) -> std::io::Result<()> {
    for &v in f.as_slice() {
        w.write_f64::<LittleEndian>(v)?;
    }
    Ok(())
}

impl Checkpoint {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let s = &self.state;
        let grid = s.m_curr.grid();
        w.write_all(MAGIC)?;
        w.write_u32::<LittleEndian>(VERSION)?;
        w.write_all(&self.config_hash)?;
        w.write_u64::<LittleEndian>(s.step)?;
        w.write_f64::<LittleEndian>(s.dt)?;
        w.write_u8(match s.dynamics {
            Dynamics::LandauLifshitz => 0,
            Dynamics::HeatFlow => 1,
        })?;
        let history = match (&s.m_prev, &s.hhat_prev) {
            (Some(m), Some(h)) => Some((m, h)),
            _ => None,
        };
        w.write_u8(if history.is_some() { 2 } else { 1 })?;
        w.write_u64::<LittleEndian>(self.rng.seed)?;
        w.write_u64::<LittleEndian>(self.rng.stream)?;
        w.write_u128::<LittleEndian>(self.rng.word_pos)?;
        for n in grid.dims() {
            w.write_u64::<LittleEndian>(n as u64)?;
        }
        for h in grid.spacing() {
            w.write_f64::<LittleEndian>(h)?;
        }
        w.write_f64::<LittleEndian>(grid.length_scale)?;
        write_field(&mut w, &s.m_curr)?;
        write_field(&mut w, &s.hhat_curr)?;
        if let Some((m, h)) = history {
            write_field(&mut w, m)?;
            write_field(&mut w, h)?;
        }
        Ok(())
    }

    /// Decode a complete checkpoint. Trailing bytes are rejected.
    pub fn decode(bytes: &[u8]) -> Result<Self, CliError> {
        let bad = |m: &str| CliError::Checkpoint(m.to_string());
        let eof = |_: std::io::Error| bad("truncated");
        let mut r = bytes;
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic).map_err(eof)?;
        if &magic != MAGIC {
            return Err(bad("bad magic"));
        }
        let version = r.read_u32::<LittleEndian>().map_err(eof)?;
        if version != VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let mut config_hash = [0u8; 32];
        r.read_exact(&mut config_hash).map_err(eof)?;
        let step = r.read_u64::<LittleEndian>().map_err(eof)?;
        let dt = r.read_f64::<LittleEndian>().map_err(eof)?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(bad("time step must be positive"));
        }
        let dynamics = match r.read_u8().map_err(eof)? {
            0 => Dynamics::LandauLifshitz,
            1 => Dynamics::HeatFlow,
            d => return Err(bad(&format!("unknown dynamics tag {d}"))),
        };
        let levels = r.read_u8().map_err(eof)?;
        if levels != 1 && levels != 2 {
            return Err(bad(&format!("history levels must be 1 or 2, got {levels}")));
        }
        let rng = RngState {
            seed: r.read_u64::<LittleEndian>().map_err(eof)?,
            stream: r.read_u64::<LittleEndian>().map_err(eof)?,
            word_pos: r.read_u128::<LittleEndian>().map_err(eof)?,
        };
        let mut dims = [0usize; 3];
        for d in &mut dims {
            let n = r.read_u64::<LittleEndian>().map_err(eof)?;
            *d = usize::try_from(n).map_err(|_| bad("grid dimension overflows"))?;
        }
        let mut spacing = [0.0; 3];
        for h in &mut spacing {
            *h = r.read_f64::<LittleEndian>().map_err(eof)?;
        }
        let length_scale = r.read_f64::<LittleEndian>().map_err(eof)?;
        let grid = Grid::new(dims, spacing, length_scale)
            .map_err(|e| bad(&format!("invalid grid header: {e}")))?;

        let per_field = grid
            .cells()
            .checked_mul(3 * 8)
            .ok_or_else(|| bad("payload size overflows"))?;
        let expected = per_field
            .checked_mul(levels as usize * 2)
            .ok_or_else(|| bad("payload size overflows"))?;
        if r.len() != expected {
            return Err(bad(&format!(
                "payload holds {} bytes, header implies {expected}",
                r.len()
            )));
        }
        let mut fields = r.chunks_exact(per_field).map(|chunk| {
            let data = chunk
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
                .collect();
            VectorField::from_data(grid, data).map_err(|e| bad(&e.to_string()))
        });
        let m_curr = fields.next().expect("length checked")?;
        let hhat_curr = fields.next().expect("length checked")?;
        let (m_prev, hhat_prev) = if levels == 2 {
            (
                Some(fields.next().expect("length checked")?),
                Some(fields.next().expect("length checked")?),
            )
        } else {
            (None, None)
        };
        if m_curr.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(bad("magnetization is not finite"));
        }
        Ok(Self {
            config_hash,
            rng,
            state: SolverState {
                m_curr,
                m_prev,
                hhat_curr,
                hhat_prev,
                step,
                dt,
                dynamics,
            },
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let tmp = path.with_extension("ckpt.tmp");
        std::fs::write(&tmp, self.encode()).map_err(CliError::io(&tmp))?;
        std::fs::rename(&tmp, path).map_err(CliError::io(path))
    }

    /// Load and check that the checkpoint belongs to a scenario with this hash.
    pub fn load(path: &Path, expected_hash: &[u8; 32]) -> Result<Self, CliError> {
        let bytes = std::fs::read(path).map_err(CliError::io(path))?;
        let ck = Self::decode(&bytes)?;
        if &ck.config_hash != expected_hash {
            return Err(CliError::Checkpoint(format!(
                "{} was written for a different scenario (physics hash mismatch)",
                path.display()
            )));
        }
        Ok(ck)
    }
}
