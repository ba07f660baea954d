//! Binary checkpoints.
//!
//! Layout, all fields little-endian:
//!
//! | offset | size | field                                   |
//! |--------|------|-----------------------------------------|
//! | 0      | 8    | magic `SMFCKPT1`                        |
//! | 8      | 4    | u32 bytes per complex sample (8 or 16)  |
//! | 12     | 4    | u32 reserved, zero                      |
//! | 16     | 8    | f64 half-length Λ                       |
//! | 24     | 8    | u64 sample count n                      |
//! | 32     | 8    | f64 time t                              |
//! | 40     | ...  | n samples, real part then imaginary part|
//!
//! Samples are f32 pairs for [`Precision::Complex64`] and f64 pairs for
//! [`Precision::Complex128`].

use super::grid::GridSpec;
use super::state::FieldState;
use crate::error::{Result, SmfError};
use num_complex::Complex64 as C64;
use std::io::Write;
use std::path::Path;

const MAGIC: &[u8; 8] = b"SMFCKPT1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Complex64,
    Complex128,
}

pub fn write_checkpoint(path: &Path, state: &FieldState, precision: Precision) -> Result<()> {
    let width: u32 = match precision {
        Precision::Complex64 => 8,
        Precision::Complex128 => 16,
    };
    let mut buf = Vec::with_capacity(40 + state.z.len() * width as usize);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&width.to_le_bytes());
    buf.extend_from_slice(&0u32.to_le_bytes());
    buf.extend_from_slice(&state.grid.half_length.to_le_bytes());
    buf.extend_from_slice(&(state.grid.n as u64).to_le_bytes());
    buf.extend_from_slice(&state.t.to_le_bytes());
    for v in &state.z {
        match precision {
            Precision::Complex64 => {
                buf.extend_from_slice(&(v.re as f32).to_le_bytes());
                buf.extend_from_slice(&(v.im as f32).to_le_bytes());
            }
            Precision::Complex128 => {
                buf.extend_from_slice(&v.re.to_le_bytes());
                buf.extend_from_slice(&v.im.to_le_bytes());
            }
        }
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(&buf)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn take<const N: usize>(b: &[u8], at: usize) -> Result<[u8; N]> {
    b.get(at..at + N)
        .and_then(|s| s.try_into().ok())
        .ok_or_else(|| SmfError::Io("truncated checkpoint".into()))
}

pub fn read_checkpoint(path: &Path) -> Result<FieldState> {
    let b = std::fs::read(path)?;
    if take::<8>(&b, 0)? != *MAGIC {
        return Err(SmfError::Io("not an smflow checkpoint".into()));
    }
    let width = u32::from_le_bytes(take(&b, 8)?);
    let half_length = f64::from_le_bytes(take(&b, 16)?);
    let n = u64::from_le_bytes(take(&b, 24)?) as usize;
    let t = f64::from_le_bytes(take(&b, 32)?);
    let grid = GridSpec::new(half_length, n)?;
    let mut z = Vec::with_capacity(n);
    for i in 0..n {
        let at = 40 + i * width as usize;
        let v = match width {
            8 => C64::new(f32::from_le_bytes(take(&b, at)?) as f64, f32::from_le_bytes(take(&b, at + 4)?) as f64),
            16 => C64::new(f64::from_le_bytes(take(&b, at)?), f64::from_le_bytes(take(&b, at + 8)?)),
            w => return Err(SmfError::Io(format!("unsupported sample width {w}"))),
        };
        z.push(v);
    }
    Ok(FieldState::new(t, grid, z))
}
