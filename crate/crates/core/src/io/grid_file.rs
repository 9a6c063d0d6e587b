//! Binary grid file, little endian throughout:
//!
//! ```text
//! offset  size  field
//! 0       4     magic "BGW2"
//! 4       8     nx (u64), fastest-varying index
//! 12      8     ny (u64)
//! 20      8     x0 (f64)
//! 28      8     dx (f64)
//! 36      8     y0 (f64)
//! 44      8     dy (f64)
//! 52      8     t  (f64)
//! 60      8·nx·ny  values (f64), row-major: value[iy·nx + ix]
//! ```

use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"BGW2";
const HEADER: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct GridFile {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub dx: f64,
    pub y0: f64,
    pub dy: f64,
    pub t: f64,
    pub values: Vec<f64>,
}

pub fn encode_grid(g: &GridFile) -> Result<Vec<u8>> {
    if g.values.len() != g.nx * g.ny {
        return Err(Error::GridMismatch(format!(
            "{} values for a {}×{} grid",
            g.values.len(),
            g.nx,
            g.ny
        )));
    }
    let mut out = Vec::with_capacity(HEADER + 8 * g.values.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(g.nx as u64).to_le_bytes());
    out.extend_from_slice(&(g.ny as u64).to_le_bytes());
    for x in [g.x0, g.dx, g.y0, g.dy, g.t] {
        out.extend_from_slice(&x.to_le_bytes());
    }
    for v in &g.values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_grid(bytes: &[u8]) -> Result<GridFile> {
    let bad = |m: &str| Error::Config {
        key: "grid file".into(),
        message: m.into(),
    };
    if bytes.len() < HEADER || &bytes[..4] != MAGIC {
        return Err(bad("missing BGW2 header"));
    }
    let u = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().expect("8 bytes"));
    let f = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().expect("8 bytes"));
    let (nx, ny) = (u(4) as usize, u(12) as usize);
    let n = nx.checked_mul(ny).ok_or_else(|| bad("dimensions overflow"))?;
    if bytes.len() != HEADER + 8 * n {
        return Err(bad("payload length does not match the dimensions"));
    }
    Ok(GridFile {
        nx,
        ny,
        x0: f(20),
        dx: f(28),
        y0: f(36),
        dy: f(44),
        t: f(52),
        values: (0..n).map(|i| f(HEADER + 8 * i)).collect(),
    })
}
