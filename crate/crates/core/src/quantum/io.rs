//! Binary and CSV export of grid operators and wavefunctions.
//!
//! Binary layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4 | magic `ADPT` |
//! | 4 | format version (u32, currently 1) |
//! | 4 | rank r (u32) |
//! | 8·r | dimensions (u64 each) |
//! | 16·Πdims | entries as (re: f64, im: f64), row-major |
//!
//! An operator has rank 2 with dims (n·m, n·m); a wavefunction has rank 2
//! with dims (n, m).

use std::io::{Read, Write};

use faer::Mat;

use super::grid::Grid1D;
use super::op::{to_c64, DenseOp, WaveFn};
use crate::error::{AdptError, Result};
use crate::linalg::C64;

pub const MAGIC: &[u8; 4] = b"ADPT";
pub const FORMAT_VERSION: u32 = 1;

/// A decoded binary array.
#[derive(Debug, Clone, PartialEq)]
pub struct Array {
    pub dims: Vec<usize>,
    pub data: Vec<C64>,
}

pub fn write_array<W: Write>(out: &mut W, dims: &[usize], data: impl Iterator<Item = C64>) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&FORMAT_VERSION.to_le_bytes())?;
    out.write_all(&(dims.len() as u32).to_le_bytes())?;
    for &d in dims {
        out.write_all(&(d as u64).to_le_bytes())?;
    }
    let total: usize = dims.iter().product();
    let mut count = 0usize;
    for z in data {
        out.write_all(&z.re.to_le_bytes())?;
        out.write_all(&z.im.to_le_bytes())?;
        count += 1;
    }
    if count != total {
        return Err(AdptError::Dimension(format!("wrote {count} entries for dims {dims:?}")));
    }
    Ok(())
}

pub fn read_array<R: Read>(input: &mut R) -> Result<Array> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(AdptError::Invalid("missing ADPT magic".into()));
    }
    let version = read_u32(input)?;
    if version != FORMAT_VERSION {
        return Err(AdptError::Invalid(format!("unsupported format version {version}")));
    }
    let rank = read_u32(input)? as usize;
    let mut dims = Vec::with_capacity(rank);
    for _ in 0..rank {
        let mut b = [0u8; 8];
        input.read_exact(&mut b)?;
        dims.push(u64::from_le_bytes(b) as usize);
    }
    let total: usize = dims.iter().product();
    let mut data = Vec::with_capacity(total);
    for _ in 0..total {
        let mut b = [0u8; 16];
        input.read_exact(&mut b)?;
        let re = f64::from_le_bytes(b[..8].try_into().expect("8 bytes"));
        let im = f64::from_le_bytes(b[8..].try_into().expect("8 bytes"));
        data.push(C64::new(re, im));
    }
    Ok(Array { dims, data })
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub fn write_operator<W: Write>(out: &mut W, op: &DenseOp) -> Result<()> {
    let n = op.dim();
    write_array(out, &[n, n], (0..n * n).map(|idx| op.get(idx / n, idx % n)))
}

pub fn read_operator<R: Read>(input: &mut R) -> Result<DenseOp> {
    let a = read_array(input)?;
    match a.dims[..] {
        [r, c] if r == c => DenseOp::new(Mat::from_fn(r, c, |i, j| to_c64(a.data[i * c + j]))),
        _ => Err(AdptError::Dimension(format!("expected a square operator, got dims {:?}", a.dims))),
    }
}

pub fn write_wavefn<W: Write>(out: &mut W, psi: &WaveFn) -> Result<()> {
    let g = psi.grid();
    write_array(out, &[g.n_points, g.m_fiber], psi.values().iter().copied())
}

pub fn read_wavefn<R: Read>(input: &mut R, grid: &Grid1D) -> Result<WaveFn> {
    let a = read_array(input)?;
    if a.dims != [grid.n_points, grid.m_fiber] {
        return Err(AdptError::Dimension(format!("wavefunction dims {:?} do not match the grid", a.dims)));
    }
    WaveFn::new(grid, a.data)
}

/// CSV with columns x, re_0, im_0, re_1, im_1, …
pub fn write_wavefn_csv<W: Write>(out: &mut W, psi: &WaveFn) -> Result<()> {
    let g = psi.grid();
    let mut header = vec!["x".to_string()];
    for a in 0..g.m_fiber {
        header.push(format!("re_{a}"));
        header.push(format!("im_{a}"));
    }
    writeln!(out, "{}", header.join(","))?;
    for j in 0..g.n_points {
        let mut row = vec![format!("{:e}", g.x(j))];
        for z in psi.at(j) {
            row.push(format!("{:e}", z.re));
            row.push(format!("{:e}", z.im));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// CSV with columns row, col, re, im, skipping exact zeros.
pub fn write_operator_csv<W: Write>(out: &mut W, op: &DenseOp) -> Result<()> {
    writeln!(out, "row,col,re,im")?;
    for i in 0..op.dim() {
        for j in 0..op.dim() {
            let z = op.get(i, j);
            if z.re != 0.0 || z.im != 0.0 {
                writeln!(out, "{i},{j},{:e},{:e}", z.re, z.im)?;
            }
        }
    }
    Ok(())
}
