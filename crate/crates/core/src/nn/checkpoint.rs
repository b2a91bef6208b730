//! Binary model checkpoints.
//!
//! Layout, all integers and floats little-endian:
//!
//! ```text
//! magic      8 bytes   "LLMLP\0\0\x01"
//! n_dims     u32       number of layer sizes (layers + 1)
//! dims       u32 x n_dims
//! params     f64 x sum_k (dims[k] + 1) * dims[k+1]
//! ```
//!
//! Parameters are stored layer by layer: the `out x in` weight matrix in
//! row-major order, then the `out` biases.

use std::io::{Read, Write};

use super::mlp::Mlp;
use crate::error::{Error, Result};

pub const CHECKPOINT_MAGIC: [u8; 8] = *b"LLMLP\0\0\x01";

pub fn write_checkpoint<W: Write>(model: &Mlp, mut out: W) -> Result<()> {
    out.write_all(&CHECKPOINT_MAGIC)?;
    let dims = model.layer_dims();
    out.write_all(&(dims.len() as u32).to_le_bytes())?;
    for &d in dims {
        out.write_all(&(d as u32).to_le_bytes())?;
    }
    for p in model.params() {
        out.write_all(&p.to_le_bytes())?;
    }
    Ok(())
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b).map_err(|e| Error::Checkpoint(e.to_string()))?;
    Ok(u32::from_le_bytes(b))
}

pub fn read_checkpoint<R: Read>(mut input: R) -> Result<Mlp> {
    let mut magic = [0u8; 8];
    input
        .read_exact(&mut magic)
        .map_err(|e| Error::Checkpoint(e.to_string()))?;
    if magic != CHECKPOINT_MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let n = read_u32(&mut input)? as usize;
    if !(2..=64).contains(&n) {
        return Err(Error::Checkpoint(format!("implausible layer count {n}")));
    }
    let dims = (0..n)
        .map(|_| read_u32(&mut input).map(|d| d as usize))
        .collect::<Result<Vec<_>>>()?;
    let mut model = Mlp::zeros(&dims).map_err(|e| Error::Checkpoint(e.to_string()))?;
    let mut b = [0u8; 8];
    for p in model.params_mut() {
        input.read_exact(&mut b).map_err(|e| Error::Checkpoint(e.to_string()))?;
        *p = f64::from_le_bytes(b);
    }
    let mut rest = Vec::new();
    input.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::Checkpoint(format!("{} trailing bytes", rest.len())));
    }
    Ok(model)
}
