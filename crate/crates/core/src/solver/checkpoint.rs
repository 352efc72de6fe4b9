//! Binary state container, little-endian throughout:
//!
//! ```text
//! magic  "NSPC"          4 bytes
//! version u32            currently 1
//! dim u32, n u32
//! side f64, t f64
//! mu_inf f64, lambda_inf f64, gamma f64
//! viscosity u32 (0 constant, 1 power law), exponent f64
//! poisson u32 (0 or 1)
//! planes: a, u_1, …, u_d; each as n^d real parts then n^d imaginary parts (f64)
//! ```

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::physics::{PhysicalParams, ViscosityModel};
use crate::scalar::{c, Scalar};
use crate::spectral::{Grid, SpectralField, VectorField};
use crate::state::FluidState;

pub const MAGIC: &[u8; 4] = b"NSPC";
pub const VERSION: u32 = 1;

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_f64(out: &mut Vec<u8>, v: f64) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub fn encode_checkpoint<T: Scalar>(state: &FluidState<T>, params: &PhysicalParams<T>) -> Vec<u8> {
    let g = state.grid();
    let mut out = Vec::with_capacity(96 + 16 * g.len() * (1 + g.dim()));
    out.extend_from_slice(MAGIC);
    put_u32(&mut out, VERSION);
    put_u32(&mut out, g.dim() as u32);
    put_u32(&mut out, g.n() as u32);
    put_f64(&mut out, g.side().as_f64());
    put_f64(&mut out, state.t.as_f64());
    put_f64(&mut out, params.mu_inf.as_f64());
    put_f64(&mut out, params.lambda_inf.as_f64());
    put_f64(&mut out, params.gamma.as_f64());
    match params.viscosity {
        ViscosityModel::Constant => {
            put_u32(&mut out, 0);
            put_f64(&mut out, 0.0);
        }
        ViscosityModel::PowerLaw { exponent } => {
            put_u32(&mut out, 1);
            put_f64(&mut out, exponent.as_f64());
        }
    }
    put_u32(&mut out, params.poisson as u32);
    let planes = std::iter::once(&state.a).chain(state.u.comps());
    for field in planes {
        for z in field.coeffs() {
            put_f64(&mut out, z.re.as_f64());
        }
        for z in field.coeffs() {
            put_f64(&mut out, z.im.as_f64());
        }
    }
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(k).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Format("checkpoint truncated".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn decode_checkpoint<T: Scalar>(bytes: &[u8]) -> Result<(FluidState<T>, PhysicalParams<T>)> {
    let mut cur = Cursor { bytes, pos: 0 };
    if cur.take(4)? != MAGIC {
        return Err(Error::Format("not a checkpoint (bad magic)".into()));
    }
    let version = cur.u32()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported checkpoint version {version}")));
    }
    let dim = cur.u32()? as usize;
    let n = cur.u32()? as usize;
    let side = cur.f64()?;
    let t = cur.f64()?;
    let mu = cur.f64()?;
    let lambda = cur.f64()?;
    let gamma = cur.f64()?;
    let viscosity = match (cur.u32()?, cur.f64()?) {
        (0, _) => ViscosityModel::Constant,
        (1, e) => ViscosityModel::PowerLaw { exponent: c(e) },
        (tag, _) => return Err(Error::Format(format!("unknown viscosity tag {tag}"))),
    };
    let poisson = match cur.u32()? {
        0 => false,
        1 => true,
        v => return Err(Error::Format(format!("invalid poisson flag {v}"))),
    };
    let grid = Grid::new(dim, n, c::<T>(side)).map_err(|e| Error::Format(format!("bad grid header: {e}")))?;
    let len = grid.len();
    let mut read_plane = || -> Result<SpectralField<T>> {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); len];
        for z in coeffs.iter_mut() {
            z.re = c(cur.f64()?);
        }
        for z in coeffs.iter_mut() {
            z.im = c(cur.f64()?);
        }
        SpectralField::from_coeffs(&grid, coeffs)
    };
    let a = read_plane()?;
    let comps = (0..dim).map(|_| read_plane()).collect::<Result<Vec<_>>>()?;
    if cur.pos != bytes.len() {
        return Err(Error::Format("trailing bytes after checkpoint planes".into()));
    }
    let params = PhysicalParams {
        mu_inf: c(mu),
        lambda_inf: c(lambda),
        gamma: c(gamma),
        viscosity,
        poisson,
    };
    Ok((FluidState::new(a, VectorField::new(comps)?, c(t))?, params))
}

pub fn write_checkpoint<T: Scalar>(path: &Path, state: &FluidState<T>, params: &PhysicalParams<T>) -> Result<()> {
    let bytes = encode_checkpoint(state, params);
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&bytes).map_err(|e| Error::io(path, e))
}

pub fn read_checkpoint<T: Scalar>(path: &Path) -> Result<(FluidState<T>, PhysicalParams<T>)> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    decode_checkpoint(&bytes)
}
