//! Serialisation of trajectories.
//!
//! * JSON envelope: `schema_version`, model parameters (scalars only), integrator
//!   metadata, and the ledger rows.
//! * Raw coefficient dump, all little-endian:
//!
//! ```text
//! b"DWSF"  u32 version  u32 dim  u32 n  u8 domain (0 torus, 1 box)  [u8; 3] pad  u64 samples
//! per sample: f64 time, then u and v coefficients in storage order
//!             (torus: re, im pairs; box: one real per mode)
//! ```

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::trajectory::{IntegratorMeta, TrajectoryRecord};
use crate::diagnostics::energy::LedgerRow;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::{Domain, GridSpec};
use crate::nonlinearity::NonlinearitySpec;
use crate::state::StatePair;

pub const SCHEMA_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"DWSF";
const DUMP_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEnvelope {
    pub schema_version: u32,
    pub grid: GridSpec,
    pub gamma: f64,
    pub alpha: f64,
    pub theta: f64,
    pub nonlinearity: NonlinearitySpec,
    pub forcing_l2: f64,
    pub meta: IntegratorMeta,
    pub times: Vec<f64>,
    pub ledger: Vec<LedgerRow>,
}

impl TrajectoryEnvelope {
    pub fn from_record(rec: &TrajectoryRecord) -> Self {
        let p = &rec.params;
        Self {
            schema_version: SCHEMA_VERSION,
            grid: *p.grid(),
            gamma: p.gamma,
            alpha: p.alpha,
            theta: p.theta,
            nonlinearity: p.nonlinearity,
            forcing_l2: p.forcing.l2_norm(),
            meta: rec.meta.clone(),
            times: rec.times.clone(),
            ledger: rec.ledger.rows.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Writes sampled states in the flat binary layout.
pub fn write_states<W: Write>(mut w: W, states: &[StatePair]) -> Result<()> {
    let grid = match states.first() {
        Some(s) => *s.grid(),
        None => return Err(Error::Domain("no states to write".into())),
    };
    w.write_all(MAGIC)?;
    w.write_u32::<LittleEndian>(DUMP_VERSION)?;
    w.write_u32::<LittleEndian>(grid.dim() as u32)?;
    w.write_u32::<LittleEndian>(grid.n() as u32)?;
    w.write_u8(if grid.is_torus() { 0 } else { 1 })?;
    w.write_all(&[0u8; 3])?;
    w.write_u64::<LittleEndian>(states.len() as u64)?;
    for s in states {
        grid.check_same(s.grid())?;
        w.write_f64::<LittleEndian>(s.time)?;
        for f in [&s.u, &s.v] {
            for c in f.coeffs() {
                w.write_f64::<LittleEndian>(c.re)?;
                if grid.is_torus() {
                    w.write_f64::<LittleEndian>(c.im)?;
                }
            }
        }
    }
    Ok(())
}

/// Reads a dump written by [`write_states`]. The dealias fraction is not stored
/// and comes back as the default.
pub fn read_states<R: Read>(mut r: R) -> Result<Vec<StatePair>> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Config("not a coefficient dump (bad magic)".into()));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != DUMP_VERSION {
        return Err(Error::Config(format!("unsupported dump version {version}")));
    }
    let dim = r.read_u32::<LittleEndian>()? as usize;
    let n = r.read_u32::<LittleEndian>()? as usize;
    let domain = match r.read_u8()? {
        0 => Domain::Torus,
        1 => Domain::Box,
        x => return Err(Error::Config(format!("unknown domain tag {x}"))),
    };
    let mut pad = [0u8; 3];
    r.read_exact(&mut pad)?;
    let count = r.read_u64::<LittleEndian>()? as usize;
    let grid = GridSpec::new(dim, n, domain)?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let time = r.read_f64::<LittleEndian>()?;
        let mut fields = Vec::with_capacity(2);
        for _ in 0..2 {
            let mut c = Vec::with_capacity(grid.len());
            for _ in 0..grid.len() {
                let re = r.read_f64::<LittleEndian>()?;
                let im = if grid.is_torus() { r.read_f64::<LittleEndian>()? } else { 0.0 };
                c.push(Complex64::new(re, im));
            }
            fields.push(SpectralField::from_coeffs(grid, c)?);
        }
        let v = fields.pop().expect("two fields");
        let u = fields.pop().expect("two fields");
        out.push(StatePair { u, v, time });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_field, SpectrumSpec};

    #[test]
    fn dump_roundtrip() {
        for g in [GridSpec::torus(2, 8).unwrap(), GridSpec::dirichlet_box(1, 16).unwrap()] {
            let states: Vec<StatePair> = (0..3)
                .map(|i| {
                    let u = random_field(g, &SpectrumSpec::new(i, -1.0));
                    let v = random_field(g, &SpectrumSpec::new(i + 10, -1.0));
                    StatePair::new(u, v).unwrap().at_time(0.5 * i as f64)
                })
                .collect();
            let mut buf = Vec::new();
            write_states(&mut buf, &states).unwrap();
            let back = read_states(&buf[..]).unwrap();
            assert_eq!(back, states);
        }
    }

    #[test]
    fn bad_magic_rejected() {
        assert!(read_states(&b"NOPE0000000000000000000000000000"[..]).is_err());
    }
}
