//! Binary checkpoint format, all numbers little-endian:
//!
//! ```text
//! magic            8 bytes  "FRACSCAT"
//! schema_version   u32
//! n                u32
//! L, α, γ, λ, t    f64 × 5
//! manifest         u64 length + UTF-8 text (resolved echo)
//! u                n³ × (re, im) f64, row-major over (x₁, x₂, x₃)
//! B                t, last_step f64; n³ × f64
//! pending v̂        u8 flag; n³ × (re, im) if set
//! dyadic snapshot  u8 flag; m i32, t f64, w and v̂ as n³ × (re, im) if set
//! series rows      u64 count; per row 8 × f64, u8 edge flag, f64 order,
//!                  u64 + f64 × lp entries, u64 + f64 × probe entries
//! gap rows         u64 count; per row m i32, t1, t2, gap_w, gap_v f64
//! checksum         u64: first 8 bytes of SHA-256 of everything above
//! ```

use std::path::Path;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use super::output::write_atomic;
use super::{io_err, DyadicSnapshot, GapRow, RunError, RunManifest, SampleRow, SCHEMA_VERSION};
use crate::diagnostics::DiagnosticsRecord;
use crate::dynamics::State;
use crate::scattering::{ModifiedProfile, PhaseCorrection};
use crate::spectral::{ComplexField, Grid, SpectralField};

pub const MAGIC: &[u8; 8] = b"FRACSCAT";

/// Everything needed to continue a run bit-identically.
#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub manifest_text: String,
    pub state: State,
    pub correction: PhaseCorrection,
    pub pending: Option<SpectralField>,
    pub last_dyadic: Option<DyadicSnapshot>,
    pub rows: Vec<SampleRow>,
    pub gaps: Vec<GapRow>,
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn i32(&mut self, v: i32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64s(&mut self, v: &[f64]) {
        for &x in v {
            self.f64(x);
        }
    }
    fn complex(&mut self, v: &[Complex64]) {
        for z in v {
            self.f64(z.re);
            self.f64(z.im);
        }
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], RunError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| RunError::Corrupt("unexpected end of payload".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }
    fn u8(&mut self) -> Result<u8, RunError> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32, RunError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn i32(&mut self) -> Result<i32, RunError> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64, RunError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn len(&mut self) -> Result<usize, RunError> {
        let n = self.u64()?;
        if n > (self.bytes.len() - self.pos) as u64 {
            return Err(RunError::Corrupt(format!("length {n} exceeds payload")));
        }
        Ok(n as usize)
    }
    fn f64(&mut self) -> Result<f64, RunError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64s(&mut self, n: usize) -> Result<Vec<f64>, RunError> {
        (0..n).map(|_| self.f64()).collect()
    }
    fn complex(&mut self, n: usize) -> Result<Vec<Complex64>, RunError> {
        (0..n).map(|_| Ok(Complex64::new(self.f64()?, self.f64()?))).collect()
    }
    fn flag(&mut self) -> Result<bool, RunError> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            b => Err(RunError::Corrupt(format!("bad flag byte {b}"))),
        }
    }
}

fn checksum(bytes: &[u8]) -> u64 {
    let digest = Sha256::digest(bytes);
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

fn encode(ckpt: &Checkpoint) -> Vec<u8> {
    let grid = ckpt.state.u.grid();
    let m = RunManifest::parse(&ckpt.manifest_text).ok();
    let (alpha, gamma, lambda) =
        m.map(|m| (m.config.alpha, m.config.gamma, m.config.lambda))
            .unwrap_or((f64::NAN, f64::NAN, f64::NAN));
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(MAGIC);
    w.u32(SCHEMA_VERSION);
    w.u32(grid.n() as u32);
    w.f64s(&[grid.length(), alpha, gamma, lambda, ckpt.state.t]);
    w.u64(ckpt.manifest_text.len() as u64);
    w.0.extend_from_slice(ckpt.manifest_text.as_bytes());
    w.complex(ckpt.state.u.values());
    w.f64(ckpt.correction.t());
    w.f64(ckpt.correction.last_step());
    w.f64s(ckpt.correction.values());
    match &ckpt.pending {
        Some(v) => {
            w.u8(1);
            w.complex(v.values());
        }
        None => w.u8(0),
    }
    match &ckpt.last_dyadic {
        Some(d) => {
            w.u8(1);
            w.i32(d.m);
            w.f64(d.w.t());
            w.complex(d.w.values());
            w.complex(d.v_hat.values());
        }
        None => w.u8(0),
    }
    w.u64(ckpt.rows.len() as u64);
    for row in &ckpt.rows {
        let r = &row.record;
        w.f64s(&[r.t, r.mass, r.energy, r.sup_u, r.h_n, r.xv_h3, r.x2v_h2, r.xi5_sup]);
        w.u8(u8::from(r.edge_warning));
        w.f64(r.sobolev_order);
        w.u64(r.lp_profile.len() as u64);
        w.f64s(&r.lp_profile);
        w.u64(row.probe_b.len() as u64);
        w.f64s(&row.probe_b);
    }
    w.u64(ckpt.gaps.len() as u64);
    for g in &ckpt.gaps {
        w.i32(g.m);
        w.f64s(&[g.t1, g.t2, g.gap_w, g.gap_v]);
    }
    let sum = checksum(&w.0);
    w.u64(sum);
    w.0
}

fn decode(bytes: &[u8]) -> Result<Checkpoint, RunError> {
    if bytes.len() < MAGIC.len() + 8 {
        return Err(RunError::Checksum);
    }
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    if checksum(body) != u64::from_le_bytes(tail.try_into().unwrap()) {
        return Err(RunError::Checksum);
    }
    let mut r = Reader { bytes: body, pos: 0 };
    if r.take(MAGIC.len())? != MAGIC {
        return Err(RunError::BadMagic);
    }
    let version = r.u32()?;
    if version != SCHEMA_VERSION {
        return Err(RunError::SchemaMismatch {
            expected: SCHEMA_VERSION,
            found: version,
        });
    }
    let n = r.u32()? as usize;
    let header = r.f64s(5)?;
    let text_len = r.len()?;
    let manifest_text =
        String::from_utf8(r.take(text_len)?.to_vec()).map_err(|_| RunError::Corrupt("manifest is not UTF-8".into()))?;
    let manifest = RunManifest::parse(&manifest_text)?;
    let c = &manifest.config;
    if c.n != n || c.length.to_bits() != header[0].to_bits() || c.alpha.to_bits() != header[1].to_bits() {
        return Err(RunError::Corrupt("header disagrees with the embedded manifest".into()));
    }
    let grid = Grid::new(n, header[0]).map_err(|e| RunError::Corrupt(e.to_string()))?;
    let len = grid.len();
    let t = header[4];
    let corrupt = |e: &dyn std::fmt::Display| RunError::Corrupt(e.to_string());
    let u = ComplexField::from_values(&grid, r.complex(len)?).map_err(|e| corrupt(&e))?;
    let b_t = r.f64()?;
    let b_last = r.f64()?;
    let b = r.f64s(len)?;
    let correction =
        PhaseCorrection::from_parts(&grid, manifest.correction_params(), b, b_t, b_last).map_err(|e| corrupt(&e))?;
    let pending = if r.flag()? {
        Some(SpectralField::from_values(&grid, r.complex(len)?).map_err(|e| corrupt(&e))?)
    } else {
        None
    };
    let last_dyadic = if r.flag()? {
        let m = r.i32()?;
        let wt = r.f64()?;
        let w = ModifiedProfile::from_parts(&grid, r.complex(len)?, wt).map_err(|e| corrupt(&e))?;
        let v_hat = SpectralField::from_values(&grid, r.complex(len)?).map_err(|e| corrupt(&e))?;
        Some(DyadicSnapshot { m, w, v_hat })
    } else {
        None
    };
    let n_rows = r.len()?;
    let mut rows = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let f = r.f64s(8)?;
        let edge_warning = r.flag()?;
        let sobolev_order = r.f64()?;
        let n_lp = r.len()?;
        let lp_profile = r.f64s(n_lp)?;
        let n_probe = r.len()?;
        let probe_b = r.f64s(n_probe)?;
        rows.push(SampleRow {
            record: DiagnosticsRecord {
                t: f[0],
                mass: f[1],
                energy: f[2],
                sup_u: f[3],
                h_n: f[4],
                xv_h3: f[5],
                x2v_h2: f[6],
                xi5_sup: f[7],
                lp_profile,
                edge_warning,
                sobolev_order,
            },
            probe_b,
        });
    }
    let n_gaps = r.len()?;
    let mut gaps = Vec::with_capacity(n_gaps);
    for _ in 0..n_gaps {
        let m = r.i32()?;
        let f = r.f64s(4)?;
        gaps.push(GapRow {
            m,
            t1: f[0],
            t2: f[1],
            gap_w: f[2],
            gap_v: f[3],
        });
    }
    if r.pos != body.len() {
        return Err(RunError::Corrupt("trailing bytes".into()));
    }
    Ok(Checkpoint {
        manifest_text,
        state: State::new(t, u),
        correction,
        pending,
        last_dyadic,
        rows,
        gaps,
    })
}

/// Writes a checkpoint atomically.
pub fn save_checkpoint(ckpt: &Checkpoint, path: &Path) -> Result<(), RunError> {
    write_atomic(path, &encode(ckpt))
}

/// Reads and verifies a checkpoint. Nothing is returned unless the checksum matches.
pub fn load_checkpoint(path: &Path) -> Result<Checkpoint, RunError> {
    let bytes = std::fs::read(path).map_err(io_err(path))?;
    decode(&bytes)
}

#[cfg(test)]
mod tests {
    use super::super::Run;
    use super::*;

    fn run() -> Run {
        let m =
            RunManifest::parse("n = 8\nL = 8.0\nalpha = 1.8\nt_end = 2.0\ndt = 0.1\nsample_interval = 0.5\n").unwrap();
        let mut r = Run::new(&m).unwrap();
        r.run_until(2.0).unwrap();
        r
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let ckpt = run().checkpoint();
        let bytes = encode(&ckpt);
        let back = decode(&bytes).unwrap();
        assert_eq!(back, ckpt);
        assert_eq!(encode(&back), bytes);
    }

    #[test]
    fn truncation_and_corruption_detected() {
        let bytes = encode(&run().checkpoint());
        for cut in [0, 7, 100, bytes.len() / 2, bytes.len() - 1] {
            assert!(matches!(decode(&bytes[..cut]), Err(RunError::Checksum)), "cut {cut}");
        }
        let mut flipped = bytes.clone();
        flipped[200] ^= 1;
        assert!(matches!(decode(&flipped), Err(RunError::Checksum)));
    }

    #[test]
    fn schema_mismatch_detected() {
        let mut bytes = encode(&run().checkpoint());
        bytes[8] = 99;
        let body_len = bytes.len() - 8;
        let sum = checksum(&bytes[..body_len]);
        bytes[body_len..].copy_from_slice(&sum.to_le_bytes());
        assert!(matches!(
            decode(&bytes),
            Err(RunError::SchemaMismatch { found: 99, .. })
        ));
    }
}
