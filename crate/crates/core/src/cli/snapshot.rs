//! Binary field snapshots.
//!
//! Layout, all little-endian:
//!
//! ```text
//! "QMX1"            4 bytes magic
//! version           u32
//! nx, ny, nz        u32 each
//! field count       u32
//! tags              one byte per field: T E B r J U A
//! payload           f64 arrays in tag order, x fastest;
//!                   vector fields as three consecutive component arrays
//! ```

use crate::dynamics::Sources;
use crate::error::{Error, Result};
use crate::field::FieldState;
use crate::grid::{Grid, VectorField};
use std::path::Path;

pub const MAGIC: &[u8; 4] = b"QMX1";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldTag {
    Temporal,
    Electric,
    Magnetic,
    Rho,
    Current,
    ScalarPotential,
    VectorPotential,
}

impl FieldTag {
    pub fn byte(self) -> u8 {
        match self {
            FieldTag::Temporal => b'T',
            FieldTag::Electric => b'E',
            FieldTag::Magnetic => b'B',
            FieldTag::Rho => b'r',
            FieldTag::Current => b'J',
            FieldTag::ScalarPotential => b'U',
            FieldTag::VectorPotential => b'A',
        }
    }

    pub fn from_byte(b: u8) -> Result<Self> {
        Ok(match b {
            b'T' => FieldTag::Temporal,
            b'E' => FieldTag::Electric,
            b'B' => FieldTag::Magnetic,
            b'r' => FieldTag::Rho,
            b'J' => FieldTag::Current,
            b'U' => FieldTag::ScalarPotential,
            b'A' => FieldTag::VectorPotential,
            other => {
                return Err(Error::Snapshot(format!(
                    "unknown field tag byte 0x{other:02x}"
                )))
            }
        })
    }

    pub fn components(self) -> usize {
        match self {
            FieldTag::Temporal | FieldTag::Rho | FieldTag::ScalarPotential => 1,
            _ => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FieldTag::Temporal => "T",
            FieldTag::Electric => "E",
            FieldTag::Magnetic => "B",
            FieldTag::Rho => "rho",
            FieldTag::Current => "J",
            FieldTag::ScalarPotential => "U",
            FieldTag::VectorPotential => "A",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub dims: [usize; 3],
    /// Tag and flattened values (`components × cells`).
    pub fields: Vec<(FieldTag, Vec<f64>)>,
}

fn vector_values(v: &VectorField) -> Vec<f64> {
    (0..3)
        .flat_map(|a| v.component(a).iter().copied())
        .collect()
}

impl Snapshot {
    pub fn cells(&self) -> usize {
        self.dims.iter().product()
    }

    /// `T`, `E`, `B` and, with explicit sources, `ρ` and `J` at the state time.
    pub fn from_state(state: &FieldState, sources: &Sources) -> Self {
        let grid: &Grid = state.grid();
        let mut fields = vec![
            (FieldTag::Temporal, state.temporal.values().to_vec()),
            (FieldTag::Electric, vector_values(&state.electric)),
            (FieldTag::Magnetic, vector_values(&state.magnetic)),
        ];
        if let Some(d) = sources.densities_at(state.time) {
            fields.push((FieldTag::Rho, d.rho.values().to_vec()));
            fields.push((FieldTag::Current, vector_values(&d.current)));
        }
        Self {
            dims: grid.dims(),
            fields,
        }
    }

    pub fn field(&self, tag: FieldTag) -> Option<&[f64]> {
        self.fields
            .iter()
            .find(|(t, _)| *t == tag)
            .map(|(_, v)| v.as_slice())
    }

    pub fn validate(&self) -> Result<()> {
        for (tag, values) in &self.fields {
            let expected = tag.components() * self.cells();
            if values.len() != expected {
                return Err(Error::Snapshot(format!(
                    "field {} holds {} values, dims need {expected}",
                    tag.label(),
                    values.len()
                )));
            }
        }
        Ok(())
    }

    pub fn header_len(&self) -> usize {
        4 + 4 + 12 + 4 + self.fields.len()
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        self.validate()?;
        let payload: usize = self.fields.iter().map(|(_, v)| v.len() * 8).sum();
        let mut out = Vec::with_capacity(self.header_len() + payload);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        for n in self.dims {
            let n = u32::try_from(n)
                .map_err(|_| Error::Snapshot(format!("dimension {n} exceeds u32")))?;
            out.extend_from_slice(&n.to_le_bytes());
        }
        out.extend_from_slice(&(self.fields.len() as u32).to_le_bytes());
        out.extend(self.fields.iter().map(|(t, _)| t.byte()));
        for (_, values) in &self.fields {
            for v in values {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let truncated = |expected: usize| {
            Error::Snapshot(format!(
                "truncated file: expected {expected} bytes, found {}",
                bytes.len()
            ))
        };
        if bytes.len() < 24 {
            if bytes.len() >= 4 && &bytes[..4] != MAGIC {
                return Err(Error::Snapshot("bad magic, not a QMX1 snapshot".into()));
            }
            return Err(truncated(24));
        }
        if &bytes[..4] != MAGIC {
            return Err(Error::Snapshot("bad magic, not a QMX1 snapshot".into()));
        }
        let word =
            |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes")) as usize;
        let version = word(4) as u32;
        if version != VERSION {
            return Err(Error::Snapshot(format!("unsupported version {version}")));
        }
        let dims = [word(8), word(12), word(16)];
        let count = word(20);
        let header = 24 + count;
        if bytes.len() < header {
            return Err(truncated(header));
        }
        let tags = bytes[24..header]
            .iter()
            .map(|&b| FieldTag::from_byte(b))
            .collect::<Result<Vec<_>>>()?;
        let cells: usize = dims.iter().product();
        let total = header
            + tags
                .iter()
                .map(|t| t.components() * cells * 8)
                .sum::<usize>();
        if bytes.len() != total {
            return Err(if bytes.len() < total {
                truncated(total)
            } else {
                Error::Snapshot(format!(
                    "trailing data: expected {total} bytes, found {}",
                    bytes.len()
                ))
            });
        }
        let mut pos = header;
        let mut fields = Vec::with_capacity(tags.len());
        for tag in tags {
            let n = tag.components() * cells;
            let values = bytes[pos..pos + 8 * n]
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
                .collect();
            pos += 8 * n;
            fields.push((tag, values));
        }
        Ok(Self { dims, fields })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_bytes()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}

/// Min, max and `sqrt(Σv²)` of a field's values.
pub fn field_stats(values: &[f64]) -> (f64, f64, f64) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let l2 = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    (min, max, l2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_snapshot(seed: u64) -> Snapshot {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims = [5, 4, 1];
        let cells = 20;
        let fields = [
            FieldTag::Temporal,
            FieldTag::Electric,
            FieldTag::Magnetic,
            FieldTag::Rho,
            FieldTag::Current,
        ]
        .into_iter()
        .map(|t| {
            (
                t,
                (0..t.components() * cells)
                    .map(|_| rng.gen_range(-1e3..1e3))
                    .collect(),
            )
        })
        .collect();
        Snapshot { dims, fields }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let s = random_snapshot(1);
        let bytes = s.to_bytes().unwrap();
        assert_eq!(bytes.len(), s.header_len() + 8 * 20 * 11);
        let back = Snapshot::from_bytes(&bytes).unwrap();
        assert_eq!(back, s);
        let bits = |s: &Snapshot| -> Vec<u64> {
            s.fields
                .iter()
                .flat_map(|(_, v)| v.iter().map(|x| x.to_bits()))
                .collect()
        };
        assert_eq!(bits(&back), bits(&s));
    }

    #[test]
    fn zero_state_has_zero_norms() {
        let g = Grid::cube(4, 1.0).unwrap();
        let s = Snapshot::from_state(&FieldState::zeros(g, 1.0), &Sources::IdentifiedWithT);
        assert_eq!(s.fields.len(), 3);
        for (_, v) in &s.fields {
            assert_eq!(field_stats(v), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn truncation_names_byte_counts() {
        let bytes = random_snapshot(2).to_bytes().unwrap();
        let cut = &bytes[..bytes.len() - 3];
        let msg = Snapshot::from_bytes(cut).unwrap_err().to_string();
        assert!(
            msg.contains(&format!("expected {} bytes", bytes.len())),
            "{msg}"
        );
        assert!(msg.contains(&format!("found {}", cut.len())), "{msg}");
        assert!(Snapshot::from_bytes(&bytes[..10]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(Snapshot::from_bytes(&bad)
            .unwrap_err()
            .to_string()
            .contains("magic"));
    }
}
