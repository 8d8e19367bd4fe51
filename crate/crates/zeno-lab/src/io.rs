//! JSON ingestion and export of operators, Kraus sets and generators, plus
//! the CSV number format used by every report.
//!
//! Schemas (all complex numbers are `[re, im]` pairs, matrices row-major):
//!
//! ```json
//! {"dim": 2, "entries": [[0,0],[1,0],[1,0],[0,0]]}
//! {"dim": 2, "operators": [[[1,0],[0,0],[0,0],[1,0]]]}
//! {"dim": 2, "hamiltonian": [[0.5,0],[0,0],[0,0],[-0.5,0]], "jumps": []}
//! ```

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};
use crate::linalg::{c64, CMat};
use crate::superop::{GklsGenerator, HilbertOperator, KrausSet};

pub type ComplexPair = [f64; 2];

fn to_pairs(m: &CMat) -> Vec<ComplexPair> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push([z.re, z.im]);
        }
    }
    out
}

fn from_pairs(rows: usize, cols: usize, entries: &[ComplexPair]) -> Result<CMat> {
    if entries.len() != rows * cols {
        return Err(ZenoError::InvalidInput(format!(
            "expected {} entries for a {rows}×{cols} matrix, got {}",
            rows * cols,
            entries.len()
        )));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| {
        let [re, im] = entries[i * cols + j];
        c64(re, im)
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub entries: Vec<ComplexPair>,
}

impl OperatorJson {
    pub fn from_matrix(m: &CMat) -> Self {
        OperatorJson { dim: m.nrows(), entries: to_pairs(m) }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        from_pairs(self.dim, self.dim, &self.entries)
    }

    pub fn to_operator(&self) -> Result<HilbertOperator> {
        HilbertOperator::new(self.to_matrix()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausJson {
    pub dim: usize,
    pub operators: Vec<Vec<ComplexPair>>,
}

impl KrausJson {
    pub fn from_set(k: &KrausSet) -> Self {
        KrausJson { dim: k.dim(), operators: k.operators().iter().map(|o| to_pairs(o.matrix())).collect() }
    }

    pub fn to_set(&self) -> Result<KrausSet> {
        let ops = self.operators.iter().map(|e| from_pairs(self.dim, self.dim, e)).collect::<Result<Vec<_>>>()?;
        KrausSet::from_matrices(ops)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GklsJson {
    pub dim: usize,
    pub hamiltonian: Vec<ComplexPair>,
    #[serde(default)]
    pub jumps: Vec<Vec<ComplexPair>>,
}

impl GklsJson {
    pub fn from_generator(g: &GklsGenerator) -> Self {
        GklsJson {
            dim: g.dim(),
            hamiltonian: to_pairs(g.hamiltonian.matrix()),
            jumps: g.jumps.iter().map(|j| to_pairs(j.matrix())).collect(),
        }
    }

    pub fn to_generator(&self) -> Result<GklsGenerator> {
        let h = from_pairs(self.dim, self.dim, &self.hamiltonian)?;
        let jumps = self.jumps.iter().map(|e| from_pairs(self.dim, self.dim, e)).collect::<Result<Vec<_>>>()?;
        GklsGenerator::new(h, jumps)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// 17 significant digits, round-trips binary64.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Minimal CSV table with LF line endings.
#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width differs from header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }
}

/// Serde adapter storing a complex matrix as `{rows, cols, entries}`.
pub mod cmat_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        rows: usize,
        cols: usize,
        entries: Vec<ComplexPair>,
    }

    pub fn serialize<S: Serializer>(m: &CMat, s: S) -> std::result::Result<S::Ok, S::Error> {
        Repr { rows: m.nrows(), cols: m.ncols(), entries: to_pairs(m) }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMat, D::Error> {
        let r = Repr::deserialize(d)?;
        from_pairs(r.rows, r.cols, &r.entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_roundtrip_is_exact() {
        let m = CMat::from_fn(3, 3, |i, j| c64(0.1 * i as f64 + 1.0 / 3.0, std::f64::consts::PI * j as f64 - 1e-300));
        let j = OperatorJson::from_matrix(&m);
        let text = serde_json::to_string(&j).unwrap();
        let back: OperatorJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn rejects_wrong_length() {
        let j = OperatorJson { dim: 2, entries: vec![[1.0, 0.0]; 3] };
        assert!(j.to_matrix().is_err());
    }

    #[test]
    fn csv_format() {
        let mut t = CsvTable::new(&["n", "x"]);
        t.push(vec!["1".into(), fmt_f64(0.1)]);
        assert_eq!(t.render(), "n,x\n1,1.0000000000000001e-1\n");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
