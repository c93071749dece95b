//! Tabular output shared by every command: a fixed header and rows of
//! numbers or tags, written as CSV (scientific notation, 12 significant
//! digits) or as a JSON array of objects with the same keys.

use std::io::Write;

use serde_json::{Map, Value};

use crate::casimir::ForceDecomposition;
use crate::error::{Error, Result};
use crate::heat::{HeatResult, SpectralDifference, SpectralPoint};
use crate::materials::ModelTag;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Tag(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.11e}"),
            Cell::Tag(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // parse back the CSV text so both formats carry identical digits
            Cell::Num(x) => format!("{x:.11e}")
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map(Value::Number)
                .unwrap_or(Value::Null),
            Cell::Tag(s) => Value::String(s.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow(pub Vec<Cell>);

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    header: Vec<&'static str>,
    rows: Vec<SweepRow>,
}

pub const CASIMIR_HEADER: [&str; 5] = ["L_um", "F_dyn_cm2", "F_TE", "F_TM", "model"];
pub const HEAT_HEADER: [&str; 7] = [
    "L_um",
    "S_erg_s_cm2",
    "S_TE_pw",
    "S_TE_ew",
    "S_TM_pw",
    "S_TM_ew",
    "model",
];
pub const SPECTRUM_HEADER: [&str; 6] = ["log10_omega", "s_total", "s_TE_ew", "s_TM_ew", "s_pw", "model"];
pub const CORRELATIONS_HEADER: [&str; 4] = ["omega", "kperp", "te_density", "tm_density"];
pub const DIFFERENCE_HEADER: [&str; 4] = ["log10_omega", "s_TE_ew_impedance", "s_TE_ew_lifshitz", "difference"];

fn tag(model: ModelTag) -> Cell {
    Cell::Tag(model.as_str().to_string())
}

impl SweepTable {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: SweepRow) -> Result<()> {
        if row.0.len() != self.header.len() {
            return Err(Error::Table(format!(
                "row has {} cells, header has {}",
                row.0.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn header(&self) -> &[&'static str] {
        &self.header
    }

    pub fn rows(&self) -> &[SweepRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn casimir(results: &[ForceDecomposition]) -> Self {
        let mut t = Self::new(&CASIMIR_HEADER);
        t.rows.extend(results.iter().map(|f| {
            SweepRow(vec![
                Cell::Num(crate::constants::cm_to_um(f.gap)),
                Cell::Num(f.total),
                Cell::Num(f.te),
                Cell::Num(f.tm),
                tag(f.model),
            ])
        }));
        t
    }

    /// One row per (gap in cm, result).
    pub fn heat(results: &[(f64, HeatResult)]) -> Self {
        let mut t = Self::new(&HEAT_HEADER);
        t.rows.extend(results.iter().map(|(gap, r)| {
            let s = &r.sectors;
            SweepRow(vec![
                Cell::Num(crate::constants::cm_to_um(*gap)),
                Cell::Num(r.total),
                Cell::Num(s.te_propagating),
                Cell::Num(s.te_evanescent),
                Cell::Num(s.tm_propagating),
                Cell::Num(s.tm_evanescent),
                tag(r.model),
            ])
        }));
        t
    }

    pub fn spectrum(points: &[SpectralPoint], model: ModelTag) -> Self {
        let mut t = Self::new(&SPECTRUM_HEADER);
        t.extend_spectrum(points, model);
        t
    }

    pub fn extend_spectrum(&mut self, points: &[SpectralPoint], model: ModelTag) {
        self.rows.extend(points.iter().map(|p| {
            let s = &p.sectors;
            SweepRow(vec![
                Cell::Num(p.log10_omega()),
                Cell::Num(s.total()),
                Cell::Num(s.te_evanescent),
                Cell::Num(s.tm_evanescent),
                Cell::Num(s.propagating()),
                tag(model),
            ])
        }));
    }

    pub fn difference(points: &[SpectralDifference]) -> Self {
        let mut t = Self::new(&DIFFERENCE_HEADER);
        t.rows.extend(points.iter().map(|d| {
            SweepRow(vec![
                Cell::Num(d.omega.log10()),
                Cell::Num(d.impedance),
                Cell::Num(d.lifshitz),
                Cell::Num(d.difference()),
            ])
        }));
        t
    }

    /// Rows of (ω, k⊥, ⟨aa*⟩, ⟨bb*⟩).
    pub fn correlations(points: &[[f64; 4]]) -> Self {
        let mut t = Self::new(&CORRELATIONS_HEADER);
        t.rows
            .extend(points.iter().map(|r| SweepRow(r.iter().map(|&x| Cell::Num(x)).collect())));
        t
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Table(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.0.iter().map(Cell::csv)).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Table(e.to_string()))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Table(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .zip(&row.0)
                        .map(|(k, c)| (k.to_string(), c.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}
