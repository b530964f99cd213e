//! Tables of predicted and actual minimal heights over an `(r, d)` window.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Components {
    pub pred: bool,
    pub actual: bool,
}

impl Components {
    pub const PRED: Components = Components { pred: true, actual: false };
    pub const ACTUAL: Components = Components { pred: false, actual: true };
    pub const BOTH: Components = Components { pred: true, actual: true };
}

/// One table entry. `note` explains an absent value that is not a genuine
/// negative (for instance a time limit).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub pred: Option<u32>,
    pub actual: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceGrid {
    r_range: RangeInclusive<u32>,
    d_range: RangeInclusive<u32>,
    components: Components,
    cells: BTreeMap<(u32, u32), Cell>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

const ABSENT: &str = "·";

impl SurfaceGrid {
    /// An all-absent grid covering `r_range × d_range`.
    pub fn new(r_range: RangeInclusive<u32>, d_range: RangeInclusive<u32>, components: Components) -> Self {
        let cells = r_range
            .clone()
            .flat_map(|r| d_range.clone().map(move |d| ((r, d), Cell::default())))
            .collect();
        SurfaceGrid { r_range, d_range, components, cells }
    }

    pub fn r_range(&self) -> RangeInclusive<u32> {
        self.r_range.clone()
    }

    pub fn d_range(&self) -> RangeInclusive<u32> {
        self.d_range.clone()
    }

    pub fn components(&self) -> Components {
        self.components
    }

    pub fn get(&self, r: u32, d: u32) -> Option<&Cell> {
        self.cells.get(&(r, d))
    }

    /// Overwrites a cell; panics outside the grid window.
    pub fn set(&mut self, r: u32, d: u32, cell: Cell) {
        let slot = self.cells.get_mut(&(r, d)).expect("cell outside grid");
        *slot = cell;
    }

    pub fn cells(&self) -> impl Iterator<Item = ((u32, u32), &Cell)> {
        self.cells.iter().map(|(k, v)| (*k, v))
    }

    /// Merges the actual components of `other` into `self`.
    pub fn join(mut self, other: &SurfaceGrid) -> Result<SurfaceGrid> {
        if self.r_range != other.r_range || self.d_range != other.d_range {
            return Err(Error::Precondition("grids cover different windows".into()));
        }
        for (k, c) in self.cells.iter_mut() {
            let o = &other.cells[k];
            c.actual = o.actual;
            if c.note.is_none() {
                c.note.clone_from(&o.note);
            }
        }
        self.components = Components::BOTH;
        Ok(self)
    }

    fn cell_text(&self, c: &Cell) -> String {
        let f = |v: Option<u32>| v.map_or_else(|| ABSENT.to_string(), |v| v.to_string());
        match (self.components.pred, self.components.actual) {
            (true, true) => format!("{}|{}", f(c.pred), f(c.actual)),
            (true, false) => f(c.pred),
            (false, true) => f(c.actual),
            (false, false) => String::new(),
        }
    }

    /// Rows in descending `d`, columns in ascending `r`.
    pub fn render_text(&self) -> String {
        let texts: BTreeMap<(u32, u32), String> = self.cells.iter().map(|(k, c)| (*k, self.cell_text(c))).collect();
        let width = texts
            .values()
            .map(|s| s.chars().count())
            .chain(self.r_range.clone().map(|r| r.to_string().len()))
            .max()
            .unwrap_or(1);
        let label = self.d_range.clone().map(|d| d.to_string().len()).max().unwrap_or(1).max(3);
        let mut out = String::new();
        let _ = write!(out, "{:>label$}", "d\\r");
        for r in self.r_range.clone() {
            let _ = write!(out, "  {r:>width$}");
        }
        out.push('\n');
        for d in self.d_range.clone().rev() {
            let _ = write!(out, "{d:>label$}");
            for r in self.r_range.clone() {
                let _ = write!(out, "  {:>width$}", texts[&(r, d)]);
            }
            out.push('\n');
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("r,d,pred,actual,note\n");
        let f = |v: Option<u32>| v.map(|v| v.to_string()).unwrap_or_default();
        for d in self.d_range.clone().rev() {
            for r in self.r_range.clone() {
                let c = &self.cells[&(r, d)];
                let note = c.note.as_deref().map_or(String::new(), |n| format!("\"{}\"", n.replace('"', "\"\"")));
                let _ = writeln!(out, "{r},{d},{},{},{note}", f(c.pred), f(c.actual));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut comps = Vec::new();
        if self.components.pred {
            comps.push("pred".to_string());
        }
        if self.components.actual {
            comps.push("actual".to_string());
        }
        let rows = self
            .d_range
            .clone()
            .rev()
            .map(|d| JsonRow {
                d,
                cells: self
                    .r_range
                    .clone()
                    .map(|r| {
                        let c = &self.cells[&(r, d)];
                        JsonCell { r, pred: c.pred, actual: c.actual, note: c.note.clone() }
                    })
                    .collect(),
            })
            .collect();
        let doc = JsonGrid { components: comps, rows };
        let mut s = serde_json::to_string_pretty(&doc).expect("grid serializes");
        s.push('\n');
        s
    }

    pub fn from_json(src: &str) -> Result<SurfaceGrid> {
        let doc: JsonGrid = serde_json::from_str(src)?;
        let components = Components {
            pred: doc.components.iter().any(|c| c == "pred"),
            actual: doc.components.iter().any(|c| c == "actual"),
        };
        let ds: Vec<u32> = doc.rows.iter().map(|r| r.d).collect();
        let rs: Vec<u32> = doc.rows.first().map(|row| row.cells.iter().map(|c| c.r).collect()).unwrap_or_default();
        let (r_range, d_range) = match (rs.iter().min(), rs.iter().max(), ds.iter().min(), ds.iter().max()) {
            (Some(&r0), Some(&r1), Some(&d0), Some(&d1)) => (r0..=r1, d0..=d1),
            _ => return Err(Error::Parse("grid has no cells".into())),
        };
        let mut grid = SurfaceGrid::new(r_range, d_range, components);
        let mut seen = 0usize;
        for row in doc.rows {
            for c in row.cells {
                if !grid.cells.contains_key(&(c.r, row.d)) {
                    return Err(Error::Parse(format!("cell ({}, {}) outside grid window", c.r, row.d)));
                }
                grid.set(c.r, row.d, Cell { pred: c.pred, actual: c.actual, note: c.note });
                seen += 1;
            }
        }
        if seen != grid.cells.len() {
            return Err(Error::Parse("grid cells do not cover the window exactly".into()));
        }
        Ok(grid)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Csv => self.render_csv(),
            Format::Json => self.to_json(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonGrid {
    #[serde(default = "both")]
    components: Vec<String>,
    rows: Vec<JsonRow>,
}

fn both() -> Vec<String> {
    vec!["pred".into(), "actual".into()]
}

#[derive(Serialize, Deserialize)]
struct JsonRow {
    d: u32,
    cells: Vec<JsonCell>,
}

#[derive(Serialize, Deserialize)]
struct JsonCell {
    r: u32,
    pred: Option<u32>,
    actual: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}
