//! Serialized forms of grids and reports: versioned JSON, Graphviz DOT and
//! plain-text tables.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::covering::CoverReport;
use crate::error::{Error, Result};
use crate::grid::PdbGrid;
use crate::parikh::{Alphabet, ParikhVector};

pub const SCHEMA_VERSION: u32 = 1;

/// A report tagged with the schema version; the report's own fields sit
/// alongside `schema` at the top level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Versioned<T> {
    pub schema: u32,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Versioned<T> {
    pub fn new(body: T) -> Self {
        Versioned { schema: SCHEMA_VERSION, body }
    }
}

pub fn to_json<T: Serialize>(body: &T) -> String {
    serde_json::to_string_pretty(&Versioned::new(body)).expect("reports serialize")
}

/// Parses a versioned report, rejecting other schema versions.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let v: Versioned<T> = serde_json::from_str(text).map_err(|e| Error::invalid(format!("bad report JSON: {e}")))?;
    if v.schema != SCHEMA_VERSION {
        return Err(Error::invalid(format!("schema {} is not supported (expected {SCHEMA_VERSION})", v.schema)));
    }
    Ok(v.body)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BowExport {
    pub vertex: usize,
    pub letter: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridExport {
    pub k: usize,
    pub sigma: usize,
    pub vertices: Vec<ParikhVector>,
    /// Undirected neighbor edges as vertex index pairs, each listed once.
    pub edges: Vec<(usize, usize)>,
    pub bows: Vec<BowExport>,
    /// Planar positions, present for three letters.
    pub positions: Option<Vec<(f64, f64)>>,
}

impl GridExport {
    pub fn from_grid(grid: &PdbGrid) -> Result<Self> {
        let alphabet = Alphabet::new(grid.sigma())?;
        Ok(GridExport {
            k: grid.k(),
            sigma: grid.sigma(),
            vertices: grid.vertices().to_vec(),
            edges: grid.undirected_edges(),
            bows: grid
                .bows()
                .into_iter()
                .map(|(vertex, l)| BowExport { vertex, letter: alphabet.render_letter(l) })
                .collect(),
            positions: if grid.sigma() == 3 { Some(grid.layout_2d()?) } else { None },
        })
    }
}

/// Inches between adjacent vertices in DOT positions.
const DOT_SCALE: f64 = 1.2;

/// Undirected DOT graph. Bows become self-loops labeled with their letter;
/// with three letters every node carries a pinned `pos`.
pub fn grid_dot(grid: &PdbGrid) -> Result<String> {
    let alphabet = Alphabet::new(grid.sigma())?;
    let positions = if grid.sigma() == 3 { Some(grid.layout_2d()?) } else { None };
    let mut out = String::new();
    writeln!(out, "graph \"H({},{})\" {{", grid.k(), grid.sigma()).unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for (i, p) in grid.vertices().iter().enumerate() {
        match &positions {
            Some(pos) => {
                let (x, y) = pos[i];
                writeln!(out, "  v{i} [label=\"{p}\", pos=\"{:.4},{:.4}!\"];", x * DOT_SCALE, y * DOT_SCALE).unwrap()
            }
            None => writeln!(out, "  v{i} [label=\"{p}\"];").unwrap(),
        }
    }
    for (a, b) in grid.undirected_edges() {
        writeln!(out, "  v{a} -- v{b};").unwrap();
    }
    for (v, l) in grid.bows() {
        writeln!(out, "  v{v} -- v{v} [label=\"{}\"];", alphabet.render_letter(l)).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

/// Left-aligned columns separated by two spaces.
pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let text: Vec<String> = cells.zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(text.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut headers.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

/// Rows of `sigma, k, word, length, pdb, excess`.
pub fn cover_table(reports: &[CoverReport]) -> String {
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.sigma.to_string(),
                r.k.to_string(),
                r.word.clone(),
                r.length.to_string(),
                if r.is_pdb { "yes" } else { "no" }.to_string(),
                r.excess.map_or_else(|| "-".to_string(), |e| e.to_string()),
            ]
        })
        .collect();
    render_table(&["sigma", "k", "word", "length", "pdb", "excess"], &rows)
}
