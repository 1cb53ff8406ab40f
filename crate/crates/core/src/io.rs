//! Complex files, sweep reports and DOT export.
//!
//! A complex file is JSON with an integer `vertices`, an `edges` array of
//! `[u, v]` pairs, an optional `automorphisms` array of vertex permutations
//! and an optional `name`. [`ComplexFile::to_canonical_string`] writes edges
//! ascending within each pair and sorted, one per line, so saving a loaded
//! canonical file reproduces it byte for byte.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{CubeComplex, Vertex};
use crate::error::Error;
use crate::stability::SweepReport;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(#[from] Error),
}

impl FileError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        FileError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FileError::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => {
                "file-not-found"
            }
            FileError::Io { .. } => "io",
            FileError::Parse(_) => "parse",
            FileError::Invalid(e) => e.kind(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: usize,
    pub edges: Vec<[Vertex; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub automorphisms: Vec<Vec<Vertex>>,
}

impl ComplexFile {
    pub fn from_complex(
        c: &CubeComplex,
        name: Option<String>,
        automorphisms: Vec<Vec<Vertex>>,
    ) -> Self {
        ComplexFile {
            name,
            vertices: c.vertex_count(),
            edges: c.edges().iter().map(|&(a, b)| [a, b]).collect(),
            automorphisms,
        }
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path).map_err(|e| FileError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), FileError> {
        std::fs::write(path, self.to_canonical_string()).map_err(|e| FileError::io(path, e))
    }

    /// Validates the graph and every listed automorphism.
    pub fn build(&self) -> Result<CubeComplex, Error> {
        let edges: Vec<_> = self.edges.iter().map(|&[a, b]| (a, b)).collect();
        let c = CubeComplex::new(self.vertices, &edges)?;
        for perm in &self.automorphisms {
            c.check_automorphism(perm)?;
        }
        Ok(c)
    }

    pub fn canonicalize(&mut self) {
        for e in &mut self.edges {
            if e[0] > e[1] {
                e.swap(0, 1);
            }
        }
        self.edges.sort_unstable();
    }

    pub fn to_canonical_string(&self) -> String {
        let mut c = self.clone();
        c.canonicalize();
        let mut out = String::from("{\n");
        if let Some(name) = &c.name {
            let _ = writeln!(
                out,
                "  \"name\": {},",
                serde_json::Value::from(name.as_str())
            );
        }
        let _ = writeln!(out, "  \"vertices\": {},", c.vertices);
        out.push_str("  \"edges\": [");
        write_rows(&mut out, c.edges.iter().map(|e| e.as_slice()));
        if !c.automorphisms.is_empty() {
            out.push_str(",\n  \"automorphisms\": [");
            write_rows(&mut out, c.automorphisms.iter().map(|p| p.as_slice()));
        }
        out.push_str("\n}\n");
        out
    }
}

fn write_rows<'a>(out: &mut String, rows: impl Iterator<Item = &'a [usize]>) {
    let mut first = true;
    for row in rows {
        out.push_str(if first { "\n    [" } else { ",\n    [" });
        first = false;
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{v}");
        }
        out.push(']');
    }
    out.push_str(if first { "]" } else { "\n  ]" });
}

pub fn load_complex(path: &Path) -> Result<(ComplexFile, CubeComplex), FileError> {
    let file = ComplexFile::load(path)?;
    let c = file.build()?;
    Ok((file, c))
}

pub fn report_to_string(report: &SweepReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialises");
    s.push('\n');
    s
}

pub fn report_from_str(text: &str) -> Result<SweepReport, FileError> {
    Ok(serde_json::from_str(text)?)
}

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#637939",
];

/// Vertex sets to mark in a DOT export.
#[derive(Clone, Debug)]
pub struct Highlight {
    pub endpoints: (Vertex, Vertex),
    pub interval: crate::bitset::BitSet,
    pub cylinder: crate::bitset::BitSet,
}

/// Undirected DOT graph; edges coloured by hyperplane, cylinder vertices
/// filled (interval vertices darker, endpoints boxed).
pub fn export_dot(c: &CubeComplex, name: &str, highlight: Option<&Highlight>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", serde_json::Value::from(name));
    out.push_str("  node [shape=circle, fontsize=10];\n");
    for v in 0..c.vertex_count() {
        let mut attrs = Vec::new();
        if let Some(h) = highlight {
            if h.interval.contains(v) {
                attrs.push("style=filled, fillcolor=\"#fdae61\"".to_string());
            } else if h.cylinder.contains(v) {
                attrs.push("style=filled, fillcolor=\"#fee08b\"".to_string());
            }
            if v == h.endpoints.0 || v == h.endpoints.1 {
                attrs.push("shape=box".to_string());
            }
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {v};");
        } else {
            let _ = writeln!(out, "  {v} [{}];", attrs.join(", "));
        }
    }
    for hp in c.hyperplanes() {
        let color = PALETTE[hp.id % PALETTE.len()];
        for &(a, b) in &hp.edges {
            let _ = writeln!(
                out,
                "  {a} -- {b} [color=\"{color}\", hyperplane={}];",
                hp.id
            );
        }
    }
    out.push_str("}\n");
    out
}
