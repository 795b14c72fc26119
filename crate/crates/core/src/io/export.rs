//! DOT, JSON and CSV serialization of graphs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BinaryGraph, Coords, WeightedGraph};
use crate::matrix::{upper_pairs, SquareMatrix};

pub const GRAPH_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Dot,
    Json,
    Csv,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Dot => "dot",
            ExportFormat::Json => "json",
            ExportFormat::Csv => "csv",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            "csv" => Ok(ExportFormat::Csv),
            other => Err(Error::Validation(format!(
                "unknown export format `{other}`"
            ))),
        }
    }
}

/// A graph to export, with optional pass-through coordinates for binary graphs.
#[derive(Clone, Copy, Debug)]
pub enum GraphView<'a> {
    Binary {
        graph: &'a BinaryGraph,
        coords: Option<&'a [Coords]>,
    },
    Weighted(&'a WeightedGraph),
}

impl<'a> From<&'a BinaryGraph> for GraphView<'a> {
    fn from(graph: &'a BinaryGraph) -> Self {
        GraphView::Binary {
            graph,
            coords: None,
        }
    }
}

impl<'a> From<&'a WeightedGraph> for GraphView<'a> {
    fn from(g: &'a WeightedGraph) -> Self {
        GraphView::Weighted(g)
    }
}

impl GraphView<'_> {
    fn labels(&self) -> &[String] {
        match self {
            GraphView::Binary { graph, .. } => graph.node_labels(),
            GraphView::Weighted(g) => g.node_labels(),
        }
    }

    fn coords(&self) -> Option<&[Coords]> {
        match self {
            GraphView::Binary { coords, .. } => *coords,
            GraphView::Weighted(g) => g.node_coords(),
        }
    }

    fn matrix(&self) -> SquareMatrix {
        match self {
            GraphView::Binary { graph, .. } => graph.to_adjacency_matrix(),
            GraphView::Weighted(g) => g.weights().clone(),
        }
    }

    fn kind(&self) -> GraphKind {
        match self {
            GraphView::Binary { .. } => GraphKind::Binary,
            GraphView::Weighted(_) => GraphKind::Weighted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Binary,
    Weighted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Coords>,
}

/// JSON graph document: full matrix plus node metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub schema: u32,
    pub kind: GraphKind,
    pub nodes: Vec<NodeRecord>,
    pub matrix: SquareMatrix,
}

/// A graph read back from a [`GraphDocument`].
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedGraph {
    Binary(BinaryGraph, Option<Vec<Coords>>),
    Weighted(WeightedGraph),
}

impl LoadedGraph {
    pub fn view(&self) -> GraphView<'_> {
        match self {
            LoadedGraph::Binary(graph, coords) => GraphView::Binary {
                graph,
                coords: coords.as_deref(),
            },
            LoadedGraph::Weighted(g) => GraphView::Weighted(g),
        }
    }
}

impl GraphDocument {
    pub fn from_view(view: GraphView<'_>) -> Self {
        let coords = view.coords();
        Self {
            schema: GRAPH_SCHEMA,
            kind: view.kind(),
            nodes: view
                .labels()
                .iter()
                .enumerate()
                .map(|(i, label)| NodeRecord {
                    label: label.clone(),
                    coords: coords.map(|c| c[i]),
                })
                .collect(),
            matrix: view.matrix(),
        }
    }

    pub fn into_graph(self) -> Result<LoadedGraph> {
        if self.schema != GRAPH_SCHEMA {
            return Err(Error::Schema(format!(
                "unsupported graph schema {}",
                self.schema
            )));
        }
        if self.nodes.len() != self.matrix.n() {
            return Err(Error::Schema(format!(
                "{} nodes but a {}x{} matrix",
                self.nodes.len(),
                self.matrix.n(),
                self.matrix.n()
            )));
        }
        let labels: Vec<String> = self.nodes.iter().map(|n| n.label.clone()).collect();
        let coords: Option<Vec<Coords>> = self.nodes.iter().map(|n| n.coords).collect();
        match self.kind {
            GraphKind::Binary => Ok(LoadedGraph::Binary(
                BinaryGraph::from_adjacency(&self.matrix)?.with_labels(labels)?,
                coords,
            )),
            GraphKind::Weighted => Ok(LoadedGraph::Weighted(
                WeightedGraph::new(self.matrix)?
                    .with_labels(labels)?
                    .with_coords(coords)?,
            )),
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn render_dot(view: GraphView<'_>) -> String {
    let labels = view.labels();
    let coords = view.coords();
    let m = view.matrix();
    let mut out = String::from("graph G {\n");
    for (i, label) in labels.iter().enumerate() {
        match coords {
            Some(c) => {
                let [x, y, z] = c[i];
                let _ = writeln!(out, "  {} [pos=\"{x},{y},{z}\"];", quote(label));
            }
            None => {
                let _ = writeln!(out, "  {};", quote(label));
            }
        }
    }
    for (i, j) in upper_pairs(m.n()) {
        let w = m.get(i, j);
        if w == 0.0 {
            continue;
        }
        match view {
            GraphView::Binary { .. } => {
                let _ = writeln!(out, "  {} -- {};", quote(&labels[i]), quote(&labels[j]));
            }
            GraphView::Weighted(_) => {
                let _ = writeln!(
                    out,
                    "  {} -- {} [weight={w}];",
                    quote(&labels[i]),
                    quote(&labels[j])
                );
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Headerless comma-separated full matrix.
pub fn render_matrix_csv(m: &SquareMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.n() {
        let row: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn render_graph(view: GraphView<'_>, format: ExportFormat) -> Result<String> {
    Ok(match format {
        ExportFormat::Dot => render_dot(view),
        ExportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&GraphDocument::from_view(view))?;
            s.push('\n');
            s
        }
        ExportFormat::Csv => render_matrix_csv(&view.matrix()),
    })
}

pub fn export_graph<'a>(
    view: impl Into<GraphView<'a>>,
    format: ExportFormat,
    path: &Path,
) -> Result<()> {
    let text = render_graph(view.into(), format)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_graph_json(path: &Path) -> Result<LoadedGraph> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let doc: GraphDocument = serde_json::from_str(&text)
        .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    doc.into_graph()
}
