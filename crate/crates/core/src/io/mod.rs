//! Dataset ingestion, weight standardization, graph export and reports.

mod export;
mod manifest;
mod report;
mod standardize;

pub use export::{
    export_graph, load_graph_json, render_graph, render_matrix_csv, ExportFormat, GraphDocument,
    GraphKind, GraphView, LoadedGraph, NodeRecord,
};
pub use manifest::{
    load_dataset, load_dataset_from, load_node_signals, load_node_signals_from, read_matrix_csv,
    validate_correlation, Manifest, ManifestOptions, NodeSpec, MANIFEST_SCHEMA,
};
pub use report::{report_pipeline, DensityRow, GroupProfile, ReportBundle, ReportOptions};
pub use standardize::{standardize_weights, weighted_from_association, NegativePolicy};
