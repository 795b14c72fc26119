//! Statistical parametric networks and density-aware graph topology.
//!
//! The crate covers three related pieces of functional-connectivity
//! network analysis:
//!
//! * [`spn`]: summary networks of a population of correlation matrices,
//!   built edge by edge from hypothesis tests with false-discovery-rate
//!   control (mean SPNs per condition and differential SPNs along an
//!   ordered experimental factor, for edges and for nodes).
//! * [`graph`] and [`density`]: global, local and weighted efficiency,
//!   weighted density, density thresholding and density-integrated metrics
//!   that are invariant to monotone rescaling of the weights.
//! * [`modularity`], [`generators`] and [`sweep`]: greedy modularity and
//!   seeded lattice / random-graph simulations showing how module counts
//!   track randomness and edge count.
//!
//! [`io`] handles manifests, CSV matrices, exports and the report bundle;
//! [`cli`] is the command-line front end used by the `spnet` binary.

pub mod cli;
pub mod density;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod modularity;
pub mod spn;
pub mod stats;
pub mod sweep;
pub mod synth;

pub use density::{
    density_integrated_metric, density_threshold, verify_monotone_invariance, DensityProfile,
    Metric,
};
pub use error::{Error, Result};
pub use graph::{
    global_efficiency, local_efficiency, shortest_paths_unweighted, shortest_paths_weighted,
    spread_condition_holds, threshold, weighted_density, weighted_efficiency, BinaryGraph,
    DistanceMatrix, WeightedGraph,
};
pub use matrix::SquareMatrix;
pub use modularity::{greedy_modularity, newman_q, Partition};
pub use spn::{
    differential_spn, mean_spn, node_differential_spn, NodeSignalDataset, SpnKind, SpnResult,
    StudyDataset,
};
pub use sweep::{edges_sweep, randomness_sweep, SweepResult, Topology};
