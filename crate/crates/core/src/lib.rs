//! Triangle-based community quality metrics for undirected graphs.
//!
//! The crate scores graph partitions with a weighted clustering metric that
//! rewards communities whose triangles are spread across all members, and
//! ships the companions needed to study it: modularity and conductance for
//! comparison, per-community structural statistics with a percentile
//! report, partition agreement (NMI) and ranking agreement (Kendall tau-b),
//! deterministic fixture generators, and an exhaustive optimal-partition
//! search for tiny graphs.

pub mod compare;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod oracle;
pub mod partition;
pub mod quality;
pub mod wcc;

pub use compare::{kendall, nmi, ContingencyTable, KendallOutcome, RankSeries};
pub use error::{Error, Result};
pub use graph::{load_edge_list, write_edge_list, Graph, VertexId, VertexSet};
pub use oracle::exhaustive_best_partition;
pub use partition::{parse_partition_file, Partition};
pub use quality::{
    community_stats, conductance, modularity, percentile_report, ConductanceVariant,
    PercentileReport, StatRecord,
};
pub use wcc::{wcc_community, wcc_partition, wcc_vertex, ScoreReport};
