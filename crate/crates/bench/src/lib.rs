//! Input builders shared by the scoring benchmarks.

use wcc_core::fixtures::{generate, FixtureKind, SplitMix64};
use wcc_core::graph::Graph;
use wcc_core::partition::Partition;

/// Sparse random graph at social-network-ish average degree.
pub fn random_graph(vertices: u32, avg_degree: f64, seed: u64) -> Graph {
    let p = avg_degree / (vertices as f64 - 1.0);
    generate(
        &FixtureKind::ErRandom {
            vertices,
            edge_probability: p,
        },
        seed,
    )
    .unwrap()
}

/// Random assignment of vertices to `communities` blocks.
pub fn random_partition(vertices: u32, communities: u64, seed: u64) -> Partition {
    let mut rng = SplitMix64::new(seed);
    Partition::from_assignment(
        (0..vertices)
            .map(|_| rng.next_below(communities) as u32)
            .collect(),
    )
}

/// Ring of cliques with its natural per-clique partition.
pub fn ring_with_partition(cliques: u32, clique_size: u32) -> (Graph, Partition) {
    let graph = generate(
        &FixtureKind::RingOfCliques {
            cliques,
            clique_size,
        },
        0,
    )
    .unwrap();
    let partition =
        Partition::from_assignment((0..cliques * clique_size).map(|v| v / clique_size).collect());
    (graph, partition)
}
