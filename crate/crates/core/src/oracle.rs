//! Exhaustive search for the best-scoring partition of a tiny graph.
//!
//! Set partitions are enumerated as restricted growth strings, which visit
//! each partition exactly once and in lexicographic assignment order. With
//! at most twelve vertices every community fits in a bitmask, so scoring a
//! candidate partition is a handful of popcounts per vertex.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::partition::Partition;
use crate::wcc::wcc_partition;

/// Hard cap on the exhaustive search; Bell(12) is ~4.2 million partitions.
pub const MAX_EXHAUSTIVE_VERTICES: usize = 12;

/// Per-vertex data folded into bitmasks for fast candidate scoring.
struct SearchTables {
    /// Triangle corner pairs of each vertex, as two-bit masks.
    pairs: Vec<Vec<u16>>,
    /// Whole-graph triangle count per vertex.
    triangles_total: Vec<f64>,
    /// Triangle partners per vertex, as a bitmask.
    partner_mask: Vec<u16>,
}

impl SearchTables {
    fn build(graph: &Graph) -> SearchTables {
        let n = graph.vertex_count();
        let mut adj_mask = vec![0u16; n];
        for v in 0..n as VertexId {
            for &u in graph.neighbors(v) {
                adj_mask[v as usize] |= 1 << u;
            }
        }
        let mut pairs = vec![Vec::new(); n];
        let mut partner_mask = vec![0u16; n];
        for x in 0..n as VertexId {
            for &y in graph.neighbors(x) {
                if adj_mask[x as usize] & adj_mask[y as usize] != 0 {
                    partner_mask[x as usize] |= 1 << y;
                }
                for &z in graph.neighbors(x) {
                    if z > y && graph.has_edge(y, z) {
                        pairs[x as usize].push((1 << y) | (1 << z));
                    }
                }
            }
        }
        let triangles_total = pairs.iter().map(|p| p.len() as f64).collect();
        SearchTables {
            pairs,
            triangles_total,
            partner_mask,
        }
    }

    /// Partition score for an assignment, using the identity that the
    /// size-weighted community means collapse into a plain vertex sum.
    fn score(&self, assignment: &[u8], community_masks: &[u16]) -> f64 {
        let mut sum = 0.0;
        for (x, pairs) in self.pairs.iter().enumerate() {
            let t_total = self.triangles_total[x];
            if t_total == 0.0 {
                continue;
            }
            let mask = community_masks[assignment[x] as usize];
            let t_in = pairs.iter().filter(|&&pm| pm & mask == pm).count() as f64;
            if t_in == 0.0 {
                continue;
            }
            let partners = self.partner_mask[x];
            let partners_total = partners.count_ones() as f64;
            let partners_outside = (partners & !mask).count_ones() as f64;
            let set_minus_one = (mask.count_ones() - 1) as f64;
            sum += (t_in / t_total) * (partners_total / (set_minus_one + partners_outside));
        }
        sum / assignment.len() as f64
    }
}

/// Enumerates every partition of the vertex set and returns one with the
/// maximum score, together with that score.
///
/// Ties break toward fewer communities, then toward the lexicographically
/// smallest assignment (which the enumeration order supplies for free).
pub fn exhaustive_best_partition(graph: &Graph) -> Result<(Partition, f64)> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::domain("cannot partition an empty graph"));
    }
    if n > MAX_EXHAUSTIVE_VERTICES {
        return Err(Error::TooLarge {
            vertices: n,
            limit: MAX_EXHAUSTIVE_VERTICES,
        });
    }

    let tables = SearchTables::build(graph);

    // Restricted growth string state: assignment[i] <= 1 + max(assignment[..i]).
    let mut assignment = vec![0u8; n];
    let mut prefix_max = vec![0u8; n]; // max of assignment[..=i]
    let mut masks = vec![0u16; n + 1];

    let mut best_assignment = assignment.clone();
    let mut best_score = f64::NEG_INFINITY;
    let mut best_communities = usize::MAX;

    loop {
        for m in masks.iter_mut() {
            *m = 0;
        }
        let mut communities = 0usize;
        for (v, &c) in assignment.iter().enumerate() {
            masks[c as usize] |= 1 << v;
            communities = communities.max(c as usize + 1);
        }
        let score = tables.score(&assignment, &masks);
        if score > best_score || (score == best_score && communities < best_communities) {
            best_score = score;
            best_communities = communities;
            best_assignment.copy_from_slice(&assignment);
        }

        if !advance_growth_string(&mut assignment, &mut prefix_max) {
            break;
        }
    }

    let partition =
        Partition::from_assignment(best_assignment.iter().map(|&c| c as u32).collect());
    let report = wcc_partition(graph, &partition)?;
    Ok((partition, report.wcc))
}

/// Steps a restricted growth string to its lexicographic successor.
/// `prefix_max[i]` tracks `max(assignment[..=i])`. Returns false once the
/// last partition has been visited.
fn advance_growth_string(assignment: &mut [u8], prefix_max: &mut [u8]) -> bool {
    let n = assignment.len();
    let mut i = n.saturating_sub(1);
    while i >= 1 {
        // assignment[i] may grow to one past the maximum of its prefix.
        if assignment[i] <= prefix_max[i - 1] {
            assignment[i] += 1;
            prefix_max[i] = prefix_max[i - 1].max(assignment[i]);
            for j in i + 1..n {
                assignment[j] = 0;
                prefix_max[j] = prefix_max[j - 1];
            }
            return true;
        }
        i -= 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{generate, FixtureKind};
    use crate::graph::Graph;

    #[test]
    fn bridged_cliques_split_at_the_bridge() {
        let g = generate(
            &FixtureKind::BridgedCliques {
                first: 4,
                second: 4,
            },
            0,
        )
        .unwrap();
        let (best, score) = exhaustive_best_partition(&g).unwrap();
        assert!((score - 1.0).abs() < 1e-12);
        assert_eq!(best.community_count(), 2);
        assert_eq!(best.community(0).members(), &[0, 1, 2, 3]);
        assert_eq!(best.community(1).members(), &[4, 5, 6, 7]);
    }

    #[test]
    fn clique_plus_isolated_triangle() {
        let mut edges = vec![(5, 6), (6, 7), (7, 5)];
        for u in 0..5u32 {
            for v in u + 1..5 {
                edges.push((u, v));
            }
        }
        let g = Graph::from_edges(8, edges).unwrap();
        let (best, score) = exhaustive_best_partition(&g).unwrap();
        assert!((score - 1.0).abs() < 1e-12);
        assert_eq!(best.community_count(), 2);
        assert_eq!(best.community(1).members(), &[5, 6, 7]);
    }

    #[test]
    fn shared_vertex_cliques_assign_the_cut_vertex_once() {
        let g = generate(
            &FixtureKind::SharedVertexCliques {
                first: 5,
                second: 5,
            },
            0,
        )
        .unwrap();
        let (best, score) = exhaustive_best_partition(&g).unwrap();
        assert!(score >= 6.5 / 9.0 - 1e-12);
        // The shared vertex 0 must land in exactly one of the two cliques.
        let c0 = best.community_of(0);
        let with_shared: Vec<u32> = best.community(c0).members().to_vec();
        assert!(
            with_shared == vec![0, 1, 2, 3, 4] || with_shared == vec![0, 5, 6, 7, 8],
            "unexpected community {with_shared:?}"
        );
    }

    #[test]
    fn refuses_large_graphs() {
        let g = generate(&FixtureKind::Cycle { length: 13 }, 0).unwrap();
        assert!(matches!(
            exhaustive_best_partition(&g),
            Err(Error::TooLarge { vertices: 13, .. })
        ));
        let empty = Graph::from_edges(0, []).unwrap();
        assert!(exhaustive_best_partition(&empty).is_err());
    }

    #[test]
    fn triangle_free_graphs_prefer_one_community() {
        // Every partition of a triangle-free graph scores zero; the tie
        // breaks toward the fewest communities.
        let g = generate(&FixtureKind::Cycle { length: 5 }, 0).unwrap();
        let (best, score) = exhaustive_best_partition(&g).unwrap();
        assert_eq!(score, 0.0);
        assert_eq!(best.community_count(), 1);
    }

    #[test]
    fn growth_strings_enumerate_bell_many_partitions() {
        let bell = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &expected) in bell.iter().enumerate().skip(1) {
            let mut assignment = vec![0u8; n];
            let mut prefix_max = vec![0u8; n];
            let mut count = 1u64;
            while advance_growth_string(&mut assignment, &mut prefix_max) {
                count += 1;
            }
            assert_eq!(count, expected, "n={n}");
        }
    }
}
