//! Weighted community clustering: a triangle-based cohesion score evaluated
//! per vertex, per community and per partition.
//!
//! For a vertex `x` in a set `S`, the score is the product of two ratios:
//! the fraction of `x`'s triangles whose corners both lie in `S`, and the
//! number of `x`'s triangle partners anywhere in the graph relative to
//! `|S \ {x}|` plus the partners left outside `S`. Vertices closing no
//! triangle at all score zero. A community scores the mean over its members
//! and a partition the size-weighted mean over its communities.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{triangle_terms, Graph, TriangleCache, VertexId, VertexSet};
use crate::partition::Partition;

/// Per-community score inside a [`ScoreReport`].
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CommunityScore {
    pub id: String,
    pub size: usize,
    pub wcc: f64,
}

/// Partition-level result: the weighted score and each community's share.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScoreReport {
    pub wcc: f64,
    pub communities: Vec<CommunityScore>,
}

/// Shared scoring kernel. `in_set` selects `S`, `set_len` is `|S|`; the
/// caller guarantees `x` passes `in_set`.
fn vertex_score<F>(graph: &Graph, cache: &TriangleCache, x: VertexId, set_len: usize, in_set: F) -> f64
where
    F: Fn(VertexId) -> bool,
{
    let triangles_total = cache.triangles_total(x);
    if triangles_total == 0 {
        return 0.0;
    }
    let (triangles_in, partners_in) = triangle_terms(graph, x, in_set);
    let partners_total = cache.partners_total(x);
    let partners_outside = partners_total - partners_in;
    // When x closes a triangle the denominator is positive: a singleton S
    // leaves all (at least two) partners outside.
    let denom = (set_len - 1) as f64 + partners_outside as f64;
    (triangles_in as f64 / triangles_total as f64) * (partners_total as f64 / denom)
}

/// Cohesion of vertex `x` with respect to a set `S` containing it.
pub fn wcc_vertex(graph: &Graph, x: VertexId, set: &VertexSet) -> Result<f64> {
    graph.check_vertex(x)?;
    if let Some(max) = set.max_id() {
        graph.check_vertex(max)?;
    }
    if !set.contains(x) {
        return Err(Error::domain(format!(
            "vertex {x} is not a member of the set it is scored against"
        )));
    }
    let cache = graph.triangle_cache();
    Ok(vertex_score(graph, cache, x, set.len(), |v| set.contains(v)))
}

/// Mean vertex score over a non-empty community, summed in ascending
/// vertex-id order.
pub fn wcc_community(graph: &Graph, set: &VertexSet) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::domain("community is empty"));
    }
    if let Some(max) = set.max_id() {
        graph.check_vertex(max)?;
    }
    let cache = graph.triangle_cache();
    Ok(community_mean(graph, cache, set.members(), |v| {
        set.contains(v)
    }))
}

fn community_mean<F>(graph: &Graph, cache: &TriangleCache, members: &[VertexId], in_set: F) -> f64
where
    F: Fn(VertexId) -> bool + Copy,
{
    let mut sum = 0.0;
    for &x in members {
        sum += vertex_score(graph, cache, x, members.len(), in_set);
    }
    sum / members.len() as f64
}

/// Scores a whole partition: the size-weighted average of community scores,
/// communities combined in ascending id order.
///
/// Community evaluations run in parallel; each community is summed by a
/// single worker in ascending vertex order and the final reduction is
/// sequential, so the result is bit-identical at any thread count.
pub fn wcc_partition(graph: &Graph, partition: &Partition) -> Result<ScoreReport> {
    if partition.vertex_count() != graph.vertex_count() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} vertices, graph has {}",
            partition.vertex_count(),
            graph.vertex_count()
        )));
    }
    let n = graph.vertex_count();
    if n == 0 {
        return Ok(ScoreReport {
            wcc: 0.0,
            communities: Vec::new(),
        });
    }
    let cache = graph.triangle_cache();
    let assignment = partition.assignment();

    let per_community: Vec<f64> = (0..partition.community_count() as u32)
        .into_par_iter()
        .map(|cid| {
            let members = partition.community(cid).members();
            community_mean(graph, cache, members, |v| assignment[v as usize] == cid)
        })
        .collect();

    let mut weighted = 0.0;
    let mut communities = Vec::with_capacity(per_community.len());
    for (cid, &score) in per_community.iter().enumerate() {
        let size = partition.community(cid as u32).len();
        weighted += size as f64 * score;
        communities.push(CommunityScore {
            id: partition.label(cid as u32).to_string(),
            size,
            wcc: score,
        });
    }
    Ok(ScoreReport {
        wcc: weighted / n as f64,
        communities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{generate, FixtureKind};

    const TOL: f64 = 1e-9;

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as VertexId {
            for v in u + 1..n as VertexId {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }

    fn shared_cliques() -> Graph {
        generate(
            &FixtureKind::SharedVertexCliques {
                first: 5,
                second: 5,
            },
            0,
        )
        .unwrap()
    }

    #[test]
    fn clique_vertex_scores_one() {
        let g = complete(5);
        let all = VertexSet::full(5);
        for x in 0..5 {
            assert!((wcc_vertex(&g, x, &all).unwrap() - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn triangle_free_cycle_scores_zero() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let all = VertexSet::full(5);
        for x in 0..5 {
            assert_eq!(wcc_vertex(&g, x, &all).unwrap(), 0.0);
        }
    }

    #[test]
    fn shared_vertex_clique_vertex_scores() {
        let g = shared_cliques();
        let all = VertexSet::full(9);
        // Vertex 0 is shared between the cliques; every triangle partner of
        // a non-shared vertex sits inside the merged set but only half its
        // potential co-members do.
        assert!((wcc_vertex(&g, 1, &all).unwrap() - 0.5).abs() < TOL);
        assert!((wcc_vertex(&g, 0, &all).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn shared_vertex_clique_community_mean() {
        let g = shared_cliques();
        let all = VertexSet::full(9);
        assert!((wcc_community(&g, &all).unwrap() - 5.0 / 9.0).abs() < TOL);
    }

    #[test]
    fn tiny_communities_score_zero() {
        let g = complete(5);
        assert_eq!(
            wcc_community(&g, &VertexSet::from_members(vec![2])).unwrap(),
            0.0
        );
        assert_eq!(
            wcc_community(&g, &VertexSet::from_members(vec![1, 3])).unwrap(),
            0.0
        );
    }

    #[test]
    fn outside_vertex_is_a_domain_error() {
        let g = complete(4);
        let sub = VertexSet::from_members(vec![0, 1, 2]);
        assert!(wcc_vertex(&g, 3, &sub).is_err());
        assert!(wcc_community(&g, &VertexSet::from_members(vec![])).is_err());
    }

    #[test]
    fn shared_vertex_clique_partition_scores() {
        let g = shared_cliques();
        // Shared vertex absorbed into the first clique.
        let absorbed =
            Partition::from_communities(9, vec![(0..5).collect(), (5..9).collect()]).unwrap();
        let report = wcc_partition(&g, &absorbed).unwrap();
        assert!((report.wcc - 6.5 / 9.0).abs() < TOL);
        assert!((report.communities[0].wcc - 0.9).abs() < TOL);
        assert!((report.communities[1].wcc - 0.5).abs() < TOL);

        // Shared vertex isolated as a singleton.
        let isolated = Partition::from_communities(
            9,
            vec![(1..5).collect(), vec![0], (5..9).collect()],
        )
        .unwrap();
        let report = wcc_partition(&g, &isolated).unwrap();
        assert!((report.wcc - 4.0 / 9.0).abs() < TOL);
    }

    #[test]
    fn bridged_clique_partition_scores() {
        let g = generate(
            &FixtureKind::BridgedCliques {
                first: 5,
                second: 5,
            },
            0,
        )
        .unwrap();
        let merged = Partition::from_communities(10, vec![(0..10).collect()]).unwrap();
        assert!((wcc_partition(&g, &merged).unwrap().wcc - 4.0 / 9.0).abs() < TOL);
        let split =
            Partition::from_communities(10, vec![(0..5).collect(), (5..10).collect()]).unwrap();
        assert!((wcc_partition(&g, &split).unwrap().wcc - 1.0).abs() < TOL);
    }

    #[test]
    fn report_weighting_matches_definition() {
        let g = shared_cliques();
        let p = Partition::from_communities(9, vec![(0..5).collect(), (5..9).collect()]).unwrap();
        let report = wcc_partition(&g, &p).unwrap();
        let weighted: f64 = report
            .communities
            .iter()
            .map(|c| c.size as f64 * c.wcc)
            .sum();
        assert!((report.wcc - weighted / 9.0).abs() < TOL);
    }

    #[test]
    fn partition_must_match_graph() {
        let g = complete(4);
        let p = Partition::from_communities(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(wcc_partition(&g, &p).is_err());
    }

    #[test]
    fn score_report_serializes_with_stable_keys() {
        let g = complete(3);
        let p = Partition::from_communities(3, vec![vec![0, 1, 2]]).unwrap();
        let report = wcc_partition(&g, &p).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.starts_with("{\"wcc\":"));
        assert!(json.contains("\"communities\":["));
        assert!(json.contains("\"id\":\"0\""));
        assert!(json.contains("\"size\":3"));
    }

    #[test]
    fn repeated_evaluation_is_bit_identical() {
        let g = generate(
            &FixtureKind::ErRandom {
                vertices: 60,
                edge_probability: 0.15,
            },
            7,
        )
        .unwrap();
        let assignment: Vec<u32> = (0..60).map(|v| v % 5).collect();
        let p = Partition::from_assignment(assignment);
        let a = wcc_partition(&g, &p).unwrap();
        let b = wcc_partition(&g, &p).unwrap();
        assert_eq!(a.wcc.to_bits(), b.wcc.to_bits());
        for (x, y) in a.communities.iter().zip(&b.communities) {
            assert_eq!(x.wcc.to_bits(), y.wcc.to_bits());
        }
    }
}
