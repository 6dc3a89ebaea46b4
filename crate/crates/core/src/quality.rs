//! Competing quality metrics (modularity, conductance) and per-community
//! structural statistics, with the 20-group percentile report built on top.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::partition::Partition;
use crate::wcc::wcc_community;

/// How the conductance denominator is formed.
///
/// `Standard` is the bounded form cut / (2·internal + cut), always in
/// [0, 1]. `PaperLiteral` is cut / internal, which is unbounded and infinite
/// for sets without internal edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConductanceVariant {
    #[default]
    Standard,
    PaperLiteral,
}

/// Newman-Girvan modularity of a partition: the intra-community edge
/// fraction minus its expectation under a degree-preserving null model.
pub fn modularity(graph: &Graph, partition: &Partition) -> Result<f64> {
    if graph.edge_count() == 0 {
        return Err(Error::domain("modularity is undefined on an edgeless graph"));
    }
    if partition.vertex_count() != graph.vertex_count() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} vertices, graph has {}",
            partition.vertex_count(),
            graph.vertex_count()
        )));
    }
    let assignment = partition.assignment();
    let k = partition.community_count();
    let mut internal = vec![0u64; k]; // intra-community edges
    let mut degree = vec![0u64; k]; // total degree of members
    for v in 0..graph.vertex_count() as VertexId {
        let c = assignment[v as usize] as usize;
        degree[c] += graph.degree(v) as u64;
        for &u in graph.neighbors(v) {
            if u > v && assignment[u as usize] as usize == c {
                internal[c] += 1;
            }
        }
    }
    let m = graph.edge_count() as f64;
    let mut q = 0.0;
    for c in 0..k {
        let frac = internal[c] as f64 / m;
        let expected = degree[c] as f64 / (2.0 * m);
        q += frac - expected * expected;
    }
    Ok(q)
}

/// Edge counts a conductance is made of: edges leaving `set` and edges with
/// both endpoints inside it.
pub fn cut_and_internal(graph: &Graph, set: &VertexSet) -> (u64, u64) {
    let mut cut = 0u64;
    let mut internal_twice = 0u64;
    for x in set.iter() {
        for &y in graph.neighbors(x) {
            if set.contains(y) {
                internal_twice += 1;
            } else {
                cut += 1;
            }
        }
    }
    (cut, internal_twice / 2)
}

/// Conductance of a vertex set. An isolated set (no incident edges at all)
/// is defined as 0; [`community_stats`] flags that case.
pub fn conductance(graph: &Graph, set: &VertexSet, variant: ConductanceVariant) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::domain("conductance of an empty set"));
    }
    if let Some(max) = set.max_id() {
        graph.check_vertex(max)?;
    }
    let (cut, internal) = cut_and_internal(graph, set);
    Ok(match variant {
        ConductanceVariant::Standard => {
            let denom = 2 * internal + cut;
            if denom == 0 {
                0.0
            } else {
                cut as f64 / denom as f64
            }
        }
        ConductanceVariant::PaperLiteral => {
            if internal == 0 {
                if cut == 0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                cut as f64 / internal as f64
            }
        }
    })
}

/// One community's score and structural statistics.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct StatRecord {
    pub id: String,
    pub size: usize,
    pub wcc: f64,
    pub triangle_density: f64,
    pub avg_inverse_edge_cut: f64,
    pub avg_edge_density: f64,
    pub normalized_diameter: f64,
    pub bridge_ratio: f64,
    pub conductance: f64,
    /// Induced subgraph is not connected; the diameter is then the largest
    /// distance over reachable pairs.
    pub disconnected: bool,
    /// No edges touch the set at all, so conductance degenerated to 0.
    pub isolated: bool,
}

/// Adjacency of the subgraph induced by a community, in local ids that
/// index into the community's sorted member list.
struct Induced {
    adjacency: Vec<Vec<u32>>,
    edge_count: u64,
}

fn induced_subgraph(graph: &Graph, set: &VertexSet) -> Induced {
    let members = set.members();
    let mut adjacency = Vec::with_capacity(members.len());
    let mut half_edges = 0u64;
    for &v in members {
        let local: Vec<u32> = graph
            .neighbors(v)
            .iter()
            .filter(|&&u| set.contains(u))
            .map(|&u| members.binary_search(&u).unwrap() as u32)
            .collect();
        half_edges += local.len() as u64;
        adjacency.push(local);
    }
    Induced {
        adjacency,
        edge_count: half_edges / 2,
    }
}

/// Longest shortest path over reachable pairs, plus a connectivity flag.
fn diameter(induced: &Induced) -> (u64, bool) {
    let n = induced.adjacency.len();
    let mut max_dist = 0u64;
    let mut disconnected = false;
    let mut dist = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for source in 0..n {
        dist.iter_mut().for_each(|d| *d = u32::MAX);
        dist[source] = 0;
        queue.clear();
        queue.push_back(source as u32);
        let mut seen = 1usize;
        while let Some(v) = queue.pop_front() {
            for &u in &induced.adjacency[v as usize] {
                if dist[u as usize] == u32::MAX {
                    dist[u as usize] = dist[v as usize] + 1;
                    max_dist = max_dist.max(dist[u as usize] as u64);
                    seen += 1;
                    queue.push_back(u);
                }
            }
        }
        if seen < n {
            disconnected = true;
        }
    }
    (max_dist, disconnected)
}

/// Counts bridges of the induced subgraph with an iterative low-link DFS.
fn bridge_count(induced: &Induced) -> u64 {
    let n = induced.adjacency.len();
    let mut disc = vec![0u32; n]; // 0 = unvisited, else discovery time + 1
    let mut low = vec![0u32; n];
    let mut time = 0u32;
    let mut bridges = 0u64;
    // Stack frames: (vertex, parent edge expressed as (parent, neighbor
    // index to resume at)).
    let mut stack: Vec<(u32, u32, usize)> = Vec::new();
    for root in 0..n as u32 {
        if disc[root as usize] != 0 {
            continue;
        }
        time += 1;
        disc[root as usize] = time;
        low[root as usize] = time;
        stack.push((root, u32::MAX, 0));
        while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
            let adj = &induced.adjacency[v as usize];
            if *next < adj.len() {
                let u = adj[*next];
                *next += 1;
                if disc[u as usize] == 0 {
                    time += 1;
                    disc[u as usize] = time;
                    low[u as usize] = time;
                    stack.push((u, v, 0));
                } else if u != parent {
                    // Induced subgraphs are simple: at most one edge leads
                    // back to the parent, skipped exactly once per child.
                    low[v as usize] = low[v as usize].min(disc[u as usize]);
                }
            } else {
                stack.pop();
                if let Some(&mut (p, _, _)) = stack.last_mut() {
                    low[p as usize] = low[p as usize].min(low[v as usize]);
                    if low[v as usize] > disc[p as usize] {
                        bridges += 1;
                    }
                }
            }
        }
    }
    bridges
}

fn internal_triangles(graph: &Graph, set: &VertexSet) -> u64 {
    let mut total = 0u64;
    for x in set.iter() {
        total += crate::graph::triangle_terms(graph, x, |v| set.contains(v)).0;
    }
    total / 3
}

/// Computes the full statistics bundle for one community.
pub fn community_stats(
    graph: &Graph,
    id: impl Into<String>,
    set: &VertexSet,
    variant: ConductanceVariant,
) -> Result<StatRecord> {
    if set.is_empty() {
        return Err(Error::domain("community is empty"));
    }
    if let Some(max) = set.max_id() {
        graph.check_vertex(max)?;
    }
    let size = set.len();
    let wcc = wcc_community(graph, set)?;

    let induced = induced_subgraph(graph, set);
    let (cut, internal) = cut_and_internal(graph, set);
    let isolated = 2 * internal + cut == 0;
    let conductance_value = conductance(graph, set, variant)?;

    let mut inverse_cut_sum = 0.0;
    let mut density_sum = 0.0;
    for (local, &v) in set.members().iter().enumerate() {
        let inside = induced.adjacency[local].len() as f64;
        let deg = graph.degree(v);
        if deg > 0 {
            inverse_cut_sum += inside / deg as f64;
        }
        if size > 1 {
            density_sum += inside / (size - 1) as f64;
        }
    }

    let triangle_density = if size >= 3 {
        let possible = (size as u64 * (size as u64 - 1) * (size as u64 - 2)) / 6;
        internal_triangles(graph, set) as f64 / possible as f64
    } else {
        0.0
    };

    let (diam, disconnected) = diameter(&induced);
    let normalized_diameter = if size >= 3 {
        diam as f64 / (size as f64).ln()
    } else {
        0.0
    };

    let bridge_ratio = if induced.edge_count == 0 {
        0.0
    } else {
        bridge_count(&induced) as f64 / induced.edge_count as f64
    };

    Ok(StatRecord {
        id: id.into(),
        size,
        wcc,
        triangle_density,
        avg_inverse_edge_cut: inverse_cut_sum / size as f64,
        avg_edge_density: density_sum / size as f64,
        normalized_diameter,
        bridge_ratio,
        conductance: conductance_value,
        disconnected,
        isolated,
    })
}

/// Statistics for every community of a partition, in community-id order.
pub fn partition_stats(
    graph: &Graph,
    partition: &Partition,
    variant: ConductanceVariant,
) -> Result<Vec<StatRecord>> {
    (0..partition.community_count() as u32)
        .map(|cid| community_stats(graph, partition.label(cid), partition.community(cid), variant))
        .collect()
}

/// Mean statistics of one percentile group.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GroupRow {
    /// 1-based group index; group 1 holds the highest-scoring communities.
    pub group: usize,
    pub count: usize,
    pub wcc: f64,
    pub size: f64,
    pub triangle_density: f64,
    pub avg_inverse_edge_cut: f64,
    pub avg_edge_density: f64,
    pub normalized_diameter: f64,
    pub bridge_ratio: f64,
    pub conductance: f64,
}

/// Twenty five-percentile groups of communities ranked by score.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PercentileReport {
    pub groups: Vec<GroupRow>,
}

pub const PERCENTILE_GROUPS: usize = 20;

/// Ranks a pool of community records by score (descending) and averages
/// their statistics in twenty equal-count groups.
///
/// Records of size one or two always score zero and are dropped first. The
/// division remainder goes one extra record per group starting from group 1.
pub fn percentile_report(records: &[StatRecord]) -> Result<PercentileReport> {
    let mut pool: Vec<&StatRecord> = records.iter().filter(|r| r.size > 2).collect();
    if pool.len() < PERCENTILE_GROUPS {
        return Err(Error::InsufficientRecords {
            needed: PERCENTILE_GROUPS,
            got: pool.len(),
        });
    }
    pool.sort_by(|a, b| {
        b.wcc
            .total_cmp(&a.wcc)
            .then_with(|| b.size.cmp(&a.size))
            .then_with(|| a.id.cmp(&b.id))
    });

    let base = pool.len() / PERCENTILE_GROUPS;
    let remainder = pool.len() % PERCENTILE_GROUPS;
    let mut groups = Vec::with_capacity(PERCENTILE_GROUPS);
    let mut start = 0usize;
    for g in 0..PERCENTILE_GROUPS {
        let len = base + usize::from(g < remainder);
        let slice = &pool[start..start + len];
        start += len;
        let count = slice.len() as f64;
        let mean = |f: fn(&StatRecord) -> f64| slice.iter().map(|r| f(r)).sum::<f64>() / count;
        groups.push(GroupRow {
            group: g + 1,
            count: slice.len(),
            wcc: mean(|r| r.wcc),
            size: mean(|r| r.size as f64),
            triangle_density: mean(|r| r.triangle_density),
            avg_inverse_edge_cut: mean(|r| r.avg_inverse_edge_cut),
            avg_edge_density: mean(|r| r.avg_edge_density),
            normalized_diameter: mean(|r| r.normalized_diameter),
            bridge_ratio: mean(|r| r.bridge_ratio),
            conductance: mean(|r| r.conductance),
        });
    }
    Ok(PercentileReport { groups })
}

/// CSV rendering of a statistics list, one row per community.
pub fn stats_to_csv(records: &[StatRecord]) -> String {
    let mut out = String::from(
        "id,size,wcc,triangle_density,avg_inverse_edge_cut,avg_edge_density,\
         normalized_diameter,bridge_ratio,conductance,disconnected,isolated\n",
    );
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            csv_field(&r.id),
            r.size,
            r.wcc,
            r.triangle_density,
            r.avg_inverse_edge_cut,
            r.avg_edge_density,
            r.normalized_diameter,
            r.bridge_ratio,
            r.conductance,
            r.disconnected,
            r.isolated
        ));
    }
    out
}

/// CSV rendering of a percentile report, one row per group.
pub fn report_to_csv(report: &PercentileReport) -> String {
    let mut out = String::from(
        "group,count,wcc,size,triangle_density,avg_inverse_edge_cut,avg_edge_density,\
         normalized_diameter,bridge_ratio,conductance\n",
    );
    for g in &report.groups {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            g.group,
            g.count,
            g.wcc,
            g.size,
            g.triangle_density,
            g.avg_inverse_edge_cut,
            g.avg_edge_density,
            g.normalized_diameter,
            g.bridge_ratio,
            g.conductance
        ));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{generate, FixtureKind};

    const TOL: f64 = 1e-9;

    fn bridged_fives() -> Graph {
        generate(
            &FixtureKind::BridgedCliques {
                first: 5,
                second: 5,
            },
            0,
        )
        .unwrap()
    }

    #[test]
    fn single_community_modularity_is_zero() {
        let g = bridged_fives();
        let p = Partition::from_communities(10, vec![(0..10).collect()]).unwrap();
        assert!(modularity(&g, &p).unwrap().abs() < TOL);
    }

    #[test]
    fn edgeless_graph_rejects_modularity() {
        let g = Graph::from_edges(3, []).unwrap();
        let p = Partition::from_communities(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(modularity(&g, &p).is_err());
    }

    #[test]
    fn ring_of_cliques_modularity() {
        let g = generate(
            &FixtureKind::RingOfCliques {
                cliques: 24,
                clique_size: 5,
            },
            0,
        )
        .unwrap();
        let per_clique = Partition::from_assignment((0..120).map(|v| v / 5).collect());
        let merged = Partition::from_assignment((0..120).map(|v| v / 10).collect());
        assert!((modularity(&g, &per_clique).unwrap() - 0.8674).abs() < 1e-4);
        assert!((modularity(&g, &merged).unwrap() - 0.8712).abs() < 1e-4);
    }

    #[test]
    fn conductance_of_one_bridged_clique() {
        let g = bridged_fives();
        let s = VertexSet::from_members((0..5).collect());
        let c = conductance(&g, &s, ConductanceVariant::Standard).unwrap();
        assert!((c - 1.0 / 21.0).abs() < TOL);
        let literal = conductance(&g, &s, ConductanceVariant::PaperLiteral).unwrap();
        assert!((literal - 0.1).abs() < TOL);
    }

    #[test]
    fn conductance_extremes() {
        let g = bridged_fives();
        let all = VertexSet::full(10);
        assert_eq!(conductance(&g, &all, ConductanceVariant::Standard).unwrap(), 0.0);

        let single_edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        let s = VertexSet::from_members(vec![0]);
        assert!(
            (conductance(&single_edge, &s, ConductanceVariant::Standard).unwrap() - 1.0).abs()
                < TOL
        );
    }

    #[test]
    fn isolated_set_is_flagged() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let s = VertexSet::from_members(vec![2]);
        assert_eq!(conductance(&g, &s, ConductanceVariant::Standard).unwrap(), 0.0);
        let record = community_stats(&g, "c", &s, ConductanceVariant::Standard).unwrap();
        assert!(record.isolated);
    }

    #[test]
    fn clique_stats_hit_the_extremes() {
        let g = generate(&FixtureKind::Clique { size: 5 }, 0).unwrap();
        let s = VertexSet::full(5);
        let r = community_stats(&g, "k5", &s, ConductanceVariant::Standard).unwrap();
        assert!((r.avg_inverse_edge_cut - 1.0).abs() < TOL);
        assert!((r.avg_edge_density - 1.0).abs() < TOL);
        assert!((r.triangle_density - 1.0).abs() < TOL);
        assert_eq!(r.bridge_ratio, 0.0);
        assert!((r.normalized_diameter - 1.0 / 5f64.ln()).abs() < TOL);
        assert!(!r.disconnected && !r.isolated);
    }

    #[test]
    fn three_vertex_path_is_all_bridges() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let s = VertexSet::full(3);
        let r = community_stats(&g, "path", &s, ConductanceVariant::Standard).unwrap();
        assert_eq!(r.triangle_density, 0.0);
        assert!((r.bridge_ratio - 1.0).abs() < TOL);
        assert_eq!(r.wcc, 0.0);
    }

    #[test]
    fn bridged_clique_inverse_edge_cut() {
        let g = bridged_fives();
        let s = VertexSet::from_members((0..5).collect());
        let r = community_stats(&g, "left", &s, ConductanceVariant::Standard).unwrap();
        assert!((r.avg_inverse_edge_cut - 0.96).abs() < TOL);
    }

    #[test]
    fn disconnected_community_is_flagged() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let s = VertexSet::full(6);
        let r = community_stats(&g, "both", &s, ConductanceVariant::Standard).unwrap();
        assert!(r.disconnected);
        assert!((r.normalized_diameter - 1.0 / 6f64.ln()).abs() < TOL);
    }

    fn record(id: &str, size: usize, wcc: f64, bridge_ratio: f64) -> StatRecord {
        StatRecord {
            id: id.to_string(),
            size,
            wcc,
            triangle_density: if bridge_ratio == 1.0 { 0.0 } else { 1.0 },
            avg_inverse_edge_cut: 1.0,
            avg_edge_density: 1.0,
            normalized_diameter: 1.0,
            bridge_ratio,
            conductance: 0.1,
            disconnected: false,
            isolated: false,
        }
    }

    #[test]
    fn forty_records_split_two_per_group() {
        let records: Vec<StatRecord> = (0..40)
            .map(|i| record(&format!("c{i}"), 5, 1.0 - i as f64 / 40.0, 0.0))
            .collect();
        let report = percentile_report(&records).unwrap();
        assert!(report.groups.iter().all(|g| g.count == 2));
        // Group 1 holds the two best scores.
        assert!((report.groups[0].wcc - (1.0 + (1.0 - 1.0 / 40.0)) / 2.0).abs() < TOL);
    }

    #[test]
    fn small_communities_are_filtered_before_grouping() {
        let mut records: Vec<StatRecord> = (0..70)
            .map(|i| record(&format!("c{i}"), 5, 1.0 - i as f64 / 70.0, 0.0))
            .collect();
        records.extend((0..30).map(|i| record(&format!("tiny{i}"), 2, 0.0, 1.0)));
        let report = percentile_report(&records).unwrap();
        let sizes: Vec<usize> = report.groups.iter().map(|g| g.count).collect();
        assert_eq!(sizes[..10], [4; 10]);
        assert_eq!(sizes[10..], [3; 10]);
    }

    #[test]
    fn too_few_records_is_an_error() {
        let records: Vec<StatRecord> =
            (0..19).map(|i| record(&format!("c{i}"), 5, 0.5, 0.0)).collect();
        assert!(matches!(
            percentile_report(&records),
            Err(Error::InsufficientRecords { needed: 20, got: 19 })
        ));
    }

    #[test]
    fn tree_tail_groups_read_as_trees() {
        // 64 cohesive communities followed by 16 three-vertex trees: the
        // tail groups must show bridge_ratio 1 and triangle_density 0.
        let mut records: Vec<StatRecord> = (0..64)
            .map(|i| record(&format!("good{i}"), 6, 1.0 - i as f64 / 100.0, 0.0))
            .collect();
        records.extend((0..16).map(|i| record(&format!("tree{i}"), 3, 0.0, 1.0)));
        let report = percentile_report(&records).unwrap();
        for g in &report.groups[16..] {
            assert!((g.bridge_ratio - 1.0).abs() < TOL);
            assert_eq!(g.triangle_density, 0.0);
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let records = vec![record("a", 5, 0.5, 0.0)];
        let csv = stats_to_csv(&records);
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("id,size,wcc"));
        assert!(lines.next().unwrap().starts_with("a,5,0.5"));

        let report = percentile_report(
            &(0..20)
                .map(|i| record(&format!("c{i}"), 4, 0.9, 0.0))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let csv = report_to_csv(&report);
        assert_eq!(csv.lines().count(), 21);
    }
}
