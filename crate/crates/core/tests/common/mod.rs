//! Shared helpers for the integration suites: independent brute-force
//! oracles (cubic triple enumeration, all-pairs shortest paths, edge-removal
//! bridge checks) and deterministic random inputs.

#![allow(dead_code)]

use wcc_core::fixtures::{generate, FixtureKind, SplitMix64};
use wcc_core::graph::{Graph, VertexId, VertexSet};

/// Cubic-oracle triangle count: pairs {y, z} inside `set`, both adjacent to
/// `x` and to each other. Deliberately ignorant of sorted-adjacency merging.
pub fn brute_triangles(g: &Graph, x: VertexId, set: &VertexSet) -> u64 {
    let n = g.vertex_count() as VertexId;
    let mut count = 0;
    for y in 0..n {
        for z in y + 1..n {
            if y != x
                && z != x
                && set.contains(y)
                && set.contains(z)
                && g.has_edge(x, y)
                && g.has_edge(x, z)
                && g.has_edge(y, z)
            {
                count += 1;
            }
        }
    }
    count
}

/// Cubic-oracle partner count: members of `set` adjacent to `x` that close
/// a triangle with `x` through any third vertex of the graph.
pub fn brute_partners(g: &Graph, x: VertexId, set: &VertexSet) -> u64 {
    let n = g.vertex_count() as VertexId;
    let mut count = 0;
    for y in 0..n {
        if y == x || !set.contains(y) || !g.has_edge(x, y) {
            continue;
        }
        let closes = (0..n).any(|z| g.has_edge(x, z) && g.has_edge(y, z));
        if closes {
            count += 1;
        }
    }
    count
}

/// Brute-force vertex score straight from the definition, using only the
/// cubic oracles above.
pub fn brute_wcc_vertex(g: &Graph, x: VertexId, set: &VertexSet) -> f64 {
    let all = VertexSet::full(g.vertex_count());
    let t_total = brute_triangles(g, x, &all);
    if t_total == 0 {
        return 0.0;
    }
    let complement: VertexSet = (0..g.vertex_count() as VertexId)
        .filter(|v| !set.contains(*v))
        .collect();
    let t_in = brute_triangles(g, x, set);
    let vt_total = brute_partners(g, x, &all);
    let vt_outside = brute_partners(g, x, &complement);
    let denom = (set.len() - 1) as f64 + vt_outside as f64;
    (t_in as f64 / t_total as f64) * (vt_total as f64 / denom)
}

/// Whether `set` induces a complete subgraph.
pub fn is_clique(g: &Graph, set: &VertexSet) -> bool {
    let members = set.members();
    members
        .iter()
        .enumerate()
        .all(|(i, &u)| members[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

/// All-pairs BFS oracle: longest distance over reachable pairs in the
/// subgraph induced by `set`, plus whether it is disconnected.
pub fn brute_diameter(g: &Graph, set: &VertexSet) -> (u64, bool) {
    let members = set.members();
    let k = members.len();
    let mut dist = vec![vec![u64::MAX; k]; k];
    for (i, &u) in members.iter().enumerate() {
        dist[i][i] = 0;
        for (j, &v) in members.iter().enumerate() {
            if g.has_edge(u, v) {
                dist[i][j] = 1;
            }
        }
    }
    for mid in 0..k {
        for i in 0..k {
            for j in 0..k {
                if dist[i][mid] != u64::MAX && dist[mid][j] != u64::MAX {
                    dist[i][j] = dist[i][j].min(dist[i][mid] + dist[mid][j]);
                }
            }
        }
    }
    let mut max = 0;
    let mut disconnected = false;
    for &d in dist.iter().flatten() {
        if d == u64::MAX {
            disconnected = true;
        } else {
            max = max.max(d);
        }
    }
    (max, disconnected)
}

/// Edge-removal bridge oracle: an induced edge is a bridge when deleting it
/// disconnects its endpoints inside the induced subgraph.
pub fn brute_bridges(g: &Graph, set: &VertexSet) -> u64 {
    let members = set.members();
    let edges: Vec<(VertexId, VertexId)> = members
        .iter()
        .flat_map(|&u| {
            members
                .iter()
                .filter(move |&&v| v > u && g.has_edge(u, v))
                .map(move |&v| (u, v))
        })
        .collect();
    let mut bridges = 0;
    for &(skip_u, skip_v) in &edges {
        // BFS from skip_u avoiding the removed edge.
        let mut seen: Vec<VertexId> = vec![skip_u];
        let mut queue = vec![skip_u];
        while let Some(v) = queue.pop() {
            for &(a, b) in &edges {
                if (a, b) == (skip_u, skip_v) {
                    continue;
                }
                let next = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen.contains(&next) {
                    seen.push(next);
                    queue.push(next);
                }
            }
        }
        if !seen.contains(&skip_v) {
            bridges += 1;
        }
    }
    bridges
}

/// Seeded random graph on up to `max_vertices` vertices.
pub fn random_graph(rng: &mut SplitMix64, max_vertices: u32) -> Graph {
    let n = 1 + rng.next_below(max_vertices as u64) as u32;
    let p = 0.1 + rng.next_f64() * 0.7;
    generate(
        &FixtureKind::ErRandom {
            vertices: n,
            edge_probability: p,
        },
        rng.next_u64(),
    )
    .unwrap()
}

/// Random subset of the vertex ids of `g` (possibly empty).
pub fn random_subset(rng: &mut SplitMix64, g: &Graph) -> VertexSet {
    (0..g.vertex_count() as VertexId)
        .filter(|_| rng.next_f64() < 0.5)
        .collect()
}

/// Random partition of the vertices of `g` into at most `max_blocks` blocks.
pub fn random_partition_assignment(rng: &mut SplitMix64, g: &Graph, max_blocks: u64) -> Vec<u32> {
    (0..g.vertex_count())
        .map(|_| rng.next_below(max_blocks) as u32)
        .collect()
}

/// A connected-ish random component guaranteed to contain a triangle,
/// produced by advancing the seed until one shows up.
pub fn component_with_triangle(rng: &mut SplitMix64, size: u32) -> Graph {
    loop {
        let g = generate(
            &FixtureKind::ErRandom {
                vertices: size,
                edge_probability: 0.5,
            },
            rng.next_u64(),
        )
        .unwrap();
        let all = VertexSet::full(g.vertex_count());
        if (0..size).any(|x| brute_triangles(&g, x, &all) > 0) {
            return g;
        }
    }
}

/// Disjoint union of two graphs; the second one's ids are shifted.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let offset = a.vertex_count() as VertexId;
    let edges: Vec<(VertexId, VertexId)> = a
        .edges()
        .chain(b.edges().map(|(u, v)| (u + offset, v + offset)))
        .collect();
    Graph::from_edges(a.vertex_count() + b.vertex_count(), edges).unwrap()
}
