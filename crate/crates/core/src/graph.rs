//! Undirected simple graphs with sorted adjacency, plus the triangle
//! primitives every metric in this crate is built on.
//!
//! Vertices carry arbitrary string labels externally and dense `u32` ids
//! internally. Adjacency lists are strictly ascending, symmetric and free of
//! self-loops, so neighbor intersections run as linear merges.

use std::collections::HashMap;
use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Dense internal vertex identifier.
pub type VertexId = u32;

/// Immutable undirected simple graph in compressed sparse row form.
#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
    labels: Vec<String>,
    label_index: HashMap<String, VertexId>,
    edge_count: usize,
    triangles: OnceLock<TriangleCache>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        // The cache is derived data; two graphs are equal when their
        // structure and labeling agree.
        self.offsets == other.offsets
            && self.neighbors == other.neighbors
            && self.labels == other.labels
    }
}

impl Graph {
    /// Builds a graph over `vertex_count` vertices from an edge iterator.
    ///
    /// Self-loops are dropped and duplicate edges collapsed, mirroring the
    /// edge-list cleaning rules. Labels default to the decimal vertex ids.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut cleaned = Vec::new();
        for (u, v) in edges {
            if u as usize >= vertex_count || v as usize >= vertex_count {
                return Err(Error::domain(format!(
                    "edge ({u}, {v}) references a vertex >= {vertex_count}"
                )));
            }
            if u == v {
                continue;
            }
            cleaned.push((u.min(v), u.max(v)));
        }
        let labels: Vec<String> = (0..vertex_count).map(|v| v.to_string()).collect();
        let label_index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as VertexId))
            .collect();
        Ok(Graph::assemble(labels, label_index, cleaned))
    }

    fn assemble(
        labels: Vec<String>,
        label_index: HashMap<String, VertexId>,
        mut edges: Vec<(VertexId, VertexId)>,
    ) -> Graph {
        edges.sort_unstable();
        edges.dedup();
        let n = labels.len();
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0 as VertexId; acc];
        for &(u, v) in &edges {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        // Edges were inserted in sorted order, but each vertex also receives
        // its lower-id endpoints; one sort per list restores ascending order.
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph {
            offsets,
            neighbors,
            labels,
            label_index,
            edge_count: edges.len(),
            triangles: OnceLock::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Ascending neighbor list of `v`.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// External label of an internal vertex id.
    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v as usize]
    }

    /// Internal id for an external label, if present.
    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.label_index.get(label).copied()
    }

    /// Iterates every undirected edge once, as ordered `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.vertex_count() as VertexId).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Validates that `v` is a vertex of this graph.
    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "vertex id {v} out of range (graph has {} vertices)",
                self.vertex_count()
            )))
        }
    }

    fn check_set(&self, set: &VertexSet) -> Result<()> {
        match set.max_id() {
            Some(max) if max as usize >= self.vertex_count() => Err(Error::domain(format!(
                "vertex set contains id {max}, graph has only {} vertices",
                self.vertex_count()
            ))),
            _ => Ok(()),
        }
    }

    /// Per-vertex whole-graph triangle counts, computed once and cached.
    pub fn triangle_cache(&self) -> &TriangleCache {
        self.triangles.get_or_init(|| TriangleCache::build(self))
    }
}

/// Loads an edge list: one edge per line as two whitespace-separated labels.
///
/// Lines starting with `#` and blank lines are skipped. Self-loops are
/// dropped before label interning (so they cannot introduce vertices),
/// duplicate and reversed edges collapse to one undirected edge, and labels
/// map to dense ids in first-seen order.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, VertexId> = HashMap::new();
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();

    let intern = |labels: &mut Vec<String>, index: &mut HashMap<String, VertexId>, t: &str| {
        if let Some(&id) = index.get(t) {
            id
        } else {
            let id = labels.len() as VertexId;
            labels.push(t.to_string());
            index.insert(t.to_string(), id);
            id
        }
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: lineno + 1,
                message: "expected exactly two whitespace-separated vertex labels".into(),
            });
        };
        if a == b {
            continue; // self-loop, dropped by the cleaning rule
        }
        let u = intern(&mut labels, &mut index, a);
        let v = intern(&mut labels, &mut index, b);
        edges.push((u.min(v), u.max(v)));
    }
    Ok(Graph::assemble(labels, index, edges))
}

/// Writes a graph back out in the edge-list format accepted by
/// [`load_edge_list`], one `label label` pair per line in ascending id order.
pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "# vertices {} edges {}",
        graph.vertex_count(),
        graph.edge_count()
    )?;
    for (u, v) in graph.edges() {
        writeln!(out, "{} {}", graph.label(u), graph.label(v))?;
    }
    Ok(())
}

/// A subset of a graph's vertices with a fast membership test.
#[derive(Debug, Clone)]
pub struct VertexSet {
    members: Vec<VertexId>,
    lookup: HashSet<VertexId>,
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for VertexSet {}

impl VertexSet {
    /// Builds a set from arbitrary ids; sorts and deduplicates.
    pub fn from_members(mut members: Vec<VertexId>) -> VertexSet {
        members.sort_unstable();
        members.dedup();
        let lookup = members.iter().copied().collect();
        VertexSet { members, lookup }
    }

    /// The full vertex set of a graph with `vertex_count` vertices.
    pub fn full(vertex_count: usize) -> VertexSet {
        VertexSet::from_members((0..vertex_count as VertexId).collect())
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.lookup.contains(&v)
    }

    /// Members in strictly ascending order.
    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn max_id(&self) -> Option<VertexId> {
        self.members.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.members.iter().copied()
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        VertexSet::from_members(iter.into_iter().collect())
    }
}

/// Cached whole-graph triangle statistics: for every vertex `x`, the number
/// of triangles `x` closes anywhere in the graph, and the number of distinct
/// vertices sharing at least one triangle with `x`.
#[derive(Debug, Clone)]
pub struct TriangleCache {
    triangles: Vec<u64>,
    partners: Vec<u32>,
}

impl TriangleCache {
    fn build(graph: &Graph) -> TriangleCache {
        let n = graph.vertex_count();
        let mut triangles = vec![0u64; n];
        let mut partners = vec![0u32; n];
        for x in 0..n as VertexId {
            let (t, vt) = triangle_terms(graph, x, |_| true);
            triangles[x as usize] = t;
            partners[x as usize] = vt;
        }
        TriangleCache {
            triangles,
            partners,
        }
    }

    /// Total triangles closed by `x` in the whole graph.
    pub fn triangles_total(&self, x: VertexId) -> u64 {
        self.triangles[x as usize]
    }

    /// Vertices that form at least one triangle with `x`.
    pub fn partners_total(&self, x: VertexId) -> u32 {
        self.partners[x as usize]
    }
}

/// Core triangle kernel. For the set selected by `in_set`, returns
/// `(t, vt)` where `t` counts triangles of `x` whose two other corners both
/// pass `in_set`, and `vt` counts selected neighbors of `x` that close at
/// least one triangle with `x` through a third corner *anywhere* in the
/// graph. The unrestricted third corner in `vt` is what makes partner counts
/// additive over complementary sets.
pub(crate) fn triangle_terms<F>(graph: &Graph, x: VertexId, in_set: F) -> (u64, u32)
where
    F: Fn(VertexId) -> bool,
{
    let adj_x = graph.neighbors(x);
    let mut t = 0u64;
    let mut vt = 0u32;
    for &y in adj_x {
        if !in_set(y) {
            continue;
        }
        let adj_y = graph.neighbors(y);
        let mut any = false;
        let mut above = 0u64;
        let (mut i, mut j) = (0usize, 0usize);
        while i < adj_x.len() && j < adj_y.len() {
            let (a, b) = (adj_x[i], adj_y[j]);
            if a < b {
                i += 1;
            } else if b < a {
                j += 1;
            } else {
                any = true;
                if a > y && in_set(a) {
                    above += 1;
                }
                i += 1;
                j += 1;
            }
        }
        t += above;
        vt += any as u32;
    }
    (t, vt)
}

/// Number of triangles vertex `x` closes with two corners inside `set`.
pub fn triangles_with(graph: &Graph, x: VertexId, set: &VertexSet) -> Result<u64> {
    graph.check_vertex(x)?;
    graph.check_set(set)?;
    Ok(triangle_terms(graph, x, |v| set.contains(v)).0)
}

/// Number of vertices of `set` forming at least one triangle with `x`; the
/// third corner may lie anywhere in the graph.
pub fn triangle_partners(graph: &Graph, x: VertexId, set: &VertexSet) -> Result<u32> {
    graph.check_vertex(x)?;
    graph.check_set(set)?;
    Ok(triangle_terms(graph, x, |v| set.contains(v)).1)
}
