//! Deterministic graph generators for the families the metric's formal
//! properties are exercised on, plus closed-form evaluators for the
//! satellite-join and shared-vertex partition comparisons.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Graph families the generator knows how to build.
#[derive(Debug, Clone, PartialEq)]
pub enum FixtureKind {
    /// Complete graph on `size` vertices.
    Clique { size: u32 },
    /// Simple cycle on `length >= 3` vertices.
    Cycle { length: u32 },
    /// `cliques` complete graphs of `clique_size` vertices each, joined in
    /// a ring by single edges that close no triangles.
    RingOfCliques { cliques: u32, clique_size: u32 },
    /// Two cliques joined by a single bridge edge.
    BridgedCliques { first: u32, second: u32 },
    /// Two cliques sharing exactly one vertex (vertex 0).
    SharedVertexCliques { first: u32, second: u32 },
    /// A clique plus one satellite vertex adjacent to the `links` lowest-id
    /// clique members.
    CliqueSatellite { clique_size: u32, links: u32 },
    /// Erdos-Renyi G(n, p); the only seed-dependent family.
    ErRandom { vertices: u32, edge_probability: f64 },
}

/// Builds the requested fixture. Deterministic kinds ignore `seed`;
/// `ErRandom` reproduces the same edge set for the same seed.
pub fn generate(kind: &FixtureKind, seed: u64) -> Result<Graph> {
    match *kind {
        FixtureKind::Clique { size } => {
            if size < 1 {
                return Err(Error::domain("clique size must be at least 1"));
            }
            Graph::from_edges(size as usize, clique_edges(0, size))
        }
        FixtureKind::Cycle { length } => {
            if length < 3 {
                return Err(Error::domain("cycle length must be at least 3"));
            }
            let edges = (0..length).map(|v| (v, (v + 1) % length));
            Graph::from_edges(length as usize, edges)
        }
        FixtureKind::RingOfCliques {
            cliques,
            clique_size,
        } => {
            if cliques < 2 || clique_size < 2 {
                return Err(Error::domain(
                    "ring needs at least 2 cliques of at least 2 vertices",
                ));
            }
            let mut edges = Vec::new();
            for c in 0..cliques {
                edges.extend(clique_edges(c * clique_size, clique_size));
            }
            // Join clique c to clique c+1 from c's second vertex to the
            // other's first; distinct ports keep the joins triangle-free.
            for c in 0..cliques {
                let from = c * clique_size + 1;
                let to = ((c + 1) % cliques) * clique_size;
                edges.push((from, to));
            }
            Graph::from_edges((cliques * clique_size) as usize, edges)
        }
        FixtureKind::BridgedCliques { first, second } => {
            if first < 2 || second < 2 {
                return Err(Error::domain("bridged cliques need size at least 2"));
            }
            let mut edges: Vec<(VertexId, VertexId)> = clique_edges(0, first).collect();
            edges.extend(clique_edges(first, second));
            edges.push((0, first));
            Graph::from_edges((first + second) as usize, edges)
        }
        FixtureKind::SharedVertexCliques { first, second } => {
            if first < 3 || second < 3 {
                return Err(Error::domain(
                    "cliques sharing a vertex need size at least 3",
                ));
            }
            // Vertex 0 is shared; the first clique occupies {0} ∪ [1, first),
            // the second {0} ∪ [first, first + second - 1).
            let mut members_a: Vec<VertexId> = vec![0];
            members_a.extend(1..first);
            let mut members_b: Vec<VertexId> = vec![0];
            members_b.extend(first..first + second - 1);
            let mut edges = clique_edges_over(&members_a);
            edges.extend(clique_edges_over(&members_b));
            Graph::from_edges((first + second - 1) as usize, edges)
        }
        FixtureKind::CliqueSatellite { clique_size, links } => {
            if clique_size < 1 {
                return Err(Error::domain("satellite needs a non-empty clique"));
            }
            if links > clique_size {
                return Err(Error::domain(
                    "satellite cannot link to more vertices than the clique has",
                ));
            }
            let satellite = clique_size;
            let mut edges: Vec<(VertexId, VertexId)> = clique_edges(0, clique_size).collect();
            edges.extend((0..links).map(|v| (v, satellite)));
            Graph::from_edges(clique_size as usize + 1, edges)
        }
        FixtureKind::ErRandom {
            vertices,
            edge_probability,
        } => er_random(vertices, edge_probability, seed),
    }
}

fn clique_edges(start: u32, size: u32) -> impl Iterator<Item = (VertexId, VertexId)> {
    (start..start + size)
        .flat_map(move |u| (u + 1..start + size).map(move |v| (u, v)))
}

fn clique_edges_over(members: &[VertexId]) -> Vec<(VertexId, VertexId)> {
    let mut edges = Vec::with_capacity(members.len() * (members.len() - 1) / 2);
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i + 1..] {
            edges.push((u, v));
        }
    }
    edges
}

/// G(n, p) sampled by geometric jumps over the linearized pair sequence,
/// O(edges) instead of O(n^2) Bernoulli draws.
fn er_random(n: u32, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("edge probability must lie in [0, 1]"));
    }
    if p == 1.0 {
        return Graph::from_edges(n as usize, clique_edges(0, n));
    }
    let mut edges = Vec::new();
    if p > 0.0 && n >= 2 {
        let total_pairs = n as u64 * (n as u64 - 1) / 2;
        let log_skip = (1.0 - p).ln();
        let mut rng = SplitMix64::new(seed);
        let mut idx = 0u64;
        // Walk the upper triangle row by row while the pair index advances.
        let mut row = 0u64;
        let mut row_start = 0u64;
        let mut row_len = n as u64 - 1;
        loop {
            let skip = (rng.next_open01().ln() / log_skip).floor() as u64;
            idx = idx.saturating_add(skip);
            if idx >= total_pairs {
                break;
            }
            while idx - row_start >= row_len {
                row_start += row_len;
                row += 1;
                row_len = n as u64 - 1 - row;
            }
            let col = row + 1 + (idx - row_start);
            edges.push((row as VertexId, col as VertexId));
            idx += 1;
        }
    }
    Graph::from_edges(n as usize, edges)
}

/// Small deterministic PRNG (splitmix64); stable across platforms, used for
/// every seeded fixture so identical seeds give identical graphs.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1]; safe to take the logarithm of.
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, bound), for small bounds.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

/// Parameters of the satellite-join comparison: a community of
/// `community_size` vertices with expected internal density `density`, and
/// a new vertex linked to `links` of its members.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatelliteParams {
    pub community_size: u32,
    pub density: f64,
    pub links: u32,
}

impl SatelliteParams {
    fn validate(&self) -> Result<()> {
        if self.community_size < 3 {
            return Err(Error::domain("community size must be at least 3"));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::domain("density must lie in (0, 1]"));
        }
        if self.links > self.community_size {
            return Err(Error::domain(
                "links cannot exceed the community size",
            ));
        }
        Ok(())
    }

    /// Quadratic margin coefficients in the link count, derived from the
    /// expected triangle counts of the two candidate partitions.
    fn coefficients(&self) -> (f64, f64, f64) {
        let r = self.community_size as f64;
        let p = self.density;
        let a = 2.0 * (2.0 + p * r);
        let b = p * p * (p + 1.0) * r * r - p * (3.0 * p * p + 3.0 * p + 4.0) * r
            + 2.0 * p * p * p
            + 2.0 * p * p
            - 4.0;
        let c = -p.powi(3) * r.powi(3) + 3.0 * p.powi(3) * r * r
            + 2.0 * p * (1.0 - p * p) * r;
        (a, b, c)
    }
}

/// Signed margin between keeping the satellite inside the community and
/// leaving it out. Positive margin means joining scores higher; for a full
/// clique (density 1) the sign is exact, not asymptotic.
pub fn satellite_join_margin(params: &SatelliteParams) -> Result<(f64, bool)> {
    params.validate()?;
    let (a, b, c) = params.coefficients();
    let d = params.links as f64;
    let margin = a * d * d + b * d + c;
    Ok((margin, margin > 0.0))
}

/// Link counts where joining starts to pay off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JoinThreshold {
    /// Greatest root of the margin quadratic: joining wins for any link
    /// count above it.
    pub links_needed: f64,
    /// Limit of `links_needed / community_size` as the community grows.
    pub asymptotic_fraction: f64,
}

/// Closed-form join threshold for a community of the given size and density.
pub fn satellite_join_threshold(community_size: u32, density: f64) -> Result<JoinThreshold> {
    let params = SatelliteParams {
        community_size,
        density,
        links: 0,
    };
    params.validate()?;
    let (a, b, c) = params.coefficients();
    let discriminant = b * b - 4.0 * a * c;
    if discriminant < 0.0 {
        return Err(Error::domain(
            "margin quadratic has no real root for these parameters",
        ));
    }
    let links_needed = (-b + discriminant.sqrt()) / (2.0 * a);
    let p = density;
    let asymptotic_fraction = p * ((p * p + 2.0 * p + 9.0).sqrt() - (1.0 + p)) / 4.0;
    Ok(JoinThreshold {
        links_needed,
        asymptotic_fraction,
    })
}

/// Two cliques of sizes `first >= second >= 4` sharing a single vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharedCliquePair {
    pub first: u32,
    pub second: u32,
}

/// Partition scores of the shared-vertex configuration under its three
/// canonical partitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharedVertexScores {
    /// Everything in one community.
    pub merged: f64,
    /// Shared vertex absorbed into the first clique, the rest of the second
    /// clique on its own.
    pub absorbed: f64,
    /// Both cliques stripped of the shared vertex, which sits alone.
    pub isolated: f64,
}

/// Closed-form scores for the three canonical partitions of two cliques
/// sharing one vertex.
pub fn shared_vertex_scores(pair: &SharedCliquePair) -> Result<SharedVertexScores> {
    let (r, s) = (pair.first, pair.second);
    if s < 4 || r < s {
        return Err(Error::domain(
            "shared-vertex scores need clique sizes first >= second >= 4",
        ));
    }
    let (r, s) = (r as f64, s as f64);
    let n = r + s - 1.0;
    let merged = (((r - 1.0) * (r - 1.0) + (s - 1.0) * (s - 1.0)) / (n - 1.0) + 1.0) / n;
    let absorbed = ((r - 1.0)
        + (r - 1.0) * (r - 2.0) / ((r - 1.0) * (r - 2.0) + (s - 1.0) * (s - 2.0))
        + (s - 3.0))
        / n;
    let isolated = ((r - 3.0) + (s - 3.0)) / n;
    Ok(SharedVertexScores {
        merged,
        absorbed,
        isolated,
    })
}
