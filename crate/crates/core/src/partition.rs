//! Partitions of a graph's vertex set into disjoint communities, plus the
//! `vertex<TAB>community` file format used to exchange them.

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{offender_list, Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};

/// A disjoint cover of the vertices `0..vertex_count` by non-empty
/// communities. Community ids are dense and ordered by first appearance;
/// `labels` keeps the external community names for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    vertex_count: usize,
    assignment: Vec<u32>,
    communities: Vec<VertexSet>,
    labels: Vec<String>,
}

impl Partition {
    /// Builds a partition from a per-vertex community assignment. The raw
    /// ids are densified in first-seen order and kept as labels.
    pub fn from_assignment(assignment: Vec<u32>) -> Partition {
        let mut dense: HashMap<u32, u32> = HashMap::new();
        let mut labels = Vec::new();
        let mut members: Vec<Vec<VertexId>> = Vec::new();
        let mut dense_assignment = Vec::with_capacity(assignment.len());
        for (v, &raw) in assignment.iter().enumerate() {
            let id = *dense.entry(raw).or_insert_with(|| {
                labels.push(raw.to_string());
                members.push(Vec::new());
                (labels.len() - 1) as u32
            });
            members[id as usize].push(v as VertexId);
            dense_assignment.push(id);
        }
        Partition {
            vertex_count: assignment.len(),
            assignment: dense_assignment,
            communities: members.into_iter().map(VertexSet::from_members).collect(),
            labels,
        }
    }

    /// Builds a partition from explicit community member lists, validating
    /// that they are non-empty, disjoint and cover `0..vertex_count`.
    pub fn from_communities(vertex_count: usize, groups: Vec<Vec<VertexId>>) -> Result<Partition> {
        let mut assignment = vec![u32::MAX; vertex_count];
        for (cid, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::InvalidPartition(format!(
                    "community {cid} is empty"
                )));
            }
            for &v in group {
                if v as usize >= vertex_count {
                    return Err(Error::InvalidPartition(format!(
                        "community {cid} references unknown vertex {v}"
                    )));
                }
                if assignment[v as usize] != u32::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} appears in more than one community"
                    )));
                }
                assignment[v as usize] = cid as u32;
            }
        }
        if let Some(v) = assignment.iter().position(|&c| c == u32::MAX) {
            return Err(Error::InvalidPartition(format!(
                "vertex {v} is not covered by any community"
            )));
        }
        let labels = (0..groups.len()).map(|c| c.to_string()).collect();
        Ok(Partition {
            vertex_count,
            assignment,
            communities: groups.into_iter().map(VertexSet::from_members).collect(),
            labels,
        })
    }

    /// Binds parsed `(vertex_label, community_label)` entries to a graph.
    /// Every graph vertex must appear exactly once; offenders are listed.
    pub fn from_entries(graph: &Graph, entries: &[(String, String)]) -> Result<Partition> {
        let n = graph.vertex_count();
        let mut assignment = vec![u32::MAX; n];
        let mut labels: Vec<String> = Vec::new();
        let mut community_ids: HashMap<&str, u32> = HashMap::new();
        let mut members: Vec<Vec<VertexId>> = Vec::new();
        let mut unknown = Vec::new();
        let mut duplicates = Vec::new();

        for (vertex_label, community_label) in entries {
            let Some(v) = graph.vertex(vertex_label) else {
                unknown.push(vertex_label.clone());
                continue;
            };
            if assignment[v as usize] != u32::MAX {
                duplicates.push(vertex_label.clone());
                continue;
            }
            let cid = *community_ids
                .entry(community_label.as_str())
                .or_insert_with(|| {
                    labels.push(community_label.clone());
                    members.push(Vec::new());
                    (labels.len() - 1) as u32
                });
            assignment[v as usize] = cid;
            members[cid as usize].push(v);
        }

        let missing: Vec<String> = (0..n as VertexId)
            .filter(|&v| assignment[v as usize] == u32::MAX)
            .map(|v| graph.label(v).to_string())
            .collect();

        if !unknown.is_empty() || !duplicates.is_empty() || !missing.is_empty() {
            let mut parts = Vec::new();
            if !unknown.is_empty() {
                parts.push(format!("unknown vertices: {}", offender_list(&unknown)));
            }
            if !duplicates.is_empty() {
                parts.push(format!(
                    "vertices assigned more than once: {}",
                    offender_list(&duplicates)
                ));
            }
            if !missing.is_empty() {
                parts.push(format!("uncovered vertices: {}", offender_list(&missing)));
            }
            return Err(Error::InvalidPartition(parts.join("; ")));
        }

        Ok(Partition {
            vertex_count: n,
            assignment,
            communities: members.into_iter().map(VertexSet::from_members).collect(),
            labels,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of communities.
    pub fn community_count(&self) -> usize {
        self.communities.len()
    }

    /// Dense community id of vertex `v`.
    pub fn community_of(&self, v: VertexId) -> u32 {
        self.assignment[v as usize]
    }

    /// Per-vertex dense community ids.
    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn community(&self, id: u32) -> &VertexSet {
        &self.communities[id as usize]
    }

    /// Communities in ascending dense-id order.
    pub fn communities(&self) -> &[VertexSet] {
        &self.communities
    }

    /// External label of a community id.
    pub fn label(&self, id: u32) -> &str {
        &self.labels[id as usize]
    }
}

/// Parses a partition file into raw `(vertex_label, community_label)` pairs.
/// One tab-separated pair per line; `#` comments and blank lines skipped.
pub fn parse_partition_file<R: BufRead>(reader: R) -> Result<Vec<(String, String)>> {
    let mut entries = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(vertex), Some(community), None) =
            (fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::Parse {
                line: lineno + 1,
                message: "expected `vertex<TAB>community`".into(),
            });
        };
        if vertex.is_empty() || community.is_empty() {
            return Err(Error::Parse {
                line: lineno + 1,
                message: "empty vertex or community label".into(),
            });
        }
        entries.push((vertex.to_string(), community.to_string()));
    }
    Ok(entries)
}
