//! Agreement measures between partitions (normalized mutual information)
//! and between score-induced rankings (Kendall tau-b with significance).

use std::collections::HashMap;
use std::io::BufRead;

use serde::Serialize;

use crate::error::{offender_list, Error, Result};
use crate::partition::Partition;

/// Cross-tabulation of two community assignments over the same vertices.
#[derive(Debug, Clone)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    total: u64,
}

impl ContingencyTable {
    /// Builds the table from two parallel assignment arrays. Community ids
    /// need not be dense; they are indexed by first appearance.
    pub fn from_assignments(a: &[u32], b: &[u32]) -> Result<ContingencyTable> {
        if a.len() != b.len() {
            return Err(Error::domain(format!(
                "assignments cover {} and {} vertices",
                a.len(),
                b.len()
            )));
        }
        let mut row_ids: HashMap<u32, usize> = HashMap::new();
        let mut col_ids: HashMap<u32, usize> = HashMap::new();
        let mut cells: HashMap<(usize, usize), u64> = HashMap::new();
        for (&ca, &cb) in a.iter().zip(b) {
            let next_row = row_ids.len();
            let i = *row_ids.entry(ca).or_insert(next_row);
            let next_col = col_ids.len();
            let j = *col_ids.entry(cb).or_insert(next_col);
            *cells.entry((i, j)).or_insert(0) += 1;
        }
        let rows = row_ids.len();
        let cols = col_ids.len();
        let mut counts = vec![vec![0u64; cols]; rows];
        for ((i, j), c) in cells {
            counts[i][j] = c;
        }
        let row_sums: Vec<u64> = counts.iter().map(|r| r.iter().sum()).collect();
        let col_sums: Vec<u64> =
            (0..cols).map(|j| counts.iter().map(|r| r[j]).sum()).collect();
        Ok(ContingencyTable {
            counts,
            row_sums,
            col_sums,
            total: a.len() as u64,
        })
    }

    /// Normalized mutual information, 2·I / (H_a + H_b), natural log.
    ///
    /// Zero cells contribute nothing. When both partitions are trivial
    /// (single community each) the entropies vanish and the partitions are
    /// identical, so the value is defined as 1.
    pub fn nmi(&self) -> f64 {
        if self.total == 0 {
            return 1.0;
        }
        let n = self.total as f64;
        let mut mutual = 0.0;
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c > 0 {
                    let joint = c as f64 / n;
                    let expected =
                        (self.row_sums[i] as f64 / n) * (self.col_sums[j] as f64 / n);
                    mutual += joint * (joint / expected).ln();
                }
            }
        }
        let entropy = |sums: &[u64]| -> f64 {
            sums.iter()
                .filter(|&&s| s > 0)
                .map(|&s| {
                    let p = s as f64 / n;
                    -p * p.ln()
                })
                .sum()
        };
        let denom = entropy(&self.row_sums) + entropy(&self.col_sums);
        if denom == 0.0 {
            1.0
        } else {
            // Guard tiny negative drift from the log sums.
            (2.0 * mutual / denom).clamp(0.0, 1.0)
        }
    }
}

/// NMI between two partitions of the same graph.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    if a.vertex_count() != b.vertex_count() {
        return Err(Error::domain(format!(
            "partitions cover different vertex sets ({} vs {} vertices)",
            a.vertex_count(),
            b.vertex_count()
        )));
    }
    Ok(ContingencyTable::from_assignments(a.assignment(), b.assignment())?.nmi())
}

/// NMI between two label-keyed partition files that share a vertex universe.
pub fn nmi_entries(a: &[(String, String)], b: &[(String, String)]) -> Result<f64> {
    let index_a = entry_index(a, "first partition")?;
    let index_b = entry_index(b, "second partition")?;
    let mut missing: Vec<String> = index_a
        .keys()
        .filter(|k| !index_b.contains_key(*k))
        .cloned()
        .collect();
    missing.extend(index_b.keys().filter(|k| !index_a.contains_key(*k)).cloned());
    if !missing.is_empty() {
        missing.sort();
        return Err(Error::domain(format!(
            "partitions cover different vertex sets: {}",
            offender_list(&missing)
        )));
    }
    let mut vertices: Vec<&String> = index_a.keys().collect();
    vertices.sort();
    let assign = |index: &HashMap<String, String>| -> Vec<u32> {
        let mut ids: HashMap<&str, u32> = HashMap::new();
        vertices
            .iter()
            .map(|v| {
                let community = index[*v].as_str();
                let next = ids.len() as u32;
                *ids.entry(community).or_insert(next)
            })
            .collect()
    };
    let a_dense = assign(&index_a);
    let b_dense = assign(&index_b);
    Ok(ContingencyTable::from_assignments(&a_dense, &b_dense)?.nmi())
}

fn entry_index(
    entries: &[(String, String)],
    which: &str,
) -> Result<HashMap<String, String>> {
    let mut index = HashMap::with_capacity(entries.len());
    for (vertex, community) in entries {
        if index.insert(vertex.clone(), community.clone()).is_some() {
            return Err(Error::domain(format!(
                "{which}: vertex {vertex} assigned more than once"
            )));
        }
    }
    Ok(index)
}

/// A scored item list inducing a ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct RankSeries {
    items: Vec<(String, f64)>,
}

impl RankSeries {
    pub fn new(items: Vec<(String, f64)>) -> Result<RankSeries> {
        let mut seen = std::collections::HashSet::new();
        for (label, score) in &items {
            if !seen.insert(label.as_str()) {
                return Err(Error::domain(format!("duplicate rank label {label}")));
            }
            if !score.is_finite() {
                return Err(Error::domain(format!("non-finite score for {label}")));
            }
        }
        Ok(RankSeries { items })
    }

    /// Reads `label,score` lines. A first line whose score field does not
    /// parse is treated as a header and skipped.
    pub fn from_csv<R: BufRead>(reader: R) -> Result<RankSeries> {
        let mut items = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((label, score)) = trimmed.rsplit_once(',') else {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: "expected `label,score`".into(),
                });
            };
            match score.trim().parse::<f64>() {
                Ok(value) => items.push((label.trim().to_string(), value)),
                Err(_) if lineno == 0 => continue, // header row
                Err(_) => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: format!("bad score {score:?}"),
                    })
                }
            }
        }
        RankSeries::new(items)
    }

    pub fn items(&self) -> &[(String, f64)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Kendall tau-b with a two-sided significance decision at alpha = 0.05.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct KendallOutcome {
    pub tau: f64,
    pub significant: bool,
    #[serde(skip)]
    pub p_value: f64,
}

const ALPHA: f64 = 0.05;
/// Two-sided 5% quantile of the standard normal distribution.
const Z_CRITICAL: f64 = 1.959963984540054;
/// Largest item count for which the exact permutation test runs.
const EXACT_LIMIT: usize = 10;

/// Rank correlation between two score series over the same labels.
///
/// Tau-b corrects for ties on either side. Significance uses the exact
/// permutation distribution up to ten items and a tie-corrected normal
/// approximation beyond.
pub fn kendall(a: &RankSeries, b: &RankSeries) -> Result<KendallOutcome> {
    if a.len() != b.len() {
        return Err(Error::domain(format!(
            "rank series have {} and {} items",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::domain("rank correlation needs at least two items"));
    }
    let by_label: HashMap<&str, f64> = b
        .items()
        .iter()
        .map(|(label, score)| (label.as_str(), *score))
        .collect();
    let mut xs = Vec::with_capacity(a.len());
    let mut ys = Vec::with_capacity(a.len());
    for (label, score) in a.items() {
        let Some(&other) = by_label.get(label.as_str()) else {
            return Err(Error::domain(format!(
                "label {label} is missing from the second series"
            )));
        };
        xs.push(*score);
        ys.push(other);
    }

    let tau = tau_b(&xs, &ys);
    let (p_value, significant) = if xs.len() <= EXACT_LIMIT {
        let p = exact_permutation_p(&xs, &ys, tau.abs());
        (p, p <= ALPHA)
    } else {
        let z = normal_z(&xs, &ys);
        let p = 2.0 * normal_sf(z.abs());
        (p, z.abs() > Z_CRITICAL)
    };
    Ok(KendallOutcome {
        tau,
        significant,
        p_value,
    })
}

/// Plain O(n^2) concordant/discordant scan; n is small in every caller.
fn pair_counts(xs: &[f64], ys: &[f64]) -> (i64, u64, u64) {
    let n = xs.len();
    let mut s = 0i64; // concordant minus discordant
    let mut ties_x = 0u64;
    let mut ties_y = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            let dx = xs[i] - xs[j];
            let dy = ys[i] - ys[j];
            if dx == 0.0 && dy == 0.0 {
                ties_x += 1;
                ties_y += 1;
            } else if dx == 0.0 {
                ties_x += 1;
            } else if dy == 0.0 {
                ties_y += 1;
            } else if (dx > 0.0) == (dy > 0.0) {
                s += 1;
            } else {
                s -= 1;
            }
        }
    }
    (s, ties_x, ties_y)
}

fn tau_b(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as u64;
    let pairs = n * (n - 1) / 2;
    let (s, ties_x, ties_y) = pair_counts(xs, ys);
    let denom = ((pairs - ties_x) as f64 * (pairs - ties_y) as f64).sqrt();
    if denom == 0.0 {
        return 0.0; // one side fully tied carries no order information
    }
    (s as f64 / denom).clamp(-1.0, 1.0)
}

/// Exact two-sided p-value: the share of permutations of one series whose
/// |tau_b| reaches the observed one. Full enumeration via Heap's algorithm.
fn exact_permutation_p(xs: &[f64], ys: &[f64], observed_abs: f64) -> f64 {
    let n = ys.len();
    let mut perm = ys.to_vec();
    let mut counters = vec![0usize; n];
    let mut total = 1u64;
    let mut hits = 0u64;
    let tolerance = 1e-12;
    if tau_b(xs, &perm).abs() >= observed_abs - tolerance {
        hits += 1;
    }
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            total += 1;
            if tau_b(xs, &perm).abs() >= observed_abs - tolerance {
                hits += 1;
            }
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    hits as f64 / total as f64
}

/// Tie-corrected z statistic for the normal approximation of S = C - D.
fn normal_z(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (s, _, _) = pair_counts(xs, ys);

    let tie_groups = |values: &[f64]| -> Vec<u64> {
        let mut sorted: Vec<f64> = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut groups = Vec::new();
        let mut run = 1u64;
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                if run > 1 {
                    groups.push(run);
                }
                run = 1;
            }
        }
        if run > 1 {
            groups.push(run);
        }
        groups
    };
    let tx = tie_groups(xs);
    let ty = tie_groups(ys);
    let sum = |groups: &[u64], f: &dyn Fn(f64) -> f64| -> f64 {
        groups.iter().map(|&t| f(t as f64)).sum()
    };
    let v0 = n * (n - 1.0) * (2.0 * n + 5.0);
    let vt = sum(&tx, &|t| t * (t - 1.0) * (2.0 * t + 5.0));
    let vu = sum(&ty, &|t| t * (t - 1.0) * (2.0 * t + 5.0));
    let v1 = sum(&tx, &|t| t * (t - 1.0)) * sum(&ty, &|t| t * (t - 1.0))
        / (2.0 * n * (n - 1.0));
    let v2 = sum(&tx, &|t| t * (t - 1.0) * (t - 2.0))
        * sum(&ty, &|t| t * (t - 1.0) * (t - 2.0))
        / (9.0 * n * (n - 1.0) * (n - 2.0));
    let variance = (v0 - vt - vu) / 18.0 + v1 + v2;
    if variance <= 0.0 {
        return 0.0;
    }
    s as f64 / variance.sqrt()
}

/// Standard normal survival function via Abramowitz-Stegun 7.1.26 erf.
fn normal_sf(z: f64) -> f64 {
    let x = z / std::f64::consts::SQRT_2;
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    let erf = 1.0 - poly * (-x * x).exp();
    0.5 * (1.0 - erf)
}
