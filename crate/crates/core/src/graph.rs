//! Immutable undirected simple graphs and SNAP-style edge-list ingestion.
//!
//! Adjacency is stored in compressed sparse row form: the neighbours of node
//! `i` are `targets[offsets[i]..offsets[i + 1]]`, sorted ascending. Node ids
//! are dense `0..N`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Degrees of nodes (or of sampled nodes), in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence(pub Vec<u32>);

impl DegreeSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&d| u64::from(d)).sum()
    }

    pub fn max(&self) -> Option<u32> {
        self.0.iter().copied().max()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&d| f64::from(d)).collect()
    }
}

impl From<Vec<u32>> for DegreeSequence {
    fn from(v: Vec<u32>) -> Self {
        DegreeSequence(v)
    }
}

/// Counts of what was dropped while simplifying a multigraph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplifyReport {
    pub self_loops: usize,
    pub duplicates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    /// Builds a simple graph on `node_count` nodes, dropping self-loops and
    /// repeated edges (in either orientation).
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<(Graph, SimplifyReport)>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        if node_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut report = SimplifyReport::default();
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); node_count];
        let mut raw_edges = 0usize;
        for (u, v) in edges {
            if u as usize >= node_count || v as usize >= node_count {
                return Err(crate::error::invalid(
                    "edges",
                    format!("edge ({u}, {v}) out of range for {node_count} nodes"),
                ));
            }
            if u == v {
                report.self_loops += 1;
                continue;
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
            raw_edges += 1;
        }

        let mut offsets = Vec::with_capacity(node_count + 1);
        let mut targets = Vec::with_capacity(2 * raw_edges);
        offsets.push(0);
        let mut half_edges_dropped = 0usize;
        for mut list in adjacency {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            half_edges_dropped += before - list.len();
            targets.extend_from_slice(&list);
            offsets.push(targets.len());
        }
        report.duplicates = half_edges_dropped / 2;
        Ok((Graph { offsets, targets }, report))
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn degree(&self, node: u32) -> u32 {
        let i = node as usize;
        (self.offsets[i + 1] - self.offsets[i]) as u32
    }

    #[inline]
    pub fn neighbors(&self, node: u32) -> &[u32] {
        let i = node as usize;
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn degrees(&self) -> DegreeSequence {
        DegreeSequence((0..self.node_count() as u32).map(|i| self.degree(i)).collect())
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.node_count() as u32).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Component label for every node; labels are assigned in order of the
    /// smallest node id in each component.
    pub fn component_labels(&self) -> Vec<u32> {
        let n = self.node_count();
        let mut label = vec![u32::MAX; n];
        let mut next = 0u32;
        let mut stack = Vec::new();
        for start in 0..n as u32 {
            if label[start as usize] != u32::MAX {
                continue;
            }
            label[start as usize] = next;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &v in self.neighbors(u) {
                    if label[v as usize] == u32::MAX {
                        label[v as usize] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Nodes of the largest connected component, ascending. Ties go to the
    /// component containing the smallest node id.
    pub fn largest_component(&self) -> Vec<u32> {
        let labels = self.component_labels();
        let count = labels.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut sizes = vec![0usize; count];
        for &l in &labels {
            sizes[l as usize] += 1;
        }
        let mut best = 0;
        for (l, &s) in sizes.iter().enumerate() {
            if s > sizes[best] {
                best = l;
            }
        }
        (0..self.node_count() as u32)
            .filter(|&i| labels[i as usize] == best as u32)
            .collect()
    }

    pub fn stats(&self) -> GraphStats {
        graph_stats(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub mean_degree: f64,
    pub max_degree: u32,
}

pub fn graph_stats(g: &Graph) -> GraphStats {
    let nodes = g.node_count();
    let edges = g.edge_count();
    GraphStats {
        nodes,
        edges,
        mean_degree: 2.0 * edges as f64 / nodes as f64,
        max_degree: (0..nodes as u32).map(|i| g.degree(i)).max().unwrap_or(0),
    }
}

/// A graph read from an edge list, with the original ids of its nodes.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `original_ids[i]` is the id node `i` carried in the file.
    pub original_ids: Vec<u64>,
    pub report: SimplifyReport,
}

/// Reads a whitespace-separated `u v` edge list. Lines starting with `#`
/// and blank lines are skipped. Original ids are compacted to `0..N` in
/// ascending order.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(io_err)?;
    parse_edge_list(BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => io_err(source),
        other => other,
    })
}

pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph> {
    let mut raw: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: Default::default(),
            source,
        })?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut next_id = || -> Result<u64> {
            let tok = fields.next().ok_or_else(|| Error::MalformedLine {
                line: line_no,
                reason: "expected two node ids".into(),
            })?;
            tok.parse().map_err(|_| Error::MalformedLine {
                line: line_no,
                reason: format!("`{tok}` is not a non-negative integer"),
            })
        };
        let u = next_id()?;
        let v = next_id()?;
        if fields.next().is_some() {
            return Err(Error::MalformedLine {
                line: line_no,
                reason: "more than two fields".into(),
            });
        }
        raw.push((u, v));
    }

    let mut index: BTreeMap<u64, u32> = BTreeMap::new();
    for &(u, v) in &raw {
        index.insert(u, 0);
        index.insert(v, 0);
    }
    if index.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut original_ids = Vec::with_capacity(index.len());
    for (i, (id, slot)) in index.iter_mut().enumerate() {
        *slot = i as u32;
        original_ids.push(*id);
    }
    let (graph, report) = Graph::from_edges(
        original_ids.len(),
        raw.iter().map(|(u, v)| (index[u], index[v])),
    )?;
    Ok(LoadedGraph {
        graph,
        original_ids,
        report,
    })
}

/// Writes `u v` lines, one per undirected edge.
pub fn write_edge_list<W: std::io::Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}
