//! Directed-graph representation, shortest-path distances, and exact
//! harmonic centrality.

use std::collections::VecDeque;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Sentinel distance for unreachable nodes.
pub const UNREACHABLE: u32 = u32::MAX;

/// Immutable directed graph with dense node ids and cached degrees.
///
/// Duplicate arcs are retained structurally (degrees count arcs), but
/// shortest-path traversal treats parallel arcs as a single edge.
#[derive(Debug, Clone)]
pub struct Digraph {
    n_nodes: usize,
    arcs: Vec<(u32, u32)>,
    in_degree: Vec<u32>,
    out_degree: Vec<u32>,
    reverse: OnceLock<Vec<Vec<u32>>>,
}

impl Digraph {
    /// Builds a graph from dense node ids in `[0, n_nodes)`.
    pub fn new(n_nodes: usize, arcs: Vec<(u32, u32)>) -> Result<Self> {
        let mut in_degree = vec![0u32; n_nodes];
        let mut out_degree = vec![0u32; n_nodes];
        for &(u, v) in &arcs {
            if u as usize >= n_nodes || v as usize >= n_nodes {
                return Err(Error::Input(format!(
                    "arc ({u},{v}) out of range for {n_nodes} nodes"
                )));
            }
            out_degree[u as usize] += 1;
            in_degree[v as usize] += 1;
        }
        Ok(Self {
            n_nodes,
            arcs,
            in_degree,
            out_degree,
            reverse: OnceLock::new(),
        })
    }

    /// Builds a graph from arbitrary integer labels, remapping them to
    /// dense ids in first-appearance order. Self-loops are dropped
    /// unless `allow_self_loops` is set; duplicate arcs are kept.
    pub fn from_edge_pairs(pairs: &[(i64, i64)], allow_self_loops: bool) -> Result<Self> {
        let mut id_of = std::collections::HashMap::new();
        let mut n: u32 = 0;
        let mut intern = |label: i64| -> Result<u32> {
            if label < 0 {
                return Err(Error::Input(format!("negative node label {label}")));
            }
            Ok(*id_of.entry(label).or_insert_with(|| {
                let id = n;
                n += 1;
                id
            }))
        };
        let mut arcs = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            let u = intern(a)?;
            let v = intern(b)?;
            if u == v && !allow_self_loops {
                continue;
            }
            arcs.push((u, v));
        }
        Digraph::new(n as usize, arcs)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(u32, u32)] {
        &self.arcs
    }

    pub fn in_degree(&self, v: usize) -> u32 {
        self.in_degree[v]
    }

    pub fn in_degrees(&self) -> &[u32] {
        &self.in_degree
    }

    pub fn out_degrees(&self) -> &[u32] {
        &self.out_degree
    }

    /// Reverse adjacency with parallel arcs collapsed, built on first use.
    pub fn reverse_adjacency(&self) -> &[Vec<u32>] {
        self.reverse.get_or_init(|| {
            let mut rev = vec![Vec::new(); self.n_nodes];
            for &(u, v) in &self.arcs {
                rev[v as usize].push(u);
            }
            for list in &mut rev {
                list.sort_unstable();
                list.dedup();
            }
            rev
        })
    }

    /// Distances `d(y, target)` for every node `y`, following arc
    /// directions towards `target`. Unreachable nodes get [`UNREACHABLE`].
    pub fn reverse_bfs_distances(&self, target: usize) -> Result<Vec<u32>> {
        if target >= self.n_nodes {
            return Err(Error::Input(format!(
                "target {target} out of range for {} nodes",
                self.n_nodes
            )));
        }
        let mut dist = vec![UNREACHABLE; self.n_nodes];
        let mut queue = VecDeque::new();
        dist[target] = 0;
        queue.push_back(target as u32);
        let rev = self.reverse_adjacency();
        while let Some(x) = queue.pop_front() {
            let d = dist[x as usize] + 1;
            for &y in &rev[x as usize] {
                if dist[y as usize] == UNREACHABLE {
                    dist[y as usize] = d;
                    queue.push_back(y);
                }
            }
        }
        Ok(dist)
    }

    /// Exact harmonic centrality of a single node: sum of `1/d(y, x)`
    /// over nodes `y` that reach `x`; unreachable nodes contribute 0.
    ///
    /// `scratch` is a distance workspace reused across calls via a
    /// generation stamp, so each call only touches the reachable set.
    fn harmonic_one(&self, target: usize, scratch: &mut BfsScratch) -> f64 {
        scratch.generation += 1;
        let generation = scratch.generation;
        let rev = self.reverse_adjacency();
        scratch.dist[target] = 0;
        scratch.stamp[target] = generation;
        scratch.queue.clear();
        scratch.queue.push_back(target as u32);
        let mut sum = 0.0;
        while let Some(x) = scratch.queue.pop_front() {
            let d = scratch.dist[x as usize] + 1;
            for &y in &rev[x as usize] {
                if scratch.stamp[y as usize] != generation {
                    scratch.stamp[y as usize] = generation;
                    scratch.dist[y as usize] = d;
                    scratch.queue.push_back(y);
                    sum += 1.0 / d as f64;
                }
            }
        }
        sum
    }

    /// Exact harmonic centrality for every node (one reverse BFS per node).
    pub fn harmonic_all(&self) -> CentralityVector {
        let mut scratch = BfsScratch::new(self.n_nodes);
        let values = (0..self.n_nodes)
            .map(|x| self.harmonic_one(x, &mut scratch))
            .collect();
        CentralityVector::new(values)
    }

    /// Exact harmonic centrality for a subset of nodes, in the given order.
    pub fn harmonic_for(&self, targets: &[usize]) -> Result<Vec<f64>> {
        let mut scratch = BfsScratch::new(self.n_nodes);
        targets
            .iter()
            .map(|&x| {
                if x >= self.n_nodes {
                    return Err(Error::Input(format!("node {x} out of range")));
                }
                Ok(self.harmonic_one(x, &mut scratch))
            })
            .collect()
    }

    /// Writes the graph in edge-list text format, one "source target" per line.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        for &(u, v) in &self.arcs {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    /// Reads an edge-list text file: one arc per line, whitespace
    /// separated, lines starting with '%' or '#' skipped, trailing
    /// columns ignored.
    pub fn read_edge_list<R: Read>(r: R, allow_self_loops: bool) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, line) in BufReader::new(r).lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<i64> {
                tok.ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    msg: "expected two node labels".into(),
                })?
                .parse()
                .map_err(|e| Error::Parse {
                    line: idx + 1,
                    msg: format!("bad node label: {e}"),
                })
            };
            let u = parse(fields.next())?;
            let v = parse(fields.next())?;
            pairs.push((u, v));
        }
        Digraph::from_edge_pairs(&pairs, allow_self_loops)
    }

    pub fn read_edge_list_path<P: AsRef<Path>>(path: P, allow_self_loops: bool) -> Result<Self> {
        Self::read_edge_list(std::fs::File::open(path)?, allow_self_loops)
    }
}

struct BfsScratch {
    dist: Vec<u32>,
    stamp: Vec<u32>,
    generation: u32,
    queue: VecDeque<u32>,
}

impl BfsScratch {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![0; n],
            stamp: vec![0; n],
            generation: 0,
            queue: VecDeque::new(),
        }
    }
}

/// Per-node harmonic centrality values.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    values: Vec<f64>,
}

impl CentralityVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl std::ops::Index<usize> for CentralityVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}
