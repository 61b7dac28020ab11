//! Synthetic network models and null models: generalized preferential
//! attachment, Erdős–Rényi digraphs, and degree-preserving arc
//! randomization.

use std::collections::HashMap;

use rand::Rng as _;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Preferential attachment growth configuration.
///
/// Each new node attaches to existing nodes with probability
/// proportional to `in_degree^beta + zero_appeal`.
#[derive(Debug, Clone)]
pub struct PaConfig {
    pub n_nodes: usize,
    pub beta: f64,
    pub zero_appeal: f64,
    pub arcs_per_node: usize,
    pub seed: u64,
}

impl PaConfig {
    pub fn new(n_nodes: usize, beta: f64, seed: u64) -> Self {
        Self {
            n_nodes,
            beta,
            zero_appeal: 1.0,
            arcs_per_node: 1,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_nodes == 0 {
            return Err(Error::Input("n_nodes must be >= 1".into()));
        }
        if self.arcs_per_node == 0 {
            return Err(Error::Input("arcs_per_node must be >= 1".into()));
        }
        if !(self.zero_appeal > 0.0) {
            return Err(Error::Input("zero_appeal must be > 0".into()));
        }
        Ok(())
    }
}

/// Erdős–Rényi digraph configuration: each ordered pair (u, v), u != v,
/// is an arc independently with probability `p`.
#[derive(Debug, Clone)]
pub struct ErConfig {
    pub n_nodes: usize,
    pub p: f64,
    pub seed: u64,
}

impl ErConfig {
    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Input(format!("p = {} not in [0, 1]", self.p)));
        }
        Ok(())
    }
}

/// Fenwick tree over node weights; supports O(log n) weighted sampling.
struct WeightedIndex {
    tree: Vec<f64>,
}

impl WeightedIndex {
    fn new(capacity: usize) -> Self {
        Self {
            tree: vec![0.0; capacity + 1],
        }
    }

    fn add(&mut self, mut i: usize, delta: f64) {
        i += 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Smallest index whose cumulative weight exceeds `target`.
    fn find(&self, mut target: f64) -> usize {
        let mut pos = 0;
        let mut step = self.tree.len().next_power_of_two() / 2;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step /= 2;
        }
        pos // zero-based
    }
}

/// Generates a preferential attachment digraph. Growth starts from a
/// single node; each arrival emits `arcs_per_node` arcs pointing
/// new -> old, targets drawn with probability proportional to
/// `in_degree^beta + zero_appeal`.
pub fn gen_pa(cfg: &PaConfig) -> Result<Digraph> {
    cfg.validate()?;
    let n = cfg.n_nodes;
    let mut rng = rng_from_seed(cfg.seed);
    let mut arcs = Vec::with_capacity((n - 1) * cfg.arcs_per_node);
    let mut weights = WeightedIndex::new(n);
    let mut in_degree = vec![0u64; n];
    let mut total = 0.0f64;
    let kernel = |k: u64| (k as f64).powf(cfg.beta) + cfg.zero_appeal;
    weights.add(0, kernel(0));
    total += kernel(0);
    for t in 1..n {
        for _ in 0..cfg.arcs_per_node {
            let r = rng.random::<f64>() * total;
            let mut target = weights.find(r);
            if target >= t {
                // guard against the r == total edge of float rounding
                target = t - 1;
            }
            arcs.push((t as u32, target as u32));
            let old = kernel(in_degree[target]);
            in_degree[target] += 1;
            let delta = kernel(in_degree[target]) - old;
            weights.add(target, delta);
            total += delta;
        }
        weights.add(t, kernel(0));
        total += kernel(0);
    }
    Digraph::new(n, arcs)
}

/// Generates a directed Erdős–Rényi graph.
pub fn gen_er(cfg: &ErConfig) -> Result<Digraph> {
    cfg.validate()?;
    let n = cfg.n_nodes;
    let mut rng = rng_from_seed(cfg.seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random::<f64>() < cfg.p {
                arcs.push((u as u32, v as u32));
            }
        }
    }
    Digraph::new(n, arcs)
}

/// Degree-preserving randomization: repeats `n_swap_attempts` times the
/// draw of two distinct arcs (a,b), (c,d) and swaps their targets to
/// (a,d), (c,b) unless the swap would create a self-loop or a duplicate
/// arc. Every node keeps its in- and out-degree.
pub fn rewire_degree_preserving(g: &Digraph, n_swap_attempts: usize, seed: u64) -> Result<Digraph> {
    let m = g.n_arcs();
    if m < 2 {
        return Err(Error::Input("rewiring needs at least 2 arcs".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut arcs = g.arcs().to_vec();
    let mut counts: HashMap<(u32, u32), u32> = HashMap::with_capacity(m);
    for &arc in &arcs {
        *counts.entry(arc).or_insert(0) += 1;
    }
    for _ in 0..n_swap_attempts {
        let i = rng.random_range(0..m);
        let j = loop {
            let j = rng.random_range(0..m);
            if j != i {
                break j;
            }
        };
        let (a, b) = arcs[i];
        let (c, d) = arcs[j];
        let new_i = (a, d);
        let new_j = (c, b);
        if a == d || c == b || new_i == new_j {
            continue;
        }
        if counts.get(&new_i).copied().unwrap_or(0) > 0
            || counts.get(&new_j).copied().unwrap_or(0) > 0
        {
            continue;
        }
        *counts.get_mut(&(a, b)).unwrap() -= 1;
        *counts.get_mut(&(c, d)).unwrap() -= 1;
        *counts.entry(new_i).or_insert(0) += 1;
        *counts.entry(new_j).or_insert(0) += 1;
        arcs[i] = new_i;
        arcs[j] = new_j;
    }
    Digraph::new(g.n_nodes(), arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pa_single_node() {
        let g = gen_pa(&PaConfig::new(1, 1.0, 0)).unwrap();
        assert_eq!(g.n_nodes(), 1);
        assert_eq!(g.n_arcs(), 0);
    }

    #[test]
    fn pa_zero_nodes_is_error() {
        assert!(gen_pa(&PaConfig::new(0, 1.0, 0)).is_err());
    }

    #[test]
    fn pa_tree_shape() {
        let g = gen_pa(&PaConfig::new(25, 1.0, 7)).unwrap();
        assert_eq!(g.n_arcs(), 24);
        assert!(g.out_degrees().iter().all(|&d| d <= 1));
        let indeg_sum: u32 = g.in_degrees().iter().sum();
        assert_eq!(indeg_sum, 24);
    }

    #[test]
    fn pa_arcs_point_new_to_old() {
        let g = gen_pa(&PaConfig::new(50, 1.0, 3)).unwrap();
        assert!(g.arcs().iter().all(|&(u, v)| v < u));
    }

    #[test]
    fn pa_same_seed_same_graph() {
        let a = gen_pa(&PaConfig::new(200, 0.5, 11)).unwrap();
        let b = gen_pa(&PaConfig::new(200, 0.5, 11)).unwrap();
        assert_eq!(a.arcs(), b.arcs());
    }

    #[test]
    fn er_extremes() {
        let empty = gen_er(&ErConfig {
            n_nodes: 5,
            p: 0.0,
            seed: 1,
        })
        .unwrap();
        assert_eq!(empty.n_arcs(), 0);
        let full = gen_er(&ErConfig {
            n_nodes: 4,
            p: 1.0,
            seed: 1,
        })
        .unwrap();
        assert_eq!(full.n_arcs(), 12);
    }

    #[test]
    fn rewire_noop_and_forced_rejection() {
        let g = gen_pa(&PaConfig::new(30, 1.0, 5)).unwrap();
        let same = rewire_degree_preserving(&g, 0, 1).unwrap();
        assert_eq!(same.arcs(), g.arcs());

        let cycle = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        let after = rewire_degree_preserving(&cycle, 500, 9).unwrap();
        assert_eq!(after.arcs(), cycle.arcs());
    }

    #[test]
    fn rewire_preserves_degrees() {
        let g = gen_pa(&PaConfig::new(200, 1.0, 2)).unwrap();
        let r = rewire_degree_preserving(&g, 2000, 3).unwrap();
        assert_eq!(r.in_degrees(), g.in_degrees());
        assert_eq!(r.out_degrees(), g.out_degrees());
        assert!(r.arcs().iter().all(|&(u, v)| u != v));
    }

    #[test]
    fn rewire_too_small_is_error() {
        let g = Digraph::new(2, vec![(0, 1)]).unwrap();
        assert!(rewire_degree_preserving(&g, 10, 0).is_err());
    }
}
