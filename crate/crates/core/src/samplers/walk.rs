//! Uniform sampling of s-t walks that leave a reference path at most `d*`
//! times.
//!
//! Reference-path edges may only be traversed forward and cost nothing; every
//! other edge is usable in both directions at cost 1. The target is
//! absorbing: a walk ends the first time it reaches `t`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use super::{check_budget, pick};
use crate::error::{Error, Result};
use crate::hypergraph::Hyperedge;

/// Undirected multigraph; edge ids index `edges` and double as hypergraph
/// vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoadGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl RoadGraph {
    pub fn new(nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= nodes || v >= nodes {
                return Err(Error::Sampler(format!(
                    "edge {i} has an endpoint outside 0..{nodes}"
                )));
            }
            if u == v {
                return Err(Error::Sampler(format!("edge {i} is a self-loop")));
            }
        }
        Ok(RoadGraph { nodes, edges })
    }

    /// Edge ids along a node sequence (first matching edge per step).
    pub fn path_edges(&self, path: &[usize]) -> Result<Vec<usize>> {
        path.windows(2)
            .map(|w| {
                self.edges
                    .iter()
                    .position(|&(a, b)| (a, b) == (w[0], w[1]) || (a, b) == (w[1], w[0]))
                    .ok_or_else(|| Error::Sampler(format!("no edge between {} and {}", w[0], w[1])))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Arc {
    to: usize,
    edge: usize,
    cost: usize,
}

/// A sampled walk: node sequence and traversed edge ids (with repeats).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
    pub deviation: usize,
}

impl Walk {
    /// Traversed edges as a set, unit mass.
    pub fn to_hyperedge(&self) -> Hyperedge {
        Hyperedge::unit(self.edges.iter().copied())
    }
}

#[derive(Debug, Clone)]
pub struct WalkTable {
    d_star: usize,
    source: usize,
    target: usize,
    arcs: Vec<Vec<Arc>>,
    /// `counts[u][k]`: walks from `u` to the target with cost exactly `k`.
    counts: Vec<Vec<BigUint>>,
}

pub fn build_walk_table(graph: &RoadGraph, reference: &[usize], d_star: i64) -> Result<WalkTable> {
    build_walk_table_ordered(graph, reference, d_star, None)
}

/// As [`build_walk_table`], filling off-path nodes in `off_path_order`
/// (a permutation of the nodes not on the reference path).
pub fn build_walk_table_ordered(
    graph: &RoadGraph,
    reference: &[usize],
    d_star: i64,
    off_path_order: Option<&[usize]>,
) -> Result<WalkTable> {
    let d = check_budget(d_star)?;
    if reference.len() < 2 {
        return Err(Error::Sampler(
            "reference path needs at least one edge".into(),
        ));
    }
    let mut on_path = vec![false; graph.nodes];
    for &u in reference {
        if u >= graph.nodes {
            return Err(Error::Sampler(format!("reference node {u} out of range")));
        }
        if std::mem::replace(&mut on_path[u], true) {
            return Err(Error::Sampler(format!("reference path revisits node {u}")));
        }
    }
    let ref_edges = graph.path_edges(reference)?;
    let mut is_ref = vec![false; graph.edges.len()];
    for &e in &ref_edges {
        is_ref[e] = true;
    }

    let mut arcs = vec![Vec::new(); graph.nodes];
    for (e, &(a, b)) in graph.edges.iter().enumerate() {
        if !is_ref[e] {
            arcs[a].push(Arc {
                to: b,
                edge: e,
                cost: 1,
            });
            arcs[b].push(Arc {
                to: a,
                edge: e,
                cost: 1,
            });
        }
    }
    for (w, &e) in reference.windows(2).zip(&ref_edges) {
        arcs[w[0]].push(Arc {
            to: w[1],
            edge: e,
            cost: 0,
        });
    }
    let target = *reference.last().unwrap();
    arcs[target].clear();

    let off: Vec<usize> = match off_path_order {
        Some(order) => {
            let mut sorted = order.to_vec();
            sorted.sort_unstable();
            if sorted
                != (0..graph.nodes)
                    .filter(|&u| !on_path[u])
                    .collect::<Vec<_>>()
            {
                return Err(Error::Sampler(
                    "fill order is not a permutation of the off-path nodes".into(),
                ));
            }
            order.to_vec()
        }
        None => (0..graph.nodes).filter(|&u| !on_path[u]).collect(),
    };

    let mut counts = vec![vec![BigUint::zero(); d + 1]; graph.nodes];
    counts[target][0] = BigUint::one();
    let cell = |counts: &Vec<Vec<BigUint>>, u: usize, k: usize| -> BigUint {
        arcs[u]
            .iter()
            .filter(|a| a.cost <= k)
            .map(|a| &counts[a.to][k - a.cost])
            .sum()
    };
    for k in 0..=d {
        // off-path nodes only have cost-1 arcs and read layer k - 1
        for &u in &off {
            counts[u][k] = cell(&counts, u, k);
        }
        // path nodes read their successor's layer k, so go backwards
        for &u in reference[..reference.len() - 1].iter().rev() {
            counts[u][k] = cell(&counts, u, k);
        }
    }
    Ok(WalkTable {
        d_star: d,
        source: reference[0],
        target,
        arcs,
        counts,
    })
}

impl WalkTable {
    pub fn d_star(&self) -> usize {
        self.d_star
    }

    pub fn count(&self, u: usize, k: usize) -> &BigUint {
        &self.counts[u][k]
    }

    /// Number of admissible walks, `sum_{k <= d*} N(s, k)`.
    pub fn partition(&self) -> BigUint {
        self.counts[self.source].iter().sum()
    }

    /// Re-evaluates every cell from its defining sum.
    pub fn check_recurrence(&self) -> bool {
        (0..self.counts.len()).all(|u| {
            (0..=self.d_star).all(|k| {
                let expected: BigUint = if u == self.target {
                    if k == 0 {
                        BigUint::one()
                    } else {
                        BigUint::zero()
                    }
                } else {
                    self.arcs[u]
                        .iter()
                        .filter(|a| a.cost <= k)
                        .map(|a| &self.counts[a.to][k - a.cost])
                        .sum()
                };
                expected == self.counts[u][k]
            })
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Walk> {
        let mut k = pick(rng, &self.counts[self.source])?;
        let deviation = k;
        let mut u = self.source;
        let mut walk = Walk {
            nodes: vec![u],
            edges: Vec::new(),
            deviation,
        };
        while u != self.target {
            let options: Vec<BigUint> = self.arcs[u]
                .iter()
                .map(|a| {
                    if a.cost <= k {
                        self.counts[a.to][k - a.cost].clone()
                    } else {
                        BigUint::zero()
                    }
                })
                .collect();
            let a = self.arcs[u][pick(rng, &options)?];
            k -= a.cost;
            u = a.to;
            walk.nodes.push(u);
            walk.edges.push(a.edge);
        }
        Ok(walk)
    }
}
