//! Benchmark fixtures.

use confsub_core::rational::rat;
use confsub_core::rng;
use confsub_core::samplers::RoadGraph;
use confsub_core::{Hyperedge, WeightedHypergraph};
use rand::Rng;

/// `m` hyperedges of 2 to 5 vertices over `n` vertices, weights `p/10`.
pub fn random_hypergraph(n: usize, m: usize, seed: u64) -> WeightedHypergraph {
    let mut r = rng::stream(seed, 0);
    let edges = (0..m)
        .map(|_| {
            let size = r.gen_range(2..=5.min(n));
            let vs: Vec<usize> = (0..size).map(|_| r.gen_range(0..n)).collect();
            Hyperedge::new(vs, rat(r.gen_range(1..=10), 10))
        })
        .collect();
    WeightedHypergraph::new(n, edges).unwrap()
}

/// `side x side` grid graph; returns the graph and the top-row-then-right-
/// column reference path from the top-left to the bottom-right corner.
pub fn grid_graph(side: usize) -> (RoadGraph, Vec<usize>) {
    let id = |r: usize, c: usize| r * side + c;
    let mut edges = Vec::new();
    for r in 0..side {
        for c in 0..side {
            if c + 1 < side {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < side {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    let mut path: Vec<usize> = (0..side).map(|c| id(0, c)).collect();
    path.extend((1..side).map(|r| id(r, side - 1)));
    (RoadGraph::new(side * side, edges).unwrap(), path)
}

/// Complete binary tree on `n` nodes as a parent array.
pub fn binary_tree(n: usize) -> Vec<Option<usize>> {
    (0..n)
        .map(|u| if u == 0 { None } else { Some((u - 1) / 2) })
        .collect()
}
