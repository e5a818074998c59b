//! Forward and reverse greedy vertex selection.
//!
//! Both rank vertices by the number of training hyperedges through them
//! (multiplicity counts, weights ignored) and measure coverage as the
//! fraction of an evaluation family's mass induced by the current set.

use num_traits::{One, Zero};

use crate::hypergraph::{Hyperedge, VertexId, VertexSet, WeightedHypergraph};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyTrace {
    /// Vertices in the order they were added (forward) or deleted (reverse).
    pub order: Vec<VertexId>,
    /// `coverage[i]` is the evaluation coverage after the first `i` steps.
    pub coverage: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyPick {
    pub phi: Rational,
    pub set: VertexSet,
    /// The target was out of reach; `set` is the full universe.
    pub unreachable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyOutput {
    pub trace: GreedyTrace,
    pub picks: Vec<GreedyPick>,
}

fn coverage(eval: &WeightedHypergraph, set: &VertexSet) -> Rational {
    let w = eval.total_weight();
    if w.is_zero() {
        Rational::one()
    } else {
        eval.induced_weight(set) / w
    }
}

/// Adds vertices by descending training frequency (ties: ascending id) and
/// stops each target at the first prefix reaching it.
pub fn forward_greedy(
    train: &[Hyperedge],
    eval: &WeightedHypergraph,
    targets: &[Rational],
) -> GreedyOutput {
    let n = eval.n();
    let mut freq = vec![0usize; n];
    for e in train {
        for &v in e.vertices() {
            freq[v.index()] += 1;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| freq[b].cmp(&freq[a]).then(a.cmp(&b)));

    let mut set = VertexSet::empty(n);
    let mut trace = GreedyTrace {
        order: Vec::new(),
        coverage: vec![coverage(eval, &set)],
    };
    for &v in &order {
        if *trace.coverage.last().unwrap() == Rational::one() {
            break;
        }
        set.insert(VertexId::from(v));
        trace.order.push(VertexId::from(v));
        trace.coverage.push(coverage(eval, &set));
    }
    let picks = targets
        .iter()
        .map(|&phi| match trace.coverage.iter().position(|&c| c >= phi) {
            Some(steps) => GreedyPick {
                phi,
                set: VertexSet::from_ids(n, trace.order[..steps].iter().map(|v| v.index())),
                unreachable: false,
            },
            None => GreedyPick {
                phi,
                set: VertexSet::full(n),
                unreachable: true,
            },
        })
        .collect();
    GreedyOutput { trace, picks }
}

/// Repeatedly deletes the vertex lying on the fewest surviving training
/// hyperedges (ties: descending id), discarding the hyperedges through it.
/// Each target gets the last set before coverage falls below it.
pub fn reverse_greedy(
    train: &[Hyperedge],
    eval: &WeightedHypergraph,
    targets: &[Rational],
) -> GreedyOutput {
    let n = eval.n();
    let mut set = VertexSet::full(n);
    let mut alive = vec![true; train.len()];
    let mut intensity = vec![0usize; n];
    for e in train {
        for &v in e.vertices() {
            intensity[v.index()] += 1;
        }
    }
    let mut trace = GreedyTrace {
        order: Vec::new(),
        coverage: vec![coverage(eval, &set)],
    };
    for _ in 0..n {
        let v = set
            .iter()
            .min_by(|a, b| {
                intensity[a.index()]
                    .cmp(&intensity[b.index()])
                    .then(b.cmp(a))
            })
            .expect("set is non-empty inside the loop");
        set.remove(v);
        for (i, e) in train.iter().enumerate() {
            if alive[i] && e.vertices().binary_search(&v).is_ok() {
                alive[i] = false;
                for &u in e.vertices() {
                    intensity[u.index()] -= 1;
                }
            }
        }
        trace.order.push(v);
        trace.coverage.push(coverage(eval, &set));
    }
    let picks = targets
        .iter()
        .map(|&phi| {
            if trace.coverage[0] < phi {
                return GreedyPick {
                    phi,
                    set: VertexSet::full(n),
                    unreachable: true,
                };
            }
            // number of deletions before coverage first drops below phi
            let steps = trace
                .coverage
                .iter()
                .position(|&c| c < phi)
                .map_or(n, |i| i - 1);
            let mut s = VertexSet::full(n);
            for &v in &trace.order[..steps] {
                s.remove(v);
            }
            GreedyPick {
                phi,
                set: s,
                unreachable: false,
            }
        })
        .collect();
    GreedyOutput { trace, picks }
}
