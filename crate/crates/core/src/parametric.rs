//! Lagrangian subgraph selection as a parametric minimum cut.
//!
//! For a multiplier `lambda >= 0` the Lagrangian `Phi(K, lambda) = |K| - lambda * e(K)`
//! is minimized by the source side of a minimum s-t cut in a bipartite network:
//! `s -> u_e` with capacity `lambda * w_e`, `u_e -> n_v` (infinite) for `v in e`,
//! and `n_v -> t` with capacity 1. A cut with vertex side `K` costs
//! `|K| + lambda * (W - e(K))`.
//!
//! [`nested_chain`] enumerates every distinct inclusion-minimal minimizer over
//! `lambda in [0, inf)` together with the exact multipliers where it changes.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::flow::MaxFlow;
use crate::hypergraph::{VertexId, VertexSet, WeightedHypergraph};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Source,
    Sink,
    /// Hyperedge node, by index into the hypergraph's edge list.
    Edge(usize),
    Vertex(VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capacity {
    Finite(Rational),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkArc {
    pub from: Node,
    pub to: Node,
    pub capacity: Capacity,
}

/// The bipartite network for one value of `lambda`.
///
/// Zero-weight hyperedges get no node. Finite capacities are kept both as
/// rationals and scaled to a common integer denominator.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    lambda: Rational,
    n: usize,
    edge_nodes: Vec<usize>,
    arcs: Vec<NetworkArc>,
    int_arcs: Vec<(usize, usize, i128)>,
    denominator: i128,
}

impl FlowNetwork {
    pub fn lambda(&self) -> Rational {
        self.lambda
    }

    pub fn arcs(&self) -> &[NetworkArc] {
        &self.arcs
    }

    /// Hyperedges that received a node (those with positive weight).
    pub fn edge_nodes(&self) -> &[usize] {
        &self.edge_nodes
    }

    pub fn node_count(&self) -> usize {
        2 + self.edge_nodes.len() + self.n
    }

    pub fn finite_arc_count(&self) -> usize {
        self.arcs
            .iter()
            .filter(|a| matches!(a.capacity, Capacity::Finite(_)))
            .count()
    }

    pub fn infinite_arc_count(&self) -> usize {
        self.arcs.len() - self.finite_arc_count()
    }
}

pub fn build_network(h: &WeightedHypergraph, lambda: Rational) -> Result<FlowNetwork> {
    if lambda.is_negative() {
        return Err(Error::NegativeLambda(rational::format(&lambda)));
    }
    let n = h.n();
    let (scale, scaled) = h.scaled_weights();
    let edge_nodes: Vec<usize> = (0..h.m()).filter(|&i| scaled[i] > 0).collect();
    let m = edge_nodes.len();
    // node layout: 0 = s, 1 = t, 2.. = edge nodes, 2 + m.. = vertex nodes
    let vertex_node = |v: VertexId| 2 + m + v.index();

    // integer scale: everything multiplied by den(lambda) * scale
    let p = *lambda.numer();
    let q = *lambda.denom();
    let denominator = q.checked_mul(scale).ok_or(Error::CapacityOverflow)?;

    let mut arcs = Vec::new();
    let mut int_arcs = Vec::new();
    let mut finite_sum: i128 = 0;
    for (slot, &i) in edge_nodes.iter().enumerate() {
        let cap = p.checked_mul(scaled[i]).ok_or(Error::CapacityOverflow)?;
        finite_sum = finite_sum.checked_add(cap).ok_or(Error::CapacityOverflow)?;
        arcs.push(NetworkArc {
            from: Node::Source,
            to: Node::Edge(i),
            capacity: Capacity::Finite(lambda * h.edges()[i].weight()),
        });
        int_arcs.push((0, 2 + slot, cap));
    }
    for v in 0..n {
        let v = VertexId::from(v);
        finite_sum = finite_sum
            .checked_add(denominator)
            .ok_or(Error::CapacityOverflow)?;
        arcs.push(NetworkArc {
            from: Node::Vertex(v),
            to: Node::Sink,
            capacity: Capacity::Finite(Rational::one()),
        });
        int_arcs.push((vertex_node(v), 1, denominator));
    }
    let infinite = finite_sum.checked_add(1).ok_or(Error::CapacityOverflow)?;
    for (slot, &i) in edge_nodes.iter().enumerate() {
        for &v in h.edges()[i].vertices() {
            arcs.push(NetworkArc {
                from: Node::Edge(i),
                to: Node::Vertex(v),
                capacity: Capacity::Infinite,
            });
            int_arcs.push((2 + slot, vertex_node(v), infinite));
        }
    }
    Ok(FlowNetwork {
        lambda,
        n,
        edge_nodes,
        arcs,
        int_arcs,
        denominator,
    })
}

/// Exact minimum cut with the inclusion-minimal source side, projected onto
/// the hypergraph vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCut {
    pub value: Rational,
    pub source_side: VertexSet,
}

pub fn min_cut(net: &FlowNetwork) -> Result<MinCut> {
    let mut g = MaxFlow::new(net.node_count());
    for &(u, v, c) in &net.int_arcs {
        g.add_arc(u, v, c);
    }
    let flow = g.run(0, 1);
    let side = g.source_side(0);
    let m = net.edge_nodes.len();
    let source_side = VertexSet::from_ids(net.n, (0..net.n).filter(|&v| side[2 + m + v]));
    Ok(MinCut {
        value: Rational::new(flow, net.denominator),
        source_side,
    })
}

/// `Phi(K, lambda)` together with the quantities it is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LagrangianValue {
    pub set_size: usize,
    pub induced: Rational,
    pub lambda: Rational,
    pub phi: Rational,
}

impl LagrangianValue {
    pub fn new(set_size: usize, induced: Rational, lambda: Rational) -> Self {
        let phi = Rational::from_integer(set_size as i128) - lambda * induced;
        LagrangianValue {
            set_size,
            induced,
            lambda,
            phi,
        }
    }

    pub fn of(h: &WeightedHypergraph, set: &VertexSet, lambda: Rational) -> Self {
        Self::new(set.len(), h.induced_weight(set), lambda)
    }
}

/// Inclusion-minimal minimizer of `Phi(., lambda)` and the cut value.
pub fn minimal_minimizer(h: &WeightedHypergraph, lambda: Rational) -> Result<MinCut> {
    min_cut(&build_network(h, lambda)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainStats {
    pub size: usize,
    pub induced: Rational,
    pub residual: Rational,
}

/// `{} = S_0 ⊂ S_1 ⊂ ... ⊂ S_k` with breakpoints `lambda_1 < ... < lambda_k`:
/// the minimal minimizer of `Phi(., lambda)` is `S_j` for
/// `lambda in (lambda_j, lambda_{j+1}]` (with `lambda_0 = -inf` clamped to 0,
/// `lambda_{k+1} = inf`).
#[derive(Debug, Clone, PartialEq)]
pub struct NestedChain {
    n: usize,
    total_weight: Rational,
    sets: Vec<VertexSet>,
    breakpoints: Vec<Rational>,
    stats: Vec<ChainStats>,
}

impl NestedChain {
    /// Reassembles a chain from stored parts, checking its invariants.
    pub fn from_parts(
        n: usize,
        sets: Vec<VertexSet>,
        breakpoints: Vec<Rational>,
        stats: Vec<ChainStats>,
    ) -> Result<Self> {
        let bad = |m: &str| Error::Parse {
            path: "chain".into(),
            message: m.into(),
        };
        if sets.is_empty() || !sets[0].is_empty() {
            return Err(bad("chain must start with the empty set"));
        }
        if breakpoints.len() + 1 != sets.len() || stats.len() != sets.len() {
            return Err(bad("sets, breakpoints and stats lengths disagree"));
        }
        if sets.iter().any(|s| s.universe() != n) {
            return Err(bad("set universe differs from n"));
        }
        for j in 1..sets.len() {
            if !(sets[j - 1].is_subset(&sets[j]) && sets[j - 1] != sets[j]) {
                return Err(bad("sets are not strictly nested"));
            }
            if stats[j].induced <= stats[j - 1].induced {
                return Err(bad("induced weights are not strictly increasing"));
            }
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("breakpoints are not strictly increasing"));
        }
        for (s, st) in sets.iter().zip(&stats) {
            if st.size != s.len() {
                return Err(bad("stats size disagrees with set"));
            }
        }
        let total_weight = stats[0].induced + stats[0].residual;
        if stats
            .iter()
            .any(|st| st.induced + st.residual != total_weight)
        {
            return Err(bad("induced + residual is not constant"));
        }
        Ok(NestedChain {
            n,
            total_weight,
            sets,
            breakpoints,
            stats,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total_weight(&self) -> Rational {
        self.total_weight
    }

    /// Number of sets, `k + 1`.
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the last set, `k`.
    pub fn last_index(&self) -> usize {
        self.sets.len() - 1
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn set(&self, j: usize) -> &VertexSet {
        &self.sets[j]
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn stats(&self) -> &[ChainStats] {
        &self.stats
    }

    pub fn residual(&self, j: usize) -> Rational {
        self.stats[j].residual
    }

    pub fn induced(&self, j: usize) -> Rational {
        self.stats[j].induced
    }

    /// Chain index of the minimal minimizer at `lambda`.
    pub fn index_at(&self, lambda: Rational) -> usize {
        self.breakpoints.partition_point(|b| *b < lambda)
    }

    /// SHA-256 over a canonical text rendering (universe, sets, breakpoints).
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update(format!("n={}\n", self.n));
        for (j, s) in self.sets.iter().enumerate() {
            let ids: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            hasher.update(format!("S{j}={}\n", ids.join(",")));
        }
        for b in &self.breakpoints {
            hasher.update(format!("b={}\n", rational::format(b)));
        }
        hex::encode(hasher.finalize())
    }

    /// Smallest `j` with `S_j ⊇ vertices`, if any.
    pub fn first_containing(&self, vertices: &[VertexId]) -> Option<usize> {
        // sets are nested, so containment is monotone in j
        let last = self.last_index();
        if !vertices.iter().all(|&v| self.sets[last].contains(v)) {
            return None;
        }
        Some(
            self.sets
                .partition_point(|s| !vertices.iter().all(|&v| s.contains(v))),
        )
    }
}

/// Computes the complete nested chain by divide-and-conquer discrete Newton
/// search over `lambda`, using one exact min cut per probe.
pub fn nested_chain(h: &WeightedHypergraph) -> Result<NestedChain> {
    h.validate()?;
    let n = h.n();
    let total = h.total_weight();
    let empty = VertexSet::empty(n);
    let stats_of = |s: &VertexSet| {
        let induced = h.induced_weight(s);
        ChainStats {
            size: s.len(),
            induced,
            residual: total - induced,
        }
    };
    let Some(w_min) = h.min_positive_weight() else {
        return Ok(NestedChain {
            n,
            total_weight: total,
            stats: vec![stats_of(&empty)],
            sets: vec![empty],
            breakpoints: Vec::new(),
        });
    };
    // beyond this multiplier the whole positive support is the unique optimum
    let lambda_max = Rational::from_integer(n as i128 + 1) / w_min;
    let top = minimal_minimizer(h, lambda_max)?.source_side;

    let lo = Probe {
        set: empty.clone(),
        induced: Rational::zero(),
    };
    let hi = Probe {
        induced: h.induced_weight(&top),
        set: top,
    };
    let mut found: Vec<(Rational, VertexSet)> = Vec::new();
    refine(h, lo, hi, &mut found)?;

    let mut sets = vec![empty];
    let mut breakpoints = Vec::with_capacity(found.len());
    for (lambda, set) in found {
        breakpoints.push(lambda);
        sets.push(set);
    }
    let stats = sets.iter().map(stats_of).collect();
    Ok(NestedChain {
        n,
        total_weight: total,
        sets,
        breakpoints,
        stats,
    })
}

struct Probe {
    set: VertexSet,
    induced: Rational,
}

/// Both probes hold minimal minimizers at two multipliers. Appends, in
/// increasing order, every breakpoint strictly between them.
fn refine(
    h: &WeightedHypergraph,
    lo: Probe,
    hi: Probe,
    out: &mut Vec<(Rational, VertexSet)>,
) -> Result<()> {
    if lo.set == hi.set {
        return Ok(());
    }
    debug_assert!(lo.set.is_subset(&hi.set));
    let gain = hi.induced - lo.induced;
    if !gain.is_positive() {
        return Err(Error::Parameter(
            "nested minimizers with non-increasing weight".into(),
        ));
    }
    // where the two Lagrangian lines cross
    let cross = Rational::from_integer((hi.set.len() - lo.set.len()) as i128) / gain;
    let mid = minimal_minimizer(h, cross)?.source_side;
    if mid == lo.set {
        out.push((cross, hi.set));
        return Ok(());
    }
    debug_assert!(lo.set.is_subset(&mid) && mid.is_subset(&hi.set) && mid != hi.set);
    let mid_probe = || Probe {
        induced: h.induced_weight(&mid),
        set: mid.clone(),
    };
    refine(h, lo, mid_probe(), out)?;
    refine(h, mid_probe(), hi, out)
}
