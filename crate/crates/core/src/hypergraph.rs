//! Weighted hypergraphs and induced-weight queries.

use std::fmt;

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::rational::{self, Rational};

/// Dense vertex index, `0..n` within one hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId(u32::try_from(v).expect("vertex index exceeds u32"))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A candidate structure (route, itinerary, subtree) viewed as a vertex subset
/// carrying a non-negative mass.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperedge {
    vertices: Vec<VertexId>,
    weight: Rational,
}

impl Hyperedge {
    /// Sorts and deduplicates `vertices`.
    pub fn new(vertices: impl IntoIterator<Item = usize>, weight: Rational) -> Self {
        let mut v: Vec<VertexId> = vertices.into_iter().map(VertexId::from).collect();
        v.sort_unstable();
        v.dedup();
        Hyperedge {
            vertices: v,
            weight,
        }
    }

    /// Keeps the vertex list exactly as given; use [`WeightedHypergraph::validate`]
    /// to check it.
    pub fn from_raw(vertices: Vec<VertexId>, weight: Rational) -> Self {
        Hyperedge { vertices, weight }
    }

    pub fn unit(vertices: impl IntoIterator<Item = usize>) -> Self {
        Self::new(vertices, Rational::one())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn weight(&self) -> Rational {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_subset_of(&self, set: &VertexSet) -> bool {
        self.vertices.iter().all(|&v| set.contains(v))
    }

    pub fn with_weight(&self, weight: Rational) -> Self {
        Hyperedge {
            vertices: self.vertices.clone(),
            weight,
        }
    }
}

/// Bitset over `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet { bits }
    }

    pub fn from_ids(n: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for v in ids {
            s.bits.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.bits.contains(v.index())
    }

    pub fn insert(&mut self, v: VertexId) {
        self.bits.insert(v.index());
    }

    pub fn remove(&mut self, v: VertexId) {
        self.bits.set(v.index(), false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        VertexSet { bits }
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.bits.ones().map(VertexId::from)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.bits.ones()).finish()
    }
}

/// A vertex universe `0..n` with a family of weighted hyperedges.
///
/// Immutable once built. Duplicate hyperedges are kept as separate entries
/// (calibration data are multisets), and zero-weight hyperedges are kept for
/// containment queries even though they never influence selection.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedHypergraph {
    n: usize,
    edges: Vec<Hyperedge>,
    total_weight: Rational,
    /// Common denominator of all weights; `scaled[i] = w_i * scale`.
    scale: i128,
    scaled: Vec<i128>,
}

impl WeightedHypergraph {
    /// Builds and validates.
    pub fn new(n: usize, edges: Vec<Hyperedge>) -> Result<Self> {
        let total = edges.iter().fold(Rational::zero(), |acc, e| acc + e.weight);
        let h = Self::from_parts(n, edges, total)?;
        h.validate()?;
        Ok(h)
    }

    /// Unit-weight hypergraph from vertex lists (one edge per sample).
    pub fn from_samples(n: usize, samples: &[Vec<usize>]) -> Result<Self> {
        Self::new(
            n,
            samples
                .iter()
                .map(|s| Hyperedge::unit(s.iter().copied()))
                .collect(),
        )
    }

    /// Uniform mass `1/M` on each of `M` samples.
    pub fn uniform(n: usize, samples: &[Hyperedge]) -> Result<Self> {
        let m = samples.len().max(1) as i128;
        let w = rational::rat(1, m);
        Self::new(n, samples.iter().map(|e| e.with_weight(w)).collect())
    }

    /// Assembles without validating; the stored total is taken as given.
    pub fn from_parts(n: usize, edges: Vec<Hyperedge>, total_weight: Rational) -> Result<Self> {
        let scale = rational::common_denominator(edges.iter().map(|e| &e.weight))
            .ok_or(Error::CapacityOverflow)?;
        let scaled = edges
            .iter()
            .map(|e| {
                e.weight
                    .numer()
                    .checked_mul(scale / e.weight.denom())
                    .ok_or(Error::CapacityOverflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightedHypergraph {
            n,
            edges,
            total_weight,
            scale,
            scaled,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn total_weight(&self) -> Rational {
        self.total_weight
    }

    /// Common denominator and integer-scaled weights.
    pub fn scaled_weights(&self) -> (i128, &[i128]) {
        (self.scale, &self.scaled)
    }

    /// Checks every structural invariant and reports the first violation.
    pub fn validate(&self) -> Result<(), Violation> {
        for (i, e) in self.edges.iter().enumerate() {
            if e.vertices.is_empty() {
                return Err(Violation::EmptyEdge { edge: i });
            }
            if let Some(&v) = e.vertices.iter().find(|v| v.index() >= self.n) {
                return Err(Violation::OutOfRange {
                    edge: i,
                    vertex: v.index(),
                    n: self.n,
                });
            }
            if e.weight.is_negative() {
                return Err(Violation::NegativeWeight {
                    edge: i,
                    weight: rational::format(&e.weight),
                });
            }
            if e.vertices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Violation::Unsorted { edge: i });
            }
        }
        let actual = self
            .edges
            .iter()
            .fold(Rational::zero(), |acc, e| acc + e.weight);
        if actual != self.total_weight {
            return Err(Violation::TotalWeightMismatch {
                stored: rational::format(&self.total_weight),
                actual: rational::format(&actual),
            });
        }
        Ok(())
    }

    /// `e(S)`: total weight of hyperedges entirely inside `set`.
    pub fn induced_weight(&self, set: &VertexSet) -> Rational {
        let sum: i128 = self
            .edges
            .iter()
            .zip(&self.scaled)
            .filter(|(e, _)| e.is_subset_of(set))
            .map(|(_, &w)| w)
            .sum();
        Rational::new(sum, self.scale)
    }

    /// `W - e(S)`.
    pub fn residual_weight(&self, set: &VertexSet) -> Rational {
        self.total_weight - self.induced_weight(set)
    }

    /// Vertices touched by at least one positive-weight hyperedge.
    pub fn positive_support(&self) -> VertexSet {
        let mut s = VertexSet::empty(self.n);
        for e in self.edges.iter().filter(|e| e.weight.is_positive()) {
            for &v in &e.vertices {
                s.insert(v);
            }
        }
        s
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Smallest positive edge weight, if any.
    pub fn min_positive_weight(&self) -> Option<Rational> {
        self.edges
            .iter()
            .map(|e| e.weight)
            .filter(|w| w.is_positive())
            .min()
    }

    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(Hyperedge::len).max().unwrap_or(0)
    }
}

/// Slack configuration for bicriteria rounding: `tau = 1 - epsilon`,
/// `rho = kappa / (1 + kappa)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BicriteriaParams {
    pub epsilon: Rational,
    pub kappa: Rational,
    pub rho: Rational,
    pub tau: Rational,
}

impl BicriteriaParams {
    pub fn new(tau: Rational, kappa: Rational) -> Result<Self> {
        if !rational::is_unit_interval(&tau) {
            return Err(Error::Parameter(format!(
                "tau = {} not in [0, 1]",
                rational::format(&tau)
            )));
        }
        if !kappa.is_positive() {
            return Err(Error::Parameter(format!(
                "kappa = {} must be positive",
                rational::format(&kappa)
            )));
        }
        Ok(BicriteriaParams {
            epsilon: Rational::one() - tau,
            kappa,
            rho: kappa / (Rational::one() + kappa),
            tau,
        })
    }

    /// Largest admissible residual, `(1 + kappa) * epsilon * W`.
    pub fn residual_budget(&self, total: Rational) -> Rational {
        (Rational::one() + self.kappa) * self.epsilon * total
    }
}
