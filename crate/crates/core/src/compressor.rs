//! Turning a [`NestedChain`] into compact subgraphs.
//!
//! The optimal solution of the coverage LP
//!
//! ```text
//! min  sum_v x_v
//! s.t. z_e <= x_v          for v in e
//!      sum_e w_e z_e >= tau * W
//!      0 <= x, z <= 1
//! ```
//!
//! interpolates between two consecutive chain sets, so it is available in
//! closed form once the chain is known. [`select`] returns the smallest chain
//! set whose residual is within the `(1 + kappa) * epsilon * W` budget and is
//! monotone in `tau` for a fixed `kappa`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hypergraph::{BicriteriaParams, Hyperedge, VertexId, VertexSet, WeightedHypergraph};
use crate::parametric::{minimal_minimizer, NestedChain};
use crate::rational::{self, Rational};

/// `x = 1` on `S⁻`, `alpha` on `S⁺ \ S⁻`, `0` elsewhere; `z_e = min_{v in e} x_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    pub lower: usize,
    pub upper: usize,
    pub alpha: Rational,
    /// Multiplier at which both bracketing sets are Lagrangian-optimal.
    pub lambda: Rational,
    pub tau: Rational,
    pub objective: Rational,
    lower_set: VertexSet,
    upper_set: VertexSet,
}

impl FractionalSolution {
    pub fn lower_set(&self) -> &VertexSet {
        &self.lower_set
    }

    pub fn upper_set(&self) -> &VertexSet {
        &self.upper_set
    }

    pub fn x(&self, v: VertexId) -> Rational {
        if self.lower_set.contains(v) {
            Rational::one()
        } else if self.upper_set.contains(v) {
            self.alpha
        } else {
            Rational::zero()
        }
    }

    pub fn z(&self, e: &Hyperedge) -> Rational {
        e.vertices()
            .iter()
            .map(|&v| self.x(v))
            .min()
            .unwrap_or_else(Rational::one)
    }

    /// `sum_e w_e z_e`, evaluated edge by edge.
    pub fn coverage(&self, h: &WeightedHypergraph) -> Rational {
        h.edges()
            .iter()
            .map(|e| e.weight() * self.z(e))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// `sum_v x_v`, evaluated vertex by vertex.
    pub fn vertex_mass(&self) -> Rational {
        (0..self.upper_set.universe())
            .map(|v| self.x(VertexId::from(v)))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Dual bound `L(lambda*) + lambda* * tau * W` with `L` obtained from an
    /// independent min-cut solve (cut value minus `lambda * W`).
    pub fn dual_bound(&self, h: &WeightedHypergraph) -> Result<Rational> {
        let cut = minimal_minimizer(h, self.lambda)?;
        let w = h.total_weight();
        let lagrangian = cut.value - self.lambda * w;
        Ok(lagrangian + self.lambda * self.tau * w)
    }

    /// Threshold rounding `{v : x_v >= rho}` with `rho = kappa / (1 + kappa)`.
    pub fn round(&self, kappa: Rational) -> VertexSet {
        let rho = kappa / (Rational::one() + kappa);
        if self.lower != self.upper && self.alpha >= rho {
            self.upper_set.clone()
        } else {
            self.lower_set.clone()
        }
    }
}

pub fn fractional_solution(chain: &NestedChain, tau: Rational) -> Result<FractionalSolution> {
    if !rational::is_unit_interval(&tau) {
        return Err(Error::Parameter(format!(
            "tau = {} not in [0, 1]",
            rational::format(&tau)
        )));
    }
    let target = tau * chain.total_weight();
    let k = chain.last_index();
    if target > chain.induced(k) {
        return Err(Error::InfeasibleCoverage {
            tau: rational::format(&tau),
        });
    }
    let j = (0..=k)
        .find(|&j| chain.induced(j) >= target)
        .expect("S_k reaches the target");
    let (lower, upper, alpha) = if chain.induced(j) == target {
        (j, j, Rational::zero())
    } else {
        let lo = chain.induced(j - 1);
        (j - 1, j, (target - lo) / (chain.induced(j) - lo))
    };
    let lambda = if j == 0 {
        Rational::zero()
    } else {
        chain.breakpoints()[j - 1]
    };
    let size = |i: usize| Rational::from_integer(chain.stats()[i].size as i128);
    let objective = size(lower) + alpha * (size(upper) - size(lower));
    Ok(FractionalSolution {
        lower,
        upper,
        alpha,
        lambda,
        tau,
        objective,
        lower_set: chain.set(lower).clone(),
        upper_set: chain.set(upper).clone(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub set: VertexSet,
    pub index: usize,
    pub residual: Rational,
    pub params: BicriteriaParams,
    /// `tau = 1` was requested but some (zero-weight) hyperedge lies outside
    /// the final chain set.
    pub degenerate: bool,
}

impl Selection {
    pub fn size(&self) -> usize {
        self.set.len()
    }

    /// `residual <= (1 + kappa) * epsilon * W`.
    pub fn within_budget(&self, total: Rational) -> bool {
        self.residual <= self.params.residual_budget(total)
    }
}

/// Chain index chosen for `(tau, kappa)`: the smallest `j` with
/// `r_j < (1 + kappa)(1 - tau) W`, or `k` when `tau = 1`.
pub fn select_index(chain: &NestedChain, params: &BicriteriaParams) -> usize {
    let k = chain.last_index();
    if params.epsilon.is_zero() {
        return k;
    }
    let budget = params.residual_budget(chain.total_weight());
    (0..=k).find(|&j| chain.residual(j) < budget).unwrap_or(k)
}

pub fn select(
    chain: &NestedChain,
    h: &WeightedHypergraph,
    tau: Rational,
    kappa: Rational,
) -> Result<Selection> {
    let params = BicriteriaParams::new(tau, kappa)?;
    let index = select_index(chain, &params);
    let set = chain.set(index).clone();
    let degenerate = params.epsilon.is_zero() && h.edges().iter().any(|e| !e.is_subset_of(&set));
    Ok(Selection {
        residual: chain.residual(index),
        set,
        index,
        params,
        degenerate,
    })
}

/// Smallest `tau` at which [`select`] contains every vertex of `b`; `1` when
/// even the final chain set misses `b`.
pub fn tau_threshold(chain: &NestedChain, kappa: Rational, b: &Hyperedge) -> Rational {
    match chain.first_containing(b.vertices()) {
        None => Rational::one(),
        Some(0) => Rational::zero(),
        Some(j) => index_threshold(chain, kappa, j),
    }
}

/// Smallest `tau` whose selection index is at least `j` (`j >= 1`).
pub fn index_threshold(chain: &NestedChain, kappa: Rational, j: usize) -> Rational {
    let w = chain.total_weight();
    let r = chain.residual(j - 1);
    let t = Rational::one() - r / ((Rational::one() + kappa) * w);
    if t.is_negative() {
        Rational::zero()
    } else {
        t
    }
}

/// All `tau` in `[0, 1]` at which the selection index changes, ascending.
pub fn selection_steps(chain: &NestedChain, kappa: Rational) -> Vec<Rational> {
    let mut steps: Vec<Rational> = (1..chain.len())
        .map(|j| index_threshold(chain, kappa, j))
        .collect();
    steps.dedup();
    steps
}
