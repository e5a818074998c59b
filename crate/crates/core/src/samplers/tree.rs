//! Root-containing subtrees with at most `d*` nodes outside a reference
//! subtree.
//!
//! Which subtrees count as valid is set per node by a [`ChildRule`]: an
//! optional child may be left out when its parent is present, a mandatory one
//! may not. With every node optional the family is all connected subtrees
//! containing the root.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use super::{check_budget, pick};
use crate::error::{Error, Result};
use crate::hypergraph::Hyperedge;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChildRule {
    #[default]
    Optional,
    Mandatory,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: usize,
    children: Vec<Vec<usize>>,
    rules: Vec<ChildRule>,
}

impl RootedTree {
    /// `parent[root] = None`; every other node names its parent.
    pub fn from_parents(parent: &[Option<usize>]) -> Result<Self> {
        let n = parent.len();
        let roots: Vec<usize> = (0..n).filter(|&u| parent[u].is_none()).collect();
        let [root] = roots[..] else {
            return Err(Error::Sampler(format!(
                "expected exactly one root, found {}",
                roots.len()
            )));
        };
        let mut children = vec![Vec::new(); n];
        for (u, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(Error::Sampler(format!(
                        "parent {p} of node {u} out of range"
                    )));
                }
                children[p].push(u);
            }
        }
        // every node must reach the root
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            seen[u] = true;
            stack.extend(&children[u]);
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Sampler("parent array contains a cycle".into()));
        }
        Ok(RootedTree {
            root,
            children,
            rules: vec![ChildRule::Optional; n],
        })
    }

    pub fn with_rule(mut self, node: usize, rule: ChildRule) -> Self {
        self.rules[node] = rule;
        self
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn children(&self, u: usize) -> &[usize] {
        &self.children[u]
    }

    pub fn rule(&self, u: usize) -> ChildRule {
        self.rules[u]
    }
}

#[derive(Debug, Clone)]
pub struct TreeTable {
    d_star: usize,
    tree: RootedTree,
    cost: Vec<usize>,
    /// `counts[u][k]`: valid subtrees rooted at `u` with exactly `k` nodes
    /// outside the reference.
    counts: Vec<Vec<BigUint>>,
    /// `prefix[u][i][j]`: ways the first `i` children of `u` use `j` units,
    /// absent optional children included.
    prefix: Vec<Vec<Vec<BigUint>>>,
}

pub fn build_tree_table(tree: &RootedTree, reference: &[usize], d_star: i64) -> Result<TreeTable> {
    let d = check_budget(d_star)?;
    let n = tree.len();
    let mut cost = vec![1usize; n];
    for &u in reference {
        if u >= n {
            return Err(Error::Sampler(format!("reference node {u} out of range")));
        }
        cost[u] = 0;
    }
    if cost[tree.root] != 0 {
        return Err(Error::Sampler(
            "reference subtree must contain the root".into(),
        ));
    }
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![tree.root];
    while let Some(u) = stack.pop() {
        order.push(u);
        stack.extend(&tree.children[u]);
    }
    let mut counts = vec![vec![BigUint::zero(); d + 1]; n];
    let mut prefix = vec![Vec::new(); n];
    for &u in order.iter().rev() {
        let mut acc = vec![BigUint::zero(); d + 1];
        acc[0] = BigUint::one();
        let mut layers = vec![acc.clone()];
        for &v in &tree.children[u] {
            let factor = child_factor(&counts[v], tree.rules[v]);
            acc = convolve(&acc, &factor);
            layers.push(acc.clone());
        }
        for k in 0..=d {
            counts[u][k] = if k >= cost[u] {
                acc[k - cost[u]].clone()
            } else {
                BigUint::zero()
            };
        }
        prefix[u] = layers;
    }
    Ok(TreeTable {
        d_star: d,
        tree: tree.clone(),
        cost,
        counts,
        prefix,
    })
}

fn child_factor(counts: &[BigUint], rule: ChildRule) -> Vec<BigUint> {
    let mut f = counts.to_vec();
    if rule == ChildRule::Optional {
        f[0] += 1u32;
    }
    f
}

fn convolve(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(a.len() - i) {
            out[i + j] += x * y;
        }
    }
    out
}

impl TreeTable {
    pub fn count(&self, u: usize, k: usize) -> &BigUint {
        &self.counts[u][k]
    }

    pub fn partition(&self) -> BigUint {
        self.counts[self.tree.root].iter().sum()
    }

    /// Recomputes every cell by a direct sum over child budget splits.
    pub fn check_recurrence(&self) -> bool {
        (0..self.tree.len()).all(|u| {
            (0..=self.d_star).all(|k| {
                let expected = if k < self.cost[u] {
                    BigUint::zero()
                } else {
                    let factors: Vec<Vec<BigUint>> = self.tree.children[u]
                        .iter()
                        .map(|&v| child_factor(&self.counts[v], self.tree.rules[v]))
                        .collect();
                    split_sum(&factors, k - self.cost[u])
                };
                expected == self.counts[u][k]
            })
        })
    }

    /// Node ids of one valid subtree.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<usize>> {
        let k = pick(rng, &self.counts[self.tree.root])?;
        let mut out = Vec::new();
        let mut stack = vec![(self.tree.root, k)];
        while let Some((u, k)) = stack.pop() {
            out.push(u);
            let mut rest = k - self.cost[u];
            let kids = &self.tree.children[u];
            for i in (0..kids.len()).rev() {
                let v = kids[i];
                let factor = child_factor(&self.counts[v], self.tree.rules[v]);
                let before = &self.prefix[u][i];
                let weights: Vec<BigUint> =
                    (0..=rest).map(|j| &factor[j] * &before[rest - j]).collect();
                let j = pick(rng, &weights)?;
                // the child is absent with weight 1 out of factor[0] when j = 0
                let absent = j == 0
                    && self.tree.rules[v] == ChildRule::Optional
                    && pick(rng, &[BigUint::one(), self.counts[v][0].clone()])? == 0;
                if !absent {
                    stack.push((v, j));
                }
                rest -= j;
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn sample_subtree<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Hyperedge> {
        Ok(Hyperedge::unit(self.sample(rng)?))
    }
}

/// `sum_{j_1 + ... + j_m = k} prod_i f_i(j_i)` by explicit enumeration.
fn split_sum(factors: &[Vec<BigUint>], k: usize) -> BigUint {
    match factors.split_first() {
        None => {
            if k == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            }
        }
        Some((f, rest)) => (0..=k).map(|j| &f[j] * split_sum(rest, k - j)).sum(),
    }
}
