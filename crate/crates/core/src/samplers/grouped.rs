//! Itineraries choosing one activity per group, deviating from a reference
//! choice in at most `d*` groups.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use super::{check_budget, pick};
use crate::error::{Error, Result};
use crate::hypergraph::Hyperedge;

#[derive(Debug, Clone)]
pub struct GroupedTable {
    d_star: usize,
    groups: Vec<Vec<usize>>,
    /// `reference[r]` is the index within `groups[r]` of the reference activity.
    reference: Vec<usize>,
    /// `counts[r][k]`: completions of groups `r..` with exactly `k` deviations;
    /// `counts[R]` is the empty completion.
    counts: Vec<Vec<BigUint>>,
}

pub fn build_group_table(
    groups: &[Vec<usize>],
    reference: &[usize],
    d_star: i64,
) -> Result<GroupedTable> {
    let d = check_budget(d_star)?;
    if groups.len() != reference.len() {
        return Err(Error::Sampler(
            "one reference activity per group is required".into(),
        ));
    }
    let reference = groups
        .iter()
        .zip(reference)
        .enumerate()
        .map(|(r, (g, a))| {
            g.iter()
                .position(|v| v == a)
                .ok_or_else(|| Error::Sampler(format!("reference activity {a} not in group {r}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let big_r = groups.len();
    let mut counts = vec![vec![BigUint::zero(); d + 1]; big_r + 1];
    counts[big_r][0] = BigUint::one();
    for r in (0..big_r).rev() {
        let others = BigUint::from(groups[r].len() - 1);
        for k in 0..=d {
            let mut c = counts[r + 1][k].clone();
            if k > 0 {
                c += &others * &counts[r + 1][k - 1];
            }
            counts[r][k] = c;
        }
    }
    Ok(GroupedTable {
        d_star: d,
        groups: groups.to_vec(),
        reference,
        counts,
    })
}

impl GroupedTable {
    pub fn count(&self, r: usize, k: usize) -> &BigUint {
        &self.counts[r][k]
    }

    pub fn partition(&self) -> BigUint {
        self.counts[0].iter().sum()
    }

    fn cost(&self, r: usize, i: usize) -> usize {
        usize::from(i != self.reference[r])
    }

    /// Re-evaluates every cell as `sum_{v in G_r} N(r + 1, k - w_v)`.
    pub fn check_recurrence(&self) -> bool {
        let big_r = self.groups.len();
        (0..=big_r).all(|r| {
            (0..=self.d_star).all(|k| {
                let expected: BigUint = if r == big_r {
                    if k == 0 {
                        BigUint::one()
                    } else {
                        BigUint::zero()
                    }
                } else {
                    (0..self.groups[r].len())
                        .filter(|&i| self.cost(r, i) <= k)
                        .map(|i| &self.counts[r + 1][k - self.cost(r, i)])
                        .sum()
                };
                expected == self.counts[r][k]
            })
        })
    }

    /// Chosen activity per group.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<usize>> {
        let mut k = pick(rng, &self.counts[0])?;
        let mut out = Vec::with_capacity(self.groups.len());
        for (r, g) in self.groups.iter().enumerate() {
            let options: Vec<BigUint> = (0..g.len())
                .map(|i| {
                    let c = self.cost(r, i);
                    if c <= k {
                        self.counts[r + 1][k - c].clone()
                    } else {
                        BigUint::zero()
                    }
                })
                .collect();
            let i = pick(rng, &options)?;
            k -= self.cost(r, i);
            out.push(g[i]);
        }
        Ok(out)
    }

    pub fn sample_itinerary<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Hyperedge> {
        Ok(Hyperedge::unit(self.sample(rng)?))
    }
}
