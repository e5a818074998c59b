//! Split-conformal calibration around the chain selector.
//!
//! Stage 1 picks a distance threshold `d*` so that the candidate family
//! `S_{d*}(A) = {B : f(A, B) <= d*}` contains the truth with probability at
//! least `1 - delta`. Stage 2 scores each held-out pair by the smallest
//! compression level whose selected subgraph contains the truth and takes an
//! order statistic of those scores as `tau*`.
//!
//! [`fixed_context_fit`] is the single-context variant: a chain fitted on one
//! half of the samples, the threshold picked on the other half.

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::compressor::{select, tau_threshold};
use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, VertexId, VertexSet, WeightedHypergraph};
use crate::parametric::{nested_chain, NestedChain};
use crate::rational::{self, Rational};
use crate::rng;

/// Nonconformity between a prediction `a` and a truth `b`.
pub trait Distance {
    fn distance(&self, a: &Hyperedge, b: &Hyperedge) -> f64;
}

impl<F: Fn(&Hyperedge, &Hyperedge) -> f64> Distance for F {
    fn distance(&self, a: &Hyperedge, b: &Hyperedge) -> f64 {
        self(a, b)
    }
}

/// Number of vertices in exactly one of the two hyperedges.
#[derive(Debug, Clone, Copy, Default)]
pub struct EdgeSymDiff;

impl Distance for EdgeSymDiff {
    fn distance(&self, a: &Hyperedge, b: &Hyperedge) -> f64 {
        distance_edge_symdiff(a, b) as f64
    }
}

pub fn distance_edge_symdiff(a: &Hyperedge, b: &Hyperedge) -> usize {
    let (a, b) = (a.vertices(), b.vertices());
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

/// One calibration item: prediction `A`, truth `B`, both over the universe
/// `0..n` of context `context`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPair {
    pub context: usize,
    pub n: usize,
    pub prediction: Hyperedge,
    pub truth: Hyperedge,
}

/// Supplies the weighted hyperedge family standing in for `S_{d*}(A)`.
pub trait CandidateFamily {
    fn family(&self, pair: &LabeledPair, d_star: Option<f64>) -> Result<WeightedHypergraph>;
}

impl<F> CandidateFamily for F
where
    F: Fn(&LabeledPair, Option<f64>) -> Result<WeightedHypergraph>,
{
    fn family(&self, pair: &LabeledPair, d_star: Option<f64>) -> Result<WeightedHypergraph> {
        self(pair, d_star)
    }
}

/// Enumerated candidates per context, filtered by distance to the prediction
/// and given uniform mass. Pools larger than `cap` are replaced by `cap`
/// uniform draws with replacement.
#[derive(Debug, Clone)]
pub struct ExplicitCandidates<D> {
    pools: Vec<Vec<Hyperedge>>,
    distance: D,
    cap: Option<usize>,
    seed: u64,
}

impl<D: Distance> ExplicitCandidates<D> {
    pub fn new(pools: Vec<Vec<Hyperedge>>, distance: D) -> Self {
        ExplicitCandidates {
            pools,
            distance,
            cap: None,
            seed: 0,
        }
    }

    pub fn with_cap(mut self, cap: usize, seed: u64) -> Self {
        self.cap = Some(cap);
        self.seed = seed;
        self
    }
}

impl<D: Distance> CandidateFamily for ExplicitCandidates<D> {
    fn family(&self, pair: &LabeledPair, d_star: Option<f64>) -> Result<WeightedHypergraph> {
        let pool = self.pools.get(pair.context).ok_or_else(|| {
            Error::Parameter(format!("no candidates for context {}", pair.context))
        })?;
        let kept: Vec<Hyperedge> = pool
            .iter()
            .filter(|c| d_star.is_none_or(|d| self.distance.distance(&pair.prediction, c) <= d))
            .cloned()
            .collect();
        let kept = match self.cap {
            Some(cap) if kept.len() > cap => {
                let mut r = rng::stream(self.seed, pair.context as u64);
                (0..cap)
                    .map(|_| kept[r.gen_range(0..kept.len())].clone())
                    .collect()
            }
            _ => kept,
        };
        WeightedHypergraph::uniform(pair.n, &kept)
    }
}

/// `ceil(level * (count + 1))`, the 1-based order-statistic index.
pub fn quantile_index(level: Rational, count: usize) -> usize {
    let idx = rational::ceil(&(level * Rational::from_integer(count as i128 + 1)));
    usize::try_from(idx.max(0)).expect("quantile index fits in usize")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage1 {
    /// `None` when the quantile index exceeds the sample count (`d* = +inf`).
    pub d_star: Option<f64>,
    pub index: usize,
    pub scores: Vec<f64>,
}

pub fn calibrate_stage1(d1: &[LabeledPair], delta: Rational, f: &impl Distance) -> Result<Stage1> {
    if d1.is_empty() {
        return Err(Error::Parameter("stage 1 needs at least one pair".into()));
    }
    if delta <= Rational::zero() || delta >= Rational::one() {
        return Err(Error::Parameter(format!(
            "delta = {} not in (0, 1)",
            rational::format(&delta)
        )));
    }
    let scores: Vec<f64> = d1
        .iter()
        .map(|p| f.distance(&p.prediction, &p.truth))
        .collect();
    if scores.iter().any(|s| s.is_nan() || *s < 0.0) {
        return Err(Error::Parameter(
            "distance scores must be non-negative numbers".into(),
        ));
    }
    let mut sorted = scores.clone();
    sorted.sort_by(f64::total_cmp);
    let index = quantile_index(Rational::one() - delta, d1.len());
    let d_star = (index <= sorted.len()).then(|| sorted[index - 1]);
    Ok(Stage1 {
        d_star,
        index,
        scores,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaScore {
    #[serde(with = "rational::text")]
    pub value: Rational,
    /// The stage-1 family missed the truth, forcing `value = 1`.
    pub censored: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage2 {
    pub tau_star: Rational,
    pub index: usize,
    /// The quantile index exceeded `|D2|` (or `D2` was empty) and `tau* = 1`.
    pub overflow: bool,
    pub etas: Vec<EtaScore>,
    pub chain_digests: Vec<Option<String>>,
}

pub fn calibrate_stage2(
    d2: &[LabeledPair],
    d_star: Option<f64>,
    phi: Rational,
    kappa: Rational,
    f: &impl Distance,
    source: &impl CandidateFamily,
) -> Result<Stage2> {
    check_level("phi", phi)?;
    if kappa <= Rational::zero() {
        return Err(Error::Parameter(format!(
            "kappa = {} must be positive",
            rational::format(&kappa)
        )));
    }
    let mut etas = Vec::with_capacity(d2.len());
    let mut chain_digests = Vec::with_capacity(d2.len());
    for pair in d2 {
        let inside = d_star.is_none_or(|d| f.distance(&pair.prediction, &pair.truth) <= d);
        if !inside {
            etas.push(EtaScore {
                value: Rational::one(),
                censored: true,
            });
            chain_digests.push(None);
            continue;
        }
        let h = source.family(pair, d_star)?;
        let chain = nested_chain(&h)?;
        etas.push(EtaScore {
            value: tau_threshold(&chain, kappa, &pair.truth),
            censored: false,
        });
        chain_digests.push(Some(chain.digest()));
    }
    let index = quantile_index(phi, d2.len());
    let mut sorted: Vec<Rational> = etas.iter().map(|e| e.value).collect();
    sorted.sort();
    let (tau_star, overflow) = if index == 0 {
        (Rational::zero(), false)
    } else if index > sorted.len() {
        (Rational::one(), true)
    } else {
        (sorted[index - 1], false)
    };
    Ok(Stage2 {
        tau_star,
        index,
        overflow,
        etas,
        chain_digests,
    })
}

fn check_level(name: &str, level: Rational) -> Result<()> {
    if rational::is_unit_interval(&level) {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "{name} = {} not in [0, 1]",
            rational::format(&level)
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CalibrationConfig {
    pub phi: Rational,
    pub delta: Rational,
    pub kappa: Rational,
}

impl CalibrationConfig {
    /// `delta = phi / 20`, `kappa = 1`.
    pub fn new(phi: Rational) -> Self {
        CalibrationConfig {
            phi,
            delta: phi / Rational::from_integer(20),
            kappa: Rational::one(),
        }
    }
}

/// Everything needed to emit `K_{tau*}` for a new context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationState {
    pub d_star: Option<f64>,
    #[serde(with = "rational::text")]
    pub tau_star: Rational,
    #[serde(with = "rational::text")]
    pub delta: Rational,
    #[serde(with = "rational::text")]
    pub phi: Rational,
    #[serde(with = "rational::text")]
    pub kappa: Rational,
    pub stage1_size: usize,
    pub stage1_index: usize,
    pub stage2_size: usize,
    pub stage2_index: usize,
    pub stage2_overflow: bool,
    pub eta: Vec<EtaScore>,
    pub chain_digests: Vec<Option<String>>,
}

pub fn calibrate(
    d1: &[LabeledPair],
    d2: &[LabeledPair],
    cfg: CalibrationConfig,
    f: &impl Distance,
    source: &impl CandidateFamily,
) -> Result<CalibrationState> {
    let s1 = calibrate_stage1(d1, cfg.delta, f)?;
    let s2 = calibrate_stage2(d2, s1.d_star, cfg.phi, cfg.kappa, f, source)?;
    Ok(CalibrationState {
        d_star: s1.d_star,
        tau_star: s2.tau_star,
        delta: cfg.delta,
        phi: cfg.phi,
        kappa: cfg.kappa,
        stage1_size: d1.len(),
        stage1_index: s1.index,
        stage2_size: d2.len(),
        stage2_index: s2.index,
        stage2_overflow: s2.overflow,
        eta: s2.etas,
        chain_digests: s2.chain_digests,
    })
}

/// `K_{tau*}` on the family built for the new context.
pub fn predict(h: &WeightedHypergraph, state: &CalibrationState) -> Result<VertexSet> {
    let chain = nested_chain(h)?;
    predict_with_chain(&chain, h, state)
}

pub fn predict_with_chain(
    chain: &NestedChain,
    h: &WeightedHypergraph,
    state: &CalibrationState,
) -> Result<VertexSet> {
    Ok(select(chain, h, state.tau_star, state.kappa)?.set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedOptions {
    /// Peel vertices of the last chain increment while coverage holds.
    pub refine: bool,
}

impl Default for FixedOptions {
    fn default() -> Self {
        FixedOptions { refine: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedFit {
    pub set: VertexSet,
    /// Chain index (first-half chain) the set was grown from, if any.
    pub chain_index: Option<usize>,
    pub augmented: usize,
    pub deleted: usize,
    /// Second-half samples the set must contain: `ceil(phi * (m2 + 1))`.
    pub required: usize,
    pub covered: usize,
    pub second_half: usize,
    /// `required > m2`; the whole universe is returned.
    pub overflow: bool,
}

/// Chain and vertex priority fitted on the first half of single-context
/// samples; [`fit`](Self::fit) then picks `K̂` for any level using the second
/// half.
///
/// The first `T / 2` samples (uniform mass) fix a nested chain and a vertex
/// priority (first-half frequency descending, then id ascending). `K̂` is the
/// smallest member of that chain, extended past its end in priority order if
/// needed, containing at least `ceil(phi * (m2 + 1))` of the `m2` second-half
/// samples. With `refine`, vertices of the last chain increment are then
/// dropped lowest-priority first until one more drop would lose coverage.
#[derive(Debug, Clone)]
pub struct FixedContextModel {
    n: usize,
    chain: NestedChain,
    priority: Vec<usize>,
    second: Vec<Hyperedge>,
}

impl FixedContextModel {
    pub fn new(samples: &[Hyperedge], n: usize) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Parameter(format!(
                "fixed-context fit needs T >= 2 samples, got {}",
                samples.len()
            )));
        }
        let (first, second) = samples.split_at(samples.len() / 2);
        Self::from_halves(first, second, n)
    }

    /// Chain on `first`, coverage checks on `second`.
    pub fn from_halves(first: &[Hyperedge], second: &[Hyperedge], n: usize) -> Result<Self> {
        if first.is_empty() || second.is_empty() {
            return Err(Error::Parameter(
                "fixed-context fit needs both halves non-empty".into(),
            ));
        }
        let h1 = WeightedHypergraph::uniform(n, first)?;
        WeightedHypergraph::uniform(n, second)?;
        let mut freq = vec![0usize; n];
        for y in first {
            for &v in y.vertices() {
                freq[v.index()] += 1;
            }
        }
        let mut priority: Vec<usize> = (0..n).collect();
        priority.sort_by(|&a, &b| freq[b].cmp(&freq[a]).then(a.cmp(&b)));
        Ok(FixedContextModel {
            n,
            chain: nested_chain(&h1)?,
            priority,
            second: second.to_vec(),
        })
    }

    pub fn chain(&self) -> &NestedChain {
        &self.chain
    }

    fn covered_by(&self, set: &VertexSet) -> usize {
        self.second.iter().filter(|y| y.is_subset_of(set)).count()
    }

    pub fn fit(&self, phi: Rational, opts: FixedOptions) -> Result<FixedFit> {
        check_level("phi", phi)?;
        let n = self.n;
        let m2 = self.second.len();
        let required = quantile_index(phi, m2);
        let done = |set: VertexSet, chain_index, augmented, deleted, overflow| {
            let covered = self.covered_by(&set);
            Ok(FixedFit {
                set,
                chain_index,
                augmented,
                deleted,
                required,
                covered,
                second_half: m2,
                overflow,
            })
        };
        if required == 0 {
            return done(VertexSet::empty(n), Some(0), 0, 0, false);
        }
        if required > m2 {
            return done(VertexSet::full(n), None, 0, 0, true);
        }

        let chain = &self.chain;
        let Some(i) = (0..chain.len()).find(|&j| self.covered_by(chain.set(j)) >= required) else {
            let mut set = chain.set(chain.last_index()).clone();
            let mut augmented = 0;
            for &v in &self.priority {
                if self.covered_by(&set) >= required {
                    break;
                }
                if !set.contains(VertexId::from(v)) {
                    set.insert(VertexId::from(v));
                    augmented += 1;
                }
            }
            return done(set, None, augmented, 0, false);
        };

        let mut set = chain.set(i).clone();
        let mut deleted = 0;
        if opts.refine && i > 0 {
            let block = chain.set(i).difference(chain.set(i - 1));
            for &v in self
                .priority
                .iter()
                .rev()
                .filter(|&&v| block.contains(VertexId::from(v)))
            {
                let v = VertexId::from(v);
                set.remove(v);
                if self.covered_by(&set) < required {
                    set.insert(v);
                    break;
                }
                deleted += 1;
            }
        }
        done(set, Some(i), 0, deleted, false)
    }
}

/// One-shot [`FixedContextModel`] fit.
pub fn fixed_context_fit(
    samples: &[Hyperedge],
    n: usize,
    phi: Rational,
    opts: FixedOptions,
) -> Result<FixedFit> {
    FixedContextModel::new(samples, n)?.fit(phi, opts)
}
