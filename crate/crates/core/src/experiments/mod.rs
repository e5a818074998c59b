//! Synthetic experiment generators and the method comparison harness.

pub mod fixtures;
pub mod grid;
pub mod trip;

use std::fmt;

use num_traits::{One, Zero};

use crate::baselines::{forward_greedy, reverse_greedy};
use crate::compressor::select;
use crate::conformal::{FixedContextModel, FixedOptions};
use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, VertexSet, WeightedHypergraph};
use crate::parametric::nested_chain;
use crate::rational::{self, Rational};

pub use grid::{gen_grid_routes, GridRoutingConfig, RoutingData};
pub use trip::{gen_trip_samples, TripData, TripPlanConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Chain,
    ForwardGreedy,
    ReverseGreedy,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Chain, Method::ForwardGreedy, Method::ReverseGreedy];

    pub fn name(self) -> &'static str {
        match self {
            Method::Chain => "chain",
            Method::ForwardGreedy => "forward_greedy",
            Method::ReverseGreedy => "reverse_greedy",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown method {s:?}")))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One measurement: a method's set for one level on one seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub method: Method,
    pub phi: Rational,
    pub size: usize,
    pub coverage: f64,
    pub seed: u64,
    /// Size relative to a planted reference set, when there is one.
    pub ratio: Option<f64>,
}

/// `0, step, 2 step, ..., 1`.
pub fn phi_grid(step: Rational) -> Vec<Rational> {
    assert!(step > Rational::zero());
    let mut out = Vec::new();
    let mut phi = Rational::zero();
    while phi <= Rational::one() {
        out.push(phi);
        phi += step;
    }
    out
}

fn test_coverage(test: &[Hyperedge], set: &VertexSet) -> f64 {
    if test.is_empty() {
        return 1.0;
    }
    test.iter().filter(|y| y.is_subset_of(set)).count() as f64 / test.len() as f64
}

/// Fits every method on `train` for each level and scores it on `test`.
///
/// The chain method is the fixed-context procedure with `train` as the first
/// half and `test` as the second; the greedy baselines rank by training
/// frequency and stop on test coverage.
pub fn run_comparison(
    n: usize,
    train: &[Hyperedge],
    test: &[Hyperedge],
    phis: &[Rational],
    methods: &[Method],
    opts: FixedOptions,
    seed: u64,
) -> Result<Vec<Row>> {
    let eval = WeightedHypergraph::uniform(n, test)?;
    let mut rows = Vec::new();
    for &method in methods {
        let sets: Vec<VertexSet> = match method {
            Method::Chain => {
                let model = FixedContextModel::from_halves(train, test, n)?;
                phis.iter()
                    .map(|&phi| Ok(model.fit(phi, opts)?.set))
                    .collect::<Result<_>>()?
            }
            Method::ForwardGreedy => forward_greedy(train, &eval, phis)
                .picks
                .into_iter()
                .map(|p| p.set)
                .collect(),
            Method::ReverseGreedy => reverse_greedy(train, &eval, phis)
                .picks
                .into_iter()
                .map(|p| p.set)
                .collect(),
        };
        for (&phi, set) in phis.iter().zip(&sets) {
            rows.push(Row {
                method,
                phi,
                size: set.len(),
                coverage: test_coverage(test, set),
                seed,
                ratio: None,
            });
        }
    }
    Ok(rows)
}

/// Deterministic order: method, level, seed.
pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by_key(|r| (r.method, r.phi, r.seed));
}

/// Grid routing: the chain method runs the full fixed-context procedure,
/// block deletion included.
pub fn run_grid(
    cfg: &GridRoutingConfig,
    seeds: &[u64],
    phis: &[Rational],
    methods: &[Method],
) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for &seed in seeds {
        let data = gen_grid_routes(&GridRoutingConfig {
            seed,
            ..cfg.clone()
        })?;
        rows.extend(run_comparison(
            data.n,
            &data.train,
            &data.test,
            phis,
            methods,
            FixedOptions { refine: true },
            seed,
        )?);
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// Trip planning: the chain method reports the smallest chain member that
/// reaches the level on `test`, without block deletion.
pub fn run_trip(
    cfg: &TripPlanConfig,
    seeds: &[u64],
    phis: &[Rational],
    methods: &[Method],
) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for &seed in seeds {
        let data = gen_trip_samples(&TripPlanConfig {
            seed,
            ..cfg.clone()
        })?;
        let core = data.core_size() as f64;
        for mut row in run_comparison(
            data.n,
            &data.train,
            &data.test,
            phis,
            methods,
            FixedOptions { refine: false },
            seed,
        )? {
            row.ratio = Some(row.size as f64 / core);
            rows.push(row);
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// One `a`-vertex hyperedge of mass `epsilon` and `b` singletons of mass
/// `(1 - epsilon) / b` each (vertices `a..a + b`).
pub fn gen_adversarial(a: usize, b: usize, epsilon: Rational) -> Result<WeightedHypergraph> {
    if !(a > b && b >= 1) {
        return Err(Error::Parameter(format!(
            "need a > b >= 1, got a = {a}, b = {b}"
        )));
    }
    if !(epsilon > Rational::zero() && epsilon < Rational::one()) {
        return Err(Error::Parameter(format!(
            "epsilon = {} not in (0, 1)",
            rational::format(&epsilon)
        )));
    }
    let single = (Rational::one() - epsilon) / Rational::from_integer(b as i128);
    let mut edges = vec![Hyperedge::new(0..a, epsilon)];
    edges.extend((a..a + b).map(|v| Hyperedge::new([v], single)));
    WeightedHypergraph::new(a + b, edges)
}

/// Chain selection at `tau = 1 - epsilon` against both greedy baselines,
/// training and scoring on the instance itself (each hyperedge counted once
/// for frequencies, mass-weighted for coverage).
pub fn run_adversarial(a: usize, b: usize, epsilon: Rational, kappa: Rational) -> Result<Vec<Row>> {
    let h = gen_adversarial(a, b, epsilon)?;
    let tau = Rational::one() - epsilon;
    let seed = 0;
    let coverage = |set: &VertexSet| rational::to_f64(&(h.induced_weight(set) / h.total_weight()));
    let chain = nested_chain(&h)?;
    let picked = select(&chain, &h, tau, kappa)?.set;
    let mut rows = vec![Row {
        method: Method::Chain,
        phi: tau,
        size: picked.len(),
        coverage: coverage(&picked),
        seed,
        ratio: None,
    }];
    let train = h.edges().to_vec();
    for (method, out) in [
        (Method::ForwardGreedy, forward_greedy(&train, &h, &[tau])),
        (Method::ReverseGreedy, reverse_greedy(&train, &h, &[tau])),
    ] {
        let set = &out.picks[0].set;
        rows.push(Row {
            method,
            phi: tau,
            size: set.len(),
            coverage: coverage(set),
            seed,
            ratio: None,
        });
    }
    Ok(rows)
}

/// Per-run invariants: coverage in `[0, 1]` and, per method and seed, sizes
/// non-decreasing in the level. Returns a description of each violation.
pub fn check_rows(rows: &[Row]) -> Vec<String> {
    let mut problems = Vec::new();
    for r in rows {
        if !(0.0..=1.0).contains(&r.coverage) {
            problems.push(format!(
                "{} seed {}: coverage {} outside [0, 1]",
                r.method, r.seed, r.coverage
            ));
        }
    }
    let mut sorted: Vec<&Row> = rows.iter().collect();
    sorted.sort_by_key(|r| (r.method, r.seed, r.phi));
    for w in sorted.windows(2) {
        let (x, y) = (w[0], w[1]);
        if x.method == y.method && x.seed == y.seed && y.size < x.size {
            problems.push(format!(
                "{} seed {}: size drops from {} to {} between levels {} and {}",
                x.method,
                x.seed,
                x.size,
                y.size,
                rational::to_f64(&x.phi),
                rational::to_f64(&y.phi)
            ));
        }
    }
    problems
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub method: Method,
    pub phi: Rational,
    pub runs: usize,
    pub mean_size: f64,
    pub median_size: f64,
    pub mean_coverage: f64,
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        (values[m - 1] + values[m]) / 2.0
    }
}

/// Mean and median over seeds for every `(method, level)`.
pub fn aggregate(rows: &[Row]) -> Vec<Summary> {
    let mut keys: Vec<(Method, Rational)> = rows.iter().map(|r| (r.method, r.phi)).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(method, phi)| {
            let group: Vec<&Row> = rows
                .iter()
                .filter(|r| r.method == method && r.phi == phi)
                .collect();
            let count = group.len() as f64;
            let mut sizes: Vec<f64> = group.iter().map(|r| r.size as f64).collect();
            Summary {
                method,
                phi,
                runs: group.len(),
                mean_size: sizes.iter().sum::<f64>() / count,
                median_size: median(&mut sizes),
                mean_coverage: group.iter().map(|r| r.coverage).sum::<f64>() / count,
            }
        })
        .collect()
}
