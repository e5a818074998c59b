//! Brute-force oracles and instance generators shared by the integration
//! tests. Nothing here calls into the flow or DP code under test.

#![allow(dead_code)]

use std::collections::BTreeMap;

use confsub_core::rational::{int, rat, Rational};
use confsub_core::samplers::{ChildRule, RoadGraph};
use confsub_core::{Hyperedge, VertexSet, WeightedHypergraph};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random instance with `1..=n_max` vertices and `0..=m_max` hyperedges of
/// size at most 4; weights `p/q` with `p in 0..=9`, `q in 1..=5` (zero rarely).
pub fn random_instance(r: &mut impl Rng, n_max: usize, m_max: usize) -> WeightedHypergraph {
    let n = r.gen_range(1..=n_max);
    let m = r.gen_range(0..=m_max);
    let edges = (0..m)
        .map(|_| {
            let size = r.gen_range(1..=n.min(4));
            let mut vs: Vec<usize> = (0..n).collect();
            for i in 0..size {
                let j = r.gen_range(i..n);
                vs.swap(i, j);
            }
            let p = if r.gen_bool(0.05) {
                0
            } else {
                r.gen_range(1..=9)
            };
            Hyperedge::new(vs[..size].iter().copied(), rat(p, r.gen_range(1..=5)))
        })
        .collect();
    WeightedHypergraph::new(n, edges).unwrap()
}

/// Hyperedges as bit masks, for fast subset enumeration.
pub struct Masks {
    pub n: usize,
    pub edges: Vec<(u32, Rational)>,
}

impl Masks {
    pub fn new(h: &WeightedHypergraph) -> Self {
        assert!(h.n() <= 20);
        Masks {
            n: h.n(),
            edges: h
                .edges()
                .iter()
                .map(|e| {
                    let m = e.vertices().iter().fold(0u32, |m, v| m | 1 << v.index());
                    (m, e.weight())
                })
                .collect(),
        }
    }

    pub fn induced(&self, set: u32) -> Rational {
        self.edges
            .iter()
            .filter(|(m, _)| m & !set == 0)
            .fold(Rational::zero(), |a, (_, w)| a + w)
    }

    pub fn total(&self) -> Rational {
        self.edges.iter().fold(Rational::zero(), |a, (_, w)| a + w)
    }

    pub fn subsets(&self) -> impl Iterator<Item = u32> {
        0..(1u32 << self.n)
    }

    pub fn to_set(&self, mask: u32) -> VertexSet {
        VertexSet::from_ids(self.n, (0..self.n).filter(|&v| mask >> v & 1 == 1))
    }
}

/// Inclusion-minimal minimizer of `|K| - lambda * e(K)` by enumeration.
/// Panics if the minimizers have no unique inclusion-minimal member.
pub fn brute_minimal_minimizer(h: &WeightedHypergraph, lambda: Rational) -> VertexSet {
    let m = Masks::new(h);
    let phi = |s: u32| int(s.count_ones() as i128) - lambda * m.induced(s);
    let best = m.subsets().map(phi).min().unwrap();
    let minimizers: Vec<u32> = m.subsets().filter(|&s| phi(s) == best).collect();
    let meet = minimizers.iter().fold(u32::MAX, |a, &s| a & s) & ((1u32 << m.n) - 1);
    assert!(
        minimizers.contains(&meet),
        "minimizers not closed under meet"
    );
    m.to_set(meet)
}

/// Smallest `|O|` with `e(O) >= tau * W`, and every optimal `O`.
pub fn brute_optimum(h: &WeightedHypergraph, tau: Rational) -> (usize, Vec<VertexSet>) {
    let m = Masks::new(h);
    let target = tau * m.total();
    let feasible: Vec<u32> = m.subsets().filter(|&s| m.induced(s) >= target).collect();
    let r = feasible.iter().map(|s| s.count_ones()).min().unwrap() as usize;
    let opts = feasible
        .into_iter()
        .filter(|s| s.count_ones() as usize == r)
        .map(|s| m.to_set(s))
        .collect();
    (r, opts)
}

/// Example instance: paths `{0,1}`, `{2,3}` with mass 0.3 and `{4,5,6}` with
/// mass 0.4.
pub fn three_paths() -> WeightedHypergraph {
    WeightedHypergraph::new(
        7,
        vec![
            Hyperedge::new([0, 1], rat(3, 10)),
            Hyperedge::new([2, 3], rat(3, 10)),
            Hyperedge::new([4, 5, 6], rat(4, 10)),
        ],
    )
    .unwrap()
}

/// Every s-t walk with at most `d` non-reference steps, keyed by its edge
/// sequence, with its cost. Reference edges go forward only at cost 0; the
/// rest go either way at cost 1; the walk stops on reaching `t`.
pub fn enumerate_walks(
    g: &RoadGraph,
    reference: &[usize],
    d: usize,
) -> BTreeMap<Vec<usize>, usize> {
    let mut moves: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); g.nodes];
    let mut used_on_path = vec![false; g.edges.len()];
    for w in reference.windows(2) {
        let e = g
            .edges
            .iter()
            .position(|&(a, b)| (a, b) == (w[0], w[1]) || (a, b) == (w[1], w[0]))
            .unwrap();
        used_on_path[e] = true;
        moves[w[0]].push((w[1], e, 0));
    }
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        if !used_on_path[e] {
            moves[a].push((b, e, 1));
            moves[b].push((a, e, 1));
        }
    }
    let t = *reference.last().unwrap();
    let mut out = BTreeMap::new();
    let mut stack = vec![(reference[0], Vec::<usize>::new(), 0usize)];
    while let Some((u, edges, cost)) = stack.pop() {
        if u == t {
            out.insert(edges, cost);
            continue;
        }
        for &(v, e, c) in &moves[u] {
            if cost + c <= d {
                let mut next = edges.clone();
                next.push(e);
                stack.push((v, next, cost + c));
            }
        }
    }
    out
}

/// Every choice of one activity per group with at most `d` deviations from
/// `reference`, with its deviation count.
pub fn enumerate_itineraries(
    groups: &[Vec<usize>],
    reference: &[usize],
    d: usize,
) -> BTreeMap<Vec<usize>, usize> {
    let mut out = BTreeMap::new();
    let mut partial = vec![(Vec::new(), 0usize)];
    for (g, &a) in groups.iter().zip(reference) {
        let mut next = Vec::new();
        for (choice, dev) in &partial {
            for &v in g {
                let dev = dev + usize::from(v != a);
                if dev <= d {
                    let mut c: Vec<usize> = choice.clone();
                    c.push(v);
                    next.push((c, dev));
                }
            }
        }
        partial = next;
    }
    out.extend(partial);
    out
}

/// Every node set containing the root, closed under parents, that includes
/// each mandatory child of an included node and has at most `d` nodes
/// outside `reference`.
pub fn enumerate_subtrees(
    parent: &[Option<usize>],
    rules: &[ChildRule],
    reference: &[usize],
    d: usize,
) -> BTreeMap<Vec<usize>, usize> {
    let n = parent.len();
    assert!(n <= 20);
    let mut out = BTreeMap::new();
    for mask in 0u32..(1 << n) {
        let has = |u: usize| mask >> u & 1 == 1;
        let ok = (0..n).all(|u| match parent[u] {
            None => has(u),
            Some(p) => {
                (!has(u) || has(p)) && !(has(p) && !has(u) && rules[u] == ChildRule::Mandatory)
            }
        });
        if !ok {
            continue;
        }
        let nodes: Vec<usize> = (0..n).filter(|&u| has(u)).collect();
        let cost = nodes.iter().filter(|u| !reference.contains(u)).count();
        if cost <= d {
            out.insert(nodes, cost);
        }
    }
    out
}

/// Pearson statistic and its upper-tail p-value against a uniform law over
/// `support` categories.
pub fn chi_square_uniform(
    counts: &BTreeMap<Vec<usize>, u64>,
    support: usize,
    draws: u64,
) -> (f64, f64) {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    assert!(support >= 2);
    let expected = draws as f64 / support as f64;
    let seen: f64 = counts
        .values()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    let unseen = (support - counts.len()) as f64 * expected;
    let stat = seen + unseen;
    let p = 1.0 - ChiSquared::new((support - 1) as f64).unwrap().cdf(stat);
    (stat, p)
}

pub struct WalkCase {
    pub graph: RoadGraph,
    pub reference: Vec<usize>,
    pub d: usize,
}

pub fn walk_cases() -> Vec<WalkCase> {
    let case = |nodes, edges: &[(usize, usize)], reference: &[usize], d| WalkCase {
        graph: RoadGraph::new(nodes, edges.to_vec()).unwrap(),
        reference: reference.to_vec(),
        d,
    };
    let ladder = [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)];
    vec![
        case(3, &[(0, 1), (0, 2), (2, 1)], &[0, 1], 2),
        case(3, &[(0, 1), (0, 2), (2, 1)], &[0, 1], 4),
        case(6, &ladder, &[0, 1, 2], 2),
        case(6, &ladder, &[0, 1, 2], 4),
        case(3, &[(0, 1), (1, 2), (0, 2), (2, 0)], &[0, 1, 2], 3),
        case(4, &[(0, 1), (1, 2), (2, 3), (1, 3)], &[0, 1, 2, 3], 1),
    ]
}

pub struct GroupCase {
    pub groups: Vec<Vec<usize>>,
    pub reference: Vec<usize>,
    pub d: usize,
}

pub fn group_cases() -> Vec<GroupCase> {
    let equal = |r: usize, s: usize, d| GroupCase {
        groups: (0..r).map(|g| (g * s..(g + 1) * s).collect()).collect(),
        reference: (0..r).map(|g| g * s).collect(),
        d,
    };
    vec![
        equal(2, 2, 1),
        equal(4, 3, 2),
        equal(5, 3, 3),
        GroupCase {
            groups: vec![vec![0, 1, 2], vec![3, 4], vec![5, 6, 7, 8]],
            reference: vec![1, 4, 8],
            d: 2,
        },
    ]
}

pub struct TreeCase {
    pub parent: Vec<Option<usize>>,
    pub rules: Vec<ChildRule>,
    pub reference: Vec<usize>,
    pub d: usize,
}

pub fn tree_cases() -> Vec<TreeCase> {
    let optional = |n| vec![ChildRule::Optional; n];
    let star = vec![None, Some(0), Some(0), Some(0)];
    let binary = vec![None, Some(0), Some(0), Some(1), Some(1), Some(2), Some(2)];
    let mut mixed_rules = optional(7);
    mixed_rules[3] = ChildRule::Mandatory;
    mixed_rules[6] = ChildRule::Mandatory;
    vec![
        TreeCase {
            parent: star.clone(),
            rules: optional(4),
            reference: vec![0],
            d: 1,
        },
        TreeCase {
            parent: star,
            rules: optional(4),
            reference: vec![0],
            d: 3,
        },
        TreeCase {
            parent: vec![None, Some(0), Some(1), Some(2)],
            rules: optional(4),
            reference: vec![0],
            d: 3,
        },
        TreeCase {
            parent: binary.clone(),
            rules: optional(7),
            reference: vec![0, 1],
            d: 3,
        },
        TreeCase {
            parent: binary,
            rules: mixed_rules,
            reference: vec![0, 2],
            d: 4,
        },
    ]
}

/// Fraction of `reps` runs in which a fresh trip sample lands inside the
/// fixed-context set fitted on `t` earlier samples from the same generator.
pub fn fixed_context_coverage(phi: Rational, t: usize, reps: u64, base: u64) -> f64 {
    use confsub_core::conformal::FixedContextModel;
    use confsub_core::experiments::{gen_trip_samples, TripPlanConfig};
    use confsub_core::FixedOptions;
    let mut hits = 0u64;
    for rep in 0..reps {
        let cfg = TripPlanConfig {
            train: t,
            test: 1,
            seed: base + rep,
            ..Default::default()
        };
        let data = gen_trip_samples(&cfg).unwrap();
        let model = FixedContextModel::new(&data.train, data.n).unwrap();
        let fit = model.fit(phi, FixedOptions::default()).unwrap();
        hits += u64::from(data.test[0].is_subset_of(&fit.set));
    }
    hits as f64 / reps as f64
}

/// `phi - 3 sigma` for a Bernoulli(phi) mean over `reps` draws.
pub fn coverage_floor(phi: f64, reps: u64) -> f64 {
    phi - 3.0 * (phi * (1.0 - phi) / reps as f64).sqrt()
}
