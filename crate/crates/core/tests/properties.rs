mod common;

use confsub_core::baselines::{forward_greedy, reverse_greedy};
use confsub_core::compressor::selection_steps;
use confsub_core::conformal::FixedContextModel;
use confsub_core::io::{self, ChainFile, Instance};
use confsub_core::rational::{int, rat, Rational};
use confsub_core::{
    fractional_solution, nested_chain, select, FixedOptions, Hyperedge, WeightedHypergraph,
};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = WeightedHypergraph> {
    (1usize..9).prop_flat_map(|n| {
        let edge = (
            proptest::collection::btree_set(0..n, 1..=n.min(4)),
            0i128..10,
            1i128..6,
        );
        proptest::collection::vec(edge, 0..12).prop_map(move |edges| {
            let edges = edges
                .into_iter()
                .map(|(vs, p, q)| Hyperedge::new(vs, rat(p, q)))
                .collect();
            WeightedHypergraph::new(n, edges).unwrap()
        })
    })
}

fn level() -> impl Strategy<Value = Rational> {
    (0i128..=20).prop_map(|k| rat(k, 20))
}

fn samples(n: usize) -> impl Strategy<Value = Vec<Hyperedge>> {
    proptest::collection::vec(
        proptest::collection::btree_set(0..n, 1..=n.min(4)).prop_map(Hyperedge::unit),
        2..30,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn chain_is_nested_with_increasing_mass(h in instance()) {
        let chain = nested_chain(&h).unwrap();
        for j in 1..chain.len() {
            prop_assert!(chain.set(j - 1).is_subset(chain.set(j)));
            prop_assert!(chain.set(j - 1) != chain.set(j));
            prop_assert!(chain.induced(j - 1) < chain.induced(j));
        }
        prop_assert!(chain.breakpoints().windows(2).all(|w| w[0] < w[1]));
        for j in 0..chain.len() {
            prop_assert_eq!(chain.induced(j), h.induced_weight(chain.set(j)));
        }
    }

    #[test]
    fn selection_is_monotone_in_tau(h in instance(), a in level(), b in level(), k in 1i128..5) {
        let chain = nested_chain(&h).unwrap();
        let kappa = rat(k, 2);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let s_lo = select(&chain, &h, lo, kappa).unwrap();
        let s_hi = select(&chain, &h, hi, kappa).unwrap();
        prop_assert!(s_lo.set.is_subset(&s_hi.set));
        prop_assert!(s_lo.index <= s_hi.index);
        prop_assert!(s_hi.within_budget(h.total_weight()));
    }

    #[test]
    fn rounding_contains_selection(h in instance(), tau in level(), k in 1i128..5) {
        let chain = nested_chain(&h).unwrap();
        let kappa = rat(k, 2);
        let fs = fractional_solution(&chain, tau).unwrap();
        let rounded = fs.round(kappa);
        prop_assert!(fs.lower_set().is_subset(&rounded));
        prop_assert!(rounded.is_subset(fs.upper_set()));
        prop_assert!(select(&chain, &h, tau, kappa).unwrap().set.is_subset(&rounded));
        let steps = selection_steps(&chain, kappa);
        prop_assert!(steps.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn fixed_fit_is_monotone_in_phi(
        ys in samples(7),
        a in level(),
        b in level(),
        refine in any::<bool>(),
    ) {
        let model = FixedContextModel::new(&ys, 7).unwrap();
        let opts = FixedOptions { refine };
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let f_lo = model.fit(lo, opts).unwrap();
        let f_hi = model.fit(hi, opts).unwrap();
        prop_assert!(f_lo.required <= f_hi.required);
        prop_assert!(f_hi.covered >= f_hi.required || f_hi.overflow);
        if let (Some(i), Some(j)) = (f_lo.chain_index, f_hi.chain_index) {
            prop_assert!(i <= j);
        }
        if !refine {
            prop_assert!(f_lo.set.is_subset(&f_hi.set));
        }
    }

    #[test]
    fn greedy_traces_are_monotone(ys in samples(8), phi in level()) {
        let eval = WeightedHypergraph::uniform(8, &ys).unwrap();
        let fwd = forward_greedy(&ys, &eval, &[phi]);
        prop_assert!(fwd.trace.coverage.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(eval.induced_weight(&fwd.picks[0].set) / eval.total_weight() >= phi);
        let rev = reverse_greedy(&ys, &eval, &[phi]);
        prop_assert!(rev.trace.coverage.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(eval.induced_weight(&rev.picks[0].set) / eval.total_weight() >= phi);
    }

    #[test]
    fn instance_and_chain_files_round_trip(h in instance()) {
        let inst = Instance::new(h.clone());
        let text = io::to_json(&inst.to_file());
        let back = Instance::from_file(io::from_json(&text, "mem").unwrap()).unwrap();
        prop_assert_eq!(&back.hypergraph, &h);
        prop_assert_eq!(io::to_json(&back.to_file()), text);

        let chain = nested_chain(&h).unwrap();
        let text = io::to_json(&ChainFile::from_chain(&chain));
        let file: ChainFile = io::from_json(&text, "mem").unwrap();
        prop_assert_eq!(file.to_chain().unwrap(), chain);
    }

    #[test]
    fn rational_text_round_trips(p in -1000i128..1000, q in 1i128..1000) {
        let r = rat(p, q);
        prop_assert_eq!(confsub_core::rational::parse(&confsub_core::rational::format(&r)).unwrap(), r);
        prop_assert!(int(0) <= r * r);
    }
}
