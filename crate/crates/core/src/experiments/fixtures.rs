//! Small hand-built instances.

use crate::hypergraph::{Hyperedge, WeightedHypergraph};
use crate::rational::rat;

/// Three disjoint s-t paths over 7 road segments: `{0,1}` and `{2,3}` with
/// mass 3/10 each, `{4,5,6}` with mass 4/10.
pub fn three_paths() -> WeightedHypergraph {
    WeightedHypergraph::new(
        7,
        vec![
            Hyperedge::new([0, 1], rat(3, 10)),
            Hyperedge::new([2, 3], rat(3, 10)),
            Hyperedge::new([4, 5, 6], rat(4, 10)),
        ],
    )
    .expect("fixture is valid")
}
