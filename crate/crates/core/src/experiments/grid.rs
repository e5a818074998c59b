//! Synthetic routing on a square grid with one long bypass.
//!
//! Hypergraph vertices are road segments: the grid's horizontal segments
//! (row-major), then its vertical segments, then the bypass segments. Most
//! routes are shortest monotone paths from the top-left to the bottom-right
//! corner under fresh random segment costs; the rest take the bypass.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::Hyperedge;
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct GridRoutingConfig {
    /// Nodes per side.
    pub side: usize,
    pub bypass_len: usize,
    pub bypass_share: f64,
    pub weight_lo: f64,
    pub weight_hi: f64,
    pub train: usize,
    pub test: usize,
    pub seed: u64,
}

impl Default for GridRoutingConfig {
    fn default() -> Self {
        GridRoutingConfig {
            side: 6,
            bypass_len: 20,
            bypass_share: 0.15,
            weight_lo: 0.1,
            weight_hi: 2.0,
            train: 50,
            test: 50,
            seed: 0,
        }
    }
}

impl GridRoutingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.side < 2 {
            return Err(Error::Parameter("grid side must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.bypass_share) {
            return Err(Error::Parameter("bypass share must lie in [0, 1]".into()));
        }
        if !(self.weight_lo > 0.0 && self.weight_lo <= self.weight_hi) {
            return Err(Error::Parameter(
                "segment cost range must satisfy 0 < lo <= hi".into(),
            ));
        }
        Ok(())
    }

    pub fn grid_segments(&self) -> usize {
        2 * self.side * (self.side - 1)
    }

    pub fn segments(&self) -> usize {
        self.grid_segments() + self.bypass_len
    }

    fn right(&self, row: usize, col: usize) -> usize {
        row * (self.side - 1) + col
    }

    fn down(&self, row: usize, col: usize) -> usize {
        self.side * (self.side - 1) + row * self.side + col
    }

    pub fn bypass(&self) -> Hyperedge {
        let start = self.grid_segments();
        Hyperedge::unit(start..start + self.bypass_len)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutingData {
    pub n: usize,
    pub train: Vec<Hyperedge>,
    pub test: Vec<Hyperedge>,
    pub train_bypass: usize,
    pub test_bypass: usize,
}

/// Cheapest right/down path under `cost(segment)`; on exact ties the move
/// with the smaller segment id wins.
pub fn monotone_shortest_path(cfg: &GridRoutingConfig, cost: &[f64]) -> Vec<usize> {
    let s = cfg.side;
    // best[r][c]: cost to reach the bottom-right corner from (r, c)
    let mut best = vec![vec![f64::INFINITY; s]; s];
    let mut step = vec![vec![None; s]; s];
    best[s - 1][s - 1] = 0.0;
    for r in (0..s).rev() {
        for c in (0..s).rev() {
            if r == s - 1 && c == s - 1 {
                continue;
            }
            let mut options = Vec::with_capacity(2);
            if c + 1 < s {
                let e = cfg.right(r, c);
                options.push((cost[e] + best[r][c + 1], e, (r, c + 1)));
            }
            if r + 1 < s {
                let e = cfg.down(r, c);
                options.push((cost[e] + best[r + 1][c], e, (r + 1, c)));
            }
            let &(d, e, next) = options
                .iter()
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
                .expect("at least one move");
            best[r][c] = d;
            step[r][c] = Some((e, next));
        }
    }
    let mut path = Vec::with_capacity(2 * (s - 1));
    let mut at = (0, 0);
    while let Some((e, next)) = step[at.0][at.1] {
        path.push(e);
        at = next;
    }
    path
}

fn route(cfg: &GridRoutingConfig, index: u64) -> (Hyperedge, bool) {
    let mut r = rng::stream(cfg.seed, index);
    if r.gen_bool(cfg.bypass_share) {
        return (cfg.bypass(), true);
    }
    let cost: Vec<f64> = (0..cfg.grid_segments())
        .map(|_| r.gen_range(cfg.weight_lo..=cfg.weight_hi))
        .collect();
    (Hyperedge::unit(monotone_shortest_path(cfg, &cost)), false)
}

/// Train routes use streams `0..train`, test routes `train..train + test`.
pub fn gen_grid_routes(cfg: &GridRoutingConfig) -> Result<RoutingData> {
    cfg.validate()?;
    let draw = |range: std::ops::Range<usize>| {
        let routes: Vec<(Hyperedge, bool)> = range.map(|i| route(cfg, i as u64)).collect();
        let bypass = routes.iter().filter(|r| r.1).count();
        (routes.into_iter().map(|r| r.0).collect::<Vec<_>>(), bypass)
    };
    let (train, train_bypass) = draw(0..cfg.train);
    let (test, test_bypass) = draw(cfg.train..cfg.train + cfg.test);
    Ok(RoutingData {
        n: cfg.segments(),
        train,
        test,
        train_bypass,
        test_bypass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_layout() {
        let cfg = GridRoutingConfig::default();
        assert_eq!(cfg.grid_segments(), 60);
        assert_eq!(cfg.segments(), 80);
        assert_eq!(cfg.bypass().len(), 20);
    }

    #[test]
    fn routes_have_ten_segments() {
        let data = gen_grid_routes(&GridRoutingConfig::default()).unwrap();
        for r in data.train.iter().chain(&data.test) {
            assert!(
                r.len() == 10 || r.len() == 20,
                "route of length {}",
                r.len()
            );
        }
        assert_eq!(
            data.train.iter().filter(|r| r.len() == 20).count(),
            data.train_bypass
        );
    }

    #[test]
    fn full_bypass_share() {
        let cfg = GridRoutingConfig {
            bypass_share: 1.0,
            ..Default::default()
        };
        let data = gen_grid_routes(&cfg).unwrap();
        assert!(data
            .train
            .iter()
            .chain(&data.test)
            .all(|r| *r == cfg.bypass()));
    }

    #[test]
    fn uniform_costs_pick_lowest_ids() {
        let cfg = GridRoutingConfig {
            side: 3,
            ..Default::default()
        };
        let path = monotone_shortest_path(&cfg, &vec![1.0; cfg.grid_segments()]);
        // right, right along row 0, then down the last column
        assert_eq!(path, vec![0, 1, 8, 11]);
    }

    #[test]
    fn seed_determinism() {
        let cfg = GridRoutingConfig {
            seed: 42,
            ..Default::default()
        };
        assert_eq!(
            gen_grid_routes(&cfg).unwrap(),
            gen_grid_routes(&cfg).unwrap()
        );
        let other = GridRoutingConfig {
            seed: 43,
            ..Default::default()
        };
        assert_ne!(
            gen_grid_routes(&cfg).unwrap().train,
            gen_grid_routes(&other).unwrap().train
        );
    }
}
