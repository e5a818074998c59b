//! Trip planning with a planted core.
//!
//! There are `R` activity types with `per_type` activities each; activity
//! `i` of type `r` is vertex `r * per_type + i`. Each type has a core of
//! `ceil(alpha * per_type)` activities. An itinerary picks one activity per
//! type, from the core with probability `p = tau^(1/R)` and from the rest
//! otherwise, uniformly within either part, so a whole itinerary lies in the
//! core with probability `tau`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, VertexSet};
use crate::rational::{self, Rational};
use crate::rng;

/// Stream offset for the core draw, far from the sample streams.
const CORE_STREAM: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq)]
pub struct TripPlanConfig {
    pub types: usize,
    pub per_type: usize,
    pub alpha: Rational,
    pub tau: f64,
    pub train: usize,
    pub test: usize,
    pub seed: u64,
}

impl Default for TripPlanConfig {
    fn default() -> Self {
        TripPlanConfig {
            types: 5,
            per_type: 10,
            alpha: rational::rat(2, 10),
            tau: 0.8,
            train: 100,
            test: 100,
            seed: 0,
        }
    }
}

impl TripPlanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.types == 0 || self.per_type == 0 {
            return Err(Error::Parameter(
                "need at least one type and one activity per type".into(),
            ));
        }
        if !(self.alpha > Rational::from_integer(0) && self.alpha <= Rational::from_integer(1)) {
            return Err(Error::Parameter("core density must lie in (0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::Parameter("core mass must lie in [0, 1]".into()));
        }
        Ok(())
    }

    pub fn core_per_type(&self) -> usize {
        rational::ceil(&(self.alpha * Rational::from_integer(self.per_type as i128))) as usize
    }

    /// Per-type core probability `tau^(1/R)`.
    pub fn p(&self) -> f64 {
        self.tau.powf(1.0 / self.types as f64)
    }

    pub fn n(&self) -> usize {
        self.types * self.per_type
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TripData {
    pub n: usize,
    pub core: VertexSet,
    pub train: Vec<Hyperedge>,
    pub test: Vec<Hyperedge>,
    /// Some non-core draw had to fall back to the core (core = whole type).
    pub degenerate: bool,
}

impl TripData {
    pub fn core_size(&self) -> usize {
        self.core.len()
    }

    pub fn pure_core(samples: &[Hyperedge], core: &VertexSet) -> usize {
        samples.iter().filter(|s| s.is_subset_of(core)).count()
    }
}

pub fn gen_trip_samples(cfg: &TripPlanConfig) -> Result<TripData> {
    cfg.validate()?;
    let k = cfg.core_per_type();
    let mut core_ids = Vec::with_capacity(cfg.types * k);
    let mut rest_ids = Vec::with_capacity(cfg.types);
    for r in 0..cfg.types {
        let mut ids: Vec<usize> = (r * cfg.per_type..(r + 1) * cfg.per_type).collect();
        ids.shuffle(&mut rng::stream(cfg.seed, CORE_STREAM + r as u64));
        let (core, rest) = ids.split_at(k);
        core_ids.push(core.to_vec());
        rest_ids.push(rest.to_vec());
    }
    let core = VertexSet::from_ids(cfg.n(), core_ids.iter().flatten().copied());
    let p = cfg.p();
    let mut degenerate = false;
    let mut draw = |index: usize| {
        let mut r = rng::stream(cfg.seed, index as u64);
        let picks: Vec<usize> = (0..cfg.types)
            .map(|t| {
                let from_core = r.gen_bool(p);
                let pool = if from_core || rest_ids[t].is_empty() {
                    degenerate |= !from_core;
                    &core_ids[t]
                } else {
                    &rest_ids[t]
                };
                pool[r.gen_range(0..pool.len())]
            })
            .collect();
        Hyperedge::unit(picks)
    };
    let train = (0..cfg.train).map(&mut draw).collect();
    let test = (cfg.train..cfg.train + cfg.test).map(&mut draw).collect();
    Ok(TripData {
        n: cfg.n(),
        core,
        train,
        test,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn core_sizes() {
        for a in [2, 4, 6, 8] {
            let cfg = TripPlanConfig {
                alpha: rat(a, 10),
                ..Default::default()
            };
            let data = gen_trip_samples(&cfg).unwrap();
            assert_eq!(data.core_size(), a as usize * 5);
            assert!(!data.degenerate);
        }
    }

    #[test]
    fn certain_core() {
        let cfg = TripPlanConfig {
            tau: 1.0,
            ..Default::default()
        };
        let data = gen_trip_samples(&cfg).unwrap();
        assert_eq!(TripData::pure_core(&data.train, &data.core), 100);
    }

    #[test]
    fn one_activity_per_type() {
        let data = gen_trip_samples(&TripPlanConfig::default()).unwrap();
        for s in &data.train {
            assert_eq!(s.len(), 5);
            let types: Vec<usize> = s.vertices().iter().map(|v| v.index() / 10).collect();
            assert_eq!(types, vec![0, 1, 2, 3, 4]);
        }
    }

    #[test]
    fn full_core_is_degenerate() {
        let cfg = TripPlanConfig {
            alpha: int(1),
            ..Default::default()
        };
        let data = gen_trip_samples(&cfg).unwrap();
        assert!(data.degenerate);
        assert_eq!(data.core_size(), 50);
    }
}
