//! File formats: JSON instances, chains, calibration pairs and sample sets,
//! and the CSV result table.
//!
//! Rationals are written as canonical `"num/den"` strings; on input decimal
//! strings such as `"0.25"` are accepted too.

use std::fs;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::conformal::LabeledPair;
use crate::error::{Error, Result};
use crate::experiments::Row;
use crate::hypergraph::{Hyperedge, VertexId, VertexSet, WeightedHypergraph};
use crate::parametric::{ChainStats, NestedChain};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub v: Vec<usize>,
    pub w: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
    pub edges: Vec<EdgeRecord>,
}

/// A weighted hypergraph plus optional vertex labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub hypergraph: WeightedHypergraph,
    pub labels: Option<Vec<String>>,
}

impl Instance {
    pub fn new(hypergraph: WeightedHypergraph) -> Self {
        Instance {
            hypergraph,
            labels: None,
        }
    }

    pub fn from_file(file: InstanceFile) -> Result<Self> {
        if let Some(labels) = &file.vertices {
            if labels.len() != file.n {
                return Err(field(
                    "vertices",
                    format!("{} labels for n = {}", labels.len(), file.n),
                ));
            }
        }
        let edges = file
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let w = rational::parse(&e.w).map_err(|_| {
                    field(&format!("edges[{i}].w"), format!("bad weight {:?}", e.w))
                })?;
                if let Some(&v) = e.v.iter().find(|&&v| v >= file.n) {
                    return Err(field(
                        &format!("edges[{i}].v"),
                        format!("vertex {v} >= n = {}", file.n),
                    ));
                }
                let verts = e.v.iter().map(|&v| VertexId::from(v)).collect();
                Ok(Hyperedge::from_raw(verts, w))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance {
            hypergraph: WeightedHypergraph::new(file.n, edges)?,
            labels: file.vertices,
        })
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            n: self.hypergraph.n(),
            vertices: self.labels.clone(),
            edges: self
                .hypergraph
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    v: e.vertices().iter().map(|v| v.index()).collect(),
                    w: rational::format(&e.weight()),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub size: usize,
    pub induced: String,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainFile {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
    pub breakpoints: Vec<String>,
    pub stats: Vec<StatsRecord>,
}

impl ChainFile {
    pub fn from_chain(chain: &NestedChain) -> Self {
        ChainFile {
            n: chain.n(),
            sets: chain.sets().iter().map(VertexSet::to_vec).collect(),
            breakpoints: chain.breakpoints().iter().map(rational::format).collect(),
            stats: chain
                .stats()
                .iter()
                .map(|s| StatsRecord {
                    size: s.size,
                    induced: rational::format(&s.induced),
                    residual: rational::format(&s.residual),
                })
                .collect(),
        }
    }

    pub fn to_chain(&self) -> Result<NestedChain> {
        let parse_at = |path: String, s: &str| -> Result<Rational> {
            rational::parse(s).map_err(|_| field(&path, format!("bad rational {s:?}")))
        };
        let mut sets = Vec::with_capacity(self.sets.len());
        for (j, s) in self.sets.iter().enumerate() {
            if let Some(&v) = s.iter().find(|&&v| v >= self.n) {
                return Err(field(
                    &format!("sets[{j}]"),
                    format!("vertex {v} >= n = {}", self.n),
                ));
            }
            sets.push(VertexSet::from_ids(self.n, s.iter().copied()));
        }
        let breakpoints = self
            .breakpoints
            .iter()
            .enumerate()
            .map(|(j, b)| parse_at(format!("breakpoints[{j}]"), b))
            .collect::<Result<Vec<_>>>()?;
        let stats = self
            .stats
            .iter()
            .enumerate()
            .map(|(j, s)| {
                Ok(ChainStats {
                    size: s.size,
                    induced: parse_at(format!("stats[{j}].induced"), &s.induced)?,
                    residual: parse_at(format!("stats[{j}].residual"), &s.residual)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        NestedChain::from_parts(self.n, sets, breakpoints, stats)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub context: usize,
    pub prediction: Vec<usize>,
    pub truth: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextRecord {
    pub n: usize,
    /// Enumerated candidate structures for this context.
    pub candidates: Vec<Vec<usize>>,
}

/// Calibration input: one candidate pool per context and the two
/// calibration splits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairsFile {
    pub contexts: Vec<ContextRecord>,
    pub d1: Vec<PairRecord>,
    pub d2: Vec<PairRecord>,
}

impl PairsFile {
    fn pairs(&self, split: &str, records: &[PairRecord]) -> Result<Vec<LabeledPair>> {
        records
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let ctx = self.contexts.get(p.context).ok_or_else(|| {
                    field(
                        &format!("{split}[{i}].context"),
                        format!("no context {}", p.context),
                    )
                })?;
                let check = |name: &str, vs: &[usize]| match vs.iter().find(|&&v| v >= ctx.n) {
                    Some(v) => Err(field(
                        &format!("{split}[{i}].{name}"),
                        format!("vertex {v} >= n = {}", ctx.n),
                    )),
                    None => Ok(Hyperedge::unit(vs.iter().copied())),
                };
                Ok(LabeledPair {
                    context: p.context,
                    n: ctx.n,
                    prediction: check("prediction", &p.prediction)?,
                    truth: check("truth", &p.truth)?,
                })
            })
            .collect()
    }

    pub fn stage1(&self) -> Result<Vec<LabeledPair>> {
        self.pairs("d1", &self.d1)
    }

    pub fn stage2(&self) -> Result<Vec<LabeledPair>> {
        self.pairs("d2", &self.d2)
    }

    pub fn pools(&self) -> Result<Vec<Vec<Hyperedge>>> {
        self.contexts
            .iter()
            .enumerate()
            .map(|(c, ctx)| {
                ctx.candidates
                    .iter()
                    .enumerate()
                    .map(|(i, vs)| match vs.iter().find(|&&v| v >= ctx.n) {
                        Some(v) => Err(field(
                            &format!("contexts[{c}].candidates[{i}]"),
                            format!("vertex {v} >= n = {}", ctx.n),
                        )),
                        None => Ok(Hyperedge::unit(vs.iter().copied())),
                    })
                    .collect()
            })
            .collect()
    }
}

/// Samples `Y_1..Y_T` of a single context, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplesFile {
    pub n: usize,
    pub samples: Vec<Vec<usize>>,
}

impl SamplesFile {
    pub fn hyperedges(&self) -> Result<Vec<Hyperedge>> {
        self.samples
            .iter()
            .enumerate()
            .map(|(i, s)| match s.iter().find(|&&v| v >= self.n) {
                Some(v) => Err(field(
                    &format!("samples[{i}]"),
                    format!("vertex {v} >= n = {}", self.n),
                )),
                None => Ok(Hyperedge::unit(s.iter().copied())),
            })
            .collect()
    }
}

fn field(path: &str, message: String) -> Error {
    Error::Parse {
        path: path.to_string(),
        message,
    }
}

/// Parses JSON text; syntax errors report line and column.
pub fn from_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_string(),
        message: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json(&fs::read_to_string(path)?, &path.display().to_string())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    Ok(fs::write(path, to_json(value))?)
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    Instance::from_file(read_json(path)?)
}

pub fn save_instance(path: &Path, instance: &Instance) -> Result<()> {
    write_json(path, &instance.to_file())
}

pub fn load_chain(path: &Path) -> Result<NestedChain> {
    read_json::<ChainFile>(path)?.to_chain()
}

pub fn save_chain(path: &Path, chain: &NestedChain) -> Result<()> {
    write_json(path, &ChainFile::from_chain(chain))
}

/// `x` rounded to 12 significant digits, in plain decimal notation without
/// trailing zeros.
pub fn decimal(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let places = (11 - magnitude).max(0) as usize;
    let mut s = format!("{x:.places$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// The result table: `method,phi,size,coverage,seed`, plus `ratio` when any
/// row carries one. Rows are written in the order given.
pub fn rows_to_csv(rows: &[Row]) -> Result<String> {
    let with_ratio = rows.iter().any(|r| r.ratio.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["method", "phi", "size", "coverage", "seed"];
    if with_ratio {
        header.push("ratio");
    }
    w.write_record(&header).map_err(csv_error)?;
    for r in rows {
        let mut rec = vec![
            r.method.name().to_string(),
            decimal(rational::to_f64(&r.phi)),
            r.size.to_string(),
            decimal(r.coverage),
            r.seed.to_string(),
        ];
        if with_ratio {
            rec.push(r.ratio.map(decimal).unwrap_or_default());
        }
        w.write_record(&rec).map_err(csv_error)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}
