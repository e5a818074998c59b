use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use confsub_core::conformal::{ExplicitCandidates, FixedContextModel};
use confsub_core::experiments::{self, GridRoutingConfig, Method, Row, TripPlanConfig};
use confsub_core::io::{self, PairsFile, SamplesFile};
use confsub_core::rational::{self, Rational};
use confsub_core::{calibrate, nested_chain, select, CalibrationConfig, EdgeSymDiff, FixedOptions};

/// Compact conformal subgraphs from weighted hyperedge families.
#[derive(Debug, Parser)]
#[command(name = "confsub", version)]
struct Cli {
    /// Base seed for randomized steps.
    #[arg(long, global = true, env = "CONFSUB_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the full nested chain of an instance.
    Chain {
        instance: PathBuf,
        /// Output file (stdout if omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Select a compact subgraph for a coverage target.
    Compress {
        instance: PathBuf,
        /// Reuse a precomputed chain file instead of recomputing.
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long, value_parser = parse_rational)]
        tau: Rational,
        #[arg(long, value_parser = parse_rational, default_value = "1")]
        kappa: Rational,
    },
    /// Two-stage split-conformal calibration from labeled pairs.
    Calibrate {
        pairs: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        phi: Rational,
        /// Stage-1 miss rate (default phi / 20).
        #[arg(long, value_parser = parse_rational)]
        delta: Option<Rational>,
        #[arg(long, value_parser = parse_rational, default_value = "1")]
        kappa: Rational,
        #[arg(long, value_enum, default_value_t = DistanceKind::Symdiff)]
        distance: DistanceKind,
        /// Subsample candidate pools larger than this.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Fixed-context fit from an ordered sample list.
    Fixed {
        samples: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        phi: Rational,
        /// Skip deletion within the last chain block.
        #[arg(long)]
        no_refine: bool,
    },
    /// Run a synthetic experiment and emit the result table as CSV.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistanceKind {
    /// Size of the symmetric difference of the edge sets.
    Symdiff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Grid,
    Trip,
    Adversarial,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    kind: Kind,
    /// Number of seeds, starting at the base seed.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// Spacing of the coverage levels on [0, 1].
    #[arg(long, value_parser = parse_rational, default_value = "1/20")]
    phi_grid: Rational,
    /// Methods to run (default all).
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    methods: Vec<Method>,
    #[arg(short, long)]
    out: Option<PathBuf>,

    #[arg(long, default_value_t = 6, help_heading = "Grid")]
    side: usize,
    #[arg(long, default_value_t = 20, help_heading = "Grid")]
    bypass_len: usize,
    #[arg(long, default_value_t = 0.15, help_heading = "Grid")]
    bypass_share: f64,

    #[arg(long, default_value_t = 5, help_heading = "Trip")]
    types: usize,
    #[arg(long, default_value_t = 10, help_heading = "Trip")]
    per_type: usize,
    #[arg(long, value_parser = parse_rational, default_value = "1/5", help_heading = "Trip")]
    alpha: Rational,
    #[arg(long, default_value_t = 0.8, help_heading = "Trip")]
    core_mass: f64,

    /// Train sample count (default 50 for grid, 100 for trip).
    #[arg(long)]
    train: Option<usize>,
    /// Test sample count (default 50 for grid, 100 for trip).
    #[arg(long)]
    test: Option<usize>,

    #[arg(long, default_value_t = 30, help_heading = "Adversarial")]
    a: usize,
    #[arg(long, default_value_t = 3, help_heading = "Adversarial")]
    b: usize,
    #[arg(long, value_parser = parse_rational, default_value = "1/5", help_heading = "Adversarial")]
    eps: Rational,
    #[arg(long, value_parser = parse_rational, default_value = "1", help_heading = "Adversarial")]
    kappa: Rational,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    Method::parse(s).map_err(|e| e.to_string())
}

/// A violated invariant; reported with exit code 2.
#[derive(Debug)]
struct InvariantFailure(Vec<String>);

impl std::fmt::Display for InvariantFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invariant violated: {}", self.0.join("; "))
    }
}

impl std::error::Error for InvariantFailure {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InvariantFailure>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn ids(set: &confsub_core::VertexSet) -> String {
    let v: Vec<String> = set.iter().map(|v| v.to_string()).collect();
    format!("[{}]", v.join(", "))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Chain { instance, out } => {
            let inst = io::load_instance(&instance)?;
            let chain = nested_chain(&inst.hypergraph)?;
            emit(
                out.as_deref(),
                &io::to_json(&io::ChainFile::from_chain(&chain)),
            )
        }
        Command::Compress {
            instance,
            chain,
            tau,
            kappa,
        } => {
            let h = io::load_instance(&instance)?.hypergraph;
            let chain = match chain {
                Some(p) => {
                    let c = io::load_chain(&p)?;
                    if c.n() != h.n() || c.total_weight() != h.total_weight() {
                        bail!("chain file {} does not match the instance", p.display());
                    }
                    c
                }
                None => nested_chain(&h)?,
            };
            let sel = select(&chain, &h, tau, kappa)?;
            let budget = sel.params.residual_budget(h.total_weight());
            let mut report = String::new();
            writeln!(report, "set: {}", ids(&sel.set))?;
            writeln!(report, "size: {}", sel.size())?;
            writeln!(report, "chain_index: {}", sel.index)?;
            writeln!(report, "residual: {}", rational::format(&sel.residual))?;
            writeln!(report, "budget: {}", rational::format(&budget))?;
            writeln!(
                report,
                "certificate: {}",
                if sel.within_budget(h.total_weight()) {
                    "ok"
                } else {
                    "violated"
                }
            )?;
            if sel.degenerate {
                writeln!(
                    report,
                    "note: some zero-weight hyperedge lies outside the full support"
                )?;
            }
            print!("{report}");
            if !sel.within_budget(h.total_weight()) {
                return Err(InvariantFailure(vec![format!(
                    "residual {} exceeds (1 + kappa) epsilon W = {}",
                    rational::format(&sel.residual),
                    rational::format(&budget)
                )])
                .into());
            }
            Ok(())
        }
        Command::Calibrate {
            pairs,
            phi,
            delta,
            kappa,
            distance: DistanceKind::Symdiff,
            cap,
            out,
        } => {
            let file: PairsFile = io::read_json(&pairs)?;
            let mut cfg = CalibrationConfig::new(phi);
            cfg.kappa = kappa;
            if let Some(d) = delta {
                cfg.delta = d;
            }
            let mut source = ExplicitCandidates::new(file.pools()?, EdgeSymDiff);
            if let Some(cap) = cap {
                source = source.with_cap(cap, cli.seed);
            }
            let state = calibrate(&file.stage1()?, &file.stage2()?, cfg, &EdgeSymDiff, &source)?;
            if state.stage2_overflow {
                eprintln!("note: quantile index exceeds the calibration size; tau* set to 1");
            }
            emit(out.as_deref(), &io::to_json(&state))
        }
        Command::Fixed {
            samples,
            phi,
            no_refine,
        } => {
            let file: SamplesFile = io::read_json(&samples)?;
            let model = FixedContextModel::new(&file.hyperedges()?, file.n)?;
            let fit = model.fit(phi, FixedOptions { refine: !no_refine })?;
            println!("set: {}", ids(&fit.set));
            println!("size: {}", fit.set.len());
            println!(
                "coverage: {}/{} (required {})",
                fit.covered, fit.second_half, fit.required
            );
            if fit.overflow {
                println!("note: required count exceeds the second half; returning every vertex");
            }
            Ok(())
        }
        Command::Experiment(args) => experiment(args, cli.seed),
    }
}

fn experiment(args: ExperimentArgs, base: u64) -> Result<()> {
    let seeds: Vec<u64> = (0..args.seeds).map(|i| base + i).collect();
    let phis = experiments::phi_grid(args.phi_grid);
    let methods = if args.methods.is_empty() {
        Method::ALL.to_vec()
    } else {
        args.methods.clone()
    };
    let rows: Vec<Row> = match args.kind {
        Kind::Grid => {
            let cfg = GridRoutingConfig {
                side: args.side,
                bypass_len: args.bypass_len,
                bypass_share: args.bypass_share,
                train: args.train.unwrap_or(50),
                test: args.test.unwrap_or(50),
                ..Default::default()
            };
            experiments::run_grid(&cfg, &seeds, &phis, &methods)?
        }
        Kind::Trip => {
            let cfg = TripPlanConfig {
                types: args.types,
                per_type: args.per_type,
                alpha: args.alpha,
                tau: args.core_mass,
                train: args.train.unwrap_or(100),
                test: args.test.unwrap_or(100),
                seed: 0,
            };
            experiments::run_trip(&cfg, &seeds, &phis, &methods)?
        }
        Kind::Adversarial => {
            let mut rows = experiments::run_adversarial(args.a, args.b, args.eps, args.kappa)?;
            rows.retain(|r| methods.contains(&r.method));
            rows
        }
    };
    emit(args.out.as_deref(), &io::rows_to_csv(&rows)?)?;
    let mut problems = experiments::check_rows(&rows);
    if args.kind == Kind::Adversarial {
        for r in &rows {
            if r.method == Method::Chain && r.size != args.b {
                problems.push(format!("chain size {} differs from b = {}", r.size, args.b));
            }
            if r.method == Method::ReverseGreedy && r.size < args.a {
                problems.push(format!(
                    "reverse greedy size {} below a = {}",
                    r.size, args.a
                ));
            }
        }
    }
    if !problems.is_empty() {
        return Err(InvariantFailure(problems).into());
    }
    Ok(())
}
