//! `grnsynth`: synthesize weight constraints for Boolean gene regulatory
//! networks, verify individuals, and compute mutational robustness.
//!
//! Exit codes: 0 success (and property true for `verify`), 1 property false,
//! 2 usage or input error, 3 internal error.

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use grnsynth::{
    bench_methods, catalog, gencons, parse_ltl, robustness_exact, robustness_sampled,
    verify_by_execution, BoundLtl, Checker, ConstraintSet, GrnPopulation, GrnSpace, LtlFormula,
    MutationConfig, MutationDistribution, ParametrizedTs, RobustnessEstimate,
    DEFAULT_EXACT_BUDGET,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

/// Marker for errors caused by bad input rather than bugs.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

#[derive(Parser)]
#[command(
    name = "grnsynth",
    about = "Constraint synthesis and mutational robustness for weighted Boolean GRNs",
    version
)]
struct Cli {
    /// Worker threads for sampling and enumeration (1 keeps timing runs
    /// bit-reproducible).
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the weight constraints under which the network satisfies a
    /// property; writes constraint JSON.
    Synth {
        /// Model file path, or the name of a bundled network (see `catalog`).
        model: String,
        /// Property in the LTL text grammar.
        #[arg(long)]
        ltl: Option<String>,
        /// Read the property from a file instead.
        #[arg(long, conflicts_with = "ltl")]
        ltl_file: Option<PathBuf>,
        /// Output path for the constraint JSON (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip clause simplification (duplicate and subsumption removal).
        #[arg(long)]
        raw: bool,
    },
    /// Check one concrete weight assignment, by constraint evaluation when
    /// `--constraints` is given, else by executing the dynamics.
    Verify {
        model: String,
        #[arg(long)]
        ltl: Option<String>,
        #[arg(long, conflicts_with = "ltl")]
        ltl_file: Option<PathBuf>,
        /// Weights file: a JSON object mapping w_<from>_<to> to rationals.
        #[arg(long)]
        weights: PathBuf,
        /// Pre-synthesized constraint JSON to evaluate instead of executing.
        #[arg(long)]
        constraints: Option<PathBuf>,
    },
    /// Compute robustness of the mutation-induced population, exactly or by
    /// sampling; writes a report JSON.
    Robustness {
        model: String,
        #[arg(long)]
        ltl: Option<String>,
        #[arg(long, conflicts_with = "ltl")]
        ltl_file: Option<PathBuf>,
        /// Pre-synthesized constraint JSON (otherwise synthesized on the fly
        /// for the evaluation methods).
        #[arg(long)]
        constraints: Option<PathBuf>,
        /// Mutation config JSON: {"p": "1/100"} or {"beta": "3/4"}.
        /// Defaults to beta = 3/4.
        #[arg(long)]
        mutation: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::SampleEval)]
        method: MethodArg,
        /// Samples per experiment (sampling methods).
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Number of repeated experiments.
        #[arg(long, default_value_t = 100)]
        repeats: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the execution and evaluation methods over a grid of sample
    /// counts and fit their per-sample costs; writes CSV.
    Bench {
        model: String,
        #[arg(long)]
        ltl: Option<String>,
        #[arg(long, conflicts_with = "ltl")]
        ltl_file: Option<PathBuf>,
        /// Mutation config JSON (defaults to beta = 3/4).
        #[arg(long)]
        mutation: Option<PathBuf>,
        /// Comma-separated sample counts, e.g. 1000,5000,10000.
        #[arg(long, value_delimiter = ',', default_value = "1000,2000,4000")]
        samples_grid: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the bundled benchmark networks, or export one to files.
    Catalog {
        /// Write <name>.json and <name>.ltl for this entry.
        #[arg(long)]
        export: Option<String>,
        /// Directory for exported files.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    SampleExec,
    SampleEval,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers > 1 {
        // Ignore failure: the pool can only be installed once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Synth {
            model,
            ltl,
            ltl_file,
            out,
            raw,
        } => cmd_synth(&model, ltl.as_deref(), ltl_file.as_deref(), out.as_deref(), raw),
        Command::Verify {
            model,
            ltl,
            ltl_file,
            weights,
            constraints,
        } => cmd_verify(
            &model,
            ltl.as_deref(),
            ltl_file.as_deref(),
            &weights,
            constraints.as_deref(),
        ),
        Command::Robustness {
            model,
            ltl,
            ltl_file,
            constraints,
            mutation,
            method,
            samples,
            repeats,
            seed,
            out,
        } => cmd_robustness(
            &model,
            ltl.as_deref(),
            ltl_file.as_deref(),
            constraints.as_deref(),
            mutation.as_deref(),
            method,
            samples,
            repeats,
            seed,
            out.as_deref(),
        ),
        Command::Bench {
            model,
            ltl,
            ltl_file,
            mutation,
            samples_grid,
            seed,
            out,
        } => cmd_bench(
            &model,
            ltl.as_deref(),
            ltl_file.as_deref(),
            mutation.as_deref(),
            &samples_grid,
            seed,
            out.as_deref(),
        ),
        Command::Catalog { export, dir } => cmd_catalog(export.as_deref(), &dir),
    }
}

/// Resolves a model argument: an existing file path first, then a bundled
/// catalog name.
fn load_model(arg: &str) -> Result<(GrnSpace, Option<&'static catalog::CatalogEntry>)> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading model file {arg}"))?;
        let space = GrnSpace::from_json(&text).map_err(|e| usage(e.to_string()))?;
        return Ok((space, None));
    }
    if let Some(entry) = catalog::find(arg) {
        let space = entry.space().map_err(|e| anyhow!("bundled model {arg}: {e}"))?;
        return Ok((space, Some(entry)));
    }
    let names: Vec<&str> = catalog::entries().iter().map(|e| e.name).collect();
    Err(usage(format!(
        "{arg:?} is neither a file nor a bundled network (bundled: {})",
        names.join(", ")
    )))
}

/// Resolves the property from --ltl, --ltl-file, or the catalog default.
fn load_property(
    ltl: Option<&str>,
    ltl_file: Option<&Path>,
    entry: Option<&'static catalog::CatalogEntry>,
    space: &GrnSpace,
) -> Result<(LtlFormula, BoundLtl)> {
    let text: String = if let Some(t) = ltl {
        t.to_string()
    } else if let Some(f) = ltl_file {
        std::fs::read_to_string(f)
            .with_context(|| format!("reading LTL file {}", f.display()))?
    } else if let Some(entry) = entry {
        eprintln!("note: using the bundled property for {}: {}", entry.name, entry.property);
        entry.property.to_string()
    } else {
        return Err(usage("no property: pass --ltl or --ltl-file".to_string()));
    };
    let formula = parse_ltl(text.trim()).map_err(|e| usage(e.to_string()))?;
    if formula.uses_next() {
        eprintln!("note: property uses the next operator (X)");
    }
    let bound = formula.bind(space).map_err(|e| usage(e.to_string()))?;
    Ok((formula, bound))
}

fn write_or_print(out: Option<&Path>, contents: &str, kind: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, contents)
                .with_context(|| format!("writing {kind} to {}", path.display()))?;
            eprintln!("wrote {kind} to {}", path.display());
        }
        None => println!("{contents}"),
    }
    Ok(())
}

fn cmd_synth(
    model: &str,
    ltl: Option<&str>,
    ltl_file: Option<&Path>,
    out: Option<&Path>,
    raw: bool,
) -> Result<ExitCode> {
    let (space, entry) = load_model(model)?;
    let (_, phi) = load_property(ltl, ltl_file, entry, &space)?;
    let ts = ParametrizedTs::new(&space);
    let started = Instant::now();
    let mut set = gencons(&ts, &phi);
    if !raw {
        set = set.simplify();
    }
    let elapsed = started.elapsed().as_secs_f64();
    eprintln!(
        "synthesized {} clauses / {} atoms in {elapsed:.3}s",
        set.clause_count(),
        set.atom_count()
    );
    write_or_print(out, &set.to_json(&space), "constraints")?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    model: &str,
    ltl: Option<&str>,
    ltl_file: Option<&Path>,
    weights: &Path,
    constraints: Option<&Path>,
) -> Result<ExitCode> {
    let (space, entry) = load_model(model)?;
    let weights_text = std::fs::read_to_string(weights)
        .with_context(|| format!("reading weights file {}", weights.display()))?;
    let w = space
        .weights_from_json(&weights_text)
        .map_err(|e| usage(e.to_string()))?;
    if !space.quantized_grid().contains(&w) {
        eprintln!("warning: weights are not on the quantized mutation grid");
    }
    let verdict = match constraints {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading constraints {}", path.display()))?;
            let set =
                ConstraintSet::from_json(&text, &space).map_err(|e| usage(e.to_string()))?;
            set.eval(&w).map_err(|e| anyhow!(e))?
        }
        None => {
            let (_, phi) = load_property(ltl, ltl_file, entry, &space)?;
            verify_by_execution(&space, &w, &phi).map_err(|e| anyhow!(e))?
        }
    };
    println!("{verdict}");
    Ok(if verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn load_distribution(space: &GrnSpace, mutation: Option<&Path>) -> Result<MutationDistribution> {
    let config = match mutation {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading mutation config {}", path.display()))?;
            MutationConfig::from_json(&text).map_err(|e| usage(e.to_string()))?
        }
        None => MutationConfig::default(),
    };
    let beta = config.resolve_beta().map_err(|e| usage(e.to_string()))?;
    MutationDistribution::uniform_beta(space, beta).map_err(|e| usage(e.to_string()))
}

#[allow(clippy::too_many_arguments)]
fn cmd_robustness(
    model: &str,
    ltl: Option<&str>,
    ltl_file: Option<&Path>,
    constraints: Option<&Path>,
    mutation: Option<&Path>,
    method: MethodArg,
    samples: u64,
    repeats: u32,
    seed: u64,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let (space, entry) = load_model(model)?;
    let dist = load_distribution(&space, mutation)?;
    let pop = GrnPopulation::new(space.clone(), dist).map_err(|e| usage(e.to_string()))?;

    // Assemble the checker: explicit constraints beat on-the-fly synthesis;
    // the execution method needs the property itself.
    let loaded_set: Option<ConstraintSet> = match constraints {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading constraints {}", path.display()))?;
            Some(ConstraintSet::from_json(&text, &space).map_err(|e| usage(e.to_string()))?)
        }
        None => None,
    };
    let mut synthesis_secs = None;
    let (set, phi): (Option<ConstraintSet>, Option<BoundLtl>) = match method {
        MethodArg::SampleExec => {
            let (_, phi) = load_property(ltl, ltl_file, entry, &space)?;
            (None, Some(phi))
        }
        MethodArg::Exact | MethodArg::SampleEval => match loaded_set {
            Some(set) => (Some(set), None),
            None => {
                let (_, phi) = load_property(ltl, ltl_file, entry, &space)?;
                let ts = ParametrizedTs::new(&space);
                let started = Instant::now();
                let set = gencons(&ts, &phi).simplify();
                synthesis_secs = Some(started.elapsed().as_secs_f64());
                (Some(set), None)
            }
        },
    };
    let checker = match (&set, &phi) {
        (Some(set), _) => Checker::Constraints(set),
        (None, Some(phi)) => Checker::Execution(phi),
        (None, None) => unreachable!(),
    };

    let budget = match std::env::var("GRN_SYNTH_BUDGET") {
        Ok(v) => v
            .parse::<u64>()
            .map_err(|_| usage(format!("GRN_SYNTH_BUDGET={v:?} is not an integer")))?,
        Err(_) => DEFAULT_EXACT_BUDGET,
    };

    let mut estimate: RobustnessEstimate = match method {
        MethodArg::Exact => robustness_exact(&pop, &checker, budget)
            .map_err(|e| match e {
                grnsynth::RobustnessError::BudgetExceeded { .. } => usage(e.to_string()),
                other => anyhow!(other),
            })?,
        MethodArg::SampleExec | MethodArg::SampleEval => {
            robustness_sampled(&pop, &checker, samples, repeats, seed)
                .map_err(|e| anyhow!(e))?
        }
    };
    estimate.synthesis_secs = synthesis_secs;

    match (&estimate.mean_exact, estimate.method) {
        (Some(exact), _) => eprintln!(
            "robustness = {} (~ {:.6}) over {} grid points",
            grnsynth::format_rational(exact),
            estimate.mean,
            estimate.samples
        ),
        (None, _) => eprintln!(
            "robustness ~ {:.6}, 95% CI [{:.6}, {:.6}] ({} samples x {} repeats)",
            estimate.mean, estimate.ci95.0, estimate.ci95.1, estimate.samples, estimate.repeats
        ),
    }
    let report = serde_json::to_string_pretty(&estimate.to_json())?;
    write_or_print(out, &report, "report")?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(
    model: &str,
    ltl: Option<&str>,
    ltl_file: Option<&Path>,
    mutation: Option<&Path>,
    samples_grid: &[u64],
    seed: u64,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let (space, entry) = load_model(model)?;
    let dist = load_distribution(&space, mutation)?;
    let pop = GrnPopulation::new(space.clone(), dist).map_err(|e| usage(e.to_string()))?;
    let (_, phi) = load_property(ltl, ltl_file, entry, &space)?;
    if samples_grid.is_empty() || samples_grid.contains(&0) {
        return Err(usage("--samples-grid needs positive sample counts".to_string()));
    }
    let report = bench_methods(&pop, &phi, samples_grid, seed).map_err(|e| anyhow!(e))?;
    eprintln!(
        "fit: t_ex = {:.3e} * p ; t_ev = {:.3e} * p + {:.3e} ; ratio k_ex/k_ev = {:.3} ; \
         measured t_c = {:.3e}s",
        report.k_ex, report.k_ev, report.t_ev_intercept, report.ratio, report.t_c_measured
    );
    write_or_print(out, &report.to_csv(), "bench CSV")?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_catalog(export: Option<&str>, dir: &Path) -> Result<ExitCode> {
    match export {
        None => {
            for entry in catalog::entries() {
                let space = entry.space().map_err(|e| anyhow!("{}: {e}", entry.name))?;
                println!(
                    "{:<16} {} genes, {} edges, {} grid points - {}",
                    entry.name,
                    space.gene_count(),
                    space.edges().len(),
                    space
                        .quantized_grid()
                        .total_points()
                        .map(|n| n.to_string())
                        .unwrap_or_else(|| "many".into()),
                    entry.description
                );
                println!("{:<16} property: {}", "", entry.property);
            }
            Ok(ExitCode::SUCCESS)
        }
        Some(name) => {
            let entry = catalog::find(name).ok_or_else(|| {
                usage(format!(
                    "unknown catalog entry {name:?} (try `grnsynth catalog`)"
                ))
            })?;
            std::fs::create_dir_all(dir)?;
            let model_path = dir.join(format!("{name}.json"));
            let ltl_path = dir.join(format!("{name}.ltl"));
            std::fs::write(&model_path, entry.model_json)?;
            std::fs::write(&ltl_path, format!("{}\n", entry.property))?;
            eprintln!(
                "wrote {} and {}",
                model_path.display(),
                ltl_path.display()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
