use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fringe_core::approx::{cai_devroye_bound, statistic_tv_bound, stein_delta};
use fringe_core::exactstats::{factorial_moment_size, factorial_moment_statistic, factorial_moment_tree};
use fringe_core::oracle::enumerate_trees;
use fringe_core::samplers::{sample_uniform_tree, GwSampler, RandomStream};
use fringe_core::treecore::FringeIndex;
use fringe_core::{DegreeDistribution, DegreeStatistic, PlaneTree};
use fringe_harness::config::{hub_statistic, periodic_statistic, scaled_statistic};
use fringe_harness::{
    condition_diagnostics, emit_report, llt_comparison, run_scenario, suite, Format, HarnessError, RunOptions,
    ScenarioConfig,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "fringe", version, about = "Fringe subtree counts in random plane trees")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Master seed (overrides the scenario file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Replicates per grid point (overrides the scenario file).
    #[arg(long, global = true)]
    replicates: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Enumeration limit for the oracle.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u128,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct TargetArgs {
    /// Count fringes equal to this tree (comma-separated preorder degrees).
    #[arg(long, group = "target")]
    tree: Option<PlaneTree>,
    /// Count fringes with this degree statistic (`degree:count,...`).
    #[arg(long, group = "target")]
    statistic: Option<DegreeStatistic>,
    /// Count fringes with this many vertices.
    #[arg(long, group = "target")]
    size: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit random trees, one encoding per line.
    Sample {
        /// Host degree statistic for uniform trees.
        #[arg(long)]
        host: Option<DegreeStatistic>,
        /// Offspring law `degree:probability,...` for conditioned GW trees.
        #[arg(long, requires = "size")]
        offspring: Option<String>,
        #[arg(long)]
        size: Option<u64>,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Fringe counts of a given host tree.
    Count {
        #[arg(long)]
        host: PlaneTree,
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Exact factorial moments.
    Moments {
        #[arg(long)]
        host: DegreeStatistic,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 1)]
        order: u64,
    },
    /// Stein quantity and the variance bound for a tree or statistic target.
    Bounds {
        #[arg(long)]
        host: DegreeStatistic,
        #[command(flatten)]
        target: TargetArgs,
    },
    /// List every tree with the given statistic.
    Enumerate {
        #[arg(long)]
        host: DegreeStatistic,
    },
    /// Exact window-sum probabilities against the local normal profile.
    Llt {
        /// Values to draw from; defaults to the degrees of `--host`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Vec<i64>,
        #[arg(long)]
        host: Option<DegreeStatistic>,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 6.0)]
        width: f64,
    },
    /// Scenario files and the built-in suite.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// Condition table of a sequence of statistics.
    Diagnose {
        /// Statistics in grid order.
        #[arg(long = "host")]
        hosts: Vec<DegreeStatistic>,
        /// A scenario file or built-in name whose hosts are tabulated.
        #[arg(long)]
        scenario: Option<String>,
        /// A named family (`periodic`, `hubs`, `proportions`) over `--grid`.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, value_delimiter = ',')]
        grid: Vec<u64>,
        /// Proportions for the `proportions` family, `degree:p,...`.
        #[arg(long)]
        pmf: Option<String>,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Run a scenario file or a built-in scenario by name.
    Run {
        config: String,
        /// Record wall times (the output is then no longer reproducible byte for byte).
        #[arg(long)]
        timings: bool,
    },
    /// Names of the built-in scenarios.
    List,
    /// Print a built-in scenario as a configuration file.
    Show { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fringe: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn io_err(e: io::Error) -> HarnessError {
    HarnessError::Io(e.to_string())
}

fn sink(global: &Global) -> Result<Box<dyn Write>, HarnessError> {
    Ok(match &global.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn parse_pmf(text: &str) -> Result<Vec<(u64, f64)>, HarnessError> {
    text.split(',')
        .map(|item| {
            let (d, p) = item
                .split_once(':')
                .ok_or_else(|| HarnessError::Config(format!("expected degree:probability, got {item:?}")))?;
            let d = d.trim().parse().map_err(|e| HarnessError::Config(format!("{d:?}: {e}")))?;
            let p = p.trim().parse().map_err(|e| HarnessError::Config(format!("{p:?}: {e}")))?;
            Ok((d, p))
        })
        .collect()
}

fn load_scenario(name_or_path: &str) -> Result<ScenarioConfig, HarnessError> {
    match suite::builtin(name_or_path) {
        Some(c) => Ok(c),
        None => ScenarioConfig::from_path(name_or_path.as_ref()),
    }
}

fn require_target(t: &TargetArgs) -> Result<(), HarnessError> {
    if t.tree.is_none() && t.statistic.is_none() && t.size.is_none() {
        return Err(HarnessError::Config("one of --tree, --statistic, --size is required".into()));
    }
    Ok(())
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), HarnessError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| HarnessError::Io(e.to_string()))?;
    writeln!(out).map_err(io_err)
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    let g = &cli.global;
    let seed = g.seed.unwrap_or(0);
    let mut out = sink(g)?;
    match cli.command {
        Command::Sample {
            host,
            offspring,
            size,
            count,
        } => {
            let mut rng = RandomStream::new(seed, 0);
            match (host, offspring) {
                (Some(bn), None) => {
                    for _ in 0..count {
                        writeln!(out, "{}", sample_uniform_tree(&bn, &mut rng)).map_err(io_err)?;
                    }
                }
                (None, Some(pmf)) => {
                    let p = DegreeDistribution::from_f64(parse_pmf(&pmf)?)
                        .map_err(|e| HarnessError::Config(e.to_string()))?;
                    let sampler = GwSampler::new(&p, size.expect("clap enforces --size"))?;
                    for _ in 0..count {
                        let t = sampler.sample(&mut rng, fringe_harness::config::DEFAULT_MAX_ATTEMPTS)?;
                        writeln!(out, "{t}").map_err(io_err)?;
                    }
                }
                _ => return Err(HarnessError::Config("give exactly one of --host or --offspring".into())),
            }
        }
        Command::Count { host, target } => {
            require_target(&target)?;
            let idx = FringeIndex::new(&host);
            let (label, value) = if let Some(t) = &target.tree {
                (format!("tree={t}"), idx.count_tree(t))
            } else if let Some(bm) = &target.statistic {
                (format!("statistic={bm}"), idx.count_statistic(bm))
            } else {
                let m = target.size.unwrap();
                (format!("size={m}"), idx.count_size(m))
            };
            write_json(&mut out, &json!({ "host": host.to_string(), "target": label, "count": value }))?;
        }
        Command::Moments { host, target, order } => {
            require_target(&target)?;
            let report = if let Some(t) = &target.tree {
                factorial_moment_tree(&host, t, order)
            } else if let Some(bm) = &target.statistic {
                factorial_moment_statistic(&host, bm, order)
            } else {
                factorial_moment_size(&host, target.size.unwrap(), order)
            }?;
            write_json(&mut out, &serde_json::to_value(&report).expect("reports serialize"))?;
        }
        Command::Bounds { host, target } => {
            let report = if let Some(t) = &target.tree {
                stein_delta(&host, t)
            } else if let Some(bm) = &target.statistic {
                statistic_tv_bound(&host, bm)
            } else {
                return Err(HarnessError::Config("bounds need --tree or --statistic".into()));
            }
            .map_err(|e| HarnessError::Config(e.to_string()))?;
            let tree_cd = target.tree.as_ref().map(|t| cai_devroye_bound(&host, t));
            write_json(
                &mut out,
                &json!({
                    "host": host.to_string(),
                    "lambda": report.lambda.to_f64(),
                    "lambda_rational": report.lambda.rational_string(),
                    "delta": report.delta.to_f64(),
                    "delta_rational": report.delta.rational_string(),
                    "vacuous": report.vacuous,
                    "luc4": report.cai_devroye.bound,
                    "luc4_clamped": report.cai_devroye.clamped,
                    "class_size": report.class_size.to_string(),
                    "notes": report.notes,
                    "tree_luc4": tree_cd.and_then(|r| r.ok()).map(|c| c.bound),
                }),
            )?;
        }
        Command::Enumerate { host } => {
            let all = enumerate_trees(&host, g.budget)?;
            for t in &all.trees {
                writeln!(out, "{t}").map_err(io_err)?;
            }
        }
        Command::Llt { values, host, m, width } => {
            let values = match (values.is_empty(), host) {
                (false, None) => values,
                (true, Some(bn)) => bn.multiset().into_iter().map(|d| d as i64).collect(),
                _ => return Err(HarnessError::Config("give exactly one of --values or --host".into())),
            };
            if m == 0 || m as usize >= values.len() {
                return Err(HarnessError::Config(format!("need 0 < m < {}", values.len())));
            }
            let cmp = llt_comparison(&values, m, width)?;
            match g.format {
                OutFormat::Json => write_json(&mut out, &serde_json::to_value(&cmp).expect("serializes"))?,
                OutFormat::Csv => {
                    writeln!(out, "k,scaled_exact,normal_profile").map_err(io_err)?;
                    for (k, e, p) in &cmp.rows {
                        writeln!(out, "{k},{e},{p}").map_err(io_err)?;
                    }
                }
            }
        }
        Command::Scenario { action } => match action {
            ScenarioAction::List => {
                for c in suite::builtin_suite() {
                    writeln!(out, "{}\t{}", c.name, c.description).map_err(io_err)?;
                }
            }
            ScenarioAction::Show { name } => {
                let c = suite::builtin(&name)
                    .ok_or_else(|| HarnessError::Config(format!("no built-in scenario {name:?}")))?;
                writeln!(out, "{}", c.to_json()).map_err(io_err)?;
            }
            ScenarioAction::Run { config, timings } => {
                let mut c = load_scenario(&config)?;
                if let Some(s) = g.seed {
                    c.master_seed = s;
                }
                if let Some(r) = g.replicates {
                    c.replicates = r;
                }
                c.validate()?;
                let report = run_scenario(
                    &c,
                    &RunOptions {
                        workers: g.workers,
                        record_timing: timings,
                    },
                )?;
                let format = match g.format {
                    OutFormat::Json => Format::Json,
                    OutFormat::Csv => Format::Csv,
                };
                emit_report(&report, format, &mut out)?;
            }
        },
        Command::Diagnose {
            hosts,
            scenario,
            family,
            grid,
            pmf,
        } => {
            let stats: Vec<DegreeStatistic> = if let Some(name) = scenario {
                load_scenario(&name)?
                    .grid_points()?
                    .into_iter()
                    .filter_map(|p| match p.host {
                        fringe_harness::config::Host::Uniform(bn) => Some(bn),
                        fringe_harness::config::Host::Gw { .. } => None,
                    })
                    .collect()
            } else if let Some(family) = family {
                grid.iter()
                    .map(|&k| match family.as_str() {
                        "periodic" => periodic_statistic(1.0, k),
                        "hubs" => hub_statistic(k),
                        "proportions" => scaled_statistic(
                            &parse_pmf(pmf.as_deref().ok_or_else(|| HarnessError::Config("--pmf is required".into()))?)?,
                            k,
                        ),
                        other => Err(HarnessError::Config(format!("unknown family {other:?}"))),
                    })
                    .collect::<Result<_, _>>()?
            } else {
                hosts
            };
            if stats.is_empty() {
                return Err(HarnessError::Config("no statistics to diagnose".into()));
            }
            let rows = condition_diagnostics(&stats);
            match g.format {
                OutFormat::Json => write_json(&mut out, &serde_json::to_value(&rows).expect("serializes"))?,
                OutFormat::Csv => {
                    writeln!(
                        out,
                        "size,sup_delta,second_moment,variance,span,limit_span,max_probability,below_threshold"
                    )
                    .map_err(io_err)?;
                    let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
                    for r in rows {
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{},{}",
                            r.size,
                            r.sup_delta,
                            r.second_moment,
                            r.variance,
                            opt(r.span),
                            opt(r.limit_span),
                            r.max_probability,
                            r.below_threshold
                        )
                        .map_err(io_err)?;
                    }
                }
            }
        }
    }
    out.flush().map_err(io_err)
}
