use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ilsgraph::campaign::{run_campaign, CampaignConfig, GenerationMode, Guards, Property};
use ilsgraph::canonical::{canonical_path, match_canonical};
use ilsgraph::error::Error;
use ilsgraph::graph::is_connected_guarded;
use ilsgraph::io::{analyze, load_matrix, load_rhs, parse_point};
use ilsgraph::matrix::DomainBound;
use ilsgraph::witness::{
    analytic_witness_guarded, decide_universal_guarded, search_witness_guarded,
    DEFAULT_SEARCH_GUARD,
};
use ilsgraph::Result;

/// Connectivity analysis for solution graphs of integer linear systems.
#[derive(Parser)]
#[command(name = "ilsgraph", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArg {
    /// Also write the JSON output to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sign-structure report: sign pattern, greedy reduction, elimination
    /// ordering, minimal forbidden pattern.
    Analyze {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Connectivity report of one instance (A, b, d).
    Check {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        d: u32,
        /// Override the enumeration guard.
        #[arg(long)]
        guard: Option<u64>,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Disconnection witness for a matrix at a domain bound, or null.
    Witness {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long)]
        guard: Option<u64>,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Decide universal connectedness at a domain bound.
    Decide {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        guard: Option<u64>,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Match a 4x3 matrix against the canonical sign pattern.
    Canonical {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Explicit connecting path between two feasible points of a canonical
    /// 4x3 instance.
    Path {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        d: u32,
        /// Start point, comma separated: "1,0,0".
        #[arg(long)]
        from: String,
        /// Goal point, comma separated: "0,1,1".
        #[arg(long)]
        to: String,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Run a named verification campaign.
    Verify {
        /// One of: thm1-witness, thm2-connected, lemma-fp-no-eo,
        /// lemma-shape-equiv, greedy-oracle, lemma5-canonical, lemma6-path,
        /// pq-slack.
        property: String,
        /// Matrix shape, e.g. "4x3".
        #[arg(long)]
        shape: Option<String>,
        /// Enumerate all matrices over the entry range instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        /// Reduce exhaustive enumeration to column-sign representatives.
        #[arg(long)]
        symmetry_reduced: bool,
        /// Number of sampled instances.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Domain bounds to test, comma separated: "1,2".
        #[arg(long)]
        d: Option<String>,
        /// Entry range as "lo..hi", e.g. "-2..2".
        #[arg(long)]
        entry_range: Option<String>,
        /// Override all numeric guards (enumeration, search, exhaustive).
        #[arg(long)]
        guard: Option<u64>,
        /// Keep scanning after the first counterexample.
        #[arg(long)]
        keep_going: bool,
        #[command(flatten)]
        output: OutputArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Analytic,
    Search,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Error::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Error::Capability(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Error::Defect(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit<T: Serialize>(value: &T, output: &OutputArg) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::defect(format!("serialization failed: {e}")))?;
    println!("{text}");
    if let Some(path) = &output.out {
        std::fs::write(path, format!("{text}\n"))
            .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze { matrix, output } => {
            let a = load_matrix(&matrix)?;
            let report = analyze(&a)?;
            emit(&report, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            matrix,
            b,
            d,
            guard,
            output,
        } => {
            let a = load_matrix(&matrix)?;
            let rhs = load_rhs(&b)?;
            let bound = DomainBound::new(d)?;
            let guard = guard.unwrap_or(ilsgraph::graph::DEFAULT_ENUMERATION_GUARD);
            let report = is_connected_guarded(&a, &rhs, bound, guard)?;
            emit(&report, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Witness {
            matrix,
            d,
            method,
            guard,
            output,
        } => {
            let a = load_matrix(&matrix)?;
            let bound = DomainBound::new(d)?;
            let enumeration = guard.unwrap_or(ilsgraph::graph::DEFAULT_ENUMERATION_GUARD);
            let search = guard.unwrap_or(DEFAULT_SEARCH_GUARD);
            let witness = match method {
                MethodArg::Analytic => analytic_witness_guarded(&a, bound, enumeration)?,
                MethodArg::Search => search_witness_guarded(&a, bound, enumeration, search)?,
                MethodArg::Auto => match analytic_witness_guarded(&a, bound, enumeration)? {
                    Some(found) => Some(found),
                    None => search_witness_guarded(&a, bound, enumeration, search)?,
                },
            };
            emit(&witness, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decide {
            matrix,
            d,
            guard,
            output,
        } => {
            let a = load_matrix(&matrix)?;
            let bound = DomainBound::new(d)?;
            let enumeration = guard.unwrap_or(ilsgraph::graph::DEFAULT_ENUMERATION_GUARD);
            let search = guard.unwrap_or(DEFAULT_SEARCH_GUARD);
            let verdict = decide_universal_guarded(&a, bound, enumeration, search)?;
            emit(&verdict, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Canonical { matrix, output } => {
            let a = load_matrix(&matrix)?;
            let matched = match_canonical(&a.sign_pattern())?;
            emit(&matched, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Path {
            matrix,
            b,
            d,
            from,
            to,
            output,
        } => {
            let a = load_matrix(&matrix)?;
            let rhs = load_rhs(&b)?;
            let bound = DomainBound::new(d)?;
            let start = parse_point(&from)?;
            let goal = parse_point(&to)?;
            let path = canonical_path(&a, &rhs, bound, &start, &goal)?;
            emit(&path, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            property,
            shape,
            exhaustive,
            symmetry_reduced,
            trials,
            seed,
            d,
            entry_range,
            guard,
            keep_going,
            output,
        } => {
            let property = Property::from_token(&property)?;
            let mut cfg = default_config(property);
            if let Some(text) = shape {
                cfg.shape = Some(parse_shape(&text)?);
            }
            if exhaustive || symmetry_reduced {
                cfg.mode = GenerationMode::Exhaustive {
                    column_normalized: symmetry_reduced,
                };
                // Exhaustive campaigns enumerate sign matrices unless an
                // entry range is given explicitly.
                cfg.entry_range = (-1, 1);
            }
            if let Some(count) = trials {
                cfg.mode = GenerationMode::Sampled { trials: count };
            }
            if let Some(value) = seed {
                cfg.seed = value;
            }
            if let Some(text) = d {
                cfg.d_list = parse_d_list(&text)?;
            }
            if let Some(text) = entry_range {
                cfg.entry_range = parse_entry_range(&text)?;
            }
            if let Some(value) = guard {
                cfg.guards = Guards {
                    enumeration: value,
                    search: value,
                    exhaustive: value,
                };
            }
            cfg.keep_going = keep_going;
            let report = run_campaign(property, &cfg)?;
            emit(&report, &output)?;
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

/// Per-property defaults mirroring the standing verification configurations.
fn default_config(property: Property) -> CampaignConfig {
    let base = CampaignConfig::default();
    match property {
        Property::WitnessFromPattern | Property::CycleSlackIdentities => CampaignConfig {
            shape: None,
            entry_range: (-2, 2),
            d_list: vec![1, 2],
            mode: GenerationMode::Sampled { trials: 1000 },
            ..base
        },
        Property::ConnectedWithoutPattern => CampaignConfig {
            shape: Some((3, 3)),
            entry_range: (-2, 2),
            d_list: vec![1],
            mode: GenerationMode::Sampled { trials: 500 },
            ..base
        },
        Property::PatternForbidsOrdering
        | Property::OrderingPatternEquivalence
        | Property::GreedyMatchesOracle => CampaignConfig {
            shape: Some((3, 3)),
            mode: GenerationMode::Exhaustive {
                column_normalized: false,
            },
            ..base
        },
        Property::CanonicalFormMatch => CampaignConfig {
            shape: Some((4, 3)),
            entry_range: (-2, 2),
            d_list: vec![1, 2],
            mode: GenerationMode::Sampled { trials: 500 },
            ..base
        },
        Property::CanonicalPathFeasible => CampaignConfig {
            shape: Some((4, 3)),
            entry_range: (-2, 2),
            d_list: vec![1, 2],
            mode: GenerationMode::Sampled { trials: 200 },
            ..base
        },
    }
}

fn parse_shape(text: &str) -> Result<(usize, usize)> {
    let (rows, cols) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::input(format!("malformed shape {text:?}, expected MxN")))?;
    let rows = rows
        .trim()
        .parse()
        .map_err(|_| Error::input(format!("malformed shape {text:?}")))?;
    let cols = cols
        .trim()
        .parse()
        .map_err(|_| Error::input(format!("malformed shape {text:?}")))?;
    Ok((rows, cols))
}

fn parse_d_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| Error::input(format!("malformed domain bound {part:?}")))
        })
        .collect()
}

fn parse_entry_range(text: &str) -> Result<(i64, i64)> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| Error::input(format!("malformed entry range {text:?}, expected lo..hi")))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| Error::input(format!("malformed entry range {text:?}")))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| Error::input(format!("malformed entry range {text:?}")))?;
    Ok((lo, hi))
}
