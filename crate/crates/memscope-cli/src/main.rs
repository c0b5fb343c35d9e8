//! Command-line front end for the memscope library.
//!
//! Exit codes are part of the interface: 0 on success, 2 when a design is
//! rejected on scientific grounds (the task cannot support the claimed
//! memory test), 1 for operational errors such as unreadable files or
//! malformed flags.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use memscope::agents::MechanismKind;
use memscope::envs::{build_env, parse_env_spec, registered_envs};
use memscope::harness::{
    regenerate_report, results_root, run_experiment, validate_config, ExperimentConfig, Outcome,
    Rejection, StampedConfig, Verdict,
};
use memscope::memory::{
    classify_context, context_intervals, parse_horizon_list, plan_experiment, HorizonProfile,
    MemoryTarget,
};
use memscope::Error as CoreError;

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_REJECTED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "memscope",
    version,
    about = "Classify, plan, validate, run, and report memory experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a context length against a task's horizon profile.
    Classify(ClassifyArgs),
    /// Recommend a context interval for a target memory type.
    Plan(PlanArgs),
    /// Check an experiment config file without running it.
    Validate(ValidateArgs),
    /// Validate an experiment config, run it, and export the results.
    Run(RunArgs),
    /// Rebuild summary and plot for an existing result directory.
    Report(ReportArgs),
    /// Inspect the environment registry.
    Envs(EnvsArgs),
}

/// Where a horizon profile comes from: a registered environment or an
/// explicit list.
#[derive(Args)]
struct SourceArgs {
    /// Environment spec, e.g. "tmaze:L=10" or "minigrid:L=9,variable".
    #[arg(long, conflicts_with = "xi_list")]
    env: Option<String>,
    /// Horizon profile given directly: "15", "7,8,9", or "7..22".
    #[arg(long)]
    xi_list: Option<String>,
}

impl SourceArgs {
    fn profile(&self) -> Result<HorizonProfile> {
        match (&self.env, &self.xi_list) {
            (Some(spec), None) => {
                let config = parse_env_spec(spec)?;
                let env = build_env(&config)?;
                Ok(env.horizon_profile())
            }
            (None, Some(list)) => Ok(parse_horizon_list(list).context("parsing --xi-list")?),
            _ => bail!("exactly one of --env or --xi-list is required"),
        }
    }
}

#[derive(Args)]
struct ClassifyArgs {
    /// Context length to classify.
    #[arg(long)]
    k: u32,
    #[command(flatten)]
    source: SourceArgs,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PlanArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Memory type the experiment should certify: "ltm" or "stm".
    #[arg(long)]
    target: String,
    /// Mechanism that will be installed: "latch" or "full-history".
    #[arg(long)]
    mechanism: Option<String>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// Path to an experiment config (JSON).
    config: PathBuf,
    /// Let a mismatched claim run as a demonstration instead of rejecting.
    #[arg(long)]
    allow_mixed: bool,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RunArgs {
    /// Path to an experiment config (JSON).
    config: PathBuf,
    /// Let a mismatched claim run as a demonstration instead of rejecting.
    #[arg(long)]
    allow_mixed: bool,
    /// Where to write results (default: $MEMSCOPE_RESULTS_DIR or ./results).
    #[arg(long)]
    results_dir: Option<PathBuf>,
    /// Override the worker count from the config.
    #[arg(long)]
    workers: Option<usize>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// A result directory, or a config id under the results root.
    target: String,
    /// Results root used when TARGET is an id (default: $MEMSCOPE_RESULTS_DIR
    /// or ./results).
    #[arg(long)]
    results_dir: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EnvsArgs {
    #[command(subcommand)]
    action: Option<EnvsAction>,
}

#[derive(Subcommand)]
enum EnvsAction {
    /// List registered environments with their horizon profiles.
    List {
        /// Machine-readable output.
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Plan(args) => cmd_plan(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Run(args) => cmd_run(args),
        Command::Report(args) => cmd_report(args),
        Command::Envs(args) => cmd_envs(args),
    }
}

fn cmd_classify(args: ClassifyArgs) -> Result<u8> {
    let profile = args.source.profile()?;
    let intervals = match context_intervals(&profile) {
        Ok(i) => i,
        Err(e @ CoreError::NotMemoryIntensive { .. }) => {
            println!("rejected: {e}");
            return Ok(EXIT_REJECTED);
        }
        Err(e) => return Err(e.into()),
    };
    let class = classify_context(args.k, &profile)?;

    if args.json {
        let out = json!({
            "k": args.k,
            "profile": profile.horizons(),
            "k_bar": intervals.border,
            "class": class,
            "intervals": {
                "ltm_only": [1, intervals.border],
                "mixed": intervals.mixed,
                "stm_only_min": intervals.stm_min,
            },
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("profile: {}", profile.display_compact());
        println!("K: {}", args.k);
        println!("K_bar: {}", intervals.border);
        println!("class: {class} ({})", class.describe());
        let mixed = match intervals.mixed {
            Some((lo, hi)) => format!("K in ({lo}, {hi}) exclusive"),
            None => "none".to_string(),
        };
        println!(
            "intervals: ltm-only K in [1, {}]; mixed {}; stm-only K >= {}",
            intervals.border, mixed, intervals.stm_min
        );
    }
    Ok(EXIT_OK)
}

fn parse_target(s: &str) -> Result<MemoryTarget> {
    match s.to_ascii_lowercase().as_str() {
        "ltm" => Ok(MemoryTarget::Ltm),
        "stm" => Ok(MemoryTarget::Stm),
        other => bail!("unknown target {other:?}: expected \"ltm\" or \"stm\""),
    }
}

fn parse_mechanism(s: &str) -> Result<MechanismKind> {
    match s.to_ascii_lowercase().as_str() {
        "none" => Ok(MechanismKind::None),
        "latch" => Ok(MechanismKind::Latch),
        "full-history" | "full_history" => Ok(MechanismKind::FullHistory),
        other => {
            bail!("unknown mechanism {other:?}: expected \"latch\", \"full-history\", or \"none\"")
        }
    }
}

fn cmd_plan(args: PlanArgs) -> Result<u8> {
    let profile = args.source.profile()?;
    let target = parse_target(&args.target)?;
    let mechanism = match &args.mechanism {
        Some(s) => parse_mechanism(s)?,
        None => MechanismKind::None,
    };
    match plan_experiment(&profile, target, mechanism != MechanismKind::None) {
        Ok(plan) => {
            if args.json {
                println!("{}", serde_json::to_string_pretty(&plan)?);
            } else {
                println!("profile: {}", profile.display_compact());
                print!("{}", plan.describe());
            }
            Ok(EXIT_OK)
        }
        Err(e @ (CoreError::NotMemoryIntensive { .. } | CoreError::MechanismRequired)) => {
            println!("rejected: {e}");
            Ok(EXIT_REJECTED)
        }
        Err(e) => Err(e.into()),
    }
}

fn load_config(path: &Path, allow_mixed: bool, workers: Option<usize>) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let mut config: ExperimentConfig =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if allow_mixed {
        config.allow_mixed = true;
    }
    if let Some(workers) = workers {
        config.workers = workers;
    }
    Ok(config)
}

fn print_stamp(stamped: &StampedConfig) {
    let s = &stamped.stamp;
    println!("accepted: {}", stamped.config.id);
    println!("claim: {} (matches: {})", s.claim, s.claim_matches);
    println!("class: {}", s.class);
    println!("K: {}, K_eff: {}", s.k, s.k_eff);
    println!(
        "profile: xi in [{}, {}], K_bar = {}",
        s.xi_min, s.xi_max, s.k_bar
    );
    for w in &s.warnings {
        println!("warning: {w}");
    }
}

fn print_rejection(rejection: &Rejection) {
    println!("rejected: {}", rejection.reason);
    if let Some(plan) = &rejection.plan {
        println!("corrective plan:");
        for line in plan.describe().lines() {
            println!("  {line}");
        }
    }
}

fn rejection_json(rejection: &Rejection) -> serde_json::Value {
    json!({
        "verdict": "rejected",
        "reason": rejection.reason,
        "plan": rejection.plan,
    })
}

fn cmd_validate(args: ValidateArgs) -> Result<u8> {
    let config = load_config(&args.config, args.allow_mixed, None)?;
    match validate_config(&config)? {
        Verdict::Accepted(stamped) => {
            if args.json {
                let out = json!({
                    "verdict": "accepted",
                    "fingerprint": stamped.config.fingerprint(),
                    "stamp": stamped.stamp,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                print_stamp(&stamped);
            }
            Ok(EXIT_OK)
        }
        Verdict::Rejected(rejection) => {
            if args.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&rejection_json(&rejection))?
                );
            } else {
                print_rejection(&rejection);
            }
            Ok(EXIT_REJECTED)
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<u8> {
    let config = load_config(&args.config, args.allow_mixed, args.workers)?;
    let root = args.results_dir.clone().unwrap_or_else(results_root);
    match run_experiment(&config, &root)? {
        Outcome::Completed { result, dir } => {
            if args.json {
                let out = json!({
                    "verdict": "completed",
                    "dir": dir,
                    "final_success": result.final_success,
                    "final_return": result.final_return,
                    "stamp": result.stamp,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("completed: {}", config.id);
                println!(
                    "final success: {:.3} +/- {:.3}",
                    result.final_success.mean, result.final_success.sem
                );
                println!(
                    "final return: {:.3} +/- {:.3}",
                    result.final_return.mean, result.final_return.sem
                );
                for w in &result.stamp.warnings {
                    println!("warning: {w}");
                }
                println!("wrote {}", dir.display());
            }
            Ok(EXIT_OK)
        }
        Outcome::Rejected(rejection) => {
            if args.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&rejection_json(&rejection))?
                );
            } else {
                print_rejection(&rejection);
            }
            Ok(EXIT_REJECTED)
        }
    }
}

fn cmd_report(args: ReportArgs) -> Result<u8> {
    let as_path = Path::new(&args.target);
    let (id, root) = if as_path.join("records.csv").is_file() {
        let id = as_path
            .file_name()
            .and_then(|n| n.to_str())
            .context("result directory has no usable name")?
            .to_string();
        let root = as_path
            .parent()
            .context("result directory has no parent")?
            .to_path_buf();
        (id, root)
    } else {
        let root = args.results_dir.clone().unwrap_or_else(results_root);
        (args.target.clone(), root)
    };

    let report = regenerate_report(&id, &root)?;
    if args.json {
        let out = json!({
            "id": report.id,
            "dir": report.dir,
            "rows": report.rows,
            "runs": report.runs,
            "final_success": report.final_success,
            "final_return": report.final_return,
            "stamp": report.stamp,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("report: {}", report.id);
        println!("rows: {} over {} runs", report.rows, report.runs);
        println!(
            "final success: {:.3} +/- {:.3}",
            report.final_success.mean, report.final_success.sem
        );
        println!(
            "final return: {:.3} +/- {:.3}",
            report.final_return.mean, report.final_return.sem
        );
        if let Some(stamp) = &report.stamp {
            println!("class: {} (claim {})", stamp.class, stamp.claim);
        }
        println!(
            "regenerated summary.csv and curves.svg in {}",
            report.dir.display()
        );
    }
    Ok(EXIT_OK)
}

fn cmd_envs(args: EnvsArgs) -> Result<u8> {
    let json = match args.action {
        None | Some(EnvsAction::List { json: false }) => false,
        Some(EnvsAction::List { json: true }) => true,
    };
    let envs = registered_envs();
    if json {
        let out: Vec<serde_json::Value> = envs
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "summary": e.summary,
                    "spec": e.spec_grammar,
                    "default_profile": e.default_profile,
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for e in envs {
            println!("{}: {}", e.name, e.summary);
            println!("  spec: {}", e.spec_grammar);
            println!("  default profile: {}", e.default_profile);
        }
    }
    Ok(EXIT_OK)
}
