//! `cpnet`: validate nets, answer dominance queries, prune, export planning
//! problems and rank catalogs from the command line.
//!
//! Exit codes: 0 success or dominates, 1 negative result, 2 usage or input
//! error, 3 budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cpnet::strips::{export_planning_problem, render_domain, render_problem, ExportError};
use cpnet::{
    dominates, forward_prune, load_cpnet, pareto_front, parse_catalog, parse_outcome, sort_catalog, CatalogOptions,
    CatalogRow, CpNet, Direction, Heuristics, Outcome, PruneStatus, SearchConfig, SearchDirection, SearchStats,
    SourceDiagnostic, VerdictKind,
};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const INPUT_ERROR: u8 = 2;
const EXHAUSTED: u8 = 3;

#[derive(Parser)]
#[command(name = "cpnet", version, about = "Dominance reasoning over conditional preference networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a net for syntax and consistency errors.
    Validate { net: PathBuf },
    /// Print the most (or least) preferred outcome.
    Best {
        net: PathBuf,
        #[arg(long)]
        worst: bool,
    },
    /// Decide whether the better outcome dominates the worse one.
    Dominates(DominatesArgs),
    /// Show the values forward pruning keeps for a query.
    Prune {
        net: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        json: bool,
    },
    /// Write a query as PDDL domain and problem files.
    ExportStrips {
        net: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, value_enum)]
        direction: PlanDirection,
        /// Output directory; created if missing.
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        /// Export even when both outcomes are equal.
        #[arg(long)]
        allow_equal: bool,
    },
    /// Find the nondominated rows of a catalog.
    Pareto(CatalogArgs),
    /// Layer a catalog by dominance.
    Sort(CatalogArgs),
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    better: String,
    #[arg(long)]
    worse: String,
}

#[derive(Args)]
struct DominatesArgs {
    net: PathBuf,
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, value_enum, default_value = "bidirectional")]
    direction: CliDirection,
    #[arg(long)]
    no_suffix_fixing: bool,
    #[arg(long)]
    no_suffix_extension: bool,
    #[arg(long)]
    no_rightmost: bool,
    #[arg(long)]
    no_least_improving: bool,
    #[arg(long)]
    no_dedup: bool,
    /// Skip forward pruning.
    #[arg(long)]
    no_prune: bool,
    /// Maximum node expansions.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    witness: bool,
    #[arg(long)]
    stats: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CatalogArgs {
    net: PathBuf,
    #[arg(long)]
    catalog: PathBuf,
    /// Maximum node expansions per comparison.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    json: bool,
    /// Compare sequentially so statistics are reproducible.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliDirection {
    Improving,
    Worsening,
    Bidirectional,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlanDirection {
    Improving,
    Worsening,
}

/// A failure already worth reporting; carries the exit code.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: INPUT_ERROR,
        message: message.into(),
    }
}

type Run = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { net } => validate(&net),
        Command::Best { net, worst } => best(&net, worst),
        Command::Dominates(args) => dominates_cmd(&args),
        Command::Prune { net, query, json } => prune(&net, &query, json),
        Command::ExportStrips {
            net,
            query,
            direction,
            out,
            allow_equal,
        } => export(&net, &query, direction, &out, allow_equal),
        Command::Pareto(args) => pareto(&args),
        Command::Sort(args) => sort(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn located(path: &Path, diags: &[SourceDiagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("{}:{d}", path.display()))
        .collect::<Vec<_>>()
        .join("\n")
}

fn load(path: &Path) -> Result<CpNet, Failure> {
    let text = read(path)?;
    load_cpnet(&text).map_err(|e| input_error(located(path, e.diagnostics())))
}

fn outcome(net: &CpNet, flag: &str, text: &str) -> Result<Outcome, Failure> {
    parse_outcome(net, text).map_err(|d| input_error(format!("--{flag}: {d}")))
}

fn query(net: &CpNet, q: &QueryArgs) -> Result<(Outcome, Outcome), Failure> {
    Ok((outcome(net, "better", &q.better)?, outcome(net, "worse", &q.worse)?))
}

fn json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable report"));
}

fn validate(path: &Path) -> Run {
    let text = read(path)?;
    match load_cpnet(&text) {
        Ok(net) => {
            println!("valid: {} variables, order {}", net.len(), net.topological_names().join(" "));
            Ok(OK)
        }
        Err(e) => {
            eprintln!("{}", located(path, e.diagnostics()));
            Ok(NEGATIVE)
        }
    }
}

fn best(path: &Path, worst: bool) -> Run {
    let net = load(path)?;
    let z = if worst { net.worst_outcome() } else { net.best_outcome() };
    println!("{}", net.format_outcome(&z));
    Ok(OK)
}

#[derive(Serialize)]
struct DominatesReport {
    verdict: VerdictKind,
    witness: Option<Vec<String>>,
    stats: SearchStats,
}

fn dominates_cmd(args: &DominatesArgs) -> Run {
    let net = load(&args.net)?;
    let (x, y) = query(&net, &args.query)?;
    let cfg = SearchConfig {
        direction: match args.direction {
            CliDirection::Improving => SearchDirection::Improving,
            CliDirection::Worsening => SearchDirection::Worsening,
            CliDirection::Bidirectional => SearchDirection::Bidirectional,
        },
        heuristics: Heuristics {
            suffix_fixing: !args.no_suffix_fixing,
            suffix_extension: !args.no_suffix_extension,
            rightmost: !args.no_rightmost,
            least_improving: !args.no_least_improving,
            visited_dedup: !args.no_dedup,
        },
        budget: args.budget,
        want_witness: args.witness,
        forward_pruning: !args.no_prune,
        ..SearchConfig::default()
    };
    let verdict = dominates(&net, &x, &y, &cfg).map_err(|e| input_error(e.to_string()))?;
    let lines = verdict.witness.as_ref().map(|w| {
        w.render(&net).lines().map(str::to_string).collect::<Vec<_>>()
    });

    if args.json {
        json(&DominatesReport {
            verdict: verdict.kind,
            witness: lines,
            stats: verdict.stats.clone(),
        });
    } else {
        println!(
            "{}",
            match verdict.kind {
                VerdictKind::Dominates => "dominates",
                VerdictKind::NotDominated => "not dominated",
                VerdictKind::BudgetExhausted => "budget exhausted",
            }
        );
        for line in lines.iter().flatten() {
            println!("{line}");
        }
        if args.stats {
            let s = &verdict.stats;
            let decided = match s.direction_decided {
                Some(Direction::Improving) => "improving",
                Some(Direction::Worsening) => "worsening",
                None => "none",
            };
            println!("expansions: {}", s.expansions);
            println!("backtracks: {}", s.backtracks);
            println!("decided by: {decided}");
            println!("pruned: {}", s.pruned);
        }
    }
    Ok(match verdict.kind {
        VerdictKind::Dominates => OK,
        VerdictKind::NotDominated => NEGATIVE,
        VerdictKind::BudgetExhausted => EXHAUSTED,
    })
}

#[derive(Serialize)]
struct PruneVariable {
    variable: String,
    kept: Vec<String>,
    removed: Vec<String>,
}

#[derive(Serialize)]
struct PruneReport {
    status: PruneStatus,
    failed_variable: Option<String>,
    variables: Vec<PruneVariable>,
}

fn prune(path: &Path, q: &QueryArgs, as_json: bool) -> Run {
    let net = load(path)?;
    let (x, y) = query(&net, q)?;
    let result = forward_prune(&net, &x, &y);
    let names = |var, values: Vec<usize>| -> Vec<String> {
        values.into_iter().map(|v| net.value_name(var, v).to_string()).collect()
    };
    let report = PruneReport {
        status: result.status,
        failed_variable: result.failed_variable.map(|v| net.name(v).to_string()),
        variables: net
            .topological_order()
            .iter()
            .map(|&var| PruneVariable {
                variable: net.name(var).to_string(),
                kept: names(var, result.surviving_values(var)),
                removed: names(var, result.removed_values(var)),
            })
            .collect(),
    };
    if as_json {
        json(&report);
    } else {
        match &report.failed_variable {
            Some(var) => println!("infeasible at {var}"),
            None => println!("feasible"),
        }
        for v in &report.variables {
            if v.removed.is_empty() {
                println!("{}: {}", v.variable, v.kept.join(" "));
            } else {
                println!("{}: {}  (removed {})", v.variable, v.kept.join(" "), v.removed.join(" "));
            }
        }
    }
    Ok(if result.is_feasible() { OK } else { NEGATIVE })
}

fn export(path: &Path, q: &QueryArgs, direction: PlanDirection, out: &Path, allow_equal: bool) -> Run {
    let net = load(path)?;
    let (x, y) = query(&net, q)?;
    let direction = match direction {
        PlanDirection::Improving => Direction::Improving,
        PlanDirection::Worsening => Direction::Worsening,
    };
    let problem = export_planning_problem(&net, &x, &y, direction, allow_equal).map_err(|e| match e {
        ExportError::EqualOutcomes => input_error(format!("{e}; pass --allow-equal to export anyway")),
        other => input_error(other.to_string()),
    })?;
    fs::create_dir_all(out).map_err(|e| input_error(format!("{}: {e}", out.display())))?;
    for (name, text) in [
        ("domain.pddl", render_domain(&net, &problem)),
        ("problem.pddl", render_problem(&net, &problem)),
    ] {
        let file = out.join(name);
        fs::write(&file, text).map_err(|e| input_error(format!("{}: {e}", file.display())))?;
        println!("wrote {}", file.display());
    }
    Ok(OK)
}

fn catalog(args: &CatalogArgs) -> Result<(CpNet, Vec<CatalogRow>, SearchConfig, CatalogOptions), Failure> {
    let net = load(&args.net)?;
    let text = read(&args.catalog)?;
    let rows = parse_catalog(&net, &text).map_err(|d| input_error(located(&args.catalog, &d)))?;
    if args.budget == Some(0) {
        return Err(input_error("--budget must be at least 1"));
    }
    let cfg = SearchConfig {
        want_witness: false,
        ..SearchConfig::default().with_budget(args.budget)
    };
    let opts = CatalogOptions {
        parallel: !args.deterministic,
        ..CatalogOptions::default()
    };
    Ok((net, rows, cfg, opts))
}

fn pareto(args: &CatalogArgs) -> Run {
    let (net, rows, cfg, opts) = catalog(args)?;
    let report = pareto_front(&net, &rows, &cfg, &opts).map_err(|e| input_error(e.to_string()))?;
    if args.json {
        json(&report);
    } else {
        println!("nondominated: {}", report.nondominated.join(" "));
        for (loser, winner) in &report.dominated {
            println!("dominated: {loser} by {winner}");
        }
        for (a, b) in &report.undecided {
            println!("undecided: {a} vs {b}");
        }
        println!("comparisons: {}", report.comparisons_run);
    }
    Ok(if report.is_complete() { OK } else { EXHAUSTED })
}

fn sort(args: &CatalogArgs) -> Run {
    let (net, rows, cfg, opts) = catalog(args)?;
    let report = sort_catalog(&net, &rows, &cfg, &opts).map_err(|e| input_error(e.to_string()))?;
    if args.json {
        json(&report);
    } else {
        for (i, layer) in report.layers.iter().enumerate() {
            println!("{i}: {}", layer.join(" "));
        }
        for (a, b) in &report.undecided {
            println!("undecided: {a} vs {b}");
        }
        println!("comparisons: {}", report.comparisons_run);
    }
    Ok(if report.undecided.is_empty() { OK } else { EXHAUSTED })
}
