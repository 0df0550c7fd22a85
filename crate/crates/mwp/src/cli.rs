//! Command-line surface: argument parsing, human-readable summaries,
//! report writing, and the 0/1/2 exit-code contract.

use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;

use crate::analysis::{self, AnalysisResult};
use crate::frontend::{self, Diagnostic};
use crate::relation::Relation;
use crate::report::{self, FunctionReport, Report};

/// Every analyzed function stayed within polynomial bounds.
pub const EXIT_POLYNOMIAL: i32 = 0;
/// Some function has no passing choice at all.
pub const EXIT_INFINITE: i32 = 1;
/// Parse errors, unsupported constructs, bad flags, or I/O failures.
pub const EXIT_ERROR: i32 = 2;

/// `--fin` refuses to materialize more assignments than this.
pub const EXPANSION_CAP: u128 = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "mwp",
    version,
    about = "Certifies polynomial data-size bounds of C functions via mwp flow analysis"
)]
pub struct Cli {
    /// C source file to analyze
    pub file: PathBuf,

    /// Write a JSON report to this path
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Derive relations only; skip choice evaluation
    #[arg(long = "no-eval")]
    pub no_eval: bool,

    /// List every passing assignment (refused above 10^6; the compact
    /// form is printed instead)
    #[arg(long)]
    pub fin: bool,

    /// Print each function's flow matrix
    #[arg(long = "print-matrix")]
    pub print_matrix: bool,

    /// Measure and report analysis wall time
    #[arg(long)]
    pub time: bool,
}

enum Outcome {
    Evaluated(AnalysisResult),
    RelationOnly(Relation, usize),
    Failed(Diagnostic),
}

/// Runs the full pipeline for one file and returns the process exit
/// code. Diagnostics go to stderr, summaries to stdout.
pub fn run(cli: &Cli) -> i32 {
    let source = match std::fs::read_to_string(&cli.file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("mwp: error: cannot read '{}': {e}", cli.file.display());
            return EXIT_ERROR;
        }
    };

    let started = Instant::now();
    let program = match frontend::parse(&source) {
        Ok(p) => p,
        Err(d) => {
            eprintln!("{}", d.render(&cli.file));
            return EXIT_ERROR;
        }
    };

    let outcomes: Vec<(String, Outcome)> = program
        .functions
        .iter()
        .map(|f| {
            let outcome = if cli.no_eval {
                match analysis::function_relation(f) {
                    Ok((relation, ctx)) => Outcome::RelationOnly(relation, ctx.num_indices()),
                    Err(d) => Outcome::Failed(d),
                }
            } else {
                match analysis::analyze_function(f) {
                    Ok(result) => Outcome::Evaluated(result),
                    Err(d) => Outcome::Failed(d),
                }
            };
            (f.name.clone(), outcome)
        })
        .collect();
    let elapsed_millis = started.elapsed().as_millis() as u64;

    let mut any_failed = false;
    let mut any_infinite = false;
    let mut reports: Vec<FunctionReport> = Vec::new();

    for (name, outcome) in &outcomes {
        match outcome {
            Outcome::Failed(d) => {
                any_failed = true;
                eprintln!("{}", d.render(&cli.file));
            }
            Outcome::RelationOnly(relation, num_indices) => {
                println!("function {name}");
                println!("  variables: {}", relation.variables().join(", "));
                println!("  derivation points: {num_indices}");
                println!("  verdict: unevaluated");
                if cli.print_matrix {
                    print!("{}", indent(&relation.matrix().to_string()));
                }
                reports.push(FunctionReport::unevaluated(name, relation, *num_indices));
            }
            Outcome::Evaluated(result) => {
                let infinite = result.passing.is_empty();
                any_infinite |= infinite;
                println!("function {name}");
                println!(
                    "  variables: {}",
                    result.relation.variables().join(", ")
                );
                println!("  derivation points: {}", result.num_indices);
                println!(
                    "  verdict: {}",
                    if infinite { "infinite" } else { "polynomial" }
                );
                println!(
                    "  passing choices: {} of {}",
                    result.passing.count(),
                    report::total_assignments(result.num_indices)
                );
                if !result.passing.is_empty() {
                    for fragment in result.passing.fragments() {
                        println!("    {}", render_fragment(fragment.fixed()));
                    }
                }
                if !result.infinite_vars.is_empty() {
                    println!("  infinite variables: {}", result.infinite_vars.join(", "));
                }
                let expanded = expand_if_asked(cli, result);
                if cli.print_matrix {
                    print!("{}", indent(&result.relation.matrix().to_string()));
                }
                reports.push(FunctionReport::from_result(name, result, expanded));
            }
        }
    }

    if cli.time {
        println!("analysis time: {elapsed_millis} ms");
    }

    if let Some(out) = &cli.out {
        let mut report = Report::new(&cli.file, reports);
        if cli.time {
            report.analysis_millis = Some(elapsed_millis);
        }
        if let Err(e) = report::save_report(&report, out) {
            eprintln!("mwp: error: {e}");
            return EXIT_ERROR;
        }
    }

    if any_failed {
        EXIT_ERROR
    } else if any_infinite {
        EXIT_INFINITE
    } else {
        EXIT_POLYNOMIAL
    }
}

/// Handles `--fin`: prints and returns the expansion when it fits the
/// cap, otherwise prints a note and keeps the compact form only.
fn expand_if_asked(cli: &Cli, result: &AnalysisResult) -> Option<Vec<Vec<u8>>> {
    if !cli.fin || result.passing.is_empty() {
        return None;
    }
    let count = result.passing.count();
    if count > EXPANSION_CAP {
        println!("  expansion skipped: {count} assignments exceed the cap of {EXPANSION_CAP}");
        return None;
    }
    let expanded: Vec<Vec<u8>> = result
        .passing
        .expand()
        .into_iter()
        .map(|a| a.as_slice().to_vec())
        .collect();
    println!("  passing assignments:");
    for a in &expanded {
        let digits: Vec<String> = a.iter().map(|d| d.to_string()).collect();
        println!("    [{}]", digits.join(" "));
    }
    Some(expanded)
}

fn render_fragment(fixed: &std::collections::BTreeMap<usize, u8>) -> String {
    if fixed.is_empty() {
        return "any choice".to_string();
    }
    let parts: Vec<String> = fixed.iter().map(|(i, a)| format!("{i}={a}")).collect();
    format!("{} (others free)", parts.join(", "))
}

fn indent(text: &str) -> String {
    text.lines()
        .map(|l| format!("  {l}\n"))
        .collect::<String>()
}
