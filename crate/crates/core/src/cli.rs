//! Argument parsing and dispatch for the `pctgraph` binary.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, expect_graph, expect_rule, expect_scenario, CommandError, CommandResult};
use crate::harness::GenParams;
use crate::io::{export_dot, parse_document, serialize, serialize_all, Document};

#[derive(Parser, Debug)]
#[command(name = "pctgraph", version, about = "Weak DPO graph rewriting and parallel coherent transformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct MatchOpts {
    /// Also consider non-injective matches.
    #[arg(long)]
    any_matches: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the matches of a rule's left-hand side in a graph.
    Match {
        rule: PathBuf,
        graph: PathBuf,
        #[command(flatten)]
        opts: MatchOpts,
    },
    /// Apply one weak DPO step and print the result graph.
    Apply {
        rule: PathBuf,
        graph: PathBuf,
        /// Position of the match in the `match` listing.
        #[arg(long = "match", default_value_t = 0)]
        index: usize,
        #[command(flatten)]
        opts: MatchOpts,
    },
    /// Combine all steps of a scenario into one parallel coherent transformation.
    Pct { scenario: PathBuf },
    /// Check independence of a two-rule scenario and print the witness.
    Indep {
        scenario: PathBuf,
        /// The second match targets the result of the first step.
        #[arg(long)]
        sequential: bool,
    },
    /// Turn a parallel independent pair into a sequential one.
    Analyze { scenario: PathBuf },
    /// Turn a sequential independent pair (second match into the first result) into a parallel one.
    Synthesize { scenario: PathBuf },
    /// Print the derived rule `G ← C → H` of the scenario's PCT.
    DeriveRule { scenario: PathBuf },
    /// Apply the derived rule to another host and check the transported PCT.
    VerifyDerived {
        scenario: PathBuf,
        host: PathBuf,
        #[arg(long = "match", default_value_t = 0)]
        index: usize,
        #[command(flatten)]
        opts: MatchOpts,
    },
    /// Print a graph document as a DOT digraph.
    ExportDot { graph: PathBuf },
    /// Run the randomized property suite.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_nodes: usize,
        #[arg(long, default_value_t = 8)]
        max_edges: usize,
        /// Instances per property.
        #[arg(long, default_value_t = 100)]
        iterations: u64,
        /// Comma-separated node and edge labels.
        #[arg(long, default_value = "a,b", value_delimiter = ',')]
        labels: Vec<String>,
        /// Allow non-injective matches in generated derivations.
        #[arg(long)]
        any_matches: bool,
        /// Include wall-clock times (makes the output differ between runs).
        #[arg(long)]
        timings: bool,
        /// Disable the dangling check, to watch the suite catch it.
        #[arg(long, hide = true)]
        mutant: bool,
    },
}

fn read_document(path: &Path) -> CommandResult<Document> {
    let mut text = String::new();
    let read = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| CommandError::Input(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| CommandError::Input(format!("{}: {e}", path.display())))
}

/// Output text and exit status of a successful command.
fn execute(command: Command) -> CommandResult<(String, i32)> {
    let one = |d: Document| (serialize(&d), 0);
    let many = |d: Vec<Document>| (serialize_all(&d), 0);
    Ok(match command {
        Command::Match { rule, graph, opts } => {
            let (r, g) = (expect_rule(read_document(&rule)?)?, expect_graph(read_document(&graph)?)?);
            many(commands::list_matches(&r, &g, !opts.any_matches))
        }
        Command::Apply {
            rule,
            graph,
            index,
            opts,
        } => {
            let (r, g) = (expect_rule(read_document(&rule)?)?, expect_graph(read_document(&graph)?)?);
            one(commands::apply(&r, &g, index, !opts.any_matches)?)
        }
        Command::Pct { scenario } => one(commands::pct(&expect_scenario(read_document(&scenario)?)?)?),
        Command::Indep { scenario, sequential } => {
            many(commands::indep(&expect_scenario(read_document(&scenario)?)?, sequential)?)
        }
        Command::Analyze { scenario } => many(commands::analyze(&expect_scenario(read_document(&scenario)?)?)?),
        Command::Synthesize { scenario } => many(commands::synthesize(&expect_scenario(read_document(&scenario)?)?)?),
        Command::DeriveRule { scenario } => one(commands::derive_rule(&expect_scenario(read_document(&scenario)?)?)?),
        Command::VerifyDerived {
            scenario,
            host,
            index,
            opts,
        } => {
            let s = expect_scenario(read_document(&scenario)?)?;
            let h = expect_graph(read_document(&host)?)?;
            many(commands::verify_derived(&s, &h, index, !opts.any_matches)?)
        }
        Command::ExportDot { graph } => (export_dot(&expect_graph(read_document(&graph)?)?), 0),
        Command::Selfcheck {
            seed,
            max_nodes,
            max_edges,
            iterations,
            labels,
            any_matches,
            timings,
            mutant,
        } => {
            let params = GenParams {
                seed,
                max_nodes,
                max_edges,
                label_alphabet: labels,
                iterations,
                injective_matches: !any_matches,
                mutant,
                ..GenParams::default()
            };
            let (ok, report) = commands::selfcheck(&params, timings)?;
            (report, if ok { 0 } else { 1 })
        }
    })
}

/// Runs the command line `args` (program name first), writing results to `out`
/// and diagnostics to `err`. Returns the exit status: 0 on success, 1 when the
/// operation fails on valid input, 2 for usage and input errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(cli.command) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
