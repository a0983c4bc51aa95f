//! Command-line front end: exploration, the scripted proof, concurrent
//! fuzzing, history linearizability checks, and the predicate catalog.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fourslot::checker::{self, Budget};
use fourslot::harness::{
    check_coherence, check_freshness, check_linearizable, check_payload_integrity, History,
    JitterProfile, RunConfig,
};
use fourslot::model::{Mutation, TransitionSystem, Variant};
use fourslot::predicates::catalog;

#[derive(Parser)]
#[command(name = "fourslot", version, about = "four-slot mechanism verification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Plain,
    Timestamped,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format: human text or stable line-delimited records.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the reachable state space and report saturation
    /// diagnostics.
    Explore {
        /// Round bound for each side.
        #[arg(long, default_value_t = 4)]
        k: u8,
        #[arg(long, value_enum, default_value = "timestamped")]
        variant: VariantArg,
        #[arg(long, value_parser = parse_mutation)]
        mutate: Option<Mutation>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the whole dependency-ordered safety proof.
    Prove {
        #[arg(long, default_value_t = 4)]
        k: u8,
        /// Apply a negative-control mutation to the model.
        #[arg(long, value_parser = parse_mutation)]
        mutate: Option<Mutation>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Drive real writer/reader threads and check the recorded history.
    Fuzz {
        #[arg(long, default_value_t = 100_000)]
        writes: u64,
        #[arg(long, default_value_t = 100_000)]
        reads: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Delay profile: none, uniform, or targeted.
        #[arg(long, default_value = "uniform", value_parser = parse_jitter)]
        jitter: JitterProfile,
        /// Apply a negative-control mutation to the implementation.
        #[arg(long, value_parser = parse_mutation)]
        mutate: Option<Mutation>,
        /// Record slot-level events too (larger logs).
        #[arg(long)]
        slot_events: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Replay a saved history through the linearizability check.
    Lincheck {
        /// History file as produced by `fuzz --out`.
        file: PathBuf,
        /// Also run the exhaustive search oracle (small histories only).
        #[arg(long)]
        oracle: bool,
    },
    /// List the predicate catalog.
    Catalog {
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_mutation(s: &str) -> Result<Mutation, String> {
    Mutation::from_name(s).ok_or_else(|| {
        format!(
            "unknown mutation {s:?}; available: {}",
            Mutation::ALL.map(|m| m.name()).join(", ")
        )
    })
}

fn parse_jitter(s: &str) -> Result<JitterProfile, String> {
    JitterProfile::from_name(s).ok_or_else(|| format!("unknown jitter profile {s:?}"))
}

fn emit(output: &OutputArgs, text: &str) -> std::io::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Explore { k, variant, mutate, output } => {
            let variant = match variant {
                VariantArg::Plain => Variant::Plain,
                VariantArg::Timestamped => Variant::Timestamped,
            };
            let mut text = String::new();
            let mut prev_projection = None;
            for bound in 1..=k {
                let ts = TransitionSystem::new(variant, bound).with_mutation(mutate);
                let reach = checker::explore(&ts, &Budget::default())?;
                let projection = reach.control_projections();
                let saturated = match &prev_projection {
                    Some(prev) => {
                        if *prev == projection {
                            "saturated"
                        } else {
                            "growing"
                        }
                    }
                    None => "-",
                };
                text.push_str(&format!(
                    "k={bound}\tstates={}\ttransitions={}\tcontrol_states={}\t{}\n",
                    reach.state_count(),
                    reach.transition_count(),
                    projection.len(),
                    saturated,
                ));
                prev_projection = Some(projection);
            }
            emit(&output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Prove { k, mutate, output } => {
            let ts = TransitionSystem::new(Variant::Timestamped, k).with_mutation(mutate);
            let outcome = checker::run_paper_proof(&ts, &Budget::default())?;
            let cat = catalog();
            let mut text = String::new();
            if output.format == Format::Text {
                text.push_str(&format!(
                    "reachable: {} states, {} transitions; big-step pairs visited: {}\n",
                    outcome.states, outcome.transitions, outcome.pairs_visited
                ));
            }
            for (i, report) in outcome.reports.iter().enumerate() {
                match output.format {
                    Format::Text => {
                        let status = if report.passed() { "pass" } else { "FAIL" };
                        text.push_str(&format!(
                            "[{:>2}/{}] {:<24} {:<22} {}\n",
                            i + 1,
                            outcome.reports.len(),
                            report.name,
                            report.verdict.label(),
                            status,
                        ));
                        if !report.supports.is_empty() {
                            text.push_str(&format!(
                                "        subject to: {}\n",
                                report.supports.join(", ")
                            ));
                        }
                        if !report.nontrivial.is_empty() {
                            let cmds: Vec<&str> =
                                report.nontrivial.iter().map(|c| c.label()).collect();
                            text.push_str(&format!(
                                "        non-trivial at: {}\n",
                                cmds.join(", ")
                            ));
                        }
                        if let Some(w) = &report.witness {
                            if !report.passed() {
                                text.push_str(&format!("        {w}\n"));
                            }
                        }
                        if let Some(trace) = &report.counterexample {
                            text.push_str("        counterexample:\n");
                            text.push_str(&trace.render());
                        }
                    }
                    Format::Structured => {
                        let desc = cat
                            .get(report.name.split(' ').next().unwrap_or(&report.name))
                            .map(|e| e.description())
                            .unwrap_or("");
                        text.push_str(&report.structured_line(desc));
                        text.push('\n');
                    }
                }
            }
            let ok = outcome.all_passed();
            if output.format == Format::Text {
                match &outcome.aborted_at {
                    None => text.push_str(&format!(
                        "PROOF PASS: all {} nodes verified\n",
                        outcome.reports.len()
                    )),
                    Some(name) => text.push_str(&format!("PROOF FAIL at node {name}\n")),
                }
            }
            emit(&output, &text)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Fuzz { writes, reads, seed, jitter, mutate, slot_events, output } => {
            let cfg = RunConfig {
                writes,
                reads,
                seed,
                jitter,
                mutation: mutate,
                record_slot_events: slot_events,
                abort_on_race: mutate.is_none(),
            };
            let out = fourslot::harness::run_concurrent(&cfg)?;
            let mut failures = Vec::new();
            if let Some(race) = out.race {
                failures.push(format!("race: {race}"));
            }
            if let Err(e) = check_coherence(&out.history) {
                failures.push(format!("coherence: {e:?}"));
            }
            if let Err(e) = check_freshness(&out.history) {
                failures.push(format!("freshness: {e:?}"));
            }
            if let Err(e) = check_payload_integrity(&out.history, out.initial_payload) {
                failures.push(format!("payload: {e:?}"));
            }
            let lin = check_linearizable(&out.history);
            if !lin {
                failures.push("linearizability: specialized rule failed".to_string());
            }
            let mut text = String::new();
            match output.format {
                Format::Text => {
                    text.push_str(&format!(
                        "{} writes, {} reads, seed {}, jitter {}: ",
                        writes,
                        reads,
                        seed,
                        jitter.name()
                    ));
                    if failures.is_empty() {
                        text.push_str("0 races, coherence OK, freshness OK, payloads OK, linearizable\n");
                    } else {
                        text.push_str("FAILED\n");
                        for f in &failures {
                            text.push_str(&format!("  {f}\n"));
                        }
                    }
                }
                Format::Structured => {
                    text = out.history.dump();
                }
            }
            emit(&output, &text)?;
            Ok(if failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Lincheck { file, oracle } => {
            let text = std::fs::read_to_string(&file)?;
            let history = History::load(&text)?;
            let rule = check_linearizable(&history);
            println!(
                "{}: {} operations, specialized rule: {}",
                file.display(),
                history.writes().len() + history.reads().len(),
                if rule { "linearizable" } else { "NOT linearizable" }
            );
            if oracle {
                let search = linearizable_small(&history)?;
                println!(
                    "exhaustive search oracle: {}",
                    if search { "linearizable" } else { "NOT linearizable" }
                );
                if search != rule {
                    eprintln!("error: rule and oracle disagree");
                    return Ok(ExitCode::FAILURE);
                }
            }
            Ok(if rule { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Catalog { output } => {
            let mut text = String::new();
            for e in catalog().entries() {
                match output.format {
                    Format::Text => {
                        text.push_str(&format!(
                            "{:<16} {:<5} {}\n",
                            e.name(),
                            e.kind(),
                            e.description()
                        ));
                    }
                    Format::Structured => {
                        text.push_str(&format!("{}\t{}\t{}\n", e.name(), e.kind(), e.description()));
                    }
                }
            }
            emit(&output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn linearizable_small(history: &History) -> Result<bool, Box<dyn std::error::Error>> {
    let ops = history.writes().len() + history.reads().len();
    if ops > 12 {
        return Err(format!("oracle limited to 12 operations, history has {ops}").into());
    }
    Ok(fourslot::harness::linearizable_by_search(history))
}
