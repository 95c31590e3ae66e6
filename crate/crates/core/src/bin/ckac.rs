use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ckac::automata::{accepts, solve, syntactic_pa, PomsetAutomaton};
use ckac::bisim::{bisimilar, simulates, Bounds, RelationKind};
use ckac::exchange::{closure, equiv_modulo_exchs_bounded, HypothesisSet};
use ckac::expr::{denote_bounded, denote_sync_bounded, lang_equiv_bounded, member, parse_with};
use ckac::lang::{h_closure_bounded, subsumption_closure};
use ckac::lts::build_lts;
use ckac::pomset::{language_to_json, pomset_from_json, sync_translate};
use ckac::{CommTable, Error, Expr, Result};

/// Pomsets with communication: expressions, equivalences, closures and automata.
#[derive(Parser)]
#[command(name = "ckac", version)]
struct Cli {
    /// Communication table file, one `a b result` per line. Falls back to
    /// $CKAC_COMM_TABLE; without either, every pair of actions communicates.
    #[arg(long, global = true)]
    comm: Option<String>,
    /// Largest pomset size considered by bounded checks.
    #[arg(long, global = true, default_value_t = 5)]
    bound: usize,
    /// Largest transition system built before giving up.
    #[arg(long, global = true, default_value_t = 10_000)]
    cap: usize,
    /// Output format for automata, transition systems and relation reports.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rel {
    Lang,
    Step,
    Pomset,
    Hp,
    Hhp,
    SimStep,
    SimPomset,
    SimHp,
    SimHhp,
    Exchs,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression and print it back with minimal parentheses.
    Parse { expr: String },
    /// List the pomsets of an expression up to the bound.
    Enum {
        expr: String,
        /// Show communication as synchronised events instead of edges.
        #[arg(long)]
        sync: bool,
    },
    /// Decide whether a pomset (JSON file or inline JSON) belongs to an expression.
    Member { expr: String, pomset: String },
    /// Compare two expressions.
    Equiv {
        #[arg(long, value_enum, default_value_t = Rel::Lang)]
        rel: Rel,
        /// Events per pomset transition for `pomset`.
        #[arg(long, default_value_t = 3)]
        steps: usize,
        /// Unroll stars to this depth for `hp` and `hhp`. Stars whose body
        /// accepts the empty pomset may then be reported unrelated wrongly.
        #[arg(long)]
        unroll: Option<usize>,
        left: String,
        right: String,
    },
    /// Close an expression under the exchange laws, or a bounded language under a hypothesis file.
    Closure {
        expr: String,
        #[arg(long)]
        hyp: Option<String>,
    },
    /// Build the syntactic automaton of an expression.
    PaBuild { expr: String },
    /// Decide whether an automaton accepts a pomset from a state.
    PaAccepts {
        automaton: String,
        state: String,
        pomset: String,
    },
    /// Turn the language of an automaton state into an expression.
    PaSolve { automaton: String, state: String },
    /// Report structural properties of an automaton.
    PaCheck { automaton: String },
    /// Export the transition system of an expression.
    LtsExport { expr: String },
}

enum Outcome {
    Print(String),
    Verdict(bool, Option<String>),
    Report(bool, String),
}

fn emit(text: &str) {
    // a closed pipe downstream is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{}", text.trim_end());
}

fn verdict_code(v: bool) -> ExitCode {
    if v {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn read(path_or_inline: &str) -> Result<String> {
    if path_or_inline.trim_start().starts_with(['{', '[']) {
        return Ok(path_or_inline.to_string());
    }
    fs::read_to_string(path_or_inline).map_err(|e| Error::Format(format!("{path_or_inline}: {e}")))
}

fn comm_table(flag: &Option<String>) -> Result<CommTable> {
    let path = flag.clone().or_else(|| {
        std::env::var("CKAC_COMM_TABLE")
            .ok()
            .filter(|s| !s.is_empty())
    });
    match path {
        Some(p) => CommTable::parse(&read(&p)?),
        None => Ok(CommTable::total()),
    }
}

fn load_automaton(path: &str, table: &CommTable) -> Result<PomsetAutomaton> {
    PomsetAutomaton::from_json(&read(path)?, table)
}

fn state(a: &PomsetAutomaton, name: &str) -> Result<usize> {
    a.state(name)
        .ok_or_else(|| Error::Format(format!("unknown state `{name}`")))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn run(cli: &Cli) -> Result<Outcome> {
    let table = comm_table(&cli.comm)?;
    let expr = |s: &str| -> Result<Expr> { parse_with(s, &table) };
    let n = cli.bound;
    Ok(match &cli.command {
        Command::Parse { expr: e } => Outcome::Print(expr(e)?.to_string()),
        Command::Enum { expr: e, sync } => {
            let x = expr(e)?;
            let l = if *sync {
                denote_sync_bounded(&x, n, &table)?
            } else {
                denote_bounded(&x, n)?
            };
            Outcome::Print(pretty(&language_to_json(l.members())))
        }
        Command::Member { expr: e, pomset } => {
            let u = pomset_from_json(&read(pomset)?, &table)?;
            Outcome::Verdict(member(&expr(e)?, &u)?, None)
        }
        Command::Equiv {
            rel,
            steps,
            unroll,
            left,
            right,
        } => {
            let (x, y) = (expr(left)?, expr(right)?);
            let bounds = Bounds {
                cap: cli.cap,
                pomset_steps: *steps,
                unroll: *unroll,
            };
            let kind = |r: Rel| match r {
                Rel::Step | Rel::SimStep => RelationKind::Step,
                Rel::Pomset | Rel::SimPomset => RelationKind::Pomset,
                Rel::Hp | Rel::SimHp => RelationKind::Hp,
                _ => RelationKind::Hhp,
            };
            match rel {
                Rel::Lang => Outcome::Verdict(lang_equiv_bounded(&x, &y, n)?, None),
                Rel::Exchs => Outcome::Verdict(equiv_modulo_exchs_bounded(&x, &y, n)?, None),
                Rel::Step | Rel::Pomset | Rel::Hp | Rel::Hhp => {
                    let r = bisimilar(kind(*rel), &x, &y, &bounds, &table)?;
                    if cli.format == Some(Format::Json) {
                        let v = serde_json::to_value(&r).expect("serializable");
                        return Ok(Outcome::Report(r.holds, pretty(&v)));
                    }
                    let detail = r.counterexample.as_ref().map(|c| {
                        let mut s = c.trace.join(" ");
                        if !c.reason.is_empty() {
                            s = format!("{s} ({})", c.reason).trim().to_string();
                        }
                        s
                    });
                    Outcome::Verdict(r.holds, detail)
                }
                _ => Outcome::Verdict(simulates(kind(*rel), &x, &y, &bounds, &table)?, None),
            }
        }
        Command::Closure { expr: e, hyp } => {
            let x = expr(e)?;
            match hyp {
                None => Outcome::Print(closure(&x)?.to_string()),
                Some(path) => {
                    let set = HypothesisSet::parse(&read(path)?, &table)?;
                    let mut l = h_closure_bounded(&denote_bounded(&x, n)?, &set.hypotheses, n)?;
                    if set.exchange_laws {
                        // alternate until neither closure adds anything
                        loop {
                            let next =
                                h_closure_bounded(&subsumption_closure(&l), &set.hypotheses, n)?;
                            if next == l {
                                break;
                            }
                            l = next;
                        }
                    }
                    Outcome::Print(pretty(&language_to_json(l.members())))
                }
            }
        }
        Command::PaBuild { expr: e } => {
            let (a, _) = syntactic_pa(&expr(e)?, &table)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => Outcome::Print(pretty(&a.to_json())),
                Format::Dot => Outcome::Print(a.to_dot()),
            }
        }
        Command::PaAccepts {
            automaton,
            state: s,
            pomset,
        } => {
            let a = load_automaton(automaton, &table)?;
            let u = pomset_from_json(&read(pomset)?, &table)?;
            let u = sync_translate(&u, &table)?;
            Outcome::Verdict(accepts(&a, state(&a, s)?, &u)?, None)
        }
        Command::PaSolve {
            automaton,
            state: s,
        } => {
            let a = load_automaton(automaton, &table)?;
            Outcome::Print(solve(&a, state(&a, s)?)?.to_string())
        }
        Command::PaCheck { automaton } => {
            let a = load_automaton(automaton, &table)?;
            let deadlocks: Vec<&str> = a.deadlock_states().into_iter().map(|q| a.name(q)).collect();
            let report = serde_json::json!({
                "fork_acyclic": a.is_fork_acyclic(),
                "well_nested": a.is_well_nested(),
                "deadlock": deadlocks,
            });
            Outcome::Print(pretty(&report))
        }
        Command::LtsExport { expr: e } => {
            let l = build_lts(&expr(e)?, cli.cap, &table)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => Outcome::Print(pretty(&l.to_json())),
                Format::Dot => Outcome::Print(l.to_dot()),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Print(s)) => {
            emit(&s);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Verdict(v, detail)) => {
            emit(&v.to_string());
            if let Some(d) = detail.filter(|d| !d.is_empty()) {
                emit(&format!("counterexample: {d}"));
            }
            verdict_code(v)
        }
        Ok(Outcome::Report(v, json)) => {
            emit(&json);
            verdict_code(v)
        }
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
