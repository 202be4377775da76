//! `kingid`: verify, measure, discharge and search king-grid identifying codes.

use std::fmt::Display;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kingid_core::discharge::{self, DischargeReport, Mode, Options, PovertyReading, Transfer};
use kingid_core::lemma::{self, Scenario, SearchConfig, SuiteReport};
use kingid_core::rational::{decimal, Rational, RationalJson};
use kingid_core::search::{self, SearchOptions};
use kingid_core::{density, diagonal_code, frame_average, verify_code, TorusCode};

/// `println!` that ignores a closed stdout.
macro_rules! out {
    ($($t:tt)*) => {{
        let _ = writeln!(io::stdout(), $($t)*);
    }};
}

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "kingid", version, about = "Tools for (1,<=2)-identifying codes in the king grid")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for searches.
    #[arg(long, global = true, default_value_t = 1, value_parser = positive)]
    jobs: usize,
    /// Node budget for searches.
    #[arg(long, global = true, value_parser = positive_u64)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the local conditions on a torus code (`-` reads stdin).
    Verify { file: String },
    /// Density and mean frame count of a torus code.
    Density { file: String },
    /// Generate a code.
    #[command(subcommand)]
    Gen(Gen),
    /// Run a discharging procedure and certify the density bound.
    Discharge(DischargeArgs),
    /// Machine-checked lemmas.
    #[command(subcommand)]
    Lemma(LemmaCmd),
    /// Minimum size of a valid code on a small torus.
    Search {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        /// Only look for codes with at most this many codewords.
        #[arg(long)]
        ub: Option<usize>,
    },
    /// Recompute the rule arithmetic of the discharging argument.
    Audit,
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// Diagonal construction: (x, y) is a codeword iff (x - y) mod P is a residue.
    Diag {
        #[arg(long)]
        period: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        residues: Vec<usize>,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
    },
}

#[derive(Args, Debug)]
struct DischargeArgs {
    file: String,
    #[arg(long, default_value = "full")]
    mode: Mode,
    /// Reading of "6-frame" in the poverty definitions.
    #[arg(long, value_enum, default_value_t = Reading::SixPlus)]
    reading: Reading,
    /// Also list every transfer.
    #[arg(long)]
    dump_transfers: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Reading {
    Literal,
    SixPlus,
}

impl From<Reading> for PovertyReading {
    fn from(r: Reading) -> Self {
        match r {
            Reading::Literal => PovertyReading::Literal,
            Reading::SixPlus => PovertyReading::SixPlus,
        }
    }
}

#[derive(Subcommand, Debug)]
enum LemmaCmd {
    /// Check one bundled scenario, all of them, or a scenario file.
    Run {
        #[arg(conflicts_with_all = ["all", "file"], required_unless_present_any = ["all", "file"])]
        id: Option<String>,
        #[arg(long, conflicts_with = "file")]
        all: bool,
        /// Scenario JSON file (`-` reads stdin).
        #[arg(long)]
        file: Option<String>,
    },
    /// List the bundled scenarios.
    List,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Input or argument problem, reported on stderr with exit 64.
struct Usage(String);

impl<E: Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("kingid: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Usage> {
    match &cli.command {
        Command::Verify { file } => cmd_verify(cli, file),
        Command::Density { file } => cmd_density(cli, file),
        Command::Gen(Gen::Diag { period, residues, width, height }) => {
            let code = diagonal_code(*period, residues, *width, *height)?;
            if cli.json {
                #[derive(Serialize)]
                struct Out<'a> {
                    width: usize,
                    height: usize,
                    size: usize,
                    code: &'a str,
                }
                let text = code.to_text();
                emit_json(&Out { width: code.width(), height: code.height(), size: code.len(), code: &text });
            } else {
                let _ = write!(io::stdout(), "{}", code.to_text());
            }
            Ok(EXIT_PASS)
        }
        Command::Discharge(args) => cmd_discharge(cli, args),
        Command::Lemma(LemmaCmd::List) => cmd_lemma_list(cli),
        Command::Lemma(LemmaCmd::Run { id, all, file }) => cmd_lemma_run(cli, id.as_deref(), *all, file.as_deref()),
        Command::Search { width, height, ub } => cmd_search(cli, *width, *height, *ub),
        Command::Audit => cmd_audit(cli),
    }
}

fn read_input(path: &str) -> Result<String, Usage> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text).map_err(|e| Usage(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(PathBuf::from(path)).map_err(|e| Usage(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn load_code(path: &str) -> Result<TorusCode, Usage> {
    let text = read_input(path)?;
    let name = if path == "-" { "<stdin>" } else { path };
    TorusCode::parse(&text).map_err(|e| Usage(format!("{name}: {e}")))
}

fn emit_json<T: Serialize>(value: &T) {
    let mut out = io::stdout().lock();
    let _ = serde_json::to_writer_pretty(&mut out, value);
    let _ = writeln!(out);
}

fn frac(r: Rational) -> String {
    format!("{} ({})", r, decimal(r, 6))
}

fn cmd_verify(cli: &Cli, path: &str) -> Result<u8, Usage> {
    let code = load_code(path)?;
    let v = verify_code(&code);
    if cli.json {
        #[derive(Serialize)]
        struct Out<'a> {
            width: usize,
            height: usize,
            #[serde(flatten)]
            verification: &'a kingid_core::Verification,
        }
        emit_json(&Out { width: code.width(), height: code.height(), verification: &v });
    } else if v.valid {
        out!("valid: {}x{} torus, {} codewords", code.width(), code.height(), code.len());
    } else {
        out!("invalid: {} violated sets", v.violations.len());
        for viol in v.violations.iter().take(20) {
            out!("  {:?} set at {} has no codeword", viol.kind, viol.position);
        }
        if v.violations.len() > 20 {
            out!("  ... {} more", v.violations.len() - 20);
        }
    }
    Ok(if v.valid { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_density(cli: &Cli, path: &str) -> Result<u8, Usage> {
    let code = load_code(path)?;
    let d = density(&code);
    let avg = frame_average(&code);
    let valid = verify_code(&code).valid;
    let bounds = search::check_density_bounds(&code).ok();
    if cli.json {
        #[derive(Serialize)]
        struct Out {
            width: usize,
            height: usize,
            codewords: usize,
            valid: bool,
            density: RationalJson,
            frame_average: RationalJson,
            bounds: Option<search::DensityBoundsReport>,
        }
        emit_json(&Out {
            width: code.width(),
            height: code.height(),
            codewords: code.len(),
            valid,
            density: d.into(),
            frame_average: avg.into(),
            bounds,
        });
    } else {
        out!("torus {}x{}, {} codewords, {}", code.width(), code.height(), code.len(), if valid { "valid" } else { "invalid" });
        out!("density        {}", frac(d));
        out!("frame average  {}", frac(avg));
        if let Some(b) = bounds {
            out!("above 47/111   {}", frac(b.above_lower.value()));
            out!("below 3/7      {}", frac(b.gap_to_construction.value()));
        }
    }
    Ok(EXIT_PASS)
}

fn cmd_discharge(cli: &Cli, args: &DischargeArgs) -> Result<u8, Usage> {
    let code = load_code(&args.file)?;
    let options = Options { reading: args.reading.into(), jobs: cli.jobs };
    let ledger = discharge::run_discharging_with(&code, args.mode, options);
    let report = DischargeReport::new(&code, &ledger);
    if cli.json {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            report: &'a DischargeReport,
            #[serde(skip_serializing_if = "Option::is_none")]
            transfers: Option<&'a [Transfer]>,
        }
        let transfers = args.dump_transfers.then_some(ledger.transfers.as_slice());
        emit_json(&Out { report: &report, transfers });
    } else {
        out!("{} discharging on {}x{} torus ({})", report.mode.name(), report.width, report.height, if report.valid { "valid" } else { "invalid" });
        out!("density        {}", frac(report.density.value()));
        out!("roles:");
        for (role, n) in &report.role_histogram {
            out!("  {role:<44} {n}");
        }
        out!("transfers      {}", report.n_transfers);
        out!("min charge     {} at {}", frac(report.min_charge.value()), report.argmin_anchor);
        out!("threshold      {}", frac(args.mode.threshold()));
        out!("density bound  {}", frac(report.density_bound.value()));
        for a in &report.anomalies {
            out!("anomaly        {}", serde_json::to_string(a).unwrap_or_default());
        }
        out!("{}", if report.pass { "PASS" } else { "FAIL" });
        if args.dump_transfers {
            for t in &ledger.transfers {
                out!("{} -> {}  {}  rule {}", t.donor, t.recipient, t.amount, t.rule);
            }
        }
    }
    Ok(if report.pass && report.valid { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_lemma_list(cli: &Cli) -> Result<u8, Usage> {
    let all = lemma::all_bundled();
    if cli.json {
        #[derive(Serialize)]
        struct Entry<'a> {
            id: &'a str,
            description: &'a str,
        }
        let entries: Vec<Entry> = all.iter().map(|s| Entry { id: &s.id, description: &s.description }).collect();
        emit_json(&entries);
    } else {
        for s in &all {
            out!("{:<20} {}", s.id, s.description);
        }
    }
    Ok(EXIT_PASS)
}

fn suite_exit(report: &SuiteReport) -> u8 {
    let failed = report.scenarios.iter().any(|s| {
        s.verdict == "counterexample" || s.figure.as_ref().is_some_and(|f| f.outcome != "inconclusive" && !f.matches)
    });
    if failed {
        EXIT_FAIL
    } else if report.all_passed {
        EXIT_PASS
    } else {
        EXIT_INCONCLUSIVE
    }
}

fn title(verdict: &str) -> String {
    let mut c = verdict.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

fn cmd_lemma_run(cli: &Cli, id: Option<&str>, all: bool, file: Option<&str>) -> Result<u8, Usage> {
    let config = SearchConfig { budget: cli.budget.unwrap_or(lemma::DEFAULT_BUDGET), jobs: cli.jobs };
    let report = if let Some(path) = file {
        let s = Scenario::from_json(&read_input(path)?)?;
        s.build_window()?;
        let (r, _) = lemma::check_scenario(&s, config)?;
        let all_passed = r.passed();
        let nodes = r.nodes;
        let ms = r.ms;
        SuiteReport { scenarios: vec![r], all_passed, nodes, ms }
    } else {
        let ids: Vec<String> = if all { Vec::new() } else { id.into_iter().map(String::from).collect() };
        lemma::run_suite(&ids, config)?
    };
    if cli.json {
        emit_json(&report);
    } else {
        for s in &report.scenarios {
            out!("{}: {} ({} nodes, {} ms)", s.id, title(s.verdict), s.nodes, s.ms);
            if let Some(v) = s.variants.iter().find(|v| v.counterexample.is_some()) {
                out!("  counterexample under {}:", v.symmetry);
                for row in v.counterexample.iter().flatten() {
                    out!("    {row}");
                }
            }
            if let Some(f) = &s.figure {
                let status = if f.matches { "matches" } else if f.outcome == "inconclusive" { "inconclusive" } else { "MISMATCH" };
                out!("  forced cells vs figure: {status}");
                if !f.matches {
                    for row in &f.forced_rows {
                        out!("    {row}");
                    }
                    for m in &f.mismatches {
                        out!("    {}: expected {:?}, forced {:?}", m.cell, m.expected, m.found);
                    }
                }
            }
        }
        if report.scenarios.len() > 1 {
            let ok = report.scenarios.iter().filter(|s| s.passed()).count();
            out!("{ok}/{} passed ({} nodes, {} ms)", report.scenarios.len(), report.nodes, report.ms);
        }
    }
    Ok(suite_exit(&report))
}

fn cmd_search(cli: &Cli, width: usize, height: usize, ub: Option<usize>) -> Result<u8, Usage> {
    let options = SearchOptions { ub, jobs: cli.jobs, budget: cli.budget.unwrap_or(search::DEFAULT_BUDGET) };
    let r = search::min_code_size(width, height, options)?;
    let exhausted = r.witness.is_none() && ub.is_some_and(|k| r.lower > k);
    if cli.json {
        #[derive(Serialize)]
        struct Out {
            width: usize,
            height: usize,
            lower: usize,
            upper: Option<usize>,
            optimal: bool,
            nodes: u64,
            min_density: Option<RationalJson>,
            witness: Option<String>,
        }
        let min_density = r.size().map(|n| Rational::new(n as i64, (width * height) as i64).into());
        emit_json(&Out {
            width,
            height,
            lower: r.lower,
            upper: r.upper,
            optimal: r.optimal,
            nodes: r.nodes,
            min_density,
            witness: r.witness.as_ref().map(TorusCode::to_text),
        });
    } else {
        match r.size() {
            Some(n) => {
                let d = Rational::new(n as i64, (width * height) as i64);
                out!("{width}x{height}: minimum {n} codewords, density {} ({} nodes)", frac(d), r.nodes);
            }
            None if exhausted => {
                out!("{width}x{height}: no valid code with at most {} codewords ({} nodes)", ub.unwrap_or(0), r.nodes);
            }
            None => {
                let best = r.upper.map_or("none".to_string(), |u| u.to_string());
                out!("{width}x{height}: budget exhausted, lower bound {}, best found {best} ({} nodes)", r.lower, r.nodes);
            }
        }
        if let Some(w) = &r.witness {
            let _ = write!(io::stdout(), "{}", w.to_text());
        }
    }
    Ok(if r.optimal {
        EXIT_PASS
    } else if exhausted {
        EXIT_FAIL
    } else {
        EXIT_INCONCLUSIVE
    })
}

fn cmd_audit(cli: &Cli) -> Result<u8, Usage> {
    let report = discharge::audit_rule_arithmetic();
    if cli.json {
        emit_json(&report);
    } else {
        for item in &report.items {
            let rel = match item.relation {
                discharge::audit::Relation::AtMost => "<=",
                discharge::audit::Relation::Equals => "=",
            };
            out!(
                "{:<4} {:<24} {} = {} {rel} {}",
                if item.holds { "ok" } else { "FAIL" },
                item.id,
                item.formula,
                item.value.value(),
                item.bound.value()
            );
        }
    }
    Ok(if report.all_hold { EXIT_PASS } else { EXIT_FAIL })
}
