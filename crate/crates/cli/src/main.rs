//! `hyperbmc <models…> <formula> <k> <-pes|-opt|-hpes|-hopt> [-bughunt|-find]`
//!
//! Exit codes: 0 holds, 1 violated, 2 inconclusive, 64 usage, 65 bad input,
//! 70 internal or solver failure, 74 I/O failure while emitting.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{ArgGroup, Parser};

use hyperbmc::checker::{build_query, check, Answer, Backend, CheckError, CheckOptions, Mode, Verdict};
use hyperbmc::hyperltl::{parse_formula, HyperFormula};
use hyperbmc::model::SymbolicKripke;
use hyperbmc::smv::parse_model;
use hyperbmc::solver::{Format, SolverConfig};
use hyperbmc::unroll::Semantics;

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_SOFTWARE: u8 = 70;
const EX_IOERR: u8 = 74;

/// Single-dash spellings accepted for compatibility with the usual invocation.
const SHORT_FLAGS: [&str; 6] = ["-pes", "-opt", "-hpes", "-hopt", "-bughunt", "-find"];

#[derive(Parser, Debug)]
#[command(
    name = "hyperbmc",
    version,
    about = "Bounded model checking of HyperLTL formulas via QBF",
    override_usage = "hyperbmc [OPTIONS] <MODEL>... <FORMULA> <K> <-pes|-opt|-hpes|-hopt> [-bughunt|-find]",
    group(ArgGroup::new("semantics").required(true).args(["pes", "opt", "hpes", "hopt"])),
    group(ArgGroup::new("mode").args(["bughunt", "find"]))
)]
struct Args {
    /// One model per quantifier, then the formula file, then the bound k
    #[arg(required = true, num_args = 3.., value_names = ["MODEL", "FORMULA", "K"])]
    inputs: Vec<String>,

    /// Pessimistic semantics
    #[arg(long)]
    pes: bool,
    /// Optimistic semantics
    #[arg(long)]
    opt: bool,
    /// Halting pessimistic semantics
    #[arg(long)]
    hpes: bool,
    /// Halting optimistic semantics
    #[arg(long)]
    hopt: bool,

    /// Look for a counterexample to the formula (default)
    #[arg(long)]
    bughunt: bool,
    /// Look for a witness of the formula
    #[arg(long)]
    find: bool,

    /// External QBF solver command; the query file path is appended
    #[arg(long, env = "HYPERBMC_SOLVER", value_name = "CMD")]
    solver: Option<String>,
    /// Format handed to the external solver
    #[arg(long, default_value = "qdimacs", value_name = "FORMAT")]
    solver_format: Format,
    /// Seconds to wait for the external solver
    #[arg(long, default_value_t = 600, value_name = "SECS")]
    timeout: u64,

    /// Write the query instead of solving it
    #[arg(long, value_name = "FORMAT")]
    emit: Option<Format>,
    /// Path of the emitted query; the map goes next to it with a `.map` extension
    #[arg(short, long, value_name = "PATH", requires = "emit")]
    output: Option<PathBuf>,

    /// Print the verdict as JSON
    #[arg(long)]
    json: bool,
    /// Give up after this many solver decisions
    #[arg(long, value_name = "N")]
    budget: Option<u64>,
}

impl Args {
    fn semantics(&self) -> Semantics {
        match (self.pes, self.opt, self.hpes) {
            (true, _, _) => Semantics::Pes,
            (_, true, _) => Semantics::Opt,
            (_, _, true) => Semantics::Hpes,
            _ => Semantics::Hopt,
        }
    }

    fn mode(&self) -> Mode {
        if self.find {
            Mode::Find
        } else {
            Mode::Bughunt
        }
    }
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(EX_DATAERR, format!("cannot read {path}: {e}")))
}

fn plural(n: usize, word: &str) -> String {
    format!("{n} {word}{}", if n == 1 { "" } else { "s" })
}

fn run(args: &Args) -> Result<u8, Failure> {
    let (k_text, rest) = args.inputs.split_last().expect("clap enforces three inputs");
    let (formula_path, model_paths) = rest.split_last().expect("clap enforces three inputs");
    let k: usize = k_text
        .parse()
        .map_err(|_| fail(EX_USAGE, format!("the bound must be a non-negative integer, got `{k_text}`")))?;

    let f: HyperFormula =
        parse_formula(&read(formula_path)?).map_err(|e| fail(EX_DATAERR, format!("{formula_path}:{e}")))?;
    if model_paths.len() != f.prefix.len() {
        return Err(fail(
            EX_USAGE,
            format!(
                "{} given for a formula with {}; pass one model per quantifier, in quantifier order",
                plural(model_paths.len(), "model"),
                plural(f.prefix.len(), "quantifier")
            ),
        ));
    }
    let mut models = Vec::new();
    for p in model_paths {
        models.push(parse_model(&read(p)?, p).map_err(|e| fail(EX_DATAERR, e.to_string()))?);
    }
    let refs: Vec<&SymbolicKripke> = models.iter().collect();

    let mut opts = CheckOptions::new(k, args.semantics(), args.mode());
    if let Some(format) = args.emit {
        let out = args.output.clone().unwrap_or_else(|| {
            let stem = Path::new(formula_path).file_stem().map_or("query".into(), |s| s.to_string_lossy().into_owned());
            PathBuf::from(format!("{stem}.{}", format.extension()))
        });
        return emit(&refs, &f, &opts, format, &out);
    }
    opts.backend = match &args.solver {
        Some(command) => Backend::External {
            command: command.clone(),
            format: args.solver_format,
            timeout: Duration::from_secs(args.timeout),
        },
        None => Backend::Internal(SolverConfig { budget: args.budget, ..SolverConfig::default() }),
    };
    let verdict = check(&refs, &f, &opts).map_err(check_failure)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&verdict).expect("verdicts serialize"));
    } else {
        print!("{}", render(&verdict));
    }
    Ok(match verdict.answer {
        Answer::Holds => 0,
        Answer::Violated => 1,
        Answer::Inconclusive => 2,
    })
}

fn check_failure(e: CheckError) -> Failure {
    match e {
        CheckError::Formula(_) | CheckError::Unroll(_) => fail(EX_DATAERR, e.to_string()),
        _ => fail(EX_SOFTWARE, e.to_string()),
    }
}

fn emit(
    models: &[&SymbolicKripke],
    f: &HyperFormula,
    opts: &CheckOptions,
    format: Format,
    out: &Path,
) -> Result<u8, Failure> {
    let inst = build_query(models, f, opts).map_err(check_failure)?;
    let map_path = out.with_extension("map");
    let io = |p: &Path, e: std::io::Error| fail(EX_IOERR, format!("cannot write {}: {e}", p.display()));
    fs::write(out, format.emit(&inst.qbf)).map_err(|e| io(out, e))?;
    fs::write(&map_path, inst.to_map()).map_err(|e| io(&map_path, e))?;
    println!("wrote {} and {}", out.display(), map_path.display());
    Ok(0)
}

fn render(v: &Verdict) -> String {
    let mut s = format!("{}\n({})\n", v.yes_no(), v.answer);
    if !v.traces.is_empty() {
        s += match v.mode {
            Mode::Bughunt => "counterexample:\n",
            Mode::Find => "witness:\n",
        };
        for t in &v.traces {
            s += &t.to_string();
        }
    }
    for n in &v.notes {
        s += &format!("note: {n}\n");
    }
    s
}

fn main() -> ExitCode {
    let argv = std::env::args().map(|a| if SHORT_FLAGS.contains(&a.as_str()) { format!("-{a}") } else { a });
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EX_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, msg }) => {
            eprintln!("hyperbmc: {msg}");
            ExitCode::from(code)
        }
    }
}
