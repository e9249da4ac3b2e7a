//! Standalone front end to the built-in QBF solver.
//!
//! Reads a QCIR or QDIMACS file and answers in the usual solver style:
//! `s cnf 1` / `s cnf 0`, a `V` line with the leading block's values when
//! one is available, and exit code 10 (SAT) or 20 (UNSAT).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use hyperbmc::solver::{solve, Format, SolveError, SolverConfig};

#[derive(Parser, Debug)]
#[command(name = "qbfsolve", version, about = "Solve a QCIR or QDIMACS file")]
struct Args {
    file: PathBuf,
    /// Input format; guessed from the contents when omitted
    #[arg(long)]
    format: Option<Format>,
    /// Give up after this many decisions
    #[arg(long, value_name = "N")]
    budget: Option<u64>,
    /// Turn off requirement propagation
    #[arg(long)]
    no_propagate: bool,
    /// Turn off the cofactor memo
    #[arg(long)]
    no_memo: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("qbfsolve: cannot read {}: {e}", args.file.display());
            return ExitCode::from(66);
        }
    };
    let format = args.format.unwrap_or_else(|| Format::sniff(&text));
    let q = match format.parse(&text) {
        Ok(q) => q,
        Err(e) => {
            eprintln!("qbfsolve: {}: {e}", args.file.display());
            return ExitCode::from(65);
        }
    };
    let cfg = SolverConfig { budget: args.budget, propagate: !args.no_propagate, memo: !args.no_memo };
    match solve(&q, &cfg) {
        Ok(r) => {
            println!(
                "c decisions {} propagations {} memo hits {}",
                r.stats.decisions, r.stats.propagations, r.stats.memo_hits
            );
            println!("s cnf {} {} {}", r.status.is_sat() as u8, q.num_vars, q.prefix.len());
            if let Some(cert) = &r.certificate {
                let lits: Vec<String> =
                    cert.iter().map(|&(v, b)| if b { v.to_string() } else { format!("-{v}") }).collect();
                println!("V {} 0", lits.join(" "));
            }
            ExitCode::from(if r.status.is_sat() { 10 } else { 20 })
        }
        Err(SolveError::BudgetExceeded { decisions }) => {
            println!("c gave up after {decisions} decisions");
            println!("s cnf -1");
            ExitCode::from(0)
        }
        Err(e) => {
            eprintln!("qbfsolve: {e}");
            ExitCode::from(70)
        }
    }
}
