use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hyperbmc::checker::{interpret, query_formula, Mode};
use hyperbmc::hyperltl::parse_formula;
use hyperbmc::oracle::check_brute;
use hyperbmc::smv::parse_model;
use hyperbmc::solver::Status;
use hyperbmc::unroll::Semantics;

const BIN: &str = env!("CARGO_BIN_EXE_hyperbmc");
const QBFSOLVE: &str = env!("CARGO_BIN_EXE_qbfsolve");

fn corpus(case: &str, file: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(case).join(file).display().to_string()
}

fn ni_args() -> Vec<String> {
    let m = corpus("ni_kexp", "k_exp.smv");
    vec![m.clone(), m, corpus("ni_kexp", "prop.hq"), "3".into(), "-pes".into()]
}

fn run(args: &[String]) -> Output {
    Command::new(BIN).args(args).env_remove("HYPERBMC_SOLVER").output().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn with(mut base: Vec<String>, extra: &[&str]) -> Vec<String> {
    base.extend(extra.iter().map(|s| s.to_string()));
    base
}

#[test]
fn ni_counterexample() {
    let out = run(&with(ni_args(), &["-bughunt"]));
    assert_eq!(out.status.code(), Some(1), "{}", text(&out.stderr));
    let stdout = text(&out.stdout);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "YES");
    assert_eq!(lines[1], "(violated)");
    assert_eq!(lines[2], "counterexample:");
    assert_eq!(
        &lines[3..8],
        [
            "trace A (k_exp):",
            "  step 0: low=FALSE, high=FALSE, halt=FALSE, PC=1",
            "  step 1: low=FALSE, high=TRUE, halt=FALSE, PC=2",
            "  step 2: low=TRUE, high=TRUE, halt=TRUE, PC=3",
            "  step 3: low=TRUE, high=TRUE, halt=TRUE, PC=3",
        ]
    );
}

#[test]
fn mode_defaults_to_bughunt() {
    let explicit = run(&with(ni_args(), &["-bughunt"]));
    let implicit = run(&ni_args());
    assert_eq!(implicit.status.code(), explicit.status.code());
    assert_eq!(implicit.stdout, explicit.stdout);
}

#[test]
fn double_dash_flags_are_accepted() {
    let mut args = ni_args();
    args[4] = "--pes".into();
    assert_eq!(run(&with(args, &["--bughunt"])).status.code(), Some(1));
}

#[test]
fn arity_mismatch_is_a_usage_error() {
    let args = vec![corpus("ni_kexp", "k_exp.smv"), corpus("ni_kexp", "prop.hq"), "3".into(), "-pes".into()];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(64));
    let err = text(&out.stderr);
    assert!(err.contains("1 model given for a formula with 2 quantifiers"), "{err}");
}

#[test]
fn usage_errors() {
    // no semantics flag
    let mut args = ni_args();
    args.pop();
    assert_eq!(run(&args).status.code(), Some(64));
    // both modes
    assert_eq!(run(&with(ni_args(), &["-bughunt", "-find"])).status.code(), Some(64));
    // bad bound
    let mut args = ni_args();
    args[3] = "three".into();
    let out = run(&args);
    assert_eq!(out.status.code(), Some(64));
    assert!(text(&out.stderr).contains("non-negative integer"));
    // unknown option
    assert_eq!(run(&with(ni_args(), &["--frobnicate"])).status.code(), Some(64));
    // help is not an error
    assert_eq!(run(&["--help".to_string()]).status.code(), Some(0));
}

#[test]
fn input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = ni_args();
    args[0] = dir.path().join("missing.smv").display().to_string();
    assert_eq!(run(&args).status.code(), Some(65));

    let bad = dir.path().join("bad.hq");
    fs::write(&bad, "forall A. exists B. low[A] <-> ").unwrap();
    let mut args = ni_args();
    args[2] = bad.display().to_string();
    assert_eq!(run(&args).status.code(), Some(65));

    let bad = dir.path().join("bad.smv");
    fs::write(&bad, "MODULE main\nVAR\n  x : boolean\n").unwrap();
    let mut args = ni_args();
    args[0] = bad.display().to_string();
    let out = run(&args);
    assert_eq!(out.status.code(), Some(65));
    assert!(text(&out.stderr).contains("bad.smv"));

    // halting semantics on a model without a halt variable
    let nohalt = dir.path().join("nohalt.smv");
    fs::write(&nohalt, "MODULE main\nVAR\n  low : boolean;\n  high : boolean;\nASSIGN\n  init(low) := FALSE;\n")
        .unwrap();
    let m = nohalt.display().to_string();
    let args = vec![m.clone(), m, corpus("ni_kexp", "prop.hq"), "2".into(), "-hpes".into()];
    assert_eq!(run(&args).status.code(), Some(65));
}

#[test]
fn json_output() {
    let out = run(&with(ni_args(), &["--json"]));
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["answer"], "violated");
    assert_eq!(v["qbf_status"], "SAT");
    assert_eq!(v["semantics"], "pes");
    assert_eq!(v["mode"], "bughunt");
    assert_eq!(v["k"], 3);
    assert_eq!(v["traces"][0]["tid"], "A");
    assert_eq!(v["traces"][0]["steps"][1]["high"], true);
    assert_eq!(v["traces"][0]["steps"][1]["PC"], 2);
}

#[test]
fn budget_gives_unknown() {
    let c = |f: &str| corpus("shortest_path_grid", f);
    let args = vec![c("model.smv"), c("model.smv"), c("prop.hq"), "6".into(), "-hpes".into(), "-find".into()];
    let out = run(&with(args, &["--budget", "1"]));
    assert_eq!(out.status.code(), Some(2));
    let stdout = text(&out.stdout);
    assert!(stdout.starts_with("UNKNOWN\n(inconclusive)\n"), "{stdout}");
    assert!(stdout.contains("note: solver gave up"));
}

#[test]
fn multi_model_matches_oracle() {
    let c = |f: &str| corpus("coterm_diverge", f);
    let (m1, m2) = (c("model_p1.smv"), c("model_p2.smv"));
    let f = parse_formula(&fs::read_to_string(c("prop.hq")).unwrap()).unwrap();
    let k1 = parse_model(&fs::read_to_string(&m1).unwrap(), &m1).unwrap();
    let k2 = parse_model(&fs::read_to_string(&m2).unwrap(), &m2).unwrap();
    for sem in Semantics::ALL {
        for k in [2, 4] {
            let sat = check_brute(&[&k1, &k2], &query_formula(&f, Mode::Bughunt), k, sem).unwrap();
            let expected = match interpret(Mode::Bughunt, sem, Status::from_bool(sat)) {
                hyperbmc::checker::Answer::Holds => 0,
                hyperbmc::checker::Answer::Violated => 1,
                hyperbmc::checker::Answer::Inconclusive => 2,
            };
            let args = vec![m1.clone(), m2.clone(), c("prop.hq"), k.to_string(), format!("-{}", sem.name())];
            let out = run(&args);
            assert_eq!(out.status.code(), Some(expected), "{sem:?} k={k}\n{}", text(&out.stdout));
            let first = text(&out.stdout).lines().next().unwrap().to_string();
            assert_eq!(first, if sat { "YES" } else { "NO" });
        }
    }
}

fn emit(args: Vec<String>, format: &str, path: &Path) -> Output {
    run(&with(args, &["--emit", format, "-o", &path.display().to_string()]))
}

#[test]
fn emit_writes_query_and_map() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["qdimacs", "qcir"] {
        let p1 = dir.path().join(format!("a.{format}"));
        let p2 = dir.path().join(format!("b.{format}"));
        assert_eq!(emit(ni_args(), format, &p1).status.code(), Some(0));
        assert_eq!(emit(ni_args(), format, &p2).status.code(), Some(0));
        assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap(), "{format} emission is not deterministic");
        let map = fs::read_to_string(p1.with_extension("map")).unwrap();
        assert!(map.starts_with("c id tid var bit step\n1 A low 0 0\n"), "{map}");

        // the emitted query is SAT: NI is violated at k=3
        let out = Command::new(QBFSOLVE).arg(&p1).output().unwrap();
        assert_eq!(out.status.code(), Some(10), "{}", text(&out.stdout));
    }
}

#[test]
fn trivial_existential_is_one_clause() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("free.smv");
    fs::write(
        &m,
        "MODULE main\nVAR\n  a : boolean;\nASSIGN\n  init(a) := {TRUE, FALSE};\n  next(a) := {TRUE, FALSE};\n",
    )
    .unwrap();
    let f = dir.path().join("a.hq");
    fs::write(&f, "exists A. a[A]").unwrap();
    let out_path = dir.path().join("q.qdimacs");
    let args = vec![m.display().to_string(), f.display().to_string(), "0".into(), "-pes".into(), "-find".into()];
    assert_eq!(emit(args, "qdimacs", &out_path).status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out_path).unwrap(), "p cnf 1 1\ne 1 0\n1 0\n");
}

#[test]
fn emit_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    let target: PathBuf = dir.path().join("no/such/dir/q.qcir");
    let out = emit(ni_args(), "qcir", &target);
    assert_eq!(out.status.code(), Some(74));
}

#[test]
fn external_solver_via_qbfsolve() {
    let expected = run(&ni_args());
    for format in ["qdimacs", "qcir"] {
        let out = run(&with(ni_args(), &["--solver", QBFSOLVE, "--solver-format", format]));
        assert_eq!(out.status.code(), Some(1), "{}", text(&out.stderr));
        assert_eq!(text(&out.stdout), text(&expected.stdout), "{format}");
    }
    // the environment variable names the solver too
    let out = Command::new(BIN).args(ni_args()).env("HYPERBMC_SOLVER", QBFSOLVE).output().unwrap();
    assert_eq!(text(&out.stdout), text(&expected.stdout));
}

#[cfg(unix)]
fn script(dir: &Path, name: &str, body: &str) -> String {
    use std::os::unix::fs::PermissionsExt;
    let p = dir.join(name);
    fs::write(&p, format!("#!/bin/sh\n{body}\n")).unwrap();
    fs::set_permissions(&p, fs::Permissions::from_mode(0o755)).unwrap();
    p.display().to_string()
}

#[cfg(unix)]
#[test]
fn fake_external_solvers() {
    let dir = tempfile::tempdir().unwrap();
    // an UNSAT answer for a bug hunt under pes says nothing
    let unsat = script(dir.path(), "unsat.sh", "echo 's cnf 0 1 1'; exit 20");
    let out = run(&with(ni_args(), &["--solver", &unsat]));
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stdout).starts_with("NO\n(inconclusive)\n"));

    // the query path is passed as the last argument
    let checks =
        script(dir.path(), "checks.sh", "test -s \"$1\" && head -1 \"$1\" | grep -q '^p cnf' && exit 20; exit 1");
    assert_eq!(run(&with(ni_args(), &["--solver", &checks])).status.code(), Some(2));

    let garbage = script(dir.path(), "garbage.sh", "echo hello");
    let out = run(&with(ni_args(), &["--solver", &garbage]));
    assert_eq!(out.status.code(), Some(70));
    assert!(text(&out.stderr).contains("no verdict"));

    let slow = script(dir.path(), "slow.sh", "sleep 5");
    let out = run(&with(ni_args(), &["--solver", &slow, "--timeout", "1"]));
    assert_eq!(out.status.code(), Some(70));

    let out = run(&with(ni_args(), &["--solver", "/no/such/solver"]));
    assert_eq!(out.status.code(), Some(70));
}
