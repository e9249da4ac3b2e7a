use std::time::Instant;

use hyperbmc::corpus::{bundled_root, load_corpus, run_corpus};

#[test]
fn expectations_agree_with_oracle() {
    for case in load_corpus(&bundled_root()).unwrap() {
        let t = Instant::now();
        let oracle = case.oracle_answer().unwrap_or_else(|e| panic!("{}: {e}", case.name));
        eprintln!("{:<22} oracle {oracle} in {:?}", case.name, t.elapsed());
        assert_eq!(oracle, case.expected, "{}", case.name);
    }
}

#[test]
fn corpus_reproduces_frozen_verdicts() {
    let cases = load_corpus(&bundled_root()).unwrap();
    assert!(cases.len() >= 7);
    let report = run_corpus(&cases, None);
    eprintln!("{report}");
    assert!(report.all_passed(), "{report}");
}

#[test]
fn grid_witness_is_the_unique_shortest_path() {
    use hyperbmc::checker::{check, Answer, Value};

    let cases = load_corpus(&bundled_root()).unwrap();
    let case = cases.iter().find(|c| c.name == "shortest_path_grid").unwrap();
    let (models, f) = case.inputs().unwrap();
    let refs: Vec<_> = models.iter().collect();
    let mut opts = hyperbmc::checker::CheckOptions::new(case.k, case.semantics, case.mode);
    let v = check(&refs, &f, &opts).unwrap();
    assert_eq!(v.answer, Answer::Holds);
    let a = v.traces.iter().find(|t| t.tid == "A").expect("witness for A");
    let cells: Vec<(Value, Value)> = a.steps.iter().map(|s| (s.get("x").unwrap(), s.get("y").unwrap())).collect();
    let expect: Vec<(Value, Value)> = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 3), (2, 3), (3, 3)]
        .iter()
        .map(|&(x, y)| (Value::Int(x), Value::Int(y)))
        .collect();
    assert_eq!(cells, expect);

    // one step short of the goal, no path can be confirmed
    opts.k = case.k - 1;
    assert_eq!(check(&refs, &f, &opts).unwrap().answer, Answer::Inconclusive);
}
