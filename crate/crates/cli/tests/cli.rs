//! End-to-end tests running the actual binary: exit codes, report
//! round-trips, determinism, and the documented fixtures.

use std::process::{Command, Output};

use glocsur::report::Report;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_glocsur"));
    c.env_remove("GLOCSUR_REPORT");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn write_temp(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join("glocsur-cli-tests");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("write fixture");
    path.to_string_lossy().into_owned()
}

fn emit_preset(name: &str, params: Option<&str>) -> String {
    let mut args = vec!["presets", "emit", name];
    if let Some(p) = params {
        args.push("--params");
        args.push(p);
    }
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0), "emit {} failed: {:?}", name, out);
    stdout(&out)
}

#[test]
fn norm_one_fixture_check() {
    let file = write_temp("norm_one.json", &emit_preset("norm_one_torus", None));
    let out = run(&["check", &file, "--report", "json"]);
    assert_eq!(out.status.code(), Some(1), "split complement: not surjective");
    let report = Report::parse(&stdout(&out)).expect("machine report parses");
    match report {
        Report::Check(r) => {
            assert!(!r.surjective);
            assert_eq!(r.obstruction.canonical, "Z/2");
            assert_eq!(r.per_place.len(), 1);
            assert_eq!(r.per_place[0].id, "v_split");
            assert_eq!(
                r.radical_predictions
                    .as_ref()
                    .expect("radical data was emitted")[0]
                    .condition_holds,
                false
            );
        }
        other => panic!("expected a check report, got {:?}", other),
    }
}

#[test]
fn emitted_presets_reproduce_documented_verdicts() {
    // name, params, expected exit code of `check`
    let cases = [
        ("zero", None, 0),
        ("trivial_Z", None, 0),
        ("Z_mod_n_trivial", Some(r#"{"n": 3}"#), 0),
        ("norm_one_torus", None, 1),
        ("induced_lattice", None, 0),
        ("direct_sum", None, 1),
        ("twist_by_subgroup_action", None, 1),
    ];
    for (name, params, expected) in cases {
        let file = write_temp(&format!("{}.json", name), &emit_preset(name, params));
        let out = run(&["check", &file]);
        assert_eq!(
            out.status.code(),
            Some(expected),
            "preset {}: {:?}",
            name,
            stdout(&out)
        );
    }
}

#[test]
fn machine_reports_are_deterministic_and_round_trip() {
    let file = write_temp("norm_one_det.json", &emit_preset("norm_one_torus", None));
    let a = run(&["check", &file, "--report", "json"]);
    let b = run(&["check", &file, "--report", "json"]);
    assert_eq!(a.stdout, b.stdout, "byte-identical machine reports");
    let parsed = Report::parse(&stdout(&a)).expect("parses");
    let re_emitted = match &parsed {
        Report::Check(_) => parsed.to_json(),
        _ => panic!("check report expected"),
    };
    assert_eq!(re_emitted, stdout(&a), "emit . parse is the identity");
}

#[test]
fn env_var_selects_format() {
    let file = write_temp("norm_one_env.json", &emit_preset("norm_one_torus", None));
    let out = bin()
        .args(["check", &file])
        .env("GLOCSUR_REPORT", "json")
        .output()
        .expect("binary runs");
    assert!(stdout(&out).starts_with('{'), "env var switches to json");
    // explicit flag wins over the environment
    let out = bin()
        .args(["check", &file, "--report", "text"])
        .env("GLOCSUR_REPORT", "json")
        .output()
        .expect("binary runs");
    assert!(stdout(&out).starts_with("verdict:"));
}

#[test]
fn malformed_inputs_exit_two_with_diagnostics() {
    // decomposition set that is not closed under multiplication
    let bad = r#"{
        "group": {"cayley": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]},
        "module": {"ambient_rank": 1, "relations": [], "action": {"0": [[1]], "1": [[1]], "2": [[1]], "3": [[1]]}},
        "places": [{"id": "v", "kind": "finite", "decomp": [0, 1]}],
        "S": {"explicit": [], "symbolic_tail": null}
    }"#;
    let file = write_temp("bad_decomp.json", bad);
    let out = run(&["check", &file]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(
        err.contains("places[0].decomp") && err.contains("not a subgroup"),
        "diagnostic names the violation: {}",
        err
    );

    // schema violation: unknown key
    let file = write_temp("bad_key.json", r#"{"grup": {}}"#);
    let out = run(&["check", &file]);
    assert_eq!(out.status.code(), Some(2));

    // real place with the wrong decomposition order
    let bad_real = r#"{
        "group": {"cayley": [[0,1],[1,0]]},
        "module": {"ambient_rank": 1, "relations": [], "action": {"0": [[1]], "1": [[-1]]}},
        "places": [{"id": "r", "kind": "real", "decomp": [0]}],
        "S": {"explicit": [], "symbolic_tail": null}
    }"#;
    let file = write_temp("bad_real.json", bad_real);
    let out = run(&["check", &file]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("order 2"), "diagnostic: {}", err);
}

#[test]
fn group_order_cap_is_enforced() {
    let big = r#"{
        "group": {"perm_generators": [[1,2,3,4,5,0]]},
        "module": {"ambient_rank": 0, "relations": [], "action": {"generators": [[]]}},
        "places": [],
        "S": {"explicit": [], "symbolic_tail": null}
    }"#;
    let file = write_temp("big_group.json", big);
    let out = run(&["check", &file, "--max-group-order", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("cap"), "diagnostic mentions the cap: {}", err);
}

#[test]
fn sixterm_swap_fixture() {
    let seq = r#"{
        "group": {"cayley": [[0,1],[1,0]]},
        "b1": {"ambient_rank": 1, "relations": [], "action": {"0": [[1]], "1": [[1]]}},
        "b2": {"ambient_rank": 2, "relations": [], "action": {"0": [[1,0],[0,1]], "1": [[0,1],[1,0]]}},
        "b3": {"ambient_rank": 1, "relations": [], "action": {"0": [[1]], "1": [[-1]]}},
        "i": [[1],[1]],
        "j": [[1,-1]]
    }"#;
    let file = write_temp("swap_seq.json", seq);
    let out = run(&["sixterm", &file, "--report", "json", "--verify-exactness"]);
    assert_eq!(out.status.code(), Some(0));
    let report = Report::parse(&stdout(&out)).expect("parses");
    match report {
        Report::Sixterm(r) => {
            assert_eq!(r.delta, vec![vec!["1/2".to_string()]]);
            let e = r.exactness.expect("certificate requested");
            assert!(e.all_exact);
            assert_eq!(e.nodes.len(), 4);
        }
        other => panic!("expected a sixterm report, got {:?}", other),
    }

    // a sequence that is not exact is rejected with exit 2
    let broken = seq.replace("[[1],[1]]", "[[2],[2]]");
    let file = write_temp("broken_seq.json", &broken);
    let out = run(&["sixterm", &file]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("im i differs from ker j"), "{}", err);
}

#[test]
fn selftest_is_deterministic() {
    let a = run(&["selftest", "--seed", "42", "--report", "json"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let b = run(&["selftest", "--seed", "42", "--report", "json"]);
    assert_eq!(a.stdout, b.stdout, "same seed, byte-identical report");
    match Report::parse(&stdout(&a)).expect("parses") {
        Report::Selftest(r) => {
            assert!(r.all_passed);
            assert_eq!(r.seed, 42);
            assert!(r.suites.iter().any(|s| s.name == "snf_substrate"));
        }
        other => panic!("expected a selftest report, got {:?}", other),
    }
}

#[test]
fn problem_files_round_trip_through_the_parser() {
    use glocsur::problem::ProblemFile;
    for (name, params) in [
        ("trivial_Z", None),
        ("trivial_Z", Some(r#"{"group_order": 4}"#)),
        ("zero", None),
        ("Z_mod_n_trivial", Some(r#"{"n": 3}"#)),
        ("Z_mod_n_trivial", Some(r#"{"n": 6, "group_order": 3}"#)),
        ("norm_one_torus", None),
        ("norm_one_torus", Some(r#"{"order": 5}"#)),
        ("induced_lattice", Some(r#"{"group_order": 3}"#)),
        ("direct_sum", None),
        ("twist_by_subgroup_action", None),
    ] {
        let text = emit_preset(name, params);
        let parsed = ProblemFile::parse(&text).expect("emitted file parses");
        parsed
            .load(glocsur::problem::default_order_cap())
            .expect("emitted file validates");
        let re_emitted = serde_json::to_string_pretty(&parsed).expect("serializes");
        assert_eq!(re_emitted.trim_end(), text.trim_end(), "preset {}", name);
    }
}
