use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use movcat_cli::report::without_timing;
use movcat_cli::verify::verify_report;
use movcat_cli::{run, Command as Sub, JobSpec};
use movcat_core::complexes::{fixtures, parse_presentation_file};

fn movcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_movcat"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("movcat runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    format!("tests/data/{name}")
}

#[test]
fn bs12_positive_direction_is_not_movable() {
    let o = movcat(&["movable", "--input", &data("bs12.pres"), "--xi", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("NotMovable{d=2}"), "{}", stdout(&o));
}

#[test]
fn bs12_negative_direction_is_movable() {
    let o = movcat(&[
        "movable",
        "--input",
        &data("bs12.pres"),
        "--xi",
        "-1",
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Movable{Δ=-2 + t1}"), "{}", stdout(&o));
}

#[test]
fn surface_pattern_with_one_trivial_factor() {
    let o = movcat(&["surfaces", "--pattern", "2:nz,3:z,2:nz", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let t = &v["results"][0]["value"];
    assert_eq!(
        (
            t["cat1"].as_u64(),
            t["cat_xi"].as_u64(),
            t["difference"].as_i64()
        ),
        (Some(5), Some(3), Some(2))
    );
}

#[test]
fn circle_chain_lists_ten_terms() {
    let o = movcat(&[
        "chain",
        "--input",
        &data("circle.pres"),
        "--cutoff",
        "10",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let ic = &v["results"][0]["value"]["chain"];
    assert_eq!(ic["terms"].as_u64(), Some(10));
    assert_eq!(ic["residual_min"].as_str(), Some("10"));
}

#[test]
fn input_errors_exit_with_two() {
    let o = movcat(&["movable", "--input", "tests/data/missing.pres"]);
    assert_eq!(o.status.code(), Some(2));
    let o = movcat(&["movable"]);
    assert_eq!(o.status.code(), Some(2));
    let o = movcat(&["surfaces", "--pattern", "1:nz"]);
    assert_eq!(o.status.code(), Some(2));
    let o = movcat(&["chain", "--fixture", "circle", "--cutoff", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = movcat(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_carry_line_and_column() {
    let dir = tempdir("parse-errors");
    let path = dir.join("bad.pres");
    fs::write(
        &path,
        "[generators]\na t\n[relators]\nt a t^-1 b\n[xi]\n1\n[project]\na = 0\nt = 1\n",
    )
    .unwrap();
    let o = movcat(&["movable", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 4, column"), "{err}");
}

#[test]
fn unknown_only_results_exit_with_three() {
    let o = movcat(&["movable", "--fixture", "circle-squared", "--box", "0"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

fn tempdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("movcat-cli-{name}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn emitted_fixtures_parse_back_identically() {
    let dir = tempdir("fixtures");
    let o = movcat(&["fixtures", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for fx in fixtures::corpus() {
        let Some(file) = &fx.file else { continue };
        let text = fs::read_to_string(dir.join(format!("{}.pres", fx.name))).unwrap();
        assert_eq!(text, file.to_text());
        let parsed = parse_presentation_file(&text).unwrap();
        assert_eq!(parsed.complex().unwrap(), fx.complex, "{}", fx.name);
        assert_eq!(parsed.cycle.as_ref(), Some(&fx.cycle));
        assert_eq!(parsed.to_text(), text);
    }
}

#[test]
fn committed_data_files_match_the_fixture_corpus() {
    for fx in fixtures::corpus() {
        let Some(file) = &fx.file else { continue };
        let text = fs::read_to_string(
            Path::new(env!("CARGO_MANIFEST_DIR")).join(data(&format!("{}.pres", fx.name))),
        )
        .unwrap();
        assert_eq!(text, file.to_text(), "{}", fx.name);
    }
}

#[test]
fn reports_are_identical_across_thread_counts() {
    let run_with = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_movcat"))
            .args(["surfaces", "--all-up-to", "2", "--format", "json"])
            .env("MOVCAT_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        without_timing(&String::from_utf8(o.stdout).unwrap())
    };
    let one = run_with("1");
    assert_eq!(one, run_with("4"));
    assert_eq!(one, run_with("3"));
    assert_eq!(one["results"].as_array().unwrap().len(), 20);
}

fn fixture_job(command: Sub, names: &[&str]) -> JobSpec {
    let mut job = JobSpec::new(command);
    job.inputs = names
        .iter()
        .map(|n| movcat_cli::job::InputRef::Fixture(n.to_string()))
        .collect();
    job
}

#[test]
fn tampered_verdicts_fail_verification() {
    let job = fixture_job(Sub::Movable, &["bs12-neg", "bs12"]);
    let report = run(&job).unwrap();
    let mut v: Value = serde_json::from_str(&report.to_json()).unwrap();
    assert!(verify_report(&v, &job).failures.is_empty());
    v["results"][0]["value"]["outcome"]["delta"] = Value::from("-3 + t1");
    v["results"][1]["value"]["outcome"]["witness"]["d"] = Value::from("1");
    let ver = verify_report(&v, &job);
    assert_eq!(ver.checked, 2);
    assert_eq!(ver.failures.len(), 2, "{:?}", ver.failures);
    assert!(ver.failures[0].starts_with("result 0 (movability)"));
}

#[test]
fn tampered_chains_and_pairings_fail_verification() {
    let mut job = fixture_job(Sub::Chain, &["circle"]);
    job.cutoff = num_rational::BigRational::from_integer(6.into());
    let report = run(&job).unwrap();
    let mut v: Value = serde_json::from_str(&report.to_json()).unwrap();
    v["results"][0]["value"]["chain"]["chain"]["coords"][0] = Value::from("-1 - t1 - t1^2");
    assert_eq!(verify_report(&v, &job).failures.len(), 1);

    let job = fixture_job(Sub::Pairing, &["genus2"]);
    let report = run(&job).unwrap();
    let mut v: Value = serde_json::from_str(&report.to_json()).unwrap();
    v["results"][0]["value"]["report"]["witness"]["value"] = Value::from("2");
    assert_eq!(verify_report(&v, &job).failures.len(), 1);
}

#[test]
fn tampered_ledgers_and_tables_fail_verification() {
    let mut job = JobSpec::new(Sub::Surfaces);
    job.patterns = vec!["2:nz,2:z".into()];
    let report = run(&job).unwrap();
    let mut v: Value = serde_json::from_str(&report.to_json()).unwrap();
    v["results"][0]["value"]["cat1"] = Value::from(9);
    assert_eq!(verify_report(&v, &job).failures.len(), 1);

    let mut job = JobSpec::new(Sub::Catbound);
    job.inputs = vec![movcat_cli::job::InputRef::File(
        Path::new(env!("CARGO_MANIFEST_DIR")).join(data("surface.facts")),
    )];
    let report = run(&job).unwrap();
    let mut v: Value = serde_json::from_str(&report.to_json()).unwrap();
    assert!(verify_report(&v, &job).failures.is_empty());
    v["results"][0]["value"]["derivations"][1]["value"] = Value::from(4);
    assert!(!verify_report(&v, &job).failures.is_empty());
}

#[test]
fn changed_inputs_fail_verification() {
    let dir = tempdir("digest");
    let path = dir.join("circle.pres");
    fs::write(&path, fixtures::circle().file.unwrap().to_text()).unwrap();
    let mut job = JobSpec::new(Sub::Movable);
    job.inputs = vec![movcat_cli::job::InputRef::File(path.clone())];
    let report = run(&job).unwrap();
    let v: Value = serde_json::from_str(&report.to_json()).unwrap();
    fs::write(&path, fixtures::torus().file.unwrap().to_text()).unwrap();
    let ver = verify_report(&v, &job);
    assert!(
        ver.failures[0].contains("input changed"),
        "{:?}",
        ver.failures
    );
}

const GOLDEN: &[(&str, &[&str])] = &[
    (
        "movable-bs12",
        &["movable", "--input", "tests/data/bs12.pres", "--xi", "1"],
    ),
    (
        "movable-bs12-neg",
        &["movable", "--input", "tests/data/bs12.pres", "--xi", "-1"],
    ),
    (
        "movable-corpus",
        &[
            "movable",
            "--fixture",
            "circle",
            "--fixture",
            "torus",
            "--fixture",
            "genus2",
            "--fixture",
            "circle-squared",
        ],
    ),
    (
        "field-movable-corpus",
        &[
            "field-movable",
            "--fixture",
            "bs12",
            "--fixture",
            "bs12-neg",
            "--fixture",
            "genus2",
        ],
    ),
    (
        "pairing-genus2",
        &[
            "pairing",
            "--input",
            "tests/data/genus2.pres",
            "--monodromy",
            "generic",
            "--monodromy",
            "2",
            "--monodromy",
            "-1/3",
        ],
    ),
    (
        "pairing-bs12",
        &[
            "pairing",
            "--input",
            "tests/data/bs12.pres",
            "--monodromy",
            "generic",
            "--monodromy",
            "1/2",
        ],
    ),
    (
        "novikov-diag-bs12",
        &[
            "novikov-diag",
            "--input",
            "tests/data/bs12.pres",
            "--cutoff",
            "4",
        ],
    ),
    (
        "novikov-diag-genus2",
        &[
            "novikov-diag",
            "--input",
            "tests/data/genus2.pres",
            "--cutoff",
            "3",
        ],
    ),
    (
        "chain-circle",
        &[
            "chain",
            "--input",
            "tests/data/circle.pres",
            "--cutoff",
            "10",
        ],
    ),
    (
        "chain-bs12-neg",
        &[
            "chain",
            "--input",
            "tests/data/bs12-neg.pres",
            "--cutoff",
            "5",
        ],
    ),
    (
        "weights-surface",
        &[
            "weights",
            "--input",
            "tests/data/surface.facts",
            "--expr",
            "dual(v)",
        ],
    ),
    (
        "catbound-surface",
        &["catbound", "--input", "tests/data/surface.facts"],
    ),
    (
        "surfaces-sample",
        &[
            "surfaces",
            "--pattern",
            "2:nz,3:z,2:nz",
            "--pattern",
            "2:z,2:z",
        ],
    ),
];

#[test]
fn golden_reports_match_and_verify() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in GOLDEN {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--format", "json", "--verify"]);
        let o = movcat(&full);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        let got = without_timing(&stdout(&o));
        assert_eq!(
            got["verification"]["failures"],
            Value::Array(vec![]),
            "{name}"
        );
        let path = dir.join(format!("{name}.json"));
        if update {
            fs::create_dir_all(&dir).unwrap();
            fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
            continue;
        }
        let want: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(got, want, "{name} differs from its golden report");
    }
}

#[test]
fn golden_reports_verify_from_their_contents() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, args) in GOLDEN {
        let v: Value =
            serde_json::from_str(&fs::read_to_string(dir.join(format!("{name}.json"))).unwrap())
                .unwrap();
        let cli = <movcat_cli::Cli as clap::Parser>::try_parse_from(
            std::iter::once("movcat").chain(args.iter().copied()),
        )
        .unwrap();
        let mut job = JobSpec::from_cli(cli).unwrap();
        job.inputs = job
            .inputs
            .into_iter()
            .map(|r| match r {
                movcat_cli::job::InputRef::File(p) => {
                    movcat_cli::job::InputRef::File(Path::new(env!("CARGO_MANIFEST_DIR")).join(p))
                }
                other => other,
            })
            .collect();
        let mut v = v;
        for input in v["inputs"].as_array_mut().unwrap() {
            if input["source"] == "file" {
                let p = Path::new(env!("CARGO_MANIFEST_DIR")).join(input["name"].as_str().unwrap());
                input["name"] = Value::from(p.to_str().unwrap());
            }
        }
        let ver = verify_report(&v, &job);
        assert!(ver.failures.is_empty(), "{name}: {:?}", ver.failures);
        assert!(ver.checked > 0, "{name}");
    }
}
