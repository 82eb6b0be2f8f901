//! End-to-end runs of the `bpol` binary.

use std::process::{Command, Output};

use bpol_core::corpus::default_corpus;
use bpol_core::io::{complex_from_json, complex_to_json, ideal_to_json, parse_ideal, ComplexDocument};
use bpol_core::polarize::sq_ideal;
use bpol_core::resolution::Resolution;
use bpol_core::Monomial;

fn bpol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bpol")).args(args).output().expect("bpol runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn inline(gens: &[Monomial]) -> String {
    gens.iter().map(Monomial::to_string).collect::<Vec<_>>().join(",")
}

const CUBES: &str = "x1^3,x1^2*x2,x1*x2^2,x2^3";

#[test]
fn polarize_the_binary_cubes() {
    let text = stdout(&bpol(&["--ideal", CUBES, "polarize"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["x[1,1]*x[1,2]*x[1,3]", "x[1,1]*x[1,2]*x[2,3]", "x[1,1]*x[2,2]*x[2,3]", "x[2,1]*x[2,2]*x[2,3]"]);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["--ideal", "x1*x4,x2*x4", "--closure", "--format", "json", "resolve"][..],
        &["--ideal", "x1*x4,x2*x4", "--closure", "morse", "--verify"],
        &["--ideal", "x1*x4,x2*x4", "--closure", "--format", "dot", "poset"],
        &["corpus", "--size", "12"],
    ] {
        assert_eq!(bpol(args).stdout, bpol(args).stdout, "{args:?}");
    }
}

#[test]
fn corpus_output_matches_the_library() {
    let text = stdout(&bpol(&["corpus"]));
    let blocks: Vec<&str> = text.split("\n\n").filter(|b| !b.trim().is_empty()).collect();
    let corpus = default_corpus();
    assert_eq!(blocks.len(), corpus.len());
    for (block, i) in blocks.iter().zip(&corpus) {
        assert_eq!(parse_ideal(block).unwrap().gens(), i.gens());
    }
}

#[test]
fn complex_documents_round_trip() {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    for (k, i) in default_corpus().into_iter().enumerate().take(15) {
        let input = dir.join(format!("round-trip-{k}.json"));
        std::fs::write(&input, ideal_to_json(i.ideal())).unwrap();
        let text = stdout(&bpol(&["--format", "json", "resolve", input.to_str().unwrap()]));
        let c = complex_from_json(&text).unwrap();
        assert_eq!(&c, Resolution::build(&i).unwrap().complex());
        let doc: ComplexDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(complex_to_json(&c, doc.config.clone()).trim_end(), text.trim_end());
    }
}

#[test]
fn ideal_documents_round_trip() {
    let text = stdout(&bpol(&["--ideal", CUBES, "--format", "json", "polarize"]));
    let parsed = parse_ideal(&text).unwrap();
    assert_eq!(parsed.len(), 4);
    assert!(parsed.gens().iter().all(Monomial::is_squarefree));
    let inline: Vec<String> = parsed.gens().iter().map(Monomial::to_string).collect();
    let betti = stdout(&bpol(&["--ideal", &inline.join(","), "--format", "json", "betti"]));
    let betti: serde_json::Value = serde_json::from_str(&betti).unwrap();
    assert_eq!(betti["totals"], serde_json::json!([4, 3]));
}

#[test]
fn staircase_gamma_is_the_squarefree_operator() {
    for i in default_corpus() {
        let gens = inline(i.gens());
        let gamma = stdout(&bpol(&["--ideal", &gens, "gamma", "--a=0,1,2,..."]));
        assert_eq!(gamma, stdout(&bpol(&["--ideal", &gens, "sq"])));
        let expect = sq_ideal(&parse_ideal(&gens.replace(',', "\n")).unwrap()).unwrap();
        assert_eq!(parse_ideal(&gamma).unwrap().gens(), expect.gens());
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bpol(args).status.code();
    assert_eq!(code(&["--ideal", "x1*x4,x2*x4", "--closure", "verify"]), Some(0));
    assert_eq!(code(&["--ideal", "x1^2,x1*x2,x2^2,x2*x3", "verify", "--bpol"]), Some(1));
    assert_eq!(code(&["--ideal", "x1^2,x1*x2,x1*x3,x2^2", "--closure", "verify", "--bpol"]), Some(0));
    // Not Borel without --closure.
    assert_eq!(code(&["--ideal", "x2^2", "resolve"]), Some(2));
    assert_eq!(code(&["--ideal", "x1^^2", "polarize"]), Some(2));
    assert_eq!(code(&["--ideal", "x1^2", "gamma", "--a=1,0"]), Some(2));
    assert_eq!(code(&["--ideal", "x1^2", "frobnicate"]), Some(2));
    assert_eq!(code(&["--ideal", "x1*x4,x2*x4", "--closure", "--max-gens", "5", "morse"]), Some(2));
}

#[test]
fn verify_reads_the_ideal_from_the_document() {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    for (target, a) in [("bpol", None), ("S", None), ("gamma", Some("--a=0,0,1,1"))] {
        let mut args = vec!["--ideal", "x1*x3^2,x2^3", "--closure", "--format", "json", "resolve", "--target", target];
        args.extend(a);
        let text = stdout(&bpol(&args));
        let path = dir.join(format!("cli-{target}.json"));
        std::fs::write(&path, text).unwrap();
        let out = bpol(&["verify", "--complex", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{target}: {}", String::from_utf8_lossy(&out.stdout));
    }
}
