use std::path::{Path, PathBuf};

use epinarr::bundled::VARICELLA_SOURCE;
use epinarr::cli::{run, EXIT_FINDINGS, EXIT_INPUT, EXIT_IO, EXIT_NUMERICAL, EXIT_OK};
use tempfile::TempDir;

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn epinarr(args: &[&str]) -> Outcome {
    std::env::set_var("EPINARR_COLOR", "never");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("epinarr").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn summary_prints_eight_fields() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "v.biopepa", VARICELLA_SOURCE);
    let r = epinarr(&["summary", s(&m)]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(
        r.out,
        "nb_FunctionDefinitions : 0\nnb_CompartmentTypes : 1\nnb_Compartments : 7\nnb_Species : 42\n\
         nb_Parameters : 8\nnb_InitialAssignments : 42\nnb_Rules : 0\nnb_Reactions : 49\n"
    );
    let json: serde_json::Value = serde_json::from_str(&epinarr(&["summary", "--json", s(&m)]).out).unwrap();
    assert_eq!(json["nb_Species"], 42);
}

#[test]
fn summary_survives_export_and_import() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "v.biopepa", VARICELLA_SOURCE);
    let xml = dir.path().join("v.xml");
    let back = dir.path().join("back.biopepa");
    assert_eq!(epinarr(&["export", s(&m), "-o", s(&xml)]).code, EXIT_OK);
    assert_eq!(epinarr(&["import", s(&xml), "-o", s(&back)]).code, EXIT_OK);
    let a = epinarr(&["summary", s(&m)]).out;
    assert_eq!(epinarr(&["summary", s(&xml)]).out, a);
    assert_eq!(epinarr(&["summary", s(&back)]).out, a);
    assert_eq!(epinarr(&["diff", s(&m), s(&back)]).code, EXIT_OK);
}

#[test]
fn diff_names_a_removed_species() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "v.biopepa", VARICELLA_SOURCE);
    let reference = dir.path().join("ref.xml");
    epinarr(&["export", s(&m), "-o", s(&reference)]);
    let xml = std::fs::read_to_string(&reference).unwrap();
    let broken: String = xml
        .lines()
        .filter(|l| !l.contains(r#"<species id="VS_Age7""#))
        .map(|l| format!("{l}\n"))
        .collect();
    let candidate = write(&dir, "broken.xml", &broken);

    let r = epinarr(&["diff", s(&reference), s(&candidate)]);
    assert_eq!(r.code, EXIT_FINDINGS);
    assert!(r.out.contains("VS_Age7"), "{}", r.out);

    let json: serde_json::Value =
        serde_json::from_str(&epinarr(&["diff", "--json", s(&reference), s(&candidate)]).out).unwrap();
    assert_eq!(json["missingSpecies"], serde_json::json!(["VS_Age7"]));

    let v = epinarr(&["validate", "--json", s(&candidate)]);
    assert_eq!(v.code, EXIT_FINDINGS);
    let issues: serde_json::Value = serde_json::from_str(&v.out).unwrap();
    assert!(issues.as_array().unwrap().iter().all(|i| i["subject"] == "VS_Age7"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(epinarr(&["parse", "nope.biopepa"]).code, EXIT_IO);
    assert_eq!(epinarr(&["frobnicate"]).code, EXIT_INPUT);
    assert_eq!(epinarr(&["--version"]).code, EXIT_OK);

    let bad = write(&dir, "bad.biopepa", "k = 1;\nS = (r,1) <<< S;\n");
    let r = epinarr(&["parse", s(&bad)]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.starts_with(&format!("error: {}:2:", s(&bad))), "{}", r.err);

    let invalid = write(&dir, "invalid.biopepa", "r = k * S; S = (r,1) << S; S[1]\n");
    assert_eq!(epinarr(&["validate", s(&invalid)]).code, EXIT_FINDINGS);
    assert_eq!(epinarr(&["export", s(&invalid)]).code, EXIT_FINDINGS);

    let noext = write(&dir, "model", "S = (); S[1]\n");
    assert_eq!(epinarr(&["parse", s(&noext)]).code, EXIT_INPUT);
    assert_eq!(epinarr(&["--in-format", "biopepa", "parse", s(&noext)]).code, EXIT_OK);

    let xml = write(&dir, "x.xml", "<sbml/>");
    assert_eq!(epinarr(&["parse", s(&xml)]).code, EXIT_INPUT);

    let blowup = write(&dir, "b.biopepa", "r = A * A; A = (r,1) >> A; A[10]\n");
    assert_eq!(
        epinarr(&["simulate", s(&blowup), "--mode", "ode", "--t-end", "10"]).code,
        EXIT_NUMERICAL
    );

    let frac = write(&dir, "f.biopepa", "r = 1; A = (r,1) << A; A[2.5]\n");
    assert_eq!(
        epinarr(&["simulate", s(&frac), "--mode", "ssa", "--t-end", "1"]).code,
        EXIT_FINDINGS
    );
    assert_eq!(
        epinarr(&["simulate", s(&frac), "--mode", "euler", "--t-end", "1"]).code,
        EXIT_INPUT
    );
    assert_eq!(
        epinarr(&["simulate", s(&frac), "--mode", "ode", "--t-end", "-1"]).code,
        EXIT_INPUT
    );
}

#[test]
fn simulate_writes_replicate_files() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "d.biopepa", "d = 1; r = d * A; A = (r,1) << A; A[100]\n");
    let prefix = dir.path().join("run");
    let args = [
        "simulate",
        s(&m),
        "--mode",
        "ssa",
        "--t-end",
        "1",
        "--output-every",
        "0.5",
        "--replicates",
        "3",
        "--seed",
        "4",
    ];
    let r = epinarr(&[&args[..], &["-o", s(&prefix)]].concat());
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    for name in ["run_r0.csv", "run_r1.csv", "run_r2.csv", "run_mean.csv"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(text.starts_with("time,A\n0,100\n"), "{name}: {text}");
        assert_eq!(text.lines().count(), 4);
    }
    let first = epinarr(&args);
    assert_eq!(first.out, epinarr(&args).out);
    assert_eq!(
        first.out,
        std::fs::read_to_string(dir.path().join("run_mean.csv")).unwrap()
    );

    assert_eq!(
        epinarr(&["simulate", s(&m), "--mode", "ode", "--t-end", "1", "-o", s(&prefix)]).code,
        EXIT_OK
    );
    let ode = std::fs::read_to_string(dir.path().join("run.csv")).unwrap();
    assert_eq!(ode.lines().count(), 1 + 101);
}

#[test]
fn narrate_formats() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "v.biopepa", VARICELLA_SOURCE);
    let txt = epinarr(&["narrate", s(&m)]);
    assert_eq!(txt.code, EXIT_OK);
    assert!(txt.out.starts_with("Model varicella\n"));
    assert!(epinarr(&["narrate", "--format", "md", s(&m)])
        .out
        .starts_with("# Model varicella\n"));
    assert!(epinarr(&["narrate", "--format", "html", s(&m)])
        .out
        .starts_with("<!DOCTYPE html>"));
    assert_eq!(epinarr(&["narrate", "--format", "pdf", s(&m)]).code, EXIT_INPUT);
}
