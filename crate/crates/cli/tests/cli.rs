use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

use tenbound::io::parse_tensor_json;
use tenbound_cli::schema::{output_schema, report_schema};

const EXAMPLE: &str =
    r#"{"order":3,"dim":2,"format":"dense","entries":[[[3,1],[2,1]],[[0,4],[2,3]]]}"#;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Sandbox {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, contents).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn example(&self) -> PathBuf {
        self.file("example.json", EXAMPLE)
    }

    fn identity(&self, n: usize) -> PathBuf {
        let rows: Vec<Vec<u8>> = (0..n)
            .map(|i| (0..n).map(|j| u8::from(i == j)).collect())
            .collect();
        let doc = json!({"order": 2, "dim": n, "format": "dense", "entries": rows});
        self.file(&format!("identity{n}.json"), &doc.to_string())
    }
}

fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_tenbound"))
        .args(args)
        .env_remove("TENBOUND_ENTRY_CAP")
        .env_remove("TENBOUND_CIRCUIT_CAP")
        .output()
        .unwrap()
}

fn args(parts: &[&dyn AsRef<std::ffi::OsStr>]) -> Vec<std::ffi::OsString> {
    parts.iter().map(|p| p.as_ref().to_os_string()).collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn validate(schema: &Value, instance: &Value) {
    let v = jsonschema::validator_for(schema).expect("schema compiles");
    let errors: Vec<String> = v.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{instance}");
}

/// Parses stdout, checks the envelope and the per-command schema, returns `outputs`.
fn report(o: &Output) -> Value {
    let v: Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&o.stdout)
        )
    });
    validate(&report_schema(), &v);
    let cmd = v["command"].as_str().unwrap();
    validate(&output_schema(cmd).expect("schema exists"), &v["outputs"]);
    v["outputs"].clone()
}

fn nums(v: &Value) -> Vec<f64> {
    match v {
        Value::Array(a) => a.iter().flat_map(nums).collect(),
        _ => vec![v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))],
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn bounds_minc_self_exact() {
    let s = Sandbox::new();
    let o = run(args(&[&"bounds", &"minc", &s.example(), &"--self"]));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = report(&o);
    assert_eq!(out["exact_fractions"], json!(["621/81", "417/49"]));
    assert!((out["lower"].as_f64().unwrap() - 621.0 / 81.0).abs() <= 1e-12);
    assert!((out["upper"].as_f64().unwrap() - 417.0 / 49.0).abs() <= 1e-12);
    assert_eq!(out["method"], "minc-self");
}

#[test]
fn bounds_rowsum() {
    let s = Sandbox::new();
    let o = run(args(&[&"bounds", &"rowsum", &s.example()]));
    assert_eq!(code(&o), 0);
    let out = report(&o);
    assert_eq!(nums(&out["lower"]), [7.0]);
    assert_eq!(nums(&out["upper"]), [9.0]);
    assert_eq!(out["witnesses"], json!({"low": 1, "high": 2}));
}

#[test]
fn bounds_zero_tensor_names_hypothesis() {
    let s = Sandbox::new();
    let zero = s.file(
        "zero.json",
        r#"{"order":3,"dim":2,"format":"coo","entries":[]}"#,
    );
    let o = run(args(&[&"bounds", &"minc", &zero, &"--self"]));
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("r_1(A) = 0"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn bounds_minc_pair_zero_b_row() {
    let s = Sandbox::new();
    let b = s.file(
        "b.json",
        r#"{"order":2,"dim":2,"format":"coo","entries":[{"idx":[1,1],"val":2}]}"#,
    );
    let o = run(args(&[&"bounds", &"minc", &s.example(), &b]));
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("r_2(B) = 0"), "{}", stderr(&o));
}

#[test]
fn bounds_other_subcommands_validate() {
    let s = Sandbox::new();
    let a = s.example();
    let i = s.identity(2);
    for argv in [
        args(&[&"bounds", &"minc-power", &a, &"--k", &"2"]),
        args(&[&"bounds", &"product", &a, &i]),
        args(&[&"bounds", &"power", &a, &"--k", &"2"]),
        args(&[&"bounds", &"minc", &a, &a]),
    ] {
        let o = run(&argv);
        assert_eq!(code(&o), 0, "{argv:?}: {}", stderr(&o));
        let out = report(&o);
        assert!(out["lower"].as_f64().unwrap() <= out["upper"].as_f64().unwrap());
    }
    let o = run(args(&[&"bounds", &"power", &a, &"--k", &"2"]));
    let out = report(&o);
    assert_eq!(nums(&out["lower"]), [343.0]);
    assert_eq!(nums(&out["upper"]), [729.0]);
}

#[test]
fn bounds_power_complex_is_upper_only() {
    let s = Sandbox::new();
    let c = s.file(
        "c.json",
        r#"{"order":2,"dim":2,"format":"coo","entries":[{"idx":[1,2],"val":[0,2]},{"idx":[2,1],"val":1}]}"#,
    );
    let o = run(args(&[&"bounds", &"power", &c, &"--k", &"1"]));
    assert_eq!(code(&o), 0);
    let out = report(&o);
    assert_eq!(out["method"], "power-upper");
    assert!(stderr(&o).contains("warning:"));
}

#[test]
fn regions_gershgorin_example() {
    let s = Sandbox::new();
    let o = run(args(&[
        &"regions",
        &"gershgorin",
        &s.example(),
        &s.identity(2),
    ]));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = report(&o);
    let disks = out["disks"].as_array().unwrap();
    assert_eq!(disks.len(), 2);
    assert_eq!(nums(&disks[0]["center"]), [3.0, 0.0]);
    assert_eq!(nums(&disks[1]["center"]), [3.0, 0.0]);
    assert_eq!(nums(&disks[0]["radius"]), [4.0]);
    assert_eq!(nums(&disks[1]["radius"]), [6.0]);
    assert!(out.get("containment").is_none());
}

#[test]
fn regions_brualdi_overlay() {
    let s = Sandbox::new();
    let svg = s.path("b.svg");
    let o = run(args(&[
        &"regions",
        &"brualdi",
        &s.example(),
        &s.identity(2),
        &"--overlay-eigs",
        &"--grid",
        &"60",
        &"--svg",
        &svg,
    ]));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = report(&o);
    assert_eq!(out["circuit_regions"].as_array().unwrap().len(), 3);
    let eigs = out["eigenvalues"].as_array().unwrap();
    assert_eq!(eigs.len(), 4);
    for e in eigs {
        assert_eq!(e["in_gershgorin"], json!(true), "{e}");
        assert_eq!(e["in_brualdi"], json!(true), "{e}");
    }
    assert_eq!(out["containment"]["holds"], json!(true));
    assert_eq!(out["containment"]["violations"], json!(0));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") || text.starts_with("<?xml"));
    assert_eq!(text.matches("data-row").count(), 2);
}

#[test]
fn regions_brualdi_disconnected() {
    let s = Sandbox::new();
    let d = s.file(
        "disconnected.json",
        r#"{"order":3,"dim":2,"format":"coo","entries":[{"idx":[1,1,2],"val":1},{"idx":[2,2,2],"val":1}]}"#,
    );
    let o = run(args(&[&"regions", &"brualdi", &d, &s.identity(2)]));
    assert_eq!(code(&o), 2);
    assert!(
        stderr(&o).contains("vertex 2 lies on no circuit"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn regions_svg_is_deterministic() {
    let s = Sandbox::new();
    let (p1, p2) = (s.path("one.svg"), s.path("two.svg"));
    for p in [&p1, &p2] {
        let o = run(args(&[
            &"regions",
            &"brualdi",
            &s.example(),
            &s.identity(2),
            &"--overlay-eigs",
            &"--grid",
            &"40",
            &"--svg",
            p,
        ]));
        assert_eq!(code(&o), 0);
    }
    assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
}

#[test]
fn rho_example_inside_interval() {
    let s = Sandbox::new();
    let o = run(args(&[&"rho", &s.example()]));
    assert_eq!(code(&o), 0);
    let out = report(&o);
    let rho = out["rho"].as_f64().unwrap();
    assert!((621.0 / 81.0..=417.0 / 49.0).contains(&rho), "{rho}");
    assert_eq!(out["converged"], json!(true));
}

#[test]
fn rho_identity() {
    let s = Sandbox::new();
    let o = run(args(&[&"rho", &s.identity(3)]));
    assert_eq!(code(&o), 0);
    let out = report(&o);
    assert!((out["rho"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
}

#[test]
fn rho_reducible_reports_and_exits_5() {
    let s = Sandbox::new();
    let r = s.file(
        "reducible.json",
        r#"{"order":2,"dim":2,"format":"dense","entries":[[2,1],[0,1]]}"#,
    );
    let o = run(args(&[&"rho", &r, &"--max-iter", &"300"]));
    assert_eq!(code(&o), 5);
    let out = report(&o);
    assert_eq!(out["converged"], json!(false));
    let lo = out["cw_interval"]["lower"].as_f64().unwrap();
    let hi = out["cw_interval"]["upper"].as_f64().unwrap();
    assert!(lo.is_finite() && hi.is_finite() && lo <= 2.0 && 2.0 <= hi);
    assert!(stderr(&o).contains("warning:"));
}

#[test]
fn rho_rejects_negative() {
    let s = Sandbox::new();
    let n = s.file(
        "neg.json",
        r#"{"order":2,"dim":2,"format":"dense","entries":[[1,-1],[0,1]]}"#,
    );
    let o = run(args(&[&"rho", &n]));
    assert_eq!(code(&o), 2);
}

#[test]
fn cw_cert_example() {
    let s = Sandbox::new();
    for k in ["1", "2"] {
        let o = run(args(&[&"cw-cert", &s.example(), &"--k", &k]));
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let out = report(&o);
        assert!(out["gap"].as_f64().unwrap() <= 1e-6);
        let b = parse_tensor_json(&out["b"].to_string()).unwrap();
        assert_eq!(b.order(), k.parse::<usize>().unwrap());
    }
}

#[test]
fn info_and_rowsum() {
    let s = Sandbox::new();
    let o = run(args(&[&"info", &s.example()]));
    assert_eq!(code(&o), 0);
    let out = report(&o);
    assert_eq!(nums(&out["row_sums"]["values"]), [7.0, 9.0]);
    assert_eq!(out["weakly_irreducible"]["standard"], json!(true));
    assert_eq!(out["nnz"], json!(7));
    let o = run(args(&[&"rowsum", &s.example()]));
    assert_eq!(report(&o)["argmax"], json!(2));
}

#[test]
fn product_round_trip() {
    let s = Sandbox::new();
    let sq = s.path("square.json");
    let o = run(args(&[
        &"product",
        &s.example(),
        &"--power",
        &"2",
        &"--out",
        &sq,
    ]));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = report(&o);
    assert_eq!(out["order"], json!(5));
    assert_eq!(nums(&out["row_sums"]["values"]), [417.0, 621.0]);
    let written = parse_tensor_json(&fs::read_to_string(&sq).unwrap()).unwrap();
    let printed = parse_tensor_json(&out["tensor"].to_string()).unwrap();
    assert_eq!(written, printed);

    let again = s.path("again.json");
    let o = run(args(&[&"product", &sq, &s.identity(2), &"--out", &again]));
    assert_eq!(code(&o), 0);
    let reread = parse_tensor_json(&fs::read_to_string(&again).unwrap()).unwrap();
    assert_eq!(reread, written);
}

#[test]
fn product_round_trip_sparse_and_complex() {
    let s = Sandbox::new();
    let a = s.file(
        "a.json",
        r#"{"order":3,"dim":3,"format":"coo","entries":[{"idx":[1,2,3],"val":[0.1,-2.5]},{"idx":[3,3,1],"val":1e-300}]}"#,
    );
    let out_path = s.path("out.json");
    let o = run(args(&[&"product", &a, &s.identity(3), &"--out", &out_path]));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let original = parse_tensor_json(&fs::read_to_string(&a).unwrap()).unwrap();
    let reread = parse_tensor_json(&fs::read_to_string(&out_path).unwrap()).unwrap();
    let (original, reread) = (original.to_complex(), reread.to_complex());
    assert_eq!(original.max_abs_diff(&reread), 0.0);
}

#[test]
fn entry_cap_env_and_flag() {
    let s = Sandbox::new();
    let a = s.example();
    let o = Command::new(env!("CARGO_BIN_EXE_tenbound"))
        .args(args(&[&"product", &a, &"--power", &"3"]))
        .env("TENBOUND_ENTRY_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    let o = run(args(&[
        &"--entry-cap",
        &"10",
        &"product",
        &a,
        &"--power",
        &"3",
    ]));
    assert_eq!(code(&o), 4);
}

#[test]
fn circuit_cap_env() {
    let s = Sandbox::new();
    let o = Command::new(env!("CARGO_BIN_EXE_tenbound"))
        .args(args(&[
            &"regions",
            &"brualdi",
            &s.example(),
            &s.identity(2),
        ]))
        .env("TENBOUND_CIRCUIT_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4, "{}", stderr(&o));
}

#[test]
fn parse_errors_exit_3() {
    let s = Sandbox::new();
    let bad = s.file(
        "bad.json",
        r#"{"order":2,"dim":2,"format":"dense","entries":[[1,2],[3]]}"#,
    );
    assert_eq!(code(&run(args(&[&"info", &bad]))), 3);
    assert_eq!(code(&run(args(&[&"info", &s.path("missing.json")]))), 3);
    assert_eq!(code(&run(["frobnicate"])), 3);
    assert_eq!(code(&run(["--help"])), 0);
}

#[test]
fn verify_paper_default_passes() {
    let o = run(["verify-paper"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS ")).count(), 6);
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_paper_json() {
    let o = run(["verify-paper", "--json"]);
    assert_eq!(code(&o), 0);
    let out = report(&o);
    assert_eq!(out["passed"], json!(true));
    assert_eq!(out["checks"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_paper_perturbed_fixture_fails() {
    let s = Sandbox::new();
    let mut doc: Value = serde_json::from_str(EXAMPLE).unwrap();
    doc["entries"][0][0][0] = json!(4);
    let f = s.file("perturbed.json", &doc.to_string());
    let o = run(args(&[&"verify-paper", &"--fixture", &f]));
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("row sums failed"), "{err}");
    assert!(err.contains("r_1 = 7"), "{err}");
}

#[test]
fn pretty_output_parses_identically() {
    let s = Sandbox::new();
    let a = run(args(&[&"bounds", &"rowsum", &s.example()]));
    let b = run(args(&[&"--pretty", &"bounds", &"rowsum", &s.example()]));
    let mut va: Value = serde_json::from_slice(&a.stdout).unwrap();
    let mut vb: Value = serde_json::from_slice(&b.stdout).unwrap();
    va["timing_ms"] = json!(0);
    vb["timing_ms"] = json!(0);
    assert_eq!(va, vb);
    assert!(String::from_utf8_lossy(&b.stdout).lines().count() > 1);
}

#[test]
fn floats_round_trip_through_reports() {
    let s = Sandbox::new();
    let o = run(args(&[&"bounds", &"minc", &s.example(), &"--self"]));
    let out = report(&o);
    assert_eq!(out["lower"].as_f64().unwrap(), 621.0 / 81.0);
    assert_eq!(out["upper"].as_f64().unwrap(), 417.0 / 49.0);
}
