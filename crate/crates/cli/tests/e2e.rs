use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_blocklie");

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("e2e");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

struct Run {
    code: i32,
    report: String,
    stderr: String,
}

fn run_config(name: &str, config: &str, extra: &[&str]) -> Run {
    let cfg = scratch(&format!("{name}.toml"));
    std::fs::write(&cfg, config).unwrap();
    let out = scratch(&format!("{name}.out"));
    let _ = std::fs::remove_file(&out);
    let o = Command::new(BIN)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .unwrap();
    Run {
        code: o.status.code().unwrap(),
        report: std::fs::read_to_string(&out).unwrap_or_default(),
        stderr: String::from_utf8_lossy(&o.stderr).into_owned(),
    }
}

fn machine(name: &str, config: &str) -> (i32, Value) {
    let r = run_config(name, config, &["--format", "machine"]);
    assert!(r.code < 2, "{name}: exit {} {}", r.code, r.stderr);
    (r.code, serde_json::from_str(&r.report).unwrap())
}

#[test]
fn axioms_on_the_witt_product() {
    let (code, v) = machine("axioms", "job = \"axioms\"\np = \"3/2\"\nmu = -2\ntheta = 1\n");
    assert_eq!(code, 0);
    let names: Vec<&str> = v["verdicts"].as_array().unwrap().iter().map(|x| x["verdict"].as_str().unwrap()).collect();
    assert_eq!(names, ["holds_universally", "holds_universally"]);
    let (code, v) = machine("axioms_lie", "job = \"axioms\"\nstructure = \"lie\"\np = 1\nq = 1\nmu = 2\ntheta = 1\n");
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"][1]["name"], "jacobi");
}

#[test]
fn affinize_with_mutations_and_reindexing() {
    let cfg = "job = \"affinize\"\np = \"3/2\"\nq = \"5/4\"\nmu = \"-2/3\"\ntheta = 1\nmutations = 6\nseed = 11\ns = \"5/2\"\n";
    let (code, v) = machine("affinize", cfg);
    assert_eq!(code, 0, "{v:#}");
    assert_eq!(v["results"]["mutation_agreements"], 6);
    assert_eq!(v["verdicts"][3]["name"], "block_sz_reindex");
    let r = run_config("affinize_noseed", "job = \"affinize\"\np = 1\nq = 1\nmutations = 2\n", &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("`seed`"), "{}", r.stderr);
    let r = run_config("affinize_flagseed", "job = \"affinize\"\np = 1\nq = 1\nmutations = 2\n", &["--seed", "4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn blockcheck_and_zero_q() {
    let (code, v) = machine("blockcheck", "job = \"blockcheck\"\np = 3\nq = 2\n");
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 5);
    let r = run_config("blockcheck_q0", "job = \"blockcheck\"\np = 1\nq = 0\n", &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("q must be nonzero"));
}

#[test]
fn classify_negative_control_exits_1() {
    let cfg = "job = \"classify\"\np = 2\nq = 1\n[weight]\nlabels = [1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800]\n";
    let (code, v) = machine("classify_fact", cfg);
    assert_eq!(code, 1);
    assert_eq!(v["verdicts"][0]["verdict"], "not_quasifinite_up_to_horizon");
    assert_eq!(v["results"]["certificate"], Value::Null);
    let r = run_config("classify_noweight", "job = \"classify\"\np = 2\nq = 1\n", &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("`weight`"), "{}", r.stderr);
}

#[test]
fn singular_and_crosscheck() {
    let w = "[weight]\nqp = [{ poly = [3], base = -1 }]\n";
    let (code, v) = machine("singular", &format!("job = \"singular\"\np = 0\nq = 1\n{w}"));
    assert_eq!(code, 0);
    assert_eq!(v["results"]["kernel"][0]["coefficients"], serde_json::json!(["1", "1"]));
    let (code, v) = machine("crosscheck", &format!("job = \"crosscheck\"\np = 0\nq = 1\n{w}"));
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"][0]["verdict"], "match");
    let (code, _) = machine("crosscheck_p2", &format!("job = \"crosscheck\"\np = 2\nq = 1\n{w}"));
    assert!(code == 0 || code == 1);
}

#[test]
fn closure_membership() {
    let cfg = "job = \"closure\"\np = 1\nq = 1\ngenerators = [\"L[1,0]\", \"L[2,0]\"]\nmembers = [\"L[4,0]\", \"c\"]\n[window]\ngrade_min = 0\ngrade_max = 6\nlevel_max = 0\n";
    let (code, v) = machine("closure", cfg);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["membership"][0]["member"], true);
    assert_eq!(v["results"]["membership"][1]["member"], false);
}

#[test]
fn modcheck_with_and_without_central_action() {
    let base = "job = \"modcheck\"\np = 3\nq = 1\n[module]\nkind = \"Aab\"\na = \"1/2\"\nb = 0\nweights = [-2, 2]\n";
    let (code, _) = machine("modcheck", base);
    assert_eq!(code, 0);
    let (code, v) = machine("modcheck_c", &format!("{base}central = 1\n"));
    assert_eq!(code, 1);
    assert_eq!(v["results"]["failure_count"], 20);
    let w = &v["verdicts"][0]["witness"];
    assert_eq!(w["point"]["alpha"], "-3");
    assert_eq!(w["point"]["beta"], "3");
    assert_eq!(w["residual"], "-2*v[-2]");
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let cfg = "job = \"affinize\"\np = 2\nq = 3\nmu = 1\ntheta = 2\nmutations = 5\nseed = 99\n";
    for format in ["machine", "text"] {
        let a = run_config("det_a", cfg, &["--format", format, "--threads", "1"]);
        let b = run_config("det_b", cfg, &["--format", format, "--threads", "4"]);
        let c = run_config("det_c", cfg, &["--format", format]);
        assert_eq!(a.code, b.code);
        assert_eq!(a.report, b.report);
        assert_eq!(a.report, c.report);
        assert!(!a.report.is_empty());
    }
}

#[test]
fn golden_reports() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("golden");
    for name in ["classify", "crosscheck", "blockcheck"] {
        let cfg = std::fs::read_to_string(dir.join(format!("{name}.toml"))).unwrap();
        let expected = std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
        let r = run_config(&format!("golden_{name}"), &cfg, &["--format", "machine"]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert_eq!(r.report, expected, "{name}");
    }
}

#[test]
fn schema_lists_every_job_and_golden_key() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(root.join("schema/config.schema.json")).unwrap()).unwrap();
    let props = schema["properties"].as_object().unwrap();
    let jobs: Vec<&str> = props["job"]["enum"].as_array().unwrap().iter().map(|j| j.as_str().unwrap()).collect();
    assert_eq!(jobs, ["axioms", "affinize", "blockcheck", "classify", "singular", "crosscheck", "closure", "modcheck"]);
    for name in ["classify", "crosscheck", "blockcheck"] {
        let golden: Value = serde_json::from_str(&std::fs::read_to_string(root.join(format!("golden/{name}.json"))).unwrap()).unwrap();
        for key in golden["job"].as_object().unwrap().keys() {
            if key != "job" {
                assert!(props.contains_key(key), "{key} missing from schema");
            }
        }
    }
}

#[test]
fn malformed_config_reports_the_line() {
    let r = run_config("malformed", "job = \"classify\"\np = 2\nq = 1.5\n", &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
}
