use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const COMMANDS: [&str; 8] = ["sample", "clique", "moments", "cutoff", "variance", "scaling", "concentration", "check"];

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_graphon-lab"));
    c.env_remove("GRAPHON_LAB_JOBS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Compares `--help` output with the stored copy; `UPDATE_GOLDEN=1` rewrites it.
#[test]
fn help_matches_golden_files() {
    let update = std::env::var("UPDATE_GOLDEN").is_ok_and(|v| v == "1");
    let mut names = vec![None];
    names.extend(COMMANDS.iter().map(|c| Some(*c)));
    for name in names {
        let o = match name {
            Some(c) => run(&[c, "--help"]),
            None => run(&["--help"]),
        };
        assert!(o.status.success());
        let path = golden_dir().join(format!("{}.txt", name.unwrap_or("main")));
        if update {
            fs::create_dir_all(golden_dir()).unwrap();
            fs::write(&path, stdout(&o)).unwrap();
        } else {
            let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
            assert_eq!(stdout(&o), want, "help for {name:?} changed; rerun with UPDATE_GOLDEN=1 if intended");
        }
    }
}

#[test]
fn every_documented_flag_is_accepted_somewhere() {
    let helps: String = COMMANDS.iter().map(|c| stdout(&run(&[c, "--help"]))).collect();
    for flag in [
        "--graphon", "--n ", "--k ", "--n-grid", "--trials", "--seed", "--method", "--threshold", "--center",
        "--budget-nodes", "--budget-ms", "--jobs", "--out", "--config", "--table", "--suite", "--lower", "--upper",
        "--in ",
    ] {
        assert!(helps.contains(flag), "{flag} missing from help");
    }
}

#[test]
fn scaling_with_flags_runs() {
    let o = run(&["scaling", "--graphon", "sqrt:r=1", "--n-grid", "1024,2048,4096", "--trials", "10", "--seed", "7"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["spec"], "sqrt:r=1");
    assert_eq!(v["seed"], 7);
    assert_eq!(v["method"], "threshold_greedy");
    assert!(v["version"].is_string());
    assert!(v["exponent"].as_f64().unwrap() > 0.3);
}

#[test]
fn moments_on_a_non_rank_one_kernel_is_a_usage_error() {
    let o = run(&["moments", "--graphon", "line", "--n", "100", "--k", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not supported"));
}

#[test]
fn malformed_spec_and_missing_flags_exit_two() {
    let o = run(&["cutoff", "--graphon", "sqrt:q=1", "--n", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--graphon"));
    let o = run(&["cutoff", "--graphon", "sqrt:r=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--n"));
    let o = run(&["check", "--suite", "dominance", "--lower", "poly:r=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--upper"));
    let o = run(&["cutoff", "--graphon", "sqrt:r=1", "--n", "10", "--jobs", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# defaults\ngraphon = poly:r=2\nn = 50\n").unwrap();
    let c = conf.to_str().unwrap();
    let v = json(&run(&["cutoff", "--config", c, "--graphon", "sqrt:r=1"]));
    assert_eq!(v["spec"], "sqrt:r=1");
    assert_eq!(v["n"], 50);
    let v = json(&run(&["cutoff", "--config", c]));
    assert_eq!(v["spec"], "poly:r=2");

    fs::write(&conf, "graphon = poly:r=2\nwidth = 3\n").unwrap();
    let o = run(&["cutoff", "--config", c, "--n", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`width`"));
}

#[test]
fn cutoff_at_one_million() {
    let v = json(&run(&["cutoff", "--graphon", "sqrt:r=1", "--n", "1000000"]));
    assert_eq!(v["k_star"], 1646);
    assert_eq!(v["command"], "cutoff");
}

#[test]
fn clique_of_a_stored_complete_graph() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k5.edges");
    let mut text = String::from("5 10\n");
    for i in 0..5 {
        for j in i + 1..5 {
            text += &format!("{i} {j}\n");
        }
    }
    fs::write(&path, text).unwrap();
    let o = run(&["clique", "--in", path.to_str().unwrap(), "--method", "exact", "--budget-nodes", "10000000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["result"]["size"], 5);
    assert_eq!(v["result"]["status"], "optimal");
    let o = run(&["clique", "--in", path.to_str().unwrap(), "--graphon", "sqrt:r=1", "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sampled_graph_round_trips_through_clique() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.edges");
    let p = path.to_str().unwrap();
    let o = run(&["sample", "--graphon", "poly:r=1", "--n", "200", "--seed", "3", "--out", p]);
    assert!(o.status.success(), "{}", stderr(&o));
    let from_file = json(&run(&["clique", "--in", p]));
    let direct = json(&run(&["clique", "--graphon", "poly:r=1", "--n", "200", "--seed", "3"]));
    assert_eq!(from_file["result"]["size"], direct["result"]["size"]);
    assert_eq!(json(&o)["edges"], json(&run(&["sample", "--graphon", "poly:r=1", "--n", "200", "--seed", "3", "--out", p]))["edges"]);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let args = |out: &Path| {
        vec![
            "scaling".to_string(),
            "--graphon".into(),
            "poly:r=2".into(),
            "--n-grid".into(),
            "128,256,512".into(),
            "--trials".into(),
            "4".into(),
            "--seed".into(),
            "9".into(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    let oa = bin().args(args(&a)).output().unwrap();
    let ob = bin().env("GRAPHON_LAB_JOBS", "1").args(args(&b)).output().unwrap();
    assert!(oa.status.success() && ob.status.success());
    assert_eq!(oa.stdout, ob.stdout);
    let only = |root: &Path| fs::read_dir(root).unwrap().next().unwrap().unwrap().path();
    let (ra, rb) = (only(&a), only(&b));
    assert!(ra.file_name().unwrap().to_str().unwrap().ends_with("-seed9"));
    let strip_time = |p: &Path| -> Vec<String> {
        fs::read_to_string(p.join("trials.csv"))
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect()
    };
    assert_eq!(strip_time(&ra), strip_time(&rb));
    let strip_meta = |p: &Path| {
        let mut v: Value = serde_json::from_str(&fs::read_to_string(p.join("summary.json")).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("meta");
        v
    };
    assert_eq!(strip_meta(&ra), strip_meta(&rb));

    let o1 = run(&["clique", "--graphon", "sqrt:r=1", "--n", "300", "--method", "threshold_greedy"]);
    let o2 = run(&["clique", "--graphon", "sqrt:r=1", "--n", "300", "--method", "threshold_greedy"]);
    let strip = |o: &Output| {
        let mut v = json(o);
        v.as_object_mut().unwrap().remove("meta");
        v
    };
    assert_eq!(strip(&o1), strip(&o2));
}

#[test]
fn check_suites_report_pass_and_fail() {
    let o = run(&["check", "--suite", "dominance", "--lower", "poly:r=1", "--upper", "poly:r=2", "--n", "500", "--trials", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["passed"], true);
    let o = run(&["check", "--suite", "regime", "--graphon", "sqrt:r=1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["report"]["regime"], "theta_sqrt");
    // the line kernel is flat along the diagonal and steep across it
    let o = run(&["check", "--suite", "regime", "--graphon", "line", "--at", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["passed"], false);
    let o = run(&["check", "--suite", "moment-mc", "--graphon", "const:p=1", "--n", "5", "--k", "3", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["report"]["empirical_mean"], 10.0);
    let o = run(&["check", "--suite", "union-bound", "--n-grid", "256,512", "--trials", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["spec"], "line");
}

#[test]
fn tables_are_csv() {
    let o = run(&["moments", "--graphon", "sqrt:r=1", "--n", "100", "--k", "2:4", "--table"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,k,log_expected");
    assert_eq!(lines.len(), 4);
    let o = run(&["variance", "--graphon", "sqrt:r=1", "--n", "100", "--k", "1:3", "--table"]);
    let text = stdout(&o);
    assert!(text.starts_with("n,k,log_expected,log_ratio\n100,1,"));
    let o = run(&["variance", "--graphon", "sqrt:r=1", "--n", "10", "--k", "6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn concentration_of_the_complete_graph() {
    let v = json(&run(&["concentration", "--graphon", "const:p=1", "--n", "100", "--trials", "10", "--method", "exact"]));
    assert_eq!(v["coefficient_of_variation"], 0.0);
    assert_eq!(v["max_over_min"], 1.0);
}
