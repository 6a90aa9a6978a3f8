use std::path::PathBuf;
use std::process::{Command, Output};

use qaoa_lab::fixtures::TREE3_P2_PI;

fn qaoa_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qaoa-lab"))
        .args(args)
        .env_remove("QAOA_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qaoa-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn symmetry_check_certifies_k4() {
    let o = qaoa_lab(&["symmetry-check", "--graph", "K4", "--p", "1", "--trials", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("OWS certified at 1e-10"));
}

#[test]
fn impossible_tolerance_is_a_certification_failure() {
    let o = qaoa_lab(&["symmetry-check", "--graph", "K5", "--p", "2", "--trials", "5", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn orbit_reproduces_fixture_sets() {
    let o = qaoa_lab(&["orbit", "--params", "0.156pi,0.177pi,0.286pi,0.0933pi", "--class", "OWS"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with("canonical"))
        .map(|l| l.split(',').skip(2).map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 8);
    for set in TREE3_P2_PI {
        assert!(
            rows.iter().any(|r| r.iter().zip(set).all(|(a, b)| (a - b).abs() < 1e-3)),
            "missing {set:?}"
        );
    }
    assert!(text.contains("canonical,U1,0.156,0.177,0.286,0.0933"));
    let fixture = qaoa_lab(&["orbit", "--fixture", "tree3-p2", "--class", "OWS"]);
    assert_eq!(stdout(&fixture), text);
}

#[test]
fn analytic_table_has_guess_column() {
    let o = qaoa_lab(&["analytic", "--d-max", "70", "--d-prime", "3,4,5", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,d_prime,k,delta,random_guess_ref"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3 * 69);
    let k44 = rows.iter().find(|r| r[0] == 4.0 && r[1] == 3.0).unwrap();
    assert!((k44[3] - 0.005245).abs() < 5e-7);
    assert!(rows.iter().filter(|r| r[0] == r[1]).all(|r| r[3] == 0.0));
}

#[test]
fn simulate_reports_ratio() {
    let o = qaoa_lab(&["simulate", "--graph", "C4", "--params", "pi/4,pi/8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["expectation"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!((v["ratio"].as_f64().unwrap() - 0.75).abs() < 1e-12);
}

#[test]
fn graph_files_and_fields_are_accepted() {
    let path = scratch("tri.txt");
    std::fs::write(&path, "3 3\n0 1 1\n1 2 1\n0 2 1\nh\n0 1\n").unwrap();
    let o = qaoa_lab(&["simulate", "--graph", path.to_str().unwrap(), "--params", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    // zero angles: uniform superposition, fields average out
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let expectation: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
    assert!((expectation - 1.5).abs() < 1e-12);
    let o = qaoa_lab(&["simulate", "--graph", "C4", "--fields", "1,-1,0,0", "--params", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(qaoa_lab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qaoa_lab(&["simulate", "--graph", "nope", "--params", "0,0"]).status.code(), Some(1));
    assert_eq!(qaoa_lab(&["simulate", "--graph", "C4", "--params", "0,0,1"]).status.code(), Some(1));
    assert_eq!(qaoa_lab(&["simulate", "--graph", "reg:5:3", "--params", "0,0"]).status.code(), Some(2));
    assert_eq!(qaoa_lab(&["orbit", "--params", "0.1,0.1", "--class", "integer"]).status.code(), Some(2));
    assert_eq!(qaoa_lab(&["--help"]).status.code(), Some(0));
    assert_eq!(qaoa_lab(&["--version"]).status.code(), Some(0));
    let bad_env = Command::new(env!("CARGO_BIN_EXE_qaoa-lab"))
        .args(["analytic", "--d-max", "4", "--d-prime", "3"])
        .env("QAOA_LAB_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(1));
}

#[test]
fn transfer_scan_output_is_byte_identical() {
    let args = |out: &str| {
        vec![
            "transfer-scan".to_string(),
            "--n".into(),
            "8".into(),
            "--degrees".into(),
            "3,4".into(),
            "--donor-degrees".into(),
            "3".into(),
            "--donors".into(),
            "U1,nonU".into(),
            "--instances".into(),
            "2".into(),
            "--out".into(),
            out.into(),
        ]
    };
    let a = scratch("a.csv");
    let b = scratch("b.csv");
    let run = |path: &PathBuf, threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_qaoa-lab"))
            .args(args(path.to_str().unwrap()))
            .env("QAOA_LAB_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    };
    run(&a, "1");
    run(&b, "3");
    let left = std::fs::read(&a).unwrap();
    assert_eq!(left, std::fs::read(&b).unwrap());
    let text = String::from_utf8(left).unwrap();
    assert!(text.starts_with("model,n,d,d_prime,p,domain,mean_delta,p25,p75,random_guess_ref\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn scan_without_rewire_is_a_usage_error() {
    let o = qaoa_lab(&["transfer-scan", "--model", "ws", "--n", "8", "--degrees", "4", "--donor-degrees", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn rqaoa_writes_step_log() {
    let log = scratch("steps.jsonl");
    let o = qaoa_lab(&["rqaoa", "--graph", "C6", "--p", "1", "--stop-at", "3", "--log", log.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols[3], "6");
    assert_eq!(cols[9], "EWS;EWS;EWS;EWS");
    let text = std::fs::read_to_string(&log).unwrap();
    assert_eq!(text.lines().count(), 3);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["offset_convention"].is_string());
    }
}
