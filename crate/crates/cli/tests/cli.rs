use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

const EXAMPLE: &str = "# three vertices, seven edges\nvertices 3\nedge 0 1\nedge 1 0\nedge 0 2\nedge 2 0\nedge 1 1\nedge 2 2\nedge 1 2\n";

fn graph_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn psnum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psnum"))
        .args(args)
        .env_remove("PS_DEFAULT_CAPS")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn compute_example_all_methods() {
    let f = graph_file(EXAMPLE);
    let out = psnum(&[
        "compute",
        "--input",
        f.path().to_str().unwrap(),
        "--method",
        "all",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["ps_determinant"], -1);
    assert_eq!(v["ps_leibniz"], -1);
    assert_eq!(v["ps_circuits"], -1);
    assert_eq!(v["even"], 4);
    assert_eq!(v["odd"], 5);
    assert_eq!(v["circuits"], 5);
    assert_eq!(v["agreement"], true);
}

#[test]
fn compute_single_methods() {
    let f = graph_file(EXAMPLE);
    let path = f.path().to_str().unwrap();
    for method in ["det", "circuits", "leibniz"] {
        let out = psnum(&["compute", "--input", path, "--method", method, "--json"]);
        assert_eq!(out.status.code(), Some(0), "{method}");
        let v = json(&out);
        let present: Vec<&str> = ["ps_determinant", "ps_leibniz", "ps_circuits"]
            .into_iter()
            .filter(|k| v.get(*k).is_some())
            .collect();
        assert_eq!(present.len(), 1, "{method}: {v}");
        assert_eq!(v[present[0]], -1);
    }
}

#[test]
fn empty_graph_reports_one() {
    let f = graph_file("vertices 0\n");
    let out = psnum(&["compute", "--input", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["ps_determinant", "ps_leibniz", "ps_circuits"] {
        assert_eq!(v[key], 1, "{key}");
    }
}

#[test]
fn circuit_cap_exits_3_but_keeps_determinant() {
    // complete digraph with loops on 9 vertices: A = J, det(I - J) = -8
    let mut text = String::from("vertices 9\n");
    for i in 0..9 {
        for j in 0..9 {
            text.push_str(&format!("edge {i} {j}\n"));
        }
    }
    let f = graph_file(&text);
    let out = psnum(&[
        "compute",
        "--input",
        f.path().to_str().unwrap(),
        "--method",
        "all",
        "--circuit-cap",
        "10",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["ps_determinant"], -8);
    assert_eq!(v["ps_circuits"], "skipped(cap)");
    assert_eq!(v["ps_leibniz"], "skipped(limit)");
    assert_eq!(v["agreement"], true);
}

#[test]
fn node_cap_exits_3() {
    let f = graph_file(EXAMPLE);
    let out = psnum(&[
        "compute",
        "--input",
        f.path().to_str().unwrap(),
        "--node-cap",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn caps_from_environment() {
    let f = graph_file(EXAMPLE);
    let out = Command::new(env!("CARGO_BIN_EXE_psnum"))
        .args([
            "compute",
            "--input",
            f.path().to_str().unwrap(),
            "--method",
            "circuits",
        ])
        .env("PS_DEFAULT_CAPS", "circuits=2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // the flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_psnum"))
        .args([
            "compute",
            "--input",
            f.path().to_str().unwrap(),
            "--method",
            "circuits",
            "--circuit-cap",
            "5",
        ])
        .env("PS_DEFAULT_CAPS", "circuits=2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn leibniz_above_limit_exits_3() {
    let f = graph_file("vertices 9\n");
    let out = psnum(&[
        "compute",
        "--input",
        f.path().to_str().unwrap(),
        "--method",
        "leibniz",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn parse_errors_exit_2() {
    let f = graph_file("vertices 2\nedge 0 5\n");
    for cmd in ["compute", "circuits", "reduce"] {
        let out = psnum(&[cmd, "--input", f.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{cmd}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    }
    let out = psnum(&["compute", "--input", "/nonexistent/graph.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_output_is_byte_stable() {
    let f = graph_file(EXAMPLE);
    let path = f.path().to_str().unwrap();
    for args in [
        vec![
            "compute",
            "--input",
            path,
            "--classes",
            "--reduce",
            "--json",
        ],
        vec!["circuits", "--input", path, "--families", "--json"],
        vec![
            "fuzz",
            "--max-vertices",
            "5",
            "--max-edges",
            "8",
            "--cases",
            "50",
            "--seed",
            "3",
            "--json",
        ],
    ] {
        let a = psnum(&args).stdout;
        let b = psnum(&args).stdout;
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn compute_class_table() {
    let f = graph_file(EXAMPLE);
    let out = psnum(&[
        "compute",
        "--input",
        f.path().to_str().unwrap(),
        "--classes",
        "--json",
    ]);
    let v = json(&out);
    let rows = v["classes"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["agrees"] == true));
    let rotation = rows
        .iter()
        .find(|r| r["permutation"] == serde_json::json!([1, 2, 0]))
        .unwrap();
    assert_eq!(rotation["class_value"], -1);
}

#[test]
fn circuits_listing() {
    let f = graph_file(EXAMPLE);
    let out = psnum(&[
        "circuits",
        "--input",
        f.path().to_str().unwrap(),
        "--families",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let circuits = v["circuits"].as_array().unwrap();
    assert_eq!(circuits.len(), 5);
    assert_eq!(circuits[2], "(0 -e0-> 1 -e6-> 2 -e3-> 0)");
    assert_eq!(v["families"]["total"], 9);
    assert_eq!(v["families"]["even"], 4);
    assert_eq!(v["families"]["odd"], 5);

    let acyclic = graph_file("vertices 3\nedge 0 1\nedge 1 2\n");
    let v = json(&psnum(&[
        "circuits",
        "--input",
        acyclic.path().to_str().unwrap(),
        "--families",
        "--json",
    ]));
    assert_eq!(v["circuits"].as_array().unwrap().len(), 0);
    assert_eq!(v["families"]["total"], 1);

    let loops = graph_file("vertices 2\nedge 0 0\nedge 1 1\n");
    let v = json(&psnum(&[
        "circuits",
        "--input",
        loops.path().to_str().unwrap(),
        "--families",
        "--json",
    ]));
    assert_eq!(v["circuits"].as_array().unwrap().len(), 2);
    assert_eq!(v["families"]["total"], 4);
}

#[test]
fn fuzz_reports_parameters() {
    let out = psnum(&[
        "fuzz",
        "--max-vertices",
        "6",
        "--max-edges",
        "10",
        "--cases",
        "1000",
        "--seed",
        "42",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], 1000);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["max_vertices"], 6);

    let out = psnum(&[
        "fuzz",
        "--max-vertices",
        "0",
        "--max-edges",
        "0",
        "--cases",
        "10",
        "--seed",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("passed: 10, failed: 0"));
}

#[test]
fn reduce_commands() {
    let dag = graph_file("vertices 3\nedge 0 1\nedge 1 2\nedge 0 2\n");
    let v = json(&psnum(&[
        "reduce",
        "--input",
        dag.path().to_str().unwrap(),
        "--json",
    ]));
    assert_eq!(v["reduced"]["vertices"], 0);
    assert_eq!(v["reduced_graph"], "vertices 0\n");
    assert_eq!(v["ps_before"], 1);
    assert_eq!(v["ps_after"], 1);

    let f = graph_file(EXAMPLE);
    let v = json(&psnum(&[
        "reduce",
        "--input",
        f.path().to_str().unwrap(),
        "--json",
    ]));
    assert_eq!(v["steps"].as_array().unwrap().len(), 0);
    assert_eq!(
        v["reduced_graph"],
        EXAMPLE
            .lines()
            .skip(1)
            .map(|l| format!("{l}\n"))
            .collect::<String>()
    );

    let pendant = graph_file("vertices 4\nedge 1 2\nedge 2 3\nedge 3 1\nedge 0 2\n");
    let out = psnum(&[
        "reduce",
        "--input",
        pendant.path().to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        v["steps"],
        serde_json::json!([{"vertex": 0, "kind": "source"}])
    );
    assert_eq!(v["ps_before"], v["ps_after"]);
    assert_eq!(v["preserved"], true);
}
