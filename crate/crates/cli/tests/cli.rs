use std::io::Write as _;

use permsearch::{Permutation, RefinerMode};
use permsearch_cli::problem_file;
use permsearch_cli::report::CSV_HEADER;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["permsearch"];
    argv.extend_from_slice(args);
    let code = permsearch_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("permsearch-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::File::create(&path).unwrap().write_all(body.as_bytes()).unwrap();
    path
}

const H1: &str = "\
degree 10
group H = (1,2,3,4,5,6,7,8,9,10), (2,10)(3,9)(4,8)(5,7)
stab-set H {1,5}
option mode preorbital
";

#[test]
fn solve_prints_order_and_generators() {
    let path = temp_file("h1.txt", H1);
    let (code, out, _) = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("order: 2\n"), "{out}");
    assert!(out.contains("  (1,5)(2,4)(6,10)(7,9)\n"), "{out}");
}

#[test]
fn printed_generators_verify() {
    let path = temp_file("h1b.txt", &H1.replace("{1,5}", "{1,6}"));
    let (code, out, _) = run(&["solve", path.to_str().unwrap(), "--mode", "deeporbital"]);
    assert_eq!(code, 0);
    assert!(out.contains("order: 4\n"));
    let pf = problem_file::parse(&std::fs::read_to_string(&path).unwrap(), "x").unwrap();
    let problem = pf.problem(None).unwrap();
    let gens: Vec<Permutation> = out
        .lines()
        .filter(|l| l.starts_with("  ("))
        .map(|l| Permutation::parse_cycles(l.trim(), 10).unwrap())
        .collect();
    assert!(!gens.is_empty());
    assert!(gens.iter().all(|g| problem.verify(g)));
}

#[test]
fn undefined_group_is_an_input_error() {
    let path = temp_file("bad.txt", "degree 4\ngroup G = (1,2)\nstab-set K {1}\n");
    let (code, _, err) = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("undefined group `K`"), "{err}");
    assert!(err.contains(":3:"), "{err}");
}

#[test]
fn bad_inputs_exit_two() {
    assert_eq!(run(&["bench-grid", "--m", "3", "--mode", "nope"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    let path = temp_file("deg.txt", "degree 3\ngroup G = (1,2,4)\n");
    assert_eq!(run(&["solve", path.to_str().unwrap()]).0, 2);
    let g = temp_file("s6.txt", "degree 6\ngroup S = (1,2), (1,2,3,4,5,6)\n");
    let (code, _, err) = run(&["bench-intersect", "--group-file", g.to_str().unwrap(), "--wreath", "2,2"]);
    assert_eq!(code, 2);
    assert!(err.contains("wreath"), "{err}");
}

#[test]
fn node_limit_exits_one() {
    let (code, out, _) = run(&["bench-grid", "--m", "8", "--mode", "fixed", "--node-limit", "2"]);
    assert_eq!(code, 1);
    assert!(out.lines().nth(1).unwrap().contains(",true,"));
}

#[test]
fn bench_grid_smoke() {
    let (code, out, _) = run(&["bench-grid", "--m", "3", "--variant", "random", "--count", "1", "--seed", "1"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1].split(',').count(), CSV_HEADER.split(',').count());
}

#[test]
fn bench_rows_are_deterministic() {
    let args = ["bench-grid", "--m", "5", "--variant", "row-balanced", "--count", "4", "--mode", "all", "--seed", "9"];
    let strip = |s: String| -> Vec<String> {
        s.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
    };
    let a = strip(run(&args).1);
    let b = strip(run(&args).1);
    assert_eq!(a.len(), 17);
    assert_eq!(a, b);
}

#[test]
fn modes_differ_in_node_counts() {
    let (_, out, _) = run(&["bench-grid", "--m", "8", "--mode", "fixed,preorbital", "--seed", "3"]);
    let nodes: Vec<u64> = out.lines().skip(1).map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
    assert_eq!(nodes.len(), 2);
    assert_ne!(nodes[0], nodes[1]);
}

#[test]
fn json_and_text_formats() {
    let (_, out, _) = run(&["bench-grid", "--m", "4", "--format", "json-lines", "--count", "2"]);
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["degree"], 16);
        assert!(v["solutions_found"].as_u64().unwrap() >= 1);
    }
    let (_, out, _) = run(&["bench-grid", "--m", "4", "--format", "text"]);
    assert!(out.starts_with("instance=0 seed=0 mode=preorbital degree=16"));
}

#[test]
fn bench_intersect_runs() {
    let g = temp_file("w.txt", "degree 6\n# S_3 wr S_2\ngroup W = (1,2), (1,2,3), (1,4)(2,5)(3,6)\n");
    let (code, out, _) = run(&[
        "bench-intersect", "--group-file", g.to_str().unwrap(), "--wreath", "2,3", "--count", "3", "--mode", "all",
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().count(), 13);
}

#[test]
fn selftest_passes() {
    let (code, out, _) = run(&["selftest"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn mode_names_parse() {
    for m in RefinerMode::ALL {
        assert_eq!(m.name().parse::<RefinerMode>().unwrap(), m);
    }
    assert_eq!("Deep-Orbital".parse::<RefinerMode>().unwrap(), RefinerMode::DeepOrbital);
}
