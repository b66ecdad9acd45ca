use std::path::PathBuf;
use std::process::{Command, Output};

use plumbroot::format::{parse_graph, parse_json, to_json, to_text};
use plumbroot::report::{BlowdownReport, RationalReport, RootReport, VerifyReport, SCHEMA_VERSION};

fn graph(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../graphs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plumbroot")).args(args).output().unwrap()
}

fn run_on(cmd: &str, file: &str, extra: &[&str]) -> Output {
    let path = graph(file);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("vertex a -2\n", 0),
        ("vertex a 0\n", 3),
        ("vertex a -1\nvertex b -1\nedge a b\n", 3),
        ("vertex a -2\nvertex b -2\nedgee a b\n", 2),
        ("vertex a -2 0\n", 2),
        ("vertex a -2\nedge a b\n", 2),
        ("vertex a -2\nvertex b -2\n", 2),
        ("{\"vertices\":[{\"name\":\"a\",\"weight\":-2,\"genus\":1}],\"edges\":[]}", 2),
    ];
    for (i, (text, code)) in cases.iter().enumerate() {
        let p = write_tmp(&dir, &format!("g{i}.txt"), text);
        let o = run(&["validate", &p]);
        assert_eq!(o.status.code(), Some(*code), "{text:?}: {}", stderr(&o));
    }
    let p = write_tmp(&dir, "bad.txt", "# header\nvertex a -2\nvertex b -2\nedgee a b\n");
    assert!(stderr(&run(&["validate", &p])).contains("line 4, column 1"));
    assert_eq!(run(&["validate", "/nonexistent/graph.txt"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn shipped_graphs_round_trip() {
    for entry in std::fs::read_dir(graph("")).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        let g = parse_graph(&text).unwrap();
        assert_eq!(parse_graph(&to_text(&g)).unwrap(), g);
        assert_eq!(parse_json(&to_json(&g)).unwrap(), g);
        assert_eq!(to_text(&parse_graph(&to_text(&g)).unwrap()), to_text(&g));
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(graph("surgery_8_11.txt")).unwrap();
    let json = write_tmp(&dir, "g.json", &to_json(&parse_graph(&text).unwrap()));
    for cmd in ["verify", "blowdown", "sset", "root", "rational", "export-dot"] {
        let a = run_on(cmd, "surgery_8_11.txt", &[]);
        let b = run_on(cmd, "surgery_8_11.txt", &[]);
        let c = run(&[cmd, &json]);
        assert_eq!(a.status.code(), Some(0), "{cmd}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        assert_eq!(a.stdout, c.stdout, "{cmd} from JSON input");
    }
}

#[test]
fn report_schema_round_trips() {
    let o = run_on("verify", "sigma_2_3_7.txt", &[]);
    let r: VerifyReport = serde_json::from_slice(&o.stdout).unwrap();
    let again = serde_json::to_string_pretty(&r).unwrap() + "\n";
    assert_eq!(again.as_bytes(), &o.stdout[..]);
    assert_eq!(r.schema_version, SCHEMA_VERSION);
}

#[test]
fn verify_examples() {
    let o = run_on("verify", "surgery_8_11.txt", &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: VerifyReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.passed());
    assert_eq!((r.height.as_str(), r.rational, r.blowdown.s_size, r.blowdown.d_size), ("0", false, 64, 6));

    let r: VerifyReport = serde_json::from_slice(&run_on("verify", "single_m2.txt", &[]).stdout).unwrap();
    assert!(r.passed() && r.rational);
    assert_eq!(r.height, "inf");

    let r: VerifyReport = serde_json::from_slice(&run_on("verify", "sigma_2_3_7.txt", &[]).stdout).unwrap();
    assert!(r.passed() && !r.rational);
    assert_eq!(r.height, "0");
    assert!(r.checks.iter().all(|c| c.passed == c.witness.is_none()));
}

#[test]
fn root_examples() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("r.dot");
    let o = run_on("root", "single_m1.txt", &["--dot", dot.to_str().unwrap()]);
    let r: RootReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.single_chain);
    let dot = std::fs::read_to_string(dot).unwrap();
    let nodes = dot.lines().filter(|l| l.contains("label=")).count();
    assert_eq!(nodes as i64, r.top_level - r.floor_level + 1);

    let r: RootReport = serde_json::from_slice(&run_on("root", "sigma_2_3_7.txt", &[]).stdout).unwrap();
    assert!(r.levels.iter().any(|l| l.level <= 0 && l.sizes.len() >= 2));
    assert!(r.branch_points >= 1);

    let r: RootReport = serde_json::from_slice(&run_on("root", "e8.txt", &[]).stdout).unwrap();
    assert!(r.single_chain);

    let o = run_on("root", "single_m2.txt", &["--class", "2"]);
    let r: RootReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.class, [2]);
    assert_eq!(run_on("root", "single_m2.txt", &["--class", "1"]).status.code(), Some(2));
}

#[test]
fn rational_and_blowdown() {
    let r: RationalReport = serde_json::from_slice(&run_on("rational", "e8.txt", &[]).stdout).unwrap();
    assert!(r.single_chain && r.psi0_in_im_u && r.psi0_in_ker_u);
    let r: RationalReport = serde_json::from_slice(&run_on("rational", "sigma_2_3_7.txt", &[]).stdout).unwrap();
    assert!(!r.single_chain && !r.psi0_in_im_u && r.conclusive);
    assert_eq!(run_on("rational", "sigma_2_3_7.txt", &["--depth", "1"]).status.code(), Some(2));

    let b: BlowdownReport = serde_json::from_slice(&run_on("blowdown", "surgery_8_11.txt", &[]).stdout).unwrap();
    let order: Vec<&str> = b.rounds.iter().flatten().map(|s| s.as_str()).collect();
    assert_eq!(order, ["E1", "E2", "E3", "E4", "E5", "E6"]);
    assert_eq!(b.d_classes[5], [0, 8, 5, 3, 2, 1, 1]);
    assert_eq!(b.survivors.len(), 1);
    assert_eq!(b.survivors[0].vertex, "E0");

    let b: BlowdownReport = serde_json::from_slice(&run_on("blowdown", "single_m1.txt", &[]).stdout).unwrap();
    assert_eq!(b.classes.len(), 1);
    assert!(b.survivors.is_empty());

    let b: BlowdownReport = serde_json::from_slice(&run_on("blowdown", "sigma_2_3_7.txt", &[]).stdout).unwrap();
    assert_eq!(b.classes.len(), 3);
    assert_eq!(b.survivors.len(), 1);
    assert_eq!((b.survivors[0].self_intersection, b.survivors[0].smooth), (-1, false));
}

#[test]
fn budgets_and_output_files() {
    assert_eq!(run_on("verify", "e8.txt", &["--budget", "10"]).status.code(), Some(4));
    assert_eq!(run_on("root", "e8.txt", &["--max-level", "-1"]).status.code(), Some(4));
    assert_eq!(run_on("models-check", "e8.txt", &["--radius", "3"]).status.code(), Some(4));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run_on("verify", "a2.txt", &["--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: VerifyReport = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(r.passed());
}

#[test]
fn models_check() {
    let o = run_on("models-check", "single_m1.txt", &["--radius", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run_on("models-check", "e8.txt", &["--depth", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
