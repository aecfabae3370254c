use std::process::{Command, Output};

const T1: &str = "?request . !ok . end";
const U1: &str = "rec x . ?request . +{ !ok . end , !ko . x }";
const U2: &str = "rec x . !request . &{ ?ok . end , ?ko . x }";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sessub"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_exit_codes() {
    assert_eq!(run(&["check", T1, U1]).status.code(), Some(0));
    assert_eq!(run(&["check", U1, T1]).status.code(), Some(1));
    assert_eq!(run(&["check", "!a .", "end"]).status.code(), Some(2));
    assert_eq!(run(&["check", "x", "end"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--algo", "nope", T1, U1]).status.code(), Some(2));
}

#[test]
fn check_json_has_one_object_per_algorithm() {
    let o = run(&["check", "--json", T1, U1]);
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let algos: Vec<_> = lines.iter().map(|v| v["algorithm"].as_str().unwrap()).collect();
    assert_eq!(algos, ["gh", "kps", "cf-sub", "cf-sup"]);
    assert!(lines.iter().all(|v| v["verdict"] == serde_json::Value::Bool(true)));
    assert_eq!(lines[0]["rhs_metrics"]["nummsg"], 3);
}

#[test]
fn timeouts_exit_with_three() {
    let dir = std::env::temp_dir().join(format!("sessub-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let big = dir.join("super.txt");
    let gen = run(&["gen", "--family", "super-send", "--k", "40"]);
    std::fs::write(&big, &gen.stdout).unwrap();
    let big = big.to_str().unwrap();
    let o = run(&["check", "--algo", "cf-sub", "--timeout", "1", big, big]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("timeout"));
}

#[test]
fn dual_prints_the_dual() {
    let o = run(&["dual", U1]);
    assert_eq!(stdout(&o).trim(), "rec x . !request . &{ ?ok . end, ?ko . x }");
}

#[test]
fn safe_both_methods() {
    let o = run(&["safe", T1, U2]);
    assert_eq!(o.status.code(), Some(0));
    for algo in ["gh", "kps", "cf-sub", "cf-sup"] {
        let o = run(&["safe", "--method", "subtyping", "--algo", algo, T1, U2]);
        assert_eq!(o.status.code(), Some(0), "{algo}");
    }
    let o = run(&["safe", "!a . end", "?b . end"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MissingLabel"));
}

#[test]
fn gen_is_seeded() {
    let a = run(&["gen", "--size", "12", "--seed", "7"]);
    let b = run(&["gen", "--size", "12", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let t = sessub::parse_type(stdout(&a).trim()).unwrap();
    assert_eq!(sessub::types::nummsg(&t), 12);
    let m = run(&["metrics", stdout(&a).trim()]);
    assert!(stdout(&m).contains("nummsg 12"));
}

#[test]
fn bench_writes_csv() {
    let dir = std::env::temp_dir().join(format!("sessub-cli-bench-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("out.csv");
    let o = run(&[
        "bench", "--families", "super-recv", "--sizes", "1,2", "--algos", "kps,cf-sup", "--reps", "1",
        "--sequential", "--csv", csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<_> = text.lines().collect();
    assert_eq!(rows[0], sessub::harness::CSV_HEADER.join(","));
    assert_eq!(rows.len(), 5);
    assert!(rows[1].starts_with("super-recv,1,cf-sup,"));
}

#[test]
fn lambda_check() {
    assert_eq!(run(&["lambda", "check", "top -> bot", "bot -> top"]).status.code(), Some(0));
    for mode in ["direct", "via-top", "via-bot"] {
        let o = run(&["lambda", "check", "--mode", mode, "bot -> top", "top -> bot"]);
        assert_eq!(o.status.code(), Some(1), "{mode}");
    }
    assert_eq!(run(&["lambda", "check", "rec v . v", "top"]).status.code(), Some(2));
}

#[test]
fn formula_and_lts_print() {
    assert_eq!(stdout(&run(&["formula", "!a . end"])).trim(), "<!a>[!a]ff");
    let o = run(&["lts", U1]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("?request"));
}
