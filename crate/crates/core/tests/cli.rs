use std::process::{Command, Output};

fn symprog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symprog"))
        .args(args)
        .env_remove("SYMPROG_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("symprog-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn count_restricted_example() {
    let out = symprog(&["count", "restricted", "--q", "3", "--n", "6", "--arrangement", "[[2,2,2],[2,2,2],[2,2,2]]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "900\n");
}

#[test]
fn feasible_enumerate_count() {
    let out = symprog(&["feasible", "enumerate", "--q", "3", "--N", "5", "--count-only"]);
    assert_eq!(stdout(&out), "625\n");
    let out = symprog(&["feasible", "enumerate", "--q", "3", "--N", "2"]);
    let text = stdout(&out);
    assert!(text.starts_with("arrangement\n"));
    assert_eq!(text.lines().count(), 1 + 16);
}

#[test]
fn exit_codes() {
    let bad = symprog(&["count", "restricted", "--arrangement", "[[1,2],[3]]"]);
    assert_eq!(bad.status.code(), Some(2));
    let unparsable = symprog(&["count", "restricted", "--arrangement", "nope"]);
    assert_eq!(unparsable.status.code(), Some(2));
    let refused = symprog(&["--budget", "100", "oracle", "--q", "3", "--n", "5"]);
    assert_eq!(refused.status.code(), Some(3));
    let env_refused = Command::new(env!("CARGO_BIN_EXE_symprog"))
        .args(["oracle", "--q", "3", "--n", "5"])
        .env("SYMPROG_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(env_refused.status.code(), Some(3));
    let unknown = symprog(&["frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn random_sets_are_deterministic() {
    let args = ["random-set", "--q", "4", "--n", "5", "--density", "0.3", "--seed", "9"];
    let a = symprog(&args);
    let b = symprog(&args);
    assert_eq!(a.stdout, b.stdout);
    let full = stdout(&symprog(&["random-set", "--q", "3", "--n", "2", "--density", "1"]));
    assert!(full.contains(r#""density":"1""#));
}

#[test]
fn product_matches_oracle_from_files() {
    let set = r#"{"q":3,"n":4,"tuples":[[2,1,1],[1,2,1],[1,1,2],[4,0,0],[0,2,2]]}"#;
    let path = temp_file("sets.json", &format!("[{set},{set},{set}]"));
    let path = path.to_str().unwrap();
    for kind in ["restricted", "full"] {
        let fast = stdout(&symprog(&["count", "product", "--kind", kind, "--sets", path]));
        let slow = stdout(&symprog(&["oracle", "--kind", kind, "--sets", path]));
        assert_eq!(fast, slow, "{kind}");
    }
    let split = symprog(&["modp", "split", "--sets", path]);
    assert_eq!(split.status.code(), Some(0));
    let split_path = temp_file("split.json", &stdout(&split));
    let hits = stdout(&symprog(&["oracle", "--kind", "full", "--sets", split_path.to_str().unwrap()]));
    assert_eq!(hits, "0\n");
}

#[test]
fn histogram_csv() {
    let out = stdout(&symprog(&["oracle", "--q", "3", "--n", "2", "--histogram"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("arrangement,count"));
    let total: u64 = lines.map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 36);
    assert!(!out.contains('\r'));
}

#[test]
fn encode_commands() {
    let set = temp_file("r.json", r#"{"N":1,"points":[[0,0],[1,0]]}"#);
    let out = symprog(&["encode", "triangles", "--N", "1", "--set", set.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("label,triangle_count\n"));

    let sets = temp_file("labels.json", r#"{"q":3,"N":5,"sets":[[[1,2]],[[3,4]],[[1,0]]]}"#);
    let out = stdout(&symprog(&["encode", "simplices", "--q", "3", "--N", "5", "--sets", sets.to_str().unwrap()]));
    // (1,2), (3,4) complete to third tuple (1+2-4, 3+4-1) = (4, 1) mod 5, not in R^(3)
    assert_eq!(out, "label,simplex_count\n");
    let sets = temp_file("labels2.json", r#"{"q":3,"N":5,"sets":[[[1,2]],[[3,4]],[[4,1]]]}"#);
    let out = stdout(&symprog(&["encode", "simplices", "--sets", sets.to_str().unwrap()]));
    assert_eq!(out, "label,simplex_count\n1 2 3 4 4 1,25\n");
}

#[test]
fn clt_compare_is_exact() {
    let out = stdout(&symprog(&["clt", "compare", "--ell", "2", "--n", "6", "--w", "2,2"]));
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("6,2 2,10/81,"));
    assert!(!out.contains("e-"));
}

#[test]
fn matrices_json() {
    let out = stdout(&symprog(&["modp", "matrices", "--p", "3"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["A"].as_array().unwrap().len(), 6);
    assert_eq!(v["K"].as_array().unwrap().len(), 8);
    let out = symprog(&["modp", "matrices", "--p", "4"]);
    assert_eq!(out.status.code(), Some(2));
}
