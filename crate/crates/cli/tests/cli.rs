use std::io::Write;
use std::process::{Command, Output, Stdio};

fn kh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kh")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const FIGURE_EIGHT: &str = "PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]";

#[test]
fn figure_eight_rows() {
    let o = kh(&["compute", "--pd", FIGURE_EIGHT, "--ring", "q", "--format", "tsv"]);
    assert!(o.status.success());
    let rows: Vec<(i32, i32, usize)> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect();
    assert_eq!(rows, vec![(-2, -5, 1), (-1, -1, 1), (0, -1, 1), (0, 1, 1), (1, 1, 1), (2, 5, 1)]);
}

#[test]
fn unknot_json() {
    let o = kh(&["compute", "--pd", "PD[Loop[1]]", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["q"], -1);
    assert_eq!(rows[1]["q"], 1);
    assert!(rows.iter().all(|r| r["r"] == 0 && r["free"] == 1));
}

#[test]
fn json_is_deterministic_and_matches_the_oracle() {
    let a = kh(&["compute", "--knot", "6_2", "--json"]);
    let b = kh(&["compute", "--knot", "6_2", "--json", "--order", "given"]);
    let c = kh(&["oracle", "--knot", "6_2", "--json"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a), stdout(&c));
}

#[test]
fn input_sources_agree() {
    let path = std::env::temp_dir().join(format!("kh-cli-test-{}.pd", std::process::id()));
    std::fs::write(&path, FIGURE_EIGHT).unwrap();
    let from_file = kh(&["compute", "--file", path.to_str().unwrap(), "--json"]);
    std::fs::remove_file(&path).unwrap();

    let mut child = Command::new(env!("CARGO_BIN_EXE_kh"))
        .args(["compute", "--file", "-", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(FIGURE_EIGHT.as_bytes()).unwrap();
    let from_stdin = child.wait_with_output().unwrap();

    let by_name = kh(&["compute", "--knot", "4_1", "--json"]);
    let by_braid = kh(&["compute", "--braid", "1,-2,1,-2", "--json"]);
    assert!(from_file.status.success() && from_stdin.status.success());
    assert_eq!(stdout(&from_file), stdout(&from_stdin));
    assert_eq!(stdout(&from_file), stdout(&by_name));
    assert_eq!(stdout(&from_file), stdout(&by_braid));
}

#[test]
fn exit_codes() {
    assert_eq!(kh(&["compute", "--pd", "PD[X[1,2"]).status.code(), Some(2));
    assert_eq!(kh(&["compute", "--pd", "PD[X[1,2,3,4]]"]).status.code(), Some(2));
    assert_eq!(kh(&["compute"]).status.code(), Some(2));
    assert_eq!(kh(&["oracle", "--torus", "2,15"]).status.code(), Some(3));
    assert_eq!(kh(&["compute", "--torus", "2,3"]).status.code(), Some(0));
}

#[test]
fn verify_passes() {
    let o = kh(&["verify", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn bench_split() {
    let o = kh(&["bench", "--knot", "4_1", "--split", "0,1", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["naive_cube_objects"], 16);
    assert_eq!(v["split"]["tensor_objects"], 9);
}

#[test]
fn stages_are_dumped() {
    let dir = std::env::temp_dir().join(format!("kh-cli-stages-{}", std::process::id()));
    let o = kh(&["compute", "--knot", "3_1", "--dump-stages", dir.to_str().unwrap()]);
    assert!(o.status.success());
    let mut names: Vec<String> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["stage_001.json", "stage_002.json", "stage_003.json"]);
    let last: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("stage_003.json")).unwrap()).unwrap();
    assert_eq!(last["boundary"].as_array().unwrap().len(), 0);
    std::fs::remove_dir_all(&dir).unwrap();
}
