use std::path::PathBuf;
use std::process::{Command, Output};

fn equicat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equicat"))
        .args(args)
        .env_remove("EQUICAT_SIZE_CAPS")
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn exsharp_check_passes_with_exit_zero() {
    let out = equicat(&["check", "run", "exsharp", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["witness"]["nu"]["{e,a}"], -1);
}

#[test]
fn identical_seed_gives_identical_bytes() {
    let a = equicat(&[
        "check",
        "run",
        "susp-coherence",
        "--seed",
        "1",
        "--size",
        "60",
    ]);
    let b = equicat(&[
        "check",
        "run",
        "susp-coherence",
        "--seed",
        "1",
        "--size",
        "60",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["passed"], 60);
}

#[test]
fn modelhpb_seed_seven_size_three() {
    let out = equicat(&["check", "run", "modelhpb", "--seed", "7", "--size", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], 3);
}

#[test]
fn unknown_check_is_an_error() {
    let out = equicat(&["check", "run", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown check"));
}

#[test]
fn size_cap_flag_and_env_var() {
    let out = equicat(&[
        "--caps",
        "j=1",
        "bounds",
        "configuration",
        "-i",
        &data("exsharp.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_equicat"))
        .args(["bounds", "configuration", "-i", &data("exsharp.json")])
        .env("EQUICAT_SIZE_CAPS", "j=1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size cap"));
}

#[test]
fn configuration_bound_from_file() {
    let out = equicat(&["bounds", "configuration", "-i", &data("exsharp.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["nu"]["{e,a}"], -1);
    assert_eq!(v["nu"]["{e}"], 1);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("equicat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = equicat(&["check", "run", "exsharp", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["id"], "exsharp");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn non_fibrant_cube_exits_one() {
    // both edges pick the non-initial object, so the matching comparison
    // at the initial vertex is not a weak equivalence
    let out = equicat(&["qf", "run", "-i", &data("swap_cube.json"), "--max-dim", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "FAIL");
}

#[test]
fn fixed_grothendieck_for_every_subgroup() {
    for h in ["e", "G"] {
        let out = equicat(&[
            "build",
            "fixed-grothendieck",
            "-i",
            &data("swap_cube.json"),
            "--subgroup",
            h,
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn total_fiber_lists_transformations() {
    let out = equicat(&["totalfiber", "run", "-i", &data("swap_cube.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let n = v["transformations"].as_u64().unwrap() as usize;
    assert_eq!(v["fibres"].as_array().unwrap().len(), n);
}

#[test]
fn check_list_names_every_id() {
    let v = json(&equicat(&["check", "list"]));
    assert_eq!(v.as_array().unwrap().len(), 9);
}
