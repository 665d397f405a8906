use atoric_workbench::cli::{run, EXIT_OK, EXIT_PRECONDITION, EXIT_SCENARIO_FAIL, EXIT_VALIDATION};
use atoric_workbench::scenario::{quintic, quintic_wrong_delta};

fn atoric(args: &[&str]) -> (i32, String) {
    run(std::iter::once("atoric").chain(args.iter().copied()))
}

#[test]
fn exit_codes() {
    assert_eq!(atoric(&["classify", "2,1,1,1,3,3/2"]).0, EXIT_OK);
    assert_eq!(atoric(&["wedge", "1,0,0,3,1,1"]).0, EXIT_VALIDATION);
    assert_eq!(atoric(&["wedge", "1,0,5,3,1,-1"]).0, EXIT_VALIDATION);
    assert_eq!(atoric(&["mutate", "1,0,5,3,1,1/10", "--side", "left"]).0, EXIT_PRECONDITION);
    assert_eq!(atoric(&["scenario", "no-such-scenario"]).0, EXIT_VALIDATION);
}

#[test]
fn right_mutation_of_the_quintic_minus_wedge() {
    let (code, out) = atoric(&["mutate", "1,0,5,3,1,1/10", "--side", "right"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().collect::<Vec<_>>(), ["Π(1,0,5,3,1,1/10)", "Π(5,3,14,9,1,1/140)"]);
}

#[test]
fn json_output_parses() {
    let (code, out) = atoric(&["--json", "wedge", "2,1,1,1,3,3/2"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["invariants"]["Delta"], 11);
    assert_eq!(v["invariants"]["sigma"], 3);
    assert_eq!(v["left"]["status"], "Immutable");
}

#[test]
fn all_fixed_scenarios_pass() {
    let (code, out) = atoric(&["scenario", "--all"]);
    assert_eq!(code, EXIT_OK, "{out}");
    for name in ["quintic", "godeaux", "cp2", "k1a", "curve"] {
        assert!(out.lines().any(|l| l == format!("PASS {name}")), "{name} missing in\n{out}");
    }
}

#[test]
fn scenario_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("quintic.json");
    std::fs::write(&good, serde_json::to_string_pretty(&quintic()).unwrap()).unwrap();
    let (code, out) = atoric(&["scenario", "--file", good.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");

    let bad = dir.path().join("wrong.json");
    std::fs::write(&bad, serde_json::to_string(&quintic_wrong_delta()).unwrap()).unwrap();
    let (code, out) = atoric(&["scenario", "--file", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_SCENARIO_FAIL);
    assert!(out.contains("first failure at stage invariants"), "{out}");

    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    assert_eq!(atoric(&["scenario", "--file", junk.to_str().unwrap()]).0, EXIT_VALIDATION);
}

#[test]
fn out_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.svg");
    let (code, out) = atoric(&["--out", path.to_str().unwrap(), "render", "2,1,1,1,3,3/2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("class=\"terminus\""));

    let skipped = dir.path().join("never.txt");
    let (code, _) = atoric(&["--out", skipped.to_str().unwrap(), "wedge", "1,0,0,3,1,1"]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(!skipped.exists());
}
