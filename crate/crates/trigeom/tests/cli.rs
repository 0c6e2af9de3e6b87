use std::process::{Command, Output};

use trigeom::format::{read_geometry, GeometryFile};
use trigeom::suite::{SuiteReport, SKIPPED_SCALE};

fn trigeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trigeom"))
        .args(args)
        .env_remove("TRIGEOM_MAX_ELEMENTS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn rc_of_projective_three_space() {
    let out = trigeom(&["check", "pg", "3", "2", "--rc"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().any(|l| l == "RC: false"), "{}", stdout(&out));
}

#[test]
fn unital_flag_transitivity() {
    let out = trigeom(&["check", "uh", "4", "--ft"]);
    assert_eq!(code(&out), 0);
    assert!(
        stdout(&out).lines().any(|l| l == "flag-transitive: true (orbit 249600)"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn expectations_match_for_small_planes() {
    for args in [["ag", "2", "3"], ["pg", "2", "2"]] {
        let mut full = vec!["check"];
        full.extend(args);
        full.extend(["--all", "--expect", "table1"]);
        let out = trigeom(&full);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
        let text = stdout(&out);
        assert!(text.contains("expect aut_order: ok"));
        assert!(!text.contains("MISMATCH") && !text.contains("mismatch"), "{text}");
    }
}

#[test]
fn missing_table_entry_fails() {
    let out = trigeom(&["check", "uh", "3", "--expect", "table1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn build_outputs_parse() {
    let out = trigeom(&["build", "ag", "2", "3"]);
    assert_eq!(code(&out), 0);
    let sys = read_geometry(&stdout(&out)).unwrap();
    assert_eq!(sys.len(), 9 + 12);

    let out = trigeom(&["build", "kv", "3", "--delta"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("6 connected components"));
    let file = GeometryFile::from_json(&stdout(&out)).unwrap();
    assert_eq!(file.components, Some(6));
    assert_eq!(file.to_system().unwrap().len(), 18);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&trigeom(&["build", "pg", "2", "6"])), 2);
    assert_eq!(code(&trigeom(&["build", "ag", "1", "3"])), 2);
    assert_eq!(code(&trigeom(&["frobnicate"])), 2);
    assert_eq!(code(&trigeom(&["check", "pg", "3", "4"])), 3);
    assert_eq!(code(&trigeom(&["export", "ag", "2", "4", "--hypermap"])), 4);
    assert_eq!(code(&trigeom(&["export", "pg", "2", "2", "--hypermap"])), 5);
    assert_eq!(code(&trigeom(&["export", "ag", "2", "3", "--hypermap"])), 0);
}

#[test]
fn not_thin_message_names_the_cotype() {
    let out = trigeom(&["export", "ag", "2", "4", "--hypermap"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not thin: a flag of cotype"), "{err}");
}

#[test]
fn scale_bound_from_environment_and_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_trigeom"))
        .args(["check", "ag", "2", "3", "--rc"])
        .env("TRIGEOM_MAX_ELEMENTS", "50")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    let out = Command::new(env!("CARGO_BIN_EXE_trigeom"))
        .args(["--max-elements", "200", "check", "ag", "2", "3", "--rc"])
        .env("TRIGEOM_MAX_ELEMENTS", "50")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["check", "pg", "2", "3", "--all", "--format", "json"][..],
        &["build", "uh", "2", "--delta"][..],
        &["export", "ag", "2", "3", "--hypermap"][..],
    ] {
        let a = trigeom(args);
        let b = trigeom(args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn small_suite_skips_large_instances() {
    let out = trigeom(&["--max-elements", "100", "suite", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: SuiteReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.max_elements, 100);
    assert!(report.passed);
    let skipped: Vec<&str> = report
        .instances
        .iter()
        .filter(|i| i.status == SKIPPED_SCALE)
        .map(|i| i.space.as_str())
        .collect();
    assert!(skipped.contains(&"AG(3,4)") && skipped.contains(&"UH(4)"), "{skipped:?}");
    let k4 = report.instances.iter().find(|i| i.space == "K4").unwrap();
    assert_eq!(k4.status, "pass");

    let out = trigeom(&["--max-elements", "100", "suite"]);
    let text = stdout(&out);
    assert!(text.contains(SKIPPED_SCALE));
    assert!(text.trim_end().ends_with("suite: pass"), "{text}");
}
