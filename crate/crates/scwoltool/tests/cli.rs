use std::path::PathBuf;
use std::process::{Command, Output};

use scwol_core::project::Project;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", &format!("{name}.toml")].iter().collect();
    p.to_string_lossy().into_owned()
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scwoltool")).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scwoltool")).args(args).env("SCWOLTOOL_THREADS", threads).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scwoltool-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn validate_accepts_fixtures() {
    for name in ["z2_z3", "z2_segment", "s3_twist", "simplex3_cocycle", "two_triangles", "circle"] {
        let o = run(&["validate", &fixture(name)]);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o), "valid\n");
    }
}

#[test]
fn validate_reports_loops_with_exit_4() {
    let o = run(&["validate", &fixture("noloops")]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("no-loops: edge bad"));
    let o = run(&["validate", &fixture("noloops"), "--out", "json"]);
    assert_eq!(code(&o), 4);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["violations"][0]["kind"], "no-loops");
}

#[test]
fn missing_and_malformed_inputs_exit_2() {
    assert_eq!(code(&run(&["validate", "/nonexistent/project.toml"])), 2);
    let p = temp_file("broken.toml", "[scwol]\nvertices = 3\n");
    assert_eq!(code(&run(&["validate", p.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["asdim", &data("path49.json"), "-n", "1", "-R", "5"])), 2);
    assert_eq!(code(&run(&["word", "reduce", &fixture("z2_z3"), "s . bogus"])), 2);
    assert_eq!(code(&run(&["ball", &fixture("z2_z3"), "--out", "dot"])), 2);
}

#[test]
fn skeleton_exports() {
    let o = run(&["skeleton", &fixture("z2_segment")]);
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 4);
    let o = run(&["skeleton", &fixture("z2_segment"), "--out", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["labels"].as_array().unwrap().len(), 5);
    let o = run(&["skeleton", &fixture("s3_twist"), "--out", "text"]);
    assert!(stdout(&o).contains("dimension: 2"));
    assert!(stdout(&o).contains("compose e12 e01 = e02"));
}

#[test]
fn cog_validate_and_induce() {
    assert_eq!(code(&run(&["cog", "validate", &fixture("s3_twist")])), 0);
    let o = run(&["cog", "induce", &fixture("z2_segment")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let quotient = Project::load(&stdout(&o)).unwrap();
    assert_eq!(quotient.scwol.num_vertices(), 3);
    assert!(quotient.validate().is_valid());
    let p = temp_file("quotient.toml", &stdout(&o));
    assert_eq!(code(&run(&["cog", "validate", p.to_str().unwrap()])), 0);
}

#[test]
fn cog_induce_with_separate_action_file() {
    let joined = stdout(&run(&["cog", "induce", &fixture("z2_segment")]));
    let o = run(&["cog", "induce", &data("segment_scwol.toml"), &data("segment_action.toml")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let a = Project::load(&joined).unwrap();
    let b = Project::load(&stdout(&o)).unwrap();
    assert!(a.scwol.find_isomorphism(&b.scwol).is_some());
    assert_eq!(code(&run(&["cog", "induce", &data("segment_scwol.toml")])), 2);
}

#[test]
fn word_commands() {
    let z = fixture("z2_z3");
    let o = run(&["word", "reduce", &z, "s . s . t . t"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("tree-form: T\n"));
    assert!(stdout(&o).contains("status: certified"));
    assert_eq!(stdout(&run(&["word", "eq", &z, "t . t", "T"])), "equal\n");
    assert_eq!(stdout(&run(&["word", "eq", &z, "s . t", "t . s"])), "not-equal\n");
    assert_eq!(stdout(&run(&["word", "eq", &z, "id", ""])), "equal\n");
}

#[test]
fn exhausted_budget_exits_3() {
    let s3 = fixture("s3_twist");
    let o = run(&["word", "reduce", &s3, "e02- . (012) . e02+", "--budget", "1"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("status: budget-exhausted"));
    let o = run(&["word", "reduce", &s3, "e02- . (012) . e02+"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn develop_segment_round_trip() {
    let o = run(&["develop", &fixture("z2_segment"), "--radius", "4", "--out", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 5);
    assert_eq!(v["edges"].as_array().unwrap().len(), 4);
    let o = run(&["develop", &fixture("z2_segment"), "--radius", "4", "--out", "dot"]);
    assert_eq!(stdout(&o).matches("->").count(), 4);
    let o = run(&["develop", &fixture("z2_z3"), "--radius", "3"]);
    assert!(stdout(&o).contains("spheres: 1 2 3 3\n"));
}

#[test]
fn stabilizer_and_prop1() {
    let z = fixture("z2_z3");
    let o = run(&["stabilizer", &z, "--radius", "2", "--out", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["size"], 4);
    for name in ["z2_z3", "circle", "figure_eight", "simplex3_cocycle"] {
        let o = run(&["prop1-check", &fixture(name), "--radius", "4"]);
        assert_eq!(code(&o), 0, "{name}");
        assert!(stdout(&o).contains("holds: true"));
    }
}

#[test]
fn ball_feeds_asdim() {
    let o = run(&["ball", &fixture("z2_z3"), "--radius", "6"]);
    assert_eq!(code(&o), 0);
    let ball = temp_file("z2z3_ball.json", &stdout(&o));
    let b = ball.to_str().unwrap();
    let o = run(&["asdim", b, "-n", "1", "-R", "3", "-D", "9"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("outcome: found"));
    let o = run(&["asdim", b, "-n", "0", "-R", "3", "-D", "9"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("outcome: impossible"));
    let o = run(&["asdim", b, "-n", "0", "-R", "3", "-D", "9", "--node-limit", "1"]);
    assert_eq!(code(&o), 5);
    assert!(stdout(&o).contains("outcome: limit-reached"));
}

#[test]
fn asdim_on_the_path() {
    let p = data("path49.json");
    let o = run(&["asdim", &p, "--families", "1", "--scale", "5", "--bound", "10", "--out", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["certificate"]["families"].as_array().unwrap().len(), 2);
    assert_eq!(code(&run(&["asdim", &p, "-n", "0", "-R", "5", "-D", "10"])), 4);
}

#[test]
fn propa_on_the_path() {
    let p = data("path49.json");
    let o = run(&["propa", &p, "--nmax", "12", "-K", "1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("n 8: variation 1/5 "));
    assert!(out.contains("strictly-decreasing: true"));
    let o = run(&["propa", &p, "--nmax", "8", "-K", "1", "--center", "24", "--radius", "24"]);
    assert!(stdout(&o).contains("n 8: variation 2/17 "));
}

#[test]
fn union_check_configs() {
    let o = run(&["union-check", &data("union_path.toml")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("hypotheses: valid"));
    assert!(stdout(&o).contains("conclusion: found"));
    let o = run(&["union-check", &data("union_path_close.toml")]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("not-disjoint"));
    let o = run(&["union-check", &data("finite_wedge.toml")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("piece-dimensions: 1 1\nunion-dimension: 1\n"));
}

#[test]
fn report_on_z2_z3() {
    let o = run(&["report", &fixture("z2_z3"), "--radius", "6"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let last = out.split("[radius 6]").nth(1).unwrap();
    for line in [
        "prop1.holds: true",
        "ball.points: 50",
        "asdim.outcomes: impossible found",
        "asdim.achieved: 1",
        "bound.formula: (0 + 1)(1 + 1) - 1 = 1",
        "bound.within: true",
        "bound.within-sharp: true",
    ] {
        assert!(last.contains(line), "missing `{line}`");
    }
    assert!(!out.contains("holds: false"));
}

#[test]
fn report_is_append_only_in_the_radius() {
    for name in ["z2_z3", "circle", "s3_twist"] {
        let small = stdout(&run(&["report", &fixture(name), "--radius", "2"]));
        let large = stdout(&run(&["report", &fixture(name), "--radius", "4"]));
        assert!(large.starts_with(&small), "{name}");
        assert!(large.len() > small.len());
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let args = ["report", &fixture("figure_eight"), "--radius", "3"];
    let one = run_env(&args, "1");
    let four = run_env(&args, "4");
    assert_eq!(code(&one), 0);
    assert_eq!(stdout(&one), stdout(&four));
    let args = ["develop", &fixture("two_triangles"), "--radius", "3", "--out", "json"];
    assert_eq!(stdout(&run_env(&args, "1")), stdout(&run_env(&args, "3")));
}

#[test]
fn report_stops_on_invalid_projects() {
    let o = run(&["report", &fixture("noloops")]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("no-loops"));
}
