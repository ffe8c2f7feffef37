mod common;

use common::{hpgl_well_formed, run};

#[test]
fn render_to_file_infers_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.svg");
    let (code, stdout, stderr) = run(&["render", "--demo", "sinc", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.is_empty());
    assert!(stderr.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("<?xml"));
}

#[test]
fn plt_extension_selects_hpgl() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("saddle.plt");
    let (code, _, stderr) = run(&["render", "--demo", "saddle", "--res", "12", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{stderr}");
    assert!(hpgl_well_formed(&std::fs::read_to_string(&out).unwrap()));
}

#[test]
fn stdout_carries_only_the_file() {
    let (code, stdout, stderr) = run(&["contour", "--demo", "saddle", "--res", "12", "--format", "hpgl", "--out", "-"]);
    assert_eq!(code, 0);
    assert!(stderr.is_empty());
    assert!(hpgl_well_formed(std::str::from_utf8(&stdout).unwrap()));
}

#[test]
fn convert_translates_the_worked_program() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("prog.dmp");
    std::fs::write(&input, ";:U100,200D300,200").unwrap();
    let (code, stdout, stderr) = run(&["convert", "--in", input.to_str().unwrap()]);
    assert_eq!(code, 0, "{stderr}");
    assert_eq!(
        String::from_utf8(stdout).unwrap(),
        "IN;\nSP1;\nPU508,1016;\nPD1524,1016;\nPU;\nSP0;\n"
    );
}

#[test]
fn convert_rejects_bad_programs_with_status_1() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.dmp");
    std::fs::write(&input, ";:U1,2Q").unwrap();
    let (code, stdout, stderr) = run(&["convert", "--in", input.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.is_empty());
    assert!(stderr.starts_with("plot94: "));
}

#[test]
fn missing_input_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("absent.dmp");
    let (code, _, stderr) = run(&["convert", "--in", input.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("absent.dmp"));
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("no/such/dir/x.svg");
    let (code, _, _) = run(&["render", "--demo", "sinc", "--res", "8", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn unknown_demo_names_itself() {
    let (code, stdout, stderr) = run(&["render", "--demo", "nosuch"]);
    assert_eq!(code, 1);
    assert!(stdout.is_empty());
    assert!(stderr.contains("nosuch"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["render", "--demo", "sinc", "--bogus"]).0, 1);
    assert_eq!(run(&["render"]).0, 1);
    assert_eq!(run(&["render", "--demo", "sinc", "--expr", "x"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
}

#[test]
fn help_goes_to_stdout() {
    let (code, stdout, stderr) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(!stdout.is_empty());
    assert!(stderr.is_empty());
}

#[test]
fn expressions() {
    let (code, stdout, _) = run(&["render", "--expr", "sin(3*x)*cos(2*y)", "--res", "16", "--format", "hpgl"]);
    assert_eq!(code, 0);
    assert!(hpgl_well_formed(std::str::from_utf8(&stdout).unwrap()));

    let (code, _, stderr) = run(&["render", "--expr", "x +"]);
    assert_eq!(code, 1);
    assert!(stderr.contains('4'), "{stderr}");

    // r = 0 lands on a sample at odd resolution.
    let (code, _, _) = run(&["render", "--expr", "sin(r)/r", "--res", "33"]);
    assert_eq!(code, 1);

    let (code, _, _) = run(&["contour", "--expr", "x*x - y*y", "--levels", "4", "--extent", "2"]);
    assert_eq!(code, 0);
}

#[test]
fn negative_angles_parse() {
    let (code, _, stderr) = run(&["render", "--demo", "torus", "--res", "12", "--phi", "-30", "--theta", "-70", "--psi", "-5"]);
    assert_eq!(code, 0, "{stderr}");
}

#[test]
fn level_count_must_be_positive() {
    assert_eq!(run(&["contour", "--demo", "ripple", "--levels", "0"]).0, 1);
}
