#![allow(dead_code)]

use std::path::PathBuf;

/// Golden file name and the arguments that produce it on stdout.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("sinc.hpgl", &["render", "--demo", "sinc", "--format", "hpgl"]),
    ("sinc.svg", &["render", "--demo", "sinc", "--format", "svg"]),
    ("sphere.hpgl", &["render", "--demo", "sphere", "--res", "16", "--format", "hpgl"]),
    ("sphere.svg", &["render", "--demo", "sphere", "--res", "16", "--format", "svg"]),
    ("contour-ripple.hpgl", &["contour", "--demo", "ripple", "--levels", "3", "--format", "hpgl"]),
    ("contour-ripple.svg", &["contour", "--demo", "ripple", "--levels", "3", "--format", "svg"]),
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs the command line in process; returns (status, stdout, stderr).
pub fn run(args: &[&str]) -> (u8, Vec<u8>, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("plot94").chain(args.iter().copied());
    let code = plot94_cli::run(argv, &mut out, &mut err);
    (code, out, String::from_utf8(err).unwrap())
}

/// HP-GL invariants: prologue, epilogue, every coordinate in 0..=32767.
pub fn hpgl_well_formed(text: &str) -> bool {
    let compact: String = text.lines().collect();
    if !(compact.starts_with("IN;") && compact.ends_with("PU;SP0;")) {
        return false;
    }
    compact.split(';').all(|st| {
        if st.starts_with("PU") || st.starts_with("PD") || st.starts_with("PA") {
            st[2..]
                .split(',')
                .filter(|s| !s.is_empty())
                .all(|v| v.parse::<i64>().is_ok_and(|v| (0..=32767).contains(&v)))
        } else {
            true
        }
    })
}
