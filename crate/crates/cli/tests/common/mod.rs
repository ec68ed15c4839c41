#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub const STAR_EDGES: &str = "1 2\n1 3\n1 4\n1 5\n";
pub const CYCLE_EDGES: &str = "1 2\n2 3\n3 4\n4 1\n";
pub const STAR_FILTER: &str = "0 0 0 0 0\n0 1 -1 0 0\n0 -1 1 0 0\n0 0 0 0 0\n0 0 0 0 0\n";
pub const CYCLE_FILTER: &str = "0 0 -1 1\n0 -1 1 0\n-1 1 0 0\n1 0 0 -1\n";

/// Writes `contents` under a per-test scratch directory and returns the path.
pub fn fixture(test: &str, name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(test);
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

pub fn shiftkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftkit"))
        .args(args)
        .env_remove("SHIFTKIT_TOLERANCE_PROFILE")
        .output()
        .expect("binary runs")
}

pub fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}
