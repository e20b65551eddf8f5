//! The documented CLI examples and a runner for the built binary.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
}

pub const GOLDEN_CASES: [GoldenCase; 3] = [
    GoldenCase {
        name: "fit_rotation",
        args: &["fit", "--map", "rot:0.5", "--theta", "1.0"],
    },
    GoldenCase {
        name: "drift_conjugated_rotation",
        args: &[
            "drift",
            "--map",
            "conj(mobius:kappa=0,sigma=0.3+0i, rot:1.0)",
            "--theta",
            "0",
            "--n",
            "100",
        ],
    },
    GoldenCase {
        name: "diagonal_arnold",
        args: &[
            "diagonal",
            "--map",
            "arnold:a=0,b=0.5",
            "--theta",
            "0",
            "--eps",
            "0.1",
            "--factor",
            "0.5",
            "--steps",
            "10",
        ],
    },
];

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cocycle"))
        .args(args)
        .output()
        .expect("failed to launch cocycle")
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join(format!("{name}.csv"))
}
