#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// `(golden file, arguments)` pairs from `corpus/golden/commands.txt`.
pub fn golden_commands() -> Vec<(String, Vec<String>)> {
    let text = std::fs::read_to_string(corpus().join("golden/commands.txt")).expect("golden manifest");
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut parts = l.split_whitespace().map(String::from);
            let name = parts.next().expect("golden name");
            (name, parts.collect())
        })
        .collect()
}

/// Runs the binary from the corpus directory.
pub fn filtra(args: &[String], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_filtra"));
    cmd.current_dir(corpus()).args(args);
    match threads {
        Some(n) => cmd.env("FILTRA_THREADS", n.to_string()),
        None => cmd.env_remove("FILTRA_THREADS"),
    };
    cmd.output().expect("spawn filtra")
}

pub fn args(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

/// Corpus input files (everything at the top level of `corpus/`).
pub fn corpus_inputs() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus())
        .expect("corpus dir")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}
