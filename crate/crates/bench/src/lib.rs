//! Shared inputs for the kernel benchmarks.

use std::path::PathBuf;

/// Reads a file of the bundled corpus.
pub fn corpus(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// `s^n 0` in surface syntax.
pub fn numeral(n: usize) -> String {
    let mut t = "0".to_string();
    for _ in 0..n {
        t = format!("s ({t})");
    }
    t
}
