//! Circuit builders.
//!
//! `emit_*` functions append gates on caller-chosen qubits; `build_*`
//! functions return standalone circuits with named registers.

pub mod div;
pub mod mac;
pub mod modmul;
pub mod qft;

use crate::error::{Error, Result};

/// Fails with the first qubit shared by the two lists.
pub(crate) fn check_disjoint(a: &[usize], b: &[usize]) -> Result<()> {
    match a.iter().find(|q| b.contains(q)) {
        Some(&q) => Err(Error::RegisterOverlap(q)),
        None => Ok(()),
    }
}

/// Fails with the first repeated qubit.
pub(crate) fn check_distinct(qs: &[usize]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    match qs.iter().find(|q| !seen.insert(**q)) {
        Some(&q) => Err(Error::RegisterOverlap(q)),
        None => Ok(()),
    }
}

pub(crate) fn range(start: usize, len: usize) -> Vec<usize> {
    (start..start + len).collect()
}
