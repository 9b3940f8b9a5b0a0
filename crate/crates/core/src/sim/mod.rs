//! Execution engines: dense state vector, structured product state and the
//! block-functional Shor driver.

pub mod dense;
pub mod shor;
pub mod structured;

use std::fmt;

pub use dense::{dense_run, dense_run_seeded, DenseState, DEFAULT_DENSE_CAP};
pub use shor::{
    factor, functional_run_shor_step, run_period_finding, shor_attempt, FactorRoute, Factorization,
    SparseBranchState,
};
pub use structured::{structured_run, structured_trace, QubitTag, StructuredState};

/// A computational-basis state of arbitrary width, qubit `i` at bit `i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn zeros(width: usize) -> Bits {
        Bits(vec![false; width])
    }

    /// Low `width` bits of `value`.
    pub fn from_u128(value: u128, width: usize) -> Bits {
        Bits(
            (0..width)
                .map(|i| i < 128 && (value >> i) & 1 == 1)
                .collect(),
        )
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, v: bool) {
        self.0[i] = v;
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= true;
    }

    /// Value of the register whose bit `j` is qubit `qubits[j]`.
    pub fn read(&self, qubits: &[usize]) -> u128 {
        assert!(qubits.len() <= 128, "register wider than 128 bits");
        qubits
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &q)| acc | (u128::from(self.0[q]) << j))
    }

    /// Stores the low `qubits.len()` bits of `value`.
    pub fn write(&mut self, qubits: &[usize], value: u128) {
        for (j, &q) in qubits.iter().enumerate() {
            self.0[q] = j < 128 && (value >> j) & 1 == 1;
        }
    }

    /// `true` when every listed qubit is 0.
    pub fn is_clear(&self, qubits: impl IntoIterator<Item = usize>) -> bool {
        qubits.into_iter().all(|q| !self.0[q])
    }

    /// Whole state as an integer; the width must not exceed 128.
    pub fn to_u128(&self) -> u128 {
        let all: Vec<usize> = (0..self.width()).collect();
        self.read(&all)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }
}

impl From<Vec<bool>> for Bits {
    fn from(v: Vec<bool>) -> Bits {
        Bits(v)
    }
}

/// Most significant qubit first.
impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0.iter().rev() {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn register_read_write() {
        let mut b = Bits::zeros(200);
        b.write(&[150, 3, 199], 0b101);
        assert!(b.get(150) && !b.get(3) && b.get(199));
        assert_eq!(b.read(&[150, 3, 199]), 5);
        assert_eq!(Bits::from_u128(6, 4).to_string(), "0110");
        assert!(b.is_clear(0..3));
    }
}
