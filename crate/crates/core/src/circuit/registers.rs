use crate::error::{Error, Result};

/// A named list of qubit indices, least significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub qubits: Vec<usize>,
    pub role: String,
}

/// Named, pairwise disjoint registers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RegisterMap {
    regs: Vec<Register>,
}

impl RegisterMap {
    pub fn insert(&mut self, reg: Register) -> Result<()> {
        if self.get(&reg.name).is_some() {
            return Err(Error::InvalidParameter(format!(
                "register `{}` defined twice",
                reg.name
            )));
        }
        if reg.qubits.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "register `{}` is empty",
                reg.name
            )));
        }
        for (i, q) in reg.qubits.iter().enumerate() {
            if reg.qubits[..i].contains(q) || self.regs.iter().any(|r| r.qubits.contains(q)) {
                return Err(Error::RegisterOverlap(*q));
            }
        }
        self.regs.push(reg);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&[usize]> {
        self.regs
            .iter()
            .find(|r| r.name == name)
            .map(|r| r.qubits.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Register> {
        self.regs.iter()
    }

    pub fn len(&self) -> usize {
        self.regs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regs.is_empty()
    }
}
