//! Product-state engine for circuits that keep every qubit unentangled.
//!
//! Each qubit is either a basis bit or `(|0⟩ + e^{iθ}|1⟩)/√2`. Gates that
//! would entangle two qubits report [`Error::EntanglementViolation`].

use std::fmt;

use num_complex::Complex64;

use super::Bits;
use crate::angle::Angle;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QubitTag {
    Basis(bool),
    Phase(Angle),
}

impl fmt::Display for QubitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QubitTag::Basis(b) => write!(f, "{}", u8::from(*b)),
            QubitTag::Phase(a) => write!(f, "φ({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredState {
    tags: Vec<QubitTag>,
    global: Angle,
    record: Vec<Option<bool>>,
}

fn violation(index: usize, g: &Gate, reason: &str) -> Error {
    Error::EntanglementViolation {
        index,
        gate: g.to_string(),
        reason: reason.to_string(),
    }
}

impl StructuredState {
    pub fn from_bits(bits: &Bits) -> StructuredState {
        StructuredState {
            tags: bits.iter().map(QubitTag::Basis).collect(),
            global: Angle::ZERO,
            record: Vec::new(),
        }
    }

    pub fn tags(&self) -> &[QubitTag] {
        &self.tags
    }

    pub fn global_phase(&self) -> Angle {
        self.global
    }

    pub fn record(&self) -> &[Option<bool>] {
        &self.record
    }

    /// The basis state, when no qubit is in superposition.
    pub fn basis(&self) -> Option<Bits> {
        self.tags
            .iter()
            .map(|t| match t {
                QubitTag::Basis(b) => Some(*b),
                QubitTag::Phase(_) => None,
            })
            .collect::<Option<Vec<bool>>>()
            .map(Bits::from)
    }

    /// Expands the product into `2^width` amplitudes.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut amps = vec![Complex64::from_polar(1.0, self.global.radians())];
        for (q, tag) in self.tags.iter().enumerate() {
            let (a0, a1) = match tag {
                QubitTag::Basis(false) => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
                QubitTag::Basis(true) => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
                QubitTag::Phase(t) => {
                    let s = std::f64::consts::FRAC_1_SQRT_2;
                    (
                        Complex64::new(s, 0.0),
                        Complex64::from_polar(s, t.radians()),
                    )
                }
            };
            let mut next = vec![Complex64::new(0.0, 0.0); amps.len() * 2];
            let half = 1usize << q;
            for (i, a) in amps.iter().enumerate() {
                next[i] = a * a0;
                next[i + half] = a * a1;
            }
            amps = next;
        }
        amps
    }

    fn x(&mut self, q: usize) {
        match self.tags[q] {
            QubitTag::Basis(b) => self.tags[q] = QubitTag::Basis(!b),
            // X(|0⟩ + e^{iθ}|1⟩) = e^{iθ}(|0⟩ + e^{-iθ}|1⟩)
            QubitTag::Phase(t) => {
                self.tags[q] = QubitTag::Phase(t.negate());
                self.global = self.global.compose(t);
            }
        }
    }

    /// Phase `angle` on the all-ones subspace of `qubits`.
    fn diagonal(&mut self, index: usize, g: &Gate, qubits: &[usize], angle: Angle) -> Result<()> {
        let mut superposed = None;
        for &q in qubits {
            match self.tags[q] {
                QubitTag::Basis(false) => return Ok(()),
                QubitTag::Basis(true) => {}
                QubitTag::Phase(_) if superposed.is_some() => {
                    return Err(violation(
                        index,
                        g,
                        "phase gate spans two superposed qubits",
                    ))
                }
                QubitTag::Phase(_) => superposed = Some(q),
            }
        }
        match superposed {
            Some(q) => {
                let QubitTag::Phase(t) = self.tags[q] else {
                    unreachable!()
                };
                self.tags[q] = QubitTag::Phase(t.compose(angle));
            }
            None => self.global = self.global.compose(angle),
        }
        Ok(())
    }

    /// X on `target` conditioned on every qubit in `controls`.
    fn controlled_x(
        &mut self,
        index: usize,
        g: &Gate,
        controls: &[usize],
        target: usize,
    ) -> Result<()> {
        let mut all_set = true;
        let mut superposed = None;
        for &c in controls {
            match self.tags[c] {
                QubitTag::Basis(false) => return Ok(()),
                QubitTag::Basis(true) => {}
                QubitTag::Phase(_) if superposed.is_some() => {
                    return self.x_eigen(index, g, None, target);
                }
                QubitTag::Phase(_) => {
                    all_set = false;
                    superposed = Some(c);
                }
            }
        }
        if all_set {
            self.x(target);
            Ok(())
        } else {
            self.x_eigen(index, g, superposed, target)
        }
    }

    /// A superposed control is only allowed when the target is an X
    /// eigenstate: `|+⟩` is unchanged and `|−⟩` kicks π back onto the control.
    fn x_eigen(
        &mut self,
        index: usize,
        g: &Gate,
        control: Option<usize>,
        target: usize,
    ) -> Result<()> {
        match (self.tags[target], control) {
            (QubitTag::Phase(t), _) if t.is_zero() => Ok(()),
            (QubitTag::Phase(t), Some(c)) if t.is_real() => {
                let QubitTag::Phase(ct) = self.tags[c] else {
                    unreachable!()
                };
                self.tags[c] = QubitTag::Phase(ct.compose(Angle::r(1)));
                Ok(())
            }
            _ => Err(violation(index, g, "control qubit is in superposition")),
        }
    }

    fn condition(&self, bit: usize) -> Result<bool> {
        self.record.get(bit).copied().flatten().ok_or_else(|| {
            Error::InvalidParameter(format!("classical bit m{bit} read before it was measured"))
        })
    }

    /// Applies gate number `index` of a circuit.
    pub fn apply(&mut self, index: usize, g: &Gate) -> Result<()> {
        if let Some(&q) = g.qubits().iter().find(|&&q| q >= self.tags.len()) {
            return Err(Error::InvalidParameter(format!(
                "gate `{g}` touches qubit {q} outside width {}",
                self.tags.len()
            )));
        }
        match *g {
            Gate::H(t) => {
                self.tags[t] = match self.tags[t] {
                    QubitTag::Basis(b) => {
                        QubitTag::Phase(if b { Angle::r(1) } else { Angle::ZERO })
                    }
                    QubitTag::Phase(a) if a.is_zero() => QubitTag::Basis(false),
                    QubitTag::Phase(a) if a.is_real() => QubitTag::Basis(true),
                    QubitTag::Phase(_) => {
                        return Err(violation(index, g, "H on a phase other than 0 or π"))
                    }
                }
            }
            Gate::X(t) => self.x(t),
            Gate::Cnot { control, target } => self.controlled_x(index, g, &[control], target)?,
            Gate::Toffoli { c1, c2, target } => self.controlled_x(index, g, &[c1, c2], target)?,
            Gate::Swap(a, b) => self.tags.swap(a, b),
            Gate::Cswap { control, a, b } => match self.tags[control] {
                QubitTag::Basis(true) => self.tags.swap(a, b),
                QubitTag::Basis(false) => {}
                QubitTag::Phase(_) if self.tags[a] == self.tags[b] => {}
                QubitTag::Phase(_) => {
                    return Err(violation(index, g, "control qubit is in superposition"))
                }
            },
            Gate::Phase { target, angle } => self.diagonal(index, g, &[target], angle)?,
            Gate::CPhase {
                control,
                target,
                angle,
            } => self.diagonal(index, g, &[control, target], angle)?,
            Gate::CcPhase {
                c1,
                c2,
                target,
                angle,
            } => self.diagonal(index, g, &[c1, c2, target], angle)?,
            Gate::Measure { qubit, bit } => {
                let QubitTag::Basis(b) = self.tags[qubit] else {
                    return Err(violation(index, g, "measurement of a superposed qubit"));
                };
                if self.record.len() <= bit {
                    self.record.resize(bit + 1, None);
                }
                self.record[bit] = Some(b);
            }
            Gate::ClassicX { bit, target } => {
                if self.condition(bit)? {
                    self.x(target);
                }
            }
            Gate::ClassicPhase { bit, target, angle } => {
                if self.condition(bit)? {
                    self.diagonal(index, g, &[target], angle)?;
                }
            }
        }
        Ok(())
    }

    pub fn run(&mut self, c: &Circuit) -> Result<()> {
        c.gates()
            .iter()
            .enumerate()
            .try_for_each(|(i, g)| self.apply(i, g))
    }
}

/// Qubit tags, lowest qubit first, then the global phase.
impl fmt::Display for StructuredState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tags.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, " | g={}", self.global)
    }
}

/// Simulates `circuit` on a basis input.
pub fn structured_run(circuit: &Circuit, input: &Bits) -> Result<StructuredState> {
    if input.width() != circuit.width() {
        return Err(Error::InvalidParameter(format!(
            "input has {} bits, circuit has {} qubits",
            input.width(),
            circuit.width()
        )));
    }
    let mut s = StructuredState::from_bits(input);
    s.run(circuit)?;
    Ok(s)
}

/// One line per gate: the gate followed by the post-gate tags.
pub fn structured_trace(circuit: &Circuit, input: &Bits) -> Result<Vec<String>> {
    let mut s = StructuredState::from_bits(input);
    let mut lines = Vec::with_capacity(circuit.len());
    for (i, g) in circuit.gates().iter().enumerate() {
        s.apply(i, g)?;
        lines.push(format!("{g:<24} {s}"));
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::dense::dense_run_seeded;

    fn bits(v: u128, w: usize) -> Bits {
        Bits::from_u128(v, w)
    }

    #[test]
    fn hadamard_round_trip() {
        let mut c = Circuit::new(1);
        c.push(Gate::H(0));
        c.push(Gate::H(0));
        for b in 0..2 {
            let s = structured_run(&c, &bits(b, 1)).unwrap();
            assert_eq!(s.basis().unwrap().to_u128(), b);
        }
    }

    #[test]
    fn controlled_gate_on_superposed_control() {
        let mut c = Circuit::new(2);
        c.push(Gate::H(0));
        c.push(Gate::cnot(0, 1));
        let err = structured_run(&c, &bits(0, 2)).unwrap_err();
        assert!(matches!(err, Error::EntanglementViolation { index: 1, .. }));
    }

    #[test]
    fn hadamard_on_quarter_phase() {
        let mut c = Circuit::new(1);
        c.push(Gate::H(0));
        c.push(Gate::phase(0, Angle::r(2)));
        c.push(Gate::H(0));
        assert!(matches!(
            structured_run(&c, &bits(0, 1)),
            Err(Error::EntanglementViolation { index: 2, .. })
        ));
    }

    #[test]
    fn kickback_matches_dense() {
        let mut c = Circuit::new(2);
        c.push(Gate::H(0));
        c.push(Gate::H(1));
        c.push(Gate::phase(0, Angle::r(3)));
        c.push(Gate::cnot(0, 1));
        c.push(Gate::X(0));
        for input in 0..4 {
            let s = structured_run(&c, &bits(input, 2)).unwrap();
            let d = dense_run_seeded(&c, input as usize, 0).unwrap();
            assert!(d.max_distance(&s.to_dense()) < 1e-12, "input {input}");
        }
    }

    #[test]
    fn phase_gates_match_dense() {
        let mut c = Circuit::new(3);
        c.push(Gate::H(2));
        c.push(Gate::ccphase(0, 1, 2, Angle::new(3, 3)));
        c.push(Gate::cphase(0, 2, Angle::r(2)));
        c.push(Gate::cphase(0, 1, Angle::r(1)));
        c.push(Gate::Toffoli {
            c1: 0,
            c2: 1,
            target: 2,
        });
        c.push(Gate::cswap(0, 1, 2));
        for input in 0..8 {
            let s = structured_run(&c, &bits(input, 3)).unwrap();
            let d = dense_run_seeded(&c, input as usize, 0).unwrap();
            assert!(d.max_distance(&s.to_dense()) < 1e-12, "input {input}");
        }
    }

    #[test]
    fn trace_has_one_line_per_gate() {
        let mut c = Circuit::new(2);
        c.push(Gate::H(0));
        c.push(Gate::X(1));
        let t = structured_trace(&c, &bits(0, 2)).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t[1].contains("φ(0/2^0) 1"));
    }
}
