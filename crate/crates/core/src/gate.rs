use std::fmt;

use crate::angle::Angle;

/// Gate kinds understood by every builder, simulator and the text format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    H,
    X,
    Cnot,
    Swap,
    Cswap,
    Toffoli,
    Phase,
    CPhase,
    CcPhase,
    Measure,
    ClassicX,
    ClassicPhase,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Cnot => "CNOT",
            GateKind::Swap => "SWAP",
            GateKind::Cswap => "CSWAP",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::Phase => "PHASE",
            GateKind::CPhase => "CPHASE",
            GateKind::CcPhase => "CCPHASE",
            GateKind::Measure => "MEASURE",
            GateKind::ClassicX => "CLASSIC_X",
            GateKind::ClassicPhase => "CLASSIC_PHASE",
        }
    }
}

/// A single gate. Qubit operands list controls before targets.
///
/// `CCPHASE` is symmetric in its controls; [`Gate::ccphase`] orders them
/// ascending so that equal gates compare equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    X(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    Swap(usize, usize),
    Cswap {
        control: usize,
        a: usize,
        b: usize,
    },
    Toffoli {
        c1: usize,
        c2: usize,
        target: usize,
    },
    Phase {
        target: usize,
        angle: Angle,
    },
    CPhase {
        control: usize,
        target: usize,
        angle: Angle,
    },
    CcPhase {
        c1: usize,
        c2: usize,
        target: usize,
        angle: Angle,
    },
    /// Measures `qubit` into classical bit `bit`.
    Measure {
        qubit: usize,
        bit: usize,
    },
    /// X on `target` when recorded bit `bit` is 1.
    ClassicX {
        bit: usize,
        target: usize,
    },
    /// Phase on `target` when recorded bit `bit` is 1.
    ClassicPhase {
        bit: usize,
        target: usize,
        angle: Angle,
    },
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Cnot { control, target }
    }

    pub fn phase(target: usize, angle: Angle) -> Gate {
        Gate::Phase { target, angle }
    }

    pub fn cphase(control: usize, target: usize, angle: Angle) -> Gate {
        Gate::CPhase {
            control,
            target,
            angle,
        }
    }

    pub fn ccphase(c1: usize, c2: usize, target: usize, angle: Angle) -> Gate {
        Gate::CcPhase {
            c1: c1.min(c2),
            c2: c1.max(c2),
            target,
            angle,
        }
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Gate {
        Gate::Toffoli { c1, c2, target }
    }

    pub fn cswap(control: usize, a: usize, b: usize) -> Gate {
        Gate::Cswap { control, a, b }
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H(_) => GateKind::H,
            Gate::X(_) => GateKind::X,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Swap(..) => GateKind::Swap,
            Gate::Cswap { .. } => GateKind::Cswap,
            Gate::Toffoli { .. } => GateKind::Toffoli,
            Gate::Phase { .. } => GateKind::Phase,
            Gate::CPhase { .. } => GateKind::CPhase,
            Gate::CcPhase { .. } => GateKind::CcPhase,
            Gate::Measure { .. } => GateKind::Measure,
            Gate::ClassicX { .. } => GateKind::ClassicX,
            Gate::ClassicPhase { .. } => GateKind::ClassicPhase,
        }
    }

    /// Quantum operands, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) => vec![q],
            Gate::Phase { target, .. } => vec![target],
            Gate::Measure { qubit, .. } => vec![qubit],
            Gate::ClassicX { target, .. } | Gate::ClassicPhase { target, .. } => vec![target],
            Gate::Cnot { control, target }
            | Gate::CPhase {
                control, target, ..
            } => {
                vec![control, target]
            }
            Gate::Swap(a, b) => vec![a, b],
            Gate::Cswap { control, a, b } => vec![control, a, b],
            Gate::Toffoli { c1, c2, target } | Gate::CcPhase { c1, c2, target, .. } => {
                vec![c1, c2, target]
            }
        }
    }

    pub fn arity(&self) -> usize {
        match self.kind() {
            GateKind::Cnot | GateKind::Swap | GateKind::CPhase => 2,
            GateKind::Cswap | GateKind::Toffoli | GateKind::CcPhase => 3,
            _ => 1,
        }
    }

    pub fn angle(&self) -> Option<Angle> {
        match *self {
            Gate::Phase { angle, .. }
            | Gate::CPhase { angle, .. }
            | Gate::CcPhase { angle, .. }
            | Gate::ClassicPhase { angle, .. } => Some(angle),
            _ => None,
        }
    }

    pub fn classical_condition(&self) -> Option<usize> {
        match *self {
            Gate::ClassicX { bit, .. } | Gate::ClassicPhase { bit, .. } => Some(bit),
            _ => None,
        }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(
            self.kind(),
            GateKind::Measure | GateKind::ClassicX | GateKind::ClassicPhase
        )
    }

    /// Inverse of a unitary gate; `None` for measurements and classically controlled gates.
    pub fn inverse(&self) -> Option<Gate> {
        let g = match *self {
            Gate::Phase { target, angle } => Gate::Phase {
                target,
                angle: -angle,
            },
            Gate::CPhase {
                control,
                target,
                angle,
            } => Gate::CPhase {
                control,
                target,
                angle: -angle,
            },
            Gate::CcPhase {
                c1,
                c2,
                target,
                angle,
            } => Gate::CcPhase {
                c1,
                c2,
                target,
                angle: -angle,
            },
            g if g.is_unitary() => g,
            _ => return None,
        };
        Some(g)
    }

    /// Renames every qubit operand through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(map(q)),
            Gate::X(q) => Gate::X(map(q)),
            Gate::Cnot { control, target } => Gate::cnot(map(control), map(target)),
            Gate::Swap(a, b) => Gate::Swap(map(a), map(b)),
            Gate::Cswap { control, a, b } => Gate::cswap(map(control), map(a), map(b)),
            Gate::Toffoli { c1, c2, target } => Gate::toffoli(map(c1), map(c2), map(target)),
            Gate::Phase { target, angle } => Gate::phase(map(target), angle),
            Gate::CPhase {
                control,
                target,
                angle,
            } => Gate::cphase(map(control), map(target), angle),
            Gate::CcPhase {
                c1,
                c2,
                target,
                angle,
            } => Gate::ccphase(map(c1), map(c2), map(target), angle),
            Gate::Measure { qubit, bit } => Gate::Measure {
                qubit: map(qubit),
                bit,
            },
            Gate::ClassicX { bit, target } => Gate::ClassicX {
                bit,
                target: map(target),
            },
            Gate::ClassicPhase { bit, target, angle } => Gate::ClassicPhase {
                bit,
                target: map(target),
                angle,
            },
        }
    }
}

/// One line of the circuit text format.
impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "h {q}"),
            Gate::X(q) => write!(f, "x {q}"),
            Gate::Cnot { control, target } => write!(f, "cx {control} {target}"),
            Gate::Swap(a, b) => write!(f, "swap {a} {b}"),
            Gate::Cswap { control, a, b } => write!(f, "cswap {control} {a} {b}"),
            Gate::Toffoli { c1, c2, target } => write!(f, "ccx {c1} {c2} {target}"),
            Gate::Phase { target, angle } => write!(f, "p {target} {angle}"),
            Gate::CPhase {
                control,
                target,
                angle,
            } => write!(f, "cp {control} {target} {angle}"),
            Gate::CcPhase {
                c1,
                c2,
                target,
                angle,
            } => write!(f, "ccp {c1} {c2} {target} {angle}"),
            Gate::Measure { qubit, bit } => write!(f, "measure {qubit} -> m{bit}"),
            Gate::ClassicX { bit, target } => write!(f, "cx? m{bit} {target}"),
            Gate::ClassicPhase { bit, target, angle } => write!(f, "cp? m{bit} {target} {angle}"),
        }
    }
}
