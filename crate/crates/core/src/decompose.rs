//! Rewrites of three-qubit gates into one- and two-qubit networks.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;

/// Doubly controlled phase as five two-qubit gates:
/// `CV(c2,t) · CX(c1,c2) · CV†(c2,t) · CX(c1,c2) · CV(c1,t)` with `V = √A`.
pub fn ccphase_network(g: &Gate) -> Result<Vec<Gate>> {
    let Gate::CcPhase {
        c1,
        c2,
        target,
        angle,
    } = *g
    else {
        return Err(Error::KindMismatch {
            expected: "CCPHASE",
            found: g.kind().name().to_string(),
        });
    };
    let v = angle.half();
    Ok(vec![
        Gate::cphase(c2, target, v),
        Gate::cnot(c1, c2),
        Gate::cphase(c2, target, -v),
        Gate::cnot(c1, c2),
        Gate::cphase(c1, target, v),
    ])
}

/// Toffoli as a basis change around the CCZ network (five two-qubit gates
/// between two Hadamards), and controlled swap as `CX · CCX · CX`.
pub fn three_qubit_network(g: &Gate) -> Result<Vec<Gate>> {
    match *g {
        Gate::Toffoli { c1, c2, target } => {
            let ccz = Gate::ccphase(c1, c2, target, crate::angle::Angle::new(1, 1));
            let mut out = vec![Gate::H(target)];
            out.extend(ccphase_network(&ccz)?);
            out.push(Gate::H(target));
            Ok(out)
        }
        Gate::Cswap { control, a, b } => Ok(vec![
            Gate::cnot(b, a),
            Gate::toffoli(control, a, b),
            Gate::cnot(b, a),
        ]),
        _ => Err(Error::KindMismatch {
            expected: "TOFFOLI or CSWAP",
            found: g.kind().name().to_string(),
        }),
    }
}

fn as_circuit(g: &Gate, gates: Vec<Gate>) -> Circuit {
    let width = g.qubits().into_iter().max().map_or(0, |q| q + 1);
    let mut c = Circuit::new(width);
    for x in gates {
        c.push(x);
    }
    c
}

/// [`ccphase_network`] wrapped as a circuit sized to the gate's largest qubit.
pub fn decompose_ccphase(g: &Gate) -> Result<Circuit> {
    Ok(as_circuit(g, ccphase_network(g)?))
}

/// [`three_qubit_network`] wrapped as a circuit sized to the gate's largest qubit.
pub fn decompose_three_qubit(g: &Gate) -> Result<Circuit> {
    Ok(as_circuit(g, three_qubit_network(g)?))
}

/// Replaces every CCPHASE (and, if `three_qubit` is set, every TOFFOLI and
/// CSWAP, recursively) by its two-qubit network. Block markers are kept.
pub fn expand(c: &Circuit, ccphase: bool, three_qubit: bool) -> Circuit {
    let mut out = Circuit::new(c.width());
    let mut markers = c.markers().iter().peekable();
    let emit = |out: &mut Circuit, g: Gate| {
        let mut stack = vec![g];
        while let Some(g) = stack.pop() {
            let sub = match g {
                Gate::CcPhase { .. } if ccphase => ccphase_network(&g).ok(),
                Gate::Toffoli { .. } | Gate::Cswap { .. } if three_qubit => {
                    three_qubit_network(&g).ok()
                }
                _ => None,
            };
            match sub {
                Some(gs) => stack.extend(gs.into_iter().rev()),
                None => out.push(g),
            }
        }
    };
    for (i, g) in c.gates().iter().enumerate() {
        while let Some(m) = markers.next_if(|m| m.pos == i) {
            replay(&mut out, m);
        }
        emit(&mut out, *g);
    }
    for m in markers {
        replay(&mut out, m);
    }
    for r in c.registers().iter() {
        out.add_register(&r.name, r.qubits.clone(), &r.role)
            .expect("registers copied from a valid circuit");
    }
    out
}

fn replay(out: &mut Circuit, m: &crate::circuit::Marker) {
    match m.kind {
        crate::circuit::MarkerKind::Begin => out.begin_block(&m.tag),
        crate::circuit::MarkerKind::End => out.end_block(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;

    #[test]
    fn ccphase_uses_half_angles() {
        let g = Gate::ccphase(0, 1, 2, Angle::new(1, 1));
        let net = ccphase_network(&g).unwrap();
        assert_eq!(net.len(), 5);
        assert_eq!(net[0], Gate::cphase(1, 2, Angle::new(1, 2)));
        assert_eq!(net[2], Gate::cphase(1, 2, Angle::new(3, 2)));
        assert!(net.iter().all(|g| g.arity() <= 2));
    }

    #[test]
    fn wrong_kind_rejected() {
        assert!(matches!(
            decompose_ccphase(&Gate::H(0)),
            Err(Error::KindMismatch { .. })
        ));
        assert!(matches!(
            decompose_three_qubit(&Gate::H(0)),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn cswap_shape() {
        let c = decompose_three_qubit(&Gate::cswap(0, 1, 2)).unwrap();
        assert_eq!(
            c.gates(),
            &[Gate::cnot(2, 1), Gate::toffoli(0, 1, 2), Gate::cnot(2, 1)]
        );
    }

    #[test]
    fn expand_removes_three_qubit_gates() {
        let mut c = Circuit::new(3);
        c.block("b", |c| {
            c.push(Gate::cswap(0, 1, 2));
            c.push(Gate::ccphase(0, 1, 2, Angle::new(1, 3)));
        });
        let e = expand(&c, true, true);
        assert!(e.gates().iter().all(|g| g.arity() <= 2));
        assert_eq!(e.len(), 2 + 7 + 5);
        assert_eq!(e.blocks()[0].end, e.len());
    }
}
