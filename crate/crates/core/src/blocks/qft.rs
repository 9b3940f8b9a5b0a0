//! Quantum Fourier transform and Fourier-space adders.
//!
//! No terminal swaps: after the transform qubit `i` of a register holding
//! `b` carries the phase `2π·b / 2^(i+1)`.

use super::{check_disjoint, check_distinct, range};
use crate::angle::{adder_angle, Angle};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;

fn check_cutoff(cutoff: Option<u32>, width: usize) -> Result<()> {
    match cutoff {
        Some(m) if m == 0 || m as usize > width => Err(Error::InvalidCutoff { cutoff: m, width }),
        _ => Ok(()),
    }
}

/// Appends the (approximate) QFT on `qubits`, least significant first.
/// Rotations finer than `2π/2^cutoff` are dropped.
pub fn emit_qft(c: &mut Circuit, qubits: &[usize], cutoff: Option<u32>) -> Result<()> {
    check_cutoff(cutoff, qubits.len())?;
    check_distinct(qubits)?;
    let max = cutoff.unwrap_or(u32::MAX);
    for i in (0..qubits.len()).rev() {
        c.push(Gate::H(qubits[i]));
        for k in (0..i).rev() {
            let order = (i - k + 1) as u32;
            if order <= max {
                c.push(Gate::cphase(qubits[k], qubits[i], Angle::r(order)));
            }
        }
    }
    Ok(())
}

/// Appends the inverse of [`emit_qft`].
pub fn emit_iqft(c: &mut Circuit, qubits: &[usize], cutoff: Option<u32>) -> Result<()> {
    let mut fwd = Circuit::new(c.width());
    emit_qft(&mut fwd, qubits, cutoff)?;
    c.append(&fwd.inverse()?);
    Ok(())
}

pub fn build_qft(width: usize, cutoff: Option<u32>) -> Result<Circuit> {
    let mut c = Circuit::new(width);
    c.add_register("b", range(0, width), "data")?;
    emit_qft(&mut c, &range(0, width), cutoff)?;
    Ok(c)
}

pub fn build_iqft(width: usize, cutoff: Option<u32>) -> Result<Circuit> {
    let mut c = Circuit::new(width);
    c.add_register("b", range(0, width), "data")?;
    emit_iqft(&mut c, &range(0, width), cutoff)?;
    Ok(c)
}

/// Adds the constant `k` (two's complement) to a Fourier-space register.
pub fn emit_phi_add_const(c: &mut Circuit, target: &[usize], k: i128) {
    for (i, &q) in target.iter().enumerate() {
        let a = adder_angle(k, i);
        if !a.is_zero() {
            c.push(Gate::phase(q, a));
        }
    }
}

/// [`emit_phi_add_const`] conditioned on `control`.
pub fn emit_cphi_add_const(
    c: &mut Circuit,
    control: usize,
    target: &[usize],
    k: i128,
) -> Result<()> {
    check_disjoint(&[control], target)?;
    for (i, &q) in target.iter().enumerate() {
        let a = adder_angle(k, i);
        if !a.is_zero() {
            c.push(Gate::cphase(control, q, a));
        }
    }
    Ok(())
}

/// [`emit_phi_add_const`] conditioned on both `c1` and `c2`.
pub fn emit_ccphi_add_const(
    c: &mut Circuit,
    c1: usize,
    c2: usize,
    target: &[usize],
    k: i128,
) -> Result<()> {
    check_distinct(&[c1, c2])?;
    check_disjoint(&[c1, c2], target)?;
    for (i, &q) in target.iter().enumerate() {
        let a = adder_angle(k, i);
        if !a.is_zero() {
            c.push(Gate::ccphase(c1, c2, q, a));
        }
    }
    Ok(())
}

fn adder_frame(width: usize, controls: &[usize]) -> Result<Circuit> {
    let target = range(0, width);
    check_disjoint(controls, &target)?;
    check_distinct(controls)?;
    let w = controls.iter().map(|&q| q + 1).fold(width, usize::max);
    let mut c = Circuit::new(w);
    c.add_register("b", target, "fourier")?;
    for (i, &q) in controls.iter().enumerate() {
        let name = if controls.len() == 1 {
            "c".to_string()
        } else {
            format!("c{}", i + 1)
        };
        c.add_register(&name, vec![q], "control")?;
    }
    Ok(c)
}

/// Target register on qubits `0..width`.
pub fn build_phi_add_const(width: usize, k: i128) -> Circuit {
    let mut c = adder_frame(width, &[]).expect("no controls");
    emit_phi_add_const(&mut c, &range(0, width), k);
    c
}

/// Target register on qubits `0..width`; `control` must lie outside it.
pub fn build_cphi_add_const(width: usize, k: i128, control: usize) -> Result<Circuit> {
    let mut c = adder_frame(width, &[control])?;
    emit_cphi_add_const(&mut c, control, &range(0, width), k)?;
    Ok(c)
}

/// Target register on qubits `0..width`; controls must lie outside it.
pub fn build_ccphi_add_const(width: usize, k: i128, c1: usize, c2: usize) -> Result<Circuit> {
    let mut c = adder_frame(width, &[c1, c2])?;
    emit_ccphi_add_const(&mut c, c1, c2, &range(0, width), k)?;
    Ok(c)
}

/// One bit of a generic adder operand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Qubit(usize),
    Zero,
}

/// Adds (or subtracts) the integer whose bit `j` is `source[j]` to the
/// Fourier-space `target`. Bits beyond the target width are ignored.
///
/// Gates are emitted in rounds `t = 0, 1, ...` pairing source bit `j` with
/// target qubit `j + t`, so each round touches every qubit at most once.
pub fn emit_phi_add_generic(
    c: &mut Circuit,
    source: &[Source],
    target: &[usize],
    subtract: bool,
) -> Result<()> {
    let src: Vec<usize> = source
        .iter()
        .filter_map(|s| match s {
            Source::Qubit(q) => Some(*q),
            Source::Zero => None,
        })
        .collect();
    check_distinct(&src)?;
    check_disjoint(&src, target)?;
    let w = target.len();
    for t in 0..w {
        for (j, s) in source.iter().enumerate().take(w - t) {
            if let Source::Qubit(q) = *s {
                let a = Angle::r((t + 1) as u32);
                c.push(Gate::cphase(
                    q,
                    target[j + t],
                    if subtract { a.negate() } else { a },
                ));
            }
        }
    }
    Ok(())
}

/// Target on qubits `0..target_width`; source qubits must lie outside it.
pub fn build_phi_add_generic(source: &[Source], target_width: usize) -> Result<Circuit> {
    let qs: Vec<usize> = source
        .iter()
        .filter_map(|s| match s {
            Source::Qubit(q) => Some(*q),
            Source::Zero => None,
        })
        .collect();
    let target = range(0, target_width);
    check_disjoint(&qs, &target)?;
    let w = qs.iter().map(|&q| q + 1).fold(target_width, usize::max);
    let mut c = Circuit::new(w);
    c.add_register("b", target.clone(), "fourier")?;
    if !qs.is_empty() {
        c.add_register("a", qs, "source")?;
    }
    emit_phi_add_generic(&mut c, source, &target, false)?;
    Ok(c)
}

/// Sources `qubits[j]` at bit positions `offset + j`, zeros below.
pub fn shifted(qubits: &[usize], offset: usize) -> Vec<Source> {
    std::iter::repeat_n(Source::Zero, offset)
        .chain(qubits.iter().map(|&q| Source::Qubit(q)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::dense::dense_run_seeded;

    fn wrap(width: usize, inner: &Circuit) -> Circuit {
        let mut c = Circuit::new(inner.width());
        emit_qft(&mut c, &range(0, width), None).unwrap();
        c.append(inner);
        emit_iqft(&mut c, &range(0, width), None).unwrap();
        c
    }

    fn out(c: &Circuit, input: usize) -> usize {
        dense_run_seeded(c, input, 0)
            .unwrap()
            .basis_output(1e-10)
            .unwrap()
    }

    #[test]
    fn qft_shapes() {
        let c = build_qft(1, None).unwrap();
        assert_eq!(c.to_string().lines().last(), Some("h 0"));
        assert_eq!(build_qft(4, None).unwrap().len(), 4 + 6);
        assert_eq!(build_qft(4, Some(2)).unwrap().len(), 4 + 3);
        assert!(matches!(
            build_qft(4, Some(5)),
            Err(Error::InvalidCutoff { .. })
        ));
        assert!(matches!(
            build_qft(4, Some(0)),
            Err(Error::InvalidCutoff { .. })
        ));
    }

    #[test]
    fn constant_adder_examples() {
        assert_eq!(out(&wrap(4, &build_phi_add_const(4, 3)), 5), 8);
        assert_eq!(out(&wrap(4, &build_phi_add_const(4, -6)), 5), 15);
        assert!(build_phi_add_const(4, 0).is_empty());
    }

    #[test]
    fn controlled_adder_examples() {
        let c = wrap(4, &build_cphi_add_const(4, 3, 4).unwrap());
        assert_eq!(out(&c, 16 | 5), 16 | 8);
        assert_eq!(out(&c, 5), 5);
        let c = wrap(4, &build_ccphi_add_const(4, 9, 4, 5).unwrap());
        assert_eq!(out(&c, 0b11_1001), 0b11_0010);
        assert_eq!(out(&c, 0b01_1001), 0b01_1001);
        assert!(matches!(
            build_cphi_add_const(4, 3, 2),
            Err(Error::RegisterOverlap(2))
        ));
        assert!(matches!(
            build_ccphi_add_const(4, 3, 5, 5),
            Err(Error::RegisterOverlap(5))
        ));
    }

    #[test]
    fn generic_adder_examples() {
        let src: Vec<Source> = (4..8).map(Source::Qubit).collect();
        let c = wrap(4, &build_phi_add_generic(&src, 4).unwrap());
        assert_eq!(out(&c, 6 << 4 | 3), 6 << 4 | 9);
        assert!(build_phi_add_generic(&[Source::Zero; 4], 4)
            .unwrap()
            .is_empty());
        // z3 of z = 13 routed to bit 0.
        let src = [Source::Qubit(7), Source::Zero, Source::Zero, Source::Zero];
        let c = wrap(4, &build_phi_add_generic(&src, 4).unwrap());
        assert_eq!(out(&c, 13 << 4), 13 << 4 | 1);
    }

    #[test]
    fn exhaustive_constant_addition() {
        for n in 2..=3usize {
            for k in 0..(1i128 << n) {
                let c = wrap(n, &build_phi_add_const(n, k));
                for b in 0..(1usize << n) {
                    assert_eq!(out(&c, b), (b + k as usize) % (1 << n));
                }
            }
        }
    }

    #[test]
    fn opposite_constants_cancel() {
        let mut c = build_phi_add_const(6, 37);
        c.append(&build_phi_add_const(6, -37));
        let mut by_qubit = [Angle::ZERO; 6];
        for g in c.gates() {
            by_qubit[g.qubits()[0]] = by_qubit[g.qubits()[0]] + g.angle().unwrap();
        }
        assert!(by_qubit.iter().all(|a| a.is_zero()));
    }
}
