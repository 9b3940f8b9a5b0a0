//! Division of a `2n`-bit dividend by a classical constant.
//!
//! Registers (`n` qubits each unless noted), all in the computational basis
//! between stages:
//!
//! | name | holds at the end |
//! |------|------------------|
//! | `r1` | remainder (low half of the dividend on entry) |
//! | `r0` | zero (high half of the dividend on entry) |
//! | `r2` | quotient |
//! | `r3`..`r6`, `a` (1 qubit) | zero |
//!
//! The quotient must fit in `n` bits.

use super::mac::emit_mac_uncontrolled;
use super::qft::{
    emit_cphi_add_const, emit_iqft, emit_phi_add_const, emit_phi_add_generic, emit_qft, shifted,
    Source,
};
use super::range;
use crate::circuit::Circuit;
use crate::classical::div_constants;
use crate::error::Result;
use crate::gate::Gate;

/// Which dividends the circuit must handle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DivMode {
    /// `z < 2^n`: `r0` is zero on entry and never read.
    Generic,
    /// Any `z` with `floor(z/d) < 2^n`.
    Constrained,
}

/// Qubit assignment of one divider instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DividerLayout {
    pub r0: Vec<usize>,
    pub r1: Vec<usize>,
    pub r2: Vec<usize>,
    pub r3: Vec<usize>,
    pub r4: Vec<usize>,
    pub r5: Vec<usize>,
    pub r6: Vec<usize>,
    pub a: usize,
}

impl DividerLayout {
    /// `r1, r0, r2, ..., r6, a` on consecutive qubits from 0.
    pub fn standard(n: usize) -> DividerLayout {
        DividerLayout::with_dividend(range(0, 2 * n), &range(2 * n, 5 * n + 1))
    }

    /// Dividend on `z` (low half first) and the `5n+1` scratch qubits on `hidden`.
    pub fn with_dividend(z: Vec<usize>, hidden: &[usize]) -> DividerLayout {
        let n = z.len() / 2;
        assert_eq!(z.len(), 2 * n);
        assert_eq!(hidden.len(), 5 * n + 1);
        let reg = |k: usize| hidden[k * n..(k + 1) * n].to_vec();
        DividerLayout {
            r1: z[..n].to_vec(),
            r0: z[n..].to_vec(),
            r2: reg(0),
            r3: reg(1),
            r4: reg(2),
            r5: reg(3),
            r6: reg(4),
            a: hidden[5 * n],
        }
    }

    pub fn n(&self) -> usize {
        self.r1.len()
    }

    /// Dividend register, low half first.
    pub fn z(&self) -> Vec<usize> {
        self.r1.iter().chain(&self.r0).copied().collect()
    }

    /// Product register for `m'·(n2+n1) + n_adj`, `r6` low.
    fn product(&self) -> Vec<usize> {
        self.r6.iter().chain(&self.r5).copied().collect()
    }

    /// Qubits that must be zero on entry and on exit.
    pub fn ancillae(&self) -> Vec<usize> {
        let mut v: Vec<usize> = [&self.r3, &self.r4, &self.r5, &self.r6]
            .into_iter()
            .flatten()
            .copied()
            .collect();
        v.push(self.a);
        v
    }

    /// Scratch qubits: quotient plus ancillae.
    pub fn hidden(&self) -> Vec<usize> {
        let mut v = self.r2.clone();
        v.extend(self.ancillae());
        v
    }
}

fn copy(c: &mut Circuit, from: &[usize], to: &[usize]) {
    for (&f, &t) in from.iter().zip(to) {
        c.push(Gate::cnot(f, t));
    }
}

/// Operand bits of `n2 = SLL(HIGH(z), n-l) + SRL(LOW(z), l)`; the two
/// shifted halves occupy disjoint bit ranges.
fn n2_sources(lay: &DividerLayout, l: usize, mode: DivMode) -> Vec<Source> {
    let n = lay.n();
    let mut src: Vec<Source> = lay.r1[l..].iter().map(|&q| Source::Qubit(q)).collect();
    src.extend(lay.r0[..l].iter().map(|&q| match mode {
        DivMode::Constrained => Source::Qubit(q),
        DivMode::Generic => Source::Zero,
    }));
    debug_assert_eq!(src.len(), n);
    src
}

/// Operand bits of `n10 = SLL(LOW(z), n-l)`.
fn n10_sources(lay: &DividerLayout, l: usize) -> Vec<Source> {
    shifted(&lay.r1[..l], lay.n() - l)
}

/// Appends the divider on `lay`.
pub fn emit_gmphidiv(c: &mut Circuit, lay: &DividerLayout, d: u128, mode: DivMode) -> Result<()> {
    let n = lay.n();
    let k = div_constants(d, n as u32)?;
    let l = k.l as usize;
    let (d, m_prime) = (d as i128, k.m_prime as i128);
    let (z, prod) = (lay.z(), lay.product());
    let msb = lay.r0[n - 1];

    c.block("div.fwd.n2_n10", |c| -> Result<()> {
        emit_qft(c, &lay.r4, None)?;
        emit_qft(c, &lay.r6, None)?;
        emit_phi_add_generic(c, &n2_sources(lay, l, mode), &lay.r4, false)?;
        emit_phi_add_generic(c, &n10_sources(lay, l), &lay.r6, false)?;
        emit_iqft(c, &lay.r6, None)
    })?;
    c.block("div.fwd.n1", |c| c.push(Gate::cnot(lay.r6[n - 1], lay.a)));
    c.block("div.fwd.nadj", |c| -> Result<()> {
        emit_qft(c, &lay.r6, None)?;
        emit_cphi_add_const(c, lay.a, &lay.r6, k.d_c)?;
        emit_cphi_add_const(c, lay.a, &lay.r4, 1)?;
        emit_iqft(c, &lay.r4, None)?;
        emit_iqft(c, &lay.r6, None)
    })?;
    c.block("div.fwd.product", |c| -> Result<()> {
        emit_qft(c, &prod, None)?;
        emit_mac_uncontrolled(c, &lay.r4, &prod, m_prime)?;
        emit_iqft(c, &prod, None)
    })?;
    c.block("div.fwd.q1", |c| -> Result<()> {
        copy(c, &lay.r5, &lay.r2);
        emit_qft(c, &lay.r2, None)?;
        emit_phi_add_generic(c, &shifted(&lay.r4, 0), &lay.r2, false)?;
        emit_cphi_add_const(c, lay.a, &lay.r2, -1)?;
        emit_iqft(c, &lay.r2, None)?;
        copy(c, &lay.r2, &lay.r3);
        Ok(())
    })?;
    c.block("div.fwd.dr", |c| -> Result<()> {
        emit_qft(c, &z, None)?;
        emit_mac_uncontrolled(c, &lay.r2, &z, -d)?;
        emit_phi_add_const(c, &z, -d);
        emit_iqft(c, &z, None)
    })?;
    c.block("div.fwd.q", |c| -> Result<()> {
        emit_qft(c, &lay.r2, None)?;
        c.push(Gate::X(msb));
        emit_cphi_add_const(c, msb, &lay.r2, 1)?;
        c.push(Gate::X(msb));
        emit_iqft(c, &lay.r2, None)
    })?;
    c.block("div.fwd.restore_z", |c| -> Result<()> {
        emit_qft(c, &z, None)?;
        emit_phi_add_const(c, &z, d);
        emit_mac_uncontrolled(c, &lay.r3, &z, d)?;
        emit_iqft(c, &z, None)
    })?;
    c.block("div.restore.q1", |c| -> Result<()> {
        emit_qft(c, &lay.r3, None)?;
        emit_phi_add_generic(c, &shifted(&lay.r5, 0), &lay.r3, true)?;
        emit_phi_add_generic(c, &shifted(&lay.r4, 0), &lay.r3, true)?;
        emit_cphi_add_const(c, lay.a, &lay.r3, 1)?;
        emit_iqft(c, &lay.r3, None)
    })?;
    c.block("div.restore.product", |c| -> Result<()> {
        emit_qft(c, &prod, None)?;
        emit_mac_uncontrolled(c, &lay.r4, &prod, -m_prime)?;
        emit_iqft(c, &prod, None)
    })?;
    c.block("div.restore.nadj", |c| -> Result<()> {
        emit_qft(c, &lay.r6, None)?;
        emit_qft(c, &lay.r4, None)?;
        emit_cphi_add_const(c, lay.a, &lay.r6, -k.d_c)?;
        emit_cphi_add_const(c, lay.a, &lay.r4, -1)?;
        emit_iqft(c, &lay.r6, None)
    })?;
    c.block("div.restore.n1", |c| {
        c.push(Gate::cnot(lay.r6[n - 1], lay.a))
    });
    c.block("div.restore.n2_n10", |c| -> Result<()> {
        emit_qft(c, &lay.r6, None)?;
        emit_phi_add_generic(c, &n10_sources(lay, l), &lay.r6, true)?;
        emit_phi_add_generic(c, &n2_sources(lay, l, mode), &lay.r4, true)?;
        emit_iqft(c, &lay.r4, None)?;
        emit_iqft(c, &lay.r6, None)
    })?;
    c.block("div.fwd.r", |c| -> Result<()> {
        emit_qft(c, &z, None)?;
        emit_mac_uncontrolled(c, &lay.r2, &z, -d)?;
        emit_iqft(c, &z, None)
    })
}

fn frame(n: usize) -> Result<(Circuit, DividerLayout)> {
    let lay = DividerLayout::standard(n);
    let mut c = Circuit::new(7 * n + 1);
    c.add_register("r1", lay.r1.clone(), "dividend low / remainder")?;
    c.add_register("r0", lay.r0.clone(), "dividend high")?;
    c.add_register("r2", lay.r2.clone(), "quotient")?;
    for (name, r) in [
        ("r3", &lay.r3),
        ("r4", &lay.r4),
        ("r5", &lay.r5),
        ("r6", &lay.r6),
    ] {
        c.add_register(name, r.clone(), "ancilla")?;
    }
    c.add_register("a", vec![lay.a], "ancilla")?;
    Ok((c, lay))
}

/// Standalone divider on `7n+1` qubits in the [`DividerLayout::standard`] layout.
pub fn build_gmphidiv(n: usize, d: u128, mode: DivMode) -> Result<Circuit> {
    let (mut c, lay) = frame(n)?;
    emit_gmphidiv(&mut c, &lay, d, mode)?;
    Ok(c)
}

/// Maps `(q, r, zero ancillae)` back to the dividend `q·d + r`.
pub fn build_gmphidiv_inverse(n: usize, d: u128, mode: DivMode) -> Result<Circuit> {
    build_gmphidiv(n, d, mode)?.inverse()
}
