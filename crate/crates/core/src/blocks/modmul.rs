//! Controlled modular multiplier/accumulators, in-place modular multipliers
//! and the modular exponentiation chain.
//!
//! Version 1 divides with a generic divider at word size `2n`; version 2
//! uses the constrained divider at word size `n`, which suffices because
//! `a·y < N·2^n`.

use super::div::{emit_gmphidiv, DivMode, DividerLayout};
use super::mac::emit_phimac;
use super::qft::{emit_iqft, emit_qft};
use super::range;
use crate::circuit::Circuit;
use crate::classical::{mod_exp_constants, mod_inverse};
use crate::error::{Error, Result};
use crate::gate::Gate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Version {
    V1,
    V2,
}

impl Version {
    pub fn from_number(v: u32) -> Result<Version> {
        match v {
            1 => Ok(Version::V1),
            2 => Ok(Version::V2),
            _ => Err(Error::InvalidParameter(format!(
                "version must be 1 or 2, got {v}"
            ))),
        }
    }

    /// Divider word size for factor width `n`.
    pub fn word(self, n: usize) -> usize {
        match self {
            Version::V1 => 2 * n,
            Version::V2 => n,
        }
    }

    fn mode(self) -> DivMode {
        match self {
            Version::V1 => DivMode::Generic,
            Version::V2 => DivMode::Constrained,
        }
    }

    /// Qubits of one multiplier including its control: `17n+2` or `9n+2`.
    pub fn width(self, n: usize) -> usize {
        1 + self.core_width(n)
    }

    fn core_width(self, n: usize) -> usize {
        let w = self.word(n);
        n + 2 * w + w + 5 * w + 1
    }
}

/// Qubits of one multiplier, excluding its control.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMulLayout {
    pub version: Version,
    pub y: Vec<usize>,
    /// Divider; its dividend register doubles as the product accumulator.
    pub div: DividerLayout,
    /// Receives a copy of the remainder.
    pub rbus: Vec<usize>,
}

impl ModMulLayout {
    /// `y`, dividend, remainder bus and divider scratch on consecutive qubits from `base`.
    pub fn new(n: usize, version: Version, base: usize) -> ModMulLayout {
        let w = version.word(n);
        let y = range(base, n);
        let z = range(base + n, 2 * w);
        let rbus = range(base + n + 2 * w, w);
        let hidden = range(base + n + 3 * w, 5 * w + 1);
        ModMulLayout {
            version,
            y,
            div: DividerLayout::with_dividend(z, &hidden),
            rbus,
        }
    }

    /// Low `2n` qubits of the dividend, where `a·y` accumulates.
    pub fn acc(&self) -> Vec<usize> {
        self.div.z()[..2 * self.y.len()].to_vec()
    }

    /// Qubits that must be zero between operations.
    pub fn ancillae(&self) -> Vec<usize> {
        let mut v = self.div.z();
        v.extend(self.div.hidden());
        v
    }
}

fn check_constant(a: u128, modulus: u128, n: usize) -> Result<()> {
    if modulus < 2 || modulus >> n != 0 {
        return Err(Error::InvalidParameter(format!(
            "modulus {modulus} must lie in [2, 2^{n})"
        )));
    }
    if a >= modulus {
        return Err(Error::InvalidConstant { a, modulus });
    }
    Ok(())
}

fn sub(width: usize) -> Circuit {
    Circuit::new(width)
}

/// `rbus ^= (c·a·y) mod N`, leaving `y` and all scratch unchanged.
pub fn emit_phimac_mod(
    c: &mut Circuit,
    control: usize,
    lay: &ModMulLayout,
    a: u128,
    modulus: u128,
) -> Result<()> {
    let n = lay.y.len();
    check_constant(a, modulus, n)?;
    let acc = lay.acc();
    let mut mac = sub(c.width());
    mac.block("macmod.mac", |m| -> Result<()> {
        emit_qft(m, &acc, None)?;
        emit_phimac(m, control, &lay.y, &acc, a as i128)?;
        emit_iqft(m, &acc, None)
    })?;
    let mut div = sub(c.width());
    div.block("macmod.div", |m| {
        emit_gmphidiv(m, &lay.div, modulus, lay.version.mode())
    })?;

    c.append(&mac);
    c.append(&div);
    c.block("macmod.copy", |c| {
        for (&f, &t) in lay.div.r1.iter().zip(&lay.rbus) {
            c.push(Gate::cnot(f, t));
        }
    });
    c.append(&div.inverse()?);
    c.append(&mac.inverse()?);
    Ok(())
}

/// `y -> a^c·y mod N` in place for `y < N`.
pub fn emit_phimul_mod(
    c: &mut Circuit,
    control: usize,
    lay: &ModMulLayout,
    a: u128,
    modulus: u128,
) -> Result<()> {
    let n = lay.y.len();
    check_constant(a, modulus, n)?;
    let a_inv = mod_inverse(a, modulus)?;
    emit_phimac_mod(c, control, lay, a, modulus)?;
    c.block("mulmod.cswap", |c| {
        for (&y, &r) in lay.y.iter().zip(&lay.rbus) {
            c.push(Gate::cswap(control, y, r));
        }
    });
    let mut undo = sub(c.width());
    emit_phimac_mod(&mut undo, control, lay, a_inv, modulus)?;
    c.append(&undo.inverse()?);
    Ok(())
}

fn frame(n: usize, version: Version) -> Result<(Circuit, ModMulLayout)> {
    let lay = ModMulLayout::new(n, version, 1);
    let mut c = Circuit::new(version.width(n));
    c.add_register("c", vec![0], "control")?;
    c.add_register("y", lay.y.clone(), "multiplicand")?;
    c.add_register("z", lay.div.z(), "product / dividend")?;
    c.add_register("rbus", lay.rbus.clone(), "remainder copy")?;
    c.add_register("hidden", lay.div.hidden(), "divider scratch")?;
    Ok((c, lay))
}

/// Control on qubit 0, then the [`ModMulLayout::new`] layout.
pub fn build_phimac_mod(n: usize, a: u128, modulus: u128, version: Version) -> Result<Circuit> {
    let (mut c, lay) = frame(n, version)?;
    emit_phimac_mod(&mut c, 0, &lay, a, modulus)?;
    Ok(c)
}

pub fn build_phimul_mod(n: usize, a: u128, modulus: u128, version: Version) -> Result<Circuit> {
    let (mut c, lay) = frame(n, version)?;
    emit_phimul_mod(&mut c, 0, &lay, a, modulus)?;
    Ok(c)
}

/// Exponent register on qubits `0..2n`, then one multiplier core whose
/// work register starts at 1. Multiplier `i` uses `a^(2^i) mod N` and is
/// controlled by exponent bit `i`.
pub fn build_modexp(n: usize, a: u128, modulus: u128, version: Version) -> Result<Circuit> {
    check_constant(a, modulus, n)?;
    mod_inverse(a, modulus)?;
    let lay = ModMulLayout::new(n, version, 2 * n);
    let mut c = Circuit::new(2 * n + version.core_width(n));
    c.add_register("x", range(0, 2 * n), "exponent")?;
    c.add_register("y", lay.y.clone(), "work")?;
    c.add_register("z", lay.div.z(), "product / dividend")?;
    c.add_register("rbus", lay.rbus.clone(), "remainder copy")?;
    c.add_register("hidden", lay.div.hidden(), "divider scratch")?;
    c.block("modexp.init", |c| c.push(Gate::X(lay.y[0])));
    for (i, k) in mod_exp_constants(a, modulus, n as u32)
        .into_iter()
        .enumerate()
    {
        let mut m = sub(c.width());
        emit_phimul_mod(&mut m, i, &lay, k, modulus)?;
        c.block(&format!("mulmod.{i}"), |c| {
            c.append(&m.with_tag_prefix(&format!("mulmod.{i}.")))
        });
    }
    Ok(c)
}
