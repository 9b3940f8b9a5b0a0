//! Multiplier/accumulators `b += c·a·x` on a Fourier-space accumulator.
//!
//! Bit `j` of `x` contributes `A_l^(j) = (2^j·a mod 2^(l+1)) / 2^(l+1)` to
//! accumulator qubit `l`. The decomposed form realizes each doubly
//! controlled rotation as `V(x) · V†(x⊕c) · V(c)` with `V = A/2`, pipelined
//! so that `n` factor bits and a `2n`-qubit accumulator take `8n` steps.

use super::{check_disjoint, check_distinct, range};
use crate::angle::{adder_angle, Angle};
use crate::circuit::Circuit;
use crate::error::Result;
use crate::gate::Gate;

/// `A_l^(j)` for bit `j` and accumulator qubit `l`.
pub fn mac_angle(a: i128, j: usize, l: usize) -> Angle {
    adder_angle(a.wrapping_mul(1i128.wrapping_shl(j as u32)), l)
}

/// `V_l^(j)`, half of `A_l^(j)`.
pub fn v_angle(a: i128, j: usize, l: usize) -> Angle {
    mac_angle(a, j, l).half()
}

/// `W_l`, the sum of `V_l^(j)` over all factor bits.
pub fn w_angle(a: i128, n: usize, l: usize) -> Angle {
    (0..n).map(|j| v_angle(a, j, l)).sum()
}

fn check_layout(control: Option<usize>, x: &[usize], acc: &[usize]) -> Result<()> {
    let mut all: Vec<usize> = x.iter().chain(acc).copied().collect();
    all.extend(control);
    check_distinct(&all)?;
    check_disjoint(x, acc)
}

/// Reference form: one doubly controlled constant adder per factor bit.
pub fn emit_phimac_cascade(
    c: &mut Circuit,
    control: usize,
    x: &[usize],
    acc: &[usize],
    a: i128,
) -> Result<()> {
    check_layout(Some(control), x, acc)?;
    for (j, &xj) in x.iter().enumerate() {
        for (l, &q) in acc.iter().enumerate() {
            let ang = mac_angle(a, j, l);
            if !ang.is_zero() {
                c.push(Gate::ccphase(control, xj, q, ang));
            }
        }
    }
    Ok(())
}

/// Gate of the decomposed form together with its table timestep.
fn decomposed_table(control: usize, x: &[usize], acc: &[usize], a: i128) -> Vec<(usize, Gate)> {
    let (n, m) = (x.len(), acc.len());
    let mut t = Vec::with_capacity(2 * n * m + 2 * n + m);
    for (j, &xj) in x.iter().enumerate() {
        for s in 0..m {
            let l = (j + s) % m;
            t.push((s, Gate::cphase(xj, acc[l], v_angle(a, j, l))));
        }
        t.push((m + j, Gate::cnot(control, xj)));
        for s in 0..m {
            let l = (s + 2 * j) % m;
            t.push((
                m + j + 1 + s,
                Gate::cphase(xj, acc[l], v_angle(a, j, l).negate()),
            ));
        }
        // Restoring CNOTs run in reverse bit order so the last V† group,
        // which ends latest, is followed by the first restore.
        t.push((2 * m + n + (n - 1 - j), Gate::cnot(control, xj)));
    }
    for (l, &q) in acc.iter().enumerate() {
        t.push((
            2 * m + 2 * n + l,
            Gate::cphase(control, q, w_angle(a, n, l)),
        ));
    }
    t.sort_by_key(|(time, _)| *time);
    t
}

/// Decomposed controlled multiplier/accumulator; needs `x.len() <= acc.len()`.
/// Zero-angle rotations are kept so the schedule is independent of `a`.
pub fn emit_phimac(
    c: &mut Circuit,
    control: usize,
    x: &[usize],
    acc: &[usize],
    a: i128,
) -> Result<()> {
    check_layout(Some(control), x, acc)?;
    assert!(x.len() <= acc.len(), "factor wider than accumulator");
    for (_, g) in decomposed_table(control, x, acc, a) {
        c.push(g);
    }
    Ok(())
}

/// Table timestep of every gate emitted by [`emit_phimac`].
pub fn phimac_timesteps(n: usize, a: i128) -> Vec<usize> {
    let x = range(1, n);
    let acc = range(n + 1, 2 * n);
    decomposed_table(0, &x, &acc, a)
        .into_iter()
        .map(|(t, _)| t)
        .collect()
}

/// Uncontrolled `acc += a·x`, in rounds pairing bit `j` with qubit
/// `(j + t) mod m`; rotations that vanish are dropped.
pub fn emit_mac_uncontrolled(c: &mut Circuit, x: &[usize], acc: &[usize], a: i128) -> Result<()> {
    check_layout(None, x, acc)?;
    let m = acc.len();
    assert!(x.len() <= m, "factor wider than accumulator");
    for t in 0..m {
        for (j, &xj) in x.iter().enumerate() {
            let l = (j + t) % m;
            let ang = mac_angle(a, j, l);
            if !ang.is_zero() {
                c.push(Gate::cphase(xj, acc[l], ang));
            }
        }
    }
    Ok(())
}

/// Layout: control 0, factor `1..=n`, accumulator `n+1..3n+1`.
fn frame(n: usize) -> Result<(Circuit, Vec<usize>, Vec<usize>)> {
    let mut c = Circuit::new(3 * n + 1);
    let (x, acc) = (range(1, n), range(n + 1, 2 * n));
    c.add_register("c", vec![0], "control")?;
    c.add_register("x", x.clone(), "factor")?;
    c.add_register("b", acc.clone(), "fourier")?;
    Ok((c, x, acc))
}

pub fn build_phimac_cascade(n: usize, a: i128) -> Result<Circuit> {
    let (mut c, x, acc) = frame(n)?;
    emit_phimac_cascade(&mut c, 0, &x, &acc, a)?;
    Ok(c)
}

pub fn build_phimac(n: usize, a: i128) -> Result<Circuit> {
    let (mut c, x, acc) = frame(n)?;
    emit_phimac(&mut c, 0, &x, &acc, a)?;
    Ok(c)
}

pub fn build_phimac_inverse(n: usize, a: i128) -> Result<Circuit> {
    build_phimac(n, a)?.inverse()
}

/// Copy of `c` without zero-angle phase gates.
pub fn prune_zero_angles(c: &Circuit) -> Circuit {
    c.filtered(|g| g.angle().is_none_or(|a| !a.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::qft::{emit_iqft, emit_qft};
    use crate::sim::dense::dense_run_seeded;

    fn wrapped(n: usize, inner: &Circuit) -> Circuit {
        let acc = range(n + 1, 2 * n);
        let mut c = Circuit::new(inner.width());
        emit_qft(&mut c, &acc, None).unwrap();
        c.append(inner);
        emit_iqft(&mut c, &acc, None).unwrap();
        c
    }

    fn run(n: usize, c: &Circuit, ctl: usize, x: usize, b: usize) -> usize {
        let input = ctl | x << 1 | b << (n + 1);
        dense_run_seeded(c, input, 0)
            .unwrap()
            .basis_output(1e-10)
            .unwrap()
            >> (n + 1)
    }

    #[test]
    fn examples() {
        let casc = wrapped(2, &build_phimac_cascade(2, 3).unwrap());
        assert_eq!(run(2, &casc, 1, 2, 0), 6);
        assert_eq!(run(2, &casc, 1, 3, 10), 3);
        assert_eq!(run(2, &casc, 0, 3, 10), 10);
        let inv = wrapped(2, &build_phimac_inverse(2, 3).unwrap());
        assert_eq!(run(2, &inv, 1, 2, 6), 0);
        assert_eq!(run(2, &inv, 0, 2, 6), 6);
    }

    #[test]
    fn cost_and_cnots() {
        for n in 1..=6 {
            let c = build_phimac(n, 5).unwrap();
            assert_eq!(c.len(), 4 * n * (n + 1));
            let cnots = c
                .gates()
                .iter()
                .filter(|g| matches!(g, Gate::Cnot { .. }))
                .count();
            assert_eq!(cnots, 2 * n);
            assert!(c.gates().iter().all(|g| g.arity() <= 2));
        }
    }

    #[test]
    fn w_is_sum_of_v() {
        let n = 4;
        let c = build_phimac(n, 11).unwrap();
        let ws: Vec<Angle> = c
            .gates()
            .iter()
            .filter_map(|g| match *g {
                Gate::CPhase {
                    control: 0, angle, ..
                } => Some(angle),
                _ => None,
            })
            .collect();
        assert_eq!(ws.len(), 2 * n);
        for (l, w) in ws.iter().enumerate() {
            let mut acc = Angle::ZERO;
            for j in 0..n {
                acc = acc.compose(v_angle(11, j, l));
            }
            assert_eq!(*w, acc);
        }
    }

    #[test]
    fn timesteps_end_at_8n() {
        for n in 1..=8 {
            let t = phimac_timesteps(n, 3);
            assert_eq!(t.iter().max().copied(), Some(8 * n - 1));
        }
    }

    #[test]
    fn uncontrolled_matches_product() {
        let (n, a) = (3usize, 5i128);
        let x = range(0, n);
        let acc = range(n, 2 * n);
        let mut c = Circuit::new(3 * n);
        emit_qft(&mut c, &acc, None).unwrap();
        emit_mac_uncontrolled(&mut c, &x, &acc, a).unwrap();
        emit_iqft(&mut c, &acc, None).unwrap();
        for xv in 0..8usize {
            for b in [0usize, 17, 63] {
                let o = dense_run_seeded(&c, xv | b << n, 0)
                    .unwrap()
                    .basis_output(1e-10)
                    .unwrap();
                assert_eq!(o >> n, (b + 5 * xv) % 64);
            }
        }
    }

    #[test]
    fn pruning_drops_only_zero_angles() {
        let c = build_phimac(3, 4).unwrap();
        let p = prune_zero_angles(&c);
        assert!(p.len() < c.len());
        assert!(p
            .gates()
            .iter()
            .all(|g| g.angle().is_none_or(|a| !a.is_zero())));
    }
}
