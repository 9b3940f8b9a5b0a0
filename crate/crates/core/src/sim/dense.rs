//! Dense state-vector engine.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::angle::Angle;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;

pub const DEFAULT_DENSE_CAP: usize = 22;

/// States at least this long are updated in parallel.
const PAR_THRESHOLD: usize = 1 << 14;

/// Amplitude `i` belongs to the basis state whose bit `q` is qubit `q`.
#[derive(Clone, Debug)]
pub struct DenseState {
    width: usize,
    amps: Vec<Complex64>,
    record: Vec<Option<bool>>,
}

fn phasor(a: Angle) -> Complex64 {
    Complex64::from_polar(1.0, a.radians())
}

fn mask_of(qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |m, &q| m | 1 << q)
}

impl DenseState {
    /// `|index⟩` on `width` qubits.
    pub fn basis(width: usize, index: usize, cap: usize) -> Result<DenseState> {
        if width > cap {
            return Err(Error::TooWide { width, cap });
        }
        let len = 1usize << width;
        if index >= len {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} does not fit in {width} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(DenseState {
            width,
            amps,
            record: Vec::new(),
        })
    }

    pub fn from_amplitudes(width: usize, amps: Vec<Complex64>) -> DenseState {
        assert_eq!(amps.len(), 1 << width);
        DenseState {
            width,
            amps,
            record: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Classical bits written by measurements, `None` where never written.
    pub fn record(&self) -> &[Option<bool>] {
        &self.record
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probability_one(&self, q: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i >> q & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// The basis index holding all but `tol` of the probability, if any.
    pub fn basis_output(&self, tol: f64) -> Option<usize> {
        let (i, a) = self
            .amps
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))?;
        (a.norm_sqr() >= 1.0 - tol).then_some(i)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_distance(&self, other: &[Complex64]) -> f64 {
        assert_eq!(self.amps.len(), other.len());
        self.amps
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn diagonal(&mut self, qubits: &[usize], angle: Angle) {
        if angle.is_zero() {
            return;
        }
        let m = mask_of(qubits);
        let ph = phasor(angle);
        let f = |(i, a): (usize, &mut Complex64)| {
            if i & m == m {
                *a *= ph;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_iter_mut().enumerate().for_each(f);
        } else {
            self.amps.iter_mut().enumerate().for_each(f);
        }
    }

    /// Applies `op` to every amplitude pair differing in qubit `t` whose
    /// index satisfies all of `controls`.
    fn pairs(
        &mut self,
        t: usize,
        controls: &[usize],
        op: impl Fn(&mut Complex64, &mut Complex64) + Sync,
    ) {
        let m = mask_of(controls);
        let half = 1usize << t;
        let chunk = half << 1;
        let f = |(c, block): (usize, &mut [Complex64])| {
            let (lo, hi) = block.split_at_mut(half);
            let base = c * chunk;
            for k in 0..half {
                if (base + k) & m == m {
                    op(&mut lo[k], &mut hi[k]);
                }
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_chunks_mut(chunk).enumerate().for_each(f);
        } else {
            self.amps.chunks_mut(chunk).enumerate().for_each(f);
        }
    }

    fn controlled_x(&mut self, controls: &[usize], t: usize) {
        self.pairs(t, controls, std::mem::swap);
    }

    fn hadamard(&mut self, t: usize) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        self.pairs(t, &[], |a, b| {
            let (x, y) = (*a, *b);
            *a = (x + y) * s;
            *b = (x - y) * s;
        });
    }

    fn measure<R: Rng + ?Sized>(&mut self, q: usize, bit: usize, rng: &mut R) {
        let p1 = self.probability_one(q);
        let outcome = rng.gen::<f64>() < p1;
        let keep = if outcome { p1 } else { 1.0 - p1 };
        let scale = 1.0 / keep.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i >> q & 1 == 1) == outcome {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        if self.record.len() <= bit {
            self.record.resize(bit + 1, None);
        }
        self.record[bit] = Some(outcome);
    }

    fn condition(&self, bit: usize) -> Result<bool> {
        self.record.get(bit).copied().flatten().ok_or_else(|| {
            Error::InvalidParameter(format!("classical bit m{bit} read before it was measured"))
        })
    }

    pub fn apply<R: Rng + ?Sized>(&mut self, g: &Gate, rng: &mut R) -> Result<()> {
        if let Some(&q) = g.qubits().iter().find(|&&q| q >= self.width) {
            return Err(Error::InvalidParameter(format!(
                "gate `{g}` touches qubit {q} outside width {}",
                self.width
            )));
        }
        match *g {
            Gate::H(t) => self.hadamard(t),
            Gate::X(t) => self.controlled_x(&[], t),
            Gate::Cnot { control, target } => self.controlled_x(&[control], target),
            Gate::Toffoli { c1, c2, target } => self.controlled_x(&[c1, c2], target),
            Gate::Swap(a, b) => {
                self.controlled_x(&[a], b);
                self.controlled_x(&[b], a);
                self.controlled_x(&[a], b);
            }
            Gate::Cswap { control, a, b } => {
                self.controlled_x(&[control, a], b);
                self.controlled_x(&[control, b], a);
                self.controlled_x(&[control, a], b);
            }
            Gate::Phase { target, angle } => self.diagonal(&[target], angle),
            Gate::CPhase {
                control,
                target,
                angle,
            } => self.diagonal(&[control, target], angle),
            Gate::CcPhase {
                c1,
                c2,
                target,
                angle,
            } => self.diagonal(&[c1, c2, target], angle),
            Gate::Measure { qubit, bit } => self.measure(qubit, bit, rng),
            Gate::ClassicX { bit, target } => {
                if self.condition(bit)? {
                    self.controlled_x(&[], target);
                }
            }
            Gate::ClassicPhase { bit, target, angle } => {
                if self.condition(bit)? {
                    self.diagonal(&[target], angle);
                }
            }
        }
        Ok(())
    }

    /// Runs every gate of `c` in order.
    pub fn run<R: Rng + ?Sized>(&mut self, c: &Circuit, rng: &mut R) -> Result<()> {
        c.gates().iter().try_for_each(|g| self.apply(g, rng))
    }
}

/// Simulates `circuit` from the basis state `input`.
pub fn dense_run<R: Rng + ?Sized>(
    circuit: &Circuit,
    input: usize,
    cap: usize,
    rng: &mut R,
) -> Result<DenseState> {
    let mut s = DenseState::basis(circuit.width(), input, cap)?;
    s.run(circuit, rng)?;
    Ok(s)
}

/// [`dense_run`] with the default cap and a fixed-seed generator.
pub fn dense_run_seeded(circuit: &Circuit, input: usize, seed: u64) -> Result<DenseState> {
    dense_run(
        circuit,
        input,
        DEFAULT_DENSE_CAP,
        &mut ChaCha8Rng::seed_from_u64(seed),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(c: &Circuit, input: usize) -> DenseState {
        dense_run_seeded(c, input, 7).unwrap()
    }

    #[test]
    fn hadamard_on_zero() {
        let mut c = Circuit::new(1);
        c.push(Gate::H(0));
        let s = run(&c, 0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(s.max_distance(&[Complex64::new(h, 0.0), Complex64::new(h, 0.0)]) < 1e-12);
    }

    #[test]
    fn permutations() {
        let mut c = Circuit::new(3);
        c.push(Gate::X(0));
        c.push(Gate::cnot(0, 1));
        c.push(Gate::Swap(1, 2));
        assert_eq!(run(&c, 0).basis_output(1e-10), Some(0b101));
        let mut c = Circuit::new(3);
        c.push(Gate::cswap(0, 1, 2));
        assert_eq!(run(&c, 0b011).basis_output(1e-10), Some(0b101));
        assert_eq!(run(&c, 0b010).basis_output(1e-10), Some(0b010));
        let mut c = Circuit::new(3);
        c.push(Gate::toffoli(0, 1, 2));
        assert_eq!(run(&c, 0b011).basis_output(1e-10), Some(0b111));
        assert_eq!(run(&c, 0b001).basis_output(1e-10), Some(0b001));
    }

    #[test]
    fn width_cap() {
        let c = Circuit::new(23);
        assert!(matches!(
            dense_run_seeded(&c, 0, 0),
            Err(Error::TooWide { width: 23, cap: 22 })
        ));
    }

    #[test]
    fn measurement_and_feedback() {
        // |+⟩ measured, then the outcome resets the qubit.
        let mut c = Circuit::new(1);
        c.push(Gate::H(0));
        c.push(Gate::Measure { qubit: 0, bit: 0 });
        c.push(Gate::ClassicX { bit: 0, target: 0 });
        let mut ones = 0;
        for seed in 0..200 {
            let s = dense_run_seeded(&c, 0, seed).unwrap();
            assert_eq!(s.basis_output(1e-10), Some(0));
            ones += usize::from(s.record()[0] == Some(true));
        }
        assert!((60..140).contains(&ones));
    }

    #[test]
    fn norm_preserved_in_parallel_path() {
        let mut c = Circuit::new(16);
        for q in 0..16 {
            c.push(Gate::H(q));
        }
        for q in 1..16 {
            c.push(Gate::cphase(q - 1, q, Angle::r(q as u32)));
            c.push(Gate::cnot(q, q - 1));
        }
        let s = run(&c, 12345);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }
}
