//! Semiclassical period finding with one recycled control qubit.
//!
//! Each controlled multiplier is replaced by its verified action
//! `y -> a·y mod N` on the work-register branches.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::angle::Angle;
use crate::classical::{
    bit_length, continued_fraction_period, extract_factors, gcd, is_prime, mod_exp_constants,
    mod_pow, perfect_power, ShorOutcome,
};
use crate::error::{Error, Result};

/// Work-register amplitudes keyed by basis value, plus the control qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseBranchState {
    pub work: BTreeMap<u128, Complex64>,
    /// Control amplitudes `(|0⟩, |1⟩)`; `(1, 0)` between steps.
    pub control: (Complex64, Complex64),
}

impl SparseBranchState {
    /// Work register holding `y`, control reset.
    pub fn basis(y: u128) -> SparseBranchState {
        SparseBranchState {
            work: BTreeMap::from([(y, Complex64::new(1.0, 0.0))]),
            control: (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        }
    }

    pub fn total_probability(&self) -> f64 {
        self.work.values().map(|a| a.norm_sqr()).sum::<f64>()
            * (self.control.0.norm_sqr() + self.control.1.norm_sqr())
    }
}

fn add(map: &mut BTreeMap<u128, Complex64>, y: u128, a: Complex64) {
    *map.entry(y).or_insert(Complex64::new(0.0, 0.0)) += a;
}

/// One round: H on the control, controlled `y -> cu_constant·y mod N`,
/// correction phase, H, measurement, reset.
pub fn functional_run_shor_step<R: Rng + ?Sized>(
    state: &SparseBranchState,
    cu_constant: u128,
    modulus: u128,
    phase_correction: Angle,
    rng: &mut R,
) -> (bool, SparseBranchState) {
    let rot = Complex64::from_polar(1.0, phase_correction.radians());
    // After H, CU and the correction the state is (|0⟩ψ + e^{iθ}|1⟩Uψ)/√2;
    // the final H maps it to |0⟩(ψ + e^{iθ}Uψ)/2 + |1⟩(ψ - e^{iθ}Uψ)/2.
    let mut plus = BTreeMap::new();
    let mut minus = BTreeMap::new();
    for (&y, &a) in &state.work {
        add(&mut plus, y, a * 0.5);
        add(&mut minus, y, a * 0.5);
        let uy = cu_constant * y % modulus;
        add(&mut plus, uy, a * rot * 0.5);
        add(&mut minus, uy, -(a * rot * 0.5));
    }
    let weight = |m: &BTreeMap<u128, Complex64>| m.values().map(|a| a.norm_sqr()).sum::<f64>();
    let p1 = weight(&minus);
    let bit = rng.gen::<f64>() < p1;
    let (mut kept, p) = if bit {
        (minus, p1)
    } else {
        let w = weight(&plus);
        (plus, w)
    };
    let scale = 1.0 / p.sqrt();
    kept.retain(|_, a| a.norm_sqr() > 1e-24);
    for a in kept.values_mut() {
        *a *= scale;
    }
    (
        bit,
        SparseBranchState {
            work: kept,
            control: (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        },
    )
}

/// Correction for round `k`: minus the already-measured low bits of the phase.
pub fn phase_correction(measured: u128, k: u32) -> Angle {
    Angle::new(-((measured & ((1u128 << k) - 1)) as i128), k + 1)
}

/// Runs all `2n` rounds for base `a` and returns the measured integer.
pub fn run_period_finding<R: Rng + ?Sized>(a: u128, modulus: u128, rng: &mut R) -> u128 {
    let n = bit_length(modulus);
    let constants = mod_exp_constants(a, modulus, n);
    let rounds = 2 * n;
    let mut state = SparseBranchState::basis(1);
    let mut m = 0u128;
    for k in 0..rounds {
        let c = constants[(rounds - 1 - k) as usize];
        let (bit, next) = functional_run_shor_step(&state, c, modulus, phase_correction(m, k), rng);
        m |= u128::from(bit) << k;
        state = next;
    }
    m
}

/// Period candidate from a measurement: the continued-fraction denominator
/// or the smallest multiple of it that is a true period.
pub fn period_from_measurement(a: u128, modulus: u128, measured: u128, bits: u32) -> Option<u128> {
    let r = continued_fraction_period(measured, bits, modulus)?;
    (1..)
        .map(|k| k * r)
        .take_while(|&m| m < modulus)
        .find(|&m| mod_pow(a, m, modulus) == 1)
}

/// One full attempt with base `a`.
pub fn shor_attempt<R: Rng + ?Sized>(a: u128, modulus: u128, rng: &mut R) -> ShorOutcome {
    let bits = 2 * bit_length(modulus);
    let g = gcd(a, modulus);
    if g > 1 {
        return ShorOutcome {
            a,
            modulus,
            measured_bits: 0,
            period_candidate: None,
            factors: Some((g.min(modulus / g), g.max(modulus / g))),
        };
    }
    let measured = run_period_finding(a, modulus, rng);
    let period = period_from_measurement(a, modulus, measured, bits);
    ShorOutcome {
        a,
        modulus,
        measured_bits: measured,
        period_candidate: period,
        factors: period.and_then(|r| extract_factors(a, r, modulus)),
    }
}

/// How a factorization was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorRoute {
    Even,
    PerfectPower,
    /// A drawn base shared a factor with `N`.
    LuckyGcd,
    PeriodFinding,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub factors: (u128, u128),
    pub route: FactorRoute,
    pub attempts: Vec<ShorOutcome>,
}

/// Factors `N`, retrying period finding with fresh random bases.
///
/// A given `base` is used for the first attempt only.
pub fn factor<R: Rng + ?Sized>(
    modulus: u128,
    base: Option<u128>,
    attempts: usize,
    rng: &mut R,
) -> Result<Factorization> {
    if modulus < 4 || is_prime(modulus) {
        return Err(Error::InvalidParameter(format!(
            "{modulus} is not composite"
        )));
    }
    if bit_length(modulus) > 32 {
        return Err(Error::InvalidParameter(format!(
            "{modulus} needs more than 32 bits"
        )));
    }
    let done = |factors, route, attempts| {
        Ok(Factorization {
            factors,
            route,
            attempts,
        })
    };
    if modulus.is_multiple_of(2) {
        return done((2, modulus / 2), FactorRoute::Even, vec![]);
    }
    if let Some((b, k)) = perfect_power(modulus) {
        return done((b, b.pow(k - 1)), FactorRoute::PerfectPower, vec![]);
    }
    let mut log = Vec::new();
    for i in 0..attempts {
        let a = match (i, base) {
            (0, Some(a)) => a,
            _ => rng.gen_range(2..modulus - 1),
        };
        let out = shor_attempt(a, modulus, rng);
        let lucky = gcd(a, modulus) > 1;
        let found = out.factors;
        log.push(out);
        if let Some(f) = found {
            let route = if lucky {
                FactorRoute::LuckyGcd
            } else {
                FactorRoute::PeriodFinding
            };
            return done(f, route, log);
        }
    }
    Err(Error::InvalidParameter(format!(
        "no factor of {modulus} found in {attempts} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn branch_map_for_constant_seven() {
        // A π correction on an eigen-free single branch: ψ = |1⟩, Uψ = |7⟩.
        let s = SparseBranchState::basis(1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (_, next) = functional_run_shor_step(&s, 7, 15, Angle::ZERO, &mut rng);
        let keys: Vec<u128> = next.work.keys().copied().collect();
        assert_eq!(keys, vec![1, 7]);
        assert!((next.total_probability() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn equal_branches_give_fair_bit() {
        let s = SparseBranchState::basis(1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ones = (0..4000)
            .filter(|_| functional_run_shor_step(&s, 7, 15, Angle::ZERO, &mut rng).0)
            .count();
        assert!((1800..2200).contains(&ones), "{ones}");
    }

    #[test]
    fn fixed_point_constant_never_measures_one() {
        let s = SparseBranchState::basis(4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            assert!(!functional_run_shor_step(&s, 1, 15, Angle::ZERO, &mut rng).0);
        }
    }

    #[test]
    fn measurements_are_multiples_of_64_for_seven_mod_fifteen() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            assert_eq!(run_period_finding(7, 15, &mut rng) % 64, 0);
        }
    }

    #[test]
    fn factors_small_composites() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(factor(15, None, 20, &mut rng).unwrap().factors, (3, 5));
        assert_eq!(factor(21, None, 20, &mut rng).unwrap().factors, (3, 7));
        assert_eq!(
            factor(21, Some(6), 1, &mut rng).unwrap().route,
            FactorRoute::LuckyGcd
        );
        assert_eq!(
            factor(9, None, 1, &mut rng).unwrap().route,
            FactorRoute::PerfectPower
        );
        assert!(factor(13, None, 5, &mut rng).is_err());
    }
}
