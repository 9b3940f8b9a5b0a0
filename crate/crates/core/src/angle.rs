//! Exact dyadic phases.
//!
//! An [`Angle`] is the phase `2π·k / 2^p`. Every rotation used by the Fourier
//! arithmetic circuits has this form, so composition, negation and halving
//! stay exact and circuit inversion can be checked bit-for-bit.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

/// Largest supported denominator exponent.
pub const MAX_DENOM_EXP: u32 = 127;

/// Phase `2π·numerator / 2^denom_exp`, numerator reduced modulo `2^denom_exp`.
///
/// Equality and hashing compare the phase value, so `1/2^1 == 2/2^2`.
#[derive(Clone, Copy, Debug)]
pub struct Angle {
    numerator: u128,
    denom_exp: u32,
}

fn mask(exp: u32) -> u128 {
    if exp >= 128 {
        u128::MAX
    } else {
        (1u128 << exp) - 1
    }
}

impl Angle {
    pub const ZERO: Angle = Angle {
        numerator: 0,
        denom_exp: 0,
    };

    /// Builds `2π·numerator / 2^denom_exp`; negative numerators wrap.
    pub fn new(numerator: i128, denom_exp: u32) -> Angle {
        assert!(
            denom_exp <= MAX_DENOM_EXP,
            "denominator 2^{denom_exp} too large"
        );
        Angle {
            numerator: (numerator as u128) & mask(denom_exp),
            denom_exp,
        }
    }

    /// Builds the angle from an unsigned numerator, reducing it modulo `2^denom_exp`.
    pub fn from_unsigned(numerator: u128, denom_exp: u32) -> Angle {
        assert!(
            denom_exp <= MAX_DENOM_EXP,
            "denominator 2^{denom_exp} too large"
        );
        Angle {
            numerator: numerator & mask(denom_exp),
            denom_exp,
        }
    }

    /// The phase gate `R_k` with angle `2π / 2^k`.
    pub fn r(k: u32) -> Angle {
        Angle::from_unsigned(1, k)
    }

    pub fn numerator(self) -> u128 {
        self.numerator
    }

    pub fn denom_exp(self) -> u32 {
        self.denom_exp
    }

    pub fn is_zero(self) -> bool {
        self.numerator == 0
    }

    /// Same phase with the smallest denominator.
    pub fn reduced(self) -> Angle {
        if self.numerator == 0 {
            return Angle::ZERO;
        }
        let tz = self.numerator.trailing_zeros().min(self.denom_exp);
        Angle {
            numerator: self.numerator >> tz,
            denom_exp: self.denom_exp - tz,
        }
    }

    /// Sum of phases modulo 2π; the denominator is the larger of the two.
    pub fn compose(self, other: Angle) -> Angle {
        let exp = self.denom_exp.max(other.denom_exp);
        let a = self.numerator << (exp - self.denom_exp);
        let b = other.numerator << (exp - other.denom_exp);
        Angle::from_unsigned(a.wrapping_add(b), exp)
    }

    pub fn negate(self) -> Angle {
        Angle::from_unsigned(self.numerator.wrapping_neg(), self.denom_exp)
    }

    /// One of the two square roots: `θ/2` taken on the representative in `[0, 2π)`.
    pub fn half(self) -> Angle {
        Angle::from_unsigned(self.numerator, self.denom_exp + 1)
    }

    /// The phase scaled by an integer.
    pub fn times(self, k: i128) -> Angle {
        Angle::from_unsigned(self.numerator.wrapping_mul(k as u128), self.denom_exp)
    }

    /// Phase in radians, in `[0, 2π)`.
    pub fn radians(self) -> f64 {
        self.turns() * std::f64::consts::TAU
    }

    /// Phase as a fraction of a full turn, in `[0, 1)`.
    pub fn turns(self) -> f64 {
        let r = self.reduced();
        (r.numerator as f64) * (-(r.denom_exp as f64)).exp2()
    }

    /// `true` when the phase is 0 or π.
    pub fn is_real(self) -> bool {
        self.reduced().denom_exp <= 1
    }
}

impl Default for Angle {
    fn default() -> Self {
        Angle::ZERO
    }
}

impl PartialEq for Angle {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.reduced(), other.reduced());
        a.numerator == b.numerator && a.denom_exp == b.denom_exp
    }
}

impl Eq for Angle {}

impl Hash for Angle {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let r = self.reduced();
        r.numerator.hash(state);
        r.denom_exp.hash(state);
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.denom_exp.max(other.denom_exp);
        (self.numerator << (exp - self.denom_exp))
            .cmp(&(other.numerator << (exp - other.denom_exp)))
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        self.compose(rhs)
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        self.negate()
    }
}

impl std::iter::Sum for Angle {
    fn sum<I: Iterator<Item = Angle>>(iter: I) -> Angle {
        iter.fold(Angle::ZERO, Angle::compose)
    }
}

/// Text form `k/2^p`, as used by the circuit format.
impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.denom_exp)
    }
}

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Angle, String> {
        let (num, exp) = s
            .split_once("/2^")
            .ok_or_else(|| format!("angle `{s}` is not of the form k/2^p"))?;
        let num: u128 = num
            .parse()
            .map_err(|e| format!("angle numerator `{num}`: {e}"))?;
        let exp: u32 = exp
            .parse()
            .map_err(|e| format!("angle exponent `{exp}`: {e}"))?;
        if exp > MAX_DENOM_EXP {
            return Err(format!("angle exponent {exp} exceeds {MAX_DENOM_EXP}"));
        }
        if exp < 128 && num >> exp != 0 {
            return Err(format!("angle numerator {num} not reduced modulo 2^{exp}"));
        }
        Ok(Angle::from_unsigned(num, exp))
    }
}

/// Phase added to qubit `qubit` of a Fourier-space register when the constant
/// `k` is added: `A_j = Σ_{i=1}^{j+1} k_{j+1-i} / 2^i`, i.e. `(k mod 2^{j+1}) / 2^{j+1}`.
pub fn adder_angle(k: i128, qubit: usize) -> Angle {
    Angle::new(k, qubit as u32 + 1)
}
