//! Classical arithmetic: Granlund–Montgomery division by an invariant
//! integer on explicit n-bit words, modular helpers and Shor post-processing.

use crate::error::{Error, Result};

/// Largest word size accepted by the classical divider.
pub const MAX_WORD: u32 = 63;

/// Magic constants for dividing by `d` on `n`-bit words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DividerConstants {
    pub n: u32,
    pub d: u128,
    /// `1 + floor(log2 d)`, so `2^(l-1) <= d < 2^l`.
    pub l: u32,
    pub m_prime: u128,
    /// `d · 2^(n-l)`.
    pub d_norm: u128,
    /// `d_norm - 2^n`, in `(-2^n, 0]`.
    pub d_c: i128,
}

pub fn div_constants(d: u128, n: u32) -> Result<DividerConstants> {
    if n == 0 || n > MAX_WORD || d == 0 || d >> n != 0 {
        return Err(Error::InvalidDivisor { d, n });
    }
    let l = 128 - d.leading_zeros();
    let m_prime = ((1u128 << n) * ((1u128 << l) - d) - 1) / d;
    let d_norm = d << (n - l);
    Ok(DividerConstants {
        n,
        d,
        l,
        m_prime,
        d_norm,
        d_c: d_norm as i128 - (1i128 << n),
    })
}

/// n-bit word operations.
#[derive(Clone, Copy)]
struct Word {
    n: u32,
}

impl Word {
    fn mask(self) -> u128 {
        (1u128 << self.n) - 1
    }
    fn dmask(self) -> u128 {
        if 2 * self.n >= 128 {
            u128::MAX
        } else {
            (1u128 << (2 * self.n)) - 1
        }
    }
    fn sll(self, x: u128, i: u32) -> u128 {
        (x << i) & self.mask()
    }
    fn srl(self, x: u128, i: u32) -> u128 {
        (x & self.mask()) >> i
    }
    fn high(self, x: u128) -> u128 {
        (x & self.dmask()) >> self.n
    }
    fn low(self, x: u128) -> u128 {
        x & self.mask()
    }
    /// All ones when the sign bit is set.
    fn xsign(self, x: u128) -> u128 {
        if (x >> (self.n - 1)) & 1 == 1 {
            self.mask()
        } else {
            0
        }
    }
    fn and(self, x: u128, y: u128) -> u128 {
        x & y & self.mask()
    }
    fn neg(self, x: u128) -> u128 {
        x.wrapping_neg() & self.mask()
    }
    fn add(self, x: u128, y: u128) -> u128 {
        x.wrapping_add(y) & self.mask()
    }
}

/// Intermediate values of one division, in the order they are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DivisionTrace {
    pub n2: u128,
    pub n10: u128,
    pub n1: u128,
    pub n_adj: u128,
    /// `m'·(n2 + n1) + n_adj`, a double word.
    pub product: u128,
    pub q1: u128,
    /// `z - q1·d - d` as a `2n`-bit two's complement double word.
    pub dr: u128,
    pub q: u128,
    pub r: u128,
}

/// Division of the double word `z` by `d` through multiplication and shifts,
/// returning every intermediate value.
pub fn gm_divide_trace(z: u128, d: u128, n: u32) -> Result<DivisionTrace> {
    let k = div_constants(d, n)?;
    if z >= d << n {
        return Err(Error::QuotientOverflow { z, d, n });
    }
    let w = Word { n };
    let l = k.l;
    let n2 = w.add(w.sll(w.high(z), n - l), w.srl(w.low(z), l));
    let n10 = w.sll(w.low(z), n - l);
    // n1 = -XSIGN(n10), held as 0 or 1.
    let n1 = w.neg(w.xsign(n10));
    let d_c = (k.d_c as u128) & w.mask();
    let n_adj = w.add(n10, w.and(w.neg(n1), d_c));
    let product = (k.m_prime * w.add(n2, n1) + n_adj) & w.dmask();
    let q1 = w.add(n2, w.high(product));
    let not_q1 = w.mask() - q1;
    let dr = z.wrapping_sub(d << n).wrapping_add(not_q1 * d) & w.dmask();
    let q = w.add(w.add(w.high(dr), w.neg(not_q1)), 1u128 << n);
    let r = w.add(w.low(dr), w.and(w.add(d, 1u128 << n), w.high(dr)));
    Ok(DivisionTrace {
        n2,
        n10,
        n1,
        n_adj,
        product,
        q1,
        dr,
        q,
        r,
    })
}

/// `(floor(z/d), z mod d)` computed with the word-level division-by-constant sequence.
pub fn gm_divide(z: u128, d: u128, n: u32) -> Result<(u128, u128)> {
    let t = gm_divide_trace(z, d, n)?;
    Ok((t.q, t.r))
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn mod_mul(a: u128, b: u128, m: u128) -> u128 {
    if let Some(p) = a.checked_mul(b) {
        return p % m;
    }
    // Double-and-add for operands too wide for a single product.
    let (mut a, mut b, mut acc) = (a % m, b, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            acc = (acc + a) % m;
        }
        a = (a << 1) % m;
        b >>= 1;
    }
    acc
}

pub fn mod_pow(base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let (mut b, mut acc) = (base % m, 1u128);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, b, m);
        }
        b = mod_mul(b, b, m);
        exp >>= 1;
    }
    acc
}

pub fn mod_inverse(a: u128, modulus: u128) -> Result<u128> {
    let no_inverse = Error::NoInverse { a, modulus };
    if modulus == 0 {
        return Err(no_inverse);
    }
    let (mut r0, mut r1) = (modulus as i128, (a % modulus) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(no_inverse);
    }
    Ok(t0.rem_euclid(modulus as i128) as u128 % modulus.max(2))
}

/// `a^(2^i) mod N` for `i = 0..2n`, by repeated squaring.
pub fn mod_exp_constants(a: u128, modulus: u128, n: u32) -> Vec<u128> {
    let mut out = Vec::with_capacity(2 * n as usize);
    let mut x = a % modulus;
    for _ in 0..2 * n {
        out.push(x);
        x = mod_mul(x, x, modulus);
    }
    out
}

/// Smallest convergent denominator `r` of `y / 2^bits` with `1 < r < N` and
/// `|y/2^bits - s/r| <= 2^-(bits/2 + 1)` for a nonzero numerator `s`.
pub fn continued_fraction_period(y: u128, bits: u32, modulus: u128) -> Option<u128> {
    if y == 0 || bits == 0 || bits > 100 {
        return None;
    }
    let denom = 1u128 << bits;
    let tol_shift = bits - (bits / 2 + 1).min(bits);
    let (mut num, mut den) = (y, denom);
    let (mut p_prev, mut p) = (0u128, 1u128);
    let (mut q_prev, mut q) = (1u128, 0u128);
    while den != 0 {
        let a = num / den;
        (num, den) = (den, num - a * den);
        (p_prev, p) = (p, a * p + p_prev);
        (q_prev, q) = (q, a * q + q_prev);
        if q >= modulus {
            break;
        }
        if p == 0 || q < 2 {
            continue;
        }
        let diff = (y * q).abs_diff(p * denom);
        if diff <= q << tol_shift {
            return Some(q);
        }
    }
    None
}

/// Factors from a period candidate: needs `r` even and `a^(r/2) != -1 (mod N)`.
pub fn extract_factors(a: u128, r: u128, modulus: u128) -> Option<(u128, u128)> {
    if r == 0 || r % 2 == 1 {
        return None;
    }
    let x = mod_pow(a, r / 2, modulus);
    if x == modulus - 1 {
        return None;
    }
    let p = gcd((x + modulus - 1) % modulus, modulus);
    let q = gcd(x + 1, modulus);
    let nontrivial = |f: u128| f > 1 && f < modulus;
    (nontrivial(p) && nontrivial(q)).then(|| (p.min(q), p.max(q)))
}

/// Result of one period-finding attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShorOutcome {
    pub a: u128,
    pub modulus: u128,
    pub measured_bits: u128,
    pub period_candidate: Option<u128>,
    pub factors: Option<(u128, u128)>,
}

/// Number of bits needed to hold `x`.
pub fn bit_length(x: u128) -> u32 {
    128 - x.leading_zeros()
}

/// `Some((b, k))` when `x = b^k` for `k >= 2`.
pub fn perfect_power(x: u128) -> Option<(u128, u32)> {
    for k in (2..=bit_length(x)).rev() {
        let guess = (x as f64).powf(1.0 / k as f64).round() as u128;
        for b in guess.saturating_sub(1)..=guess + 1 {
            if b >= 2 && b.checked_pow(k) == Some(x) {
                return Some((b, k));
            }
        }
    }
    None
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(x: u128) -> bool {
    if x < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if x.is_multiple_of(p) {
            return x == p;
        }
    }
    let (mut d, mut s) = (x - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut y = mod_pow(a, d, x);
        if y == 1 || y == x - 1 {
            continue;
        }
        for _ in 1..s {
            y = mod_mul(y, y, x);
            if y == x - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_examples() {
        let k = div_constants(5, 4).unwrap();
        assert_eq!((k.l, k.m_prime, k.d_norm, k.d_c), (3, 9, 10, -6));
        let k = div_constants(1, 4).unwrap();
        assert_eq!((k.l, k.m_prime, k.d_norm, k.d_c), (1, 15, 8, -8));
        let k = div_constants(7, 4).unwrap();
        assert_eq!((k.l, k.m_prime, k.d_norm, k.d_c), (3, 2, 14, -2));
        assert!(matches!(
            div_constants(0, 4),
            Err(Error::InvalidDivisor { .. })
        ));
        assert!(matches!(
            div_constants(16, 4),
            Err(Error::InvalidDivisor { .. })
        ));
    }

    #[test]
    fn constants_ranges() {
        for n in 1..=16u32 {
            for d in 1..(1u128 << n) {
                let k = div_constants(d, n).unwrap();
                assert!(1u128 << (k.l - 1) <= d && d < 1u128 << k.l);
                assert!(k.m_prime < 1u128 << n);
                assert_eq!(k.d_norm, d << (n - k.l));
                assert!(k.d_c > -(1i128 << n) && k.d_c <= 0);
            }
        }
    }

    #[test]
    fn divide_examples() {
        assert_eq!(gm_divide(13, 5, 4).unwrap(), (2, 3));
        assert_eq!(gm_divide(0, 5, 4).unwrap(), (0, 0));
        assert_eq!(gm_divide(79, 5, 4).unwrap(), (15, 4));
        assert!(matches!(
            gm_divide(80, 5, 4),
            Err(Error::QuotientOverflow { .. })
        ));
    }

    #[test]
    fn divide_exhaustive_small_words() {
        for n in 1..=8u32 {
            for d in 1..(1u128 << n) {
                for z in 0..(d << n) {
                    let t = gm_divide_trace(z, d, n).unwrap();
                    assert_eq!((t.q, t.r), (z / d, z % d), "z={z} d={d} n={n}");
                }
            }
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(7, 15).unwrap(), 13);
        assert_eq!(mod_inverse(1, 15).unwrap(), 1);
        assert_eq!(mod_inverse(4, 21).unwrap(), 16);
        assert!(matches!(mod_inverse(6, 15), Err(Error::NoInverse { .. })));
    }

    #[test]
    fn exp_constants() {
        assert_eq!(mod_exp_constants(7, 15, 4), vec![7, 4, 1, 1, 1, 1, 1, 1]);
        assert_eq!(mod_exp_constants(1, 15, 4), vec![1; 8]);
        assert_eq!(
            mod_exp_constants(2, 21, 5),
            vec![2, 4, 16, 4, 16, 4, 16, 4, 16, 4]
        );
        let v = mod_exp_constants(11, 247, 8);
        for w in v.windows(2) {
            assert_eq!(w[1], w[0] * w[0] % 247);
        }
    }

    #[test]
    fn period_examples() {
        assert_eq!(continued_fraction_period(192, 8, 15), Some(4));
        assert_eq!(continued_fraction_period(0, 8, 15), None);
        assert_eq!(continued_fraction_period(85, 8, 15), Some(3));
        assert_eq!(continued_fraction_period(64, 8, 15), Some(4));
    }

    #[test]
    fn factor_examples() {
        assert_eq!(extract_factors(7, 4, 15), Some((3, 5)));
        assert_eq!(extract_factors(2, 6, 21), Some((3, 7)));
        assert_eq!(extract_factors(7, 3, 15), None);
        // 14^1 = -1 mod 15
        assert_eq!(extract_factors(14, 2, 15), None);
    }

    #[test]
    fn number_theory_helpers() {
        assert_eq!(perfect_power(27), Some((3, 3)));
        assert_eq!(perfect_power(15), None);
        assert!(is_prime(13) && !is_prime(15) && is_prime(251));
        assert_eq!(mod_pow(7, 5, 15), 7);
    }
}
