//! Oracle-checked sweeps of block builders on either engine.
//!
//! A [`Bench`] pairs an executable circuit (Fourier-space blocks wrapped in
//! QFT/iQFT) with the integer fields it reads and a classical oracle for the
//! complete output state, so ancilla cleanliness is checked implicitly.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::blocks::div::{build_gmphidiv, DivMode, DividerLayout};
use crate::blocks::mac::{build_phimac, build_phimac_cascade};
use crate::blocks::modmul::{
    build_modexp, build_phimac_mod, build_phimul_mod, ModMulLayout, Version,
};
use crate::blocks::qft::{
    build_ccphi_add_const, build_cphi_add_const, build_phi_add_const, build_phi_add_generic,
    build_qft, emit_iqft, emit_qft, Source,
};
use crate::blocks::range;
use crate::circuit::{with_inverse, Circuit};
use crate::classical::{div_constants, mod_pow};
use crate::error::{Error, Result};
use crate::sim::dense::{dense_run, DenseState};
use crate::sim::{Bits, StructuredState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    Dense { cap: usize },
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Exhaustive,
    Random { count: usize, seed: u64 },
}

/// An integer input stored on `qubits`, drawn from `0..bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    pub name: &'static str,
    pub qubits: Vec<usize>,
    pub bound: u128,
}

type Filter = Box<dyn Fn(&[u128]) -> bool + Send + Sync>;
type Oracle = Box<dyn Fn(&[u128]) -> Vec<(Vec<usize>, u128)> + Send + Sync>;

pub struct Bench {
    pub name: String,
    pub circuit: Circuit,
    pub fields: Vec<Field>,
    filter: Filter,
    /// Expected register values; every qubit not listed must be zero.
    oracle: Oracle,
}

/// The basis states a bench reads, for a strategy.
impl Bench {
    fn new(name: String, circuit: Circuit, fields: Vec<Field>, oracle: Oracle) -> Bench {
        Bench {
            name,
            circuit,
            fields,
            filter: Box::new(|_| true),
            oracle,
        }
    }

    fn with_filter(mut self, f: impl Fn(&[u128]) -> bool + Send + Sync + 'static) -> Bench {
        self.filter = Box::new(f);
        self
    }

    pub fn accepts(&self, values: &[u128]) -> bool {
        values.len() == self.fields.len()
            && values.iter().zip(&self.fields).all(|(v, f)| v < &f.bound)
            && (self.filter)(values)
    }

    pub fn encode(&self, values: &[u128]) -> Bits {
        let mut b = Bits::zeros(self.circuit.width());
        for (f, &v) in self.fields.iter().zip(values) {
            b.write(&f.qubits, v);
        }
        b
    }

    pub fn expected(&self, values: &[u128]) -> Bits {
        let mut b = Bits::zeros(self.circuit.width());
        for (qs, v) in (self.oracle)(values) {
            b.write(&qs, v);
        }
        b
    }

    /// Number of field tuples in the exhaustive sweep, before filtering.
    pub fn space_size(&self) -> Option<u128> {
        self.fields
            .iter()
            .try_fold(1u128, |acc, f| acc.checked_mul(f.bound))
    }

    pub fn cases(&self, strategy: Strategy) -> Result<Vec<Vec<u128>>> {
        match strategy {
            Strategy::Exhaustive => {
                let size = self.space_size().filter(|&s| s <= 1 << 26).ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "{} is too large for an exhaustive sweep",
                        self.name
                    ))
                })?;
                Ok((0..size)
                    .map(|mut i| {
                        self.fields
                            .iter()
                            .map(|f| {
                                let v = i % f.bound;
                                i /= f.bound;
                                v
                            })
                            .collect::<Vec<u128>>()
                    })
                    .filter(|v| (self.filter)(v))
                    .collect())
            }
            Strategy::Random { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut out = Vec::with_capacity(count);
                let mut tries = 0usize;
                while out.len() < count {
                    tries += 1;
                    if tries > 1000 * count.max(1) {
                        return Err(Error::InvalidParameter(format!(
                            "{}: input domain too sparse",
                            self.name
                        )));
                    }
                    let v: Vec<u128> = self
                        .fields
                        .iter()
                        .map(|f| rng.gen_range(0..f.bound))
                        .collect();
                    if (self.filter)(&v) {
                        out.push(v);
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Final basis state of `c` on `input`, or a description of why there is none.
pub fn run_basis(
    c: &Circuit,
    input: &Bits,
    engine: Engine,
) -> Result<std::result::Result<Bits, String>> {
    match engine {
        Engine::Structured => {
            let mut s = StructuredState::from_bits(input);
            s.run(c)?;
            Ok(s.basis()
                .ok_or_else(|| "output is not a basis state".to_string()))
        }
        Engine::Dense { cap } => {
            if c.width() > cap {
                return Err(Error::TooWide {
                    width: c.width(),
                    cap,
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let s = dense_run(c, input.to_u128() as usize, cap, &mut rng)?;
            if (s.norm_sqr() - 1.0).abs() > 1e-10 {
                return Ok(Err(format!("norm drifted to {}", s.norm_sqr())));
            }
            Ok(s.basis_output(1e-10)
                .map(|i| Bits::from_u128(i as u128, c.width()))
                .ok_or_else(|| "output is not a basis state".to_string()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub values: Vec<u128>,
    pub expected: Bits,
    pub got: std::result::Result<Bits, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// The first ten failing cases in sweep order.
    pub counterexamples: Vec<Counterexample>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Checks every case against the oracle; stops at the first engine error.
pub fn verify(bench: &Bench, strategy: Strategy, engine: Engine) -> Result<VerifyReport> {
    let cases = bench.cases(strategy)?;
    let results: Vec<Result<Option<Counterexample>>> = cases
        .par_iter()
        .map(|v| {
            let expected = bench.expected(v);
            let got = run_basis(&bench.circuit, &bench.encode(v), engine)?;
            Ok((got.as_ref() != Ok(&expected)).then(|| Counterexample {
                values: v.clone(),
                expected,
                got,
            }))
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        failures.extend(r?);
    }
    Ok(VerifyReport {
        name: bench.name.clone(),
        cases: cases.len(),
        failures: failures.len(),
        counterexamples: failures.into_iter().take(10).collect(),
    })
}

fn fourier_wrap(inner: &Circuit, regs: &[&[usize]]) -> Circuit {
    let mut c = Circuit::new(inner.width());
    for r in regs {
        emit_qft(&mut c, r, None).expect("valid register");
    }
    c.append(inner);
    for r in regs {
        emit_iqft(&mut c, r, None).expect("valid register");
    }
    c
}

fn modulo(v: i128, bits: usize) -> u128 {
    (v as u128) & ((1u128 << bits) - 1)
}

fn field(name: &'static str, qubits: Vec<usize>, bound: u128) -> Field {
    Field {
        name,
        qubits,
        bound,
    }
}

pub fn qft_bench(width: usize, cutoff: Option<u32>) -> Result<Bench> {
    let c = with_inverse(&build_qft(width, cutoff)?)?;
    let b = range(0, width);
    let out = b.clone();
    Ok(Bench::new(
        format!("qft(width={width}, cutoff={cutoff:?}) then inverse"),
        c,
        vec![field("b", b, 1 << width)],
        Box::new(move |v| vec![(out.clone(), v[0])]),
    ))
}

pub fn phi_add_bench(width: usize, k: i128) -> Bench {
    let b = range(0, width);
    let c = fourier_wrap(&build_phi_add_const(width, k), &[&b]);
    let out = b.clone();
    Bench::new(
        format!("phiadd(width={width}, k={k})"),
        c,
        vec![field("b", b, 1 << width)],
        Box::new(move |v| vec![(out.clone(), modulo(v[0] as i128 + k, width))]),
    )
}

pub fn cphi_add_bench(width: usize, k: i128) -> Result<Bench> {
    let b = range(0, width);
    let c = fourier_wrap(&build_cphi_add_const(width, k, width)?, &[&b]);
    let out = b.clone();
    Ok(Bench::new(
        format!("cphiadd(width={width}, k={k})"),
        c,
        vec![field("b", b, 1 << width), field("c", vec![width], 2)],
        Box::new(move |v| {
            vec![
                (out.clone(), modulo(v[0] as i128 + v[1] as i128 * k, width)),
                (vec![width], v[1]),
            ]
        }),
    ))
}

pub fn ccphi_add_bench(width: usize, k: i128) -> Result<Bench> {
    let b = range(0, width);
    let c = fourier_wrap(&build_ccphi_add_const(width, k, width, width + 1)?, &[&b]);
    let out = b.clone();
    Ok(Bench::new(
        format!("ccphiadd(width={width}, k={k})"),
        c,
        vec![
            field("b", b, 1 << width),
            field("c", vec![width, width + 1], 4),
        ],
        Box::new(move |v| {
            let on = i128::from(v[1] == 3);
            vec![
                (out.clone(), modulo(v[0] as i128 + on * k, width)),
                (vec![width, width + 1], v[1]),
            ]
        }),
    ))
}

/// Source register on `width..2·width`.
pub fn phi_add_generic_bench(width: usize) -> Result<Bench> {
    let b = range(0, width);
    let a = range(width, width);
    let src: Vec<Source> = a.iter().map(|&q| Source::Qubit(q)).collect();
    let c = fourier_wrap(&build_phi_add_generic(&src, width)?, &[&b]);
    let (ob, oa) = (b.clone(), a.clone());
    Ok(Bench::new(
        format!("phiaddgeneric(width={width})"),
        c,
        vec![field("b", b, 1 << width), field("a", a, 1 << width)],
        Box::new(move |v| {
            vec![
                (ob.clone(), modulo((v[0] + v[1]) as i128, width)),
                (oa.clone(), v[1]),
            ]
        }),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MacForm {
    Cascade,
    Decomposed,
    Inverse,
}

pub fn phimac_bench(n: usize, a: i128, form: MacForm) -> Result<Bench> {
    let (x, acc) = (range(1, n), range(n + 1, 2 * n));
    let (inner, sign, label) = match form {
        MacForm::Cascade => (build_phimac_cascade(n, a)?, 1, "phimac_cascade"),
        MacForm::Decomposed => (build_phimac(n, a)?, 1, "phimac"),
        MacForm::Inverse => (build_phimac(n, a)?.inverse()?, -1, "phimac_inverse"),
    };
    let c = fourier_wrap(&inner, &[&acc]);
    let (ox, oacc) = (x.clone(), acc.clone());
    Ok(Bench::new(
        format!("{label}(n={n}, a={a})"),
        c,
        vec![
            field("c", vec![0], 2),
            field("x", x, 1 << n),
            field("b", acc, 1 << (2 * n)),
        ],
        Box::new(move |v| {
            let prod = (v[0] * v[1]) as i128 * a * sign;
            vec![
                (vec![0], v[0]),
                (ox.clone(), v[1]),
                (oacc.clone(), modulo(v[2] as i128 + prod, 2 * n)),
            ]
        }),
    ))
}

fn div_domain(n: usize, d: u128, mode: DivMode) -> u128 {
    match mode {
        DivMode::Generic => 1 << n,
        DivMode::Constrained => d << n,
    }
}

pub fn gmphidiv_bench(n: usize, d: u128, mode: DivMode) -> Result<Bench> {
    div_constants(d, n as u32)?;
    let lay = DividerLayout::standard(n);
    let c = build_gmphidiv(n, d, mode)?;
    let (q, r) = (lay.r2.clone(), lay.r1.clone());
    Ok(Bench::new(
        format!("gmphidiv(n={n}, d={d}, {mode:?})"),
        c,
        vec![field("z", lay.z(), div_domain(n, d, mode))],
        Box::new(move |v| vec![(q.clone(), v[0] / d), (r.clone(), v[0] % d)]),
    ))
}

pub fn gmphidiv_inverse_bench(n: usize, d: u128, mode: DivMode) -> Result<Bench> {
    div_constants(d, n as u32)?;
    let lay = DividerLayout::standard(n);
    let c = build_gmphidiv(n, d, mode)?.inverse()?;
    let z = lay.z();
    let limit = div_domain(n, d, mode);
    Ok(Bench::new(
        format!("gmphidiv_inverse(n={n}, d={d}, {mode:?})"),
        c,
        vec![
            field("q", lay.r2.clone(), 1 << n),
            field("r", lay.r1.clone(), d),
        ],
        Box::new(move |v| vec![(z.clone(), v[0] * d + v[1])]),
    )
    .with_filter(move |v| v[0] * d + v[1] < limit))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModForm {
    MacMod,
    MulMod,
}

pub fn modmul_bench(
    n: usize,
    a: u128,
    modulus: u128,
    version: Version,
    form: ModForm,
) -> Result<Bench> {
    let lay = ModMulLayout::new(n, version, 1);
    let (c, label) = match form {
        ModForm::MacMod => (build_phimac_mod(n, a, modulus, version)?, "phimacmod"),
        ModForm::MulMod => (build_phimul_mod(n, a, modulus, version)?, "phimulmod"),
    };
    let (y, rbus) = (lay.y.clone(), lay.rbus.clone());
    Ok(Bench::new(
        format!("{label}(n={n}, a={a}, N={modulus}, {version:?})"),
        c,
        vec![field("c", vec![0], 2), field("y", lay.y.clone(), modulus)],
        Box::new(move |v| {
            let prod = a * v[1] % modulus;
            match (form, v[0]) {
                (ModForm::MacMod, 1) => vec![(vec![0], 1), (y.clone(), v[1]), (rbus.clone(), prod)],
                (ModForm::MacMod, _) => vec![(y.clone(), v[1])],
                (ModForm::MulMod, 1) => vec![(vec![0], 1), (y.clone(), prod)],
                (ModForm::MulMod, _) => vec![(y.clone(), v[1])],
            }
        }),
    ))
}

pub fn modexp_bench(n: usize, a: u128, modulus: u128, version: Version) -> Result<Bench> {
    let c = build_modexp(n, a, modulus, version)?;
    let x = range(0, 2 * n);
    let y = range(2 * n, n);
    let ox = x.clone();
    Ok(Bench::new(
        format!("modexp(n={n}, a={a}, N={modulus}, {version:?})"),
        c,
        vec![field("x", x, 1 << (2 * n))],
        Box::new(move |v| vec![(ox.clone(), v[0]), (y.clone(), mod_pow(a, v[0], modulus))]),
    ))
}

/// Largest entrywise distance between the two engines at every block
/// boundary and at the end.
pub fn cross_engine_distance(c: &Circuit, input: &Bits, cap: usize) -> Result<f64> {
    let mut s = StructuredState::from_bits(input);
    let mut d = DenseState::basis(c.width(), input.to_u128() as usize, cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checkpoints: Vec<usize> = c.markers().iter().map(|m| m.pos).collect();
    checkpoints.push(c.len());
    checkpoints.dedup();
    let mut worst = 0.0f64;
    let mut next = checkpoints.into_iter().peekable();
    for (i, g) in c.gates().iter().enumerate() {
        while next.next_if(|&p| p == i).is_some() {
            worst = worst.max(d.max_distance(&s.to_dense()));
        }
        s.apply(i, g)?;
        d.apply(g, &mut rng)?;
    }
    worst = worst.max(d.max_distance(&s.to_dense()));
    Ok(worst)
}

/// Average probability that the adder built from QFTs truncated at
/// `cutoff` returns `(b + k) mod 2^n`, over all `b` and `k`.
pub fn aqft_adder_success(n: usize, cutoff: u32) -> Result<f64> {
    let b = range(0, n);
    let mut total = 0.0;
    for k in 0..(1i128 << n) {
        let mut c = Circuit::new(n);
        emit_qft(&mut c, &b, Some(cutoff))?;
        c.append(&build_phi_add_const(n, k));
        emit_iqft(&mut c, &b, Some(cutoff))?;
        for input in 0..(1usize << n) {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let s = dense_run(&c, input, n, &mut rng)?;
            let target = modulo(input as i128 + k, n) as usize;
            total += s.amplitudes()[target].norm_sqr();
        }
    }
    Ok(total / (1u128 << (2 * n)) as f64)
}

/// Amplitudes of a basis state, for comparisons against dense output.
pub fn basis_amplitudes(width: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << width];
    v[index] = Complex64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    const DENSE: Engine = Engine::Dense { cap: 22 };

    #[test]
    fn adder_benches_pass() {
        for k in [0, 3, -6] {
            assert!(verify(&phi_add_bench(4, k), Strategy::Exhaustive, DENSE)
                .unwrap()
                .passed());
        }
        assert!(
            verify(&cphi_add_bench(3, 5).unwrap(), Strategy::Exhaustive, DENSE)
                .unwrap()
                .passed()
        );
        assert!(
            verify(&ccphi_add_bench(3, 5).unwrap(), Strategy::Exhaustive, DENSE)
                .unwrap()
                .passed()
        );
        assert!(verify(
            &phi_add_generic_bench(3).unwrap(),
            Strategy::Exhaustive,
            DENSE
        )
        .unwrap()
        .passed());
    }

    #[test]
    fn divider_case_count() {
        let b = gmphidiv_bench(4, 5, DivMode::Constrained).unwrap();
        let r = verify(&b, Strategy::Exhaustive, Engine::Structured).unwrap();
        assert_eq!((r.cases, r.failures), (80, 0));
        let b = gmphidiv_inverse_bench(4, 5, DivMode::Constrained).unwrap();
        let r = verify(&b, Strategy::Exhaustive, Engine::Structured).unwrap();
        assert_eq!((r.cases, r.failures), (80, 0));
    }

    #[test]
    fn broken_oracle_is_reported() {
        let mut b = phi_add_bench(3, 1);
        b.oracle = Box::new(|v| vec![(range(0, 3), v[0])]);
        let r = verify(&b, Strategy::Exhaustive, DENSE).unwrap();
        assert_eq!(r.failures, 8);
        assert_eq!(r.counterexamples.len(), 8);
    }

    #[test]
    fn random_strategy_is_seeded() {
        let b = phimac_bench(3, 5, MacForm::Decomposed).unwrap();
        let s = Strategy::Random { count: 20, seed: 9 };
        assert_eq!(b.cases(s).unwrap(), b.cases(s).unwrap());
    }

    #[test]
    fn dense_cap_reported() {
        let b = gmphidiv_bench(4, 5, DivMode::Constrained).unwrap();
        assert!(matches!(
            verify(&b, Strategy::Exhaustive, DENSE),
            Err(Error::TooWide { .. })
        ));
    }

    #[test]
    fn aqft_full_cutoff_is_exact() {
        assert!((aqft_adder_success(2, 2).unwrap() - 1.0).abs() < 1e-12);
        assert!(aqft_adder_success(3, 1).unwrap() < 1.0);
    }
}
