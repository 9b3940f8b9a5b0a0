use proptest::prelude::*;

use qsa_core::adder_angle;
use qsa_core::blocks::div::{build_gmphidiv, DivMode, DividerLayout};
use qsa_core::blocks::mac::{build_phimac, build_phimac_inverse};
use qsa_core::blocks::modmul::{build_modexp, build_phimul_mod, Version};
use qsa_core::blocks::qft::{build_phi_add_const, build_qft, emit_iqft, emit_qft};
use qsa_core::circuit::{with_inverse, Circuit};
use qsa_core::classical::{gcd, gm_divide, mod_inverse, mod_pow};
use qsa_core::resources::{
    count_cost, resource_report, schedule_depth, CcPhaseMode, Convention, ToffoliMode,
};
use qsa_core::sim::{structured_run, Bits};

fn conventions() -> impl Strategy<Value = Convention> {
    (any::<bool>(), any::<bool>()).prop_map(|(c, t)| Convention {
        ccphase: if c {
            CcPhaseMode::CcphaseDepth1
        } else {
            CcPhaseMode::CcphaseDecomposed
        },
        toffoli: if t {
            ToffoliMode::ToffoliAs5
        } else {
            ToffoliMode::ToffoliNative
        },
    })
}

fn wrap(c: &Circuit, reg: &[usize]) -> Circuit {
    let mut out = Circuit::new(c.width());
    emit_qft(&mut out, reg, None).unwrap();
    out.append(c);
    emit_iqft(&mut out, reg, None).unwrap();
    out
}

fn run(c: &Circuit, input: &Bits) -> Bits {
    structured_run(c, input)
        .unwrap()
        .basis()
        .expect("basis output")
}

fn wrapped(v: i128, bits: usize) -> u128 {
    v.rem_euclid(1i128 << bits) as u128
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adder_angles_add(k1 in -1000i128..1000, k2 in -1000i128..1000, q in 0usize..40) {
        prop_assert_eq!(adder_angle(k1, q) + adder_angle(k2, q), adder_angle(k1 + k2, q));
    }

    #[test]
    fn adder_angle_period(k in any::<i64>(), q in 0usize..40) {
        let k = k as i128;
        prop_assert_eq!(adder_angle(k, q), adder_angle(k + (1i128 << (q + 1)), q));
        if q > 0 {
            prop_assert_eq!(adder_angle(k, q).times(2), adder_angle(k, q - 1));
        }
    }

    #[test]
    fn constant_adders_compose(n in 1usize..10, k1 in any::<i32>(), k2 in any::<i32>(), b in any::<u16>()) {
        let (k1, k2, b) = (k1 as i128, k2 as i128, b as u128 % (1 << n));
        let reg: Vec<usize> = (0..n).collect();
        let mut inner = build_phi_add_const(n, k1);
        inner.append(&build_phi_add_const(n, k2));
        let out = run(&wrap(&inner, &reg), &Bits::from_u128(b, n));
        prop_assert_eq!(out.to_u128(), wrapped(b as i128 + k1 + k2, n));
    }

    #[test]
    fn mac_contract(n in 1usize..7, a in any::<i16>(), ctl in any::<bool>(), x in any::<u16>(), b in any::<u32>()) {
        let a = a as i128;
        let (x, b) = (x as u128 % (1 << n), b as u128 % (1 << (2 * n)));
        let (xq, acc): (Vec<usize>, Vec<usize>) = ((1..=n).collect(), (n + 1..3 * n + 1).collect());
        let mut input = Bits::zeros(3 * n + 1);
        input.set(0, ctl);
        input.write(&xq, x);
        input.write(&acc, b);
        let fwd = run(&wrap(&build_phimac(n, a).unwrap(), &acc), &input);
        prop_assert_eq!(fwd.read(&acc), wrapped(b as i128 + i128::from(ctl) * x as i128 * a, 2 * n));
        prop_assert_eq!(fwd.read(&xq), x);
        let inv = run(&wrap(&build_phimac_inverse(n, a).unwrap(), &acc), &input);
        prop_assert_eq!(inv.read(&acc), wrapped(b as i128 - i128::from(ctl) * x as i128 * a, 2 * n));
    }

    #[test]
    fn mac_depth_and_cost_fixed(n in 1usize..20, a in any::<i64>()) {
        let c = build_phimac(n, a as i128).unwrap();
        let conv = Convention::default();
        prop_assert_eq!(schedule_depth(&c, conv), 8 * n);
        prop_assert_eq!(count_cost(&c, conv).total, 4 * n * (n + 1));
    }

    #[test]
    fn aqft_gate_count_monotone(w in 1usize..24) {
        let counts: Vec<usize> = (1..=w as u32).map(|m| build_qft(w, Some(m)).unwrap().len()).collect();
        prop_assert!(counts.windows(2).all(|p| p[0] <= p[1]));
        prop_assert_eq!(counts[w - 1], build_qft(w, None).unwrap().len());
        prop_assert_eq!(counts[0], w);
    }

    #[test]
    fn classical_divider_matches_hardware_division(n in 1u32..=63, d in any::<u64>(), z in any::<u64>()) {
        let d = (d as u128 % ((1u128 << n) - 1)) + 1;
        let z = z as u128 % (1u128 << n);
        prop_assert_eq!(gm_divide(z, d, n).unwrap(), (z / d, z % d));
    }

    #[test]
    fn quantum_divider_matches_division(n in 2usize..8, d in any::<u8>(), z in any::<u32>(), constrained in any::<bool>()) {
        let d = (d as u128 % ((1 << n) - 1)) + 1;
        let (mode, z) = if constrained {
            (DivMode::Constrained, z as u128 % (d << n))
        } else {
            (DivMode::Generic, z as u128 % (1 << n))
        };
        let lay = DividerLayout::standard(n);
        let c = build_gmphidiv(n, d, mode).unwrap();
        let mut input = Bits::zeros(c.width());
        input.write(&lay.z(), z);
        let out = run(&c, &input);
        prop_assert_eq!(out.read(&lay.r2), z / d);
        prop_assert_eq!(out.read(&lay.r1), z % d);
        let rest: Vec<usize> = (0..c.width()).filter(|q| !lay.r1.contains(q) && !lay.r2.contains(q)).collect();
        prop_assert!(out.is_clear(rest));
    }

    #[test]
    fn block_costs_sum_to_total(n in 2usize..5, conv in conventions()) {
        let modulus = (1u128 << n) - 1;
        for c in [build_gmphidiv(n, modulus, DivMode::Constrained).unwrap(), build_phimul_mod(n, 2, modulus, Version::V2).unwrap()] {
            let rep = resource_report(&c, conv);
            let summed: usize = rep.blocks.values().map(|b| b.total).sum();
            prop_assert_eq!(summed, rep.cost.total);
            prop_assert_eq!(rep.cost, count_cost(&c, conv));
            prop_assert!(rep.depth <= c.len() * 5);
        }
    }

    #[test]
    fn depth_of_round_trip_at_most_double(w in 1usize..16, conv in conventions()) {
        let c = build_qft(w, None).unwrap();
        let d = schedule_depth(&c, conv);
        prop_assert!(schedule_depth(&with_inverse(&c).unwrap(), conv) <= 2 * d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn modular_multiplier_contract(seed in any::<u64>(), ctl in any::<bool>(), v1 in any::<bool>()) {
        let n = 5;
        let modulus = [21u128, 25, 27, 29, 31][(seed % 5) as usize];
        let a = (2..modulus).filter(|&a| gcd(a, modulus) == 1).nth((seed >> 8) as usize % 8).unwrap();
        let y = (seed >> 16) as u128 % modulus;
        let version = if v1 { Version::V1 } else { Version::V2 };
        let c = build_phimul_mod(n, a, modulus, version).unwrap();
        let lay = qsa_core::blocks::modmul::ModMulLayout::new(n, version, 1);
        let mut input = Bits::zeros(c.width());
        input.set(0, ctl);
        input.write(&lay.y, y);
        let out = run(&c, &input);
        let want = if ctl { a * y % modulus } else { y };
        prop_assert_eq!(out.read(&lay.y), want);
        prop_assert!(out.is_clear(lay.ancillae()));
        prop_assert!(mod_inverse(a, modulus).is_ok());
    }

    #[test]
    fn modexp_contract(x in 0u128..64, a_pick in 0usize..4) {
        let (n, modulus) = (3, 7u128);
        let a = [2u128, 3, 5, 6][a_pick];
        let c = build_modexp(n, a, modulus, Version::V2).unwrap();
        let xq: Vec<usize> = (0..2 * n).collect();
        let y: Vec<usize> = (2 * n..3 * n).collect();
        let mut input = Bits::zeros(c.width());
        input.write(&xq, x);
        let out = run(&c, &input);
        prop_assert_eq!(out.read(&xq), x);
        prop_assert_eq!(out.read(&y), mod_pow(a, x, modulus));
        prop_assert!(out.is_clear(3 * n..c.width()));
    }
}

#[test]
fn text_round_trip_on_every_builder() {
    let modulus = 15;
    let circuits = [
        build_qft(5, Some(3)).unwrap(),
        build_phimac(3, -5).unwrap(),
        build_gmphidiv(4, 5, DivMode::Constrained).unwrap(),
        build_phimul_mod(4, 7, modulus, Version::V1).unwrap(),
        build_modexp(4, 7, modulus, Version::V2).unwrap(),
    ];
    for c in circuits {
        let text = c.to_string();
        let parsed: Circuit = text.parse().unwrap();
        assert_eq!(parsed, c);
        assert_eq!(parsed.to_string(), text);
    }
}
