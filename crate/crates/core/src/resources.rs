//! ASAP depth scheduling, gate-cost accounting and unit-level reports.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::div::{build_gmphidiv, DivMode};
use crate::blocks::mac::build_phimac;
use crate::blocks::modmul::{build_phimul_mod, Version};
use crate::blocks::qft::build_qft;
use crate::circuit::Circuit;
use crate::decompose::ccphase_network;
use crate::error::Result;
use crate::gate::Gate;

/// How doubly controlled phase gates are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CcPhaseMode {
    /// One timestep, one gate.
    CcphaseDepth1,
    /// Expanded into five two-qubit gates.
    CcphaseDecomposed,
}

/// How Toffoli gates (including those inside controlled swaps) are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ToffoliMode {
    /// Five timesteps and five gates.
    ToffoliAs5,
    ToffoliNative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Convention {
    pub ccphase: CcPhaseMode,
    pub toffoli: ToffoliMode,
}

impl Default for Convention {
    fn default() -> Self {
        Convention {
            ccphase: CcPhaseMode::CcphaseDepth1,
            toffoli: ToffoliMode::ToffoliAs5,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.ccphase {
            CcPhaseMode::CcphaseDepth1 => "ccphase_depth_1",
            CcPhaseMode::CcphaseDecomposed => "ccphase_decomposed",
        };
        let t = match self.toffoli {
            ToffoliMode::ToffoliAs5 => "toffoli_as_5",
            ToffoliMode::ToffoliNative => "toffoli_native",
        };
        write!(f, "{c}, {t}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Class {
    One,
    Two,
    CcPhase,
    Toffoli,
}

/// A gate after convention expansion: operands, duration and class.
struct Unit {
    qubits: Vec<usize>,
    steps: usize,
    class: Class,
}

fn toffoli_unit(qubits: Vec<usize>, conv: Convention) -> Unit {
    let steps = match conv.toffoli {
        ToffoliMode::ToffoliAs5 => 5,
        ToffoliMode::ToffoliNative => 1,
    };
    Unit {
        qubits,
        steps,
        class: Class::Toffoli,
    }
}

fn simple(g: &Gate) -> Unit {
    let qubits = g.qubits();
    let class = if qubits.len() == 1 {
        Class::One
    } else {
        Class::Two
    };
    Unit {
        qubits,
        steps: 1,
        class,
    }
}

fn expand(g: &Gate, conv: Convention, out: &mut Vec<Unit>) {
    match *g {
        Gate::CcPhase { .. } => match conv.ccphase {
            CcPhaseMode::CcphaseDepth1 => out.push(Unit {
                qubits: g.qubits(),
                steps: 1,
                class: Class::CcPhase,
            }),
            CcPhaseMode::CcphaseDecomposed => {
                let net = ccphase_network(g).expect("ccphase gate");
                out.extend(net.iter().map(simple));
            }
        },
        Gate::Toffoli { c1, c2, target } => out.push(toffoli_unit(vec![c1, c2, target], conv)),
        Gate::Cswap { control, a, b } => {
            out.push(simple(&Gate::cnot(b, a)));
            out.push(toffoli_unit(vec![control, a, b], conv));
            out.push(simple(&Gate::cnot(b, a)));
        }
        _ => out.push(simple(g)),
    }
}

/// Depth of the as-soon-as-possible schedule.
pub fn schedule_depth(c: &Circuit, conv: Convention) -> usize {
    let mut free = vec![0usize; c.width()];
    let mut units = Vec::new();
    let mut depth = 0;
    for g in c.gates() {
        units.clear();
        expand(g, conv, &mut units);
        for u in &units {
            let start = u.qubits.iter().map(|&q| free[q]).max().unwrap_or(0);
            let end = start + u.steps;
            for &q in &u.qubits {
                free[q] = end;
            }
            depth = depth.max(end);
        }
    }
    depth
}

/// Gate counts by class after convention expansion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CostBreakdown {
    pub one_qubit: usize,
    pub two_qubit: usize,
    /// Doubly controlled phases counted as single gates.
    pub ccphase: usize,
    pub toffoli: usize,
    /// Two-qubit-gate equivalents: Toffoli weighted 5 under `toffoli_as_5`.
    pub total: usize,
}

impl CostBreakdown {
    fn add_unit(&mut self, u: &Unit, conv: Convention) {
        match u.class {
            Class::One => self.one_qubit += 1,
            Class::Two => self.two_qubit += 1,
            Class::CcPhase => self.ccphase += 1,
            Class::Toffoli => self.toffoli += 1,
        }
        self.total += match (u.class, conv.toffoli) {
            (Class::Toffoli, ToffoliMode::ToffoliAs5) => 5,
            _ => 1,
        };
    }

    fn merge(&mut self, o: &CostBreakdown) {
        self.one_qubit += o.one_qubit;
        self.two_qubit += o.two_qubit;
        self.ccphase += o.ccphase;
        self.toffoli += o.toffoli;
        self.total += o.total;
    }
}

pub fn count_cost(c: &Circuit, conv: Convention) -> CostBreakdown {
    let mut cost = CostBreakdown::default();
    let mut units = Vec::new();
    for g in c.gates() {
        units.clear();
        expand(g, conv, &mut units);
        units.iter().for_each(|u| cost.add_unit(u, conv));
    }
    cost
}

/// Tag used for gates outside every block.
pub const UNTAGGED: &str = "(untagged)";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub width: usize,
    pub depth: usize,
    pub cost: CostBreakdown,
    /// Cost keyed by innermost block tag; sums to `cost`.
    pub blocks: BTreeMap<String, CostBreakdown>,
    pub convention: Convention,
}

pub fn resource_report(c: &Circuit, conv: Convention) -> ResourceReport {
    let mut blocks: BTreeMap<String, CostBreakdown> = BTreeMap::new();
    let mut units = Vec::new();
    for (g, tag) in c.gates().iter().zip(c.innermost_tags()) {
        units.clear();
        expand(g, conv, &mut units);
        let entry = blocks
            .entry(tag.unwrap_or_else(|| UNTAGGED.to_string()))
            .or_default();
        units.iter().for_each(|u| entry.add_unit(u, conv));
    }
    let mut cost = CostBreakdown::default();
    blocks.values().for_each(|b| cost.merge(b));
    ResourceReport {
        width: c.width(),
        depth: schedule_depth(c, conv),
        cost,
        blocks,
        convention: conv,
    }
}

/// One unit row compared against the closed-form targets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitRow {
    pub n: usize,
    pub unit: String,
    pub measured_depth: usize,
    pub target_depth: i64,
    pub measured_cost: usize,
    pub target_cost: i64,
    pub width: usize,
}

impl UnitRow {
    /// `(measured - target) / target` for depth.
    pub fn depth_delta(&self) -> f64 {
        (self.measured_depth as f64 - self.target_depth as f64) / self.target_depth as f64
    }

    pub fn cost_delta(&self) -> f64 {
        (self.measured_cost as f64 - self.target_cost as f64) / self.target_cost as f64
    }
}

/// Closed-form `(depth, cost)` targets per unit for word size `n`.
pub fn unit_targets(n: usize, version: Version) -> Vec<(&'static str, i64, i64)> {
    let n = n as i64;
    let (div_depth, div_cost, total_depth, total_cost) = match version {
        Version::V1 => (
            488 * n - 8,
            700 * n * n + 298 * n,
            2021 * n - 38,
            2896 * n * n + 1299 * n,
        ),
        Version::V2 => (
            244 * n - 8,
            175 * n * n + 149 * n,
            1045 * n - 38,
            796 * n * n + 629 * n,
        ),
    };
    vec![
        ("QFT(2n)", 4 * n - 1, 10 * n * (n + 1)),
        ("PhiMAC(n)", 8 * n, 4 * n * (n + 1)),
        ("GMPhiDIV", div_depth, div_cost),
        ("CNOT", 1, n),
        ("CSWAP(n)", 5 * n, 5 * n),
        ("PhiMUL_MOD", total_depth, total_cost),
    ]
}

/// Modulus and multiplier used for the reports: `N = 2^n - 1`, `a = 2`.
pub fn report_constants(n: usize) -> (u128, u128) {
    ((1u128 << n) - 1, 2)
}

fn cnot_layer(width: usize) -> Circuit {
    let mut c = Circuit::new(2 * width);
    for i in 0..width {
        c.push(Gate::cnot(i, width + i));
    }
    c
}

fn cswap_layer(width: usize) -> Circuit {
    let mut c = Circuit::new(2 * width + 1);
    for i in 0..width {
        c.push(Gate::cswap(0, 1 + i, 1 + width + i));
    }
    c
}

/// Builds every unit of one modular multiplier standalone and measures it.
pub fn unit_rows(n: usize, version: Version, conv: Convention) -> Result<Vec<UnitRow>> {
    let (modulus, a) = report_constants(n);
    let (div_n, div_mode, copy_width) = match version {
        Version::V1 => (2 * n, DivMode::Generic, 2 * n),
        Version::V2 => (n, DivMode::Constrained, n),
    };
    let circuits = [
        build_qft(2 * n, None)?,
        build_phimac(n, a as i128)?,
        build_gmphidiv(div_n, modulus, div_mode)?,
        cnot_layer(copy_width),
        cswap_layer(n),
        build_phimul_mod(n, a, modulus, version)?,
    ];
    Ok(unit_targets(n, version)
        .into_iter()
        .zip(circuits.iter())
        .map(|((unit, target_depth, target_cost), c)| UnitRow {
            n,
            unit: unit.to_string(),
            measured_depth: schedule_depth(c, conv),
            target_depth,
            measured_cost: count_cost(c, conv).total,
            target_cost,
            width: c.width(),
        })
        .collect())
}

/// [`unit_rows`] for every `n`, computed in parallel, in ascending `n`.
pub fn report_tables(ns: &[usize], version: Version, conv: Convention) -> Result<Vec<UnitRow>> {
    let per_n: Vec<Result<Vec<UnitRow>>> = ns
        .par_iter()
        .map(|&n| unit_rows(n, version, conv))
        .collect();
    let mut rows = Vec::new();
    for r in per_n {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Fixed-width table of report rows.
pub fn format_table(rows: &[UnitRow]) -> String {
    let mut s = format!(
        "{:>3}  {:<12} {:>9} {:>9} {:>8}  {:>9} {:>9} {:>8}  {:>6}\n",
        "n", "unit", "depth", "target", "delta", "cost", "target", "delta", "width"
    );
    for r in rows {
        s += &format!(
            "{:>3}  {:<12} {:>9} {:>9} {:>7.1}%  {:>9} {:>9} {:>7.1}%  {:>6}\n",
            r.n,
            r.unit,
            r.measured_depth,
            r.target_depth,
            100.0 * r.depth_delta(),
            r.measured_cost,
            r.target_cost,
            100.0 * r.cost_delta(),
            r.width
        );
    }
    s
}

/// Least-squares `(slope, intercept)` of `ys` against `xs`.
pub fn affine_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::blocks::mac::build_phimac_cascade;

    #[test]
    fn qft_depth() {
        for w in 1..=16 {
            assert_eq!(
                schedule_depth(&build_qft(w, None).unwrap(), Convention::default()),
                2 * w - 1
            );
        }
        assert_eq!(
            schedule_depth(&build_qft(8, None).unwrap(), Convention::default()),
            15
        );
    }

    #[test]
    fn phimac_depth_and_cost() {
        for n in 1..=16 {
            let c = build_phimac(n, 5).unwrap();
            assert_eq!(schedule_depth(&c, Convention::default()), 8 * n, "n={n}");
            assert_eq!(count_cost(&c, Convention::default()).total, 4 * n * (n + 1));
        }
        assert_eq!(
            count_cost(&build_phimac(3, 1).unwrap(), Convention::default()).total,
            48
        );
    }

    #[test]
    fn cascade_depth_serial_in_control() {
        // Bit j never reaches accumulator qubits below j, so odd `a` leaves
        // 2n - j rotations for bit j, all sharing the control.
        for n in 1..=6 {
            let c = build_phimac_cascade(n, (1 << n) - 1).unwrap();
            let d = schedule_depth(&c, Convention::default());
            assert_eq!(d, 2 * n * n - n * (n - 1) / 2);
            assert!(d <= 2 * n * n);
        }
    }

    #[test]
    fn small_cases() {
        let mut c = Circuit::new(2);
        c.push(Gate::phase(0, Angle::r(2)));
        c.push(Gate::phase(1, Angle::r(2)));
        assert_eq!(schedule_depth(&c, Convention::default()), 1);
        let empty = Circuit::new(3);
        assert_eq!(count_cost(&empty, Convention::default()).total, 0);
        assert_eq!(schedule_depth(&empty, Convention::default()), 0);
    }

    #[test]
    fn cswap_layer_cost() {
        for n in 1..=5 {
            let cost = count_cost(&cswap_layer(n), Convention::default());
            assert_eq!(
                (cost.two_qubit, cost.toffoli, cost.total),
                (2 * n, n, 7 * n)
            );
            let native = Convention {
                toffoli: ToffoliMode::ToffoliNative,
                ..Convention::default()
            };
            assert_eq!(count_cost(&cswap_layer(n), native).total, 3 * n);
        }
    }

    #[test]
    fn ccphase_conventions() {
        let mut c = Circuit::new(3);
        c.push(Gate::ccphase(0, 1, 2, Angle::r(2)));
        let dec = Convention {
            ccphase: CcPhaseMode::CcphaseDecomposed,
            ..Convention::default()
        };
        assert_eq!(schedule_depth(&c, Convention::default()), 1);
        assert_eq!(schedule_depth(&c, dec), 5);
        assert_eq!(count_cost(&c, dec).two_qubit, 5);
    }

    #[test]
    fn block_costs_sum_to_total() {
        let mut c = Circuit::new(3);
        c.block("a", |c| {
            c.push(Gate::H(0));
            c.block("b", |c| c.push(Gate::cswap(0, 1, 2)));
        });
        c.push(Gate::X(2));
        let r = resource_report(&c, Convention::default());
        assert_eq!(r.blocks.len(), 3);
        assert_eq!(
            r.blocks.values().map(|b| b.total).sum::<usize>(),
            r.cost.total
        );
        assert_eq!(r.blocks["b"].total, 7);
    }

    #[test]
    fn fit_recovers_line() {
        let xs = [4.0, 5.0, 6.0];
        let ys = [92.0, 115.0, 138.0];
        let (m, b) = affine_fit(&xs, &ys);
        assert!((m - 23.0).abs() < 1e-9 && b.abs() < 1e-9);
    }
}
