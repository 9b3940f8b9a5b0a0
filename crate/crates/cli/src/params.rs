//! Block selection and parameter validation shared by `build` and `verify`.

use clap::{Args, ValueEnum};
use qsa_core::blocks::div::{build_gmphidiv, build_gmphidiv_inverse, DivMode};
use qsa_core::blocks::mac::{build_phimac, build_phimac_cascade, build_phimac_inverse};
use qsa_core::blocks::modmul::{build_modexp, build_phimac_mod, build_phimul_mod, Version};
use qsa_core::blocks::qft::{
    build_ccphi_add_const, build_cphi_add_const, build_iqft, build_phi_add_const,
    build_phi_add_generic, build_qft, Source,
};
use qsa_core::verify::{self, Bench, MacForm, ModForm};
use qsa_core::{Circuit, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Block {
    Qft,
    Iqft,
    Phiadd,
    Cphiadd,
    Ccphiadd,
    Phiaddgeneric,
    PhimacCascade,
    Phimac,
    PhimacInverse,
    Gmphidiv,
    GmphidivInverse,
    Phimacmod,
    Phimulmod,
    Modexp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Generic,
    Constrained,
}

#[derive(Args, Debug, Clone)]
pub struct Params {
    /// Word size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Register width for QFT and adder blocks.
    #[arg(long)]
    pub width: Option<usize>,
    /// Multiplier constant.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<i128>,
    /// Modulus.
    #[arg(long = "N")]
    pub modulus: Option<u128>,
    /// Divisor.
    #[arg(long)]
    pub d: Option<u128>,
    /// Adder constant; negative values are two's complement.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i128>,
    /// Largest rotation order kept in the QFT.
    #[arg(long)]
    pub cutoff: Option<u32>,
    #[arg(long, value_enum, default_value_t = Mode::Constrained)]
    pub mode: Mode,
    /// Modular multiplier version (1 or 2).
    #[arg(long, default_value_t = 2)]
    pub version: u32,
    /// Generic adder operand, least significant first: qubit indices or `_` for a literal zero.
    #[arg(long, value_delimiter = ',')]
    pub source: Option<Vec<String>>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, block: Block) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("{block:?} needs --{flag}").to_lowercase()))
}

impl Params {
    fn mode(&self) -> DivMode {
        match self.mode {
            Mode::Generic => DivMode::Generic,
            Mode::Constrained => DivMode::Constrained,
        }
    }

    fn version(&self) -> Result<Version> {
        Version::from_number(self.version)
    }

    fn unsigned_a(&self, block: Block) -> Result<u128> {
        let a = need(self.a, "a", block)?;
        u128::try_from(a)
            .map_err(|_| Error::InvalidParameter(format!("--a must be non-negative, got {a}")))
    }

    fn sources(&self, width: usize) -> Result<Vec<Source>> {
        let Some(list) = &self.source else {
            return Ok((width..2 * width).map(Source::Qubit).collect());
        };
        list.iter()
            .map(|s| match s.trim() {
                "_" => Ok(Source::Zero),
                t => t.parse().map(Source::Qubit).map_err(|_| {
                    Error::InvalidParameter(format!(
                        "--source entry `{t}` is not a qubit index or `_`"
                    ))
                }),
            })
            .collect()
    }

    pub fn circuit(&self, block: Block) -> Result<Circuit> {
        use Block::*;
        let width = || need(self.width, "width", block);
        let n = || need(self.n, "n", block);
        let k = || need(self.k, "k", block);
        match block {
            Qft => build_qft(width()?, self.cutoff),
            Iqft => build_iqft(width()?, self.cutoff),
            Phiadd => Ok(build_phi_add_const(width()?, k()?)),
            Cphiadd => build_cphi_add_const(width()?, k()?, width()?),
            Ccphiadd => build_ccphi_add_const(width()?, k()?, width()?, width()? + 1),
            Phiaddgeneric => build_phi_add_generic(&self.sources(width()?)?, width()?),
            PhimacCascade => build_phimac_cascade(n()?, need(self.a, "a", block)?),
            Phimac => build_phimac(n()?, need(self.a, "a", block)?),
            PhimacInverse => build_phimac_inverse(n()?, need(self.a, "a", block)?),
            Gmphidiv => build_gmphidiv(n()?, need(self.d, "d", block)?, self.mode()),
            GmphidivInverse => build_gmphidiv_inverse(n()?, need(self.d, "d", block)?, self.mode()),
            Phimacmod => build_phimac_mod(
                n()?,
                self.unsigned_a(block)?,
                need(self.modulus, "N", block)?,
                self.version()?,
            ),
            Phimulmod => build_phimul_mod(
                n()?,
                self.unsigned_a(block)?,
                need(self.modulus, "N", block)?,
                self.version()?,
            ),
            Modexp => build_modexp(
                n()?,
                self.unsigned_a(block)?,
                need(self.modulus, "N", block)?,
                self.version()?,
            ),
        }
    }

    pub fn bench(&self, block: Block) -> Result<Bench> {
        use Block::*;
        let width = || need(self.width, "width", block);
        let n = || need(self.n, "n", block);
        let k = || need(self.k, "k", block);
        let a = || need(self.a, "a", block);
        match block {
            Qft | Iqft => verify::qft_bench(width()?, self.cutoff),
            Phiadd => Ok(verify::phi_add_bench(width()?, k()?)),
            Cphiadd => verify::cphi_add_bench(width()?, k()?),
            Ccphiadd => verify::ccphi_add_bench(width()?, k()?),
            Phiaddgeneric => verify::phi_add_generic_bench(width()?),
            PhimacCascade => verify::phimac_bench(n()?, a()?, MacForm::Cascade),
            Phimac => verify::phimac_bench(n()?, a()?, MacForm::Decomposed),
            PhimacInverse => verify::phimac_bench(n()?, a()?, MacForm::Inverse),
            Gmphidiv => verify::gmphidiv_bench(n()?, need(self.d, "d", block)?, self.mode()),
            GmphidivInverse => {
                verify::gmphidiv_inverse_bench(n()?, need(self.d, "d", block)?, self.mode())
            }
            Phimacmod | Phimulmod => {
                let form = if block == Phimacmod {
                    ModForm::MacMod
                } else {
                    ModForm::MulMod
                };
                let m = need(self.modulus, "N", block)?;
                verify::modmul_bench(n()?, self.unsigned_a(block)?, m, self.version()?, form)
            }
            Modexp => verify::modexp_bench(
                n()?,
                self.unsigned_a(block)?,
                need(self.modulus, "N", block)?,
                self.version()?,
            ),
        }
    }
}
