use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

use kleinforge::harmonics::rational::rat_to_string;
use kleinforge::harmonics::{compute_basis, BasisKind, FourierBlock, FourierMode, Frame, Part, RealBasisFunction};

use crate::error::{CliError, Result};
use crate::io::Run;

#[derive(Debug, Subcommand)]
pub enum HarmonicsCmd {
    /// Exact kernel basis of symmetric fields over a frequency box.
    Basis(BasisArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Scalar,
    Vector,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, value_enum, default_value = "scalar")]
    kind: Kind,
    /// Largest |λ_i|.
    #[arg(long, default_value_t = 3)]
    lmax: i64,
    /// Largest |ζ_j|.
    #[arg(long, default_value_t = 3)]
    zmax: i64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct BlockOut {
    zeta: Vec<i64>,
    modes: Vec<FourierMode>,
    /// Each vector lists one coefficient per mode (times `k1` components in
    /// the toroidal frame), as exact rationals.
    kernel_basis: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct TermOut {
    lambda: Vec<i64>,
    coeffs: Vec<String>,
}

#[derive(Serialize)]
struct FunctionOut {
    zeta: Vec<i64>,
    part: Part,
    expression: String,
    terms: Vec<TermOut>,
}

#[derive(Serialize)]
struct SectionOut {
    frame: Frame,
    /// Which components the section applies to.
    applies_to: &'static str,
    dimension: usize,
    blocks: Vec<BlockOut>,
    functions: Vec<FunctionOut>,
}

#[derive(Serialize)]
struct BasisOut {
    kind: BasisKind,
    lmax: i64,
    zmax: i64,
    incomplete_blocks: usize,
    sections: Vec<SectionOut>,
}

fn block_out(b: &FourierBlock) -> BlockOut {
    BlockOut {
        zeta: b.zeta.clone(),
        modes: b.modes(),
        kernel_basis: b
            .kernel_basis
            .iter()
            .map(|v| v.iter().map(rat_to_string).collect())
            .collect(),
    }
}

fn function_out(f: &RealBasisFunction) -> FunctionOut {
    FunctionOut {
        zeta: f.zeta.clone(),
        part: f.part,
        expression: f.expression(),
        terms: f
            .terms
            .iter()
            .map(|t| TermOut {
                lambda: t.lambda.clone(),
                coeffs: t.coeffs.iter().map(rat_to_string).collect(),
            })
            .collect(),
    }
}

fn basis(a: BasisArgs, run: &mut Run) -> Result<()> {
    if a.lmax < 0 || a.zmax < 0 {
        return Err(CliError::Invalid("--lmax and --zmax must be non-negative".into()));
    }
    let space = run.read_space(&a.spec)?;
    let kind = match a.kind {
        Kind::Scalar => BasisKind::Scalar,
        Kind::Vector => BasisKind::Vector,
    };
    let hb = compute_basis(&space, kind, a.lmax, a.zmax)?;
    let sections = hb
        .sections
        .iter()
        .map(|s| SectionOut {
            frame: s.frame,
            applies_to: match (kind, s.frame) {
                (BasisKind::Scalar, _) => "scalar",
                (BasisKind::Vector, Frame::Toroidal) => "X",
                (BasisKind::Vector, Frame::Scalar) => "each Y_j",
            },
            dimension: s.functions.len(),
            blocks: s.blocks.iter().filter(|b| !b.kernel_basis.is_empty()).map(block_out).collect(),
            functions: s.functions.iter().map(function_out).collect(),
        })
        .collect();
    let out = BasisOut {
        kind,
        lmax: hb.lmax,
        zmax: hb.zmax,
        incomplete_blocks: hb.incomplete_blocks,
        sections,
    };
    run.write_json(&a.out, &out)
}

pub fn run(cmd: HarmonicsCmd, run: &mut Run) -> Result<()> {
    match cmd {
        HarmonicsCmd::Basis(a) => basis(a, run),
    }
}
