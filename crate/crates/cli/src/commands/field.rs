use std::path::PathBuf;

use clap::{Args, Subcommand};
use rayon::prelude::*;

use kleinforge::fields::{
    check_scalar_symmetry, check_vector_symmetry, FieldFile, LoadedField, ScalarField, SymmetryCheck,
    VectorField,
};
use kleinforge::flow::grid_seeds;
use kleinforge::KleinSpace;

use crate::error::{CliError, Result};
use crate::io::{coord_header, join, Run};
use crate::svg;

const MAX_GRID_POINTS: usize = 10_000_000;

#[derive(Debug, Subcommand)]
pub enum FieldCmd {
    /// Evaluate a scalar field on a grid of cell centres.
    SampleScalar(SampleArgs),
    /// Evaluate a vector field on a grid of cell centres.
    SampleVector(SampleArgs),
    /// Sampled symmetry check; exits 1 if the residual exceeds the tolerance.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    field: PathBuf,
    /// Cells per axis.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long)]
    out: PathBuf,
    /// Also write a heatmap (scalar fields on two-dimensional spaces only).
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    field: PathBuf,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(run: &mut Run, spec: &PathBuf, field: &PathBuf) -> Result<(KleinSpace, LoadedField)> {
    let space = run.read_space(spec)?;
    let file: FieldFile = run.read_json(field)?;
    let loaded = file.load(&space)?;
    Ok((space, loaded))
}

fn grid(space: &KleinSpace, n: usize) -> Result<Vec<kleinforge::Point>> {
    let total = (n as f64).powi(space.dim() as i32);
    if n == 0 || total > MAX_GRID_POINTS as f64 {
        return Err(CliError::Invalid(format!(
            "grid {n}^{} is outside 1..={MAX_GRID_POINTS} points",
            space.dim()
        )));
    }
    Ok(grid_seeds(space, n))
}

fn sample_scalar(a: SampleArgs, run: &mut Run) -> Result<()> {
    let (space, field) = load(run, &a.spec, &a.field)?;
    let LoadedField::Scalar(f) = field else {
        return Err(CliError::Invalid("sample-scalar needs a scalar field".into()));
    };
    if a.svg.is_some() && space.dim() != 2 {
        return Err(CliError::Invalid("heatmaps need k1 + k2 = 2".into()));
    }
    let pts = grid(&space, a.grid)?;
    let values: Vec<f64> = pts.par_iter().map(|p| f.eval(p)).collect();
    let mut out = run.create(&a.out)?;
    let mut header = coord_header(space.k1(), space.k2());
    header.push("value".into());
    out.line(&header.join(","))?;
    for (p, v) in pts.iter().zip(&values) {
        let mut row = p.to_flat();
        row.push(*v);
        out.line(&join(&row))?;
    }
    out.finish()?;
    if let Some(path) = &a.svg {
        let labels = if space.k1() == 2 { ("x1", "x2") } else { ("x1", "y1") };
        run.write(path, svg::heatmap(&values, a.grid, labels).as_bytes())?;
    }
    Ok(())
}

fn sample_vector(a: SampleArgs, run: &mut Run) -> Result<()> {
    let (space, field) = load(run, &a.spec, &a.field)?;
    let LoadedField::Vector(f) = field else {
        return Err(CliError::Invalid("sample-vector needs a vector field".into()));
    };
    if a.svg.is_some() {
        return Err(CliError::Invalid("heatmaps are only drawn for scalar fields".into()));
    }
    let pts = grid(&space, a.grid)?;
    let values: Vec<Vec<f64>> = pts.par_iter().map(|p| f.eval_flat(p)).collect();
    let mut out = run.create(&a.out)?;
    let mut header = coord_header(space.k1(), space.k2());
    header.extend((1..=space.k1()).map(|i| format!("X{i}")));
    header.extend((1..=space.k2()).map(|j| format!("Y{j}")));
    out.line(&header.join(","))?;
    for (p, v) in pts.iter().zip(values) {
        let mut row = p.to_flat();
        row.extend(v);
        out.line(&join(&row))?;
    }
    out.finish()
}

fn check(a: CheckArgs, run: &mut Run) -> Result<()> {
    let (space, field) = load(run, &a.spec, &a.field)?;
    run.seed("symmetry_check", a.seed);
    let cfg = SymmetryCheck {
        n_samples: a.samples,
        tol: a.tol,
        seed: a.seed,
    };
    let report = match &field {
        LoadedField::Scalar(f) => check_scalar_symmetry(f.as_ref(), &space, &cfg),
        LoadedField::Vector(f) => check_vector_symmetry(f.as_ref(), &space, &cfg),
    };
    match &a.out {
        Some(path) => run.write_json(path, &report)?,
        None => println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(|e| CliError::Invalid(e.to_string()))?
        ),
    }
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Invalid(format!(
            "symmetry check failed: residual {:e} exceeds {:e}",
            report.max_residual, a.tol
        )))
    }
}

pub fn run(cmd: FieldCmd, run: &mut Run) -> Result<()> {
    match cmd {
        FieldCmd::SampleScalar(a) => sample_scalar(a, run),
        FieldCmd::SampleVector(a) => sample_vector(a, run),
        FieldCmd::Check(a) => check(a, run),
    }
}
