use std::path::PathBuf;

use clap::{Args, Subcommand};

use kleinforge::fields::{FieldFile, LoadedField};
use kleinforge::flow::{streamline_grid, DEFAULT_STEP};

use crate::error::{CliError, Result};
use crate::io::{coord_header, join, Run};

#[derive(Debug, Subcommand)]
pub enum FlowCmd {
    /// RK4 streamlines from the cell centres of a grid.
    Streamlines(StreamArgs),
}

#[derive(Debug, Args)]
pub struct StreamArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    field: PathBuf,
    /// Seeds per axis.
    #[arg(long, default_value_t = 12)]
    grid: usize,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
    #[arg(long, default_value_t = 20_000)]
    steps: usize,
    /// Keep every n-th sample (the last sample is always kept).
    #[arg(long, default_value_t = 1)]
    every: usize,
    #[arg(long)]
    out: PathBuf,
}

fn streamlines(a: StreamArgs, run: &mut Run) -> Result<()> {
    if a.every == 0 || a.grid == 0 {
        return Err(CliError::Invalid("--grid and --every must be at least 1".into()));
    }
    let space = run.read_space(&a.spec)?;
    let file: FieldFile = run.read_json(&a.field)?;
    let LoadedField::Vector(field) = file.load(&space)? else {
        return Err(CliError::Invalid("streamlines need a vector field".into()));
    };
    let trajectories = streamline_grid(field.as_ref(), &space, a.grid, a.step, a.steps)?;
    let mut out = run.create(&a.out)?;
    let mut header = vec!["traj_id".to_string(), "t".to_string()];
    header.extend(coord_header(space.k1(), space.k2()));
    header.push("speed".into());
    out.line(&header.join(","))?;
    for (id, tr) in trajectories.iter().enumerate() {
        let last = tr.samples.len() - 1;
        for (n, s) in tr.samples.iter().enumerate() {
            if n % a.every != 0 && n != last {
                continue;
            }
            let mut row = vec![s.t];
            row.extend(&s.folded);
            row.push(s.speed);
            out.line(&format!("{id},{}", join(&row)))?;
        }
    }
    out.finish()
}

pub fn run(cmd: FlowCmd, run: &mut Run) -> Result<()> {
    match cmd {
        FlowCmd::Streamlines(a) => streamlines(a, run),
    }
}
