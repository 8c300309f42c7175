use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};

use kleinforge::tda::{
    dim_2nn, dimension_profile, rips_persistence_capped, window_embed, DimMethod, DEFAULT_DISCARD,
    DEFAULT_RIPS_CAP,
};

use crate::error::{CliError, Result};
use crate::io::{fmt_f64, join, Run};

#[derive(Debug, Subcommand)]
pub enum IsiCmd {
    /// Sliding-window point cloud of an interval sequence.
    Embed(EmbedArgs),
    /// 2NN intrinsic dimension of a point cloud.
    Dim2nn(DimArgs),
    /// Rips persistence diagram in degrees 0 and 1.
    Rips(RipsArgs),
    /// 2NN dimension for a range of window lengths.
    Profile(ProfileArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Mle,
    CdfFit,
}

impl From<Method> for DimMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Mle => DimMethod::Mle,
            Method::CdfFit => DimMethod::CdfFit,
        }
    }
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    window: usize,
    /// Drop points within this distance of an earlier point.
    #[arg(long, default_value_t = 0.0)]
    dedup: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DimArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Fraction of the largest ratios left out of the fit.
    #[arg(long, default_value_t = DEFAULT_DISCARD)]
    discard: f64,
    #[arg(long, value_enum, default_value = "mle")]
    method: Method,
    /// Write the estimate here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RipsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Largest edge length in the filtration.
    #[arg(long)]
    rmax: f64,
    #[arg(long, default_value_t = 1)]
    max_degree: usize,
    /// Largest accepted cloud.
    #[arg(long, default_value_t = DEFAULT_RIPS_CAP)]
    cap: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 2)]
    wmin: usize,
    #[arg(long, default_value_t = 40)]
    wmax: usize,
    #[arg(long, default_value_t = 0.0)]
    dedup: f64,
    #[arg(long, default_value_t = DEFAULT_DISCARD)]
    discard: f64,
    #[arg(long, value_enum, default_value = "mle")]
    method: Method,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("--dedup must be a finite non-negative number, got {tol}")))
    }
}

fn embed(a: EmbedArgs, run: &mut Run) -> Result<()> {
    check_tol(a.dedup)?;
    let seq = run.read_column(&a.input)?;
    let cloud = window_embed(&seq, a.window, a.dedup)?;
    let mut out = run.create(&a.out)?;
    for p in &cloud.points {
        out.line(&join(p))?;
    }
    out.finish()?;
    eprintln!("{} windows, {} points after dedup", cloud.windows, cloud.len());
    Ok(())
}

fn dim(a: DimArgs, run: &mut Run) -> Result<()> {
    let pts = run.read_rows(&a.input)?;
    let est = dim_2nn(&pts, a.discard, a.method.into())?;
    match &a.out {
        Some(path) => run.write_json(path, &est),
        None => {
            println!("{}", serde_json::to_string_pretty(&est).map_err(|e| CliError::Invalid(e.to_string()))?);
            Ok(())
        }
    }
}

fn rips(a: RipsArgs, run: &mut Run) -> Result<()> {
    let pts = run.read_rows(&a.input)?;
    let dgms = rips_persistence_capped(&pts, a.rmax, a.max_degree, a.cap)?;
    let mut out = run.create(&a.out)?;
    out.line("degree,birth,death")?;
    for d in &dgms {
        for &(b, e) in &d.pairs {
            out.line(&format!("{},{},{}", d.degree, fmt_f64(b), fmt_f64(e)))?;
        }
    }
    out.finish()
}

fn profile(a: ProfileArgs, run: &mut Run) -> Result<()> {
    check_tol(a.dedup)?;
    if a.wmin == 0 || a.wmin > a.wmax {
        return Err(CliError::Invalid("need 1 <= --wmin <= --wmax".into()));
    }
    let seq = run.read_column(&a.input)?;
    let rows = dimension_profile(&seq, a.wmin..=a.wmax, a.dedup, a.discard, a.method.into())?;
    let mut text = String::from("window,d_hat,n_points\n");
    for r in &rows {
        text.push_str(&format!("{},{},{}\n", r.window, fmt_f64(r.d_hat), r.n_points));
    }
    match &a.out {
        Some(path) => run.write(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cmd: IsiCmd, run: &mut Run) -> Result<()> {
    match cmd {
        IsiCmd::Embed(a) => embed(a, run),
        IsiCmd::Dim2nn(a) => dim(a, run),
        IsiCmd::Rips(a) => rips(a, run),
        IsiCmd::Profile(a) => profile(a, run),
    }
}
