use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand};
use serde::Serialize;

use kleinforge::space::{HiddenTori, SpaceMode};
use kleinforge::{GroupElement, KleinSpace, Point};

use crate::error::{CliError, Result};
use crate::io::Run;

#[derive(Debug, Subcommand)]
pub enum SpaceCmd {
    /// Dimensions, mode, rank of B and hidden tori.
    Info(InfoArgs),
    /// Canonical representative of points in [0,1)^(k1+k2).
    Canon(CanonArgs),
    /// Generating relations of the group.
    Generators(InfoArgs),
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

/// `x1,..,xk1,y1,..,yk2`
#[derive(Debug, Clone)]
pub struct Coords(pub Vec<f64>);

impl FromStr for Coords {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|e| format!("{c:?}: {e}")))
            .collect::<std::result::Result<_, _>>()
            .map(Coords)
    }
}

#[derive(Debug, Args)]
pub struct CanonArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Comma-separated coordinates, toroidal first. Repeatable.
    #[arg(long = "point", required = true, allow_hyphen_values = true)]
    points: Vec<Coords>,
}

#[derive(Serialize)]
struct Info {
    k1: usize,
    k2: usize,
    mode: SpaceMode,
    rank_b: Option<usize>,
    hidden_tori: Option<HiddenTori>,
    flip_group_order: usize,
}

#[derive(Serialize)]
struct Canon {
    point: Vec<f64>,
    canonical: Vec<f64>,
    /// `element · canonical = point`
    element: GroupElement,
}

#[derive(Serialize)]
struct GeneratorRow {
    relation: String,
    #[serde(flatten)]
    detail: serde_json::Value,
}

fn mode(space: &KleinSpace) -> SpaceMode {
    if space.binary_matrix().is_some() {
        SpaceMode::Diagonal
    } else {
        SpaceMode::Matrices
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn run(cmd: SpaceCmd, run: &mut Run) -> Result<()> {
    match cmd {
        SpaceCmd::Info(a) => {
            let space = run.read_space(&a.spec)?;
            let info = Info {
                k1: space.k1(),
                k2: space.k2(),
                mode: mode(&space),
                rank_b: space.binary_matrix().map(|b| b.rank()),
                hidden_tori: space.hidden_tori().ok(),
                flip_group_order: space.flip_group().len(),
            };
            if a.json {
                println!("{}", to_json(&info)?);
                return Ok(());
            }
            println!("k1={}", info.k1);
            println!("k2={}", info.k2);
            println!("mode={}", if info.mode == SpaceMode::Diagonal { "diagonal" } else { "matrices" });
            match info.rank_b {
                Some(r) => println!("rank(B)={r}"),
                None => println!("rank(B)=n/a"),
            }
            match &info.hidden_tori {
                None => println!("hidden tori: n/a (matrices mode)"),
                Some(h) if h.duplicate_column_classes.is_empty() && h.gf2_rank_deficiency == 0 => {
                    println!("hidden tori: none")
                }
                Some(h) => {
                    let classes: Vec<String> = h
                        .duplicate_column_classes
                        .iter()
                        .map(|c| {
                            let ys: Vec<String> = c.iter().map(|j| format!("y{}", j + 1)).collect();
                            format!("{{{}}}", ys.join(", "))
                        })
                        .collect();
                    println!(
                        "hidden tori: duplicate columns [{}], GF(2) rank deficiency {}",
                        classes.join(", "),
                        h.gf2_rank_deficiency
                    );
                }
            }
            println!("flip group order={}", info.flip_group_order);
            Ok(())
        }
        SpaceCmd::Canon(a) => {
            let space = run.read_space(&a.spec)?;
            for Coords(c) in a.points {
                if c.len() != space.dim() {
                    return Err(CliError::Invalid(format!(
                        "point has {} coordinates, the space has {}",
                        c.len(),
                        space.dim()
                    )));
                }
                if c.iter().any(|v| !v.is_finite()) {
                    return Err(CliError::Invalid("point coordinates must be finite".into()));
                }
                let (canon, element) = space.canonicalize(&Point::from_flat(&c, space.k1()));
                let out = Canon {
                    point: c,
                    canonical: canon.to_flat(),
                    element,
                };
                println!("{}", serde_json::to_string(&out).map_err(|e| CliError::Invalid(e.to_string()))?);
            }
            Ok(())
        }
        SpaceCmd::Generators(a) => {
            let space = run.read_space(&a.spec)?;
            let rows: Vec<GeneratorRow> = match space.reduced_generators() {
                Ok(rels) => rels
                    .iter()
                    .map(|r| GeneratorRow {
                        relation: r.describe(&space),
                        detail: serde_json::json!({ "kind": r.kind, "element": r.element }),
                    })
                    .collect(),
                // Matrices mode has no GF(2) structure; list the unit generators.
                Err(_) => space
                    .unit_generators()
                    .into_iter()
                    .map(|g| {
                        let relation = match g.b.iter().position(|&v| v != 0) {
                            Some(j) => format!("(x, y) ~ (M{} x, y + e{})", j + 1, j + 1),
                            None => {
                                let i = g.a.iter().position(|&v| v != 0).unwrap_or(0);
                                format!("(x, y) ~ (x + e{}, y)", i + 1)
                            }
                        };
                        GeneratorRow {
                            relation,
                            detail: serde_json::json!({ "kind": { "family": "unit" }, "element": g }),
                        }
                    })
                    .collect(),
            };
            if a.json {
                println!("{}", to_json(&rows)?);
            } else {
                for r in rows {
                    println!("{}", r.relation);
                }
            }
            Ok(())
        }
    }
}
