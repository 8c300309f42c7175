use std::path::PathBuf;

use clap::{Args, Subcommand};

use kleinforge::sds::{
    assign_transits, detect_period, generate_graph, isi_from_times, simulate, Horizon, NetFile, SpikeNet,
};

use crate::error::{CliError, Result};
use crate::io::{fmt_f64, Run};

#[derive(Debug, Subcommand)]
pub enum SdsCmd {
    /// Random strongly connected network with uniform transit times.
    Generate(GenerateArgs),
    /// Kick one node and record every firing.
    Run(RunArgs),
    /// Inter-spike intervals of one node from a spike file.
    Isi(IsiArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    nodes: usize,
    /// Probability of each ordered pair being an edge.
    #[arg(long)]
    density: f64,
    /// Seed for the graph.
    #[arg(long)]
    seed: u64,
    /// Seed for transit times [default: seed + 1].
    #[arg(long)]
    transit_seed: Option<u64>,
    /// Refractory period.
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0.5)]
    lo: f64,
    #[arg(long, default_value_t = 1.5)]
    hi: f64,
    /// Rejection-sampling attempts before giving up.
    #[arg(long, default_value_t = 10_000)]
    max_tries: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    kick: usize,
    /// Node whose spike count ends the run.
    #[arg(long, default_value_t = 0)]
    observe: usize,
    /// Stop after the observed node fires this many times.
    #[arg(long)]
    spikes: Option<usize>,
    /// Stop after this simulated time.
    #[arg(long)]
    max_time: Option<f64>,
    #[arg(long, default_value_t = Horizon::DEFAULT_MAX_EVENTS)]
    max_events: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IsiArgs {
    #[arg(long)]
    spikes: PathBuf,
    #[arg(long)]
    node: usize,
    /// Leading intervals to drop.
    #[arg(long, default_value_t = 0)]
    burn_in: usize,
    /// Tolerance for reporting an exact period.
    #[arg(long, default_value_t = 1e-9)]
    period_tol: f64,
    #[arg(long)]
    out: PathBuf,
}

fn generate(a: GenerateArgs, run: &mut Run) -> Result<()> {
    let transit_seed = a.transit_seed.unwrap_or(a.seed.wrapping_add(1));
    run.seed("graph", a.seed);
    run.seed("transit", transit_seed);
    let g = generate_graph(a.nodes, a.density, a.seed, a.max_tries)?;
    let edges = assign_transits(&g, a.lo, a.hi, transit_seed)?;
    let mut net = SpikeNet::new(a.nodes, edges, a.delta)?;
    net.seeds.graph = Some(a.seed);
    net.seeds.transit = Some(transit_seed);
    let diameter = g.diameter().map_or("n/a".to_string(), |d| d.to_string());
    eprintln!(
        "{} nodes, {} edges, density {:.5}, diameter {diameter}",
        g.n,
        g.edges.len(),
        g.density()
    );
    run.write_json(&a.out, &net.to_file())
}

fn simulate_cmd(a: RunArgs, run: &mut Run) -> Result<()> {
    let file: NetFile = run.read_json(&a.graph)?;
    let net = SpikeNet::try_from(file)?;
    for (name, v) in [("kick", a.kick), ("observe", a.observe)] {
        if v >= net.n() {
            return Err(CliError::Invalid(format!("--{name} {v} is not a node of a {}-node network", net.n())));
        }
    }
    if a.spikes.is_none() && a.max_time.is_none() {
        return Err(CliError::Invalid("give --spikes or --max-time".into()));
    }
    let horizon = Horizon {
        max_time: a.max_time,
        max_spikes: a.spikes.map(|c| (a.observe, c)),
        max_events: a.max_events,
    };
    let rec = simulate(&net, a.kick, &horizon);
    let mut rows: Vec<(f64, usize)> = rec
        .firings
        .iter()
        .enumerate()
        .flat_map(|(node, ts)| ts.iter().map(move |&t| (t, node)))
        .collect();
    rows.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut out = run.create(&a.out)?;
    out.line("node,time")?;
    for (t, node) in &rows {
        out.line(&format!("{node},{}", fmt_f64(*t)))?;
    }
    out.finish()?;
    let observed = rec.firings[a.observe].len();
    eprintln!("{} firings; node {} fired {observed} times", rows.len(), a.observe);
    if let Some(c) = a.spikes {
        if observed < c {
            eprintln!("warning: activity stopped before node {} reached {c} spikes", a.observe);
        }
    }
    Ok(())
}

fn isi(a: IsiArgs, run: &mut Run) -> Result<()> {
    let rows = run.read_rows(&a.spikes)?;
    let mut times = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let [node, t] = r.as_slice() else {
            return Err(CliError::Invalid(format!("spike row {} is not node,time", i + 1)));
        };
        if *node == a.node as f64 {
            times.push(*t);
        }
    }
    times.sort_by(f64::total_cmp);
    let seq = isi_from_times(&times, a.node, a.burn_in)?;
    let mut out = run.create(&a.out)?;
    for v in &seq.intervals {
        out.line(&fmt_f64(*v))?;
    }
    out.finish()?;
    match detect_period(&seq.intervals, a.period_tol) {
        Some(p) => eprintln!("{} intervals; period {p}", seq.intervals.len()),
        None => eprintln!("{} intervals; no period found", seq.intervals.len()),
    }
    Ok(())
}

pub fn run(cmd: SdsCmd, run: &mut Run) -> Result<()> {
    match cmd {
        SdsCmd::Generate(a) => generate(a, run),
        SdsCmd::Run(a) => simulate_cmd(a, run),
        SdsCmd::Isi(a) => isi(a, run),
    }
}
