//! Event-driven spiking networks.
//!
//! Nodes are excitable and refractory: a spike arriving at a ready node makes
//! it fire instantly, sending a spike down each outgoing edge that arrives
//! after the edge's transit time. A node that fired at `t` ignores arrivals in
//! `[t, t + δ)`.
//!
//! ```
//! use kleinforge::sds::{simulate, Edge, Horizon, SpikeNet};
//!
//! let net = SpikeNet::new(
//!     2,
//!     vec![Edge::new(0, 1, 1.0), Edge::new(1, 0, 1.0)],
//!     0.5,
//! )
//! .unwrap();
//! let rec = simulate(&net, 0, &Horizon::time(5.0));
//! assert_eq!(rec.firings[0], vec![0.0, 2.0, 4.0]);
//! assert_eq!(rec.firings[1], vec![1.0, 3.0, 5.0]);
//! ```

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::rng;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SdsError {
    #[error("need at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("density must lie in (0, 1], got {0}")]
    BadDensity(f64),
    #[error("no strongly connected graph after {0} tries")]
    GenerationExhausted(usize),
    #[error("edge {index} is invalid: {reason}")]
    BadEdge { index: usize, reason: String },
    #[error("refractory period must be positive and finite, got {0}")]
    BadDelta(f64),
    #[error("transit range [{lo}, {hi}] must satisfy 0 < lo <= hi")]
    BadTransitRange { lo: f64, hi: f64 },
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("node {node} is out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("node {node} fired {fired} times; need at least {needed}")]
    InsufficientSpikes { node: usize, fired: usize, needed: usize },
}

/// A directed graph with sorted, duplicate-free edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Digraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn density(&self) -> f64 {
        self.edges.len() as f64 / (self.n * (self.n - 1)) as f64
    }

    fn adjacency(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let mut out = vec![Vec::new(); self.n];
        let mut inc = vec![Vec::new(); self.n];
        for &(s, d) in &self.edges {
            out[s].push(d);
            inc[d].push(s);
        }
        (out, inc)
    }

    pub fn is_strongly_connected(&self) -> bool {
        let (out, inc) = self.adjacency();
        bfs(&out, 0).iter().all(Option::is_some) && bfs(&inc, 0).iter().all(Option::is_some)
    }

    /// Longest shortest directed path, or `None` if some pair is unreachable.
    pub fn diameter(&self) -> Option<usize> {
        let (out, _) = self.adjacency();
        let mut best = 0;
        for s in 0..self.n {
            for d in bfs(&out, s) {
                best = best.max(d?);
            }
        }
        Some(best)
    }
}

fn bfs(adj: &[Vec<usize>], start: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v].unwrap();
        for &w in &adj[v] {
            if dist[w].is_none() {
                dist[w] = Some(dv + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Sample each ordered pair `i ≠ j` independently with probability
/// `density`, rejecting until the graph is strongly connected.
pub fn generate_graph(n: usize, density: f64, seed: u64, max_tries: usize) -> Result<Digraph, SdsError> {
    if n < 2 {
        return Err(SdsError::TooFewNodes(n));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(SdsError::BadDensity(density));
    }
    let mut r = rng::seeded(seed);
    for _ in 0..max_tries {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng::unit(&mut r) < density {
                    edges.push((i, j));
                }
            }
        }
        let g = Digraph { n, edges };
        if g.is_strongly_connected() {
            return Ok(g);
        }
    }
    Err(SdsError::GenerationExhausted(max_tries))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub transit: f64,
}

impl Edge {
    pub fn new(src: usize, dst: usize, transit: f64) -> Self {
        Self { src, dst, transit }
    }
}

/// Transit times drawn i.i.d. from `U[lo, hi)` in edge order.
pub fn assign_transits(graph: &Digraph, lo: f64, hi: f64, seed: u64) -> Result<Vec<Edge>, SdsError> {
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(SdsError::BadTransitRange { lo, hi });
    }
    let mut r = rng::seeded(seed);
    Ok(graph
        .edges
        .iter()
        .map(|&(s, d)| Edge::new(s, d, rng::uniform(&mut r, lo, hi)))
        .collect())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub graph: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub transit: Option<u64>,
}

/// A validated network. Edge ids are positions in [`SpikeNet::edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeNet {
    n: usize,
    edges: Vec<Edge>,
    delta: f64,
    out: Vec<Vec<usize>>,
    pub seeds: Seeds,
}

impl SpikeNet {
    pub fn new(n: usize, edges: Vec<Edge>, delta: f64) -> Result<Self, SdsError> {
        if n < 2 {
            return Err(SdsError::TooFewNodes(n));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(SdsError::BadDelta(delta));
        }
        let mut out = vec![Vec::new(); n];
        for (index, e) in edges.iter().enumerate() {
            let reason = if e.src >= n || e.dst >= n {
                Some("endpoint out of range".to_string())
            } else if e.src == e.dst {
                Some("self-loop".to_string())
            } else if !(e.transit > 0.0 && e.transit.is_finite()) {
                Some(format!("transit time {} is not positive", e.transit))
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(SdsError::BadEdge { index, reason });
            }
            out[e.src].push(index);
        }
        let graph = Digraph {
            n,
            edges: edges.iter().map(|e| (e.src, e.dst)).collect(),
        };
        if !graph.is_strongly_connected() {
            return Err(SdsError::NotStronglyConnected);
        }
        Ok(Self {
            n,
            edges,
            delta,
            out,
            seeds: Seeds::default(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The same network with every transit time and `δ` multiplied by `s`.
    pub fn rescaled(&self, s: f64) -> Self {
        let mut net = self.clone();
        for e in &mut net.edges {
            e.transit *= s;
        }
        net.delta *= s;
        net
    }

    pub fn to_file(&self) -> NetFile {
        NetFile {
            n: self.n,
            edges: self.edges.iter().map(|e| (e.src, e.dst, e.transit)).collect(),
            delta: self.delta,
            seeds: self.seeds,
        }
    }
}

/// On-disk form: `{n, edges: [[src, dst, transit], ...], delta, seeds}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetFile {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
    pub delta: f64,
    #[serde(default)]
    pub seeds: Seeds,
}

impl TryFrom<NetFile> for SpikeNet {
    type Error = SdsError;
    fn try_from(f: NetFile) -> Result<Self, SdsError> {
        let edges = f.edges.iter().map(|&(s, d, t)| Edge::new(s, d, t)).collect();
        let mut net = SpikeNet::new(f.n, edges, f.delta)?;
        net.seeds = f.seeds;
        Ok(net)
    }
}

/// When to stop. The run also ends when no spikes remain in flight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horizon {
    /// Process arrivals with `t <= max_time`.
    pub max_time: Option<f64>,
    /// Stop once `node` has fired `count` times.
    pub max_spikes: Option<(usize, usize)>,
    /// Hard cap on processed arrivals.
    pub max_events: u64,
}

impl Horizon {
    pub const DEFAULT_MAX_EVENTS: u64 = 200_000_000;

    pub fn time(t: f64) -> Self {
        Self {
            max_time: Some(t),
            max_spikes: None,
            max_events: Self::DEFAULT_MAX_EVENTS,
        }
    }

    pub fn spikes(node: usize, count: usize) -> Self {
        Self {
            max_time: None,
            max_spikes: Some((node, count)),
            max_events: Self::DEFAULT_MAX_EVENTS,
        }
    }
}

/// Sorted firing times per node.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeRecord {
    pub firings: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceEvent {
    Kick { node: usize, t: f64 },
    Fired { node: usize, t: f64, edge: usize },
    Discarded { node: usize, t: f64, edge: usize },
}

#[derive(Debug, Clone, Copy)]
struct Arrival {
    t: f64,
    dst: usize,
    edge: usize,
}

impl PartialEq for Arrival {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Arrival {}

impl PartialOrd for Arrival {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Arrival {
    /// Reversed so that `BinaryHeap` pops the earliest `(t, dst, edge)`.
    fn cmp(&self, o: &Self) -> Ordering {
        o.t.total_cmp(&self.t)
            .then(o.dst.cmp(&self.dst))
            .then(o.edge.cmp(&self.edge))
    }
}

fn run(net: &SpikeNet, kick: usize, horizon: &Horizon, mut trace: impl FnMut(TraceEvent)) -> SpikeRecord {
    assert!(kick < net.n, "kick node out of range");
    if let Some((node, _)) = horizon.max_spikes {
        assert!(node < net.n, "observed node out of range");
    }
    let mut firings: Vec<Vec<f64>> = vec![Vec::new(); net.n];
    let mut queue = BinaryHeap::new();
    let done = |firings: &Vec<Vec<f64>>| match horizon.max_spikes {
        Some((node, count)) => firings[node].len() >= count,
        None => false,
    };
    let fire = |node: usize, t: f64, firings: &mut Vec<Vec<f64>>, queue: &mut BinaryHeap<Arrival>| {
        firings[node].push(t);
        for &e in &net.out[node] {
            let edge = &net.edges[e];
            queue.push(Arrival {
                t: t + edge.transit,
                dst: edge.dst,
                edge: e,
            });
        }
    };
    if horizon.max_time.map_or(true, |m| m >= 0.0) {
        trace(TraceEvent::Kick { node: kick, t: 0.0 });
        fire(kick, 0.0, &mut firings, &mut queue);
    }
    let mut processed = 0u64;
    while !done(&firings) && processed < horizon.max_events {
        let Some(a) = queue.pop() else { break };
        if horizon.max_time.is_some_and(|m| a.t > m) {
            break;
        }
        processed += 1;
        let ready = firings[a.dst].last().map_or(true, |&last| a.t - last >= net.delta);
        if ready {
            trace(TraceEvent::Fired { node: a.dst, t: a.t, edge: a.edge });
            fire(a.dst, a.t, &mut firings, &mut queue);
        } else {
            trace(TraceEvent::Discarded { node: a.dst, t: a.t, edge: a.edge });
        }
    }
    SpikeRecord { firings }
}

/// Kick `kick` at `t = 0` and run until the horizon.
pub fn simulate(net: &SpikeNet, kick: usize, horizon: &Horizon) -> SpikeRecord {
    run(net, kick, horizon, |_| {})
}

/// [`simulate`] plus every kick, firing and discarded arrival in order.
pub fn simulate_traced(net: &SpikeNet, kick: usize, horizon: &Horizon) -> (SpikeRecord, Vec<TraceEvent>) {
    let mut events = Vec::new();
    let rec = run(net, kick, horizon, |e| events.push(e));
    (rec, events)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsiSequence {
    pub node: usize,
    pub intervals: Vec<f64>,
    pub burn_in_discarded: usize,
}

/// Successive differences of `node`'s firing times, dropping the first
/// `burn_in` intervals. At least one interval must remain.
pub fn extract_isi(record: &SpikeRecord, node: usize, burn_in: usize) -> Result<IsiSequence, SdsError> {
    let n = record.firings.len();
    let times = record
        .firings
        .get(node)
        .ok_or(SdsError::NodeOutOfRange { node, n })?;
    isi_from_times(times, node, burn_in)
}

pub fn isi_from_times(times: &[f64], node: usize, burn_in: usize) -> Result<IsiSequence, SdsError> {
    if times.len() < burn_in + 2 {
        return Err(SdsError::InsufficientSpikes {
            node,
            fired: times.len(),
            needed: burn_in + 2,
        });
    }
    Ok(IsiSequence {
        node,
        intervals: times.windows(2).skip(burn_in).map(|w| w[1] - w[0]).collect(),
        burn_in_discarded: burn_in,
    })
}

/// Smallest `p ≤ len/2` with `|isi[k] − isi[k − p]| ≤ tol` for every `k` in
/// the trailing half of the sequence.
pub fn detect_period(isi: &[f64], tol: f64) -> Option<usize> {
    let len = isi.len();
    if len < 4 {
        return None;
    }
    let start = len - len / 2;
    (1..=len / 2).find(|&p| (start..len).all(|k| (isi[k] - isi[k - p]).abs() <= tol))
}
