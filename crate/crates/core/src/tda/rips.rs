use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{check_cloud, dist, TdaError};

pub const DEFAULT_RIPS_CAP: usize = 400;

/// Bars of one homological degree, sorted by `(birth, death)`. Infinite
/// deaths are `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PersistenceDiagram {
    pub degree: usize,
    pub pairs: Vec<(f64, f64)>,
}

impl PersistenceDiagram {
    fn new(degree: usize, mut pairs: Vec<(f64, f64)>) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        PersistenceDiagram { degree, pairs }
    }

    /// Bars alive on the whole interval `[a, b]`.
    pub fn alive(&self, a: f64, b: f64) -> usize {
        self.pairs.iter().filter(|(s, e)| *s <= a && *e > b).count()
    }

    /// Lifetimes, longest first.
    pub fn persistences(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self.pairs.iter().map(|(b, d)| d - b).collect();
        p.sort_by(|a, b| b.total_cmp(a));
        p
    }
}

struct Filtration {
    n: usize,
    d: Vec<f64>,
    /// Edges with length ≤ r_max, sorted by `(length, i, j)`.
    edges: Vec<(f64, usize, usize)>,
}

impl Filtration {
    fn new(points: &[Vec<f64>], r_max: f64) -> Self {
        let n = points.len();
        let d: Vec<f64> = (0..n * n)
            .into_par_iter()
            .map(|idx| dist(&points[idx / n], &points[idx % n]))
            .collect();
        let mut edges: Vec<(f64, usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| (d[i * n + j], i, j))
            .filter(|e| e.0 <= r_max)
            .collect();
        edges.sort_by(edge_cmp);
        Filtration { n, d, edges }
    }

    fn len(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

fn edge_cmp(a: &(f64, usize, usize), b: &(f64, usize, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
}

fn validate(points: &[Vec<f64>], r_max: f64, max_degree: usize, cap: usize) -> Result<(), TdaError> {
    check_cloud(points)?;
    if points.len() > cap {
        return Err(TdaError::CloudTooLarge {
            size: points.len(),
            cap,
        });
    }
    if !(r_max > 0.0) {
        return Err(TdaError::BadParameter(format!("r_max must be positive, got {r_max}")));
    }
    if max_degree > 1 {
        return Err(TdaError::BadParameter(format!(
            "degrees above 1 are not computed, got {max_degree}"
        )));
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges and reports whether two components met. The root with the
    /// smaller index survives; all components are born at 0, so this is
    /// the elder rule with ties broken by index.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        true
    }
}

/// H0 bars and the spanning-forest edges (by position in `f.edges`).
fn h0(f: &Filtration) -> (PersistenceDiagram, Vec<bool>) {
    let mut uf = UnionFind::new(f.n);
    let mut forest = vec![false; f.edges.len()];
    let mut pairs = Vec::new();
    let mut components = f.n;
    for (e, &(len, i, j)) in f.edges.iter().enumerate() {
        if uf.union(i, j) {
            forest[e] = true;
            components -= 1;
            if len > 0.0 {
                pairs.push((0.0, len));
            }
        }
    }
    pairs.extend(std::iter::repeat_n((0.0, f64::INFINITY), components));
    (PersistenceDiagram::new(0, pairs), forest)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Tri {
    diam: f64,
    v: [u32; 3],
}

impl Eq for Tri {}

impl Ord for Tri {
    fn cmp(&self, other: &Self) -> Ordering {
        self.diam.total_cmp(&other.diam).then(self.v.cmp(&other.v))
    }
}

impl PartialOrd for Tri {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn sym_diff(a: &[Tri], b: &[Tri]) -> Vec<Tri> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Triangles of the filtration containing edge `(i, j)`, in filtration order.
fn coboundary(f: &Filtration, len: f64, i: usize, j: usize, r_max: f64) -> Vec<Tri> {
    let mut col: Vec<Tri> = (0..f.n)
        .filter(|&k| k != i && k != j)
        .filter_map(|k| {
            let diam = len.max(f.len(i, k)).max(f.len(j, k));
            (diam <= r_max).then(|| {
                let mut v = [i as u32, j as u32, k as u32];
                v.sort_unstable();
                Tri { diam, v }
            })
        })
        .collect();
    col.sort_unstable();
    col
}

/// H1 by reducing the coboundary matrix: edge columns in reverse filtration
/// order, pivot = earliest triangle. Spanning-forest edges are skipped, since
/// they are paired in degree 0.
fn h1(f: &Filtration, forest: &[bool], r_max: f64) -> PersistenceDiagram {
    let mut pivots: HashMap<[u32; 3], usize> = HashMap::new();
    let mut reduced: Vec<Vec<Tri>> = Vec::new();
    let mut pairs = Vec::new();
    for (e, &(len, i, j)) in f.edges.iter().enumerate().rev() {
        if forest[e] {
            continue;
        }
        let mut col = coboundary(f, len, i, j, r_max);
        while let Some(p) = col.first() {
            match pivots.get(&p.v) {
                Some(&c) => col = sym_diff(&col, &reduced[c]),
                None => break,
            }
        }
        match col.first() {
            Some(p) => {
                if p.diam > len {
                    pairs.push((len, p.diam));
                }
                pivots.insert(p.v, reduced.len());
                reduced.push(col);
            }
            None => pairs.push((len, f64::INFINITY)),
        }
    }
    PersistenceDiagram::new(1, pairs)
}

/// Vietoris–Rips persistence up to `max_degree` (0 or 1) for simplices with
/// filtration value at most `r_max`. Returns one diagram per degree.
pub fn rips_persistence(points: &[Vec<f64>], r_max: f64, max_degree: usize) -> Result<Vec<PersistenceDiagram>, TdaError> {
    rips_persistence_capped(points, r_max, max_degree, DEFAULT_RIPS_CAP)
}

pub fn rips_persistence_capped(
    points: &[Vec<f64>],
    r_max: f64,
    max_degree: usize,
    cap: usize,
) -> Result<Vec<PersistenceDiagram>, TdaError> {
    validate(points, r_max, max_degree, cap)?;
    let f = Filtration::new(points, r_max);
    let (d0, forest) = h0(&f);
    let mut out = vec![d0];
    if max_degree >= 1 {
        out.push(h1(&f, &forest, r_max));
    }
    Ok(out)
}

/// Same diagrams by the textbook reduction of the full boundary matrix of
/// the 2-skeleton. Quadratic in the number of triangles; meant for small
/// clouds and cross-checks.
pub fn rips_persistence_by_reduction(
    points: &[Vec<f64>],
    r_max: f64,
    max_degree: usize,
) -> Result<Vec<PersistenceDiagram>, TdaError> {
    validate(points, r_max, max_degree, DEFAULT_RIPS_CAP)?;
    let f = Filtration::new(points, r_max);
    let n = f.n;
    // (value, dimension, vertices) in filtration order.
    let mut simplices: Vec<(f64, usize, Vec<usize>)> = (0..n).map(|v| (0.0, 0, vec![v])).collect();
    for &(len, i, j) in &f.edges {
        simplices.push((len, 1, vec![i, j]));
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let diam = f.len(i, j).max(f.len(i, k)).max(f.len(j, k));
                if diam <= r_max {
                    simplices.push((diam, 2, vec![i, j, k]));
                }
            }
        }
    }
    simplices.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let index: HashMap<Vec<usize>, usize> = simplices.iter().enumerate().map(|(x, s)| (s.2.clone(), x)).collect();

    let mut low_of: HashMap<usize, usize> = HashMap::new();
    let mut paired = vec![false; simplices.len()];
    let mut cols: Vec<Vec<usize>> = Vec::with_capacity(simplices.len());
    for (c, (_, dim, verts)) in simplices.iter().enumerate() {
        let mut col: Vec<usize> = if *dim == 0 {
            Vec::new()
        } else {
            (0..verts.len())
                .map(|skip| {
                    let face: Vec<usize> = verts.iter().enumerate().filter(|(x, _)| *x != skip).map(|(_, v)| *v).collect();
                    index[&face]
                })
                .collect()
        };
        col.sort_unstable();
        while let Some(&low) = col.last() {
            match low_of.get(&low) {
                Some(&other) => {
                    let mut merged: Vec<usize> = col.iter().chain(&cols[other]).copied().collect();
                    merged.sort_unstable();
                    let mut out: Vec<usize> = Vec::with_capacity(merged.len());
                    for x in merged {
                        if out.last() == Some(&x) {
                            out.pop();
                        } else {
                            out.push(x);
                        }
                    }
                    col = out;
                }
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            low_of.insert(low, c);
            paired[low] = true;
            paired[c] = true;
        }
        cols.push(col);
    }

    let mut bars: [Vec<(f64, f64)>; 2] = [Vec::new(), Vec::new()];
    for (c, (value, dim, _)) in simplices.iter().enumerate() {
        if *dim > 0 {
            if let Some(&low) = cols[c].last() {
                let birth = simplices[low].0;
                if *value > birth {
                    bars[dim - 1].push((birth, *value));
                }
            }
        }
        if *dim < 2 && !paired[c] {
            bars[*dim].push((*value, f64::INFINITY));
        }
    }
    let [b0, b1] = bars;
    let mut out = vec![PersistenceDiagram::new(0, b0)];
    if max_degree >= 1 {
        out.push(PersistenceDiagram::new(1, b1));
    }
    Ok(out)
}
