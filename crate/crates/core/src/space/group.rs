use serde::{Deserialize, Serialize};

use super::KleinSpace;

/// A point of the covering space `R^{k1} × R^{k2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Point {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        Self { x, y }
    }

    /// Split a flat coordinate slice `[x.., y..]`.
    pub fn from_flat(coords: &[f64], k1: usize) -> Self {
        Self {
            x: coords[..k1].to_vec(),
            y: coords[k1..].to_vec(),
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.x.iter().chain(&self.y).copied().collect()
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.y).all(|v| v.is_finite())
    }
}

/// An element `(a, b)` of `Z^{k1} ⋊_φ Z^{k2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl GroupElement {
    pub fn new(a: Vec<i64>, b: Vec<i64>) -> Self {
        Self { a, b }
    }

    pub fn identity(k1: usize, k2: usize) -> Self {
        Self {
            a: vec![0; k1],
            b: vec![0; k2],
        }
    }

    pub fn translation(a: Vec<i64>, k2: usize) -> Self {
        Self { a, b: vec![0; k2] }
    }

    pub fn is_identity(&self) -> bool {
        self.a.iter().chain(&self.b).all(|&v| v == 0)
    }
}

/// Distance between two reals on the unit circle `R / Z`.
pub(crate) fn circle_distance(u: f64, v: f64) -> f64 {
    let d = (u - v).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// `floor` and fractional part with the fraction guaranteed to lie in `[0, 1)`.
fn fold(v: f64) -> (i64, f64) {
    let n = v.floor();
    let mut frac = v - n;
    let mut n = n as i64;
    if frac >= 1.0 {
        frac = 0.0;
        n += 1;
    }
    (n, frac)
}

impl KleinSpace {
    fn check_element(&self, g: &GroupElement) {
        assert_eq!(g.a.len(), self.k1(), "group element has wrong toroidal length");
        assert_eq!(g.b.len(), self.k2(), "group element has wrong Klein length");
    }

    fn check_point(&self, p: &Point) {
        assert_eq!(p.x.len(), self.k1(), "point has wrong toroidal length");
        assert_eq!(p.y.len(), self.k2(), "point has wrong Klein length");
    }

    /// `(a', b') ⋄ (a, b) = (φ(b')a + a', b + b')`.
    pub fn compose(&self, g1: &GroupElement, g2: &GroupElement) -> GroupElement {
        self.check_element(g1);
        self.check_element(g2);
        let rotated = self.holonomy(&g1.b).mul_vec(&g2.a);
        GroupElement {
            a: rotated.iter().zip(&g1.a).map(|(r, a)| r + a).collect(),
            b: g1.b.iter().zip(&g2.b).map(|(u, v)| u + v).collect(),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        self.check_element(g);
        let neg_b: Vec<i64> = g.b.iter().map(|v| -v).collect();
        let a = self.holonomy(&neg_b).mul_vec(&g.a);
        GroupElement {
            a: a.into_iter().map(|v| -v).collect(),
            b: neg_b,
        }
    }

    /// `(a, b)·(x, y) = (φ(b)x + a, y + b)`.
    pub fn act(&self, g: &GroupElement, p: &Point) -> Point {
        self.check_element(g);
        self.check_point(p);
        let hx = self.apply_holonomy(&g.b, &p.x);
        Point {
            x: hx.iter().zip(&g.a).map(|(v, &a)| v + a as f64).collect(),
            y: p.y.iter().zip(&g.b).map(|(v, &b)| v + b as f64).collect(),
        }
    }

    /// Canonical representative in `[0,1)^{k1+k2}` and the element `g` with
    /// `g · canonical = p`.
    ///
    /// First undo the Klein translation `⌊y⌋` (which applies `φ(⌊y⌋)` to `x`),
    /// then fold the toroidal coordinates by an integer translation.
    pub fn canonicalize(&self, p: &Point) -> (Point, GroupElement) {
        self.check_point(p);
        let (n, y): (Vec<i64>, Vec<f64>) = p.y.iter().map(|&v| fold(v)).unzip();
        let hx = self.apply_holonomy(&n, &p.x);
        let (a, x): (Vec<i64>, Vec<f64>) = hx.iter().map(|&v| fold(v)).unzip();
        // canonical = (-a, 0) ⋄ (0, -n) · p, so g = ((-a, -n))^{-1} = (φ(n)a, n).
        let g = GroupElement {
            a: self.holonomy(&n).mul_vec(&a),
            b: n,
        };
        (Point { x, y }, g)
    }

    /// Sup-norm distance between the orbits of `p` and `q`, exact for
    /// distances below 1/2.
    pub fn quotient_distance(&self, p: &Point, q: &Point) -> f64 {
        let (cp, _) = self.canonicalize(p);
        let (cq, _) = self.canonicalize(q);
        let k2 = self.k2();
        let mut best = f64::INFINITY;
        // Klein coordinates of canonical points lie in [0,1), so only the
        // shifts b ∈ {-1,0,1}^{k2} can bring them within distance 1/2.
        let mut b = vec![-1i64; k2];
        loop {
            let hx = self.apply_holonomy(&b, &cp.x);
            let dx = hx
                .iter()
                .zip(&cq.x)
                .map(|(&u, &v)| circle_distance(u, v))
                .fold(0.0, f64::max);
            let dy = cp
                .y
                .iter()
                .zip(&cq.y)
                .zip(&b)
                .map(|((&u, &v), &s)| (u + s as f64 - v).abs())
                .fold(0.0, f64::max);
            best = best.min(dx.max(dy));
            // Odometer over {-1,0,1}^{k2}.
            let mut j = 0;
            while j < k2 && b[j] == 1 {
                b[j] = -1;
                j += 1;
            }
            if j == k2 {
                break;
            }
            b[j] += 1;
        }
        best
    }

    pub fn equivalent(&self, p: &Point, q: &Point, tol: f64) -> bool {
        self.quotient_distance(p, q) <= tol
    }
}
