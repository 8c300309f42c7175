use serde::Serialize;

use super::{ScalarField, VectorField};
use crate::rng;
use crate::space::{GroupElement, KleinSpace, Point};

/// Sampling parameters for the symmetry checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryCheck {
    pub n_samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SymmetryCheck {
    fn default() -> Self {
        Self {
            n_samples: 256,
            tol: 1e-10,
            seed: 0,
        }
    }
}

impl SymmetryCheck {
    pub fn new(n_samples: usize, tol: f64) -> Self {
        Self {
            n_samples,
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub max_residual: f64,
    pub worst_point: Option<Point>,
    pub worst_element: Option<GroupElement>,
    pub passed: bool,
}

/// Generators of the group plus one random element with entries in `[-2, 2]`
/// for every sample point.
fn elements(space: &KleinSpace, r: &mut rng::Rng) -> Vec<GroupElement> {
    let mut out: Vec<GroupElement> = match space.reduced_generators() {
        Ok(rels) => rels.into_iter().map(|r| r.element).collect(),
        Err(_) => space.unit_generators(),
    };
    out.push(GroupElement::new(
        (0..space.k1()).map(|_| rng::int_in(r, -2, 2)).collect(),
        (0..space.k2()).map(|_| rng::int_in(r, -2, 2)).collect(),
    ));
    out
}

fn random_point(space: &KleinSpace, r: &mut rng::Rng) -> Point {
    Point::new(
        (0..space.k1()).map(|_| rng::uniform(r, -1.5, 1.5)).collect(),
        (0..space.k2()).map(|_| rng::uniform(r, -1.5, 1.5)).collect(),
    )
}

fn run(
    space: &KleinSpace,
    cfg: &SymmetryCheck,
    mut residual: impl FnMut(&Point, &GroupElement, &Point) -> f64,
) -> SymmetryReport {
    let mut r = rng::seeded(cfg.seed);
    let mut report = SymmetryReport {
        max_residual: 0.0,
        worst_point: None,
        worst_element: None,
        passed: true,
    };
    for _ in 0..cfg.n_samples {
        let p = random_point(space, &mut r);
        for g in elements(space, &mut r) {
            let q = space.act(&g, &p);
            let res = residual(&p, &g, &q);
            // NaN residuals count as failures.
            if res.is_nan() || res > report.max_residual {
                report.max_residual = if res.is_nan() { f64::INFINITY } else { res };
                report.worst_point = Some(p.clone());
                report.worst_element = Some(g);
            }
        }
    }
    report.passed = report.max_residual <= cfg.tol;
    report
}

/// Samples `|F(p) − F(g·p)|` over random points and group elements.
pub fn check_scalar_symmetry<F: ScalarField + ?Sized>(
    field: &F,
    space: &KleinSpace,
    cfg: &SymmetryCheck,
) -> SymmetryReport {
    run(space, cfg, |p, _, q| (field.eval(p) - field.eval(q)).abs())
}

/// Samples `|H(b)X(p) − X(g·p)| + |Y(p) − Y(g·p)|` over random points and
/// group elements.
pub fn check_vector_symmetry<F: VectorField + ?Sized>(
    field: &F,
    space: &KleinSpace,
    cfg: &SymmetryCheck,
) -> SymmetryReport {
    run(space, cfg, |p, g, q| {
        let (xp, yp) = field.eval(p);
        let (xq, yq) = field.eval(q);
        let hx = space.apply_holonomy(&g.b, &xp);
        let dx: f64 = hx.iter().zip(&xq).map(|(a, b)| (a - b).powi(2)).sum();
        let dy: f64 = yp.iter().zip(&yq).map(|(a, b)| (a - b).powi(2)).sum();
        dx.sqrt() + dy.sqrt()
    })
}
