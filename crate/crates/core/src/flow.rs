//! Streamlines of symmetric vector fields.
//!
//! Integration happens in the covering space with classical fixed-step RK4;
//! every sample is also folded into the fundamental domain. Because the
//! field is required to be symmetric, the lifted curve is well defined and
//! its image in the quotient does not depend on the lift of the seed.

use rayon::prelude::*;
use serde::Serialize;

use crate::fields::{check_vector_symmetry, SymmetryCheck, VectorField};
use crate::space::{KleinSpace, Point};

/// Symmetry tolerance required before integrating.
pub const SYMMETRY_TOL: f64 = 1e-8;
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("step must be positive and finite, got {0}")]
    NonPositiveStep(f64),
    #[error("field is not symmetric: residual {residual:e} exceeds {tol:e}")]
    AsymmetricField { residual: f64, tol: f64 },
    #[error("field is not finite at t = {t}")]
    NonFiniteField { t: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    /// Position in the covering space, `[x.., y..]`.
    pub lifted: Vec<f64>,
    /// Canonical representative in `[0, 1)^{k1+k2}`.
    pub folded: Vec<f64>,
    /// Euclidean norm of the field at the sample.
    pub speed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectories hold at least the seed")
    }
}

fn eval<F: VectorField + ?Sized>(field: &F, k1: usize, z: &[f64], t: f64) -> Result<Vec<f64>, FlowError> {
    let v = field.eval_flat(&Point::from_flat(z, k1));
    if v.iter().all(|c| c.is_finite()) {
        Ok(v)
    } else {
        Err(FlowError::NonFiniteField { t })
    }
}

fn sample(space: &KleinSpace, t: f64, z: Vec<f64>, v: &[f64]) -> Sample {
    let (folded, _) = space.canonicalize(&Point::from_flat(&z, space.k1()));
    Sample {
        t,
        folded: folded.to_flat(),
        lifted: z,
        speed: v.iter().map(|c| c * c).sum::<f64>().sqrt(),
    }
}

fn axpy(z: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    z.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn check_step(step: f64) -> Result<(), FlowError> {
    if step > 0.0 && step.is_finite() {
        Ok(())
    } else {
        Err(FlowError::NonPositiveStep(step))
    }
}

/// Reject fields that fail the sampled symmetry check at [`SYMMETRY_TOL`].
pub fn require_symmetric<F: VectorField + ?Sized>(field: &F, space: &KleinSpace) -> Result<(), FlowError> {
    let report = check_vector_symmetry(field, space, &SymmetryCheck::new(64, SYMMETRY_TOL));
    if report.passed {
        Ok(())
    } else {
        Err(FlowError::AsymmetricField {
            residual: report.max_residual,
            tol: SYMMETRY_TOL,
        })
    }
}

/// RK4 without the symmetry pre-check.
pub fn integrate_unchecked<F: VectorField + ?Sized>(
    field: &F,
    space: &KleinSpace,
    seed: &Point,
    step: f64,
    n_steps: usize,
) -> Result<Trajectory, FlowError> {
    check_step(step)?;
    let k1 = space.k1();
    let mut z = seed.to_flat();
    let mut v = eval(field, k1, &z, 0.0)?;
    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push(sample(space, 0.0, z.clone(), &v));
    for n in 0..n_steps {
        let t = n as f64 * step;
        let k1v = v;
        let k2v = eval(field, k1, &axpy(&z, 0.5 * step, &k1v), t)?;
        let k3v = eval(field, k1, &axpy(&z, 0.5 * step, &k2v), t)?;
        let k4v = eval(field, k1, &axpy(&z, step, &k3v), t)?;
        for i in 0..z.len() {
            z[i] += step / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
        let t_next = (n + 1) as f64 * step;
        v = eval(field, k1, &z, t_next)?;
        samples.push(sample(space, t_next, z.clone(), &v));
    }
    Ok(Trajectory { samples })
}

/// Integrate from `seed` for `n_steps` steps of size `step`.
pub fn integrate<F: VectorField + ?Sized>(
    field: &F,
    space: &KleinSpace,
    seed: &Point,
    step: f64,
    n_steps: usize,
) -> Result<Trajectory, FlowError> {
    check_step(step)?;
    require_symmetric(field, space)?;
    integrate_unchecked(field, space, seed, step, n_steps)
}

/// Cell centres of a `density^{k1+k2}` grid on `[0, 1)^{k1+k2}`, with the
/// first coordinate varying slowest.
pub fn grid_seeds(space: &KleinSpace, density: usize) -> Vec<Point> {
    let n = space.dim();
    let total = density.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut coords = vec![0.0; n];
            for c in (0..n).rev() {
                coords[c] = ((idx % density) as f64 + 0.5) / density as f64;
                idx /= density;
            }
            Point::from_flat(&coords, space.k1())
        })
        .collect()
}

/// One trajectory per grid seed, in seed order.
pub fn streamline_grid<F: VectorField + ?Sized>(
    field: &F,
    space: &KleinSpace,
    density: usize,
    step: f64,
    n_steps: usize,
) -> Result<Vec<Trajectory>, FlowError> {
    check_step(step)?;
    require_symmetric(field, space)?;
    grid_seeds(space, density)
        .par_iter()
        .map(|seed| integrate_unchecked(field, space, seed, step, n_steps))
        .collect()
}
