use serde::{Deserialize, Serialize};

use super::{FieldError, ScalarField, VectorField};
use crate::space::{KleinSpace, Point};

/// `cos·cos(θ) + sin·sin(θ)` with `θ = 2π λ·x + π ζ·y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub lambda: Vec<i64>,
    pub zeta: Vec<i64>,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

impl SeriesTerm {
    pub fn phase(&self, p: &Point) -> f64 {
        let lx: f64 = self.lambda.iter().zip(&p.x).map(|(&l, &x)| l as f64 * x).sum();
        let zy: f64 = self.zeta.iter().zip(&p.y).map(|(&z, &y)| z as f64 * y).sum();
        std::f64::consts::TAU * lx + std::f64::consts::PI * zy
    }

    pub fn eval(&self, p: &Point) -> f64 {
        let theta = self.phase(p);
        self.cos * theta.cos() + self.sin * theta.sin()
    }
}

fn check_terms(space: &KleinSpace, terms: &[SeriesTerm]) -> Result<(), FieldError> {
    for t in terms {
        if t.lambda.len() != space.k1() || t.zeta.len() != space.k2() {
            return Err(FieldError::Shape(format!(
                "series term has |lambda| = {}, |zeta| = {}; expected {} and {}",
                t.lambda.len(),
                t.zeta.len(),
                space.k1(),
                space.k2()
            )));
        }
    }
    Ok(())
}

/// A real trigonometric series, 1-periodic in `x` and 2-periodic in `y`.
/// Symmetry is not structural here; use the checks in [`super::check`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSeries {
    pub terms: Vec<SeriesTerm>,
}

impl ScalarSeries {
    pub fn new(space: &KleinSpace, terms: Vec<SeriesTerm>) -> Result<Self, FieldError> {
        check_terms(space, &terms)?;
        Ok(Self { terms })
    }
}

impl ScalarField for ScalarSeries {
    fn eval(&self, p: &Point) -> f64 {
        self.terms.iter().map(|t| t.eval(p)).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorSeries {
    pub x: Vec<Vec<SeriesTerm>>,
    pub y: Vec<Vec<SeriesTerm>>,
}

impl VectorSeries {
    pub fn new(
        space: &KleinSpace,
        x: Vec<Vec<SeriesTerm>>,
        y: Vec<Vec<SeriesTerm>>,
    ) -> Result<Self, FieldError> {
        if x.len() != space.k1() || y.len() != space.k2() {
            return Err(FieldError::Shape(format!(
                "vector series has {} X and {} Y components; expected {} and {}",
                x.len(),
                y.len(),
                space.k1(),
                space.k2()
            )));
        }
        for comp in x.iter().chain(&y) {
            check_terms(space, comp)?;
        }
        Ok(Self { x, y })
    }
}

impl VectorField for VectorSeries {
    fn eval(&self, p: &Point) -> (Vec<f64>, Vec<f64>) {
        let sum = |terms: &Vec<SeriesTerm>| terms.iter().map(|t| t.eval(p)).sum::<f64>();
        (self.x.iter().map(sum).collect(), self.y.iter().map(sum).collect())
    }
}
