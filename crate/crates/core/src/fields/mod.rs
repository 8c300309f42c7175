//! Symmetric scalar and vector fields on generalised Klein bottles.
//!
//! Fields are evaluated on the covering space. A scalar field `F` descends to
//! the quotient iff `F(g·p) = F(p)` for every group element `g = (a, b)`; a
//! vector field `(X, Y)` descends iff `X(g·p) = H(b) X(p)` and
//! `Y(g·p) = Y(p)`.

mod ansatz;
mod check;
mod series;
mod switching;

pub use ansatz::{ScalarAnsatz, VectorAnsatz};
pub use check::{check_scalar_symmetry, check_vector_symmetry, SymmetryCheck, SymmetryReport};
pub use series::{ScalarSeries, SeriesTerm, VectorSeries};
pub use switching::{switching, Switching};

use serde::{Deserialize, Serialize};

use crate::space::{KleinSpace, Point};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("switching-function ansatz needs a diagonal-mode space")]
    NeedsDiagonalMode,
    #[error("field shape mismatch: {0}")]
    Shape(String),
}

/// A real-valued function on the covering space.
pub trait ScalarField: Sync {
    fn eval(&self, p: &Point) -> f64;
}

/// A vector field `(X, Y)` on the covering space, `X ∈ R^{k1}`, `Y ∈ R^{k2}`.
pub trait VectorField: Sync {
    fn eval(&self, p: &Point) -> (Vec<f64>, Vec<f64>);

    /// Flattened `[X.., Y..]`.
    fn eval_flat(&self, p: &Point) -> Vec<f64> {
        let (mut x, y) = self.eval(p);
        x.extend(y);
        x
    }
}

impl<T: ScalarField + ?Sized> ScalarField for &T {
    fn eval(&self, p: &Point) -> f64 {
        (**self).eval(p)
    }
}

impl<T: VectorField + ?Sized> VectorField for &T {
    fn eval(&self, p: &Point) -> (Vec<f64>, Vec<f64>) {
        (**self).eval(p)
    }
}

impl<T: ScalarField + ?Sized + Send> ScalarField for Box<T> {
    fn eval(&self, p: &Point) -> f64 {
        (**self).eval(p)
    }
}

impl<T: VectorField + ?Sized + Send> VectorField for Box<T> {
    fn eval(&self, p: &Point) -> (Vec<f64>, Vec<f64>) {
        (**self).eval(p)
    }
}

/// Adapter turning a closure into a [`ScalarField`].
pub struct FnScalar<F>(pub F);

impl<F: Fn(&Point) -> f64 + Sync> ScalarField for FnScalar<F> {
    fn eval(&self, p: &Point) -> f64 {
        (self.0)(p)
    }
}

/// Adapter turning a closure into a [`VectorField`].
pub struct FnVector<F>(pub F);

impl<F: Fn(&Point) -> (Vec<f64>, Vec<f64>) + Sync> VectorField for FnVector<F> {
    fn eval(&self, p: &Point) -> (Vec<f64>, Vec<f64>) {
        (self.0)(p)
    }
}

/// A 1-periodic trigonometric polynomial
/// `f(t) = Σ cos_k cos(2π n_k t) + sin_k sin(2π n_k t)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TrigPoly {
    pub terms: Vec<TrigTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub freq: i64,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

impl TrigPoly {
    pub fn new(terms: Vec<TrigTerm>) -> Self {
        Self { terms }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![TrigTerm {
            freq: 0,
            cos: c,
            sin: 0.0,
        }])
    }

    pub fn sin(freq: i64) -> Self {
        Self::new(vec![TrigTerm {
            freq,
            cos: 0.0,
            sin: 1.0,
        }])
    }

    pub fn cos(freq: i64) -> Self {
        Self::new(vec![TrigTerm {
            freq,
            cos: 1.0,
            sin: 0.0,
        }])
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                let theta = std::f64::consts::TAU * term.freq as f64 * t;
                term.cos * theta.cos() + term.sin * theta.sin()
            })
            .sum()
    }
}

/// On-disk description of a field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldFile {
    /// One profile per toroidal coordinate.
    ScalarAnsatz { profiles: Vec<TrigPoly> },
    /// `f` is `k1 × k1` (X components), `g` is `k2 × k1` (Y components).
    VectorAnsatz {
        f: Vec<Vec<TrigPoly>>,
        g: Vec<Vec<TrigPoly>>,
    },
    ScalarSeries { terms: Vec<SeriesTerm> },
    /// One term list per component, `k1` for X then `k2` for Y.
    VectorSeries {
        x: Vec<Vec<SeriesTerm>>,
        y: Vec<Vec<SeriesTerm>>,
    },
}

/// A field file bound to a space.
pub enum LoadedField {
    Scalar(Box<dyn ScalarField + Send>),
    Vector(Box<dyn VectorField + Send>),
}

impl FieldFile {
    pub fn load(&self, space: &KleinSpace) -> Result<LoadedField, FieldError> {
        Ok(match self {
            FieldFile::ScalarAnsatz { profiles } => {
                LoadedField::Scalar(Box::new(ScalarAnsatz::new(space, profiles.clone())?))
            }
            FieldFile::VectorAnsatz { f, g } => {
                LoadedField::Vector(Box::new(VectorAnsatz::new(space, f.clone(), g.clone())?))
            }
            FieldFile::ScalarSeries { terms } => {
                LoadedField::Scalar(Box::new(ScalarSeries::new(space, terms.clone())?))
            }
            FieldFile::VectorSeries { x, y } => {
                LoadedField::Vector(Box::new(VectorSeries::new(space, x.clone(), y.clone())?))
            }
        })
    }
}
