use super::{switching, FieldError, ScalarField, Switching, TrigPoly, VectorField};
use crate::space::{KleinSpace, Point};

fn require_diagonal(space: &KleinSpace) -> Result<(), FieldError> {
    space
        .binary_matrix()
        .map(|_| ())
        .ok_or(FieldError::NeedsDiagonalMode)
}

fn switches(space: &KleinSpace, y: &[f64]) -> Vec<Switching> {
    (0..space.k1()).map(|i| switching(space, i, y)).collect()
}

/// `T1 f(x) + T2 f(1 − x)`: the factor that follows the flips of `x`.
#[inline]
fn even_factor(sw: &Switching, f: &TrigPoly, x: f64) -> f64 {
    sw.t1 * f.eval(x) + sw.t2 * f.eval(1.0 - x)
}

/// `T1 f(x) − T2 f(1 − x)`: changes sign whenever `x` is reversed.
#[inline]
fn odd_factor(sw: &Switching, f: &TrigPoly, x: f64) -> f64 {
    sw.t1 * f.eval(x) - sw.t2 * f.eval(1.0 - x)
}

/// `F(x, y) = Π_i (T_{i,1}(y) f_i(x_i) + T_{i,2}(y) f_i(1 − x_i))`.
#[derive(Debug, Clone)]
pub struct ScalarAnsatz {
    space: KleinSpace,
    profiles: Vec<TrigPoly>,
}

impl ScalarAnsatz {
    pub fn new(space: &KleinSpace, profiles: Vec<TrigPoly>) -> Result<Self, FieldError> {
        require_diagonal(space)?;
        if profiles.len() != space.k1() {
            return Err(FieldError::Shape(format!(
                "{} profiles for k1 = {}",
                profiles.len(),
                space.k1()
            )));
        }
        Ok(Self {
            space: space.clone(),
            profiles,
        })
    }

    pub fn profiles(&self) -> &[TrigPoly] {
        &self.profiles
    }
}

impl ScalarField for ScalarAnsatz {
    fn eval(&self, p: &Point) -> f64 {
        let sw = switches(&self.space, &p.y);
        sw.iter()
            .zip(&self.profiles)
            .zip(&p.x)
            .map(|((s, f), &x)| even_factor(s, f, x))
            .product()
    }
}

/// The separable vector-field ansatz.
///
/// `X_i` uses the sign-changing factor for its own coordinate and the
/// following factor for the others; `Y_i` uses following factors throughout.
#[derive(Debug, Clone)]
pub struct VectorAnsatz {
    space: KleinSpace,
    /// `k1 × k1` profiles for the X components.
    f: Vec<Vec<TrigPoly>>,
    /// `k2 × k1` profiles for the Y components.
    g: Vec<Vec<TrigPoly>>,
}

impl VectorAnsatz {
    pub fn new(
        space: &KleinSpace,
        f: Vec<Vec<TrigPoly>>,
        g: Vec<Vec<TrigPoly>>,
    ) -> Result<Self, FieldError> {
        require_diagonal(space)?;
        let (k1, k2) = (space.k1(), space.k2());
        if f.len() != k1 || f.iter().any(|row| row.len() != k1) {
            return Err(FieldError::Shape(format!("f must be {k1}x{k1}")));
        }
        if g.len() != k2 || g.iter().any(|row| row.len() != k1) {
            return Err(FieldError::Shape(format!("g must be {k2}x{k1}")));
        }
        Ok(Self {
            space: space.clone(),
            f,
            g,
        })
    }
}

impl VectorField for VectorAnsatz {
    fn eval(&self, p: &Point) -> (Vec<f64>, Vec<f64>) {
        let sw = switches(&self.space, &p.y);
        let x_comp = self
            .f
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, f)| {
                        if i == j {
                            odd_factor(&sw[j], f, p.x[j])
                        } else {
                            even_factor(&sw[j], f, p.x[j])
                        }
                    })
                    .product()
            })
            .collect();
        let y_comp = self
            .g
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, g)| even_factor(&sw[j], g, p.x[j]))
                    .product()
            })
            .collect();
        (x_comp, y_comp)
    }
}
