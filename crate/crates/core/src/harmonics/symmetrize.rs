use crate::fields::{ScalarField, VectorField};
use crate::space::{GroupElement, KleinSpace, Point};

fn deck_elements(space: &KleinSpace) -> Vec<GroupElement> {
    space
        .flip_group()
        .into_iter()
        .map(|beta| GroupElement::new(vec![0; space.k1()], beta))
        .collect()
}

/// `(P F)(p) = 2^{−k2} Σ_β F(β·p)`.
pub struct SymmetrizedScalar<F> {
    inner: F,
    space: KleinSpace,
    deck: Vec<GroupElement>,
}

/// Average of `F` over the deck group `Z_2^{k2}`.
///
/// `F` must already be periodic on the torus (period 1 in `x`, 2 in `y`);
/// the result is then invariant under the whole group and `P` is a
/// projection.
pub fn symmetrize_scalar<F: ScalarField>(field: F, space: &KleinSpace) -> SymmetrizedScalar<F> {
    SymmetrizedScalar {
        inner: field,
        space: space.clone(),
        deck: deck_elements(space),
    }
}

impl<F: ScalarField> ScalarField for SymmetrizedScalar<F> {
    fn eval(&self, p: &Point) -> f64 {
        let sum: f64 = self
            .deck
            .iter()
            .map(|g| self.inner.eval(&self.space.act(g, p)))
            .sum();
        sum / self.deck.len() as f64
    }
}

/// `X ↦ 2^{−k2} Σ_β φ(β) X(β·p)`, `Y ↦ 2^{−k2} Σ_β Y(β·p)`.
pub struct SymmetrizedVector<F> {
    inner: F,
    space: KleinSpace,
    deck: Vec<GroupElement>,
}

/// Frame-corrected average of a torus-periodic vector field.
pub fn symmetrize_vector<F: VectorField>(field: F, space: &KleinSpace) -> SymmetrizedVector<F> {
    SymmetrizedVector {
        inner: field,
        space: space.clone(),
        deck: deck_elements(space),
    }
}

impl<F: VectorField> VectorField for SymmetrizedVector<F> {
    fn eval(&self, p: &Point) -> (Vec<f64>, Vec<f64>) {
        let mut x = vec![0.0; self.space.k1()];
        let mut y = vec![0.0; self.space.k2()];
        for g in &self.deck {
            let (gx, gy) = self.inner.eval(&self.space.act(g, p));
            let hx = self.space.apply_holonomy(&g.b, &gx);
            for (a, b) in x.iter_mut().zip(hx) {
                *a += b;
            }
            for (a, b) in y.iter_mut().zip(gy) {
                *a += b;
            }
        }
        let w = 1.0 / self.deck.len() as f64;
        (x.into_iter().map(|v| v * w).collect(), y.into_iter().map(|v| v * w).collect())
    }
}
