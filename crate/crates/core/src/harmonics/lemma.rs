//! Symmetry operators for a finite group acting affinely on a torus.
//!
//! `G` acts on `θ ∈ R^n / Z^n` by `g·θ = A(g)θ + b(g)` and on values by a
//! representation `χ`. A function `f` satisfies `f(g·θ) = χ(g) f(θ)` iff its
//! Fourier coefficients lie in the kernel of
//!
//! `(L* c)(k) = c(k) − |G|⁻¹ Σ_g χ(g⁻¹) c(A(g⁻¹)ᵀ k) e^{2πi kᵀ A(g⁻¹) b(g)}`.
//!
//! Only real phases (`±1`) are supported, so the operator stays rational.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::{rat, RatMatrix, Rational};
use super::HarmonicsError;
use crate::space::{IntMatrix, KleinSpace};

/// One group element, stored as the data the dual operator needs.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineElement {
    /// `A(g⁻¹)`, `n × n`.
    pub a_inv: IntMatrix,
    /// `b(g)`, length `n`.
    pub b: Vec<Rational>,
    /// `χ(g⁻¹)`, `d × d`.
    pub chi_inv: IntMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusAction {
    n: usize,
    chi_dim: usize,
    elements: Vec<AffineElement>,
}

impl TorusAction {
    pub fn new(n: usize, chi_dim: usize, elements: Vec<AffineElement>) -> Result<Self, HarmonicsError> {
        if elements.is_empty() {
            return Err(HarmonicsError::Shape("empty group".into()));
        }
        for e in &elements {
            if e.a_inv.rows() != n || e.a_inv.cols() != n || e.b.len() != n {
                return Err(HarmonicsError::Shape(format!("affine part must act on R^{n}")));
            }
            if e.chi_inv.rows() != chi_dim || e.chi_inv.cols() != chi_dim {
                return Err(HarmonicsError::Shape(format!("χ must be {chi_dim}x{chi_dim}")));
            }
        }
        Ok(Self { n, chi_dim, elements })
    }

    /// The trivial group on an `n`-torus.
    pub fn trivial(n: usize, chi_dim: usize) -> Self {
        Self {
            n,
            chi_dim,
            elements: vec![AffineElement {
                a_inv: IntMatrix::identity(n),
                b: vec![Rational::zero(); n],
                chi_inv: IntMatrix::identity(chi_dim),
            }],
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn torus_dim(&self) -> usize {
        self.n
    }

    pub fn chi_dim(&self) -> usize {
        self.chi_dim
    }

    pub fn elements(&self) -> &[AffineElement] {
        &self.elements
    }

    /// `A(g⁻¹)ᵀ k`.
    pub fn dual(&self, g: usize, k: &[i64]) -> Vec<i64> {
        self.elements[g].a_inv.transpose().mul_vec(k)
    }

    /// Sorted orbit of `k` under the dual action.
    pub fn orbit(&self, k: &[i64]) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = (0..self.order()).map(|g| self.dual(g, k)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// `e^{2πi kᵀ A(g⁻¹) b(g)}` as `±1`.
    pub fn phase_sign(&self, g: usize, k: &[i64]) -> Result<i64, HarmonicsError> {
        let e = &self.elements[g];
        let ab: Vec<Rational> = (0..self.n)
            .map(|i| (0..self.n).map(|j| rat(e.a_inv[(i, j)]) * &e.b[j]).sum())
            .collect();
        let p: Rational = k.iter().zip(&ab).map(|(&ki, v)| rat(ki) * v).sum();
        let twice = p * rat(2);
        if !twice.is_integer() {
            return Err(HarmonicsError::NonRealPhase { k: k.to_vec() });
        }
        Ok(if twice.to_integer().is_even() { 1 } else { -1 })
    }

    /// `L*` on the span of `modes`, which must be closed under the dual
    /// action. Rows and columns are indexed by `(mode, component)` with the
    /// component varying fastest.
    pub fn dual_operator(&self, modes: &[Vec<i64>]) -> Result<RatMatrix, HarmonicsError> {
        let d = self.chi_dim;
        let index: HashMap<&[i64], usize> =
            modes.iter().enumerate().map(|(i, k)| (k.as_slice(), i)).collect();
        let weight = Rational::one() / rat(self.order() as i64);
        let mut op = RatMatrix::identity(modes.len() * d);
        for (r, k) in modes.iter().enumerate() {
            if k.len() != self.n {
                return Err(HarmonicsError::Shape(format!("mode {k:?} is not in Z^{}", self.n)));
            }
            for g in 0..self.order() {
                let kk = self.dual(g, k);
                let c = *index
                    .get(kk.as_slice())
                    .ok_or_else(|| HarmonicsError::NotClosed { k: kk.clone() })?;
                let s = self.phase_sign(g, k)?;
                let chi = &self.elements[g].chi_inv;
                for i in 0..d {
                    for j in 0..d {
                        let entry = s * chi[(i, j)];
                        if entry != 0 {
                            op[(r * d + i, c * d + j)] -= &weight * rat(entry);
                        }
                    }
                }
            }
        }
        Ok(op)
    }
}

/// Which representation the values carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// `χ ≡ 1`: scalar fields and the Klein components of vector fields.
    Scalar,
    /// `χ(β) = φ(β)`: the toroidal components of vector fields.
    Toroidal,
}

/// The deck group `Z_2^{k2}` of the torus covering, in torus coordinates
/// `θ = (x, y/2)`: `A(β) = φ(β) ⊕ I`, `b(β) = (0, β/2)`.
pub fn klein_action(space: &KleinSpace, frame: Frame) -> TorusAction {
    let (k1, k2) = (space.k1(), space.k2());
    let n = k1 + k2;
    let elements = space
        .flip_group()
        .into_iter()
        .map(|beta| {
            // Every β is its own inverse.
            let phi = space.holonomy(&beta);
            let mut a = IntMatrix::identity(n);
            for i in 0..k1 {
                for j in 0..k1 {
                    a[(i, j)] = phi[(i, j)];
                }
            }
            let mut b = vec![Rational::zero(); n];
            for (j, &bj) in beta.iter().enumerate() {
                b[k1 + j] = super::rational::ratio(bj, 2);
            }
            let chi_inv = match frame {
                Frame::Scalar => IntMatrix::identity(1),
                Frame::Toroidal => phi,
            };
            AffineElement { a_inv: a, b, chi_inv }
        })
        .collect();
    TorusAction {
        n,
        chi_dim: match frame {
            Frame::Scalar => 1,
            Frame::Toroidal => k1,
        },
        elements,
    }
}
