//! Fourier bases of symmetric fields.
//!
//! Fields on a Klein space are fields on the torus `R^n / (Z^{k1} × 2Z^{k2})`
//! that are invariant under the residual deck group `Z_2^{k2}`. The
//! invariance condition is linear in the Fourier coefficients and splits into
//! finite blocks, one per orbit of frequencies `λ` at fixed `ζ`. Each block is
//! solved exactly over the rationals.
//!
//! ```
//! use kleinforge::harmonics::{orbit_blocks, scalar_kernel_basis};
//! use kleinforge::KleinSpec;
//!
//! let k = KleinSpec::standard_klein().validate().unwrap();
//! let blocks = orbit_blocks(&k, 2, &[vec![1]]);
//! // {0}, {-1, 1}, {-2, 2}
//! assert_eq!(blocks.len(), 3);
//! let b = scalar_kernel_basis(blocks[1].clone(), &k).unwrap();
//! assert_eq!(b.kernel_basis.len(), 1);
//! ```

mod lemma;
pub mod rational;
mod realize;
mod symmetrize;

pub use lemma::{klein_action, AffineElement, Frame, TorusAction};
pub use rational::{RatMatrix, Rational};
pub use realize::{realize, Part, RealBasisFunction, RealTerm};
pub use symmetrize::{symmetrize_scalar, symmetrize_vector, SymmetrizedScalar, SymmetrizedVector};

use rayon::prelude::*;
use serde::Serialize;

use crate::space::KleinSpace;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarmonicsError {
    #[error("orbit of λ = {lambda:?} at ζ = {zeta:?} leaves the frequency box")]
    IncompleteOrbit { zeta: Vec<i64>, lambda: Vec<i64> },
    #[error("conjugate of the block ζ = {zeta:?}, λ = {lambda:?} is not in the box")]
    ConjugateNotInBox { zeta: Vec<i64>, lambda: Vec<i64> },
    #[error("phase at k = {k:?} is not ±1")]
    NonRealPhase { k: Vec<i64> },
    #[error("mode set is not closed under the action: {k:?} is missing")]
    NotClosed { k: Vec<i64> },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// `e^{2πi λ·x} e^{πi ζ·y}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FourierMode {
    pub lambda: Vec<i64>,
    pub zeta: Vec<i64>,
}

impl FourierMode {
    /// Concatenated `(λ, ζ)`, the frequency in torus coordinates `(x, y/2)`.
    pub fn torus_frequency(&self) -> Vec<i64> {
        self.lambda.iter().chain(&self.zeta).copied().collect()
    }
}

/// One orbit of frequencies at fixed `ζ`, optionally solved.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierBlock {
    pub zeta: Vec<i64>,
    /// Sorted lexicographically.
    pub orbit: Vec<Vec<i64>>,
    /// False when part of the orbit falls outside the box.
    pub complete: bool,
    pub frame: Frame,
    /// `L*` on the block, once solved.
    pub operator_matrix: Option<RatMatrix>,
    /// Orthogonal, each scaled to coprime integers. Entries are indexed by
    /// `(orbit position, component)`, component fastest.
    pub kernel_basis: Vec<Vec<Rational>>,
}

impl FourierBlock {
    /// Values per frequency: 1 for scalars, `k1` for toroidal components.
    pub fn components(&self, space: &KleinSpace) -> usize {
        match self.frame {
            Frame::Scalar => 1,
            Frame::Toroidal => space.k1(),
        }
    }

    pub fn modes(&self) -> Vec<FourierMode> {
        self.orbit
            .iter()
            .map(|l| FourierMode {
                lambda: l.clone(),
                zeta: self.zeta.clone(),
            })
            .collect()
    }

    fn sort_key(&self) -> (&[i64], &[i64]) {
        (&self.zeta, &self.orbit[0])
    }
}

/// Every `ζ ∈ [−zmax, zmax]^{k2}`, lexicographic.
pub fn zeta_box(k2: usize, zmax: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..k2 {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (-zmax..=zmax).map(move |z| {
                    let mut v = prefix.clone();
                    v.push(z);
                    v
                })
            })
            .collect();
    }
    out
}

fn lambda_box(k1: usize, lmax: i64) -> Vec<Vec<i64>> {
    zeta_box(k1, lmax)
}

/// Partition `{|λ_i| ≤ lmax} × zetas` into orbits of `λ ↦ φ(β)ᵀλ`, sorted by
/// `(ζ, smallest λ)`. Orbits that leave the box are kept and flagged.
pub fn orbit_blocks(space: &KleinSpace, lmax: i64, zetas: &[Vec<i64>]) -> Vec<FourierBlock> {
    let duals: Vec<_> = space
        .flip_group()
        .iter()
        .map(|beta| space.holonomy(beta).transpose())
        .collect();
    let lambdas = lambda_box(space.k1(), lmax);
    let in_box = |l: &[i64]| l.iter().all(|v| v.abs() <= lmax);
    let mut blocks = Vec::new();
    for zeta in zetas {
        assert_eq!(zeta.len(), space.k2(), "ζ has wrong length");
        let mut seen = std::collections::HashSet::new();
        for lambda in &lambdas {
            if seen.contains(lambda) {
                continue;
            }
            let mut orbit: Vec<Vec<i64>> = duals.iter().map(|d| d.mul_vec(lambda)).collect();
            orbit.sort();
            orbit.dedup();
            let complete = orbit.iter().all(|l| in_box(l));
            for l in &orbit {
                seen.insert(l.clone());
            }
            let orbit: Vec<Vec<i64>> = if complete {
                orbit
            } else {
                orbit.into_iter().filter(|l| in_box(l)).collect()
            };
            blocks.push(FourierBlock {
                zeta: zeta.clone(),
                orbit,
                complete,
                frame: Frame::Scalar,
                operator_matrix: None,
                kernel_basis: Vec::new(),
            });
        }
    }
    blocks.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    blocks
}

fn solve_block(
    mut block: FourierBlock,
    space: &KleinSpace,
    frame: Frame,
) -> Result<FourierBlock, HarmonicsError> {
    if !block.complete {
        return Err(HarmonicsError::IncompleteOrbit {
            zeta: block.zeta,
            lambda: block.orbit[0].clone(),
        });
    }
    let action = klein_action(space, frame);
    let modes: Vec<Vec<i64>> = block
        .modes()
        .iter()
        .map(FourierMode::torus_frequency)
        .collect();
    let op = action.dual_operator(&modes)?;
    let kernel = rational::gram_schmidt(&op.nullspace());
    block.kernel_basis = kernel.iter().map(|v| rational::primitive(v)).collect();
    block.operator_matrix = Some(op);
    block.frame = frame;
    Ok(block)
}

/// Kernel of the scalar operator on one complete block.
pub fn scalar_kernel_basis(block: FourierBlock, space: &KleinSpace) -> Result<FourierBlock, HarmonicsError> {
    solve_block(block, space, Frame::Scalar)
}

/// Kernel of the operator for toroidal components of vector fields
/// (coefficients in `C^{k1}` per frequency). Klein components obey the
/// scalar condition; use [`scalar_kernel_basis`] for them.
pub fn vector_kernel_basis(block: FourierBlock, space: &KleinSpace) -> Result<FourierBlock, HarmonicsError> {
    solve_block(block, space, Frame::Toroidal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    Scalar,
    Vector,
}

/// Solved blocks and real basis functions for one frame.
#[derive(Debug, Clone)]
pub struct BasisSection {
    pub frame: Frame,
    pub blocks: Vec<FourierBlock>,
    pub functions: Vec<RealBasisFunction>,
}

/// A basis of symmetric fields with frequencies in a box.
///
/// For [`BasisKind::Scalar`] there is one section. For
/// [`BasisKind::Vector`] the first section holds toroidal components and the
/// second the basis that each Klein component draws from independently.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    pub kind: BasisKind,
    pub lmax: i64,
    pub zmax: i64,
    /// Orbits that left the box and were skipped.
    pub incomplete_blocks: usize,
    pub sections: Vec<BasisSection>,
}

fn solve_section(
    space: &KleinSpace,
    blocks: &[FourierBlock],
    frame: Frame,
) -> Result<BasisSection, HarmonicsError> {
    let solved: Vec<FourierBlock> = blocks
        .par_iter()
        .filter(|b| b.complete)
        .map(|b| solve_block(b.clone(), space, frame))
        .collect::<Result<_, _>>()?;
    let functions = realize(&solved, space)?;
    Ok(BasisSection {
        frame,
        blocks: solved,
        functions,
    })
}

/// Solve every complete block with `|λ_i| ≤ lmax`, `|ζ_j| ≤ zmax` and realise
/// the kernels as real functions.
pub fn compute_basis(
    space: &KleinSpace,
    kind: BasisKind,
    lmax: i64,
    zmax: i64,
) -> Result<HarmonicBasis, HarmonicsError> {
    let blocks = orbit_blocks(space, lmax, &zeta_box(space.k2(), zmax));
    let incomplete_blocks = blocks.iter().filter(|b| !b.complete).count();
    let frames: &[Frame] = match kind {
        BasisKind::Scalar => &[Frame::Scalar],
        BasisKind::Vector => &[Frame::Toroidal, Frame::Scalar],
    };
    let sections = frames
        .iter()
        .map(|&f| solve_section(space, &blocks, f))
        .collect::<Result<_, _>>()?;
    Ok(HarmonicBasis {
        kind,
        lmax,
        zmax,
        incomplete_blocks,
        sections,
    })
}

#[cfg(test)]
mod tests;
