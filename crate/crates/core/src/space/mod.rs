//! Generalised Klein bottles as quotients of `R^{k1+k2}`.
//!
//! A space is described by `k1` toroidal coordinates `x`, `k2` Klein
//! coordinates `y`, and an automorphism `φ: Z^{k2} → GL(k1, Z)`. In
//! [`Automorphism::Diagonal`] mode `φ(b) = Diag((-1)^{B·b})` for a binary
//! `k1 × k2` matrix `B`; in [`Automorphism::Matrices`] mode
//! `φ(b) = M_1^{b_1} ⋯ M_{k2}^{b_{k2}}` for commuting involutions `M_j`.
//!
//! The group `Z^{k1} ⋊_φ Z^{k2}` acts by `(a, b)·(x, y) = (φ(b)x + a, y + b)`.

mod generators;
mod group;
mod matrix;

use serde::{Deserialize, Serialize};

use crate::gf2::{BitMatrix, BitMatrixError};

pub use generators::{HiddenTori, Relation, RelationKind};
pub use group::{GroupElement, Point};
pub use matrix::IntMatrix;

/// Default tolerance for [`KleinSpace::equivalent`].
pub const DEFAULT_EQUIVALENCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Automorphism {
    /// `φ(b) = Diag((-1)^{B·b})`, `B` binary `k1 × k2`.
    Diagonal(BitMatrix),
    /// `φ(b) = M_1^{b_1} ⋯ M_{k2}^{b_{k2}}`.
    Matrices(Vec<IntMatrix>),
}

/// An unvalidated space description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KleinSpec {
    pub k1: usize,
    pub k2: usize,
    pub automorphism: Automorphism,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpaceError {
    #[error("k1 must be at least 1")]
    NoToroidalCoordinates,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    BitMatrix(#[from] BitMatrixError),
    #[error("{kind} {index} of B is all zero (marooned coordinate)")]
    ZeroRowOrColumn { kind: &'static str, index: usize },
    #[error("bipartite graph of B has {components} connected components; the space is a product")]
    DisconnectedBipartite { components: usize },
    #[error("M_{index} has determinant {det}, expected ±1")]
    NotUnimodular { index: usize, det: i64 },
    #[error("M_{i} and M_{j} do not commute")]
    NonCommuting { i: usize, j: usize },
    #[error("M_{index} is not an involution (M² ≠ I); only involutive automorphisms are supported")]
    NonInvolutive { index: usize },
    #[error("operation needs diagonal mode")]
    ModeUnsupported,
    #[error("malformed space file: {0}")]
    Schema(String),
}

impl KleinSpec {
    /// The standard Klein bottle `K(1,1,(1))`.
    pub fn standard_klein() -> Self {
        Self::diagonal(&[vec![1]]).expect("1x1 matrix is well-formed")
    }

    /// Diagonal-mode spec from a nested 0/1 list; dimensions are read off `B`.
    pub fn diagonal(b: &[Vec<i64>]) -> Result<Self, SpaceError> {
        let b = BitMatrix::from_rows(b)?;
        Ok(Self {
            k1: b.rows(),
            k2: b.cols(),
            automorphism: Automorphism::Diagonal(b),
        })
    }

    /// Matrices-mode spec; `k1` is the side length of the matrices.
    pub fn matrices(k1: usize, ms: &[Vec<Vec<i64>>]) -> Result<Self, SpaceError> {
        let ms = ms
            .iter()
            .enumerate()
            .map(|(j, rows)| {
                IntMatrix::from_rows(rows)
                    .ok_or_else(|| SpaceError::DimensionMismatch(format!("M_{} is ragged", j + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            k1,
            k2: ms.len(),
            automorphism: Automorphism::Matrices(ms),
        })
    }

    pub fn validate(self) -> Result<KleinSpace, SpaceError> {
        KleinSpace::new(self)
    }
}

/// JSON schema of a space file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub k1: usize,
    pub k2: usize,
    pub mode: SpaceMode,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<i64>>>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<Vec<Vec<i64>>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceMode {
    Diagonal,
    Matrices,
}

impl TryFrom<SpaceFile> for KleinSpec {
    type Error = SpaceError;

    fn try_from(f: SpaceFile) -> Result<Self, SpaceError> {
        let spec = match f.mode {
            SpaceMode::Diagonal => {
                let b = f
                    .b
                    .ok_or_else(|| SpaceError::Schema("diagonal mode needs \"B\"".into()))?;
                KleinSpec::diagonal(&b)?
            }
            SpaceMode::Matrices => {
                let m = f
                    .m
                    .ok_or_else(|| SpaceError::Schema("matrices mode needs \"M\"".into()))?;
                KleinSpec::matrices(f.k1, &m)?
            }
        };
        if spec.k1 != f.k1 || spec.k2 != f.k2 {
            return Err(SpaceError::DimensionMismatch(format!(
                "declared k1={}, k2={} but the automorphism data implies k1={}, k2={}",
                f.k1, f.k2, spec.k1, spec.k2
            )));
        }
        Ok(spec)
    }
}

impl From<&KleinSpec> for SpaceFile {
    fn from(spec: &KleinSpec) -> Self {
        match &spec.automorphism {
            Automorphism::Diagonal(b) => SpaceFile {
                k1: spec.k1,
                k2: spec.k2,
                mode: SpaceMode::Diagonal,
                b: Some(b.to_rows()),
                m: None,
            },
            Automorphism::Matrices(ms) => SpaceFile {
                k1: spec.k1,
                k2: spec.k2,
                mode: SpaceMode::Matrices,
                b: None,
                m: Some(ms.iter().map(IntMatrix::to_rows).collect()),
            },
        }
    }
}

/// A validated, immutable space. All operations are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KleinSpace {
    spec: KleinSpec,
    /// `φ(e_j)` for each Klein coordinate.
    flips: Vec<IntMatrix>,
}

impl KleinSpace {
    fn new(spec: KleinSpec) -> Result<Self, SpaceError> {
        if spec.k1 == 0 {
            return Err(SpaceError::NoToroidalCoordinates);
        }
        let flips = match &spec.automorphism {
            Automorphism::Diagonal(b) => {
                validate_bipartite(spec.k1, spec.k2, b)?;
                (0..spec.k2)
                    .map(|j| {
                        let signs: Vec<i64> =
                            (0..spec.k1).map(|i| if b.get(i, j) { -1 } else { 1 }).collect();
                        IntMatrix::diagonal(&signs)
                    })
                    .collect()
            }
            Automorphism::Matrices(ms) => {
                validate_matrices(spec.k1, spec.k2, ms)?;
                ms.clone()
            }
        };
        Ok(Self { spec, flips })
    }

    pub fn k1(&self) -> usize {
        self.spec.k1
    }

    pub fn k2(&self) -> usize {
        self.spec.k2
    }

    pub fn dim(&self) -> usize {
        self.spec.k1 + self.spec.k2
    }

    pub fn spec(&self) -> &KleinSpec {
        &self.spec
    }

    /// The binary matrix in diagonal mode.
    pub fn binary_matrix(&self) -> Option<&BitMatrix> {
        match &self.spec.automorphism {
            Automorphism::Diagonal(b) => Some(b),
            Automorphism::Matrices(_) => None,
        }
    }

    /// `φ(e_j)`, the automorphism applied by a unit step in Klein coordinate `j`.
    pub fn flip(&self, j: usize) -> &IntMatrix {
        &self.flips[j]
    }

    /// The holonomy `H(b) = φ(b)`. Only the parity of `b` matters since every
    /// generator is an involution.
    pub fn holonomy(&self, b: &[i64]) -> IntMatrix {
        assert_eq!(b.len(), self.k2(), "holonomy: b has wrong length");
        let mut h = IntMatrix::identity(self.k1());
        for (j, &bj) in b.iter().enumerate() {
            if bj.rem_euclid(2) == 1 {
                h = &h * &self.flips[j];
            }
        }
        h
    }

    /// `φ(b)x` without materialising the matrix in diagonal mode.
    pub fn apply_holonomy(&self, b: &[i64], x: &[f64]) -> Vec<f64> {
        match &self.spec.automorphism {
            Automorphism::Diagonal(mat) => {
                let parity = crate::gf2::BitVec::from_ints(b);
                (0..self.k1())
                    .map(|i| if mat.row(i).dot(&parity) { -x[i] } else { x[i] })
                    .collect()
            }
            Automorphism::Matrices(_) => self.holonomy(b).mul_vec_f64(x),
        }
    }

    /// Every `β ∈ Z_2^{k2}`, as 0/1 integer vectors in binary counting order
    /// (β_1 is the least significant bit).
    pub fn flip_group(&self) -> Vec<Vec<i64>> {
        let k2 = self.k2();
        (0u64..(1u64 << k2))
            .map(|mask| (0..k2).map(|j| ((mask >> j) & 1) as i64).collect())
            .collect()
    }
}

fn validate_bipartite(k1: usize, k2: usize, b: &BitMatrix) -> Result<(), SpaceError> {
    if b.rows() != k1 || b.cols() != k2 {
        return Err(SpaceError::DimensionMismatch(format!(
            "B is {}x{}, expected {k1}x{k2}",
            b.rows(),
            b.cols()
        )));
    }
    if let Some(i) = (0..k1).find(|&i| b.row(i).is_zero()) {
        return Err(SpaceError::ZeroRowOrColumn { kind: "row", index: i });
    }
    if let Some(j) = (0..k2).find(|&j| b.column(j).is_zero()) {
        return Err(SpaceError::ZeroRowOrColumn { kind: "column", index: j });
    }
    // Vertices 0..k1 are toroidal coordinates, k1..k1+k2 Klein coordinates.
    let n = k1 + k2;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for i in 0..k1 {
        for j in b.row(i).ones() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, k1 + j));
            if ri != rj {
                parent[ri] = rj;
            }
        }
    }
    let components = (0..n).filter(|&v| find(&mut parent, v) == v).count();
    if components > 1 {
        return Err(SpaceError::DisconnectedBipartite { components });
    }
    Ok(())
}

fn validate_matrices(k1: usize, k2: usize, ms: &[IntMatrix]) -> Result<(), SpaceError> {
    if ms.len() != k2 {
        return Err(SpaceError::DimensionMismatch(format!(
            "{} matrices given for k2={k2}",
            ms.len()
        )));
    }
    for (j, m) in ms.iter().enumerate() {
        if m.rows() != k1 || m.cols() != k1 {
            return Err(SpaceError::DimensionMismatch(format!(
                "M_{} is {}x{}, expected {k1}x{k1}",
                j + 1,
                m.rows(),
                m.cols()
            )));
        }
        let det = m.determinant();
        if det.abs() != 1 {
            return Err(SpaceError::NotUnimodular { index: j + 1, det });
        }
        if !(m * m).is_identity() {
            return Err(SpaceError::NonInvolutive { index: j + 1 });
        }
    }
    for i in 0..k2 {
        for j in i + 1..k2 {
            if &ms[i] * &ms[j] != &ms[j] * &ms[i] {
                return Err(SpaceError::NonCommuting { i: i + 1, j: j + 1 });
            }
        }
    }
    Ok(())
}
