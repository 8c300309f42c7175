//! Generalised Klein bottles as computable objects.
//!
//! * [`gf2`]: exact linear algebra over the two-element field.
//! * [`space`]: spaces `K(k1, k2, B)` and their matrix-automorphism
//!   extension, the group action, canonical representatives and generators.
//! * [`fields`]: scalar and vector fields built from switching functions, and
//!   sampling-based symmetry checks.
//! * [`harmonics`]: averaging operators, orbit blocks of Fourier modes and
//!   exact kernel bases for symmetric scalar and vector fields.
//! * [`flow`]: fixed-step RK4 streamlines in the covering space.
//! * [`sds`]: event-driven spiking networks and inter-spike intervals.
//! * [`tda`]: window embedding, 2NN intrinsic dimension and Rips persistence.

pub mod fields;
pub mod flow;
pub mod gf2;
pub mod harmonics;
pub mod rng;
pub mod sds;
pub mod space;
pub mod tda;

pub use space::{GroupElement, KleinSpace, KleinSpec, Point};
