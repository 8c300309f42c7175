//! Compiles the code listings of the guide in `src/` as doc tests.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/spaces.md")]
pub mod spaces {}
#[doc = include_str!("src/fields.md")]
pub mod fields {}
#[doc = include_str!("src/harmonics.md")]
pub mod harmonics {}
#[doc = include_str!("src/flow.md")]
pub mod flow {}
#[doc = include_str!("src/spiking.md")]
pub mod spiking {}
#[doc = include_str!("src/topology.md")]
pub mod topology {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
#[doc = include_str!("../README.md")]
pub mod readme {}
