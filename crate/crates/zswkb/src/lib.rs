//! Semiclassical scattering data for the Zakharov-Shabat (Dirac) operator
//! with a positive, multi-humped, decaying potential.
//!
//! The crate computes WKB eigenvalues from multi-barrier Bohr-Sommerfeld
//! quantization, norming-constant signs, the limiting eigenvalue density and
//! reflection coefficients, and checks them against an independent direct
//! spectrum and Jost-solution integration.
//!
//! Module map:
//! - [`potential`]: potential families, derivatives, barrier/well decomposition.
//! - [`specfun`]: Airy, parabolic cylinder and modified parabolic cylinder functions.
//! - [`liouville`]: Liouville charts x <-> zeta, error terms and variation bounds.
//! - [`wkb`]: uniform approximants and the connection matrices sigma, tau.
//! - [`spectrum`]: actions, WKB eigenvalues, norming signs, density.
//! - [`oracle`]: direct spectrum, shooting refinement, reflection coefficient.
//! - [`cli`]: batch pipelines behind the `zswkb` binary.

pub mod cli;
pub mod error;
pub mod liouville;
pub mod numerics;
pub mod oracle;
pub mod potential;
pub mod specfun;
pub mod spectrum;
pub mod wkb;

pub use error::{Error, Result};
