//! Casimir-Polder (van der Waals) potentials and forces for a single atom in
//! planar magnetodielectric multilayer systems.
//!
//! The crate is `no_std` (it needs `alloc`) and purely numerical: material
//! response, generalized reflection coefficients, imaginary-frequency
//! quadrature, asymptotic coefficients, wall/well geometry and the
//! excited-state force dynamics near a half space. File formats, the CLI and
//! parallel sweeps live in the `cpforge` crate.
//!
//! All quantities are SI: angular frequencies in rad/s, lengths in m,
//! energies in J, forces in N. [`units::Units`] converts from the
//! dimensionless "ω_ref / c/ω_ref" convention used by configs.

#![no_std]
#![warn(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::too_many_arguments)]

extern crate alloc;

pub mod asymptotics;
pub mod atom;
pub mod constants;
pub mod dynamics;
mod error;
pub mod materials;
pub mod potential;
pub mod quad;
pub mod stack;
pub mod units;

pub use atom::{Atom, Transition};
pub use error::{Error, Result};
pub use materials::{Material, Resonance};
pub use quad::{Integral, QuadratureSpec};
pub use stack::{Layer, LayerStack};
