//! Exact and semiclassical numerics for a large SU(2) spin evolving under
//! `H = -Jx + Λ/(2J) Jz²`.
//!
//! The crate is `no_std` (it needs `alloc`) and keeps every computation a pure
//! function of its inputs. IO, CLI parsing and parallel fan-out live in the
//! companion `spinlab` crate.
//!
//! Layout:
//!
//! - [`model`]: the spin model, its tridiagonal Hamiltonian and observables.
//! - [`eigen`]: implicit-shift QL for symmetric tridiagonal matrices.
//! - [`states`]: SU(2) coherent states and their phase-space widths.
//! - [`ensembles`]: parity-resolved eigenbases, diagonal and micro-canonical
//!   ensembles, unitary dynamics, level statistics.
//! - [`classical`]: the classical flow, orbit averages, `ω(E)` and WKB levels.
//! - [`semiclassics`]: separatrix saddle-point predictions for the memory of
//!   the initial phase.
//!
//! Energies handed to and returned from the physics-facing functions are per
//! spin (`E = E_abs / J`) unless a name says otherwise.

#![no_std]
#![cfg_attr(test, allow(unused_imports))]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod classical;
pub mod eigen;
pub mod ensembles;
mod error;
pub mod model;
pub mod quad;
pub mod semiclassics;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
