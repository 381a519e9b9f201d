//! Cut finite element discretization of the 2D elastic wave equation.
//!
//! The crate covers two settings on a uniform square background mesh:
//!
//! * a single elastic domain whose boundary is partly aligned with the mesh
//!   and partly immersed (described by a level set), and
//! * two elastic materials separated by an immersed interface, with the
//!   degrees of freedom doubled on the cut cells.
//!
//! Small cuts are stabilized by face-based ghost penalties on both the mass
//! and stiffness forms, Dirichlet and interface conditions are imposed
//! weakly with Nitsche's method, and the resulting semi-discrete system
//! `M ξ'' + A ξ = L(t)` is advanced with the classical fourth order
//! Runge-Kutta method. [`analysis`] contains exact reference solutions,
//! error norms, spectral diagnostics and the study drivers.
//!
//! The crate is `no_std` and only needs an allocator.
#![no_std]
#![deny(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod error;
pub mod forms;
pub mod geometry;
pub mod quadrature;
pub mod space;
pub mod system;

mod math;

pub use error::{Error, Result};
