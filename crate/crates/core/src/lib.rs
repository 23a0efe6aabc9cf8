//! Exact quantum cluster algebra engine.
//!
//! Builds the quantum seed attached to a symmetric Cartan matrix and a
//! reduced word, mutates it inside a fixed based quantum torus, and checks
//! quantum T-system, PBW and quantum-matrix identities exactly.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod mutation;
pub mod pbw;
pub mod qarith;
pub mod qmatrix;
pub mod qtorus;
pub mod rootsys;
pub mod seed;
pub mod tsystem;
pub mod verify;

pub use error::{Error, Result};
