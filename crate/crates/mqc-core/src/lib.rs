//! Core library for compiling Clifford circuits into a constant number of
//! programmable multiqubit entangling gates.
//!
//! The crate is organized bottom-up:
//!
//! - [`f2`]: bit-packed linear algebra over GF(2);
//! - [`pauli`]: phase-tracked Pauli strings;
//! - [`symplectic`]: binary symplectic maps with sign data (Clifford
//!   tableaux);
//! - [`circuit`]: the gate-level IR, its generators, and the text format;
//! - [`oracle`]: independent dense-unitary and tableau reference
//!   implementations used to validate everything else;
//! - [`symfactor`]: factorization of an invertible state matrix into a
//!   product of two symmetric invertible matrices;
//! - [`synth`]: the constant-cost synthesis pipeline (canonical form,
//!   five-gate CNOT-block implementations, full compilation);
//! - [`power`]: nuclear-norm drive-power accounting and the discrete
//!   optimizers that reduce it.
//!
//! The crate is `no_std` + `alloc`; everything that needs an operating
//! system (file IO, CLI, parallel benchmarking) lives in the companion
//! binary crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod circuit;
pub mod f2;
pub mod oracle;
pub mod pauli;
pub mod power;
pub mod symfactor;
pub mod symplectic;
pub mod synth;
