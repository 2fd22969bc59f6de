//! Exact finite-time distributions, closed-form moments and limit laws for
//! the one-dimensional discrete-time quantum walk driven by a 2×2 unitary coin.
//!
//! The crate is organised bottom-up:
//!
//! * [`coin`]: coin validation, the `P`/`Q`/`R`/`S` chirality basis and its algebra.
//! * [`evolve`]: direct amplitude evolution; works for every coin and is the
//!   oracle the closed forms are checked against.
//! * [`pathsum`]: the word sum `Ξ(l, m)` by enumeration and in closed form.
//! * [`moments`]: empirical and closed-form moments of `X_n`.
//! * [`asymptotics`]: the limit law of `X_n / n`, Jacobi polynomials and the
//!   Jacobi form of the characteristic function.
//! * [`symmetry`]: the initial states giving symmetric distributions.
//! * [`cli`]: the `qwalk` command-line front end.

// `!(x <= tol)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod coin;
pub mod error;
pub mod evolve;
pub mod matrix;
pub mod moments;
pub mod numeric;
pub mod pathsum;
pub mod sample;
pub mod symmetry;

pub use num_complex::Complex64;

pub use crate::coin::{Basis, BasisDecomposition, Coin, Qubit};
pub use crate::error::{Result, WalkError};
pub use crate::evolve::{AmplitudeField, Distribution};
pub use crate::matrix::Mat2;
