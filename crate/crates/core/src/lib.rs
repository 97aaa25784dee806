//! Volume-type functions for numerical cycle classes on products of
//! projective spaces.
//!
//! The crate is `no_std` (it needs `alloc`). Everything that touches cone
//! membership or intersection numbers runs in exact rational arithmetic;
//! the only floating point lives inside the optimizers in [`volhat`], whose
//! outputs are re-verified exactly before they are reported.
//!
//! Module map:
//!
//! * [`cycle`] – the ring `Q[H_1..H_r]/(H_i^{n_i+1})`, cycle and divisor
//!   classes, cone tests, section counts.
//! * [`constants`] – the recursive exponent-saving constants `epsilon(n,k)`
//!   and `tau(n,k)`.
//! * [`mobility`] – explicit mobility-count upper bounds, complete
//!   intersection lower bounds and the continuity modulus.
//! * [`volhat`] – the intersection-theoretic volume by constrained
//!   optimization over the nef cone, plus the curve-class infimum formula.
//! * [`seshadri`] – multi-point Seshadri intervals and weighted mobility
//!   bounds.
//! * [`power`] – products of rational powers of rationals, compared exactly
//!   and evaluated with outward rounding.
#![no_std]
#![deny(rust_2018_idioms)]

extern crate alloc;

pub mod constants;
pub mod cycle;
mod error;
pub mod mobility;
mod optim;
pub mod power;
pub mod rational;
pub mod seshadri;
pub mod volhat;

pub use constants::{epsilon, tau, RecursionTable};
pub use cycle::{CycleClass, DivisorClass, Monomial, VarietySpec};
pub use error::{Error, Result};
pub use power::{Enclosure, PowerProduct};
pub use rational::Q;
