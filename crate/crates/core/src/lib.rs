//! Numerical workbench for a multi-parametric nonlinear Klein-Gordon family.
//!
//! * [`qfunc`]: complex q-exponential and its power/derivative algebra.
//! * [`params`]: constraint solving for the complex class and the two real
//!   classes.
//! * [`waveforms`]: closed-form travelling-wave and auxiliary-field samplers.
//! * [`residual`]: finite-difference and exact-derivative verification.
//! * [`lattice`]: 1+1D leapfrog evolution of the real Case I equation.
//! * [`soliton`]: renormalized Lorentzian-soliton energy density.
//! * [`quad`]: double-exponential quadrature.
//! * [`export`]: CSV, JSON and SVG writers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod export;
pub mod lattice;
pub mod params;
pub mod qfunc;
pub mod quad;
pub mod record;
pub mod residual;
pub mod soliton;
pub mod waveforms;

pub use error::{Error, Result};
pub use params::{ModelClass, ModelParams, WaveVector};
pub use qfunc::{ComplexValue, QReal};
pub use waveforms::{Branch, FieldKind, FieldSolution, Sampler};
