//! Numerical toolkit for generalized quantum Zeno dynamics: superoperators in
//! column-stacking form, spectral decompositions of kick channels, matrix
//! logarithms and `f(ad)`, Zeno limits, explicit bounds and benchmark models.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod experiment;
pub mod io;
pub mod linalg;
pub mod matfunc;
pub mod models;
pub mod random;
pub mod spectral;
pub mod superop;
pub mod zeno;

pub use error::{Result, ZenoError};
pub use linalg::{CMat, C64};
pub use superop::{GklsGenerator, HilbertOperator, KrausSet, SuperOperator};
