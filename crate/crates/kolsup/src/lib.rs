//! Constructive Kolmogorov superposition representations.
//!
//! Builds a family of piecewise-linear inner functions `phi_1..phi_m` and, per
//! bounded continuous target `f` on `R^n`, an outer function `g` such that
//! `f(x) ~ sum_q g(sum_p lambda_p * phi_q(x_p))`, with grid-verified error
//! bounds recorded stage by stage.
//!
//! Modules map onto the pipeline:
//! * [`plfun`] - exact piecewise-linear function algebra (the storage format
//!   for every constructed function);
//! * [`constants`] - derivation and validation of the numeric parameters;
//! * [`grid`] - the interval families and boxes underlying each stage;
//! * [`target`] - the catalog of certified target functions;
//! * [`outer`] - single-stage construction: plateau families, the outer
//!   increment `h`, and stage verification;
//! * [`engine`] - the residual iteration accumulating `g = sum_k h_k`;
//! * [`monotone`] - the variant with increasing inner functions and
//!   per-family weight rows;
//! * [`verify`] - independent brute-force oracles used by the test suites;
//! * [`report`] - run-report and trace serialization.

pub mod constants;
pub mod engine;
pub mod grid;
pub mod monotone;
pub mod outer;
pub mod plfun;
pub mod report;
pub mod target;
pub mod verify;

pub use constants::Params;
pub use engine::{eval_representation, run, Representation, StopRule};
pub use plfun::{Baseline, Extension, Pl1d, PlateauFunction};
