//! Adaptive filtering under generalized error-entropy criteria.
//!
//! The crate bundles:
//!
//! - kernel machinery for information-theoretic learning: generalized
//!   Gaussian kernels, Parzen density estimates, information potentials,
//!   and an online error quantizer ([`kernel`], [`entropy`], [`quantizer`]);
//! - a family of adaptive filters under one step contract — LMS, LMF,
//!   GMCC, RLS, and the entropy-gradient trio MEE / GMEE / QGMEE
//!   ([`filters`]);
//! - theoretical predictors for step-size stability and steady-state
//!   excess error, plus closed-form per-iteration operation counts
//!   ([`analysis`]);
//! - a seeded Monte-Carlo system-identification harness with MSD/EMSE
//!   measurement, parameter sweeps, and step-size calibration ([`simkit`]);
//! - an acoustic echo cancellation pipeline with ERLE reporting and WAV
//!   I/O ([`aec`], [`wav`]);
//! - a declarative experiment configuration layer used by the `gmee`
//!   command-line tool ([`config`], [`runner`]).
//!
//! Every experiment is reproducible: randomness flows through ChaCha8
//! generators keyed by explicit seeds, and Monte-Carlo reductions happen
//! in a fixed order regardless of thread scheduling.

// validation deliberately writes `!(x > 0.0)` so NaN fails the check too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aec;
pub mod analysis;
pub mod config;
pub mod entropy;
pub mod error;
pub mod filters;
pub mod kernel;
pub mod noise;
pub mod quantizer;
pub mod runner;
pub mod simkit;
pub mod special;
pub mod wav;
pub mod window;

pub use error::{Error, Result};
