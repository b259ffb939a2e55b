//! Stylometric authorship attribution.
//!
//! The crate covers the whole numerical pipeline for attributing documents
//! to one of two candidate authors:
//!
//! * [`corpus`]: ebook parsing, tokenization, lemmatization and word counts;
//! * [`bow`]: the three term-document matrix variants and row normalization;
//! * [`embed`]: LDA (collapsed Gibbs), LSA (truncated SVD), NMF and
//!   aggregation of external word vectors;
//! * [`screen`]: binomial allocation p-values, Higher Criticism,
//!   Benjamini–Hochberg and Bonferroni word selection;
//! * [`classify`]: ℓ1-penalized logistic regression and probit BART;
//! * [`mw`]: the negative-binomial word-rate model and posterior log-odds;
//! * [`eval`]: leave-one-out cross-validation, threshold rules and KDE.
//!
//! Everything here is pure computation over in-memory values and builds
//! without `std` (an allocator is required). File formats, the command line
//! and parallel orchestration live in the companion `stylus` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bow;
pub mod classify;
pub mod corpus;
pub mod embed;
pub mod eval;
pub mod linalg;
pub mod math;
pub mod mw;
pub mod rng;
pub mod screen;

mod error;

pub use error::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;
