//! Core algorithms for the `ufun` workspace: a fixed recursive function `e`
//! on the naturals whose graph contains embeddable copies of every
//! functional-graph shape, plus the machinery to exploit that.
//!
//! The crate is organized around five pieces:
//!
//! - [`numeral`]: exact naturals with a symbolic fast path for powers of two,
//!   so values like `2^(2^40)` stay cheap and exact.
//! - [`sigma`]: the sequence `e(1), e(2), ...` — a materialized streaming
//!   generator plus an analytic evaluator that agree wherever both apply.
//! - [`dsl`]: a small total-function expression language for specifying `h`.
//! - [`graph`]: orbit iteration, cycle detection, and component
//!   classification over the functional graph of a user function `h`.
//! - [`coder`]: lazy construction of an injective `c` with
//!   `c(h(n)) = e(c(n))`, with verification and an exhaustive oracle.
//!
//! The crate is `no_std` (alloc required); IO, file formats, and the CLI
//! live in the companion `ufun-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod coder;
pub mod dsl;
pub mod graph;
pub mod numeral;
pub mod sigma;

pub use numeral::Numeral;
