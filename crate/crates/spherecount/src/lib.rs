//! Exact counting of rational points on the n-dimensional unit sphere with
//! bounded denominator, together with the elementary number-theoretic
//! machinery the counts rest on: real Dirichlet characters, L-values at real
//! s > 1, twisted and modified divisor sums, Möbius inversion between sphere
//! and theta counts, and asymptotic remainder scans.
//!
//! The crate is organized around the counting function N(S^n; T), the number
//! of lowest-terms points p/q on S^n with denominator q <= T. Counting is
//! exact integer arithmetic throughout; the asymptotic machinery (main-term
//! constants from L-values, remainder-exponent fits) is floating point with
//! certified tolerances.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `spherecount` binary for the command-line surface.

pub mod analysis;
pub mod arith;
pub mod characters;
pub mod divisor_sums;
pub mod error;
pub mod lfunctions;
pub mod theta;

pub use error::{Error, Result};
