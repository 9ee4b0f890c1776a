//! Exact computational models for split reductive group combinatorics over
//! finite commutative rings.
//!
//! The crate is organised around six pillars:
//!
//! * [`roots`]: root systems realised as exact integer vectors: construction
//!   by type, neighbor relations, hyperplane covering, saturated special
//!   closed subsets, thick series, and factor-morphisms.
//! * [`ring`]: finite commutative rings from descriptors (`Z/n`, polynomial
//!   quotients, products), subalgebras, homotopes, semidirect extensions,
//!   idempotent powers, localizations and colocalization towers.
//! * [`nil`]: two-step nilpotent modules built from bilinear cocycles, the
//!   squaring-style scalar action, and quadratic maps between such modules.
//! * [`chev`]: an integral Chevalley basis per reduced system: structure
//!   constants with deterministic signs, divided powers of the adjoint
//!   nilpotents, and symbolic commutator tables in `Z[x,y]`.
//! * [`engine`]: root/torus/Weyl elements over a finite ring, deterministic
//!   breadth-first subgroup closure, relative (ideal-level) subgroups, and
//!   the lemma verifications built on top of them.
//! * [`cli`]: the `chevalley` binary: single-lemma verification, group
//!   enumeration, table export, and the quick/full suites with JSON reports.
//!
//! Every check in the crate is exact: integer, rational, or table-driven
//! finite-ring arithmetic. Nothing is floating point and nothing is sampled
//! unless a test says so explicitly.
//!
//! The `examples/` directory is the front door: each file is a runnable tour
//! of one capability (`cargo run --release --example root_geometry`, ...).

pub mod catalog;
pub mod chev;
pub mod cli;
pub mod engine;
pub mod error;
pub mod nil;
pub mod poly;
pub mod report;
pub mod roots;
pub mod ring;

pub use error::Error;
