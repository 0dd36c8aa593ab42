//! Bell equalities and inequalities derived from local hidden variable
//! (LHV) models, and their violation by an entangled photon pair.
//!
//! An LHV model assigns a probability `q` to every joint assignment of
//! outcomes to all four measurements. Observable probabilities `P` are
//! sums of `q`'s, `P = M q`. A Bell expression is a weighted sum of `P`'s;
//! rewritten over `q` its coefficients bound it, and a pair whose
//! `q`-coefficients complement each other gives an equality.
//!
//! Runnable examples, one per capability:
//!
//! | example              | shows                                             |
//! |----------------------|---------------------------------------------------|
//! | `rank_check`         | rank of `M` against the closed-form count         |
//! | `appendix_table`     | the P-to-q table and CSV dump for two outcomes    |
//! | `prove_equality`     | term-by-term local proofs                         |
//! | `enumerate_catalog`  | searching q-space for new expressions             |
//! | `inequality_values`  | quantum values at fixed angles                    |
//! | `equality_violation` | the equality against the local prediction         |
//! | `noise_tolerance`    | white-noise tolerance, both readings              |
//! | `optimize_angles`    | multi-start angle search                          |
//!
//! The `lhv-bell` binary wraps the same calls; see [`cli`].

pub mod builtins;
pub mod cli;
pub mod conversion;
pub mod enumeration;
pub mod error;
pub mod expression;
pub mod lhv;
pub mod linalg;
pub mod manifest;
pub mod optimize;
pub mod proof;
pub mod quantum;
pub mod scenario;
pub mod violation;

pub use error::{Error, Result};
