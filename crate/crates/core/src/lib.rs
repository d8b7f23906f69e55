//! Noncomparative fairness auditing.
//!
//! A system under test `g` and a benchmark `f` evaluate the same inputs. From
//! the aligned evaluations this crate measures
//!
//! * the noncomparative gap `epsilon_hat = max_x d(g(x), f(x))`,
//! * the weak individual-fairness slack of each evaluator at a similarity
//!   level `kappa`,
//! * the statistical-parity gap of each evaluator across protected groups,
//! * the empirical Lipschitz constant linking per-input deviation to
//!   group-probability deviation,
//!
//! and certifies the system against the benchmark: the individual-fairness
//! bound `2 epsilon + kappa + delta`, the parity bound `2 M epsilon + delta`,
//! lower-bound propagation of fairness violations, and threshold screening of
//! unknown auditors.
//!
//! [`synth`] generates scenarios with known ground truth and recomputes every
//! quantity with an independent brute-force oracle.

pub mod certification;
pub mod error;
pub mod io;
pub mod metrics;
pub mod synth;
pub mod types;

pub use error::{FairnessError, Result};
pub use types::*;
