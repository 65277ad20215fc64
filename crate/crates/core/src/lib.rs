//! Zeroth-order online learning on box domains with hierarchical dual
//! averaging.
//!
//! - [`cover`]: box domains and their dyadic covering trees.
//! - [`simplex`]: simple strategies, choice maps, Fisher norms, score migration.
//! - [`estimate`]: one-point importance-weighted payoff estimators.
//! - [`engine`]: the HDA/HEW learner and the Grid/EXP3 baseline.
//! - [`adversary`]: payoff streams and optimum oracles.
//! - [`bench`]: seeded regret experiments, aggregation, CSV output and the CLI.
//!
//! ```
//! use hdab::adversary::{evaluate, AdversaryKind};
//! use hdab::engine::{Hda, HdaConfig, Learner};
//!
//! let stream = AdversaryKind::Sine1d.build(0, 0)?;
//! let mut learner = Hda::new(HdaConfig::hew(stream.domain().clone(), 7))?;
//! for t in 1..=10_000 {
//!     let action = learner.act()?;
//!     let reward = evaluate(stream.as_ref(), t, &action.point)?;
//!     learner.update(reward)?;
//! }
//! assert_eq!(learner.leaves(), 16);
//! # Ok::<(), hdab::Error>(())
//! ```

pub mod adversary;
pub mod bench;
pub mod cover;
pub mod engine;
pub mod error;
pub mod estimate;
pub mod seed;
pub mod selftest;
pub mod simplex;

pub use error::{Error, Result};
