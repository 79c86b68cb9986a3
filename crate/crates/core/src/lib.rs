//! Photon-number truncation of optical simultaneous-message-passing (SMP)
//! protocols.
//!
//! Optical messages live in an infinite-dimensional Fock space. Projecting
//! every message onto total photon number at most `⌊µ/δ⌋` costs at most
//! `2√δ` in protocol error and leaves a space of dimension `C(a+m, m)`,
//! which turns lower bounds on quantum and classical SMP communication into
//! joint constraints on energy (`µ`) and time (`m` modes).
//!
//! * [`fock`]: sparse multimode states, dense operators and their metrics.
//! * [`truncation`]: the photon-number cutoff, projections and the protocol
//!   transform with its error accounting.
//! * [`combinatorics`]: exact rank counts and the inequalities built on them.
//! * [`smp`]: protocols, exact error evaluation, coherent-state
//!   fingerprinting and a brute-force deterministic complexity oracle.
//! * [`bounds`]: tradeoff quantities and CSV reports.

pub mod bounds;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod fock;
pub mod smp;
pub mod truncation;
pub mod verify;

pub use error::{Error, Result};
