//! Simulation and analysis of one-dimensional discrete-time coined quantum
//! walks whose coin may depend on the walker's position.
//!
//! The core pieces are [`WalkState`] and [`CoinMap`]; everything else is
//! derived from evolved states: the reduced coin density matrix and its
//! entropy ([`observables`]), a dense brute-force cross-check ([`oracle`]),
//! a photon-counting tomography simulation ([`expsim`]) and batch sweeps and
//! power-law fits ([`analysis`]).

pub mod analysis;
pub mod coin;
pub mod error;
pub mod expsim;
pub mod observables;
pub mod oracle;
pub mod verify;
pub mod walk;

pub use coin::{CoinMap, CoinOperator};
pub use error::{Error, Result};
pub use observables::{CoinDensity, ProbVector};
pub use walk::{CoinBasis, WalkState};

pub use num_complex::Complex64;
