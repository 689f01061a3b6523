//! Simulator and analysis toolkit for discrete-time quantum walks driven by
//! a register of M coin qubits.
//!
//! A single coin qubit is "active": each step tosses the unbiased unitary
//! (1, i; i, 1)/sqrt(2) on it and shifts the walker one lattice site up or
//! down conditioned on that qubit. The toolkit provides
//!
//! - [`walk`]: dense state-vector evolution on a cyclic lattice, position
//!   distributions, and direct displacement moments;
//! - [`spectral`]: the closed-form k-space propagator, the first- and
//!   second-moment integrands, and quadrature for the moment constants
//!   c1_tilde(t) and c2_tilde(t);
//! - [`entanglement`]: reduced density matrices, purity, i-concurrence, and
//!   the per-site global entanglement Q;
//! - [`catalog`]: the five parameterized initial coin states studied in the
//!   experiments, with their closed-form i-concurrences;
//! - [`lab`]: parameter sweeps, least-squares fits, and checks of the mean
//!   law `<x>^2 = c1_tilde^2 (1 - IC^2)` and the matching variance law;
//! - [`io`]: plot-ready CSV/JSON writers and the plain-text state file
//!   format.
//!
//! Conventions: the coin basis is |q1 q2 ... qM> with qubit 1 the most
//! significant bit; displacements are measured from the start site; active
//! qubit value 0 shifts the walker to +x.

pub mod catalog;
pub mod entanglement;
pub mod error;
pub mod io;
pub mod lab;
pub mod linalg;
pub mod spectral;
pub mod walk;

pub use error::{Error, Result};
