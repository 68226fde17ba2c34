//! Sequence design for HP lattice proteins with classically simulated
//! variational quantum algorithms.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice_hp`]: structures, contact maps, enumeration, designability
//!   census and design instances with unique known solutions.
//! - [`qubo`]: the penalized quadratic objective and brute-force oracles.
//! - [`simulator`]: statevector simulation, Dicke-state preparation,
//!   sampling and stochastic Pauli noise.
//! - [`ansatz`]: QAOA variants, hardware-efficient circuits and depth
//!   accounting.
//! - [`vqa`]: objectives, the derivative-free optimizer, layer growth,
//!   parameter donation, campaigns and landscape scans.
//! - [`cli`]: the `hpdesign` command-line front end.

pub mod ansatz;
pub mod cli;
pub mod lattice_hp;
pub mod qubo;
pub mod simulator;
pub mod vqa;
