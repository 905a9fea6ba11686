//! State-vector laboratory for variational energy minimization, comparing
//! direct-measurement (DM) and non-demolition (QNDM) gradient estimation.
//!
//! Modules, bottom up:
//! - [`pauli`]: Pauli strings, Hamiltonians, file format, random generation
//! - [`statevector`]: dense simulator with an optional detector qubit
//! - [`ansatz`]: layered rotation + CNOT-chain circuit and the energy cost
//! - [`gradients`]: exact, DM and QNDM gradient estimators with shot noise
//! - [`optimizer`]: gradient descent with random restarts
//! - [`resources`]: logical gate counts per gradient evaluation
//! - [`cli`]: the `vqa-lab` command-line harness

pub mod ansatz;
pub mod cli;
pub mod dense;
pub mod gradients;
pub mod optimizer;
pub mod output;
pub mod pauli;
pub mod resources;
pub mod seeding;
pub mod statevector;

/// The bundled 4-qubit, 15-term H2 Hamiltonian (STO-3G, Jordan-Wigner).
pub const H2_HAMILTONIAN: &str = include_str!("../data/h2_sto3g_jw.txt");

/// Dense-diagonalization ground energy of [`H2_HAMILTONIAN`], in hartree.
pub const H2_GROUND_ENERGY: f64 = -1.1372701743632105;
