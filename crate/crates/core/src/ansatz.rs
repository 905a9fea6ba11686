//! Layered hardware-efficient circuit and the energy cost function.
//!
//! One layer is a rotation on every system qubit followed by the CNOT chain
//! `CNOT(0 -> 1), CNOT(1 -> 2), ..., CNOT(n-2 -> n-1)`, applied in that order.
//! Parameter `theta[layer * n + qubit]` drives the rotation of `qubit` in `layer`.

use crate::pauli::Hamiltonian;
use crate::statevector::{Axis, StateError, StateVector};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnsatzError {
    #[error("ansatz needs n >= 1 and L >= 1, got n = {n}, L = {layers}")]
    BadShape { n: usize, layers: usize },
    #[error("parameter vector has length {found}, expected {expected}")]
    ParamCount { expected: usize, found: usize },
    #[error("Hamiltonian acts on {ham} qubits, ansatz on {ansatz}")]
    QubitMismatch { ham: usize, ansatz: usize },
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnsatzSpec {
    n: usize,
    layers: usize,
    axis: Axis,
}

impl AnsatzSpec {
    pub fn new(n: usize, layers: usize, axis: Axis) -> Result<Self, AnsatzError> {
        if n < 1 || layers < 1 {
            return Err(AnsatzError::BadShape { n, layers });
        }
        Ok(Self { n, layers, axis })
    }

    /// Y-rotation ansatz.
    pub fn with_y(n: usize, layers: usize) -> Result<Self, AnsatzError> {
        Self::new(n, layers, Axis::Y)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// `k = (2n - 1) L`.
    pub fn gate_count(&self) -> usize {
        (2 * self.n - 1) * self.layers
    }

    /// `d = n L`.
    pub fn param_count(&self) -> usize {
        self.n * self.layers
    }

    pub fn param_index(&self, layer: usize, qubit: usize) -> usize {
        layer * self.n + qubit
    }
}

pub fn gate_count(spec: &AnsatzSpec) -> usize {
    spec.gate_count()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector(pub Vec<f64>);

impl ParamVector {
    pub fn zeros(spec: &AnsatzSpec) -> Self {
        Self(vec![0.0; spec.param_count()])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Copy with component `j` moved by `delta`.
    pub fn shifted(&self, j: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.0[j] += delta;
        out
    }
}

impl From<Vec<f64>> for ParamVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

fn check_params(spec: &AnsatzSpec, theta: &[f64]) -> Result<(), AnsatzError> {
    if theta.len() != spec.param_count() {
        return Err(AnsatzError::ParamCount {
            expected: spec.param_count(),
            found: theta.len(),
        });
    }
    Ok(())
}

/// Applies `U(theta)`, or `U(theta)^dagger` when `dagger` is set, to the system qubits.
pub fn apply_ansatz(
    state: &mut StateVector,
    spec: &AnsatzSpec,
    theta: &[f64],
    dagger: bool,
) -> Result<(), AnsatzError> {
    check_params(spec, theta)?;
    if state.n_system() < spec.n {
        return Err(AnsatzError::QubitMismatch {
            ham: state.n_system(),
            ansatz: spec.n,
        });
    }
    let n = spec.n;
    if !dagger {
        for layer in 0..spec.layers {
            for q in 0..n {
                state.apply_rotation(q, spec.axis, theta[spec.param_index(layer, q)])?;
            }
            for q in 1..n {
                state.apply_cnot(q - 1, q)?;
            }
        }
    } else {
        for layer in (0..spec.layers).rev() {
            for q in (1..n).rev() {
                state.apply_cnot(q - 1, q)?;
            }
            for q in (0..n).rev() {
                state.apply_rotation(q, spec.axis, -theta[spec.param_index(layer, q)])?;
            }
        }
    }
    Ok(())
}

/// `|psi(theta)> = U(theta)|0...0>`.
pub fn prepare(spec: &AnsatzSpec, theta: &[f64]) -> Result<StateVector, AnsatzError> {
    let mut state = StateVector::new(spec.n, false)?;
    apply_ansatz(&mut state, spec, theta, false)?;
    Ok(state)
}

/// `sum_i h_i <psi|P_i|psi>` on an already prepared state.
pub fn energy(state: &StateVector, h: &Hamiltonian) -> Result<f64, AnsatzError> {
    let mut e = 0.0;
    for t in h.terms() {
        e += t.coefficient * state.expectation(&t.string)?;
    }
    Ok(e)
}

/// Exact `f(theta) = <psi(theta)|H|psi(theta)>`.
pub fn cost(h: &Hamiltonian, spec: &AnsatzSpec, theta: &[f64]) -> Result<f64, AnsatzError> {
    if h.n_qubits() != spec.n {
        return Err(AnsatzError::QubitMismatch {
            ham: h.n_qubits(),
            ansatz: spec.n,
        });
    }
    energy(&prepare(spec, theta)?, h)
}
