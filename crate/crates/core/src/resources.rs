//! Logical gate-count model for one full gradient evaluation by DM and QNDM.
//!
//! DM runs `2 d J N` circuits, each the ansatz (`k` gates) plus the basis
//! change for the measured string. QNDM runs `d N` circuits, each three
//! ansatz passes, two coupling products and the detector preparation/readout.
//!
//! Coupling `exp(i lambda h Z_a (x) P)` is costed as a CNOT ladder: two
//! two-qubit gates per non-identity factor, one detector rotation, and a
//! basis change on each side for every X/Y factor.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ansatz::AnsatzSpec;
use crate::gradients::Shots;
use crate::output::fmt_f64;
use crate::pauli::{
    gen_random_hamiltonian, Hamiltonian, HamiltonianError, PauliString, RandomHamSpec,
};
use crate::seeding::derive_seed;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ResourceError {
    #[error("gate counts need a finite shot budget")]
    InfiniteShots,
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("J list is empty")]
    EmptySweep,
    #[error("Hamiltonian acts on {ham} qubits, ansatz on {ansatz}")]
    QubitMismatch { ham: usize, ansatz: usize },
    #[error("gate count overflows 64 bits")]
    Overflow,
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
}

/// Per-gate constants of the counting convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CostModel {
    /// Single-qubit rotations per X/Y factor before a DM readout.
    pub dm_basis_per_xy: u64,
    /// Two-qubit gates per non-identity factor in one coupling.
    pub coupling_two_qubit_per_weight: u64,
    /// Detector rotations per coupling.
    pub coupling_detector_rotations: u64,
    /// Basis gates per X/Y factor in one coupling (before and after).
    pub coupling_basis_per_xy: u64,
    /// Cost of coupling an identity string (a bare detector rotation).
    pub identity_coupling: u64,
    /// Initial Hadamard plus final readout rotation on the detector.
    pub detector_overhead: u64,
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            dm_basis_per_xy: 1,
            coupling_two_qubit_per_weight: 2,
            coupling_detector_rotations: 1,
            coupling_basis_per_xy: 2,
            identity_coupling: 1,
            detector_overhead: 2,
        }
    }
}

impl CostModel {
    pub fn basis_change_cost(&self, p: &PauliString) -> u64 {
        self.dm_basis_per_xy * u64::from(p.xy_count())
    }

    pub fn coupling_cost(&self, p: &PauliString) -> u64 {
        if p.is_identity() {
            return self.identity_coupling;
        }
        self.coupling_two_qubit_per_weight * p.weight() as u64
            + self.coupling_detector_rotations
            + self.coupling_basis_per_xy * u64::from(p.xy_count())
    }
}

fn finite_shots(shots: Shots) -> Result<u64, ResourceError> {
    match shots {
        Shots::Infinite => Err(ResourceError::InfiniteShots),
        Shots::Finite(0) => Err(ResourceError::ZeroShots),
        Shots::Finite(n) => Ok(n),
    }
}

fn check_dims(h: &Hamiltonian, spec: &AnsatzSpec) -> Result<(), ResourceError> {
    if h.n_qubits() != spec.n_qubits() {
        return Err(ResourceError::QubitMismatch {
            ham: h.n_qubits(),
            ansatz: spec.n_qubits(),
        });
    }
    Ok(())
}

fn mul(parts: &[u64]) -> Result<u64, ResourceError> {
    parts
        .iter()
        .try_fold(1u64, |acc, &x| acc.checked_mul(x))
        .ok_or(ResourceError::Overflow)
}

/// `R_DM = 2 d N sum_i (k + basis_change_cost(P_i))`.
pub fn dm_cost(
    h: &Hamiltonian,
    spec: &AnsatzSpec,
    shots: Shots,
    model: &CostModel,
) -> Result<u64, ResourceError> {
    let n = finite_shots(shots)?;
    check_dims(h, spec)?;
    let k = spec.gate_count() as u64;
    let per_circuit: u64 = h
        .terms()
        .iter()
        .map(|t| k + model.basis_change_cost(&t.string))
        .sum();
    mul(&[2, spec.param_count() as u64, n, per_circuit])
}

/// `R_QNDM = d N (3k + 2 sum_i coupling_cost(P_i) + detector_overhead)`.
pub fn qndm_cost(
    h: &Hamiltonian,
    spec: &AnsatzSpec,
    shots: Shots,
    model: &CostModel,
) -> Result<u64, ResourceError> {
    let n = finite_shots(shots)?;
    check_dims(h, spec)?;
    let k = spec.gate_count() as u64;
    let couplings: u64 = h
        .terms()
        .iter()
        .map(|t| model.coupling_cost(&t.string))
        .sum();
    let per_circuit = 3 * k + 2 * couplings + model.detector_overhead;
    mul(&[spec.param_count() as u64, n, per_circuit])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `10 k <= n J`
    #[serde(rename = "K_LL_NJ")]
    KMuchLessNj,
    /// `k >= 10 n J`
    #[serde(rename = "K_GG_NJ")]
    KMuchGreaterNj,
    #[serde(rename = "INTERMEDIATE")]
    Intermediate,
}

impl Regime {
    pub fn classify(k: usize, n: usize, j: usize) -> Self {
        let nj = n * j;
        if 10 * k <= nj {
            Regime::KMuchLessNj
        } else if k >= 10 * nj {
            Regime::KMuchGreaterNj
        } else {
            Regime::Intermediate
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::KMuchLessNj => "K_LL_NJ",
            Regime::KMuchGreaterNj => "K_GG_NJ",
            Regime::Intermediate => "INTERMEDIATE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResourceInputs {
    pub n: usize,
    pub layers: usize,
    pub j: usize,
    pub n_shots: u64,
    pub d: usize,
    pub k: usize,
    pub weights: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResourceReport {
    pub r_dm: u64,
    pub r_qndm: u64,
    pub regime: Regime,
    pub inputs: ResourceInputs,
}

impl ResourceReport {
    pub fn new(
        h: &Hamiltonian,
        spec: &AnsatzSpec,
        shots: Shots,
        model: &CostModel,
    ) -> Result<Self, ResourceError> {
        let r_dm = dm_cost(h, spec, shots, model)?;
        let r_qndm = qndm_cost(h, spec, shots, model)?;
        let n_shots = finite_shots(shots)?;
        Ok(Self {
            r_dm,
            r_qndm,
            regime: Regime::classify(spec.gate_count(), spec.n_qubits(), h.n_terms()),
            inputs: ResourceInputs {
                n: spec.n_qubits(),
                layers: spec.layers(),
                j: h.n_terms(),
                n_shots,
                d: spec.param_count(),
                k: spec.gate_count(),
                weights: h.terms().iter().map(|t| t.string.weight()).collect(),
            },
        })
    }

    /// `(R_DM - R_QNDM) / R_DM`.
    pub fn reduction(&self) -> f64 {
        (self.r_dm as f64 - self.r_qndm as f64) / self.r_dm as f64
    }

    /// `R_DM / R_QNDM`.
    pub fn ratio(&self) -> f64 {
        self.r_dm as f64 / self.r_qndm as f64
    }

    /// Totals multiplied by a number of optimization iterations.
    pub fn scaled(&self, iterations: u64) -> Result<Self, ResourceError> {
        Ok(Self {
            r_dm: self
                .r_dm
                .checked_mul(iterations)
                .ok_or(ResourceError::Overflow)?,
            r_qndm: self
                .r_qndm
                .checked_mul(iterations)
                .ok_or(ResourceError::Overflow)?,
            ..self.clone()
        })
    }
}

/// One report per `J`, each on a fresh random Hamiltonian seeded from `(template.seed, J)`.
pub fn scaling_sweep(
    spec: &AnsatzSpec,
    j_values: &[usize],
    shots: Shots,
    template: &RandomHamSpec,
    model: &CostModel,
) -> Result<Vec<ResourceReport>, ResourceError> {
    if j_values.is_empty() {
        return Err(ResourceError::EmptySweep);
    }
    finite_shots(shots)?;
    j_values
        .iter()
        .map(|&j| {
            let ham_spec = RandomHamSpec {
                n: spec.n_qubits(),
                j,
                seed: derive_seed(&[template.seed, j as u64]),
                ..template.clone()
            };
            let h = gen_random_hamiltonian(&ham_spec)?;
            ResourceReport::new(&h, spec, shots, model)
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "J,r_dm,r_qndm,ratio,reduction,regime";

pub fn sweep_csv(reports: &[ResourceReport]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.inputs.j,
            r.r_dm,
            r.r_qndm,
            fmt_f64(r.ratio()),
            fmt_f64(r.reduction()),
            r.regime
        ));
    }
    out
}

/// Least-squares line `y = slope x + intercept` with its coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}
