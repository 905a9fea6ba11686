//! Plain gradient descent with independent random restarts.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ansatz::{self, AnsatzError, AnsatzSpec, ParamVector};
use crate::gradients::{self, GradientError, GradientEstimate, Method, QndmConfig, ShotConfig};
use crate::pauli::Hamiltonian;
use crate::seeding::derive_seed;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OptimizerError {
    #[error("invalid optimizer config: {0}")]
    InvalidConfig(String),
    #[error("parameter vector has length {theta}, gradient has length {grad}")]
    LengthMismatch { theta: usize, grad: usize },
    #[error(transparent)]
    Gradient(#[from] GradientError),
}

impl From<AnsatzError> for OptimizerError {
    fn from(e: AnsatzError) -> Self {
        OptimizerError::Gradient(GradientError::Ansatz(e))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub eta: f64,
    pub max_iterations: usize,
    pub method: Method,
    /// Shot budget per measured setting. The seed field is ignored; streams derive from `master_seed`.
    pub shots: ShotConfig,
    /// Coupling and shift. The shift is used by every method.
    pub qndm: QndmConfig,
    pub restarts: usize,
    pub master_seed: u64,
    /// Give every restart the seed of restart 0 (identical runs).
    pub shared_restart_seed: bool,
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<(), OptimizerError> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(OptimizerError::InvalidConfig(format!(
                "eta must be > 0, got {}",
                self.eta
            )));
        }
        if self.max_iterations < 1 {
            return Err(OptimizerError::InvalidConfig(
                "max_iterations must be >= 1".into(),
            ));
        }
        if self.restarts < 1 {
            return Err(OptimizerError::InvalidConfig(
                "restarts must be >= 1".into(),
            ));
        }
        self.shots.validate()?;
        match self.method {
            Method::Qndm => self.qndm.validate()?,
            _ => {
                if self.qndm.shift.sin().abs() < 1e-12 || !self.qndm.shift.is_finite() {
                    return Err(GradientError::DegenerateShift(self.qndm.shift).into());
                }
            }
        }
        Ok(())
    }
}

/// `theta - eta * grad`.
pub fn gd_step(
    theta: &ParamVector,
    grad: &GradientEstimate,
    eta: f64,
) -> Result<ParamVector, OptimizerError> {
    if theta.len() != grad.values.len() {
        return Err(OptimizerError::LengthMismatch {
            theta: theta.len(),
            grad: grad.values.len(),
        });
    }
    Ok(ParamVector(
        theta
            .0
            .iter()
            .zip(&grad.values)
            .map(|(t, g)| t - eta * g)
            .collect(),
    ))
}

fn digest(theta: &ParamVector) -> u64 {
    let bits: Vec<u64> = theta.0.iter().map(|v| v.to_bits()).collect();
    derive_seed(&bits)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartTrace {
    pub restart: usize,
    /// Exact energy at the initial point and after every step.
    pub energies: Vec<f64>,
    /// Hash of the bit patterns of theta at each recorded point.
    pub theta_digests: Vec<u64>,
    pub initial_theta: ParamVector,
    pub final_theta: ParamVector,
    pub circuits: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub method: Method,
    pub restarts: Vec<RestartTrace>,
    pub mean: Vec<f64>,
    /// Population standard deviation across restarts.
    pub std: Vec<f64>,
    pub total_circuits: u64,
}

impl ConvergenceTrace {
    pub fn final_mean(&self) -> f64 {
        *self
            .mean
            .last()
            .expect("trace has at least the initial point")
    }

    pub fn final_std(&self) -> f64 {
        *self
            .std
            .last()
            .expect("trace has at least the initial point")
    }
}

/// Per-iteration mean and population std over equally long energy sequences.
pub fn aggregate(traces: &[RestartTrace]) -> (Vec<f64>, Vec<f64>) {
    let len = traces.iter().map(|t| t.energies.len()).min().unwrap_or(0);
    let r = traces.len() as f64;
    let mut mean = Vec::with_capacity(len);
    let mut std = Vec::with_capacity(len);
    for i in 0..len {
        // shifted by the first restart so identical runs give exactly zero spread
        let x0 = traces[0].energies[i];
        let dm = traces.iter().map(|t| t.energies[i] - x0).sum::<f64>() / r;
        let v = traces
            .iter()
            .map(|t| (t.energies[i] - x0 - dm).powi(2))
            .sum::<f64>()
            / r;
        mean.push(x0 + dm);
        std.push(v.sqrt());
    }
    (mean, std)
}

/// Uniform draw from `[0, 2 pi)^d`.
pub fn initial_point(spec: &AnsatzSpec, master_seed: u64, restart: u64) -> ParamVector {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[master_seed, restart]));
    ParamVector(
        (0..spec.param_count())
            .map(|_| rng.random_range(0.0..TAU))
            .collect(),
    )
}

/// Runs one restart from `theta0`. `stream` keys the shot-noise streams.
pub fn run_from(
    h: &Hamiltonian,
    spec: &AnsatzSpec,
    config: &OptimizerConfig,
    theta0: ParamVector,
    stream: u64,
) -> Result<(Vec<f64>, Vec<u64>, ParamVector, u64), OptimizerError> {
    let mut theta = theta0;
    let mut energies = Vec::with_capacity(config.max_iterations + 1);
    let mut digests = Vec::with_capacity(config.max_iterations + 1);
    energies.push(ansatz::cost(h, spec, &theta.0)?);
    digests.push(digest(&theta));
    let mut circuits = 0u64;
    for it in 0..config.max_iterations {
        let shots = config
            .shots
            .with_seed(derive_seed(&[config.master_seed, stream, it as u64]));
        let grad = gradients::estimate(config.method, h, spec, &theta.0, &config.qndm, &shots)?;
        circuits += grad.circuits_executed;
        theta = gd_step(&theta, &grad, config.eta)?;
        energies.push(ansatz::cost(h, spec, &theta.0)?);
        digests.push(digest(&theta));
    }
    Ok((energies, digests, theta, circuits))
}

pub fn run_optimization(
    h: &Hamiltonian,
    spec: &AnsatzSpec,
    config: &OptimizerConfig,
) -> Result<ConvergenceTrace, OptimizerError> {
    config.validate()?;
    if h.n_qubits() != spec.n_qubits() {
        return Err(AnsatzError::QubitMismatch {
            ham: h.n_qubits(),
            ansatz: spec.n_qubits(),
        }
        .into());
    }
    if config.method == Method::Qndm && !config.qndm.is_valid_for(h) {
        log::warn!(
            "lambda * sum|h_i| = {:.3} >= 1 (outside the linear readout regime)",
            config.qndm.lambda * h.one_norm()
        );
    }
    let restarts = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let stream = if config.shared_restart_seed {
                0
            } else {
                r as u64
            };
            let theta0 = initial_point(spec, config.master_seed, stream);
            let (energies, theta_digests, final_theta, circuits) =
                run_from(h, spec, config, theta0.clone(), stream)?;
            Ok(RestartTrace {
                restart: r,
                energies,
                theta_digests,
                initial_theta: theta0,
                final_theta,
                circuits,
            })
        })
        .collect::<Result<Vec<_>, OptimizerError>>()?;
    let (mean, std) = aggregate(&restarts);
    Ok(ConvergenceTrace {
        method: config.method,
        total_circuits: restarts.iter().map(|t| t.circuits).sum(),
        restarts,
        mean,
        std,
    })
}
