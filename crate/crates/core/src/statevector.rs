//! Dense state-vector simulator: `n` system qubits plus an optional detector qubit.
//!
//! Qubit `q` is bit `q` of the amplitude index (qubit 0 is least significant).
//! The detector, when present, sits at index `n`, the most significant bit.

use num_complex::Complex64;

use crate::pauli::{PauliString, PauliTerm};

/// Largest system size the engine will allocate.
pub const MAX_SYSTEM_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateError {
    #[error("system qubit count must be in 1..={MAX_SYSTEM_QUBITS}, got {0}")]
    QubitCount(usize),
    #[error("qubit index {index} out of range for {total} qubits")]
    QubitOutOfRange { index: usize, total: usize },
    #[error("control and target must differ (both {0})")]
    SameQubit(usize),
    #[error("operation needs a detector qubit but the state has none")]
    NoDetector,
    #[error("Pauli string has length {found}, system has {expected} qubits")]
    LengthMismatch { expected: usize, found: usize },
    #[error("amplitude vector has length {found}, expected {expected}")]
    AmplitudeCount { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Sign of the detector coupling `exp(sign * i * lambda * h * Z_a (x) P)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingSign {
    Plus,
    Minus,
}

impl CouplingSign {
    pub fn value(self) -> f64 {
        match self {
            CouplingSign::Plus => 1.0,
            CouplingSign::Minus => -1.0,
        }
    }
}

#[inline]
fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// `i^k` for `k mod 4`.
#[inline]
fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_system: usize,
    detector: bool,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// System in `|0...0>`; detector, when requested, in `(|0> + |1>)/sqrt(2)`.
    pub fn new(n: usize, with_detector: bool) -> Result<Self, StateError> {
        if !(1..=MAX_SYSTEM_QUBITS).contains(&n) {
            return Err(StateError::QubitCount(n));
        }
        let total = n + usize::from(with_detector);
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << total];
        if with_detector {
            let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            amps[0] = a;
            amps[1 << n] = a;
        } else {
            amps[0] = Complex64::new(1.0, 0.0);
        }
        Ok(Self {
            n_system: n,
            detector: with_detector,
            amps,
        })
    }

    /// Wraps raw amplitudes. The caller is responsible for normalization.
    pub fn from_amplitudes(
        n: usize,
        with_detector: bool,
        amps: Vec<Complex64>,
    ) -> Result<Self, StateError> {
        if !(1..=MAX_SYSTEM_QUBITS).contains(&n) {
            return Err(StateError::QubitCount(n));
        }
        let expected = 1 << (n + usize::from(with_detector));
        if amps.len() != expected {
            return Err(StateError::AmplitudeCount {
                expected,
                found: amps.len(),
            });
        }
        Ok(Self {
            n_system: n,
            detector: with_detector,
            amps,
        })
    }

    pub fn n_system(&self) -> usize {
        self.n_system
    }

    pub fn n_total(&self) -> usize {
        self.n_system + usize::from(self.detector)
    }

    pub fn has_detector(&self) -> bool {
        self.detector
    }

    pub fn detector_index(&self) -> Option<usize> {
        self.detector.then_some(self.n_system)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<(), StateError> {
        if q >= self.n_total() {
            return Err(StateError::QubitOutOfRange {
                index: q,
                total: self.n_total(),
            });
        }
        Ok(())
    }

    fn check_string(&self, p: &PauliString) -> Result<(), StateError> {
        if p.len() != self.n_system {
            return Err(StateError::LengthMismatch {
                expected: self.n_system,
                found: p.len(),
            });
        }
        Ok(())
    }

    /// Applies the 2x2 matrix `[[m00, m01], [m10, m11]]` to qubit `q`.
    fn apply_single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let stride = 1usize << q;
        for base in (0..self.amps.len()).step_by(stride << 1) {
            for i in base..base + stride {
                let a0 = self.amps[i];
                let a1 = self.amps[i + stride];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// `exp(-i theta A / 2) = cos(theta/2) - i sin(theta/2) A` on one qubit.
    pub fn apply_rotation(
        &mut self,
        qubit: usize,
        axis: Axis,
        theta: f64,
    ) -> Result<(), StateError> {
        self.check_qubit(qubit)?;
        let (s, c) = (theta / 2.0).sin_cos();
        let zero = Complex64::new(0.0, 0.0);
        let m = match axis {
            Axis::X => [
                [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
            ],
            Axis::Y => [
                [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
            ],
            Axis::Z => [[Complex64::new(c, -s), zero], [zero, Complex64::new(c, s)]],
        };
        self.apply_single(qubit, m);
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<(), StateError> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(StateError::SameQubit(control));
        }
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amps.swap(i, i | tbit);
            }
        }
        Ok(())
    }

    /// `<psi|P|psi>` for a string on the system qubits.
    pub fn expectation(&self, p: &PauliString) -> Result<f64, StateError> {
        self.check_string(p)?;
        let xm = p.x_mask() as usize;
        let zm = p.z_mask();
        let acc: Complex64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(x, a)| {
                let sign = if parity(x as u64 & zm) { -1.0 } else { 1.0 };
                self.amps[x ^ xm].conj() * a * sign
            })
            .sum();
        Ok((acc * i_pow(p.y_count())).re)
    }

    /// Applies `exp(sign * i * lambda * h * Z_a (x) P)` exactly.
    ///
    /// `Z_a (x) P` squares to the identity, so the exponential is
    /// `cos(alpha) + i sin(alpha) Z_a (x) P` with `alpha = sign * lambda * h`.
    pub fn apply_detector_coupling(
        &mut self,
        lambda: f64,
        term: &PauliTerm,
        sign: CouplingSign,
    ) -> Result<(), StateError> {
        if !self.detector {
            return Err(StateError::NoDetector);
        }
        self.check_string(&term.string)?;
        let alpha = sign.value() * lambda * term.coefficient;
        if alpha == 0.0 {
            return Ok(());
        }
        let (s, c) = alpha.sin_cos();
        let xm = term.string.x_mask() as usize;
        let zm = term.string.z_mask() | (1u64 << self.n_system);
        let base_phase = i_pow(term.string.y_count());
        // phase(x): M|x> = phase(x) |x ^ xm>
        let phase = |x: usize| {
            if parity(x as u64 & zm) {
                -base_phase
            } else {
                base_phase
            }
        };
        let is = Complex64::new(0.0, s);
        if xm == 0 {
            let plus = Complex64::new(c, s);
            let minus = Complex64::new(c, -s);
            for (x, a) in self.amps.iter_mut().enumerate() {
                *a *= if parity(x as u64 & zm) { minus } else { plus };
            }
        } else {
            for x in 0..self.amps.len() {
                let y = x ^ xm;
                if x < y {
                    let ax = self.amps[x];
                    let ay = self.amps[y];
                    self.amps[x] = ax * c + is * phase(y) * ay;
                    self.amps[y] = ay * c + is * phase(x) * ax;
                }
            }
        }
        Ok(())
    }

    /// Applies every term of `terms` in order.
    pub fn apply_coupling_product(
        &mut self,
        lambda: f64,
        terms: &[PauliTerm],
        sign: CouplingSign,
    ) -> Result<(), StateError> {
        for t in terms {
            self.apply_detector_coupling(lambda, t, sign)?;
        }
        Ok(())
    }

    /// Reduced density matrix of the detector (partial trace over the system).
    pub fn detector_rdm(&self) -> Result<DetectorDensityMatrix, StateError> {
        if !self.detector {
            return Err(StateError::NoDetector);
        }
        let half = 1usize << self.n_system;
        let (lo, hi) = self.amps.split_at(half);
        let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (a0, a1) in lo.iter().zip(hi) {
            rho[0][0] += a0 * a0.conj();
            rho[0][1] += a0 * a1.conj();
            rho[1][1] += a1 * a1.conj();
        }
        rho[1][0] = rho[0][1].conj();
        Ok(DetectorDensityMatrix { rho })
    }
}

pub fn init_state(n: usize, with_detector: bool) -> Result<StateVector, StateError> {
    StateVector::new(n, with_detector)
}

/// 2x2 detector density matrix in the `Z_a` eigenbasis `{|0>_D, |1>_D}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorDensityMatrix {
    pub rho: [[Complex64; 2]; 2],
}

impl DetectorDensityMatrix {
    /// `<0|rho|1>`.
    pub fn off_diagonal(&self) -> Complex64 {
        self.rho[0][1]
    }

    pub fn trace(&self) -> Complex64 {
        self.rho[0][0] + self.rho[1][1]
    }

    /// Largest deviation from Hermiticity, `max |rho_ab - conj(rho_ba)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                err = err.max((self.rho[a][b] - self.rho[b][a].conj()).norm());
            }
        }
        err
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.rho[0][0].re;
        let d = self.rho[1][1].re;
        let b = (self.rho[0][1] + self.rho[1][0].conj()) * 0.5;
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        [mid - rad, mid + rad]
    }

    /// Bloch components `(<X>, <Y>, <Z>)` of the detector.
    pub fn bloch(&self) -> (f64, f64, f64) {
        let x = 2.0 * self.rho[0][1].re;
        let y = -2.0 * self.rho[0][1].im;
        let z = (self.rho[0][0] - self.rho[1][1]).re;
        (x, y, z)
    }
}
