//! Pauli strings, weighted Pauli-sum Hamiltonians and their text format.
//!
//! A Hamiltonian file holds one term per line, `<coefficient> <letters>`,
//! where the letter at position `i` (left to right) acts on qubit `i`.
//! Lines starting with `#` and blank lines are ignored.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Largest qubit count a [`PauliString`] can address (masks are `u64`).
pub const MAX_QUBITS: usize = 63;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HamiltonianError {
    #[error("line {line}: malformed coefficient '{text}'")]
    BadCoefficient { line: usize, text: String },
    #[error("line {line}: coefficient is not finite")]
    NonFiniteCoefficient { line: usize },
    #[error("line {line}: illegal Pauli character '{ch}' (expected one of I, X, Y, Z)")]
    IllegalCharacter { line: usize, ch: char },
    #[error("line {line}: expected '<coefficient> <pauli-string>'")]
    MalformedLine { line: usize },
    #[error("line {line}: string has length {found}, expected {expected}")]
    InconsistentLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("Hamiltonian has no terms")]
    Empty,
    #[error("Pauli strings must have between 1 and {MAX_QUBITS} qubits, got {0}")]
    QubitCount(usize),
    #[error("Hamiltonian one-norm must be positive and finite")]
    DegenerateNorm,
    #[error("term count J must be at least 1")]
    NoTerms,
    #[error("sigma must be finite and non-negative, got {0}")]
    BadSigma(f64),
    #[error("mu must be finite, got {0}")]
    BadMu(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_char(ch: char) -> Option<Self> {
        match ch {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Pauli operators.
///
/// Besides the factor list the string caches its bit masks: `x_mask` has bit
/// `q` set when the factor on qubit `q` flips the bit (X or Y), `z_mask` when it
/// carries a sign (Z or Y). Then `P|b> = i^{#Y} (-1)^{popcount(b & z_mask)} |b ^ x_mask>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    factors: Vec<Pauli>,
    x_mask: u64,
    z_mask: u64,
}

impl PauliString {
    pub fn new(factors: Vec<Pauli>) -> Result<Self, HamiltonianError> {
        if factors.is_empty() || factors.len() > MAX_QUBITS {
            return Err(HamiltonianError::QubitCount(factors.len()));
        }
        let mut x_mask = 0u64;
        let mut z_mask = 0u64;
        for (q, p) in factors.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => x_mask |= 1 << q,
                Pauli::Y => {
                    x_mask |= 1 << q;
                    z_mask |= 1 << q;
                }
                Pauli::Z => z_mask |= 1 << q,
            }
        }
        Ok(Self {
            factors,
            x_mask,
            z_mask,
        })
    }

    pub fn identity(n: usize) -> Result<Self, HamiltonianError> {
        Self::new(vec![Pauli::I; n])
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    /// Number of Y factors.
    pub fn y_count(&self) -> u32 {
        (self.x_mask & self.z_mask).count_ones()
    }

    /// Number of X plus Y factors, i.e. qubits that need a basis change before a Z readout.
    pub fn xy_count(&self) -> u32 {
        self.x_mask.count_ones()
    }

    pub fn weight(&self) -> usize {
        (self.x_mask | self.z_mask).count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }
}

impl FromStr for PauliString {
    type Err = HamiltonianError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let factors = s
            .chars()
            .map(|ch| {
                Pauli::from_char(ch).ok_or(HamiltonianError::IllegalCharacter { line: 0, ch })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(factors)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.factors {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

pub fn weight(p: &PauliString) -> usize {
    p.weight()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coefficient: f64, string: PauliString) -> Self {
        Self {
            coefficient,
            string,
        }
    }
}

/// `H = sum_i h_i P_i` over `n` qubits. Term order is preserved as given.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    n: usize,
    terms: Vec<PauliTerm>,
}

impl Hamiltonian {
    pub fn new(terms: Vec<PauliTerm>) -> Result<Self, HamiltonianError> {
        let first = terms.first().ok_or(HamiltonianError::Empty)?;
        let n = first.string.len();
        for (i, t) in terms.iter().enumerate() {
            if t.string.len() != n {
                return Err(HamiltonianError::InconsistentLength {
                    line: i + 1,
                    expected: n,
                    found: t.string.len(),
                });
            }
            if !t.coefficient.is_finite() {
                return Err(HamiltonianError::NonFiniteCoefficient { line: i + 1 });
            }
        }
        let h = Self { n, terms };
        let norm = h.one_norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(HamiltonianError::DegenerateNorm);
        }
        Ok(h)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }
}

pub fn parse_hamiltonian(text: &str) -> Result<Hamiltonian, HamiltonianError> {
    let mut terms = Vec::new();
    let mut n = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(coeff_text), Some(letters), None) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(HamiltonianError::MalformedLine { line: line_no });
        };
        let coefficient: f64 =
            coeff_text
                .parse()
                .map_err(|_| HamiltonianError::BadCoefficient {
                    line: line_no,
                    text: coeff_text.to_string(),
                })?;
        if !coefficient.is_finite() {
            return Err(HamiltonianError::NonFiniteCoefficient { line: line_no });
        }
        let factors = letters
            .chars()
            .map(|ch| {
                Pauli::from_char(ch).ok_or(HamiltonianError::IllegalCharacter { line: line_no, ch })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let expected = *n.get_or_insert(factors.len());
        if factors.len() != expected {
            return Err(HamiltonianError::InconsistentLength {
                line: line_no,
                expected,
                found: factors.len(),
            });
        }
        terms.push(PauliTerm::new(coefficient, PauliString::new(factors)?));
    }
    Hamiltonian::new(terms)
}

/// Writes one `<coefficient> <string>` line per term, coefficients at 17 significant digits.
pub fn serialize_hamiltonian(h: &Hamiltonian) -> String {
    let mut out = String::with_capacity(h.n_terms() * (h.n_qubits() + 26));
    for t in h.terms() {
        out.push_str(&format!("{:.16e} {}\n", t.coefficient, t.string));
    }
    out
}

/// Parameters of a random Gaussian-coefficient Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomHamSpec {
    pub n: usize,
    pub j: usize,
    pub mu: f64,
    pub sigma: f64,
    pub seed: u64,
    pub allow_identity: bool,
}

impl RandomHamSpec {
    pub fn new(n: usize, j: usize, mu: f64, sigma: f64, seed: u64) -> Self {
        Self {
            n,
            j,
            mu,
            sigma,
            seed,
            allow_identity: false,
        }
    }

    pub fn validate(&self) -> Result<(), HamiltonianError> {
        if self.j < 1 {
            return Err(HamiltonianError::NoTerms);
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(HamiltonianError::BadSigma(self.sigma));
        }
        if !self.mu.is_finite() {
            return Err(HamiltonianError::BadMu(self.mu));
        }
        if self.n < 1 || self.n > MAX_QUBITS {
            return Err(HamiltonianError::QubitCount(self.n));
        }
        Ok(())
    }
}

/// Draws `J` strings i.i.d. uniform per qubit over {I, X, Y, Z} (all-identity
/// redrawn unless allowed) with Normal(mu, sigma) coefficients.
///
/// Duplicate strings between terms are kept.
pub fn gen_random_hamiltonian(spec: &RandomHamSpec) -> Result<Hamiltonian, HamiltonianError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal =
        Normal::new(spec.mu, spec.sigma).map_err(|_| HamiltonianError::BadSigma(spec.sigma))?;
    let mut terms = Vec::with_capacity(spec.j);
    while terms.len() < spec.j {
        let factors: Vec<Pauli> = (0..spec.n)
            .map(|_| Pauli::ALL[rng.random_range(0..4)])
            .collect();
        let string = PauliString::new(factors)?;
        if string.is_identity() && !spec.allow_identity {
            continue;
        }
        let coefficient = normal.sample(&mut rng);
        terms.push(PauliTerm::new(coefficient, string));
    }
    Hamiltonian::new(terms)
}
