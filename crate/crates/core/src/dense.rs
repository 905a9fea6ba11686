//! Dense matrix form of a Hamiltonian and its exact spectrum, for reference values.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::pauli::Hamiltonian;

/// Largest system the dense routines accept (`2^12 x 2^12`).
pub const MAX_DENSE_QUBITS: usize = 12;

/// Builds `H` as a `2^n x 2^n` matrix using the same bit convention as the simulator.
pub fn hamiltonian_matrix(h: &Hamiltonian) -> Option<DMatrix<Complex64>> {
    let n = h.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return None;
    }
    let dim = 1usize << n;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for t in h.terms() {
        let xm = t.string.x_mask() as usize;
        let zm = t.string.z_mask() as usize;
        let base = match t.string.y_count() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        } * t.coefficient;
        for col in 0..dim {
            let sign = if (col & zm).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            m[(col ^ xm, col)] += base * sign;
        }
    }
    Some(m)
}

/// Ascending eigenvalues of `H`, or `None` when the system is too large.
pub fn eigenvalues(h: &Hamiltonian) -> Option<Vec<f64>> {
    let m = hamiltonian_matrix(h)?;
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Some(ev)
}

/// `(lambda_min, lambda_max)` of `H`.
pub fn spectral_bounds(h: &Hamiltonian) -> Option<(f64, f64)> {
    let ev = eigenvalues(h)?;
    Some((ev[0], ev[ev.len() - 1]))
}

pub fn ground_energy(h: &Hamiltonian) -> Option<f64> {
    spectral_bounds(h).map(|(lo, _)| lo)
}
