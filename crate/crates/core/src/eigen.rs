//! Ground-state energies by restarted Lanczos on the matrix-free `H|v⟩`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sum::PauliSum;

pub const MAX_EXACT_QUBITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LanczosSettings {
    /// Krylov vectors kept before an explicit restart from the current Ritz vector.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosSettings {
    fn default() -> Self {
        Self {
            krylov_dim: 120,
            max_restarts: 40,
            seed: 0x5eed,
        }
    }
}

/// Lowest eigenvalue of `h` to within `tolerance` (Ritz residual bound).
pub fn exact_ground_energy(h: &PauliSum, tolerance: f64) -> Result<f64> {
    lanczos_ground_state(h, tolerance, &LanczosSettings::default()).map(|(e, _)| e)
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn lowest_ritz(alpha: &[f64], beta: &[f64]) -> (f64, DVector<f64>) {
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let idx = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    (eig.eigenvalues[idx], eig.eigenvectors.column(idx).into_owned())
}

/// Returns the ground energy and its Ritz vector.
pub fn lanczos_ground_state(
    h: &PauliSum,
    tolerance: f64,
    settings: &LanczosSettings,
) -> Result<(f64, Vec<Complex64>)> {
    let n = h.n_qubits();
    if n > MAX_EXACT_QUBITS {
        return Err(Error::TooLarge {
            what: "exact diagonalization",
            n,
            max: MAX_EXACT_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut start: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();

    let m_max = settings.krylov_dim.min(dim).max(1);
    let mut best = (f64::INFINITY, f64::INFINITY);
    let mut iterations = 0;
    let mut w = vec![Complex64::new(0.0, 0.0); dim];

    for _restart in 0..=settings.max_restarts {
        let s = norm(&start);
        start.iter_mut().for_each(|x| *x /= s);
        let mut basis: Vec<Vec<Complex64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();

        loop {
            iterations += 1;
            let k = basis.len() - 1;
            h.apply_into(&basis[k], &mut w);
            let a = dot(&basis[k], &w).re;
            alpha.push(a);
            // Full reorthogonalization, two passes.
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
                }
            }
            let b = norm(&w);
            let (theta, s) = lowest_ritz(&alpha, &beta);
            let residual = b * s[k].abs();
            if residual < best.1 || theta < best.0 {
                best = (theta, residual);
            }
            let exhausted = b <= 1e-13 * (1.0 + a.abs()) || basis.len() == dim;
            if residual <= tolerance || exhausted {
                let ritz = ritz_vector(&basis, &s);
                return Ok((theta, ritz));
            }
            if basis.len() == m_max {
                start = ritz_vector(&basis, &s);
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
    }
    Err(Error::NoConvergence {
        estimate: best.0,
        residual: best.1,
        iterations,
    })
}

fn ritz_vector(basis: &[Vec<Complex64>], s: &DVector<f64>) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); basis[0].len()];
    for (v, &c) in basis.iter().zip(s.iter()) {
        out.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
    }
    let n = norm(&out);
    out.iter_mut().for_each(|x| *x /= n);
    out
}
