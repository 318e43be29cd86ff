//! Dense statevector simulation.
//!
//! Amplitude `b` is the basis state with qubit `i` in |1⟩ iff bit `i` of `b`
//! is set. Spin up is |0⟩.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Geometry;
use crate::pauli::PauliString;
use crate::sum::PauliSum;

/// Largest register the dense simulator accepts.
pub const MAX_STATE_QUBITS: usize = 24;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `i^k` for `k` mod 4.
pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => I,
        2 => Complex64::new(-1.0, 0.0),
        _ => -I,
    }
}

/// Matrix element factor: `P|b⟩ = factor(b) |b ^ x⟩`.
#[derive(Clone, Copy)]
pub(crate) struct PauliAction {
    pub x: usize,
    pub z: usize,
    base: Complex64,
}

impl PauliAction {
    pub fn new(p: &PauliString) -> Self {
        Self {
            x: p.x_mask() as usize,
            z: p.z_mask() as usize,
            base: i_pow(p.phase_exp() as u32 + p.y_count()),
        }
    }

    #[inline]
    pub fn factor(&self, b: usize) -> Complex64 {
        if (b & self.z).count_ones() % 2 == 1 {
            -self.base
        } else {
            self.base
        }
    }

    /// `dst += scale * P src`.
    pub fn accumulate(&self, src: &[Complex64], dst: &mut [Complex64], scale: Complex64) {
        for (b, &a) in src.iter().enumerate() {
            if a.re != 0.0 || a.im != 0.0 {
                dst[b ^ self.x] += scale * self.factor(b) * a;
            }
        }
    }

    /// `⟨u|P|v⟩`.
    pub fn matrix_element(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, &a) in v.iter().enumerate() {
            acc += u[b ^ self.x].conj() * self.factor(b) * a;
        }
        acc
    }
}

/// Which sites of a lattice start spin-up in the Néel reference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeelPattern {
    /// Alternates along the row-major qubit order (`|↑↓↑↓⋯⟩` on the register).
    IndexParity,
    /// Alternates with the parity of `row + column`.
    Checkerboard,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeelSpec {
    pub geometry: Geometry,
    pub pattern: NeelPattern,
    /// Site 0 is spin-up when true.
    pub up_first: bool,
}

impl NeelSpec {
    pub fn new(geometry: Geometry) -> Self {
        Self {
            geometry,
            pattern: NeelPattern::IndexParity,
            up_first: true,
        }
    }

    pub fn with_pattern(mut self, pattern: NeelPattern) -> Self {
        self.pattern = pattern;
        self
    }

    /// Basis index of the Néel configuration.
    pub fn basis_index(&self) -> usize {
        let (lx, ly) = self.geometry.dims();
        let mut index = 0usize;
        for r in 0..ly {
            for c in 0..lx {
                let q = r * lx + c;
                let parity = match self.pattern {
                    NeelPattern::IndexParity => q % 2,
                    NeelPattern::Checkerboard => (r + c) % 2,
                };
                let down = (parity == 1) == self.up_first;
                if down {
                    index |= 1 << q;
                }
            }
        }
        index
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_STATE_QUBITS {
            return Err(Error::TooLarge {
                what: "statevector simulation",
                n: n_qubits,
                max: MAX_STATE_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidConfig(format!(
                "basis index {index} outside a {n_qubits}-qubit register"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps raw amplitudes, rescaling to unit norm.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_STATE_QUBITS || amps.len() != 1 << n_qubits {
            return Err(Error::InvalidConfig(format!(
                "{} amplitudes do not describe a {n_qubits}-qubit state",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidConfig("state has zero norm".into()));
        }
        Ok(Self {
            n_qubits,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn neel(spec: &NeelSpec) -> Result<Self> {
        Self::basis(spec.geometry.n_sites(), spec.basis_index())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_size(other.n_qubits)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub(crate) fn check_size(&self, n: usize) -> Result<()> {
        if n != self.n_qubits {
            Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: n,
            })
        } else {
            Ok(())
        }
    }

    pub fn apply_pauli(&self, p: &PauliString) -> Result<Self> {
        self.check_size(p.n_qubits())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        PauliAction::new(p).accumulate(&self.amps, &mut out, Complex64::new(1.0, 0.0));
        Ok(Self {
            n_qubits: self.n_qubits,
            amps: out,
        })
    }

    /// `e^{-iθP}|ψ⟩ = cos θ |ψ⟩ − i sin θ P|ψ⟩` for a bare generator.
    pub fn apply_rotation(&self, p: &PauliString, theta: f64) -> Result<Self> {
        let mut out = self.clone();
        out.rotate(p, theta)?;
        Ok(out)
    }

    /// In-place form of [`StateVector::apply_rotation`].
    pub fn rotate(&mut self, p: &PauliString, theta: f64) -> Result<()> {
        self.check_size(p.n_qubits())?;
        if p.phase_exp() != 0 {
            return Err(Error::NonzeroPhase(p.to_string()));
        }
        rotate_amplitudes(&mut self.amps, &PauliAction::new(p), theta);
        Ok(())
    }

    pub fn expectation(&self, h: &PauliSum) -> Result<f64> {
        self.check_size(h.n_qubits())?;
        let raw: Complex64 = h
            .terms()
            .iter()
            .map(|(c, p)| *c * PauliAction::new(p).matrix_element(&self.amps, &self.amps))
            .sum();
        debug_assert!(raw.im.abs() < 1e-9 * (1.0 + raw.re.abs()));
        Ok(raw.re)
    }

    /// `d/dθ ⟨ψ|e^{iθA} H e^{-iθA}|ψ⟩` at θ = 0 for every `A` in `pool`.
    ///
    /// Evaluated as `2 Im⟨Hψ|Aψ⟩` with one cached `H|ψ⟩`.
    pub fn pool_gradients(&self, h: &PauliSum, pool: &[PauliString]) -> Result<Vec<f64>> {
        self.check_size(h.n_qubits())?;
        for p in pool {
            self.check_size(p.n_qubits())?;
        }
        let h_psi = h.apply(&self.amps);
        Ok(pool
            .par_iter()
            .map(|a| 2.0 * PauliAction::new(a).matrix_element(&h_psi, &self.amps).im)
            .collect())
    }
}

pub(crate) fn rotate_amplitudes(amps: &mut [Complex64], action: &PauliAction, theta: f64) {
    let (s, c) = theta.sin_cos();
    let mis = Complex64::new(0.0, -s);
    if action.x == 0 {
        for (b, a) in amps.iter_mut().enumerate() {
            *a *= c + mis * action.factor(b);
        }
        return;
    }
    // Pair b with b ^ x, visiting each pair once via its lower member.
    let top = action.x.ilog2();
    for b in 0..amps.len() {
        if b >> top & 1 == 1 {
            continue;
        }
        let b2 = b ^ action.x;
        let (a1, a2) = (amps[b], amps[b2]);
        amps[b] = c * a1 + mis * action.factor(b2) * a2;
        amps[b2] = c * a2 + mis * action.factor(b) * a1;
    }
}

pub fn prepare_neel(spec: &NeelSpec) -> Result<StateVector> {
    StateVector::neel(spec)
}
