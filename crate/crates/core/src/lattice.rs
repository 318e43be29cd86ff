//! Open-boundary XXZ Hamiltonians on chains and rectangular grids.
//!
//! Grid site `(row, col)` maps to qubit `row * lx + col`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, SymmetrySector, MAX_QUBITS};
use crate::sum::PauliSum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Chain { len: usize },
    Grid { lx: usize, ly: usize },
}

impl Geometry {
    pub fn n_sites(&self) -> usize {
        let (lx, ly) = self.dims();
        lx * ly
    }

    /// `(lx, ly)`; a chain of length `L` is `(L, 1)`.
    pub fn dims(&self) -> (usize, usize) {
        match *self {
            Geometry::Chain { len } => (len, 1),
            Geometry::Grid { lx, ly } => (lx, ly),
        }
    }

    pub fn site(&self, row: usize, col: usize) -> usize {
        row * self.dims().0 + col
    }

    /// Nearest-neighbour bonds, row by row: right neighbour then lower neighbour.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let (lx, ly) = self.dims();
        let mut bonds = Vec::new();
        for r in 0..ly {
            for c in 0..lx {
                if c + 1 < lx {
                    bonds.push((self.site(r, c), self.site(r, c + 1)));
                }
                if r + 1 < ly {
                    bonds.push((self.site(r, c), self.site(r + 1, c)));
                }
            }
        }
        bonds
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Geometry::Chain { len } => len >= 2,
            Geometry::Grid { lx, ly } => lx >= 1 && ly >= 1 && lx * ly >= 2,
        };
        if !ok {
            return Err(Error::InvalidLattice(format!(
                "{self:?} has fewer than two sites"
            )));
        }
        if self.n_sites() > MAX_QUBITS {
            return Err(Error::TooLarge {
                what: "lattice",
                n: self.n_sites(),
                max: MAX_QUBITS,
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for Geometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Geometry::Chain { len } => write!(f, "chain{len}"),
            Geometry::Grid { lx, ly } => write!(f, "grid{lx}x{ly}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub geometry: Geometry,
    pub j_xy: f64,
    pub j_z: f64,
}

impl LatticeSpec {
    pub fn new(geometry: Geometry, j_xy: f64, j_z: f64) -> Result<Self> {
        geometry.validate()?;
        if !(j_xy.is_finite() && j_z.is_finite()) {
            return Err(Error::InvalidLattice("couplings must be finite".into()));
        }
        Ok(Self {
            geometry,
            j_xy,
            j_z,
        })
    }

    /// Chain of length `len` with `J_xy = 1`.
    pub fn chain(len: usize, j_z: f64) -> Result<Self> {
        Self::new(Geometry::Chain { len }, 1.0, j_z)
    }

    /// `lx × ly` grid with `J_xy = 1`.
    pub fn grid(lx: usize, ly: usize, j_z: f64) -> Result<Self> {
        Self::new(Geometry::Grid { lx, ly }, 1.0, j_z)
    }

    pub fn n_qubits(&self) -> usize {
        self.geometry.n_sites()
    }
}

/// `Σ_bonds J_xy (X_i X_j + Y_i Y_j) + J_z Z_i Z_j`, three terms per bond.
pub fn build_xxz(spec: &LatticeSpec) -> Result<PauliSum> {
    spec.geometry.validate()?;
    let n = spec.n_qubits();
    let mut h = PauliSum::new(n);
    for (i, j) in spec.geometry.bonds() {
        for (letter, coupling) in [(Pauli::X, spec.j_xy), (Pauli::Y, spec.j_xy), (Pauli::Z, spec.j_z)] {
            h.add_term(coupling, PauliString::from_sites(n, &[(i, letter), (j, letter)])?)?;
        }
    }
    Ok(h)
}

/// The sector conserved by XXZ ground-state preparation from a Néel state:
/// commutes with `Z⊗…⊗Z` and has an odd number of Y's.
pub fn symmetry_of(spec: &LatticeSpec) -> Result<SymmetrySector> {
    SymmetrySector::z_parity_odd_y(spec.n_qubits())
}
