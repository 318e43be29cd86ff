//! Lie closure of Pauli-string generators and pool-completeness certificates.
//!
//! Commutators of Pauli strings are scalar multiples of single strings, so the
//! Lie algebra generated by a set of strings is spanned by the bare strings
//! reachable through nested commutators. Scalars are dropped throughout.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliString, SymmetrySector};
use crate::pool::{all_strings, tile_pool_1d, tile_pool_2d, OperatorPool, TileSet};

pub const MAX_SECTOR_QUBITS: usize = 12;
pub const MAX_CERTIFY_QUBITS: usize = 10;

/// All non-identity strings in `sector`, lexicographic order.
pub fn sector_basis(n: usize, sector: &SymmetrySector) -> Result<Vec<PauliString>> {
    if n == 0 || n > MAX_SECTOR_QUBITS {
        return Err(Error::TooLarge {
            what: "sector enumeration",
            n,
            max: MAX_SECTOR_QUBITS,
        });
    }
    if sector.n_qubits() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: sector.n_qubits(),
        });
    }
    Ok(all_strings(n)
        .skip(1)
        .filter(|p| sector.admits_unchecked(p))
        .collect())
}

/// Smallest commutator-closed set of bare strings containing `generators`.
///
/// The generated algebra is spanned by right-nested brackets
/// `[g_1, [g_2, … [g_{k−1}, g_k]]]`, so the worklist only brackets new
/// elements against the generators.
pub fn lie_closure(generators: &[PauliString]) -> Result<BTreeSet<PauliString>> {
    let Some(first) = generators.first() else {
        return Ok(BTreeSet::new());
    };
    let n = first.n_qubits();
    if n > MAX_SECTOR_QUBITS {
        return Err(Error::TooLarge {
            what: "Lie closure",
            n,
            max: MAX_SECTOR_QUBITS,
        });
    }
    let mut gens: Vec<PauliString> = Vec::new();
    for g in generators {
        if g.n_qubits() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: g.n_qubits(),
            });
        }
        let b = g.bare();
        if !b.is_identity() && !gens.contains(&b) {
            gens.push(b);
        }
    }
    let mut seen: HashSet<PauliString> = gens.iter().copied().collect();
    let mut work: VecDeque<PauliString> = gens.iter().copied().collect();
    while let Some(a) = work.pop_front() {
        for g in &gens {
            if let Some(c) = g.commutator_unchecked(&a) {
                if seen.insert(c) {
                    work.push_back(c);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessReport {
    /// Qubits in one tile.
    pub tile_size: usize,
    /// Qubits in the tiled register.
    #[serde(rename = "L2")]
    pub l2: usize,
    pub pool_size: usize,
    pub closure_size: usize,
    pub sector_size: usize,
    pub complete: bool,
    /// Sector strings the closure does not reach.
    pub missing: Vec<PauliString>,
}

/// Compares the closure of `pool` with the full sector on its register.
pub fn certify_pool(
    pool: &OperatorPool,
    tile_size: usize,
    sector: &SymmetrySector,
) -> Result<CompletenessReport> {
    let n = pool.n_qubits;
    if n > MAX_CERTIFY_QUBITS {
        return Err(Error::TooLarge {
            what: "completeness certification",
            n,
            max: MAX_CERTIFY_QUBITS,
        });
    }
    let closure = lie_closure(&pool.operators)?;
    let basis = sector_basis(n, sector)?;
    let missing: Vec<PauliString> = basis
        .iter()
        .filter(|p| !closure.contains(p))
        .copied()
        .collect();
    Ok(CompletenessReport {
        tile_size,
        l2: n,
        pool_size: pool.len(),
        closure_size: closure.len(),
        sector_size: basis.len(),
        complete: missing.is_empty() && closure.len() == basis.len(),
        missing,
    })
}

/// Tiles a chain tile set onto `l2` qubits and certifies the closure against `sector`.
pub fn certify_tiled_completeness(
    tiles: &TileSet,
    l2: usize,
    sector: &SymmetrySector,
) -> Result<CompletenessReport> {
    if l2 > MAX_CERTIFY_QUBITS {
        return Err(Error::TooLarge {
            what: "completeness certification",
            n: l2,
            max: MAX_CERTIFY_QUBITS,
        });
    }
    let pool = tile_pool_1d(tiles, l2)?;
    certify_pool(&pool, tiles.n_qubits(), sector)
}

/// Grid counterpart of [`certify_tiled_completeness`] for block tiles.
pub fn certify_tiled_completeness_2d(
    tiles: &TileSet,
    lx: usize,
    ly: usize,
    sector: &SymmetrySector,
) -> Result<CompletenessReport> {
    if lx * ly > MAX_CERTIFY_QUBITS {
        return Err(Error::TooLarge {
            what: "completeness certification",
            n: lx * ly,
            max: MAX_CERTIFY_QUBITS,
        });
    }
    let pool = tile_pool_2d(tiles, lx, ly)?;
    certify_pool(&pool, tiles.n_qubits(), sector)
}
