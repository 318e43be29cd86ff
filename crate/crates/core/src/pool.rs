//! Operator pools: the full Pauli pool, harvested tile sets, and tiled pools.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::adapt::RunRecord;
use crate::error::{Error, Result};
use crate::lattice::Geometry;
use crate::pauli::PauliString;

pub const MAX_FULL_POOL_QUBITS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TileShape {
    Chain { len: usize },
    Block { rx: usize, ry: usize },
}

impl TileShape {
    pub fn n_qubits(&self) -> usize {
        match *self {
            TileShape::Chain { len } => len,
            TileShape::Block { rx, ry } => rx * ry,
        }
    }

    pub fn of_geometry(g: &Geometry) -> Self {
        match *g {
            Geometry::Chain { len } => TileShape::Chain { len },
            Geometry::Grid { lx, ly } => TileShape::Block { rx: lx, ry: ly },
        }
    }
}

impl fmt::Display for TileShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TileShape::Chain { len } => write!(f, "chain {len}"),
            TileShape::Block { rx, ry } => write!(f, "block {rx}x{ry}"),
        }
    }
}

/// Order in which a block tile's letters map onto its sites.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockOrder {
    #[default]
    RowMajor,
    ColumnMajor,
}

/// Generators harvested on a small instance, to be tiled across a larger one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileSet {
    pub shape: TileShape,
    pub operators: Vec<PauliString>,
}

fn dedup_first(ops: impl IntoIterator<Item = PauliString>) -> Vec<PauliString> {
    let mut seen = HashSet::new();
    ops.into_iter().filter(|p| seen.insert(*p)).collect()
}

fn validate_operators(n: usize, ops: &[PauliString]) -> Result<()> {
    for p in ops {
        if p.n_qubits() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: p.n_qubits(),
            });
        }
        if p.phase_exp() != 0 {
            return Err(Error::NonzeroPhase(p.to_string()));
        }
        if p.is_identity() {
            return Err(Error::InvalidTiles(format!("identity string {p}")));
        }
    }
    Ok(())
}

impl TileSet {
    /// Validates sizes and drops repeats (first occurrence wins).
    pub fn new(shape: TileShape, operators: Vec<PauliString>) -> Result<Self> {
        validate_operators(shape.n_qubits(), &operators)?;
        let operators = dedup_first(operators);
        if operators.is_empty() {
            return Err(Error::InvalidTiles("no operators".into()));
        }
        Ok(Self { shape, operators })
    }

    pub fn n_qubits(&self) -> usize {
        self.shape.n_qubits()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Line-oriented text: a `# shape: ...` header, then one string per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("# shape: {}\n", self.shape);
        for p in &self.operators {
            s.push_str(&p.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses [`TileSet::to_text`] output. Without a header the tile is a chain.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut shape = None;
        let mut ops = Vec::new();
        for line in text.lines().map(str::trim) {
            if let Some(h) = line.strip_prefix("# shape:") {
                shape = Some(parse_shape(h.trim())?);
            } else if !line.is_empty() && !line.starts_with('#') {
                ops.push(line.parse::<PauliString>()?);
            }
        }
        let shape = match (shape, ops.first()) {
            (Some(s), _) => s,
            (None, Some(p)) => TileShape::Chain { len: p.n_qubits() },
            (None, None) => return Err(Error::InvalidTiles("no operators".into())),
        };
        Self::new(shape, ops)
    }
}

fn parse_shape(s: &str) -> Result<TileShape> {
    let bad = || Error::InvalidTiles(format!("unrecognised tile shape {s:?}"));
    let mut it = s.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some("chain"), Some(n), None) => Ok(TileShape::Chain {
            len: n.parse().map_err(|_| bad())?,
        }),
        (Some("block"), Some(dims), None) => {
            let (a, b) = dims.split_once('x').ok_or_else(bad)?;
            Ok(TileShape::Block {
                rx: a.parse().map_err(|_| bad())?,
                ry: b.parse().map_err(|_| bad())?,
            })
        }
        _ => Err(bad()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PoolProvenance {
    FullPauli,
    Tiled {
        tile_shape: TileShape,
        tile_operators: usize,
        target: Geometry,
        block_order: BlockOrder,
    },
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorPool {
    pub n_qubits: usize,
    pub operators: Vec<PauliString>,
    pub provenance: PoolProvenance,
}

impl OperatorPool {
    /// A caller-supplied pool; repeats are dropped, identity is rejected.
    pub fn explicit(n_qubits: usize, operators: Vec<PauliString>) -> Result<Self> {
        validate_operators(n_qubits, &operators)?;
        Ok(Self {
            n_qubits,
            operators: dedup_first(operators),
            provenance: PoolProvenance::Explicit,
        })
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn to_text(&self) -> String {
        self.operators.iter().map(|p| format!("{p}\n")).collect()
    }
}

/// All `4^n − 1` non-identity strings in lexicographic order.
pub fn full_pauli_pool(n: usize) -> Result<OperatorPool> {
    if n == 0 || n > MAX_FULL_POOL_QUBITS {
        return Err(Error::TooLarge {
            what: "full Pauli pool",
            n,
            max: MAX_FULL_POOL_QUBITS,
        });
    }
    Ok(OperatorPool {
        n_qubits: n,
        operators: all_strings(n).skip(1).collect(),
        provenance: PoolProvenance::FullPauli,
    })
}

/// Every string on `n` qubits (identity first), lexicographic with I < X < Y < Z.
pub(crate) fn all_strings(n: usize) -> impl Iterator<Item = PauliString> {
    (0u64..1 << (2 * n)).map(move |r| {
        let (mut x, mut z) = (0u64, 0u64);
        for q in 0..n {
            // qubit 0 is the most significant base-4 digit
            let digit = (r >> (2 * (n - 1 - q))) & 3;
            let (xb, zb) = match digit {
                0 => (0, 0),
                1 => (1, 0),
                2 => (1, 1),
                _ => (0, 1),
            };
            x |= xb << q;
            z |= zb << q;
        }
        PauliString::from_masks(n, x, z).expect("masks fit the register")
    })
}

/// Embeds each chain-tile operator at offsets `0..=len − tile_len`.
pub fn tile_pool_1d(tiles: &TileSet, len: usize) -> Result<OperatorPool> {
    let TileShape::Chain { len: tile_len } = tiles.shape else {
        return Err(Error::InvalidTiles(format!(
            "1D tiling needs a chain tile, got {}",
            tiles.shape
        )));
    };
    if len < tile_len {
        return Err(Error::InvalidTiles(format!(
            "target chain of {len} is shorter than the {tile_len}-site tile"
        )));
    }
    let mut ops = Vec::with_capacity(tiles.len() * (len - tile_len + 1));
    for p in &tiles.operators {
        for offset in 0..=len - tile_len {
            ops.push(p.embed(len, offset)?);
        }
    }
    Ok(OperatorPool {
        n_qubits: len,
        operators: dedup_first(ops),
        provenance: PoolProvenance::Tiled {
            tile_shape: tiles.shape,
            tile_operators: tiles.len(),
            target: Geometry::Chain { len },
            block_order: BlockOrder::RowMajor,
        },
    })
}

/// Places a block tile at every anchor of an `lx × ly` grid (row-major within the block).
pub fn tile_pool_2d(tiles: &TileSet, lx: usize, ly: usize) -> Result<OperatorPool> {
    tile_pool_2d_with_order(tiles, lx, ly, BlockOrder::RowMajor)
}

pub fn tile_pool_2d_with_order(
    tiles: &TileSet,
    lx: usize,
    ly: usize,
    order: BlockOrder,
) -> Result<OperatorPool> {
    let TileShape::Block { rx, ry } = tiles.shape else {
        return Err(Error::InvalidTiles(format!(
            "2D tiling needs a block tile, got {}",
            tiles.shape
        )));
    };
    if lx < rx || ly < ry {
        return Err(Error::InvalidTiles(format!(
            "{lx}x{ly} grid cannot hold a {rx}x{ry} tile"
        )));
    }
    let target = Geometry::Grid { lx, ly };
    target.validate()?;
    let n = target.n_sites();
    let block_sites = |r0: usize, c0: usize| -> Vec<usize> {
        match order {
            BlockOrder::RowMajor => (0..ry)
                .flat_map(|dr| (0..rx).map(move |dc| (dr, dc)))
                .map(|(dr, dc)| target.site(r0 + dr, c0 + dc))
                .collect(),
            BlockOrder::ColumnMajor => (0..rx)
                .flat_map(|dc| (0..ry).map(move |dr| (dr, dc)))
                .map(|(dr, dc)| target.site(r0 + dr, c0 + dc))
                .collect(),
        }
    };
    let mut ops = Vec::new();
    for p in &tiles.operators {
        for r0 in 0..=ly - ry {
            for c0 in 0..=lx - rx {
                ops.push(p.permute_support(n, &block_sites(r0, c0))?);
            }
        }
    }
    Ok(OperatorPool {
        n_qubits: n,
        operators: dedup_first(ops),
        provenance: PoolProvenance::Tiled {
            tile_shape: tiles.shape,
            tile_operators: tiles.len(),
            target,
            block_order: order,
        },
    })
}

/// Union of the generators chosen across `records`, in first-occurrence order.
///
/// Records must share a register size and lattice geometry. Records without a
/// lattice are treated as chains.
pub fn harvest_tiles(records: &[RunRecord]) -> Result<TileSet> {
    let first = records
        .first()
        .ok_or_else(|| Error::InconsistentRecords("no records".into()))?;
    let geometry_of = |r: &RunRecord| {
        r.lattice
            .map(|l| l.geometry)
            .unwrap_or(Geometry::Chain { len: r.n_qubits })
    };
    let geometry = geometry_of(first);
    for r in records {
        if r.n_qubits != first.n_qubits || geometry_of(r) != geometry {
            return Err(Error::InconsistentRecords(format!(
                "{} on {} qubits differs from {} on {} qubits",
                geometry_of(r),
                r.n_qubits,
                geometry,
                first.n_qubits
            )));
        }
    }
    let ops = records
        .iter()
        .flat_map(|r| r.steps.iter().map(|s| s.operator))
        .collect();
    TileSet::new(TileShape::of_geometry(&geometry), ops)
}
