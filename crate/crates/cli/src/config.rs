//! Experiment configuration: one TOML file, every default materialized on
//! output so a resolved config reproduces the run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tiled_adapt::pool::BlockOrder;
use tiled_adapt::{AdaptConfig, Geometry, LatticeSpec, NeelPattern, NeelSpec, PauliString, TileShape};

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub lattice: Option<LatticeConfig>,
    #[serde(default)]
    pub reference: ReferenceConfig,
    #[serde(default)]
    pub pool: PoolConfig,
    #[serde(default)]
    pub adapt: AdaptConfig,
    #[serde(default)]
    pub harvest: HarvestConfig,
    #[serde(default)]
    pub exact: ExactConfig,
    pub sweep: Option<SweepConfig>,
    pub certify: Option<CertifyConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryKind {
    Chain,
    Grid,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub kind: GeometryKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lx: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ly: Option<usize>,
    #[serde(default = "one")]
    pub j_xy: f64,
    pub j_z: f64,
}

fn one() -> f64 {
    1.0
}

impl LatticeConfig {
    pub fn geometry(&self) -> Result<Geometry, CliError> {
        let missing = |f: &str| CliError::Config(format!("[lattice] {:?} needs `{f}`", self.kind));
        Ok(match self.kind {
            GeometryKind::Chain => Geometry::Chain {
                len: self.len.ok_or_else(|| missing("len"))?,
            },
            GeometryKind::Grid => Geometry::Grid {
                lx: self.lx.ok_or_else(|| missing("lx"))?,
                ly: self.ly.ok_or_else(|| missing("ly"))?,
            },
        })
    }

    pub fn spec(&self) -> Result<LatticeSpec, CliError> {
        Ok(LatticeSpec::new(self.geometry()?, self.j_xy, self.j_z)?)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReferenceConfig {
    pub pattern: NeelPattern,
    pub up_first: bool,
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        Self {
            pattern: NeelPattern::IndexParity,
            up_first: true,
        }
    }
}

impl ReferenceConfig {
    pub fn neel(&self, geometry: Geometry) -> NeelSpec {
        NeelSpec {
            geometry,
            pattern: self.pattern,
            up_first: self.up_first,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolSource {
    /// Every non-identity string on the register.
    FullPauli,
    /// Tiles read from `tile_file`.
    Tiles,
    /// The strings listed in `operators`.
    Explicit,
    /// Tiles harvested on the fly at the target couplings.
    Harvest,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoolConfig {
    pub source: PoolSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tile_file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub operators: Vec<String>,
    pub block_order: BlockOrder,
}

impl Default for PoolConfig {
    fn default() -> Self {
        Self {
            source: PoolSource::Harvest,
            tile_file: None,
            operators: Vec::new(),
            block_order: BlockOrder::RowMajor,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarvestConfig {
    pub trials: usize,
    /// Tile for `source = "harvest"`: `[n]` is a chain, `[lx, ly]` a grid.
    /// Defaults to a 3-site chain for chains and 2×2 for grids.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tile: Option<Vec<usize>>,
}

impl Default for HarvestConfig {
    fn default() -> Self {
        Self {
            trials: 50,
            tile: None,
        }
    }
}

impl HarvestConfig {
    pub fn tile_geometry(&self, target: &Geometry) -> Result<Geometry, CliError> {
        match (self.tile.as_deref(), target) {
            (Some(&[len]), _) => Ok(Geometry::Chain { len }),
            (Some(&[lx, ly]), _) => Ok(Geometry::Grid { lx, ly }),
            (Some(other), _) => Err(CliError::Config(format!(
                "[harvest] tile {other:?} is not [n] or [lx, ly]"
            ))),
            (None, Geometry::Chain { .. }) => Ok(Geometry::Chain { len: 3 }),
            (None, Geometry::Grid { .. }) => Ok(Geometry::Grid { lx: 2, ly: 2 }),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExactConfig {
    pub tolerance: f64,
    /// Largest register for which `solve` and `sweep` compute `E_0`.
    pub max_qubits: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_qubits: 16,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub chains: Vec<usize>,
    pub grids: Vec<[usize; 2]>,
    pub j_z: Vec<f64>,
}

impl SweepConfig {
    pub fn geometries(&self) -> Vec<Geometry> {
        self.chains
            .iter()
            .map(|&len| Geometry::Chain { len })
            .chain(self.grids.iter().map(|&[lx, ly]| Geometry::Grid { lx, ly }))
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tile_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub operators: Vec<String>,
    /// `[n]` for a chain tile, `[rx, ry]` for a block; inferred from the
    /// operators when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<Vec<usize>>,
    #[serde(default)]
    pub l2: Vec<usize>,
    #[serde(default)]
    pub grids: Vec<[usize; 2]>,
}

pub fn parse_operators(ops: &[String]) -> Result<Vec<PauliString>, CliError> {
    ops.iter()
        .map(|s| s.parse::<PauliString>().map_err(CliError::from))
        .collect()
}

pub fn tile_shape(shape: &Option<Vec<usize>>, ops: &[PauliString]) -> Result<TileShape, CliError> {
    match shape.as_deref() {
        None => ops
            .first()
            .map(|p| TileShape::Chain { len: p.n_qubits() })
            .ok_or_else(|| CliError::Config("tile has no operators".into())),
        Some([len]) => Ok(TileShape::Chain { len: *len }),
        Some([rx, ry]) => Ok(TileShape::Block { rx: *rx, ry: *ry }),
        Some(other) => Err(CliError::Config(format!("tile shape {other:?} is not [n] or [rx, ry]"))),
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: Config = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        // Relative tile paths are relative to the config file.
        let base = path.parent().unwrap_or(Path::new("."));
        for file in [
            cfg.pool.tile_file.as_mut(),
            cfg.certify.as_mut().and_then(|c| c.tile_file.as_mut()),
        ]
        .into_iter()
        .flatten()
        {
            if file.is_relative() {
                *file = base.join(&*file);
            }
        }
        cfg.adapt.validate()?;
        Ok(cfg)
    }

    pub fn lattice(&self) -> Result<&LatticeConfig, CliError> {
        self.lattice
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [lattice] section".into()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("configs serialize")
    }
}
