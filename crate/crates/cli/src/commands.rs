use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use tiled_adapt::adapt::trial_seed;
use tiled_adapt::closure::certify_pool;
use tiled_adapt::pool::tile_pool_2d_with_order;
use tiled_adapt::{
    adapt_run, adapt_trials, build_xxz, certify_tiled_completeness, certify_tiled_completeness_2d,
    exact_ground_energy, full_pauli_pool, harvest_tiles, prepare_neel, tile_pool_1d, trace_csv,
    Geometry, LatticeSpec, OperatorPool, RunRecord, SymmetrySector, TileSet, TileShape,
};

use crate::config::{parse_operators, tile_shape, Config, PoolSource};
use crate::{CliError, RunArgs};

/// Column order of `sweep.csv`.
pub const SWEEP_CSV_HEADER: [&str; 11] = [
    "geometry",
    "n_sites",
    "j_z",
    "steps",
    "parameters",
    "converged",
    "final_energy",
    "exact_energy",
    "relative_error",
    "wall_time_s",
    "error",
];

fn load(args: &RunArgs) -> Result<Config, CliError> {
    let mut cfg = Config::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.adapt.seed = seed;
    }
    if let Some(trials) = args.trials {
        if trials == 0 {
            return Err(CliError::Config("--trials must be at least 1".into()));
        }
        cfg.harvest.trials = trials;
    }
    fs::create_dir_all(&args.out)?;
    fs::write(args.out.join("resolved_config.toml"), cfg.to_toml())?;
    Ok(cfg)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("records serialize");
    fs::write(path, text + "\n")?;
    Ok(())
}

fn harvest_records(cfg: &Config, spec: &LatticeSpec) -> Result<Vec<RunRecord>, CliError> {
    let h = build_xxz(spec)?;
    let pool = full_pauli_pool(spec.n_qubits())?;
    let reference = prepare_neel(&cfg.reference.neel(spec.geometry))?;
    let mut records = adapt_trials(&h, &pool, &reference, &cfg.adapt, cfg.harvest.trials)?;
    for r in &mut records {
        r.lattice = Some(*spec);
    }
    Ok(records)
}

fn tiles_text(tiles: &TileSet, spec: &LatticeSpec, cfg: &Config) -> String {
    format!(
        "# harvested on {} with j_xy = {}, j_z = {}, {} trials, seed {}\n{}",
        spec.geometry,
        spec.j_xy,
        spec.j_z,
        cfg.harvest.trials,
        cfg.adapt.seed,
        tiles.to_text()
    )
}

fn tile_onto(tiles: &TileSet, target: &Geometry, cfg: &Config) -> Result<OperatorPool, CliError> {
    Ok(match (tiles.shape, *target) {
        (TileShape::Chain { .. }, Geometry::Chain { len }) => tile_pool_1d(tiles, len)?,
        (TileShape::Block { .. }, Geometry::Grid { lx, ly }) => {
            tile_pool_2d_with_order(tiles, lx, ly, cfg.pool.block_order)?
        }
        (shape, target) => {
            return Err(CliError::Config(format!("cannot tile a {shape} tile onto {target}")))
        }
    })
}

fn tiles_for(cfg: &Config, spec: &LatticeSpec) -> Result<TileSet, CliError> {
    match cfg.pool.source {
        PoolSource::Tiles => {
            let path = cfg
                .pool
                .tile_file
                .as_ref()
                .ok_or_else(|| CliError::Config("source = \"tiles\" needs [pool] tile_file".into()))?;
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            Ok(TileSet::from_text(&text)?)
        }
        PoolSource::Harvest => {
            let tile = cfg.harvest.tile_geometry(&spec.geometry)?;
            let tile_spec = LatticeSpec::new(tile, spec.j_xy, spec.j_z)?;
            Ok(harvest_tiles(&harvest_records(cfg, &tile_spec)?)?)
        }
        _ => unreachable!("only tile sources carry tiles"),
    }
}

fn pool_for(cfg: &Config, spec: &LatticeSpec, tiles: Option<&TileSet>) -> Result<OperatorPool, CliError> {
    let n = spec.n_qubits();
    match cfg.pool.source {
        PoolSource::FullPauli => Ok(full_pauli_pool(n)?),
        PoolSource::Explicit => Ok(OperatorPool::explicit(n, parse_operators(&cfg.pool.operators)?)?),
        PoolSource::Tiles | PoolSource::Harvest => {
            tile_onto(tiles.expect("tile sources load tiles"), &spec.geometry, cfg)
        }
    }
}

fn needs_tiles(cfg: &Config) -> bool {
    matches!(cfg.pool.source, PoolSource::Tiles | PoolSource::Harvest)
}

/// Runs ADAPT on one lattice and attaches the exact energy when affordable.
fn solve_one(cfg: &Config, spec: &LatticeSpec, pool: &OperatorPool, seed: u64) -> Result<RunRecord, CliError> {
    let h = build_xxz(spec)?;
    let reference = prepare_neel(&cfg.reference.neel(spec.geometry))?;
    let adapt = tiled_adapt::AdaptConfig { seed, ..cfg.adapt };
    let mut record = adapt_run(&h, pool, &reference, &adapt)?;
    record.lattice = Some(*spec);
    if spec.n_qubits() <= cfg.exact.max_qubits {
        record.set_exact_energy(exact_ground_energy(&h, cfg.exact.tolerance)?);
    }
    Ok(record)
}

fn run_failure(record: &RunRecord) -> Option<String> {
    match (&record.failure, record.converged) {
        (Some(f), _) => Some(f.clone()),
        (None, false) => Some(format!(
            "not converged after {} steps (gradient {:.3e})",
            record.steps.len(),
            record.final_gradient
        )),
        _ => None,
    }
}

pub fn harvest(args: &RunArgs) -> Result<(), CliError> {
    let cfg = load(args)?;
    let spec = cfg.lattice()?.spec()?;
    let records = harvest_records(&cfg, &spec)?;
    let tiles = harvest_tiles(&records)?;

    let trial_dir = args.out.join("trials");
    fs::create_dir_all(&trial_dir)?;
    for (i, r) in records.iter().enumerate() {
        write_json(
            &trial_dir.join(format!("trial_{i:03}.json")),
            &json!({ "config": &cfg, "trial": i, "record": r }),
        )?;
    }
    fs::write(args.out.join("tiles.txt"), tiles_text(&tiles, &spec, &cfg))?;
    let mut steps: BTreeMap<usize, usize> = BTreeMap::new();
    for r in &records {
        *steps.entry(r.steps.len()).or_default() += 1;
    }
    write_json(
        &args.out.join("harvest.json"),
        &json!({
            "config": &cfg,
            "tiles": &tiles,
            "trials": records.len(),
            "step_histogram": &steps,
        }),
    )?;

    println!(
        "harvested {} operators on {} from {} trials (steps: {})",
        tiles.len(),
        spec.geometry,
        records.len(),
        steps
            .iter()
            .map(|(s, c)| format!("{s}×{c}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!(
        "{}",
        tiles.operators.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
    );
    match records.iter().find_map(run_failure) {
        Some(f) => Err(CliError::Numerical(f)),
        None => Ok(()),
    }
}

pub fn solve(args: &RunArgs) -> Result<(), CliError> {
    let cfg = load(args)?;
    let spec = cfg.lattice()?.spec()?;
    let tiles = if needs_tiles(&cfg) { Some(tiles_for(&cfg, &spec)?) } else { None };
    if let (Some(t), PoolSource::Harvest) = (&tiles, cfg.pool.source) {
        let tile = cfg.harvest.tile_geometry(&spec.geometry)?;
        let tile_spec = LatticeSpec::new(tile, spec.j_xy, spec.j_z)?;
        fs::write(args.out.join("tiles.txt"), tiles_text(t, &tile_spec, &cfg))?;
    }
    let pool = pool_for(&cfg, &spec, tiles.as_ref())?;
    let record = solve_one(&cfg, &spec, &pool, cfg.adapt.seed)?;

    write_json(&args.out.join("run.json"), &json!({ "config": &cfg, "record": &record }))?;
    fs::write(args.out.join("trace.csv"), trace_csv(&record))?;

    println!(
        "{}: {} steps over a {}-operator pool, E = {:.12}",
        spec.geometry,
        record.steps.len(),
        pool.len(),
        record.final_energy
    );
    if let (Some(e0), Some(rel)) = (record.exact_energy, record.relative_error) {
        println!("E0 = {e0:.12}, relative error {rel:.3e}");
    }
    match run_failure(&record) {
        Some(f) => Err(CliError::Numerical(f)),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct SweepRow {
    geometry: String,
    n_sites: usize,
    j_z: f64,
    steps: Option<usize>,
    parameters: Option<usize>,
    converged: bool,
    final_energy: Option<f64>,
    exact_energy: Option<f64>,
    relative_error: Option<f64>,
    wall_time_s: Option<f64>,
    error: String,
}

pub fn sweep(args: &RunArgs) -> Result<(), CliError> {
    let cfg = load(args)?;
    let sweep = cfg
        .sweep
        .clone()
        .ok_or_else(|| CliError::Config("missing [sweep] section".into()))?;
    let j_xy = cfg.lattice.as_ref().map_or(1.0, |l| l.j_xy);

    let mut cells = Vec::new();
    for &j_z in &sweep.j_z {
        for g in sweep.geometries() {
            cells.push(LatticeSpec::new(g, j_xy, j_z)?);
        }
    }
    // Tiles are shared by every cell with the same tile shape and couplings.
    let mut tile_cache: BTreeMap<String, TileSet> = BTreeMap::new();
    if needs_tiles(&cfg) {
        for spec in &cells {
            let key = tile_key(&cfg, spec)?;
            if !tile_cache.contains_key(&key) {
                tile_cache.insert(key, tiles_for(&cfg, spec)?);
            }
        }
    }

    let results: Vec<Result<RunRecord, CliError>> = cells
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let tiles = match needs_tiles(&cfg) {
                true => Some(&tile_cache[&tile_key(&cfg, spec)?]),
                false => None,
            };
            let pool = pool_for(&cfg, spec, tiles)?;
            solve_one(&cfg, spec, &pool, trial_seed(cfg.adapt.seed, i as u64))
        })
        .collect();

    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut failures = 0;
    for (spec, result) in cells.iter().zip(results) {
        let row = match &result {
            Ok(r) => SweepRow {
                geometry: spec.geometry.to_string(),
                n_sites: spec.n_qubits(),
                j_z: spec.j_z,
                steps: Some(r.steps.len()),
                parameters: Some(r.n_parameters()),
                converged: r.converged,
                final_energy: Some(r.final_energy),
                exact_energy: r.exact_energy,
                relative_error: r.relative_error,
                wall_time_s: Some(r.wall_time_s),
                error: run_failure(r).unwrap_or_default(),
            },
            Err(e) => SweepRow {
                geometry: spec.geometry.to_string(),
                n_sites: spec.n_qubits(),
                j_z: spec.j_z,
                steps: None,
                parameters: None,
                converged: false,
                final_energy: None,
                exact_energy: None,
                relative_error: None,
                wall_time_s: None,
                error: e.to_string(),
            },
        };
        if !row.error.is_empty() {
            failures += 1;
        }
        rows.push(row);
        records.push(result.ok());
    }

    let mut csv = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(args.out.join("sweep.csv"))
        .map_err(|e| CliError::Config(e.to_string()))?;
    csv.write_record(SWEEP_CSV_HEADER)
        .and_then(|_| rows.iter().try_for_each(|r| csv.serialize(r)))
        .and_then(|_| csv.flush().map_err(Into::into))
        .map_err(|e| CliError::Config(e.to_string()))?;
    write_json(
        &args.out.join("sweep.json"),
        &json!({ "config": &cfg, "records": &records }),
    )?;

    for r in &rows {
        println!(
            "{:>10} J_z={:<5} steps={:<4} rel_err={}{}",
            r.geometry,
            r.j_z,
            r.steps.map_or("-".into(), |s| s.to_string()),
            r.relative_error.map_or("-".into(), |e| format!("{e:.3e}")),
            if r.error.is_empty() { String::new() } else { format!("  [{}]", r.error) }
        );
    }
    if failures > 0 {
        return Err(CliError::Numerical(format!("{failures} sweep cells failed")));
    }
    Ok(())
}

fn tile_key(cfg: &Config, spec: &LatticeSpec) -> Result<String, CliError> {
    Ok(match cfg.pool.source {
        PoolSource::Harvest => format!(
            "{} {} {}",
            cfg.harvest.tile_geometry(&spec.geometry)?,
            spec.j_xy,
            spec.j_z
        ),
        _ => "file".into(),
    })
}

pub fn certify(args: &RunArgs) -> Result<(), CliError> {
    let cfg = load(args)?;
    let c = cfg
        .certify
        .clone()
        .ok_or_else(|| CliError::Config("missing [certify] section".into()))?;
    let tiles = match &c.tile_file {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            TileSet::from_text(&text)?
        }
        None => {
            let ops = parse_operators(&c.operators)?;
            TileSet::new(tile_shape(&c.shape, &ops)?, ops)?
        }
    };
    let n_tile = tiles.n_qubits();

    let mut reports = vec![certify_pool(
        &OperatorPool::explicit(n_tile, tiles.operators.clone())?,
        n_tile,
        &SymmetrySector::z_parity_odd_y(n_tile)?,
    )?];
    match tiles.shape {
        TileShape::Chain { .. } => {
            for &l2 in &c.l2 {
                reports.push(certify_tiled_completeness(&tiles, l2, &SymmetrySector::z_parity_odd_y(l2)?)?);
            }
            if !c.grids.is_empty() {
                return Err(CliError::Config("grid certification needs a block tile".into()));
            }
        }
        TileShape::Block { .. } => {
            for &[lx, ly] in &c.grids {
                let sector = SymmetrySector::z_parity_odd_y(lx * ly)?;
                reports.push(certify_tiled_completeness_2d(&tiles, lx, ly, &sector)?);
            }
            if !c.l2.is_empty() {
                return Err(CliError::Config("chain certification needs a chain tile".into()));
            }
        }
    }

    write_json(&args.out.join("certify.json"), &json!({ "config": &cfg, "reports": &reports }))?;
    for r in &reports {
        println!(
            "L2={:<3} pool={:<5} closure={:<6} sector={:<6} {}",
            r.l2,
            r.pool_size,
            r.closure_size,
            r.sector_size,
            if r.complete { "complete" } else { "INCOMPLETE" }
        );
    }
    Ok(())
}

pub fn exact(args: &RunArgs) -> Result<(), CliError> {
    let cfg = load(args)?;
    let spec = cfg.lattice()?.spec()?;
    let h = build_xxz(&spec)?;
    let e0 = exact_ground_energy(&h, cfg.exact.tolerance)?;
    write_json(
        &args.out.join("exact.json"),
        &json!({
            "config": &cfg,
            "lattice": &spec,
            "n_qubits": spec.n_qubits(),
            "exact_energy": e0,
        }),
    )?;
    println!("{}: E0 = {e0:.12}", spec.geometry);
    Ok(())
}
