//! Python bindings: Pauli strings, XXZ lattices, statevectors, pools, Lie
//! closures and ADAPT runs. Run records and reports cross the boundary as
//! JSON text.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use tiled_adapt::pool::{tile_pool_2d, OperatorPool, TileSet, TileShape};
use tiled_adapt::{self as core, AdaptConfig, Error, Geometry, LatticeSpec, NeelSpec, TieBreak};

fn err(e: Error) -> PyErr {
    match e {
        Error::NoConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse(text: &str) -> PyResult<core::PauliString> {
    text.parse().map_err(err)
}

fn parse_all(texts: &[String]) -> PyResult<Vec<core::PauliString>> {
    texts.iter().map(|t| parse(t)).collect()
}

fn texts<'a>(ops: impl IntoIterator<Item = &'a core::PauliString>) -> Vec<String> {
    ops.into_iter().map(|p| p.to_string()).collect()
}

#[pyclass(name = "PauliString", module = "tiled_adapt", skip_from_py_object, frozen, eq, hash)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PyPauliString(core::PauliString);

#[pymethods]
impl PyPauliString {
    /// Parses e.g. `"XYZ"`, `"-iXZ"`; qubit 0 is the leftmost letter.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse(text).map(Self)
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.0.n_qubits()
    }

    #[getter]
    fn phase_exp(&self) -> u8 {
        self.0.phase_exp()
    }

    fn weight(&self) -> u32 {
        self.0.weight()
    }

    fn y_count(&self) -> u32 {
        self.0.y_count()
    }

    fn multiply(&self, other: &Self) -> PyResult<Self> {
        self.0.multiply(&other.0).map(Self).map_err(err)
    }

    fn commutes(&self, other: &Self) -> PyResult<bool> {
        self.0.commutes(&other.0).map_err(err)
    }

    /// Bare string proportional to `[self, other]`, or `None`.
    fn commutator(&self, other: &Self) -> PyResult<Option<Self>> {
        Ok(self.0.commutator(&other.0).map_err(err)?.map(Self))
    }

    fn embed(&self, n_total: usize, offset: usize) -> PyResult<Self> {
        self.0.embed(n_total, offset).map(Self).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PauliString('{}')", self.0)
    }
}

/// An XXZ lattice with `J_xy (XX + YY) + J_z ZZ` on every bond.
#[pyclass(name = "Lattice", module = "tiled_adapt", skip_from_py_object, frozen)]
#[derive(Clone)]
struct PyLattice(LatticeSpec);

#[pymethods]
impl PyLattice {
    #[staticmethod]
    #[pyo3(signature = (length, j_z, j_xy = 1.0))]
    fn chain(length: usize, j_z: f64, j_xy: f64) -> PyResult<Self> {
        LatticeSpec::new(Geometry::Chain { len: length }, j_xy, j_z)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (lx, ly, j_z, j_xy = 1.0))]
    fn grid(lx: usize, ly: usize, j_z: f64, j_xy: f64) -> PyResult<Self> {
        LatticeSpec::new(Geometry::Grid { lx, ly }, j_xy, j_z)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.0.n_qubits()
    }

    /// Hamiltonian terms as `(coefficient, string)` pairs.
    fn terms(&self) -> PyResult<Vec<(f64, String)>> {
        let h = core::build_xxz(&self.0).map_err(err)?;
        Ok(h.terms().iter().map(|(c, p)| (*c, p.to_string())).collect())
    }

    /// Néel reference `|↑↓↑↓…⟩` along the qubit order.
    fn neel(&self) -> PyResult<PyStateVector> {
        core::prepare_neel(&NeelSpec::new(self.0.geometry))
            .map(PyStateVector)
            .map_err(err)
    }

    #[pyo3(signature = (tolerance = 1e-10))]
    fn exact_ground_energy(&self, tolerance: f64) -> PyResult<f64> {
        let h = core::build_xxz(&self.0).map_err(err)?;
        core::exact_ground_energy(&h, tolerance).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Lattice({}, j_xy={}, j_z={})", self.0.geometry, self.0.j_xy, self.0.j_z)
    }
}

#[pyclass(name = "StateVector", module = "tiled_adapt", skip_from_py_object)]
#[derive(Clone)]
struct PyStateVector(core::StateVector);

#[pymethods]
impl PyStateVector {
    #[staticmethod]
    fn basis(n_qubits: usize, index: usize) -> PyResult<Self> {
        core::StateVector::basis(n_qubits, index).map(Self).map_err(err)
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.0.n_qubits()
    }

    fn amplitudes(&self) -> Vec<(f64, f64)> {
        self.0.amplitudes().iter().map(|a| (a.re, a.im)).collect()
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn apply_pauli(&self, p: &PyPauliString) -> PyResult<Self> {
        self.0.apply_pauli(&p.0).map(Self).map_err(err)
    }

    /// `e^{-iθP}|ψ⟩`.
    fn apply_rotation(&self, p: &PyPauliString, theta: f64) -> PyResult<Self> {
        self.0.apply_rotation(&p.0, theta).map(Self).map_err(err)
    }

    fn energy(&self, lattice: &PyLattice) -> PyResult<f64> {
        let h = core::build_xxz(&lattice.0).map_err(err)?;
        self.0.expectation(&h).map_err(err)
    }

    /// `d/dθ ⟨e^{iθA} H e^{-iθA}⟩` at θ = 0 for each pool string.
    fn pool_gradients(&self, lattice: &PyLattice, pool: Vec<String>) -> PyResult<Vec<f64>> {
        let h = core::build_xxz(&lattice.0).map_err(err)?;
        self.0.pool_gradients(&h, &parse_all(&pool)?).map_err(err)
    }
}

#[pyfunction]
fn full_pauli_pool(n: usize) -> PyResult<Vec<String>> {
    Ok(texts(&core::full_pauli_pool(n).map_err(err)?.operators))
}

/// Embeds chain-tile strings at every offset of an `l2`-site chain.
#[pyfunction]
fn tile_pool_1d(tiles: Vec<String>, l2: usize) -> PyResult<Vec<String>> {
    let ops = parse_all(&tiles)?;
    let len = ops.first().map_or(0, |p| p.n_qubits());
    let tiles = TileSet::new(TileShape::Chain { len }, ops).map_err(err)?;
    Ok(texts(&core::tile_pool_1d(&tiles, l2).map_err(err)?.operators))
}

/// Places 2×2 block-tile strings (row-major within the block) on an `lx × ly` grid.
#[pyfunction]
fn tile_pool_2d_block(tiles: Vec<String>, lx: usize, ly: usize) -> PyResult<Vec<String>> {
    let tiles = TileSet::new(TileShape::Block { rx: 2, ry: 2 }, parse_all(&tiles)?).map_err(err)?;
    Ok(texts(&tile_pool_2d(&tiles, lx, ly).map_err(err)?.operators))
}

#[pyfunction]
fn lie_closure(generators: Vec<String>) -> PyResult<Vec<String>> {
    Ok(texts(&core::lie_closure(&parse_all(&generators)?).map_err(err)?))
}

/// Strings commuting with `Z…Z` that carry an odd number of Y's.
#[pyfunction]
fn sector_basis(n: usize) -> PyResult<Vec<String>> {
    let sector = core::SymmetrySector::z_parity_odd_y(n).map_err(err)?;
    Ok(texts(&core::sector_basis(n, &sector).map_err(err)?))
}

/// Completeness report (JSON) for a chain tile set tiled onto `l2` sites.
#[pyfunction]
fn certify_tiled_completeness(tiles: Vec<String>, l2: usize) -> PyResult<String> {
    let ops = parse_all(&tiles)?;
    let len = ops.first().map_or(0, |p| p.n_qubits());
    let tiles = TileSet::new(TileShape::Chain { len }, ops).map_err(err)?;
    let sector = core::SymmetrySector::z_parity_odd_y(l2).map_err(err)?;
    let report = core::certify_tiled_completeness(&tiles, l2, &sector).map_err(err)?;
    Ok(serde_json::to_string(&report).expect("reports serialize"))
}

fn adapt_config(epsilon: f64, seed: u64, max_steps: usize, tie_break: &str) -> PyResult<AdaptConfig> {
    let tie_break = match tie_break {
        "random" => TieBreak::Random,
        "lexicographic" => TieBreak::Lexicographic,
        other => return Err(PyValueError::new_err(format!("unknown tie_break {other:?}"))),
    };
    Ok(AdaptConfig {
        epsilon,
        seed,
        max_steps,
        tie_break,
        ..AdaptConfig::default()
    })
}

/// One ADAPT run from the Néel state; returns the run record as JSON.
/// `pool=None` uses the full Pauli pool.
#[pyfunction]
#[pyo3(signature = (lattice, pool = None, epsilon = 0.01, seed = 0, max_steps = 400, tie_break = "random"))]
fn adapt_run(
    py: Python<'_>,
    lattice: &PyLattice,
    pool: Option<Vec<String>>,
    epsilon: f64,
    seed: u64,
    max_steps: usize,
    tie_break: &str,
) -> PyResult<String> {
    let spec = lattice.0;
    let cfg = adapt_config(epsilon, seed, max_steps, tie_break)?;
    let pool = match pool {
        Some(ops) => OperatorPool::explicit(spec.n_qubits(), parse_all(&ops)?).map_err(err)?,
        None => core::full_pauli_pool(spec.n_qubits()).map_err(err)?,
    };
    py.detach(|| {
        let h = core::build_xxz(&spec)?;
        let reference = core::prepare_neel(&NeelSpec::new(spec.geometry))?;
        let mut record = core::adapt_run(&h, &pool, &reference, &cfg)?;
        record.lattice = Some(spec);
        if spec.n_qubits() <= 16 {
            record.set_exact_energy(core::exact_ground_energy(&h, 1e-10)?);
        }
        Ok(serde_json::to_string(&record).expect("records serialize"))
    })
    .map_err(err)
}

/// Harvests a tile set from `trials` full-pool runs on a small lattice.
#[pyfunction]
#[pyo3(signature = (lattice, trials = 50, seed = 0))]
fn harvest(py: Python<'_>, lattice: &PyLattice, trials: usize, seed: u64) -> PyResult<Vec<String>> {
    let spec = lattice.0;
    let cfg = AdaptConfig { seed, ..AdaptConfig::default() };
    py.detach(|| {
        let h = core::build_xxz(&spec)?;
        let pool = core::full_pauli_pool(spec.n_qubits())?;
        let reference = core::prepare_neel(&NeelSpec::new(spec.geometry))?;
        let mut records = core::adapt_trials(&h, &pool, &reference, &cfg, trials)?;
        for r in &mut records {
            r.lattice = Some(spec);
        }
        core::harvest_tiles(&records)
    })
    .map(|tiles| texts(&tiles.operators))
    .map_err(err)
}

#[pymodule]
#[pyo3(name = "tiled_adapt")]
fn tiled_adapt_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPauliString>()?;
    m.add_class::<PyLattice>()?;
    m.add_class::<PyStateVector>()?;
    m.add_function(wrap_pyfunction!(full_pauli_pool, m)?)?;
    m.add_function(wrap_pyfunction!(tile_pool_1d, m)?)?;
    m.add_function(wrap_pyfunction!(tile_pool_2d_block, m)?)?;
    m.add_function(wrap_pyfunction!(lie_closure, m)?)?;
    m.add_function(wrap_pyfunction!(sector_basis, m)?)?;
    m.add_function(wrap_pyfunction!(certify_tiled_completeness, m)?)?;
    m.add_function(wrap_pyfunction!(adapt_run, m)?)?;
    m.add_function(wrap_pyfunction!(harvest, m)?)?;
    Ok(())
}
