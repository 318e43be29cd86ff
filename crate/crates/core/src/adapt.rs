//! The ADAPT-VQE outer loop and repeated randomized trials.
//!
//! Each step screens the pool at the current optimum, appends the operator
//! with the largest gradient magnitude (choosing among near-degenerate
//! candidates), and reoptimizes every angle with the new one starting at zero.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::optimizer::{minimize, AnsatzEntry, OptimizerSettings};
use crate::pauli::PauliString;
use crate::pool::{OperatorPool, PoolProvenance};
use crate::statevector::StateVector;
use crate::sum::PauliSum;

/// Quantity compared against `epsilon` to declare convergence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceCriterion {
    #[default]
    MaxAbs,
    Norm,
}

/// How one operator is picked among near-degenerate candidates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Uniformly at random from the seeded generator.
    #[default]
    Random,
    /// The lexicographically smallest string (I < X < Y < Z, qubit 0 first).
    Lexicographic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdaptConfig {
    pub epsilon: f64,
    pub max_steps: usize,
    /// Relative band below the maximum |gradient| treated as degenerate.
    pub tie_tolerance: f64,
    pub seed: u64,
    pub criterion: ConvergenceCriterion,
    pub tie_break: TieBreak,
    pub optimizer: OptimizerSettings,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.01,
            max_steps: 400,
            tie_tolerance: 1e-8,
            seed: 0,
            criterion: ConvergenceCriterion::MaxAbs,
            tie_break: TieBreak::Random,
            optimizer: OptimizerSettings::default(),
        }
    }
}

impl AdaptConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig("epsilon must be positive".into()));
        }
        if !(self.tie_tolerance >= 0.0 && self.tie_tolerance < 1.0) {
            return Err(Error::InvalidConfig(
                "tie_tolerance must lie in [0, 1)".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub operator: PauliString,
    pub pool_index: usize,
    /// Largest |gradient| over the pool before this operator was appended.
    pub max_abs_gradient: f64,
    pub degenerate_candidates: usize,
    /// Energy after reoptimizing all angles.
    pub energy: f64,
    pub thetas: Vec<f64>,
    pub optimizer_iterations: usize,
    pub optimizer_converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoolSummary {
    pub size: usize,
    pub provenance: PoolProvenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: AdaptConfig,
    pub n_qubits: usize,
    /// The lattice the Hamiltonian was built from, when known.
    pub lattice: Option<LatticeSpec>,
    pub pool: PoolSummary,
    pub reference_energy: f64,
    pub steps: Vec<StepRecord>,
    pub converged: bool,
    /// Convergence measure at termination (|gradient| max or norm).
    pub final_gradient: f64,
    pub final_energy: f64,
    pub exact_energy: Option<f64>,
    pub relative_error: Option<f64>,
    /// Set when the run stopped because a step failed.
    pub failure: Option<String>,
    pub wall_time_s: f64,
}

impl RunRecord {
    pub fn n_parameters(&self) -> usize {
        self.steps.len()
    }

    pub fn ansatz(&self) -> Vec<AnsatzEntry> {
        let Some(last) = self.steps.last() else {
            return Vec::new();
        };
        self.steps
            .iter()
            .zip(&last.thetas)
            .map(|(s, &theta)| AnsatzEntry {
                generator: s.operator,
                theta,
            })
            .collect()
    }

    pub fn chosen_operators(&self) -> Vec<PauliString> {
        self.steps.iter().map(|s| s.operator).collect()
    }

    /// Records the exact ground energy and the relative error `|E − E0| / |E0|`.
    pub fn set_exact_energy(&mut self, exact: f64) {
        self.exact_energy = Some(exact);
        self.relative_error = Some((self.final_energy - exact).abs() / exact.abs());
    }

    /// JSON with the wall-clock field zeroed, for reproducibility comparisons.
    pub fn to_json_without_timing(&self) -> String {
        let mut copy = self.clone();
        copy.wall_time_s = 0.0;
        serde_json::to_string(&copy).expect("records serialize")
    }
}

fn check_inputs(h: &PauliSum, pool: &OperatorPool, reference: &StateVector) -> Result<()> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    reference.check_size(h.n_qubits())?;
    reference.check_size(pool.n_qubits)?;
    Ok(())
}

/// One ADAPT-VQE run.
pub fn adapt_run(
    h: &PauliSum,
    pool: &OperatorPool,
    reference: &StateVector,
    cfg: &AdaptConfig,
) -> Result<RunRecord> {
    cfg.validate()?;
    check_inputs(h, pool, reference)?;
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut generators: Vec<PauliString> = Vec::new();
    let mut thetas: Vec<f64> = Vec::new();
    let mut steps = Vec::new();
    let mut state = reference.clone();
    let reference_energy = reference.expectation(h)?;
    let mut energy = reference_energy;
    let mut failure = None;
    let mut converged = false;
    let final_gradient;

    loop {
        let grads = state.pool_gradients(h, &pool.operators)?;
        let max_abs = grads.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        let measure = match cfg.criterion {
            ConvergenceCriterion::MaxAbs => max_abs,
            ConvergenceCriterion::Norm => grads.iter().map(|g| g * g).sum::<f64>().sqrt(),
        };
        if measure < cfg.epsilon {
            converged = true;
            final_gradient = measure;
            break;
        }
        if steps.len() >= cfg.max_steps {
            final_gradient = measure;
            break;
        }

        let cutoff = (1.0 - cfg.tie_tolerance) * max_abs;
        let candidates: Vec<usize> = (0..grads.len())
            .filter(|&k| grads[k].abs() >= cutoff)
            .collect();
        let pick = match cfg.tie_break {
            TieBreak::Random => candidates[rng.random_range(0..candidates.len())],
            TieBreak::Lexicographic => *candidates
                .iter()
                .min_by_key(|&&k| pool.operators[k])
                .expect("the maximum is always a candidate"),
        };

        generators.push(pool.operators[pick]);
        thetas.push(0.0);
        let result = match minimize(reference, &generators, h, &thetas, &cfg.optimizer) {
            Ok(r) if r.energy.is_finite() => r,
            Ok(r) => {
                failure = Some(format!("non-finite energy {} at step {}", r.energy, steps.len() + 1));
                final_gradient = measure;
                generators.pop();
                break;
            }
            Err(e) => {
                failure = Some(e.to_string());
                final_gradient = measure;
                generators.pop();
                break;
            }
        };
        thetas = result.thetas.clone();
        energy = result.energy;
        steps.push(StepRecord {
            step: steps.len() + 1,
            operator: pool.operators[pick],
            pool_index: pick,
            max_abs_gradient: max_abs,
            degenerate_candidates: candidates.len(),
            energy,
            thetas: result.thetas,
            optimizer_iterations: result.iterations,
            optimizer_converged: result.converged,
        });
        state = reference.clone();
        for (g, &t) in generators.iter().zip(&thetas) {
            state.rotate(g, t)?;
        }
    }

    Ok(RunRecord {
        config: *cfg,
        n_qubits: h.n_qubits(),
        lattice: None,
        pool: PoolSummary {
            size: pool.len(),
            provenance: pool.provenance.clone(),
        },
        reference_energy,
        steps,
        converged,
        final_gradient,
        final_energy: energy,
        exact_energy: None,
        relative_error: None,
        failure,
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}

/// Seed for trial `index` derived from a base seed (SplitMix64 finalizer).
pub fn trial_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent runs with per-trial seeds; output order follows trial index.
pub fn adapt_trials(
    h: &PauliSum,
    pool: &OperatorPool,
    reference: &StateVector,
    cfg: &AdaptConfig,
    n_trials: usize,
) -> Result<Vec<RunRecord>> {
    if n_trials == 0 {
        return Err(Error::InvalidConfig("n_trials must be at least 1".into()));
    }
    cfg.validate()?;
    check_inputs(h, pool, reference)?;
    (0..n_trials as u64)
        .into_par_iter()
        .map(|i| {
            let trial_cfg = AdaptConfig {
                seed: trial_seed(cfg.seed, i),
                ..*cfg
            };
            adapt_run(h, pool, reference, &trial_cfg)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub step: usize,
    pub energy: f64,
    pub max_abs_gradient: f64,
    pub selected_operator: String,
}

pub const TRACE_CSV_HEADER: &str = "step,energy,max_abs_gradient,selected_operator";

pub fn convergence_trace(record: &RunRecord) -> Vec<TraceRow> {
    record
        .steps
        .iter()
        .map(|s| TraceRow {
            step: s.step,
            energy: s.energy,
            max_abs_gradient: s.max_abs_gradient,
            selected_operator: s.operator.to_string(),
        })
        .collect()
}

pub fn trace_csv(record: &RunRecord) -> String {
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for r in convergence_trace(record) {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.step, r.energy, r.max_abs_gradient, r.selected_operator
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_xxz, Geometry};
    use crate::pool::full_pauli_pool;
    use crate::statevector::NeelSpec;

    fn chain3(j_z: f64) -> (PauliSum, StateVector) {
        let h = build_xxz(&LatticeSpec::chain(3, j_z).unwrap()).unwrap();
        let psi = StateVector::neel(&NeelSpec::new(Geometry::Chain { len: 3 })).unwrap();
        (h, psi)
    }

    #[test]
    fn three_site_chain_converges_in_three_steps() {
        let (h, psi) = chain3(0.5);
        let pool = full_pauli_pool(3).unwrap();
        let cfg = AdaptConfig {
            seed: 7,
            ..Default::default()
        };
        let r = adapt_run(&h, &pool, &psi, &cfg).unwrap();
        assert!(r.converged);
        assert_eq!(r.steps.len(), 3);
        assert_eq!(convergence_trace(&r).len(), 3);
        for w in r.steps.windows(2) {
            assert!(w[1].energy <= w[0].energy + 1e-12);
        }
        assert_eq!(r.steps[0].max_abs_gradient, 4.0);
        assert_eq!(r.steps[0].degenerate_candidates, 8);
    }

    #[test]
    fn commuting_pool_stops_immediately() {
        let (h, psi) = chain3(1.0);
        let pool = OperatorPool::explicit(3, vec!["ZZZ".parse().unwrap()]).unwrap();
        let r = adapt_run(&h, &pool, &psi, &AdaptConfig::default()).unwrap();
        assert!(r.converged);
        assert!(r.steps.is_empty());
        assert_eq!(r.final_energy, r.reference_energy);
        assert_eq!(trace_csv(&r), format!("{TRACE_CSV_HEADER}\n"));
    }

    #[test]
    fn max_steps_caps_the_run() {
        let (h, psi) = chain3(1.0);
        let pool = full_pauli_pool(3).unwrap();
        let cfg = AdaptConfig {
            max_steps: 1,
            ..Default::default()
        };
        let r = adapt_run(&h, &pool, &psi, &cfg).unwrap();
        assert!(!r.converged);
        assert_eq!(r.steps.len(), 1);
    }

    #[test]
    fn rejects_bad_inputs() {
        let (h, psi) = chain3(1.0);
        let empty = OperatorPool::explicit(3, vec![]).unwrap();
        assert!(matches!(
            adapt_run(&h, &empty, &psi, &AdaptConfig::default()),
            Err(Error::EmptyPool)
        ));
        let pool = full_pauli_pool(2).unwrap();
        assert!(adapt_run(&h, &pool, &psi, &AdaptConfig::default()).is_err());
        let bad = AdaptConfig {
            epsilon: 0.0,
            ..Default::default()
        };
        assert!(adapt_run(&h, &full_pauli_pool(3).unwrap(), &psi, &bad).is_err());
        assert!(adapt_trials(&h, &full_pauli_pool(3).unwrap(), &psi, &AdaptConfig::default(), 0).is_err());
    }

    #[test]
    fn single_trial_matches_direct_run() {
        let (h, psi) = chain3(0.5);
        let pool = full_pauli_pool(3).unwrap();
        let cfg = AdaptConfig {
            seed: 11,
            ..Default::default()
        };
        let trials = adapt_trials(&h, &pool, &psi, &cfg, 1).unwrap();
        let direct = adapt_run(
            &h,
            &pool,
            &psi,
            &AdaptConfig {
                seed: trial_seed(11, 0),
                ..cfg
            },
        )
        .unwrap();
        assert_eq!(trials.len(), 1);
        assert_eq!(trials[0].to_json_without_timing(), direct.to_json_without_timing());
    }

    #[test]
    fn trace_csv_format() {
        let (h, psi) = chain3(0.5);
        let pool = full_pauli_pool(3).unwrap();
        let r = adapt_run(&h, &pool, &psi, &AdaptConfig::default()).unwrap();
        let csv = trace_csv(&r);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(TRACE_CSV_HEADER));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[0], "1");
        assert_eq!(first[2], "4");
        assert_eq!(first[3].len(), 3);
    }
}
