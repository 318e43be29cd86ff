//! Ansatz evaluation and L-BFGS minimization of `E(θ) = ⟨ψ(θ)|H|ψ(θ)⟩`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::statevector::{rotate_amplitudes, PauliAction, StateVector};
use crate::sum::PauliSum;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzEntry {
    pub generator: PauliString,
    pub theta: f64,
}

/// Applies `e^{-iθ_k A_k}` in ansatz order (entry 0 acts first).
pub fn ansatz_state(reference: &StateVector, ansatz: &[AnsatzEntry]) -> Result<StateVector> {
    let mut psi = reference.clone();
    for e in ansatz {
        psi.rotate(&e.generator, e.theta)?;
    }
    Ok(psi)
}

/// Exact `E` and `∂E/∂θ_j` for all entries.
pub fn energy_and_gradient(
    reference: &StateVector,
    ansatz: &[AnsatzEntry],
    h: &PauliSum,
) -> Result<(f64, Vec<f64>)> {
    let generators: Vec<PauliString> = ansatz.iter().map(|e| e.generator).collect();
    let thetas: Vec<f64> = ansatz.iter().map(|e| e.theta).collect();
    Ok(AnsatzObjective::new(reference, &generators, h)?.evaluate(&thetas))
}

/// `E(θ)` for a fixed reference, generator sequence and Hamiltonian.
pub struct AnsatzObjective<'a> {
    reference: &'a StateVector,
    actions: Vec<PauliAction>,
    h: &'a PauliSum,
}

impl<'a> AnsatzObjective<'a> {
    pub fn new(
        reference: &'a StateVector,
        generators: &[PauliString],
        h: &'a PauliSum,
    ) -> Result<Self> {
        reference.check_size(h.n_qubits())?;
        for g in generators {
            reference.check_size(g.n_qubits())?;
            if g.phase_exp() != 0 {
                return Err(Error::NonzeroPhase(g.to_string()));
            }
        }
        Ok(Self {
            reference,
            actions: generators.iter().map(PauliAction::new).collect(),
            h,
        })
    }

    pub fn n_params(&self) -> usize {
        self.actions.len()
    }

    pub fn energy(&self, thetas: &[f64]) -> f64 {
        let psi = self.forward(thetas);
        let hpsi = self.h.apply(&psi);
        dot(&psi, &hpsi).re
    }

    fn forward(&self, thetas: &[f64]) -> Vec<Complex64> {
        let mut psi = self.reference.amplitudes().to_vec();
        for (a, &t) in self.actions.iter().zip(thetas) {
            rotate_amplitudes(&mut psi, a, t);
        }
        psi
    }

    /// Forward sweep to `|ψ(θ)⟩`, then a backward sweep carrying
    /// `⟨λ_j| = ⟨ψ|H U_m ⋯ U_{j+1}` so that `∂E/∂θ_j = 2 Im⟨λ_j|A_j|ψ_j⟩`.
    pub fn evaluate(&self, thetas: &[f64]) -> (f64, Vec<f64>) {
        assert_eq!(thetas.len(), self.actions.len());
        let mut psi = self.forward(thetas);
        let mut lambda = self.h.apply(&psi);
        let energy = dot(&psi, &lambda).re;
        let mut grad = vec![0.0; thetas.len()];
        for j in (0..thetas.len()).rev() {
            let a = &self.actions[j];
            grad[j] = 2.0 * a.matrix_element(&lambda, &psi).im;
            rotate_amplitudes(&mut psi, a, -thetas[j]);
            rotate_amplitudes(&mut lambda, a, -thetas[j]);
        }
        (energy, grad)
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSettings {
    /// Stop once the Euclidean gradient norm drops to this value.
    pub gtol: f64,
    pub max_iterations: usize,
    /// Number of stored correction pairs.
    pub memory: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            gtol: 1e-8,
            max_iterations: 500,
            memory: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub thetas: Vec<f64>,
    pub energy: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes the ansatz energy from `init` with L-BFGS.
pub fn minimize(
    reference: &StateVector,
    generators: &[PauliString],
    h: &PauliSum,
    init: &[f64],
    settings: &OptimizerSettings,
) -> Result<OptimizationResult> {
    if init.len() != generators.len() {
        return Err(Error::ParameterCount {
            expected: generators.len(),
            found: init.len(),
        });
    }
    let objective = AnsatzObjective::new(reference, generators, h)?;
    Ok(lbfgs(|x| objective.evaluate(x), init, settings))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn vdot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Limited-memory BFGS with a strong-Wolfe line search.
///
/// Every accepted step satisfies the sufficient-decrease condition, so the
/// objective is non-increasing across iterates. A failed line search ends the
/// run at the best point found.
pub fn lbfgs<F>(mut f: F, x0: &[f64], settings: &OptimizerSettings) -> OptimizationResult
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let mut x = x0.to_vec();
    let (mut fx, mut g) = f(&x);
    let mut evaluations = 1;
    let mut history: std::collections::VecDeque<(Vec<f64>, Vec<f64>, f64)> =
        std::collections::VecDeque::new();
    let mut iterations = 0;
    let mut converged = norm(&g) <= settings.gtol;

    while !converged && iterations < settings.max_iterations {
        let mut d = two_loop(&g, &history);
        let mut slope = vdot(&g, &d);
        if !(slope < 0.0) {
            history.clear();
            d = g.iter().map(|v| -v).collect();
            slope = -vdot(&g, &g);
        }
        let step0 = if history.is_empty() {
            (1.0 / norm(&d)).min(1.0)
        } else {
            1.0
        };
        let mut phi = |alpha: f64| {
            let xa: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + alpha * di).collect();
            let (fa, ga) = f(&xa);
            evaluations += 1;
            let da = vdot(&ga, &d);
            LinePoint {
                alpha,
                f: fa,
                slope: da,
                x: xa,
                g: ga,
            }
        };
        let Some(next) = strong_wolfe(&mut phi, fx, slope, step0) else {
            break;
        };
        iterations += 1;
        let s: Vec<f64> = next.x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = next.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = vdot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            if history.len() == settings.memory.max(1) {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        x = next.x;
        fx = next.f;
        g = next.g;
        converged = norm(&g) <= settings.gtol;
    }

    OptimizationResult {
        gradient_norm: norm(&g),
        thetas: x,
        energy: fx,
        iterations,
        evaluations,
        converged,
    }
}

fn two_loop(g: &[f64], history: &std::collections::VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = rho * vdot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y, _)) = history.back() {
        let gamma = vdot(s, y) / vdot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.into_iter().rev()) {
        let b = rho * vdot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

struct LinePoint {
    alpha: f64,
    f: f64,
    slope: f64,
    x: Vec<f64>,
    g: Vec<f64>,
}

const C1: f64 = 1e-4;
const C2: f64 = 0.9;
const MAX_LINE_EVALS: usize = 40;

/// Bracketing phase followed by zoom, after Nocedal & Wright (Alg. 3.5/3.6).
fn strong_wolfe(
    phi: &mut impl FnMut(f64) -> LinePoint,
    f0: f64,
    slope0: f64,
    step0: f64,
) -> Option<LinePoint> {
    let armijo = |p: &LinePoint| p.f <= f0 + C1 * p.alpha * slope0;
    let curvature = |p: &LinePoint| p.slope.abs() <= -C2 * slope0;

    let mut prev: Option<LinePoint> = None;
    let mut alpha = step0;
    for _ in 0..MAX_LINE_EVALS {
        let cur = phi(alpha);
        if !cur.f.is_finite() {
            alpha *= 0.5;
            continue;
        }
        let worse_than_prev = prev.as_ref().is_some_and(|p| cur.f >= p.f);
        if !armijo(&cur) || worse_than_prev {
            let lo = prev.unwrap_or(LinePoint {
                alpha: 0.0,
                f: f0,
                slope: slope0,
                x: Vec::new(),
                g: Vec::new(),
            });
            return zoom(phi, lo, cur, f0, slope0);
        }
        if curvature(&cur) {
            return Some(cur);
        }
        if cur.slope >= 0.0 {
            let hi = prev.unwrap_or(LinePoint {
                alpha: 0.0,
                f: f0,
                slope: slope0,
                x: Vec::new(),
                g: Vec::new(),
            });
            return zoom(phi, cur, hi, f0, slope0);
        }
        alpha = cur.alpha * 2.0;
        prev = Some(cur);
    }
    prev.filter(|p| p.alpha > 0.0)
}

fn zoom(
    phi: &mut impl FnMut(f64) -> LinePoint,
    mut lo: LinePoint,
    mut hi: LinePoint,
    f0: f64,
    slope0: f64,
) -> Option<LinePoint> {
    for _ in 0..MAX_LINE_EVALS {
        let (a, b) = (lo.alpha, hi.alpha);
        let width = (b - a).abs();
        if width <= 1e-14 * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
        let (left, right) = (a.min(b), a.max(b));
        let mut t = cubic_min(&lo, &hi).unwrap_or(0.5 * (a + b));
        if !(t > left + 0.1 * width && t < right - 0.1 * width) {
            t = 0.5 * (a + b);
        }
        let cur = phi(t);
        if !cur.f.is_finite() || cur.f > f0 + C1 * t * slope0 || cur.f >= lo.f {
            hi = cur;
        } else {
            if cur.slope.abs() <= -C2 * slope0 {
                return Some(cur);
            }
            if cur.slope * (hi.alpha - lo.alpha) >= 0.0 {
                hi = lo;
            }
            lo = cur;
        }
    }
    // Accept the best sufficient-decrease point found, if any.
    (lo.alpha > 0.0 && lo.f < f0).then_some(lo)
}

fn cubic_min(p: &LinePoint, q: &LinePoint) -> Option<f64> {
    let (a, fa, da) = (p.alpha, p.f, p.slope);
    let (b, fb, db) = (q.alpha, q.f, q.slope);
    let d1 = da + db - 3.0 * (fa - fb) / (a - b);
    let disc = d1 * d1 - da * db;
    if disc < 0.0 {
        return None;
    }
    let d2 = (b - a).signum() * disc.sqrt();
    let t = b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
    t.is_finite().then_some(t)
}
