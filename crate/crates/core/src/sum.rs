//! Real-coefficient sums of bare Pauli strings.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::statevector::PauliAction;

/// `Σ c_k P_k` with distinct bare strings and finite real coefficients.
///
/// Text form is one `coefficient string` pair per line; blank lines and
/// lines starting with `#` are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    /// Builds a sum, merging repeated strings in first-occurrence order.
    pub fn from_terms(n_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let mut sum = Self::new(n_qubits);
        for (c, p) in terms {
            sum.add_term(c, p)?;
        }
        Ok(sum)
    }

    pub fn add_term(&mut self, coefficient: f64, string: PauliString) -> Result<()> {
        if string.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: string.n_qubits(),
            });
        }
        if string.phase_exp() != 0 {
            return Err(Error::NonzeroPhase(string.to_string()));
        }
        if !coefficient.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "non-finite coefficient on {string}"
            )));
        }
        match self.terms.iter_mut().find(|(_, p)| *p == string) {
            Some((c, _)) => *c += coefficient,
            None => self.terms.push((coefficient, string)),
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn filter(&self, keep: impl Fn(&PauliString) -> bool) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().filter(|(_, p)| keep(p)).cloned().collect(),
        }
    }

    /// Matrix-free `H|v⟩`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        self.apply_into(v, &mut out);
        out
    }

    /// Overwrites `out` with `H|v⟩`.
    pub fn apply_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(v.len(), 1 << self.n_qubits);
        out.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        for (c, p) in &self.terms {
            PauliAction::new(p).accumulate(v, out, Complex64::new(*c, 0.0));
        }
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, p) in &self.terms {
            writeln!(f, "{c:?} {p}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut sum: Option<PauliSum> = None;
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| Error::Parse {
                input: line.to_string(),
                reason: format!("line {}: {reason}", lineno + 1),
            };
            let mut fields = line.split_whitespace();
            let (Some(c), Some(p), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(bad("expected `coefficient string`".into()));
            };
            let c: f64 = c.parse().map_err(|e| bad(format!("{e}")))?;
            let p: PauliString = p.parse()?;
            sum.get_or_insert_with(|| PauliSum::new(p.n_qubits()))
                .add_term(c, p)?;
        }
        sum.ok_or_else(|| Error::Parse {
            input: s.to_string(),
            reason: "no terms".into(),
        })
    }
}
