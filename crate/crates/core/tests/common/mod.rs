//! Dense-matrix oracles and random instance generators shared by the
//! integration tests.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tiled_adapt::{Pauli, PauliString, PauliSum, StateVector};

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn letter_matrix(p: Pauli) -> CMat {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let entries = match p {
        Pauli::I => [l, o, o, l],
        Pauli::X => [o, l, l, o],
        Pauli::Y => [o, -i, i, o],
        Pauli::Z => [l, o, o, -l],
    };
    CMat::from_row_slice(2, 2, &entries)
}

/// Kronecker product over the letters; qubit 0 is the least significant
/// factor, i.e. the rightmost one.
pub fn dense(p: &PauliString) -> CMat {
    let mut m = CMat::identity(1, 1);
    for letter in p.letters() {
        m = letter_matrix(letter).kronecker(&m);
    }
    let phase = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase_exp() as usize];
    m * phase
}

pub fn dense_sum(h: &PauliSum) -> CMat {
    let dim = 1 << h.n_qubits();
    let mut m = CMat::zeros(dim, dim);
    for (coef, p) in h.terms() {
        m += dense(p) * c(*coef, 0.0);
    }
    m
}

pub fn column(state: &StateVector) -> DMatrix<Complex64> {
    DMatrix::from_column_slice(state.amplitudes().len(), 1, state.amplitudes())
}

pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

pub fn random_string(rng: &mut ChaCha8Rng, n: usize) -> PauliString {
    let letters: Vec<Pauli> = (0..n)
        .map(|_| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..4)])
        .collect();
    PauliString::from_letters(&letters).unwrap()
}

pub fn random_nonidentity(rng: &mut ChaCha8Rng, n: usize) -> PauliString {
    loop {
        let p = random_string(rng, n);
        if !p.is_identity() {
            return p;
        }
    }
}

pub fn random_sum(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> PauliSum {
    let mut h = PauliSum::new(n);
    for _ in 0..terms {
        h.add_term(rng.random_range(-1.0..1.0), random_string(rng, n))
            .unwrap();
    }
    h
}

pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let amps = (0..1usize << n)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    StateVector::from_amplitudes(n, amps).unwrap()
}

pub fn random_real_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let amps = (0..1usize << n)
        .map(|_| c(rng.random_range(-1.0..1.0), 0.0))
        .collect();
    StateVector::from_amplitudes(n, amps).unwrap()
}

pub fn parse_all(s: &str) -> Vec<PauliString> {
    s.split_whitespace().map(|t| t.parse().unwrap()).collect()
}

pub const TILE_8: &str = "IXY IYX XYI YXI ZXY YXZ ZYX XYZ";
pub const TILE_12: &str = "IXY IYX XYI XIY YXI YIX ZXY YZX YXZ XZY ZYX XYZ";
pub const TILE_32: &str = "IIXY IIYX IXYZ IXZY IYXZ IYZX IZXY IZYX XIYZ XIZY XYII XYIZ XYZI \
    XYZZ XZIY XZYI YIXZ YIZX YXII YXIZ YXZI YXZZ YZIX YZXI ZIXY ZIYX ZXIY ZXYI ZYIX ZYXI ZZXY ZZYX";
