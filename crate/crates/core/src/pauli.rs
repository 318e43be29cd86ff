//! Pauli strings in symplectic form.
//!
//! A string on `n` qubits is stored as two bit masks plus a phase exponent:
//! bit `i` of `x` is set for X or Y on qubit `i`, bit `i` of `z` for Z or Y.
//! The operator represented is `i^phase * P_0 ⊗ P_1 ⊗ ... ⊗ P_{n-1}`.
//!
//! In text form qubit 0 is the leftmost letter, so `"IXY"` has X on qubit 1
//! and Y on qubit 2.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// An `n`-qubit Pauli operator with a global phase `i^phase_exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: u8,
    x: u64,
    z: u64,
    phase: u8,
}

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        Err(Error::InvalidQubitCount(n))
    } else {
        Ok(())
    }
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::from_masks(n_qubits, 0, 0)
    }

    /// Bare string from symplectic masks. Bits above `n_qubits` must be clear.
    pub fn from_masks(n_qubits: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        check_n(n_qubits)?;
        let m = low_mask(n_qubits);
        if x_mask & !m != 0 || z_mask & !m != 0 {
            return Err(Error::InvalidSiteMap(format!(
                "mask bits set above qubit {}",
                n_qubits - 1
            )));
        }
        Ok(Self {
            n_qubits: n_qubits as u8,
            x: x_mask,
            z: z_mask,
            phase: 0,
        })
    }

    pub fn from_letters(letters: &[Pauli]) -> Result<Self> {
        check_n(letters.len())?;
        let (mut x, mut z) = (0u64, 0u64);
        for (i, p) in letters.iter().enumerate() {
            let (xb, zb) = p.bits();
            x |= (xb as u64) << i;
            z |= (zb as u64) << i;
        }
        Self::from_masks(letters.len(), x, z)
    }

    /// Single-site letters on an `n_qubits` register, identity elsewhere.
    pub fn from_sites(n_qubits: usize, sites: &[(usize, Pauli)]) -> Result<Self> {
        check_n(n_qubits)?;
        let mut letters = vec![Pauli::I; n_qubits];
        for &(q, p) in sites {
            if q >= n_qubits {
                return Err(Error::InvalidSiteMap(format!(
                    "site {q} outside a {n_qubits}-qubit register"
                )));
            }
            letters[q] = p;
        }
        Self::from_letters(&letters)
    }

    pub fn with_phase(mut self, phase_exp: u8) -> Self {
        self.phase = phase_exp % 4;
        self
    }

    /// The same string with the phase dropped.
    pub fn bare(self) -> Self {
        self.with_phase(0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n_qubits()).map(|q| self.letter(q)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    fn check_same_size(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            Err(Error::SizeMismatch {
                expected: self.n_qubits(),
                found: other.n_qubits(),
            })
        } else {
            Ok(())
        }
    }

    /// Operator product `self · other` with the phase folded into `phase_exp`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_size(other)?;
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // Each letter is i^{xz} X^x Z^z; moving Z^{z_a} past X^{x_b} costs (-1).
        let phase = self.phase as u32
            + other.phase as u32
            + self.y_count()
            + other.y_count()
            + 2 * (self.z & other.x).count_ones()
            + 4 * 64
            - (x & z).count_ones();
        Ok(Self {
            n_qubits: self.n_qubits,
            x,
            z,
            phase: (phase % 4) as u8,
        })
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_same_size(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Bare string proportional to `[self, other]`, or `None` when they commute.
    pub fn commutator(&self, other: &Self) -> Result<Option<Self>> {
        self.check_same_size(other)?;
        Ok(self.commutator_unchecked(other))
    }

    pub(crate) fn commutator_unchecked(&self, other: &Self) -> Option<Self> {
        if self.commutes_unchecked(other) {
            None
        } else {
            Some(Self {
                n_qubits: self.n_qubits,
                x: self.x ^ other.x,
                z: self.z ^ other.z,
                phase: 0,
            })
        }
    }

    pub fn in_sector(&self, sector: &SymmetrySector) -> Result<bool> {
        self.check_same_size(&sector.stabilizer)?;
        Ok(sector.admits_unchecked(self))
    }

    /// Pads with identities: letters land on `offset..offset + n`.
    pub fn embed(&self, n_total: usize, offset: usize) -> Result<Self> {
        check_n(n_total)?;
        if offset + self.n_qubits() > n_total {
            return Err(Error::OffsetOutOfRange {
                offset,
                len: self.n_qubits(),
                total: n_total,
            });
        }
        Ok(Self {
            n_qubits: n_total as u8,
            x: self.x << offset,
            z: self.z << offset,
            phase: self.phase,
        })
    }

    /// Places letter `k` on qubit `site_map[k]` of an `n_total` register.
    pub fn permute_support(&self, n_total: usize, site_map: &[usize]) -> Result<Self> {
        check_n(n_total)?;
        if site_map.len() != self.n_qubits() {
            return Err(Error::InvalidSiteMap(format!(
                "expected {} targets, got {}",
                self.n_qubits(),
                site_map.len()
            )));
        }
        let mut seen = 0u64;
        let (mut x, mut z) = (0u64, 0u64);
        for (k, &site) in site_map.iter().enumerate() {
            if site >= n_total {
                return Err(Error::InvalidSiteMap(format!(
                    "target {site} outside a {n_total}-qubit register"
                )));
            }
            if seen >> site & 1 == 1 {
                return Err(Error::InvalidSiteMap(format!("duplicate target {site}")));
            }
            seen |= 1 << site;
            x |= (self.x >> k & 1) << site;
            z |= (self.z >> k & 1) << site;
        }
        Ok(Self {
            n_qubits: n_total as u8,
            x,
            z,
            phase: self.phase,
        })
    }

    /// Base-4 rank with qubit 0 most significant and I < X < Y < Z.
    fn lex_rank(&self) -> u128 {
        let mut r = 0u128;
        for q in 0..self.n_qubits() {
            let d = match self.letter(q) {
                Pauli::I => 0,
                Pauli::X => 1,
                Pauli::Y => 2,
                Pauli::Z => 3,
            };
            r = r * 4 + d;
        }
        r
    }
}

/// Orders by register size, then letters lexicographically (I < X < Y < Z,
/// leftmost letter first), then phase.
impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n_qubits
            .cmp(&other.n_qubits)
            .then_with(|| self.lex_rank().cmp(&other.lex_rank()))
            .then_with(|| self.phase.cmp(&other.phase))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n_qubits() {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        let (phase, body) = [
            ("+i", 1),
            ("-i", 3),
            ("i", 1),
            ("+1", 0),
            ("-1", 2),
            ("+", 0),
            ("-", 2),
        ]
        .iter()
        .find_map(|&(p, e)| t.strip_prefix(p).map(|rest| (e, rest)))
        .unwrap_or((0, t));
        if body.is_empty() {
            return Err(fail("no Pauli letters"));
        }
        let letters = body
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| fail("letters must be I, X, Y or Z")))
            .collect::<Result<Vec<_>>>()?;
        if letters.len() > MAX_QUBITS {
            return Err(fail("more than 64 qubits"));
        }
        Ok(Self::from_letters(&letters)?.with_phase(phase))
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum YParity {
    Odd,
    Even,
    Any,
}

/// Strings that (anti)commute with a stabilizer and have a given Y-count parity.
///
/// `require_commute = false` selects strings that anticommute with the stabilizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetrySector {
    pub stabilizer: PauliString,
    pub require_commute: bool,
    pub y_parity: YParity,
}

impl SymmetrySector {
    pub fn new(stabilizer: PauliString, require_commute: bool, y_parity: YParity) -> Self {
        Self {
            stabilizer: stabilizer.bare(),
            require_commute,
            y_parity,
        }
    }

    /// Commutes with `Z⊗…⊗Z` on `n` qubits and has an odd number of Y's.
    pub fn z_parity_odd_y(n: usize) -> Result<Self> {
        let zz = PauliString::from_masks(n, 0, low_mask(n))?;
        Ok(Self::new(zz, true, YParity::Odd))
    }

    pub fn n_qubits(&self) -> usize {
        self.stabilizer.n_qubits()
    }

    pub(crate) fn admits_unchecked(&self, p: &PauliString) -> bool {
        let parity_ok = match self.y_parity {
            YParity::Any => true,
            YParity::Odd => p.y_count() % 2 == 1,
            YParity::Even => p.y_count() % 2 == 0,
        };
        parity_ok && p.commutes_unchecked(&self.stabilizer) == self.require_commute
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_products() {
        let xy = p("X").multiply(&p("Y")).unwrap();
        assert_eq!(xy, p("+iZ"));
        assert_eq!(xy.phase_exp(), 1);
        assert_eq!(p("Y").multiply(&p("X")).unwrap(), p("-iZ"));
        assert_eq!(p("Z").multiply(&p("X")).unwrap(), p("+iY"));
        assert_eq!(p("X").multiply(&p("Z")).unwrap(), p("-iY"));
    }

    #[test]
    fn product_with_phase_three_qubits() {
        let c = p("IXY").multiply(&p("XYI")).unwrap();
        assert_eq!(c.to_string(), "+iXZY");
    }

    #[test]
    fn involution() {
        for s in ["X", "XYZ", "ZZIYX", "YYYYYYYYYY"] {
            let sq = p(s).multiply(&p(s)).unwrap();
            assert!(sq.is_identity());
            assert_eq!(sq.phase_exp(), 0);
        }
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(matches!(
            p("XY").multiply(&p("XYZ")),
            Err(Error::SizeMismatch { .. })
        ));
        assert!(p("XY").commutes(&p("X")).is_err());
        assert!(p("XY").commutator(&p("X")).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(p("XY").commutes(&p("YX")).unwrap());
        assert!(!p("IXY").commutes(&p("XYI")).unwrap());
        assert!(p("XZY").commutes(&p("III")).unwrap());
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(p("IXY").commutator(&p("XYI")).unwrap(), Some(p("XZY")));
        assert_eq!(p("XZY").commutator(&p("XZY")).unwrap(), None);
        assert_eq!(
            p("XZYII").commutator(&p("IIXYI")).unwrap(),
            Some(p("XZZYI"))
        );
    }

    #[test]
    fn sector_membership() {
        let s = SymmetrySector::z_parity_odd_y(3).unwrap();
        assert!(p("ZXY").in_sector(&s).unwrap());
        assert!(!p("YYY").in_sector(&s).unwrap());
        assert!(!p("XXI").in_sector(&s).unwrap());
        assert!(p("ZXY").in_sector(&SymmetrySector::z_parity_odd_y(4).unwrap()).is_err());
    }

    #[test]
    fn embedding() {
        assert_eq!(p("XY").embed(4, 0).unwrap(), p("XYII"));
        assert_eq!(p("XY").embed(4, 2).unwrap(), p("IIXY"));
        assert_eq!(p("IXY").embed(5, 1).unwrap(), p("IIXYI"));
        assert_eq!(p("-iXY").embed(3, 1).unwrap(), p("-iIXY"));
        assert!(matches!(
            p("XY").embed(4, 3),
            Err(Error::OffsetOutOfRange { .. })
        ));
    }

    #[test]
    fn permuted_placement() {
        assert_eq!(p("XY").permute_support(2, &[1, 0]).unwrap(), p("YX"));
        assert_eq!(
            p("XYZI").permute_support(8, &[0, 1, 4, 5]).unwrap(),
            p("XYIIZIII")
        );
        assert_eq!(
            p("XZY").permute_support(5, &[0, 1, 2]).unwrap(),
            p("XZY").embed(5, 0).unwrap()
        );
        assert!(p("XY").permute_support(4, &[1, 1]).is_err());
        assert!(p("XY").permute_support(4, &[1, 4]).is_err());
        assert!(p("XY").permute_support(4, &[1]).is_err());
    }

    #[test]
    fn text_round_trip_and_rejects() {
        for s in ["ZXY", "+iZXY", "-ZXY", "-iZXY", "I"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("-1XX"), p("-XX"));
        assert_eq!(p("+1XX"), p("XX"));
        assert!("".parse::<PauliString>().is_err());
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("-i".parse::<PauliString>().is_err());
        assert!("I".repeat(65).parse::<PauliString>().is_err());
        assert_eq!(p(&"Z".repeat(64)).n_qubits(), 64);
    }

    #[test]
    fn qubit_zero_is_leftmost() {
        let s = p("IXY");
        assert_eq!(s.letter(0), Pauli::I);
        assert_eq!(s.letter(2), Pauli::Y);
        assert_eq!(s.x_mask(), 0b110);
        assert_eq!(s.z_mask(), 0b100);
    }

    #[test]
    fn ordering_is_lexicographic() {
        let mut v = vec![p("ZI"), p("IX"), p("XZ"), p("XI"), p("YY")];
        v.sort();
        let t: Vec<String> = v.iter().map(|s| s.to_string()).collect();
        assert_eq!(t, ["IX", "XI", "XZ", "YY", "ZI"]);
    }
}
