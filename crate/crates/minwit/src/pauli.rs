//! Exact algebra of N-qubit Pauli strings.
//!
//! A Pauli string is a tensor product of single-qubit operators
//! {I, σ₁, σ₂, σ₃} = {I, X, Y, Z}, written as a digit string over
//! {0, 1, 2, 3} with one digit per qubit (qubit 1 first), e.g. `"1221"`
//! for σ₁ ⊗ σ₂ ⊗ σ₂ ⊗ σ₁. Strings are stored symplectically as an
//! (X-mask, Z-mask) pair so commutation is a word-parallel parity check;
//! global phases of products are never tracked because every quantity in
//! this crate depends only on squared correlations and (anti)commutation.
//!
//! The module also provides measurement settings (one non-identity local
//! Pauli per site, from which all 2^N sub-correlations can be inferred)
//! and bipartitions (cuts) of the qubit set, with the restricted
//! anticommutation test that drives the whole witness construction.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Maximum number of qubits supported by the textual interfaces.
///
/// Bipartitions name qubits with letters `A`..`Z`, which caps the register
/// size at 26; all bit masks then fit comfortably in a `u32`.
pub const MAX_QUBITS: usize = 26;

fn check_n_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Argument("number of qubits must be positive".into()));
    }
    if n > MAX_QUBITS {
        return Err(Error::Argument(format!(
            "at most {MAX_QUBITS} qubits are supported, got {n}"
        )));
    }
    Ok(())
}

/// An N-site tensor product of {I, σ₁, σ₂, σ₃}, stored as X/Z bit masks.
///
/// Bit `i` (zero-based) of a mask refers to qubit `i + 1`. Digit mapping:
/// `1` (X) sets only the X bit, `3` (Z) sets only the Z bit, `2` (Y) sets
/// both, `0` (I) sets neither.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_qubits: u8,
    x_mask: u32,
    z_mask: u32,
}

impl PauliString {
    /// Builds a string from per-site digits over {0, 1, 2, 3}.
    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        check_n_qubits(digits.len())?;
        let mut x_mask = 0u32;
        let mut z_mask = 0u32;
        for (i, &d) in digits.iter().enumerate() {
            match d {
                0 => {}
                1 => x_mask |= 1 << i,
                2 => {
                    x_mask |= 1 << i;
                    z_mask |= 1 << i;
                }
                3 => z_mask |= 1 << i,
                _ => {
                    return Err(Error::Argument(format!(
                        "Pauli digit must be in 0..=3, got {d} at site {}",
                        i + 1
                    )))
                }
            }
        }
        Ok(PauliString { n_qubits: digits.len() as u8, x_mask, z_mask })
    }

    /// The identity string on `n` qubits.
    pub fn identity(n: usize) -> Result<Self> {
        check_n_qubits(n)?;
        Ok(PauliString { n_qubits: n as u8, x_mask: 0, z_mask: 0 })
    }

    /// Number of qubits the string acts on.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    /// The digit at `site` (1-based), in {0, 1, 2, 3}.
    pub fn digit(&self, site: usize) -> u8 {
        debug_assert!((1..=self.n_qubits()).contains(&site));
        let bit = 1u32 << (site - 1);
        match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
            (false, false) => 0,
            (true, false) => 1,
            (true, true) => 2,
            (false, true) => 3,
        }
    }

    /// All digits, qubit 1 first.
    pub fn digits(&self) -> Vec<u8> {
        (1..=self.n_qubits()).map(|s| self.digit(s)).collect()
    }

    /// The X-part bit mask (bit `i` ↔ qubit `i + 1`).
    pub fn x_mask(&self) -> u32 {
        self.x_mask
    }

    /// The Z-part bit mask (bit `i` ↔ qubit `i + 1`).
    pub fn z_mask(&self) -> u32 {
        self.z_mask
    }

    /// Mask of sites with a non-identity operator.
    pub fn support(&self) -> u32 {
        self.x_mask | self.z_mask
    }

    /// True for the all-identity string.
    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    fn check_same_size(&self, other: &PauliString) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension(format!(
                "Pauli strings act on {} vs {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(())
    }

    /// Whether two strings commute.
    ///
    /// Two Pauli strings commute exactly when the number of sites where
    /// both are non-identity and different is even. In symplectic form this
    /// is the parity of `popcount(x₁ & z₂) + popcount(z₁ & x₂)`.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_same_size(other)?;
        Ok(self.commutes_on(other, u32::MAX))
    }

    /// Commutation of the two strings restricted to the sites in `mask`.
    /// Callers guarantee equal sizes.
    fn commutes_on(&self, other: &PauliString, mask: u32) -> bool {
        let cross = (self.x_mask & other.z_mask & mask).count_ones()
            + (self.z_mask & other.x_mask & mask).count_ones();
        cross % 2 == 0
    }

    /// Restriction of the string to a subset of qubits.
    ///
    /// Returns the Pauli string on `subset.len()` qubits formed by the
    /// digits at those sites, in ascending site order. The subset must be
    /// nonempty with 1-based indices within range; duplicates are rejected.
    pub fn restrict(&self, subset: &[usize]) -> Result<PauliString> {
        if subset.is_empty() {
            return Err(Error::Argument("restriction subset must be nonempty".into()));
        }
        let mut sites: Vec<usize> = subset.to_vec();
        sites.sort_unstable();
        sites.dedup();
        if sites.len() != subset.len() {
            return Err(Error::Argument("restriction subset contains duplicates".into()));
        }
        if let Some(&bad) = sites.iter().find(|&&s| s == 0 || s > self.n_qubits()) {
            return Err(Error::Argument(format!(
                "site {bad} outside 1..={}",
                self.n_qubits()
            )));
        }
        let digits: Vec<u8> = sites.iter().map(|&s| self.digit(s)).collect();
        PauliString::from_digits(&digits)
    }

    /// Whether two strings anticommute when restricted to side A or side B
    /// of `cut` (inclusive or). This is the cut-anticommutativity relation
    /// from which the per-bipartition graphs are built.
    pub fn cut_anticommutes(&self, other: &PauliString, cut: &Bipartition) -> Result<bool> {
        self.check_same_size(other)?;
        if self.n_qubits() != cut.n_qubits() {
            return Err(Error::Dimension(format!(
                "Pauli strings act on {} qubits but the cut is over {}",
                self.n_qubits,
                cut.n_qubits()
            )));
        }
        let anti_a = !self.commutes_on(other, cut.side_a_mask());
        let anti_b = !self.commutes_on(other, cut.side_b_mask());
        Ok(anti_a || anti_b)
    }

    /// Whether this string can be inferred from `setting`, i.e. every
    /// non-identity digit matches the setting's local Pauli at that site.
    pub fn derivable_from(&self, setting: &MeasurementSetting) -> bool {
        if self.n_qubits() != setting.n_qubits() {
            return false;
        }
        (1..=self.n_qubits()).all(|s| {
            let d = self.digit(s);
            d == 0 || d == setting.local(s)
        })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for site in 1..=self.n_qubits() {
            write!(f, "{}", self.digit(site))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses a digit string such as `"1221"`.
    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::parse("empty Pauli string"));
        }
        let digits: Vec<u8> = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d <= 3)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::parse(format!("invalid Pauli digit {c:?} in {s:?}")))
            })
            .collect::<Result<_>>()?;
        if digits.len() > MAX_QUBITS {
            return Err(Error::parse(format!(
                "Pauli string {s:?} exceeds the {MAX_QUBITS}-qubit limit"
            )));
        }
        PauliString::from_digits(&digits)
    }
}

/// A measurement setting: one non-identity local Pauli per site.
///
/// From the single setting `M_k` all 2^N correlations `T_j` with
/// `j_i ∈ {0, k_i}` at every site can be inferred.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeasurementSetting {
    n_qubits: u8,
    locals: PauliString,
}

impl MeasurementSetting {
    /// Builds a setting from per-site Pauli labels over {1, 2, 3}.
    pub fn from_locals(locals: &[u8]) -> Result<Self> {
        check_n_qubits(locals.len())?;
        if let Some(pos) = locals.iter().position(|&d| !(1..=3).contains(&d)) {
            return Err(Error::Argument(format!(
                "measurement setting must fix a local basis in 1..=3 at every site; site {} is {}",
                pos + 1,
                locals[pos]
            )));
        }
        Ok(MeasurementSetting {
            n_qubits: locals.len() as u8,
            locals: PauliString::from_digits(locals)?,
        })
    }

    /// Number of qubits.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    /// The local Pauli label at a 1-based site, in {1, 2, 3}.
    pub fn local(&self, site: usize) -> u8 {
        self.locals.digit(site)
    }

    /// The full-weight Pauli string measured by this setting.
    pub fn as_pauli(&self) -> PauliString {
        self.locals
    }

    /// All 2^N Pauli strings inferable from this setting, identity included,
    /// ordered with the site-subset bit pattern ascending (identity first,
    /// the full setting string last).
    pub fn derivable_indices(&self) -> Vec<PauliString> {
        let n = self.n_qubits();
        let mut out = Vec::with_capacity(1 << n);
        for subset in 0u32..(1 << n) {
            let digits: Vec<u8> = (0..n)
                .map(|i| if subset & (1 << i) != 0 { self.local(i + 1) } else { 0 })
                .collect();
            out.push(PauliString::from_digits(&digits).expect("digits already validated"));
        }
        out
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.locals, f)
    }
}

impl fmt::Debug for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MeasurementSetting {
    type Err = Error;

    /// Parses a setting such as `"3333"`; all digits must be 1..=3.
    fn from_str(s: &str) -> Result<Self> {
        let pauli: PauliString = s.parse()?;
        let digits = pauli.digits();
        if digits.iter().any(|&d| d == 0) {
            return Err(Error::parse(format!(
                "measurement setting {s:?} must not contain identity sites"
            )));
        }
        MeasurementSetting::from_locals(&digits)
    }
}

/// A bipartition (cut) A|B of the qubit set {1..N}.
///
/// Stored canonically with side A as the side containing qubit 1, so each
/// of the 2^(N−1) − 1 cuts has exactly one representation. The textual
/// form names qubits `A`..`Z` and prints the smaller side first (the side
/// containing qubit 1 breaks ties), e.g. `"B|ACD"` or `"AB|CD"`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n_qubits: u8,
    side_a_mask: u32,
}

impl Bipartition {
    /// Builds a cut from the 1-based qubit indices of one side; the side is
    /// canonicalized so that stored side A contains qubit 1.
    pub fn new(n_qubits: usize, side: &[usize]) -> Result<Self> {
        check_n_qubits(n_qubits)?;
        if n_qubits < 2 {
            return Err(Error::Argument("a bipartition needs at least 2 qubits".into()));
        }
        let mut mask = 0u32;
        for &q in side {
            if q == 0 || q > n_qubits {
                return Err(Error::Argument(format!("qubit {q} outside 1..={n_qubits}")));
            }
            mask |= 1 << (q - 1);
        }
        let full = (1u32 << n_qubits) - 1;
        if mask == 0 || mask == full {
            return Err(Error::Argument(
                "both sides of a bipartition must be nonempty".into(),
            ));
        }
        let side_a_mask = if mask & 1 != 0 { mask } else { full & !mask };
        Ok(Bipartition { n_qubits: n_qubits as u8, side_a_mask })
    }

    /// Number of qubits.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    /// Bit mask of canonical side A (the side containing qubit 1).
    pub fn side_a_mask(&self) -> u32 {
        self.side_a_mask
    }

    /// Bit mask of side B.
    pub fn side_b_mask(&self) -> u32 {
        ((1u32 << self.n_qubits()) - 1) & !self.side_a_mask
    }

    /// 1-based qubit indices of canonical side A, ascending.
    pub fn side_a(&self) -> Vec<usize> {
        mask_to_sites(self.side_a_mask)
    }

    /// 1-based qubit indices of side B, ascending.
    pub fn side_b(&self) -> Vec<usize> {
        mask_to_sites(self.side_b_mask())
    }

    /// All 2^(n−1) − 1 canonical cuts of `n` qubits.
    ///
    /// Ordered by the size of the smaller side, then by that side's qubit
    /// set (lowest indices first); for n = 4 this is A|BCD, B|ACD, C|ABD,
    /// D|ABC, AB|CD, AC|BD, AD|BC.
    pub fn enumerate(n: usize) -> Result<Vec<Bipartition>> {
        check_n_qubits(n)?;
        if n < 2 {
            return Err(Error::Argument(
                "bipartitions require at least 2 qubits".into(),
            ));
        }
        let full = (1u32 << n) - 1;
        let mut cuts: Vec<Bipartition> = (1..full)
            .filter(|mask| mask & 1 != 0)
            .map(|side_a_mask| Bipartition { n_qubits: n as u8, side_a_mask })
            .collect();
        cuts.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
        Ok(cuts)
    }

    /// The mask of the side printed first: the smaller side, with the side
    /// containing qubit 1 breaking ties.
    fn display_first_mask(&self) -> u32 {
        let a = self.side_a_mask;
        let b = self.side_b_mask();
        match a.count_ones().cmp(&b.count_ones()) {
            Ordering::Less | Ordering::Equal => a,
            Ordering::Greater => b,
        }
    }

    fn order_key(&self) -> (u32, u32) {
        let first = self.display_first_mask();
        (first.count_ones(), first)
    }
}

fn mask_to_sites(mask: u32) -> Vec<usize> {
    (0..MAX_QUBITS).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

fn sites_to_letters(sites: &[usize]) -> String {
    sites.iter().map(|&q| (b'A' + (q - 1) as u8) as char).collect()
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let first = self.display_first_mask();
        let second = ((1u32 << self.n_qubits()) - 1) & !first;
        write!(
            f,
            "{}|{}",
            sites_to_letters(&mask_to_sites(first)),
            sites_to_letters(&mask_to_sites(second))
        )
    }
}

impl fmt::Debug for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Bipartition {
    /// Parses a cut such as `"AB|CD"` for a register of `n_qubits` qubits.
    ///
    /// Letters `A`..`Z` name qubits 1..26; the two groups must partition
    /// {1..n} exactly, each nonempty, with no repeats.
    pub fn parse(s: &str, n_qubits: usize) -> Result<Self> {
        check_n_qubits(n_qubits)?;
        let (left, right) = s
            .split_once('|')
            .ok_or_else(|| Error::parse(format!("bipartition {s:?} must contain '|'")))?;
        let mut seen = 0u32;
        let mut read_side = |part: &str| -> Result<Vec<usize>> {
            let mut side = Vec::new();
            for c in part.chars() {
                let c = c.to_ascii_uppercase();
                if !c.is_ascii_uppercase() {
                    return Err(Error::parse(format!(
                        "invalid qubit label {c:?} in bipartition {s:?}"
                    )));
                }
                let q = (c as u8 - b'A') as usize + 1;
                if q > n_qubits {
                    return Err(Error::parse(format!(
                        "qubit {c} outside the {n_qubits}-qubit register in {s:?}"
                    )));
                }
                if seen & (1 << (q - 1)) != 0 {
                    return Err(Error::parse(format!(
                        "qubit {c} appears twice in bipartition {s:?}"
                    )));
                }
                seen |= 1 << (q - 1);
                side.push(q);
            }
            Ok(side)
        };
        let left_side = read_side(left)?;
        let right_side = read_side(right)?;
        if left_side.is_empty() || right_side.is_empty() {
            return Err(Error::parse(format!(
                "both sides of bipartition {s:?} must be nonempty"
            )));
        }
        if seen != (1u32 << n_qubits) - 1 {
            return Err(Error::parse(format!(
                "bipartition {s:?} must mention every qubit of the {n_qubits}-qubit register"
            )));
        }
        Bipartition::new(n_qubits, &left_side)
    }
}
