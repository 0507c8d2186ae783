//! Correlation data: measured or exact expectation values with
//! uncertainties, raw measurement counts, and the counts → correlations
//! estimator.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pauli::{MeasurementSetting, PauliString};

/// A set of Pauli correlations T_j with standard errors.
///
/// Values are constrained to [−1, 1], errors to finite nonnegative
/// numbers; the identity entry, when present, must be exactly (1, 0).
/// An entry with stderr 0 is exact.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationSet {
    n_qubits: usize,
    entries: BTreeMap<PauliString, (f64, f64)>,
}

impl CorrelationSet {
    /// An empty set over `n_qubits` qubits.
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > crate::pauli::MAX_QUBITS {
            return Err(Error::Argument(format!(
                "correlation sets support 1..={} qubits, got {n_qubits}",
                crate::pauli::MAX_QUBITS
            )));
        }
        Ok(CorrelationSet { n_qubits, entries: BTreeMap::new() })
    }

    /// Number of qubits.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of stored entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when no entries are stored.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Inserts or replaces the entry for `j`.
    pub fn insert(&mut self, j: PauliString, value: f64, stderr: f64) -> Result<()> {
        if j.n_qubits() != self.n_qubits {
            return Err(Error::Dimension(format!(
                "operator {j} acts on {} qubits, set holds {}",
                j.n_qubits(),
                self.n_qubits
            )));
        }
        if !value.is_finite() || value.abs() > 1.0 {
            return Err(Error::Validation(format!(
                "correlation value for {j} must lie in [-1,1], got {value}"
            )));
        }
        if !stderr.is_finite() || stderr < 0.0 {
            return Err(Error::Validation(format!(
                "standard error for {j} must be a finite nonnegative number, got {stderr}"
            )));
        }
        if j.is_identity() && (value != 1.0 || stderr != 0.0) {
            return Err(Error::Validation(format!(
                "the identity correlation is 1 with no uncertainty, got {value} ± {stderr}"
            )));
        }
        self.entries.insert(j, (value, stderr));
        Ok(())
    }

    /// The entry for `j`, if present.
    pub fn get(&self, j: &PauliString) -> Option<(f64, f64)> {
        self.entries.get(j).copied()
    }

    /// True when an entry for `j` is stored.
    pub fn contains(&self, j: &PauliString) -> bool {
        self.entries.contains_key(j)
    }

    /// The entry for `j`, or a data error naming the missing operator.
    /// Missing correlations are never treated as zero.
    pub fn require(&self, j: &PauliString) -> Result<(f64, f64)> {
        self.get(j).ok_or_else(|| {
            Error::Data(format!("no correlation value provided for operator {j}"))
        })
    }

    /// Iterates over (operator, value, stderr) in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, f64, f64)> {
        self.entries.iter().map(|(j, &(v, s))| (j, v, s))
    }
}

/// Raw counts of one measurement setting: outcome pattern → occurrences.
///
/// An outcome pattern is an N-character string over {0, 1}, site 1 first;
/// bit b at a site means that site's local eigenvalue was (−1)^b.
#[derive(Clone, Debug, PartialEq)]
pub struct CountsRecord {
    setting: MeasurementSetting,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl CountsRecord {
    /// Wraps validated counts: patterns must be n-bit strings and the
    /// occurrences must sum to `shots`.
    pub fn new(
        setting: MeasurementSetting,
        shots: u64,
        counts: BTreeMap<String, u64>,
    ) -> Result<Self> {
        if shots == 0 {
            return Err(Error::Validation("shots must be positive".into()));
        }
        let n = setting.n_qubits();
        for pattern in counts.keys() {
            if pattern.len() != n || !pattern.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::Validation(format!(
                    "outcome {pattern:?} is not a {n}-bit pattern"
                )));
            }
        }
        let total: u64 = counts.values().sum();
        if total != shots {
            return Err(Error::Validation(format!(
                "counts sum to {total} but shots is {shots}"
            )));
        }
        Ok(CountsRecord { setting, shots, counts })
    }

    /// The measured setting.
    pub fn setting(&self) -> &MeasurementSetting {
        &self.setting
    }

    /// Total number of shots.
    pub fn shots(&self) -> u64 {
        self.shots
    }

    /// Outcome pattern → occurrences.
    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }
}

/// Sign of outcome `pattern` for operator `j`: the parity of −1 eigenvalues
/// over the sites where `j` is non-identity.
fn outcome_sign(pattern: &str, j: &PauliString) -> f64 {
    let minus_sites = pattern
        .chars()
        .enumerate()
        .filter(|&(i, c)| c == '1' && j.digit(i + 1) != 0)
        .count();
    if minus_sites % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Estimates correlations from measured counts.
///
/// For each record with M shots and each operator j derivable from its
/// setting, T̂_j = Σ_s sign(s, j) · n_s / M with
/// stderr = sqrt((1 − T̂_j²)/(M − 1)). When several settings determine the
/// same operator, estimates are combined by inverse-variance weighting;
/// an exact estimate (stderr 0) takes precedence, and two conflicting
/// exact estimates are a data error.
pub fn correlations_from_counts(records: &[CountsRecord]) -> Result<CorrelationSet> {
    if records.is_empty() {
        return Err(Error::Data("no counts records provided".into()));
    }
    let n = records[0].setting.n_qubits();
    let mut estimates: BTreeMap<PauliString, Vec<(f64, f64)>> = BTreeMap::new();
    for record in records {
        if record.setting.n_qubits() != n {
            return Err(Error::Dimension(format!(
                "counts records mix register sizes {n} and {}",
                record.setting.n_qubits()
            )));
        }
        if record.shots < 2 {
            return Err(Error::Data(format!(
                "setting {} has {} shots; at least 2 are needed to estimate errors",
                record.setting, record.shots
            )));
        }
        let m = record.shots as f64;
        for j in record.setting.derivable_indices() {
            let sum: f64 = record
                .counts
                .iter()
                .map(|(pattern, &c)| outcome_sign(pattern, &j) * c as f64)
                .sum();
            let value = (sum / m).clamp(-1.0, 1.0);
            let stderr = ((1.0 - value * value).max(0.0) / (m - 1.0)).sqrt();
            estimates.entry(j).or_default().push((value, stderr));
        }
    }

    let mut set = CorrelationSet::new(n)?;
    for (j, ests) in estimates {
        let exact: Vec<f64> = ests.iter().filter(|(_, s)| *s == 0.0).map(|&(v, _)| v).collect();
        let (value, stderr) = if let Some(&first) = exact.first() {
            if exact.iter().any(|&v| (v - first).abs() > 1e-12) {
                return Err(Error::Data(format!(
                    "conflicting exact estimates for operator {j}"
                )));
            }
            (first, 0.0)
        } else {
            let weight_sum: f64 = ests.iter().map(|&(_, s)| s.powi(-2)).sum();
            let mean: f64 = ests.iter().map(|&(v, s)| v * s.powi(-2)).sum::<f64>() / weight_sum;
            (mean.clamp(-1.0, 1.0), weight_sum.sqrt().recip())
        };
        set.insert(j, value, stderr)?;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn record(setting: &str, shots: u64, counts: &[(&str, u64)]) -> CountsRecord {
        CountsRecord::new(
            setting.parse().unwrap(),
            shots,
            counts.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn set_validates_entries() {
        let mut set = CorrelationSet::new(4).unwrap();
        assert!(set.insert(p("3333"), 0.5, 0.01).is_ok());
        assert!(set.insert(p("3333"), 1.5, 0.0).is_err());
        assert!(set.insert(p("3333"), 0.5, -0.1).is_err());
        assert!(set.insert(p("333"), 0.5, 0.0).is_err());
        assert!(set.insert(p("0000"), 0.9, 0.0).is_err());
        assert!(set.insert(p("0000"), 1.0, 0.0).is_ok());
        assert!(matches!(set.require(&p("1221")), Err(Error::Data(_))));
        assert_eq!(set.require(&p("3333")).unwrap(), (0.5, 0.01));
    }

    #[test]
    fn counts_record_checks_shape() {
        assert!(CountsRecord::new(
            "33".parse().unwrap(),
            3,
            [("00".to_string(), 2), ("11".to_string(), 1)].into(),
        )
        .is_ok());
        assert!(CountsRecord::new(
            "33".parse().unwrap(),
            3,
            [("00".to_string(), 2)].into(),
        )
        .is_err());
        assert!(CountsRecord::new(
            "33".parse().unwrap(),
            2,
            [("012".to_string(), 2)].into(),
        )
        .is_err());
    }

    #[test]
    fn estimator_parity_arithmetic() {
        // Half the shots on 0000 and half on 1111 under M_3333.
        let rec = record("3333", 4000, &[("0000", 2000), ("1111", 2000)]);
        let corrs = correlations_from_counts(&[rec]).unwrap();
        assert_eq!(corrs.require(&p("3333")).unwrap(), (1.0, 0.0));
        assert_eq!(corrs.require(&p("0033")).unwrap(), (1.0, 0.0));
        let (v, s) = corrs.require(&p("3000")).unwrap();
        assert_eq!(v, 0.0);
        assert!((s - (1.0f64 / 3999.0).sqrt()).abs() < 1e-15);
        assert_eq!(corrs.require(&p("0000")).unwrap(), (1.0, 0.0));
    }

    #[test]
    fn estimator_deterministic_outcome() {
        let rec = record("33", 100, &[("00", 100)]);
        let corrs = correlations_from_counts(&[rec]).unwrap();
        for s in ["00", "03", "30", "33"] {
            assert_eq!(corrs.require(&p(s)).unwrap(), (1.0, 0.0));
        }
    }

    #[test]
    fn estimator_uniform_counts() {
        let outcomes: Vec<(String, u64)> = (0..16)
            .map(|b| (format!("{b:04b}"), 100))
            .collect();
        let rec = CountsRecord::new("3333".parse().unwrap(), 1600, outcomes.into_iter().collect())
            .unwrap();
        let corrs = correlations_from_counts(&[rec]).unwrap();
        let expected = (1.0f64 / 1599.0).sqrt();
        for j in "3333".parse::<MeasurementSetting>().unwrap().derivable_indices() {
            let (v, s) = corrs.require(&j).unwrap();
            if j.is_identity() {
                assert_eq!((v, s), (1.0, 0.0));
            } else {
                assert_eq!(v, 0.0);
                assert!((s - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn inverse_variance_combination() {
        // Two settings sharing the operator 0033, with different errors.
        let rec_a = record("3333", 1000, &[("0000", 900), ("0001", 100)]);
        let rec_b = record("1133", 1000, &[("0000", 800), ("0001", 200)]);
        let corrs = correlations_from_counts(&[rec_a.clone(), rec_b.clone()]).unwrap();
        let solo_a = correlations_from_counts(&[rec_a]).unwrap();
        let solo_b = correlations_from_counts(&[rec_b]).unwrap();
        let (va, sa) = solo_a.require(&p("0033")).unwrap();
        let (vb, sb) = solo_b.require(&p("0033")).unwrap();
        let wa = sa.powi(-2);
        let wb = sb.powi(-2);
        let (v, s) = corrs.require(&p("0033")).unwrap();
        assert!((v - (va * wa + vb * wb) / (wa + wb)).abs() < 1e-12);
        assert!((s - (wa + wb).sqrt().recip()).abs() < 1e-12);
        assert!(s < sa.min(sb));
    }

    #[test]
    fn conflicting_exact_estimates_error() {
        let rec_a = record("33", 10, &[("00", 10)]);
        let rec_b = record("13", 10, &[("11", 10)]);
        // Both records pin T_03 exactly: +1 from the first, −1 from the second.
        assert!(matches!(
            correlations_from_counts(&[rec_a, rec_b]),
            Err(Error::Data(_))
        ));
    }

    #[test]
    fn estimator_requires_two_shots() {
        let rec = record("33", 1, &[("00", 1)]);
        assert!(correlations_from_counts(&[rec]).is_err());
        assert!(correlations_from_counts(&[]).is_err());
    }
}
