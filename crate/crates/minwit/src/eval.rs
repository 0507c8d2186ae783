//! Witness evaluation on correlation data: uncertainty propagation,
//! significance, per-cut verdicts, noise robustness, and θ-sweeps over the
//! interpolating state family.

use serde::{Deserialize, Serialize};

use crate::correlations::CorrelationSet;
use crate::error::{Error, Result};
use crate::families::{named_criteria, NamedFamily};
use crate::pauli::PauliString;
use crate::rational::rat_to_f64;
use crate::state::psi_state;
use crate::witness::{CutCriterion, WitnessSpec};

/// Overall verdict of a witness evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// The combined witness or the full set of per-cut criteria rules out
    /// every biseparable model.
    GenuineMultipartite,
    /// No violation established by this data.
    NotDetected,
}

/// Outcome of a single per-cut criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutVerdict {
    /// The criterion exceeds its biseparable bound.
    Violated,
    /// The criterion stays at or below its bound.
    NotViolated,
    /// No criterion exists for this cut (no cut-anticommuting pair).
    Unavailable,
}

/// JSON-safe (de)serialization for f64 fields that may legitimately be ±∞
/// (zero-stderr significances) or NaN (unavailable cuts): non-finite values
/// are written as the strings "inf", "-inf", "nan" instead of JSON null.
mod ext_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
            Null,
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) => match t.as_str() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => other.parse().map_err(serde::de::Error::custom),
            },
            Raw::Null => Ok(f64::NAN),
        }
    }
}

/// One evaluated per-cut criterion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CutResult {
    /// Display form of the bipartition, e.g. "AB|CD".
    pub cut: String,
    /// Criterion value Σ c_i T_i² (NaN when unavailable).
    #[serde(with = "ext_f64")]
    pub value: f64,
    /// Propagated standard error of the value.
    #[serde(with = "ext_f64")]
    pub stderr: f64,
    /// Biseparable bound for this criterion (1/2 for averaged criteria).
    pub bound: f64,
    /// Standard deviations of violation, (value − bound)/stderr.
    #[serde(with = "ext_f64")]
    pub significance: f64,
    /// Verdict for this cut alone.
    pub verdict: CutVerdict,
}

/// Full evaluation of a witness against one correlation data set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvaluationReport {
    /// Name of the evaluated witness.
    pub witness_id: String,
    /// Register size.
    pub n_qubits: usize,
    /// Witness value (1/G₀)·Σ v_j T_j² using raw squared estimates.
    pub value: f64,
    /// Same sum with each T_j² replaced by the bias-corrected T_j² − Var[T_j].
    pub value_bias_corrected: f64,
    /// First-order propagated standard error of `value`.
    pub stderr: f64,
    /// Biseparable threshold G/G₀.
    pub threshold: f64,
    /// Standard deviations by which `value` exceeds the threshold.
    #[serde(with = "ext_f64")]
    pub significance: f64,
    /// Per-bipartition criteria results.
    pub per_cut: Vec<CutResult>,
    /// Overall verdict.
    pub verdict: Verdict,
}

/// Number of standard deviations by which `value` exceeds `bound`.
///
/// With vanishing `stderr` the result degenerates to ±∞ (0 when exactly at
/// the bound), so callers can keep comparing without special cases.
pub fn significance_check(value: f64, stderr: f64, bound: f64) -> f64 {
    if stderr > 0.0 {
        (value - bound) / stderr
    } else if value > bound {
        f64::INFINITY
    } else if value < bound {
        f64::NEG_INFINITY
    } else {
        0.0
    }
}

fn require_correlation(corrs: &CorrelationSet, op: &PauliString, what: &str) -> Result<(f64, f64)> {
    let (value, stderr) = corrs
        .get(op)
        .ok_or_else(|| Error::Data(format!("missing correlation for operator {op} required by {what}")))?;
    if value.abs() > 1.0 + 1e-12 {
        return Err(Error::Validation(format!(
            "correlation for operator {op} has magnitude {value} > 1"
        )));
    }
    Ok((value, stderr))
}

/// Evaluates one per-cut criterion, propagating errors to first order.
///
/// A criterion flagged unavailable at construction time, or whose operators
/// the data does not cover, yields an `Unavailable` verdict with NaN fields
/// rather than an error: the cut criteria are auxiliary diagnostics, and only
/// the witness's own operators are mandatory in the data.
fn evaluate_criterion(criterion: &CutCriterion, corrs: &CorrelationSet) -> Result<CutResult> {
    let bound = rat_to_f64(&criterion.bound);
    if !criterion.available || criterion.operators.iter().any(|op| !corrs.contains(op)) {
        return Ok(CutResult {
            cut: criterion.cut.to_string(),
            value: f64::NAN,
            stderr: f64::NAN,
            bound,
            significance: f64::NAN,
            verdict: CutVerdict::Unavailable,
        });
    }
    let mut value = 0.0;
    let mut variance = 0.0;
    for (op, coeff) in criterion.operators.iter().zip(&criterion.coefficients) {
        let (t, sigma) = require_correlation(corrs, op, "a cut criterion")?;
        let c = rat_to_f64(coeff);
        value += c * t * t;
        variance += (2.0 * c * t * sigma).powi(2);
    }
    let stderr = variance.sqrt();
    let verdict = if value > bound {
        CutVerdict::Violated
    } else {
        CutVerdict::NotViolated
    };
    Ok(CutResult {
        cut: criterion.cut.to_string(),
        value,
        stderr,
        bound,
        significance: significance_check(value, stderr, bound),
        verdict,
    })
}

/// Evaluates a witness and its per-cut criteria on measured correlations.
///
/// Every operator appearing in the witness or its criteria must be present in
/// `corrs`; a missing entry is a data error rather than an implicit zero.
/// Errors on the individual correlations are propagated to first order
/// assuming independence, Var[W] = (1/G₀²)·Σ (2 v_j T_j)² Var[T_j].
pub fn evaluate(witness: &WitnessSpec, corrs: &CorrelationSet) -> Result<EvaluationReport> {
    witness.validate()?;
    if corrs.n_qubits() != witness.n_qubits {
        return Err(Error::Dimension(format!(
            "witness acts on {} qubits but correlations describe {}",
            witness.n_qubits,
            corrs.n_qubits()
        )));
    }
    let g0 = rat_to_f64(&witness.g0);
    let mut sum = 0.0;
    let mut corrected = 0.0;
    let mut variance = 0.0;
    for (op, weight) in witness.operators.iter().zip(&witness.weights) {
        let (t, sigma) = require_correlation(corrs, op, "the witness")?;
        let v = rat_to_f64(weight);
        sum += v * t * t;
        corrected += v * (t * t - sigma * sigma);
        variance += (2.0 * v * t * sigma).powi(2);
    }
    let value = sum / g0;
    let value_bias_corrected = corrected / g0;
    let stderr = variance.sqrt() / g0;
    let threshold = witness.threshold_f64();
    let significance = significance_check(value, stderr, threshold);

    let per_cut: Vec<CutResult> = witness
        .per_cut
        .iter()
        .map(|criterion| evaluate_criterion(criterion, corrs))
        .collect::<Result<_>>()?;

    // All-cut detection requires a criterion for every bipartition, each one
    // available and violated.
    let cuts_expected = (1usize << (witness.n_qubits - 1)) - 1;
    let all_cuts = per_cut.len() == cuts_expected
        && per_cut.iter().all(|c| c.verdict == CutVerdict::Violated);
    let verdict = if value > threshold || all_cuts {
        Verdict::GenuineMultipartite
    } else {
        Verdict::NotDetected
    };

    Ok(EvaluationReport {
        witness_id: witness.name.clone(),
        n_qubits: witness.n_qubits,
        value,
        value_bias_corrected,
        stderr,
        threshold,
        significance,
        per_cut,
        verdict,
    })
}

/// White-noise robustness of a witness: the admixture parameter p at which
/// ρ = p·|ψ⟩⟨ψ| + (1−p)·1/2^N stops being detected.
///
/// Since every non-identity correlation scales with p, the witness value is
/// p²·Σ v_j T_j²/G₀ and the detection boundary is p_crit = √(G / Σ v_j T_j²).
/// Returns `None` when even the pure target is not detected.
pub fn critical_noise(witness: &WitnessSpec, ideal_corrs: &CorrelationSet) -> Result<Option<f64>> {
    let mut sum = 0.0;
    for (op, weight) in witness.operators.iter().zip(&witness.weights) {
        let (t, _) = require_correlation(ideal_corrs, op, "the witness")?;
        sum += rat_to_f64(weight) * t * t;
    }
    let g = rat_to_f64(&witness.g);
    if sum <= g {
        return Ok(None);
    }
    Ok(Some((g / sum).sqrt()))
}

/// One point of a θ-sweep over the interpolating family Ψ(θ,φ).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SweepPoint {
    /// Preparation angle θ in radians.
    pub theta: f64,
    /// Relative phase φ in radians.
    pub phi: f64,
    /// White-noise admixture parameter p.
    pub noise_p: f64,
    /// Value of the combined GHZ witness on the noisy state.
    pub w_ghz: f64,
    /// Value of the combined cluster witness on the noisy state.
    pub w_cluster: f64,
    /// Fidelity of the noisy state with respect to the pure Ψ(θ,φ).
    pub fidelity: f64,
}

/// Noise parameter reproducing a target fidelity under white-noise admixture:
/// F = p + (1 − p)/2^N  ⇒  p = (F − 1/2^N)/(1 − 1/2^N).
pub fn noise_for_fidelity(fidelity: f64, n_qubits: usize) -> Result<f64> {
    let floor = 1.0 / (1u64 << n_qubits) as f64;
    if !(floor..=1.0).contains(&fidelity) {
        return Err(Error::Argument(format!(
            "target fidelity {fidelity} outside the reachable range [{floor}, 1]"
        )));
    }
    Ok((fidelity - floor) / (1.0 - floor))
}

fn witness_value_scaled(witness: &WitnessSpec, psi: &crate::state::StateVector, p: f64) -> Result<f64> {
    let mut sum = 0.0;
    for (op, weight) in witness.operators.iter().zip(&witness.weights) {
        let t = p * psi.correlation(op)?;
        sum += rat_to_f64(weight) * t * t;
    }
    Ok(sum / rat_to_f64(&witness.g0))
}

/// Sweeps the family Ψ(θ,φ) over the given angles with per-point white noise,
/// evaluating the combined GHZ and cluster witnesses and the fidelity of the
/// noisy state with its pure target.
pub fn theta_sweep_points(phi: f64, points: &[(f64, f64)]) -> Result<Vec<SweepPoint>> {
    if points.is_empty() {
        return Err(Error::Argument("sweep needs at least one θ point".to_string()));
    }
    let ghz = named_criteria(NamedFamily::Ghz4)
        .combined
        .expect("GHZ family has a combined witness");
    let cluster = named_criteria(NamedFamily::Cluster4)
        .combined
        .expect("cluster family has a combined witness");
    let mut out = Vec::with_capacity(points.len());
    for &(theta, p) in points {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Argument(format!(
                "noise parameter p must lie in [0, 1], got {p}"
            )));
        }
        let psi = psi_state(theta, phi)?;
        out.push(SweepPoint {
            theta,
            phi,
            noise_p: p,
            w_ghz: witness_value_scaled(&ghz, &psi, p)?,
            w_cluster: witness_value_scaled(&cluster, &psi, p)?,
            fidelity: p + (1.0 - p) / 16.0,
        });
    }
    Ok(out)
}

/// Sweep with a single noise parameter shared by all points.
pub fn theta_sweep(phi: f64, thetas: &[f64], noise_p: f64) -> Result<Vec<SweepPoint>> {
    let points: Vec<(f64, f64)> = thetas.iter().map(|&t| (t, noise_p)).collect();
    theta_sweep_points(phi, &points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::ghz_state;
    use std::f64::consts::PI;

    fn ideal_ghz_corrs() -> CorrelationSet {
        ghz_state(4).unwrap().nonvanishing_correlations(1e-12).unwrap()
    }

    fn ghz_witness() -> WitnessSpec {
        named_criteria(NamedFamily::Ghz4).combined.unwrap()
    }

    #[test]
    fn ideal_ghz_scores_one_with_zero_error() {
        let report = evaluate(&ghz_witness(), &ideal_ghz_corrs()).unwrap();
        assert!((report.value - 1.0).abs() < 1e-12);
        assert_eq!(report.stderr, 0.0);
        assert_eq!(report.significance, f64::INFINITY);
        assert_eq!(report.verdict, Verdict::GenuineMultipartite);
        assert_eq!(report.per_cut.len(), 7);
        for cut in &report.per_cut {
            assert_eq!(cut.verdict, CutVerdict::Violated);
            assert!((cut.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn missing_correlation_is_a_data_error() {
        let witness = ghz_witness();
        let mut corrs = CorrelationSet::new(4).unwrap();
        corrs.insert("3333".parse().unwrap(), 1.0, 0.0).unwrap();
        let err = evaluate(&witness, &corrs).unwrap_err();
        assert!(matches!(err, Error::Data(_)));
        assert!(err.to_string().contains("3300") || err.to_string().contains("1221"));
    }

    #[test]
    fn significance_handles_zero_stderr() {
        assert!((significance_check(0.894, 0.007, 0.5) - 56.2857).abs() < 1e-3);
        assert_eq!(significance_check(0.7, 0.0, 0.5), f64::INFINITY);
        assert_eq!(significance_check(0.3, 0.0, 0.5), f64::NEG_INFINITY);
        assert_eq!(significance_check(0.5, 0.0, 0.5), 0.0);
        assert!((significance_check(0.916, 0.005, 7.0 / 11.0) - 55.9273).abs() < 1e-3);
    }

    #[test]
    fn critical_noise_matches_threshold_ratio() {
        let p = critical_noise(&ghz_witness(), &ideal_ghz_corrs())
            .unwrap()
            .unwrap();
        assert!((p - (7.0f64 / 11.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_witness_never_detects() {
        let mut witness = ghz_witness();
        witness.g = witness.g0.clone();
        let report = evaluate(&witness, &ideal_ghz_corrs()).unwrap();
        assert_eq!(report.verdict, Verdict::GenuineMultipartite); // all cuts still violated
        let p = critical_noise(&witness, &ideal_ghz_corrs()).unwrap();
        assert!(p.is_none());
    }

    #[test]
    fn sweep_reproduces_family_values() {
        let thetas: Vec<f64> = (0..13).map(|k| k as f64 * PI / 48.0).collect();
        let points = theta_sweep(PI, &thetas, 1.0).unwrap();
        assert_eq!(points.len(), 13);
        // θ = 0 is the GHZ state: w_ghz = 1, w_cluster = 1/3.
        assert!((points[0].w_ghz - 1.0).abs() < 1e-10);
        assert!((points[0].w_cluster - 1.0 / 3.0).abs() < 1e-10);
        // θ = π/8 is the cluster state: w_cluster = 1, w_ghz = 7/11.
        let mid = &points[6];
        assert!((mid.theta - PI / 8.0).abs() < 1e-12);
        assert!((mid.w_cluster - 1.0).abs() < 1e-10);
        assert!((mid.w_ghz - 7.0 / 11.0).abs() < 1e-10);
        // θ = π/4 is a GHZ state again.
        assert!((points[12].w_ghz - 1.0).abs() < 1e-10);
        assert!((points[0].fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_noise_scales_quadratically() {
        let clean = theta_sweep(PI, &[0.0], 1.0).unwrap()[0];
        let noisy = theta_sweep(PI, &[0.0], 0.5).unwrap()[0];
        assert!((noisy.w_ghz - 0.25 * clean.w_ghz).abs() < 1e-12);
        assert!((noisy.fidelity - (0.5 + 0.5 / 16.0)).abs() < 1e-12);
        assert!(theta_sweep(PI, &[0.0], 1.5).is_err());
    }

    #[test]
    fn noise_for_fidelity_inverts_white_noise() {
        let p = noise_for_fidelity(0.9, 4).unwrap();
        assert!(((p + (1.0 - p) / 16.0) - 0.9).abs() < 1e-12);
        assert!(noise_for_fidelity(0.01, 4).is_err());
    }
}
