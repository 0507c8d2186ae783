//! Independent brute-force checks of the biseparability bounds.
//!
//! Each suite samples adversarial states (Haar-random pure states, product
//! states across cuts, convex mixtures) and pushes toward the supremum with a
//! derivative-free direct search, then reports the largest value observed
//! against the claimed bound.  The bounds are theorems: an observed violation
//! beyond [`ORACLE_TOL`] indicates an implementation bug, not new physics.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Bipartition, PauliString};
use crate::rational::rat_to_f64;
use crate::state::{dense_pauli_matrix, StateVector, C64};
use crate::witness::WitnessSpec;

/// Numerical slack allowed on a bound before declaring a violation.
pub const ORACLE_TOL: f64 = 1e-9;

/// Outcome of one oracle suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleReport {
    /// Which suite produced the report.
    pub suite: String,
    /// Number of sampled states (excluding direct-search refinement steps).
    pub trials: u64,
    /// Largest value of the bounded quantity observed.
    pub max_observed: f64,
    /// The claimed bound.
    pub bound: f64,
    /// bound − max_observed; negative margins beyond tolerance fail the suite.
    pub margin: f64,
    /// Whether the bound held over all samples.
    pub pass: bool,
    /// Compact description of the extremal state found.
    pub worst_case_descriptor: String,
}

impl OracleReport {
    fn new(suite: String, trials: u64, max_observed: f64, bound: f64, descriptor: String) -> Self {
        OracleReport {
            suite,
            trials,
            max_observed,
            bound,
            margin: bound - max_observed,
            pass: max_observed <= bound + ORACLE_TOL,
            worst_case_descriptor: descriptor,
        }
    }
}

fn haar_amplitudes(dim: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    loop {
        let mut amps: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for a in &mut amps {
                *a /= norm;
            }
            return amps;
        }
    }
}

fn haar_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    StateVector::new(n, haar_amplitudes(1 << n, rng)).expect("normalized amplitudes")
}

fn describe_amplitudes(amps: &[C64]) -> String {
    let parts: Vec<String> = amps
        .iter()
        .map(|a| format!("[{:.6},{:.6}]", a.re, a.im))
        .collect();
    format!("[{}]", parts.join(","))
}

/// Convex weights summing to one.
fn random_weights(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-12).collect();
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    w
}

// ---------------------------------------------------------------------------
// Anticommuting-set bound: Σ_j T_j² ≤ 1
// ---------------------------------------------------------------------------

/// Verifies the anticommuting-set bound Σ_j T_j² ≤ 1 over Haar-random pure
/// states and random mixtures thereof.
pub fn check_anticommuting_bound(
    ops: &[PauliString],
    trials: u64,
    seed: u64,
) -> Result<OracleReport> {
    if ops.is_empty() {
        return Err(Error::Argument(
            "anticommuting-set check needs at least one operator".to_string(),
        ));
    }
    let n = ops[0].n_qubits();
    for (i, p) in ops.iter().enumerate() {
        for q in &ops[i + 1..] {
            if p.commutes(q)? {
                return Err(Error::Argument(format!(
                    "operators {p} and {q} commute; the set must pairwise anticommute"
                )));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_observed = f64::NEG_INFINITY;
    let mut descriptor = String::new();
    for trial in 0..trials {
        // Every fourth trial uses a mixture; correlations are convex in ρ.
        let (sum, desc) = if trial % 4 == 3 {
            let k = 2 + (trial as usize % 3);
            let weights = random_weights(k, &mut rng);
            let components: Vec<StateVector> =
                (0..k).map(|_| haar_state(n, &mut rng)).collect();
            let mut sum = 0.0;
            for op in ops {
                let t: f64 = components
                    .iter()
                    .zip(&weights)
                    .map(|(psi, w)| w * psi.correlation(op).expect("same register"))
                    .sum();
                sum += t * t;
            }
            (sum, format!("mixture of {k} pure states, weights {weights:?}"))
        } else {
            let psi = haar_state(n, &mut rng);
            let sum: f64 = ops
                .iter()
                .map(|op| {
                    let t = psi.correlation(op).expect("same register");
                    t * t
                })
                .sum();
            (sum, describe_amplitudes(psi.amplitudes()))
        };
        if sum > max_observed {
            max_observed = sum;
            descriptor = desc;
        }
    }
    Ok(OracleReport::new(
        "anticommuting_bound".to_string(),
        trials,
        max_observed,
        1.0,
        descriptor,
    ))
}

// ---------------------------------------------------------------------------
// Product states across a cut
// ---------------------------------------------------------------------------

/// Assembles the full register state a ⊗ b with `a` living on the cut's A
/// sites and `b` on its B sites (site 1 is the most significant basis bit).
pub fn product_state(cut: &Bipartition, a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let n = cut.n_qubits();
    let side_a = cut.side_a();
    let side_b = cut.side_b();
    if a.n_qubits() != side_a.len() || b.n_qubits() != side_b.len() {
        return Err(Error::Dimension(format!(
            "cut {cut} needs factors on {} and {} qubits, got {} and {}",
            side_a.len(),
            side_b.len(),
            a.n_qubits(),
            b.n_qubits()
        )));
    }
    let dim = 1usize << n;
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    for (full_index, amp) in amps.iter_mut().enumerate() {
        let mut ia = 0usize;
        for (k, site) in side_a.iter().enumerate() {
            let bit = full_index >> (n - site) & 1;
            ia |= bit << (side_a.len() - 1 - k);
        }
        let mut ib = 0usize;
        for (k, site) in side_b.iter().enumerate() {
            let bit = full_index >> (n - site) & 1;
            ib |= bit << (side_b.len() - 1 - k);
        }
        *amp = a.amplitudes()[ia] * b.amplitudes()[ib];
    }
    StateVector::new(n, amps)
}

/// Correlations of restricted operators on the two factors of a product
/// state; the full correlation is the product T_a·T_b.
struct RestrictedOps {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
    parts: Vec<(PauliString, PauliString)>,
}

impl RestrictedOps {
    fn new(ops: &[PauliString], cut: &Bipartition) -> Result<Self> {
        let side_a = cut.side_a();
        let side_b = cut.side_b();
        let parts = ops
            .iter()
            .map(|op| Ok((op.restrict(&side_a)?, op.restrict(&side_b)?)))
            .collect::<Result<_>>()?;
        Ok(RestrictedOps {
            side_a,
            side_b,
            parts,
        })
    }

    fn correlation(&self, idx: usize, a: &StateVector, b: &StateVector) -> f64 {
        let (pa, pb) = &self.parts[idx];
        a.correlation(pa).expect("restriction matches factor")
            * b.correlation(pb).expect("restriction matches factor")
    }
}

/// Derivative-free direct search over the real/imaginary coordinates of the
/// two factors, maximizing `objective` over product states across the cut.
fn refine_product_maximum(
    dims: (usize, usize),
    objective: &dyn Fn(&StateVector, &StateVector) -> f64,
    start: (&StateVector, &StateVector),
    min_step: f64,
) -> (f64, StateVector, StateVector) {
    let (dim_a, dim_b) = dims;
    let mut coords: Vec<f64> = Vec::with_capacity(2 * (dim_a + dim_b));
    for amp in start.0.amplitudes().iter().chain(start.1.amplitudes()) {
        coords.push(amp.re);
        coords.push(amp.im);
    }
    let build = |coords: &[f64]| -> Option<(StateVector, StateVector)> {
        let to_state = |slice: &[f64], dim: usize| -> Option<StateVector> {
            let mut amps: Vec<C64> = (0..dim)
                .map(|i| C64::new(slice[2 * i], slice[2 * i + 1]))
                .collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-9 {
                return None;
            }
            for a in &mut amps {
                *a /= norm;
            }
            StateVector::new(dim.trailing_zeros() as usize, amps).ok()
        };
        let a = to_state(&coords[..2 * dim_a], dim_a)?;
        let b = to_state(&coords[2 * dim_a..], dim_b)?;
        Some((a, b))
    };

    let (mut best_a, mut best_b) = (start.0.clone(), start.1.clone());
    let mut best = objective(&best_a, &best_b);
    let mut step = 0.25;
    while step > min_step {
        let mut improved = false;
        for i in 0..coords.len() {
            for delta in [step, -step] {
                let original = coords[i];
                coords[i] = original + delta;
                if let Some((a, b)) = build(&coords) {
                    let value = objective(&a, &b);
                    if value > best + 1e-15 {
                        best = value;
                        best_a = a;
                        best_b = b;
                        improved = true;
                        continue; // keep the improved coordinate
                    }
                }
                coords[i] = original;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, best_a, best_b)
}

/// Verifies the two-operator biseparability bound T_p² + T_q² ≤ 1 for states
/// separable across `cut`, including the numerical factorization identity
/// T(p) = T_A(p)·T_B(p) on sampled product states, and refines the maximum by
/// direct search.
pub fn check_biseparable_bound(
    p: &PauliString,
    q: &PauliString,
    cut: &Bipartition,
    trials: u64,
    seed: u64,
) -> Result<OracleReport> {
    if !p.cut_anticommutes(q, cut)? {
        return Err(Error::Argument(format!(
            "operators {p} and {q} do not cut-anticommute for {cut}"
        )));
    }
    let ops = [*p, *q];
    let restricted = RestrictedOps::new(&ops, cut)?;
    let dim_a = 1usize << restricted.side_a.len();
    let dim_b = 1usize << restricted.side_b.len();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_observed = f64::NEG_INFINITY;
    let mut best_pair: Option<(StateVector, StateVector)> = None;
    for trial in 0..trials {
        let a = StateVector::new(restricted.side_a.len(), haar_amplitudes(dim_a, &mut rng))?;
        let b = StateVector::new(restricted.side_b.len(), haar_amplitudes(dim_b, &mut rng))?;
        let ta = restricted.correlation(0, &a, &b);
        let tb = restricted.correlation(1, &a, &b);
        let value = ta * ta + tb * tb;
        if trial % 1024 == 0 {
            // Cross-check the factorization against the assembled state.
            let full = product_state(cut, &a, &b)?;
            for (idx, op) in ops.iter().enumerate() {
                let direct = full.correlation(op)?;
                let factored = restricted.correlation(idx, &a, &b);
                if (direct - factored).abs() > 1e-10 {
                    return Err(Error::Validation(format!(
                        "product-state factorization failed for {op}: {direct} vs {factored}"
                    )));
                }
            }
        }
        if value > max_observed {
            max_observed = value;
            best_pair = Some((a, b));
        }
    }

    let objective = |a: &StateVector, b: &StateVector| -> f64 {
        let ta = restricted.correlation(0, a, b);
        let tb = restricted.correlation(1, a, b);
        ta * ta + tb * tb
    };
    let mut descriptor = String::new();
    if let Some((a, b)) = best_pair {
        let (refined, ra, rb) =
            refine_product_maximum((dim_a, dim_b), &objective, (&a, &b), 1e-6);
        max_observed = max_observed.max(refined);
        descriptor = format!(
            "A-side {} ⊗ B-side {}",
            describe_amplitudes(ra.amplitudes()),
            describe_amplitudes(rb.amplitudes())
        );
    }
    Ok(OracleReport::new(
        format!("biseparable_bound[{p},{q};{cut}]"),
        trials,
        max_observed,
        1.0,
        descriptor,
    ))
}

// ---------------------------------------------------------------------------
// Witness threshold: W ≤ G/G₀ for biseparable states
// ---------------------------------------------------------------------------

/// Verifies the witness threshold over biseparable states: pure product
/// states across every cut, convex mixtures whose components may be separable
/// across different cuts, and a direct-search refinement per cut.
pub fn check_witness_threshold(
    witness: &WitnessSpec,
    trials: u64,
    seed: u64,
) -> Result<OracleReport> {
    witness.validate()?;
    let n = witness.n_qubits;
    let cuts = Bipartition::enumerate(n)?;
    let weights: Vec<f64> = witness.weights.iter().map(rat_to_f64).collect();
    let g0 = rat_to_f64(&witness.g0);
    let bound = witness.threshold_f64();

    let witness_value = |ts: &[f64]| -> f64 {
        ts.iter()
            .zip(&weights)
            .map(|(t, v)| v * t * t)
            .sum::<f64>()
            / g0
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_observed = f64::NEG_INFINITY;
    let mut descriptor = String::new();
    let mut total_trials = 0u64;

    let per_cut: Vec<RestrictedOps> = cuts
        .iter()
        .map(|cut| RestrictedOps::new(&witness.operators, cut))
        .collect::<Result<_>>()?;

    for (cut, restricted) in cuts.iter().zip(&per_cut) {
        let dim_a = 1usize << restricted.side_a.len();
        let dim_b = 1usize << restricted.side_b.len();
        let mut best_for_cut = f64::NEG_INFINITY;
        let mut best_pair: Option<(StateVector, StateVector)> = None;
        for _ in 0..trials {
            total_trials += 1;
            let a = StateVector::new(restricted.side_a.len(), haar_amplitudes(dim_a, &mut rng))?;
            let b = StateVector::new(restricted.side_b.len(), haar_amplitudes(dim_b, &mut rng))?;
            let ts: Vec<f64> = (0..witness.operators.len())
                .map(|idx| restricted.correlation(idx, &a, &b))
                .collect();
            let value = witness_value(&ts);
            if value > best_for_cut {
                best_for_cut = value;
                best_pair = Some((a, b));
            }
        }
        if let Some((a, b)) = best_pair {
            let objective = |a: &StateVector, b: &StateVector| -> f64 {
                let ts: Vec<f64> = (0..witness.operators.len())
                    .map(|idx| restricted.correlation(idx, a, b))
                    .collect();
                witness_value(&ts)
            };
            let (refined, ra, rb) =
                refine_product_maximum((dim_a, dim_b), &objective, (&a, &b), 1e-6);
            best_for_cut = best_for_cut.max(refined);
            if best_for_cut > max_observed {
                max_observed = best_for_cut;
                descriptor = format!(
                    "separable across {cut}: A-side {} ⊗ B-side {}",
                    describe_amplitudes(ra.amplitudes()),
                    describe_amplitudes(rb.amplitudes())
                );
            }
        }
    }

    // Mixtures of components separable across different cuts: W is convex in
    // the correlations only through T², so mixing is the adversarial family.
    let mixture_trials = (trials / 10).max(1) * cuts.len() as u64 / cuts.len() as u64;
    for _ in 0..mixture_trials {
        total_trials += 1;
        let k = 2 + (rng.random::<u32>() % 7) as usize; // 2..=8 components
        let weights_mix = random_weights(k, &mut rng);
        let mut ts = vec![0.0; witness.operators.len()];
        for w in weights_mix.iter().take(k) {
            let which = (rng.random::<u32>() as usize) % cuts.len();
            let restricted = &per_cut[which];
            let a = StateVector::new(
                restricted.side_a.len(),
                haar_amplitudes(1 << restricted.side_a.len(), &mut rng),
            )?;
            let b = StateVector::new(
                restricted.side_b.len(),
                haar_amplitudes(1 << restricted.side_b.len(), &mut rng),
            )?;
            for (idx, t) in ts.iter_mut().enumerate() {
                *t += w * restricted.correlation(idx, &a, &b);
            }
        }
        let value = witness_value(&ts);
        if value > max_observed {
            max_observed = value;
            descriptor = format!("mixture of {k} product states across random cuts");
        }
    }

    Ok(OracleReport::new(
        format!("witness_threshold[{}]", witness.name),
        total_trials,
        max_observed,
        bound,
        descriptor,
    ))
}

// ---------------------------------------------------------------------------
// Commuting-set saturation: joint eigenstates reach Σ T_j² = |ops|
// ---------------------------------------------------------------------------

/// Largest register size for the saturation check's dense eigensolver.
pub const MAX_SATURATION_QUBITS: usize = 6;

/// Verifies that a commuting operator set has a common eigenstate saturating
/// Σ_j T_j² = |ops| (constructed by simultaneous diagonalization) and that
/// random states never exceed that value.
pub fn check_commuting_saturation(ops: &[PauliString]) -> Result<OracleReport> {
    if ops.is_empty() {
        return Err(Error::Argument(
            "saturation check needs at least one operator".to_string(),
        ));
    }
    let n = ops[0].n_qubits();
    if n > MAX_SATURATION_QUBITS {
        return Err(Error::Argument(format!(
            "saturation check supports up to {MAX_SATURATION_QUBITS} qubits, got {n}"
        )));
    }
    for (i, p) in ops.iter().enumerate() {
        for q in &ops[i + 1..] {
            if !p.commutes(q)? {
                return Err(Error::Argument(format!(
                    "operators {p} and {q} anticommute; the set must pairwise commute"
                )));
            }
        }
    }

    // M = Σ_k 2^k σ_k has eigenvalues Σ_k ±2^k, distinct per joint sign
    // pattern, so every eigenvector is a joint eigenvector of all σ_k.
    let dim = 1usize << n;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for (k, op) in ops.iter().enumerate() {
        m += dense_pauli_matrix(op)? * C64::new((1u64 << k) as f64, 0.0);
    }
    let eigen = m.symmetric_eigen();
    let column = eigen.eigenvectors.column(0);
    let mut amps: Vec<C64> = column.iter().copied().collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    let eigenstate = StateVector::new(n, amps)?;
    let saturation: f64 = ops
        .iter()
        .map(|op| {
            let t = eigenstate.correlation(op).expect("same register");
            t * t
        })
        .sum();

    let bound = ops.len() as f64;
    if (saturation - bound).abs() > 1e-9 {
        return Ok(OracleReport {
            suite: "commuting_saturation".to_string(),
            trials: 1,
            max_observed: saturation,
            bound,
            margin: bound - saturation,
            pass: false,
            worst_case_descriptor: format!(
                "joint eigenstate failed to saturate: Σ T² = {saturation}"
            ),
        });
    }

    // Random states must respect Σ T² ≤ |ops|.
    let random_trials = 1000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut max_observed = saturation;
    for _ in 0..random_trials {
        let psi = haar_state(n, &mut rng);
        let sum: f64 = ops
            .iter()
            .map(|op| {
                let t = psi.correlation(op).expect("same register");
                t * t
            })
            .sum();
        max_observed = max_observed.max(sum);
    }

    Ok(OracleReport::new(
        "commuting_saturation".to_string(),
        random_trials + 1,
        max_observed,
        bound,
        format!(
            "joint eigenstate {} saturates Σ T² = {bound}",
            describe_amplitudes(eigenstate.amplitudes())
        ),
    ))
}

/// Runs the standard verification suites for one witness: the threshold check
/// plus, where applicable, an anticommuting-pair demo, a biseparable-pair
/// check on the witness's first cut-anticommuting pair, and the commuting
/// saturation check on its operator set.
pub fn verify_witness(witness: &WitnessSpec, trials: u64, seed: u64) -> Result<Vec<OracleReport>> {
    let mut reports = Vec::new();
    reports.push(check_witness_threshold(witness, trials, seed)?);

    'outer: for cut in Bipartition::enumerate(witness.n_qubits)? {
        for (i, p) in witness.operators.iter().enumerate() {
            for q in &witness.operators[i + 1..] {
                if p.cut_anticommutes(q, &cut)? {
                    reports.push(check_biseparable_bound(p, q, &cut, trials, seed ^ 1)?);
                    break 'outer;
                }
            }
        }
    }

    if witness.commuting && witness.n_qubits <= MAX_SATURATION_QUBITS {
        reports.push(check_commuting_saturation(&witness.operators)?);
    }
    Ok(reports)
}
