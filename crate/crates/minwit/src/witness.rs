//! Witness construction: operator selection, exact weight optimization,
//! and per-bipartition criteria.
//!
//! Given the correlations of a target state and a handful of measurement
//! settings, this module selects the operators worth squaring, bounds the
//! biseparable value of the weighted sum through per-cut anticommutativity
//! graphs, and optimizes the weights. The optimization minimizes the
//! white-noise critical purity, i.e. `G(v) / Σ_j v_j T_j²` with `G(v)` the
//! worst-cut maximum-weight independent set; for operator sets whose target
//! correlations are all ±1 this coincides with minimizing `G/G₀`. Among
//! optimal weight vectors the most balanced one is returned (lexicographic
//! max-min fairness), which keeps the output deterministic and reproduces
//! published integer weight vectors.

use std::collections::BTreeSet;

use num::{FromPrimitive, Signed, Zero};

use crate::correlations::CorrelationSet;
use crate::error::{Error, Result};
use crate::graph::{build_graph, mask_to_indices, maximal_independent_sets};
use crate::pauli::{Bipartition, MeasurementSetting, PauliString};
use crate::rational::{approx_rat, rat, rat_int, rat_to_f64, scale_min_to_one, Rat};
use crate::simplex::{solve_lp, Constraint, LpOutcome, Relation};

/// Default selection threshold on |T_j|. Correlations at or above one half
/// still pay for their slot in the biseparable bound; weaker ones (the
/// ±1/3 values of the four-qubit singlet, for instance) dilute the witness
/// and are excluded by default.
pub const DEFAULT_MIN_ABS: f64 = 0.5;

/// Denominator cap when snapping squared target correlations to exact
/// rationals for the weight optimization.
const SNAP_MAX_DEN: u64 = 1_000_000;
/// Absolute tolerance for the same snapping.
const SNAP_TOL: f64 = 1e-9;

/// An entanglement criterion for one bipartition: a weighted average of
/// squared correlations bounded by 1/2 for states separable across the cut.
#[derive(Clone, Debug, PartialEq)]
pub struct CutCriterion {
    /// The bipartition this criterion addresses.
    pub cut: Bipartition,
    /// Operators entering the average (empty when `available` is false).
    pub operators: Vec<PauliString>,
    /// Per-operator coefficients; the criterion value is Σ cᵢ Tᵢ².
    pub coefficients: Vec<Rat>,
    /// One side of the pairing when the averaged edges form a complete
    /// bipartite graph, as all single-cut criteria published for specific
    /// states do. `None` when the edge set has another shape.
    pub class_a: Option<Vec<PauliString>>,
    /// The other side of the pairing; see `class_a`.
    pub class_b: Option<Vec<PauliString>>,
    /// Separable bound, always 1/2.
    pub bound: Rat,
    /// Value the target state reaches.
    pub ideal_value: f64,
    /// False when no operator pair cut-anticommutes for this bipartition,
    /// leaving nothing to detect entanglement across it with.
    pub available: bool,
}

impl CutCriterion {
    /// Placeholder criterion for a cut with no usable operator pair.
    pub fn unavailable(cut: Bipartition) -> Self {
        CutCriterion {
            cut,
            operators: Vec::new(),
            coefficients: Vec::new(),
            class_a: None,
            class_b: None,
            bound: rat(1, 2),
            ideal_value: 0.0,
            available: false,
        }
    }

    /// Evaluates Σ cᵢ Tᵢ² on a correlation set.
    pub fn evaluate(&self, corrs: &CorrelationSet) -> Result<f64> {
        if !self.available {
            return Err(Error::Data(format!(
                "no criterion is available for cut {}",
                self.cut
            )));
        }
        let mut value = 0.0;
        for (op, c) in self.operators.iter().zip(&self.coefficients) {
            let (t, _) = corrs.require(op)?;
            value += rat_to_f64(c) * t * t;
        }
        Ok(value)
    }
}

/// A combined nonlinear witness `W = (1/G₀) Σ_j v_j T_j² ≤ G/G₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessSpec {
    /// Human-readable identifier ("combined", "ghz4", ...).
    pub name: String,
    /// Register size.
    pub n_qubits: usize,
    /// Operators whose squared correlations enter the witness.
    pub operators: Vec<PauliString>,
    /// Positive weights, one per operator, scaled so the minimum is one.
    pub weights: Vec<Rat>,
    /// Normalization constant: the maximum of Σ v_j T_j² over all states
    /// (the maximum-weight independent set of the global anticommutativity
    /// graph; equal to Σ v_j when all operators commute).
    pub g0: Rat,
    /// Biseparable bound: the maximum of Σ v_j T_j² over biseparable
    /// states, i.e. the worst cut's maximum-weight independent set.
    pub g: Rat,
    /// Measurement settings sufficient to infer every operator.
    pub settings: Vec<MeasurementSetting>,
    /// Criteria for the individual bipartitions, in canonical cut order.
    pub per_cut: Vec<CutCriterion>,
    /// Whether the target state's witness value exceeds the bound; false
    /// for degenerate constructions that cannot detect anything.
    pub detecting: bool,
    /// Whether the operators pairwise commute globally.
    pub commuting: bool,
    /// Value the target state reaches, when known.
    pub ideal_value: Option<f64>,
    /// Construction remarks (dropped operators, caveats).
    pub notes: Vec<String>,
}

impl WitnessSpec {
    /// The biseparable bound `G/G₀` as an exact rational.
    pub fn threshold(&self) -> Rat {
        &self.g / &self.g0
    }

    /// The biseparable bound as a float, for reports.
    pub fn threshold_f64(&self) -> f64 {
        rat_to_f64(&self.threshold())
    }

    /// Evaluates Σ v_j T_j² / G₀ on a correlation set.
    pub fn evaluate(&self, corrs: &CorrelationSet) -> Result<f64> {
        let mut sum = 0.0;
        for (op, w) in self.operators.iter().zip(&self.weights) {
            let (t, _) = corrs.require(op)?;
            sum += rat_to_f64(w) * t * t;
        }
        Ok(sum / rat_to_f64(&self.g0))
    }

    /// Checks internal consistency: positive weights, coverage of every
    /// operator by a setting, matching register sizes, and `g ≤ g0`.
    pub fn validate(&self) -> Result<()> {
        if self.operators.is_empty() {
            return Err(Error::Validation("witness has no operators".into()));
        }
        if self.operators.len() != self.weights.len() {
            return Err(Error::Validation(format!(
                "witness lists {} operators but {} weights",
                self.operators.len(),
                self.weights.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for op in &self.operators {
            if op.n_qubits() != self.n_qubits {
                return Err(Error::Validation(format!(
                    "operator {op} does not act on {} qubits",
                    self.n_qubits
                )));
            }
            if op.is_identity() {
                return Err(Error::Validation(
                    "witness operators must be non-identity".into(),
                ));
            }
            if !seen.insert(*op) {
                return Err(Error::Validation(format!("duplicate operator {op}")));
            }
            if !self.settings.iter().any(|s| op.derivable_from(s)) {
                return Err(Error::Validation(format!(
                    "operator {op} is not derivable from any listed setting"
                )));
            }
        }
        if self.weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::Validation("witness weights must be positive".into()));
        }
        if self.g0 <= Rat::zero() || self.g > self.g0 {
            return Err(Error::Validation(format!(
                "witness bounds must satisfy 0 < g ≤ g0, got g = {}, g0 = {}",
                self.g, self.g0
            )));
        }
        for criterion in &self.per_cut {
            if criterion.cut.n_qubits() != self.n_qubits {
                return Err(Error::Validation(format!(
                    "cut {} does not match the witness register",
                    criterion.cut
                )));
            }
            if criterion.operators.len() != criterion.coefficients.len() {
                return Err(Error::Validation(format!(
                    "criterion for {} lists {} operators but {} coefficients",
                    criterion.cut,
                    criterion.operators.len(),
                    criterion.coefficients.len()
                )));
            }
        }
        Ok(())
    }
}

/// Picks the operators worth measuring: non-identity indices derivable from
/// the given settings whose target correlation is at least `min_abs` in
/// magnitude. Operators are returned sorted by decreasing |T_j|, ties
/// broken by digit-string order.
///
/// With `require_commuting`, a maximal mutually commuting subset is kept,
/// discarding the smaller-|T_j| member of each conflict. The combined
/// construction does not need commutativity — the global anticommutativity
/// graph already accounts for conflicts through `G₀` — so it passes
/// `false`.
pub fn select_operators(
    corrs: &CorrelationSet,
    settings: &[MeasurementSetting],
    min_abs: f64,
    require_commuting: bool,
) -> Result<Vec<PauliString>> {
    if settings.is_empty() {
        return Err(Error::Argument("at least one setting is required".into()));
    }
    if !(0.0..=1.0).contains(&min_abs) || min_abs == 0.0 {
        return Err(Error::Argument(format!(
            "min_abs must lie in (0, 1], got {min_abs}"
        )));
    }
    let n = corrs.n_qubits();
    let mut candidates: BTreeSet<PauliString> = BTreeSet::new();
    for setting in settings {
        if setting.n_qubits() != n {
            return Err(Error::Dimension(format!(
                "setting {setting} does not act on {n} qubits"
            )));
        }
        candidates.extend(setting.derivable_indices());
    }
    let mut scored: Vec<(f64, PauliString)> = candidates
        .into_iter()
        .filter(|op| !op.is_identity())
        .filter_map(|op| {
            let t = corrs.get(&op).map_or(0.0, |(v, _)| v);
            (t.abs() >= min_abs).then_some((t.abs(), op))
        })
        .collect();
    scored.sort_by(|(ta, a), (tb, b)| {
        tb.partial_cmp(ta)
            .expect("correlations are finite")
            .then_with(|| a.digits().cmp(&b.digits()))
    });
    let mut selected: Vec<PauliString> = Vec::new();
    for (_, op) in scored {
        if require_commuting
            && !selected
                .iter()
                .all(|kept| kept.commutes(&op).expect("operators share the register"))
        {
            continue;
        }
        selected.push(op);
    }
    if selected.is_empty() {
        return Err(Error::Construction(format!(
            "no usable operators: nothing derivable from the settings has |T| ≥ {min_abs}"
        )));
    }
    Ok(selected)
}

/// Result of the exact weight optimization.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightOptimization {
    /// Operators that received positive weight, in input order.
    pub operators: Vec<PauliString>,
    /// Their weights, scaled so the minimum is one.
    pub weights: Vec<Rat>,
    /// Worst-cut maximum-weight independent set under the final weights.
    pub g: Rat,
    /// Global-graph maximum-weight independent set (the normalization).
    pub g0: Rat,
    /// Operators dropped because the optimum assigned them zero weight.
    pub dropped: Vec<PauliString>,
    /// True when `g = g0`, i.e. the construction cannot detect anything.
    pub degenerate: bool,
}

/// Linear program data shared by the optimization stages: the exact squared
/// target correlations and the independent-set masks of every cut graph.
struct WeightProgram {
    n: usize,
    ideal_sq: Vec<Rat>,
    cut_masks: Vec<u64>,
    r0_masks: Vec<u64>,
}

impl WeightProgram {
    /// Indicator row over the `n` weight variables plus `extra` zeros.
    fn mask_row(&self, mask: u64, extra: usize) -> Vec<Rat> {
        let mut row = vec![rat_int(0); self.n + extra];
        for j in mask_to_indices(mask, self.n) {
            row[j] = rat_int(1);
        }
        row
    }

    /// Normalization row Σ T_j² v_j plus `extra` zeros.
    fn norm_row(&self, extra: usize) -> Vec<Rat> {
        let mut row = self.ideal_sq.clone();
        row.extend(std::iter::repeat_n(rat_int(0), extra));
        row
    }
}

fn expect_optimal(outcome: LpOutcome, stage: &str) -> Result<(Vec<Rat>, Rat)> {
    match outcome {
        LpOutcome::Optimal { x, objective } => Ok((x, objective)),
        other => Err(Error::Construction(format!(
            "weight optimization stage '{stage}' failed: {other:?}"
        ))),
    }
}

/// Optimizes the witness weights for the operator set `ops` against the
/// given bipartitions.
///
/// `ideal_sq` holds the squared target correlation of each operator as an
/// exact rational (snap floats with [`approx_rat`] before calling). The
/// optimization minimizes `G(v) / Σ_j v_j T_j²` exactly; among optimal
/// vectors, the total weight is minimized and remaining freedom is resolved
/// by lexicographic max-min fairness (repeatedly minimizing the largest
/// weight), which selects the most symmetric optimum. The result is scaled
/// so the smallest positive weight equals one, and zero-weight operators
/// are dropped.
pub fn optimize_weights(
    ops: &[PauliString],
    cuts: &[Bipartition],
    ideal_sq: &[Rat],
) -> Result<WeightOptimization> {
    if ops.is_empty() {
        return Err(Error::Argument("cannot optimize an empty operator set".into()));
    }
    if ops.len() != ideal_sq.len() {
        return Err(Error::Dimension(format!(
            "{} operators but {} squared correlations",
            ops.len(),
            ideal_sq.len()
        )));
    }
    if ideal_sq.iter().any(|s| !s.is_positive() || *s > rat_int(1)) {
        return Err(Error::Argument(
            "squared target correlations must lie in (0, 1]".into(),
        ));
    }
    let mut seen = BTreeSet::new();
    for op in ops {
        if !seen.insert(*op) {
            return Err(Error::Argument(format!("duplicate operator {op}")));
        }
    }

    let n = ops.len();
    let mut cut_masks: BTreeSet<u64> = BTreeSet::new();
    for cut in cuts {
        let graph = build_graph(ops, Some(*cut))?;
        cut_masks.extend(maximal_independent_sets(&graph));
    }
    let r0_graph = build_graph(ops, None)?;
    let program = WeightProgram {
        n,
        ideal_sq: ideal_sq.to_vec(),
        cut_masks: cut_masks.into_iter().collect(),
        r0_masks: maximal_independent_sets(&r0_graph),
    };

    // Stage 1: minimize t subject to Σ T² v = 1 and Σ_{j∈M} v_j ≤ t for
    // every maximal independent set M of every cut graph.
    let t_star = if program.cut_masks.is_empty() {
        rat_int(0)
    } else {
        let mut constraints =
            vec![Constraint::new(program.norm_row(1), Relation::Eq, rat_int(1))];
        for &mask in &program.cut_masks {
            let mut row = program.mask_row(mask, 1);
            row[n] = rat_int(-1);
            constraints.push(Constraint::new(row, Relation::Le, rat_int(0)));
        }
        let mut objective = vec![rat_int(0); n + 1];
        objective[n] = rat_int(1);
        let (_, t) = expect_optimal(solve_lp(&objective, &constraints)?, "min t")?;
        t
    };

    // Constraints shared by the remaining stages (weight variables only,
    // plus `extra` auxiliaries appended by the caller).
    let face_constraints = |prog: &WeightProgram, extra: usize| -> Vec<Constraint> {
        let mut cs = vec![Constraint::new(prog.norm_row(extra), Relation::Eq, rat_int(1))];
        for &mask in &prog.cut_masks {
            cs.push(Constraint::new(
                prog.mask_row(mask, extra),
                Relation::Le,
                t_star.clone(),
            ));
        }
        cs
    };

    // Stage 2: minimize the total weight on the optimal face.
    let sum_star = {
        let constraints = face_constraints(&program, 0);
        let objective = vec![rat_int(1); n];
        let (_, s) = expect_optimal(solve_lp(&objective, &constraints)?, "min Σv")?;
        s
    };

    // Stage 3: lexicographic max-min fairness. Repeatedly minimize the
    // largest free weight; operators that cannot drop below that ceiling
    // in any optimal solution are pinned at it.
    let mut fixed: Vec<Option<Rat>> = vec![None; n];
    while fixed.iter().any(Option::is_none) {
        let free: Vec<usize> =
            (0..n).filter(|&j| fixed[j].is_none()).collect();
        // Minimize u with v_j ≤ u for all free j (u is variable n).
        let mut constraints = face_constraints(&program, 1);
        let mut sum_row = vec![rat_int(1); n + 1];
        sum_row[n] = rat_int(0);
        constraints.push(Constraint::new(sum_row, Relation::Eq, sum_star.clone()));
        for (j, value) in fixed.iter().enumerate() {
            if let Some(v) = value {
                let mut row = vec![rat_int(0); n + 1];
                row[j] = rat_int(1);
                constraints.push(Constraint::new(row, Relation::Eq, v.clone()));
            }
        }
        for &j in &free {
            let mut row = vec![rat_int(0); n + 1];
            row[j] = rat_int(1);
            row[n] = rat_int(-1);
            constraints.push(Constraint::new(row, Relation::Le, rat_int(0)));
        }
        let mut objective = vec![rat_int(0); n + 1];
        objective[n] = rat_int(1);
        let (_, ceiling) =
            expect_optimal(solve_lp(&objective, &constraints)?, "fairness ceiling")?;

        // Pin every free weight that is forced to the ceiling.
        let mut pin_constraints = face_constraints(&program, 0);
        pin_constraints.push(Constraint::new(
            vec![rat_int(1); n],
            Relation::Eq,
            sum_star.clone(),
        ));
        for (j, value) in fixed.iter().enumerate() {
            if let Some(v) = value {
                let mut row = vec![rat_int(0); n];
                row[j] = rat_int(1);
                pin_constraints.push(Constraint::new(row, Relation::Eq, v.clone()));
            }
        }
        for &j in &free {
            let mut row = vec![rat_int(0); n];
            row[j] = rat_int(1);
            pin_constraints.push(Constraint::new(row, Relation::Le, ceiling.clone()));
        }
        let mut pinned_any = false;
        for &j in &free {
            let mut objective = vec![rat_int(0); n];
            objective[j] = rat_int(1);
            let (_, low) =
                expect_optimal(solve_lp(&objective, &pin_constraints)?, "fairness pin")?;
            if low == ceiling {
                fixed[j] = Some(ceiling.clone());
                pinned_any = true;
            }
        }
        if !pinned_any {
            return Err(Error::Construction(
                "weight fairness failed to pin a variable".into(),
            ));
        }
    }
    let raw: Vec<Rat> = fixed.into_iter().map(|v| v.expect("all pinned")).collect();

    // Drop zero weights, rescale, and evaluate the final bounds.
    let scaled = scale_min_to_one(&raw).ok_or_else(|| {
        Error::Construction("weight optimization produced an all-zero vector".into())
    })?;
    let mask_value = |mask: u64| -> Rat {
        mask_to_indices(mask, n)
            .into_iter()
            .map(|j| scaled[j].clone())
            .sum()
    };
    let g = program.cut_masks.iter().map(|&m| mask_value(m)).max().unwrap_or_else(Rat::zero);
    let g0 = program
        .r0_masks
        .iter()
        .map(|&m| mask_value(m))
        .max()
        .unwrap_or_else(Rat::zero);

    let mut operators = Vec::new();
    let mut weights = Vec::new();
    let mut dropped = Vec::new();
    for (op, w) in ops.iter().zip(&scaled) {
        if w.is_zero() {
            dropped.push(*op);
        } else {
            operators.push(*op);
            weights.push(w.clone());
        }
    }
    let degenerate = g >= g0;
    Ok(WeightOptimization { operators, weights, g, g0, dropped, degenerate })
}

/// Builds the entanglement criterion for each bipartition.
///
/// For a cut, every edge (u, v) of its anticommutativity graph obeys
/// `(T_u² + T_v²)/2 ≤ 1/2` for states separable across the cut; averaging
/// over the edges on which the target scores highest gives the strongest
/// such criterion. The criterion value is `Σ_v deg(v) T_v² / (2|E|)` over
/// the retained edge set. When that edge set is a complete bipartite graph
/// — as in every published single-cut criterion — the two vertex classes
/// are reported as `class_a`/`class_b`.
pub fn build_cut_criteria(
    ops: &[PauliString],
    corrs: &CorrelationSet,
    cuts: &[Bipartition],
) -> Result<Vec<CutCriterion>> {
    let mut criteria = Vec::with_capacity(cuts.len());
    for cut in cuts {
        let graph = build_graph(ops, Some(*cut))?;
        let edges = graph.edges();
        if edges.is_empty() {
            criteria.push(CutCriterion::unavailable(*cut));
            continue;
        }
        let sq: Vec<f64> = ops
            .iter()
            .map(|op| corrs.get(op).map_or(0.0, |(t, _)| t * t))
            .collect();
        let score = |&(u, v): &(usize, usize)| (sq[u] + sq[v]) / 2.0;
        let best = edges.iter().map(score).fold(f64::NEG_INFINITY, f64::max);
        let kept: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|e| score(e) >= best - 1e-9)
            .collect();
        let mut degree = vec![0u32; ops.len()];
        for &(u, v) in &kept {
            degree[u] += 1;
            degree[v] += 1;
        }
        let denom = 2 * kept.len() as i64;
        let mut members: Vec<usize> =
            (0..ops.len()).filter(|&j| degree[j] > 0).collect();
        members.sort_by_key(|&j| ops[j].digits());
        let operators: Vec<PauliString> = members.iter().map(|&j| ops[j]).collect();
        let coefficients: Vec<Rat> = members
            .iter()
            .map(|&j| rat(i64::from(degree[j]), denom))
            .collect();
        let ideal_value = members
            .iter()
            .zip(&coefficients)
            .map(|(&j, c)| rat_to_f64(c) * sq[j])
            .sum();
        let (class_a, class_b) = biclique_classes(&kept, &members, ops);
        criteria.push(CutCriterion {
            cut: *cut,
            operators,
            coefficients,
            class_a,
            class_b,
            bound: rat(1, 2),
            ideal_value,
            available: true,
        });
    }
    Ok(criteria)
}

/// Reports the two vertex classes when `edges` over `members` form a
/// complete bipartite graph; classes are ordered larger-first, then by
/// digit-string order of their smallest member.
fn biclique_classes(
    edges: &[(usize, usize)],
    members: &[usize],
    ops: &[PauliString],
) -> (Option<Vec<PauliString>>, Option<Vec<PauliString>>) {
    // Two-color by BFS from the first member; a complete bipartite graph
    // is connected, so any failure or leftover vertex means "no classes".
    let mut color: std::collections::BTreeMap<usize, bool> = std::collections::BTreeMap::new();
    let mut queue = std::collections::VecDeque::new();
    color.insert(members[0], false);
    queue.push_back(members[0]);
    while let Some(u) = queue.pop_front() {
        let cu = color[&u];
        for &(a, b) in edges {
            let v = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            match color.get(&v) {
                Some(&cv) if cv == cu => return (None, None),
                Some(_) => {}
                None => {
                    color.insert(v, !cu);
                    queue.push_back(v);
                }
            }
        }
    }
    if color.len() != members.len() {
        return (None, None);
    }
    let mut side_a: Vec<PauliString> = Vec::new();
    let mut side_b: Vec<PauliString> = Vec::new();
    for (&j, &c) in &color {
        if c { side_b.push(ops[j]) } else { side_a.push(ops[j]) }
    }
    if edges.len() != side_a.len() * side_b.len() {
        return (None, None);
    }
    side_a.sort_by_key(|p| p.digits());
    side_b.sort_by_key(|p| p.digits());
    let first = |side: &[PauliString]| side[0].digits();
    if (side_b.len(), first(&side_a)) > (side_a.len(), first(&side_b)) {
        std::mem::swap(&mut side_a, &mut side_b);
    }
    (Some(side_a), Some(side_b))
}

/// Builds the combined witness for a target state from its correlations
/// and a set of measurement settings.
///
/// Composes [`select_operators`] (without the commutativity restriction),
/// [`optimize_weights`] over all bipartitions, and [`build_cut_criteria`].
/// Pass an empty `settings` slice to let [`propose_settings`] pick them.
pub fn build_combined_witness(
    corrs: &CorrelationSet,
    settings: &[MeasurementSetting],
    min_abs: f64,
) -> Result<WitnessSpec> {
    let n = corrs.n_qubits();
    let settings: Vec<MeasurementSetting> = if settings.is_empty() {
        propose_settings(corrs, min_abs)?
    } else {
        settings.to_vec()
    };
    let ops = select_operators(corrs, &settings, min_abs, false)?;
    let cuts = Bipartition::enumerate(n)?;
    let ideal_sq: Vec<Rat> = ops
        .iter()
        .map(|op| {
            let (t, _) = corrs.require(op)?;
            let sq = t * t;
            Ok(approx_rat(sq, SNAP_MAX_DEN, SNAP_TOL)
                .or_else(|| Rat::from_f64(sq))
                .ok_or_else(|| {
                    Error::Construction(format!("cannot express T² = {sq} as a rational"))
                })?)
        })
        .collect::<Result<_>>()?;
    let opt = optimize_weights(&ops, &cuts, &ideal_sq)?;
    let per_cut = build_cut_criteria(&ops, corrs, &cuts)?;

    let kept_sq: Vec<&Rat> = ops
        .iter()
        .zip(&ideal_sq)
        .filter(|(op, _)| opt.operators.contains(op))
        .map(|(_, sq)| sq)
        .collect();
    let ideal_sum: Rat = opt
        .weights
        .iter()
        .zip(&kept_sq)
        .map(|(w, sq)| w * *sq)
        .sum();
    let ideal_value = &ideal_sum / &opt.g0;
    let detecting = !opt.degenerate && ideal_sum > opt.g;
    let commuting = opt
        .operators
        .iter()
        .enumerate()
        .all(|(i, a)| {
            opt.operators[i + 1..]
                .iter()
                .all(|b| a.commutes(b).expect("operators share the register"))
        });

    let mut notes = Vec::new();
    if !opt.dropped.is_empty() {
        let list: Vec<String> = opt.dropped.iter().map(|p| p.to_string()).collect();
        notes.push(format!(
            "operators dropped with zero optimal weight: {}",
            list.join(", ")
        ));
    }
    if opt.degenerate {
        notes.push("degenerate construction: the biseparable bound equals the \
             algebraic maximum, so no state violates it"
            .into());
    } else if !detecting {
        notes.push("the target state does not violate the optimized bound".into());
    }

    let spec = WitnessSpec {
        name: "combined".into(),
        n_qubits: n,
        operators: opt.operators,
        weights: opt.weights,
        g0: opt.g0,
        g: opt.g,
        settings,
        per_cut,
        detecting,
        commuting,
        ideal_value: Some(rat_to_f64(&ideal_value)),
        notes,
    };
    spec.validate()?;
    Ok(spec)
}

/// Proposes measurement settings for a target state's correlations.
///
/// Greedy: the first setting maximizes the number of near-unit
/// correlations it determines, each later setting the number of additional
/// operators with |T| ≥ `min_abs` covered. Ties are resolved by the
/// robustness of the witness the candidate pair yields, then by
/// digit-string order. Two settings are proposed, matching the
/// minimal-effort protocol.
pub fn propose_settings(
    corrs: &CorrelationSet,
    min_abs: f64,
) -> Result<Vec<MeasurementSetting>> {
    let n = corrs.n_qubits();
    if n > 8 {
        return Err(Error::Argument(
            "setting proposal enumerates 3^n candidates; pass settings explicitly for n > 8"
                .into(),
        ));
    }
    let strong: Vec<(PauliString, f64)> = corrs
        .iter()
        .filter(|(op, v, _)| !op.is_identity() && v.abs() >= min_abs)
        .map(|(op, v, _)| (*op, v.abs()))
        .collect();
    if strong.is_empty() {
        return Err(Error::Construction(format!(
            "no correlations reach |T| ≥ {min_abs}; cannot propose settings"
        )));
    }

    let mut candidates: Vec<MeasurementSetting> = Vec::new();
    let mut locals = vec![1u8; n];
    loop {
        candidates.push(MeasurementSetting::from_locals(&locals)?);
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            if locals[i] < 3 {
                locals[i] += 1;
                break;
            }
            locals[i] = 1;
            i += 1;
        }
        if i == n {
            break;
        }
    }

    let unit_cover = |s: &MeasurementSetting| {
        strong
            .iter()
            .filter(|(op, t)| *t >= 1.0 - 1e-6 && op.derivable_from(s))
            .count()
    };
    let first = candidates
        .iter()
        .max_by(|a, b| {
            unit_cover(a)
                .cmp(&unit_cover(b))
                .then_with(|| b.as_pauli().digits().cmp(&a.as_pauli().digits()))
        })
        .copied()
        .expect("candidate list is nonempty");

    let extra_cover = |s: &MeasurementSetting| {
        strong
            .iter()
            .filter(|(op, _)| op.derivable_from(s) && !op.derivable_from(&first))
            .count()
    };
    let best_extra = candidates.iter().map(extra_cover).max().unwrap_or(0);
    if best_extra == 0 {
        return Ok(vec![first]);
    }
    let tied: Vec<MeasurementSetting> = candidates
        .iter()
        .filter(|s| extra_cover(s) == best_extra)
        .copied()
        .collect();
    if tied.len() == 1 {
        return Ok(vec![first, tied[0]]);
    }
    // Break remaining ties by the robustness of the resulting witness.
    let mut best: Option<(Rat, Vec<u8>, MeasurementSetting)> = None;
    for second in tied {
        let witness = build_combined_witness(corrs, &[first, second], min_abs);
        let Ok(w) = witness else { continue };
        let key = (w.threshold(), second.as_pauli().digits());
        if best
            .as_ref()
            .is_none_or(|(t, d, _)| (key.0.clone(), key.1.clone()) < (t.clone(), d.clone()))
        {
            best = Some((key.0, key.1, second));
        }
    }
    match best {
        Some((_, _, second)) => Ok(vec![first, second]),
        None => Ok(vec![first]),
    }
}
