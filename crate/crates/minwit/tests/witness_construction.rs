//! End-to-end witness construction: published four-qubit regressions, the
//! N-qubit families against their closed forms, and cross-checks of the
//! hand-tabulated criteria against the generic machinery.

use minwit::rational::{rat, rat_int, rat_to_f64, Rat};
use minwit::state::{cluster_chain_state, ghz_state};
use minwit::{
    build_combined_witness, build_graph, max_weight_independent, named_criteria,
    nqubit_cluster_witness, nqubit_ghz_witness, Bipartition, CorrelationSet, MeasurementSetting,
    NamedFamily, PauliString, StateVector,
};

fn settings(list: &[&str]) -> Vec<MeasurementSetting> {
    list.iter().map(|s| s.parse().unwrap()).collect()
}

fn exact_corrs(state: &StateVector) -> CorrelationSet {
    state.nonvanishing_correlations(1e-9).unwrap()
}

#[test]
fn ghz_regression_matches_the_published_witness() {
    let corrs = exact_corrs(&ghz_state(4).unwrap());
    let spec = build_combined_witness(&corrs, &settings(&["3333", "1221"]), 0.5).unwrap();

    assert_eq!(spec.operators.len(), 8);
    let special: PauliString = "1221".parse().unwrap();
    for (op, weight) in spec.operators.iter().zip(&spec.weights) {
        let expected = if *op == special { rat_int(4) } else { rat_int(1) };
        assert_eq!(*weight, expected, "weight of {op}");
    }
    assert_eq!(spec.g0, rat_int(11));
    assert_eq!(spec.g, rat_int(7));
    assert_eq!(spec.threshold(), rat(7, 11));
    assert!(spec.detecting);
    assert!(spec.commuting);
    assert!((spec.ideal_value.unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(spec.per_cut.len(), 7);
    assert!(spec.per_cut.iter().all(|c| c.available));
}

#[test]
fn cluster_regression_matches_the_published_witness() {
    let corrs = exact_corrs(&minwit::state::cluster4_state().unwrap());
    let spec = build_combined_witness(&corrs, &settings(&["1133", "3311"]), 0.5).unwrap();

    assert_eq!(spec.operators.len(), 6);
    assert!(spec.weights.iter().all(|w| *w == rat_int(1)));
    assert_eq!(spec.g0, rat_int(6));
    assert_eq!(spec.g, rat_int(4));
    assert_eq!(spec.threshold(), rat(2, 3));
    assert!(spec.detecting);
    assert!((spec.ideal_value.unwrap() - 1.0).abs() < 1e-12);

    let expected: Vec<PauliString> = ["0033", "0311", "1103", "1130", "3011", "3300"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let mut got = spec.operators.clone();
    got.sort_by_key(|p| p.digits());
    assert_eq!(got, expected);
}

#[test]
fn named_tables_agree_with_generic_construction() {
    // The hard-coded GHZ and cluster entries must match what the machinery
    // derives from scratch.
    let ghz_named = named_criteria(NamedFamily::Ghz4).combined.unwrap();
    let ghz_built = build_combined_witness(
        &exact_corrs(&ghz_state(4).unwrap()),
        &ghz_named.settings,
        0.5,
    )
    .unwrap();
    assert_eq!(ghz_named.g, ghz_built.g);
    assert_eq!(ghz_named.g0, ghz_built.g0);
    let mut named_ops = ghz_named.operators.clone();
    let mut built_ops = ghz_built.operators.clone();
    named_ops.sort_by_key(|p| p.digits());
    built_ops.sort_by_key(|p| p.digits());
    assert_eq!(named_ops, built_ops);

    let cluster_named = named_criteria(NamedFamily::Cluster4).combined.unwrap();
    let cluster_built = build_combined_witness(
        &exact_corrs(&minwit::state::cluster4_state().unwrap()),
        &cluster_named.settings,
        0.5,
    )
    .unwrap();
    assert_eq!(cluster_named.g, cluster_built.g);
    assert_eq!(cluster_named.g0, cluster_built.g0);
    assert_eq!(cluster_named.threshold(), rat(2, 3));
}

#[test]
fn nqubit_ghz_family_matches_the_closed_form() {
    for n in 3..=12usize {
        let spec = nqubit_ghz_witness(n).unwrap();
        let num = rat_int((1i64 << (n - 1)) - 1);
        let den = rat_int((1i64 << (n - 1)) + (1i64 << (n - 2)) - 1);
        assert_eq!(spec.g, num, "G for n = {n}");
        assert_eq!(spec.g0, den, "G0 for n = {n}");
        assert_eq!(spec.operators.len(), (1usize << (n - 1)), "set size for n = {n}");

        // The witness scores exactly 1 on the GHZ state for checkable sizes.
        if n <= 8 {
            let state = ghz_state(n).unwrap();
            let mut total = Rat::from_integer(0.into());
            for (op, w) in spec.operators.iter().zip(&spec.weights) {
                let t = state.correlation(op).unwrap();
                assert!(
                    (t.abs() - 1.0).abs() < 1e-12,
                    "GHZ_{n} correlation for {op} should be ±1, got {t}"
                );
                total += w; // T² = 1 exactly
            }
            assert_eq!(total, spec.g0, "numerator for n = {n}");
        }
    }
    assert_eq!(nqubit_ghz_witness(4).unwrap().threshold(), rat(7, 11));
}

#[test]
fn nqubit_cluster_family_matches_the_closed_form() {
    for n in (4..=12usize).step_by(2) {
        let spec = nqubit_cluster_witness(n).unwrap();
        let half = n / 2;
        let num = rat_int((1i64 << (half - 1)) + (1i64 << half) - 2);
        let den = rat_int(2 * ((1i64 << half) - 1));
        assert_eq!(spec.g, num, "G for n = {n}");
        assert_eq!(spec.g0, den, "G0 for n = {n}");

        if n <= 8 {
            let state = cluster_chain_state(n).unwrap();
            for op in &spec.operators {
                let t = state.correlation(op).unwrap();
                assert!(
                    (t.abs() - 1.0).abs() < 1e-12,
                    "C_{n} correlation for {op} should be ±1, got {t}"
                );
            }
        }
    }
    assert_eq!(nqubit_cluster_witness(4).unwrap().threshold(), rat(2, 3));
}

#[test]
fn family_thresholds_converge_monotonically() {
    let mut previous = 0.0;
    for n in 3..=12usize {
        let t = nqubit_ghz_witness(n).unwrap().threshold_f64();
        assert!(t > previous, "GHZ thresholds increase with n");
        assert!(t < 2.0 / 3.0);
        previous = t;
    }
    let mut previous = 0.0;
    for n in (4..=12usize).step_by(2) {
        let t = nqubit_cluster_witness(n).unwrap().threshold_f64();
        assert!(t > previous, "cluster thresholds increase with n");
        assert!(t < 3.0 / 4.0);
        previous = t;
    }
}

#[test]
fn family_bounds_agree_with_independent_set_machinery() {
    // Re-derive G and G0 for the tabulated family witnesses by brute-force
    // maximum-weight independent sets over every cut graph.
    for n in 3..=6usize {
        let spec = nqubit_ghz_witness(n).unwrap();
        check_bounds_via_graphs(&spec.operators, &spec.weights, &spec.g, &spec.g0, n);
    }
    for n in [4usize, 6] {
        let spec = nqubit_cluster_witness(n).unwrap();
        check_bounds_via_graphs(&spec.operators, &spec.weights, &spec.g, &spec.g0, n);
    }
}

fn check_bounds_via_graphs(
    ops: &[PauliString],
    weights: &[Rat],
    g: &Rat,
    g0: &Rat,
    n: usize,
) {
    let global = build_graph(ops, None).unwrap();
    let (derived_g0, _) = max_weight_independent(&global, weights).unwrap();
    assert_eq!(derived_g0, *g0, "G0 mismatch for n = {n}");

    let mut worst = Rat::from_integer(0.into());
    for cut in Bipartition::enumerate(n).unwrap() {
        let graph = build_graph(ops, Some(cut)).unwrap();
        let (value, _) = max_weight_independent(&graph, weights).unwrap();
        worst = worst.max(value);
    }
    assert_eq!(worst, *g, "G mismatch for n = {n}");
}

#[test]
fn perturbed_correlations_leave_the_selection_stable() {
    // A witness built from mildly noisy correlations (all scaled by 0.95)
    // keeps the published operator set and bounds: selection thresholds on
    // |T|, not exact values.
    let state = ghz_state(4).unwrap();
    let mut corrs = CorrelationSet::new(4).unwrap();
    for (op, value, _) in state.nonvanishing_correlations(1e-9).unwrap().iter() {
        if op.is_identity() {
            corrs.insert(*op, value, 0.0).unwrap();
        } else {
            corrs.insert(*op, 0.95 * value, 0.01).unwrap();
        }
    }
    let spec = build_combined_witness(&corrs, &settings(&["3333", "1221"]), 0.5).unwrap();
    assert_eq!(spec.operators.len(), 8);
    assert_eq!(spec.g, rat_int(7));
    assert_eq!(spec.g0, rat_int(11));
    assert_eq!(spec.threshold(), rat(7, 11));
}

#[test]
fn dicke_and_singlet_named_witnesses_score_their_quoted_ideals() {
    let dicke = named_criteria(NamedFamily::Dicke42);
    let combined = dicke.combined.unwrap();
    assert_eq!(combined.threshold(), rat(4, 5));
    let state = minwit::state::dicke_state(4, 2).unwrap();
    let mut value = 0.0;
    for (op, w) in combined.operators.iter().zip(&combined.weights) {
        let t = state.correlation(op).unwrap();
        value += rat_to_f64(w) * t * t;
    }
    value /= rat_to_f64(&combined.g0);
    assert!((value - 14.0 / 15.0).abs() < 1e-12);

    let singlet = named_criteria(NamedFamily::Singlet4);
    let combined = singlet.combined.unwrap();
    let state = minwit::state::singlet4_state().unwrap();
    let mut value = 0.0;
    for (op, w) in combined.operators.iter().zip(&combined.weights) {
        let t = state.correlation(op).unwrap();
        value += rat_to_f64(w) * t * t;
    }
    value /= rat_to_f64(&combined.g0);
    assert!((value - 7.0 / 9.0).abs() < 1e-12);
}
