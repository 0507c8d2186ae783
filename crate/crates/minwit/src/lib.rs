//! Minimal-effort multipartite entanglement witnesses.
//!
//! This crate builds nonlinear entanglement witnesses of the form
//! `W = (1/G₀) Σ_j v_j T_j²` from a handful of squared Pauli correlations
//! of a target state, together with the per-bipartition criteria that
//! certify entanglement across individual cuts. The pipeline is:
//!
//! 1. compute the correlation tensor of a target state ([`state`]),
//! 2. pick the measurement settings and correlation indices worth
//!    measuring ([`witness`]),
//! 3. build, per bipartition, the graph of correlation pairs that
//!    anticommute on one side of the cut ([`graph`]),
//! 4. bound each biseparable value by a maximum-weight independent set
//!    and optimize the weights `v_j` exactly ([`simplex`], [`witness`]),
//! 5. evaluate the witness on measured or simulated correlation data with
//!    propagated uncertainties ([`eval`], [`correlations`]).
//!
//! Randomized checks that re-derive the bounds from dense linear algebra
//! live in [`oracle`]; file formats and the command-line interface in
//! [`io`] and [`cli`].

pub mod cli;
pub mod correlations;
pub mod error;
pub mod eval;
pub mod families;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pauli;
pub mod rational;
pub mod simplex;
pub mod state;
pub mod witness;

pub use cli::{
    cli_main, EXIT_DATA, EXIT_NOT_DETECTED, EXIT_OK, EXIT_ORACLE_FAILURE, EXIT_USAGE,
};
pub use correlations::{correlations_from_counts, CorrelationSet, CountsRecord};
pub use error::{Error, Result};
pub use eval::{
    critical_noise, evaluate, noise_for_fidelity, significance_check, theta_sweep,
    theta_sweep_points, CutResult, CutVerdict, EvaluationReport, SweepPoint, Verdict,
};
pub use families::{
    named_criteria, nqubit_cluster_witness, nqubit_ghz_witness, NamedCriteria, NamedFamily,
    MAX_FAMILY_QUBITS,
};
pub use graph::{
    build_graph, mask_to_indices, max_weight_independent, maximal_independent_sets, AnticommGraph,
    MAX_GRAPH_VERTICES,
};
pub use io::{
    correlations_to_csv, correlations_to_json, counts_to_json, parse_angle,
    parse_correlations_csv, parse_correlations_json, parse_counts_json, parse_report_json,
    parse_state_json, parse_witness_json, read_correlations_csv, read_counts_json,
    read_state_json, read_witness_json, report_to_json, state_to_json, sweep_to_csv,
    witness_to_json, write_correlations_csv, write_counts_json, write_report_json,
    write_state_json, write_sweep_csv, write_witness_json,
};
pub use oracle::{
    check_anticommuting_bound, check_biseparable_bound, check_commuting_saturation,
    check_witness_threshold, product_state, verify_witness, OracleReport,
    MAX_SATURATION_QUBITS, ORACLE_TOL,
};
pub use pauli::{Bipartition, MeasurementSetting, PauliString, MAX_QUBITS};
pub use state::{
    add_white_noise, dense_pauli_matrix, density_from_correlations, make_state, simulate_counts,
    DensityMatrix, StateFamily, StateParams, StateVector, MAX_DENSE_QUBITS, MAX_ENUM_QUBITS,
    MAX_STATE_QUBITS,
};
pub use witness::{
    build_combined_witness, build_cut_criteria, optimize_weights, propose_settings,
    select_operators, CutCriterion, WeightOptimization, WitnessSpec, DEFAULT_MIN_ABS,
};
