//! Command-line interface: build witnesses, evaluate data, simulate counts,
//! sweep the state family, and verify bounds by brute force.
//!
//! Exit codes are a stable contract:
//! 0 success (for `eval`: genuine multipartite entanglement detected),
//! 1 oracle suite failure,
//! 2 usage error,
//! 3 witness did not detect,
//! 4 data or validation error.

use std::f64::consts::FRAC_PI_4;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::correlations::{correlations_from_counts, CorrelationSet};
use crate::error::{Error, Result};
use crate::eval::{evaluate, theta_sweep, Verdict};
use crate::io::{
    parse_angle, read_correlations_csv, read_counts_json, read_witness_json, write_counts_json,
    write_report_json, write_sweep_csv, write_witness_json,
};
use crate::oracle::verify_witness;
use crate::pauli::MeasurementSetting;
use crate::state::{add_white_noise, make_state, simulate_counts, StateFamily, StateParams};
use crate::witness::{build_combined_witness, DEFAULT_MIN_ABS};

/// Exit code for detected entanglement / overall success.
pub const EXIT_OK: i32 = 0;
/// Exit code when an oracle suite observes a bound violation.
pub const EXIT_ORACLE_FAILURE: i32 = 1;
/// Exit code for usage errors (bad flags, inconsistent arguments).
pub const EXIT_USAGE: i32 = 2;
/// Exit code when evaluation completes but detects nothing.
pub const EXIT_NOT_DETECTED: i32 = 3;
/// Exit code for malformed or invalid data.
pub const EXIT_DATA: i32 = 4;

#[derive(Parser)]
#[command(
    name = "minwit",
    version,
    about = "Minimal-effort multipartite entanglement witnesses from Pauli correlations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a witness for a reference state from measurement settings.
    Build(BuildArgs),
    /// Evaluate a witness on measured correlations and write a report.
    Eval(EvalArgs),
    /// Simulate measurement counts for a noisy reference state.
    Simulate(SimulateArgs),
    /// Sweep the four-qubit state family over theta and tabulate witnesses.
    Sweep(SweepArgs),
    /// Brute-force the biseparable bounds behind a witness.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Reference state family: ghz, cluster4, cluster, dicke, w, singlet4, psi.
    #[arg(long)]
    state: String,
    /// Number of qubits.
    #[arg(long)]
    n: usize,
    /// Number of excitations (dicke only).
    #[arg(long)]
    excitations: Option<usize>,
    /// Theta for the psi family; accepts pi fractions like pi/8.
    #[arg(long)]
    theta: Option<String>,
    /// Phi for the psi family; accepts pi fractions like pi.
    #[arg(long)]
    phi: Option<String>,
    /// Comma-separated measurement settings (digit strings), or "auto".
    #[arg(long, default_value = "auto")]
    settings: String,
    /// Minimum |T| for an operator to enter the witness.
    #[arg(long, default_value_t = DEFAULT_MIN_ABS)]
    min_abs: f64,
    /// Name recorded in the witness file (defaults to the family label).
    #[arg(long)]
    name: Option<String>,
    /// Output path for the witness JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Witness JSON produced by `build`.
    #[arg(long)]
    witness: PathBuf,
    /// Correlation CSV (header `index,value,stderr`).
    #[arg(long)]
    correlations: Option<PathBuf>,
    /// Counts JSON; correlations are estimated from it. CSV entries, when
    /// also given, override count-derived values per operator.
    #[arg(long)]
    counts: Option<PathBuf>,
    /// Output path for the evaluation report JSON.
    #[arg(long)]
    report: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Reference state family: ghz, cluster4, cluster, dicke, w, singlet4, psi.
    #[arg(long)]
    state: String,
    /// Number of qubits.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Number of excitations (dicke only).
    #[arg(long)]
    excitations: Option<usize>,
    /// Theta for the psi family; accepts pi fractions like pi/8.
    #[arg(long)]
    theta: Option<String>,
    /// Phi for the psi family; accepts pi fractions like pi.
    #[arg(long)]
    phi: Option<String>,
    /// White-noise mixing parameter p: rho = p|psi><psi| + (1-p) I/2^n.
    #[arg(long)]
    noise_p: f64,
    /// Comma-separated measurement settings (digit strings).
    #[arg(long)]
    settings: String,
    /// Shots per setting.
    #[arg(long)]
    shots: u64,
    /// RNG seed; setting k uses seed + k.
    #[arg(long)]
    seed: u64,
    /// Output path for the counts JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Phi for the swept family; accepts pi fractions like pi.
    #[arg(long)]
    phi: String,
    /// Number of equidistant theta points from 0 to pi/4 inclusive.
    #[arg(long)]
    steps: usize,
    /// White-noise mixing parameter applied to every point.
    #[arg(long)]
    noise_p: f64,
    /// Output path for the sweep CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Witness JSON produced by `build`.
    #[arg(long)]
    witness: PathBuf,
    /// Sample count per oracle suite.
    #[arg(long)]
    samples: u64,
    /// RNG seed for the oracle suites.
    #[arg(long)]
    seed: u64,
}

/// Parses argv and runs the requested subcommand, returning the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Build(args) => run_build(args),
        Command::Eval(args) => run_eval(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Verify(args) => run_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Argument(_) => EXIT_USAGE,
                _ => EXIT_DATA,
            }
        }
    }
}

fn parse_settings_list(text: &str) -> Result<Vec<MeasurementSetting>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<MeasurementSetting>()
                .map_err(|e| Error::Argument(format!("invalid setting {s:?}: {e}")))
        })
        .collect()
}

fn state_params(
    excitations: Option<usize>,
    theta: Option<&str>,
    phi: Option<&str>,
) -> Result<StateParams> {
    Ok(StateParams {
        excitations,
        theta: theta.map(parse_angle).transpose()?,
        phi: phi.map(parse_angle).transpose()?,
    })
}

fn run_build(args: BuildArgs) -> Result<i32> {
    let family: StateFamily = args.state.parse()?;
    let params = state_params(args.excitations, args.theta.as_deref(), args.phi.as_deref())?;
    let state = make_state(family, args.n, &params)?;

    let (corrs, settings) = if args.settings.trim().eq_ignore_ascii_case("auto") {
        (state.nonvanishing_correlations(1e-9)?, Vec::new())
    } else {
        let settings = parse_settings_list(&args.settings)?;
        if settings.is_empty() {
            return Err(Error::Argument(
                "at least one measurement setting is required".into(),
            ));
        }
        // Only correlations derivable from the requested settings matter.
        let mut corrs = CorrelationSet::new(args.n)?;
        for setting in &settings {
            for op in setting.derivable_indices() {
                if op.is_identity() || corrs.contains(&op) {
                    continue;
                }
                corrs.insert(op, state.correlation(&op)?, 0.0)?;
            }
        }
        (corrs, settings)
    };

    let mut spec = build_combined_witness(&corrs, &settings, args.min_abs)?;
    spec.name = args.name.unwrap_or_else(|| {
        let label = family.to_string();
        if label.ends_with(|c: char| c.is_ascii_digit()) {
            label
        } else {
            format!("{label}{}", args.n)
        }
    });
    write_witness_json(&spec, &args.out)?;

    println!(
        "wrote {}: {} operators over {} settings, threshold {} = {:.6}",
        args.out.display(),
        spec.operators.len(),
        spec.settings.len(),
        spec.threshold(),
        spec.threshold_f64()
    );
    if let Some(ideal) = spec.ideal_value {
        println!(
            "ideal value {:.6} ({})",
            ideal,
            if spec.detecting {
                "detects the target state"
            } else {
                "does not detect the target state"
            }
        );
    }
    for note in &spec.notes {
        println!("note: {note}");
    }
    Ok(EXIT_OK)
}

fn run_eval(args: EvalArgs) -> Result<i32> {
    let witness = read_witness_json(&args.witness)?;
    if args.correlations.is_none() && args.counts.is_none() {
        return Err(Error::Argument(
            "eval needs --correlations, --counts, or both".into(),
        ));
    }

    let mut corrs = match &args.counts {
        Some(path) => correlations_from_counts(&read_counts_json(path)?)?,
        None => CorrelationSet::new(witness.n_qubits)?,
    };
    if let Some(path) = &args.correlations {
        let measured = read_correlations_csv(path)?;
        if measured.n_qubits() != corrs.n_qubits() {
            return Err(Error::Dimension(format!(
                "correlation file holds {}-qubit data, counts hold {}-qubit data",
                measured.n_qubits(),
                corrs.n_qubits()
            )));
        }
        for (op, value, stderr) in measured.iter() {
            corrs.insert(*op, value, stderr)?;
        }
    }

    let report = evaluate(&witness, &corrs)?;
    write_report_json(&report, &args.report)?;

    println!(
        "{}: value {:.6} ± {:.6}, threshold {:.6}, significance {:.2}",
        report.witness_id, report.value, report.stderr, report.threshold, report.significance
    );
    for cut in &report.per_cut {
        println!(
            "  cut {}: {:.6} ± {:.6} vs {:.6} ({:?})",
            cut.cut, cut.value, cut.stderr, cut.bound, cut.verdict
        );
    }
    println!("verdict: {:?}", report.verdict);
    Ok(match report.verdict {
        Verdict::GenuineMultipartite => EXIT_OK,
        Verdict::NotDetected => EXIT_NOT_DETECTED,
    })
}

fn run_simulate(args: SimulateArgs) -> Result<i32> {
    let family: StateFamily = args.state.parse()?;
    let params = state_params(args.excitations, args.theta.as_deref(), args.phi.as_deref())?;
    let state = make_state(family, args.n, &params)?;
    let rho = add_white_noise(&state, args.noise_p)?;

    let settings = parse_settings_list(&args.settings)?;
    if settings.is_empty() {
        return Err(Error::Argument(
            "at least one measurement setting is required".into(),
        ));
    }
    let records = settings
        .iter()
        .enumerate()
        .map(|(k, setting)| {
            simulate_counts(&rho, setting, args.shots, args.seed.wrapping_add(k as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    write_counts_json(&records, &args.out)?;
    println!(
        "wrote {}: {} settings × {} shots at p = {}",
        args.out.display(),
        records.len(),
        args.shots,
        args.noise_p
    );
    Ok(EXIT_OK)
}

fn run_sweep(args: SweepArgs) -> Result<i32> {
    if args.steps == 0 {
        return Err(Error::Argument("sweep needs at least one step".into()));
    }
    let phi = parse_angle(&args.phi)?;
    let thetas: Vec<f64> = if args.steps == 1 {
        vec![0.0]
    } else {
        (0..args.steps)
            .map(|k| FRAC_PI_4 * k as f64 / (args.steps - 1) as f64)
            .collect()
    };
    let points = theta_sweep(phi, &thetas, args.noise_p)?;
    write_sweep_csv(&points, &args.out)?;
    println!("wrote {}: {} sweep points", args.out.display(), points.len());
    Ok(EXIT_OK)
}

fn run_verify(args: VerifyArgs) -> Result<i32> {
    let witness = read_witness_json(&args.witness)?;
    let reports = verify_witness(&witness, args.samples, args.seed)?;
    println!(
        "{:<40} {:>9} {:>12} {:>12} {:>12}  result",
        "suite", "trials", "max", "bound", "margin"
    );
    let mut all_pass = true;
    for report in &reports {
        all_pass &= report.pass;
        println!(
            "{:<40} {:>9} {:>12.8} {:>12.8} {:>12.4e}  {}",
            report.suite,
            report.trials,
            report.max_observed,
            report.bound,
            report.margin,
            if report.pass { "pass" } else { "FAIL" }
        );
        if !report.pass {
            println!("  worst case: {}", report.worst_case_descriptor);
        }
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_ORACLE_FAILURE })
}
