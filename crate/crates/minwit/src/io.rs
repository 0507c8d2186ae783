//! File formats and argument parsing: correlation CSV/JSON, counts JSON,
//! witness JSON, state JSON, report JSON, sweep CSV, and angle literals.
//!
//! Correlations travel as human-editable CSV (`index,value,stderr` with
//! optional `# key: value` comment metadata); structured objects (witnesses,
//! counts, states, reports) travel as JSON.  Every parser works on in-memory
//! strings, with thin path-based wrappers for file access, and reports the
//! offending line where the underlying format makes one available.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::correlations::{CorrelationSet, CountsRecord};
use crate::error::{Error, Result};
use crate::eval::{EvaluationReport, SweepPoint};
use crate::pauli::{Bipartition, PauliString};
use crate::rational::{rat_from_string, rat_to_string};
use crate::state::{StateVector, C64};
use crate::witness::{CutCriterion, WitnessSpec};

// ---------------------------------------------------------------------------
// Correlation CSV
// ---------------------------------------------------------------------------

/// Renders a correlation set as CSV with `# key: value` metadata comments.
///
/// The `n_qubits` entry is always written so the file is self-describing;
/// additional metadata pairs are caller-supplied (e.g. a source description).
pub fn correlations_to_csv(corrs: &CorrelationSet, metadata: &[(String, String)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# n_qubits: {}", corrs.n_qubits());
    for (key, value) in metadata {
        let _ = writeln!(out, "# {key}: {value}");
    }
    out.push_str("index,value,stderr\n");
    let mut rows: Vec<(PauliString, f64, f64)> =
        corrs.iter().map(|(p, v, s)| (*p, v, s)).collect();
    rows.sort_by_key(|(p, _, _)| p.digits());
    for (p, value, stderr) in rows {
        let _ = writeln!(out, "{p},{value},{stderr}");
    }
    out
}

/// Parses correlation CSV. Comment lines start with `#`; the first
/// non-comment line must be the header `index,value,stderr`.
pub fn parse_correlations_csv(text: &str) -> Result<CorrelationSet> {
    // Metadata comments: honour a `# n_qubits: N` declaration when present.
    let mut declared_n: Option<usize> = None;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((key, value)) = rest.split_once(':') {
                if key.trim() == "n_qubits" {
                    declared_n = value.trim().parse::<usize>().ok();
                }
            }
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| csv_error(e, "reading CSV header"))?
        .clone();
    let expected = ["index", "value", "stderr"];
    if headers.iter().ne(expected) {
        return Err(Error::parse(format!(
            "expected header 'index,value,stderr', got '{}'",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut corrs: Option<CorrelationSet> = None;
    let mut seen = 0usize;
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(e, "reading CSV row"))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 3 {
            return Err(Error::parse_at(
                line,
                format!("expected 3 fields, got {}", record.len()),
            ));
        }
        let index: PauliString = record[0]
            .parse()
            .map_err(|e: Error| Error::parse_at(line, e.to_string()))?;
        let value: f64 = record[1]
            .parse()
            .map_err(|_| Error::parse_at(line, format!("bad value '{}'", &record[1])))?;
        let stderr: f64 = record[2]
            .parse()
            .map_err(|_| Error::parse_at(line, format!("bad stderr '{}'", &record[2])))?;

        let set = match corrs.as_mut() {
            Some(set) => set,
            None => {
                let n = declared_n.unwrap_or(index.n_qubits());
                corrs = Some(CorrelationSet::new(n)?);
                corrs.as_mut().unwrap()
            }
        };
        if set.contains(&index) {
            return Err(Error::parse_at(line, format!("duplicate index {index}")));
        }
        set.insert(index, value, stderr).map_err(|e| match e {
            // Out-of-range data is a validation problem, not a syntax one.
            Error::Validation(msg) => Error::Validation(format!("line {line}: {msg}")),
            other => Error::parse_at(line, other.to_string()),
        })?;
        seen += 1;
    }
    match corrs {
        Some(set) if seen > 0 => Ok(set),
        _ => Err(Error::parse("no correlation rows found")),
    }
}

fn csv_error(err: csv::Error, context: &str) -> Error {
    match err.position() {
        Some(pos) => Error::parse_at(pos.line(), format!("{context}: {err}")),
        None => Error::parse(format!("{context}: {err}")),
    }
}

/// Reads correlation CSV from a file.
pub fn read_correlations_csv(path: impl AsRef<Path>) -> Result<CorrelationSet> {
    parse_correlations_csv(&fs::read_to_string(path)?)
}

/// Writes correlation CSV to a file.
pub fn write_correlations_csv(
    corrs: &CorrelationSet,
    metadata: &[(String, String)],
    path: impl AsRef<Path>,
) -> Result<()> {
    fs::write(path, correlations_to_csv(corrs, metadata))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Correlation JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CorrelationEntryDto {
    index: String,
    value: f64,
    stderr: f64,
}

#[derive(Serialize, Deserialize)]
struct CorrelationSetDto {
    n_qubits: usize,
    entries: Vec<CorrelationEntryDto>,
}

fn json_error(err: &serde_json::Error, context: &str) -> Error {
    Error::parse_at(err.line() as u64, format!("{context}: {err}"))
}

/// Renders a correlation set as JSON.
pub fn correlations_to_json(corrs: &CorrelationSet) -> String {
    let mut entries: Vec<CorrelationEntryDto> = corrs
        .iter()
        .map(|(p, value, stderr)| CorrelationEntryDto {
            index: p.to_string(),
            value,
            stderr,
        })
        .collect();
    entries.sort_by(|a, b| a.index.cmp(&b.index));
    let dto = CorrelationSetDto {
        n_qubits: corrs.n_qubits(),
        entries,
    };
    serde_json::to_string_pretty(&dto).expect("correlation DTO serializes")
}

/// Parses correlation JSON (`{"n_qubits": N, "entries": [...]}`).
pub fn parse_correlations_json(text: &str) -> Result<CorrelationSet> {
    let dto: CorrelationSetDto =
        serde_json::from_str(text).map_err(|e| json_error(&e, "reading correlation JSON"))?;
    let mut corrs = CorrelationSet::new(dto.n_qubits)?;
    for entry in dto.entries {
        let index: PauliString = entry.index.parse()?;
        if corrs.contains(&index) {
            return Err(Error::parse(format!("duplicate index {index}")));
        }
        corrs.insert(index, entry.value, entry.stderr)?;
    }
    Ok(corrs)
}

// ---------------------------------------------------------------------------
// Counts JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CountsRecordDto {
    setting: String,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

/// Renders measurement count records as a JSON array.
pub fn counts_to_json(records: &[CountsRecord]) -> String {
    let dtos: Vec<CountsRecordDto> = records
        .iter()
        .map(|r| CountsRecordDto {
            setting: r.setting().to_string(),
            shots: r.shots(),
            counts: r.counts().clone(),
        })
        .collect();
    serde_json::to_string_pretty(&dtos).expect("counts DTO serializes")
}

/// Parses a JSON array of measurement count records.
pub fn parse_counts_json(text: &str) -> Result<Vec<CountsRecord>> {
    let dtos: Vec<CountsRecordDto> =
        serde_json::from_str(text).map_err(|e| json_error(&e, "reading counts JSON"))?;
    dtos.into_iter()
        .map(|dto| CountsRecord::new(dto.setting.parse()?, dto.shots, dto.counts))
        .collect()
}

/// Reads counts JSON from a file.
pub fn read_counts_json(path: impl AsRef<Path>) -> Result<Vec<CountsRecord>> {
    parse_counts_json(&fs::read_to_string(path)?)
}

/// Writes counts JSON to a file.
pub fn write_counts_json(records: &[CountsRecord], path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, counts_to_json(records))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Witness JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CutCriterionDto {
    cut: String,
    operators: Vec<String>,
    coefficients: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class_a: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class_b: Option<Vec<String>>,
    bound: String,
    ideal_value: f64,
    available: bool,
}

#[derive(Serialize, Deserialize)]
struct WitnessDto {
    name: String,
    n_qubits: usize,
    operators: Vec<String>,
    weights: Vec<String>,
    g0: String,
    g: String,
    settings: Vec<String>,
    #[serde(default)]
    per_cut: Vec<CutCriterionDto>,
    detecting: bool,
    commuting: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ideal_value: Option<f64>,
    #[serde(default)]
    notes: Vec<String>,
}

fn parse_ops(digits: &[String]) -> Result<Vec<PauliString>> {
    digits.iter().map(|d| d.parse()).collect()
}

fn criterion_to_dto(criterion: &CutCriterion) -> CutCriterionDto {
    let names = |ops: &Vec<PauliString>| ops.iter().map(|p| p.to_string()).collect();
    CutCriterionDto {
        cut: criterion.cut.to_string(),
        operators: criterion.operators.iter().map(|p| p.to_string()).collect(),
        coefficients: criterion.coefficients.iter().map(rat_to_string).collect(),
        class_a: criterion.class_a.as_ref().map(names),
        class_b: criterion.class_b.as_ref().map(names),
        bound: rat_to_string(&criterion.bound),
        ideal_value: criterion.ideal_value,
        available: criterion.available,
    }
}

fn criterion_from_dto(dto: CutCriterionDto, n_qubits: usize) -> Result<CutCriterion> {
    Ok(CutCriterion {
        cut: Bipartition::parse(&dto.cut, n_qubits)?,
        operators: parse_ops(&dto.operators)?,
        coefficients: dto
            .coefficients
            .iter()
            .map(|s| rat_from_string(s))
            .collect::<Result<_>>()?,
        class_a: dto.class_a.as_deref().map(parse_ops).transpose()?,
        class_b: dto.class_b.as_deref().map(parse_ops).transpose()?,
        bound: rat_from_string(&dto.bound)?,
        ideal_value: dto.ideal_value,
        available: dto.available,
    })
}

/// Renders a witness as JSON, with exact rational weights as `p/q` strings.
pub fn witness_to_json(spec: &WitnessSpec) -> String {
    let dto = WitnessDto {
        name: spec.name.clone(),
        n_qubits: spec.n_qubits,
        operators: spec.operators.iter().map(|p| p.to_string()).collect(),
        weights: spec.weights.iter().map(rat_to_string).collect(),
        g0: rat_to_string(&spec.g0),
        g: rat_to_string(&spec.g),
        settings: spec.settings.iter().map(|s| s.to_string()).collect(),
        per_cut: spec.per_cut.iter().map(criterion_to_dto).collect(),
        detecting: spec.detecting,
        commuting: spec.commuting,
        ideal_value: spec.ideal_value,
        notes: spec.notes.clone(),
    };
    serde_json::to_string_pretty(&dto).expect("witness DTO serializes")
}

/// Parses a witness from JSON and validates its structural invariants.
pub fn parse_witness_json(text: &str) -> Result<WitnessSpec> {
    let dto: WitnessDto =
        serde_json::from_str(text).map_err(|e| json_error(&e, "reading witness JSON"))?;
    let spec = WitnessSpec {
        operators: parse_ops(&dto.operators)?,
        weights: dto
            .weights
            .iter()
            .map(|s| rat_from_string(s))
            .collect::<Result<_>>()?,
        g0: rat_from_string(&dto.g0)?,
        g: rat_from_string(&dto.g)?,
        settings: dto
            .settings
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_>>()?,
        per_cut: dto
            .per_cut
            .into_iter()
            .map(|c| criterion_from_dto(c, dto.n_qubits))
            .collect::<Result<_>>()?,
        name: dto.name,
        n_qubits: dto.n_qubits,
        detecting: dto.detecting,
        commuting: dto.commuting,
        ideal_value: dto.ideal_value,
        notes: dto.notes,
    };
    spec.validate()?;
    Ok(spec)
}

/// Reads a witness from a JSON file.
pub fn read_witness_json(path: impl AsRef<Path>) -> Result<WitnessSpec> {
    parse_witness_json(&fs::read_to_string(path)?)
}

/// Writes a witness to a JSON file.
pub fn write_witness_json(spec: &WitnessSpec, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, witness_to_json(spec))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// State JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct StateDto {
    n_qubits: usize,
    /// Amplitudes in computational-basis order as `[re, im]` pairs.
    amplitudes: Vec<[f64; 2]>,
}

/// Renders a pure state as JSON with `[re, im]` amplitude pairs.
pub fn state_to_json(psi: &StateVector) -> String {
    let dto = StateDto {
        n_qubits: psi.n_qubits(),
        amplitudes: psi.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
    };
    serde_json::to_string_pretty(&dto).expect("state DTO serializes")
}

/// Parses a pure state from JSON, normalizing the amplitude vector.
///
/// Accepting unnormalized amplitudes makes hand-written states convenient
/// (e.g. `[[1,0],[0,0],[0,0],[1,0]]` for a Bell state); a vector of vanishing
/// norm is rejected.
pub fn parse_state_json(text: &str) -> Result<StateVector> {
    let dto: StateDto =
        serde_json::from_str(text).map_err(|e| json_error(&e, "reading state JSON"))?;
    if dto.n_qubits == 0 || dto.n_qubits > crate::state::MAX_STATE_QUBITS {
        return Err(Error::Validation(format!(
            "state JSON declares {} qubits, supported range is 1..={}",
            dto.n_qubits,
            crate::state::MAX_STATE_QUBITS
        )));
    }
    if dto.amplitudes.len() != 1 << dto.n_qubits {
        return Err(Error::Dimension(format!(
            "a {}-qubit state needs {} amplitudes, got {}",
            dto.n_qubits,
            1usize << dto.n_qubits,
            dto.amplitudes.len()
        )));
    }
    let mut amps: Vec<C64> = dto
        .amplitudes
        .iter()
        .map(|&[re, im]| C64::new(re, im))
        .collect();
    if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::Validation(
            "state amplitudes must be finite".to_string(),
        ));
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-9 {
        return Err(Error::Validation(
            "state amplitudes have vanishing norm".to_string(),
        ));
    }
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::new(dto.n_qubits, amps)
}

/// Reads a pure state from a JSON file.
pub fn read_state_json(path: impl AsRef<Path>) -> Result<StateVector> {
    parse_state_json(&fs::read_to_string(path)?)
}

/// Writes a pure state to a JSON file.
pub fn write_state_json(psi: &StateVector, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, state_to_json(psi))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Report JSON and sweep CSV
// ---------------------------------------------------------------------------

/// Renders an evaluation report as JSON.
pub fn report_to_json(report: &EvaluationReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// Parses an evaluation report back from JSON.
pub fn parse_report_json(text: &str) -> Result<EvaluationReport> {
    serde_json::from_str(text).map_err(|e| json_error(&e, "reading report JSON"))
}

/// Writes an evaluation report to a JSON file.
pub fn write_report_json(report: &EvaluationReport, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, report_to_json(report))?;
    Ok(())
}

/// Renders sweep points as plot-ready CSV.
pub fn sweep_to_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("theta,phi,p,w_ghz,w_cluster,fidelity\n");
    for pt in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            pt.theta, pt.phi, pt.noise_p, pt.w_ghz, pt.w_cluster, pt.fidelity
        );
    }
    out
}

/// Writes sweep points to a CSV file.
pub fn write_sweep_csv(points: &[SweepPoint], path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, sweep_to_csv(points))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Angle literals
// ---------------------------------------------------------------------------

/// Parses an angle argument: plain radians (`0.3927`), `pi` multiples
/// (`pi`, `2pi`, `0.5pi`, `-pi`), and fractions (`pi/8`, `3pi/4`, `1/2`).
pub fn parse_angle(text: &str) -> Result<f64> {
    let raw = text.trim().to_ascii_lowercase();
    if raw.is_empty() {
        return Err(Error::parse("empty angle"));
    }
    let (sign, body) = match raw.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim_start()),
        None => (1.0, raw.strip_prefix('+').unwrap_or(&raw).trim_start()),
    };
    let (numerator, denominator) = match body.split_once('/') {
        Some((num, den)) => {
            let den = den.trim();
            let den: f64 = den
                .parse()
                .map_err(|_| Error::parse(format!("bad denominator '{den}' in angle '{text}'")))?;
            (num.trim(), den)
        }
        None => (body, 1.0),
    };
    if denominator == 0.0 || !denominator.is_finite() {
        return Err(Error::parse(format!("bad denominator in angle '{text}'")));
    }
    let value = if let Some(coeff) = numerator.strip_suffix("pi") {
        let coeff = coeff.trim();
        let factor: f64 = if coeff.is_empty() {
            1.0
        } else {
            coeff
                .parse()
                .map_err(|_| Error::parse(format!("bad coefficient '{coeff}' in angle '{text}'")))?
        };
        factor * std::f64::consts::PI
    } else {
        numerator
            .parse()
            .map_err(|_| Error::parse(format!("bad angle '{text}'")))?
    };
    let angle = sign * value / denominator;
    if !angle.is_finite() {
        return Err(Error::parse(format!("angle '{text}' is not finite")));
    }
    Ok(angle)
}
