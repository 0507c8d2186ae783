//! Reference states, correlation tensors, white noise, fidelity, and
//! simulated measurement counts.
//!
//! Basis convention: the computational-basis index of `|b₁b₂…b_N⟩` reads
//! the bits with qubit 1 most significant, so amplitudes are listed in the
//! usual order |0…00⟩, |0…01⟩, …, |1…11⟩. Correlations are evaluated
//! exactly (up to f64 rounding) through the bit-mask action of a Pauli
//! string on basis states, which keeps every operation O(2^N) and thus
//! usable well beyond dense-matrix sizes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::correlations::{CorrelationSet, CountsRecord};
use crate::error::{Error, Result};
use crate::pauli::{MeasurementSetting, PauliString};

/// Complex double, the scalar type for all state math.
pub type C64 = Complex<f64>;

/// Largest register for state vectors (2^20 amplitudes ≈ 16 MB).
pub const MAX_STATE_QUBITS: usize = 20;

/// Largest register for dense density matrices and Pauli matrices.
pub const MAX_DENSE_QUBITS: usize = 10;

/// Largest register for exhaustive 4^N correlation enumeration.
pub const MAX_ENUM_QUBITS: usize = 8;

/// Tolerance for the state-vector normalization invariant.
const NORM_TOL: f64 = 1e-12;

/// Tolerance for Hermiticity / unit-trace checks on density matrices.
const MATRIX_TOL: f64 = 1e-9;

/// A Pauli string's X/Z masks in basis-index bit order (qubit 1 is the
/// most significant bit of an N-bit basis index).
fn basis_masks(p: &PauliString) -> (usize, usize) {
    let n = p.n_qubits();
    let mut x = 0usize;
    let mut z = 0usize;
    for site in 1..=n {
        let bit = 1usize << (n - site);
        match p.digit(site) {
            1 => x |= bit,
            2 => {
                x |= bit;
                z |= bit;
            }
            3 => z |= bit,
            _ => {}
        }
    }
    (x, z)
}

/// The phase i^{|Y|} common to every matrix element of a Pauli string,
/// where |Y| is the number of σ₂ sites.
fn y_phase(p: &PauliString) -> C64 {
    match (p.x_mask() & p.z_mask()).count_ones() % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Sign picked up by σ acting on |b⟩ from the Z part: (−1)^{popcount(b∧z)}.
fn z_sign(b: usize, z: usize) -> f64 {
    if (b & z).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The dense 2^N × 2^N matrix of a Pauli string.
///
/// σ|b⟩ = i^{|Y|} (−1)^{popcount(b∧z)} |b⊕x⟩ with masks in basis-index
/// bit order, so column b has its single nonzero entry in row b⊕x.
pub fn dense_pauli_matrix(p: &PauliString) -> Result<DMatrix<C64>> {
    let n = p.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::Dimension(format!(
            "dense Pauli matrices are limited to {MAX_DENSE_QUBITS} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let (x, z) = basis_masks(p);
    let iy = y_phase(p);
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for b in 0..dim {
        m[(b ^ x, b)] = iy * z_sign(b, z);
    }
    Ok(m)
}

/// A normalized pure state of N qubits.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Builds a state from 2^N amplitudes in computational-basis order.
    /// The squared magnitudes must sum to 1 within 1e−12.
    pub fn new(n_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_STATE_QUBITS {
            return Err(Error::Argument(format!(
                "state vectors support 1..={MAX_STATE_QUBITS} qubits, got {n_qubits}"
            )));
        }
        if amps.len() != 1 << n_qubits {
            return Err(Error::Dimension(format!(
                "a {n_qubits}-qubit state needs {} amplitudes, got {}",
                1usize << n_qubits,
                amps.len()
            )));
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!(
                "state vector is not normalized: squared norm {norm_sq:.17}"
            )));
        }
        Ok(StateVector { n_qubits, amps })
    }

    /// Builds a state from (basis index, amplitude) pairs, all other
    /// amplitudes zero.
    pub fn from_sparse(n_qubits: usize, entries: &[(usize, C64)]) -> Result<Self> {
        let dim = 1usize << n_qubits;
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        for &(idx, a) in entries {
            if idx >= dim {
                return Err(Error::Argument(format!(
                    "basis index {idx} outside 0..{dim}"
                )));
            }
            amps[idx] += a;
        }
        StateVector::new(n_qubits, amps)
    }

    /// Number of qubits.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// The amplitudes in computational-basis order.
    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// The inner product ⟨self|other⟩.
    pub fn overlap(&self, other: &StateVector) -> Result<C64> {
        self.check_size(other.n_qubits)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if self.n_qubits != n {
            return Err(Error::Dimension(format!(
                "operand acts on {n} qubits but the state has {}",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// The expectation value ⟨ψ|σ_j|ψ⟩ ∈ [−1, 1].
    pub fn correlation(&self, j: &PauliString) -> Result<f64> {
        self.check_size(j.n_qubits())?;
        let (x, z) = basis_masks(j);
        let iy = y_phase(j);
        let mut acc = C64::new(0.0, 0.0);
        for (b, amp) in self.amps.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            acc += self.amps[b ^ x].conj() * iy * z_sign(b, z) * amp;
        }
        debug_assert!(acc.im.abs() < 1e-10, "Pauli expectation must be real");
        Ok(acc.re.clamp(-1.0, 1.0))
    }

    /// All correlations with |T_j| > tol, as an exact (stderr 0) set.
    /// The identity entry is always included.
    ///
    /// Enumerates all 4^N Pauli strings and is therefore limited to
    /// N ≤ 8; compute individual correlations directly for larger
    /// registers.
    pub fn nonvanishing_correlations(&self, tol: f64) -> Result<CorrelationSet> {
        if tol <= 0.0 {
            return Err(Error::Argument(format!("tolerance must be positive, got {tol}")));
        }
        let n = self.n_qubits;
        if n > MAX_ENUM_QUBITS {
            return Err(Error::Argument(format!(
                "exhaustive correlation enumeration is limited to {MAX_ENUM_QUBITS} qubits, got {n}"
            )));
        }
        let mut set = CorrelationSet::new(n)?;
        let mut digits = vec![0u8; n];
        for code in 0..(1usize << (2 * n)) {
            for (i, d) in digits.iter_mut().enumerate() {
                *d = ((code >> (2 * i)) & 3) as u8;
            }
            let j = PauliString::from_digits(&digits)?;
            let value = self.correlation(&j)?;
            if value.abs() > tol {
                set.insert(j, value, 0.0)?;
            }
        }
        Ok(set)
    }

    /// The projector |ψ⟩⟨ψ| as a dense density matrix.
    pub fn projector(&self) -> Result<DensityMatrix> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::Dimension(format!(
                "dense density matrices are limited to {MAX_DENSE_QUBITS} qubits"
            )));
        }
        let dim = self.amps.len();
        let mat = DMatrix::from_fn(dim, dim, |r, c| self.amps[r] * self.amps[c].conj());
        Ok(DensityMatrix { n_qubits: self.n_qubits, mat })
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateVector({} qubits)", self.n_qubits)
    }
}

/// A mixed state of N qubits as a dense 2^N × 2^N matrix.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    mat: DMatrix<C64>,
}

impl DensityMatrix {
    /// Wraps a matrix, checking dimensions, Hermiticity, and unit trace.
    /// Positivity is not enforced here; call [`DensityMatrix::min_eigenvalue`]
    /// when validating externally supplied data.
    pub fn from_matrix(n_qubits: usize, mat: DMatrix<C64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::Argument(format!(
                "density matrices support 1..={MAX_DENSE_QUBITS} qubits, got {n_qubits}"
            )));
        }
        let dim = 1usize << n_qubits;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::Dimension(format!(
                "a {n_qubits}-qubit density matrix must be {dim}×{dim}, got {}×{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm_err = (&mat - mat.adjoint()).norm();
        if herm_err > MATRIX_TOL {
            return Err(Error::Validation(format!(
                "matrix is not Hermitian (deviation {herm_err:.3e})"
            )));
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > MATRIX_TOL || trace.im.abs() > MATRIX_TOL {
            return Err(Error::Validation(format!(
                "matrix trace must be 1, got {trace}"
            )));
        }
        Ok(DensityMatrix { n_qubits, mat })
    }

    /// Number of qubits.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// The expectation value Tr(ρ σ_j) ∈ [−1, 1].
    pub fn correlation(&self, j: &PauliString) -> Result<f64> {
        if j.n_qubits() != self.n_qubits {
            return Err(Error::Dimension(format!(
                "operator acts on {} qubits but the state has {}",
                j.n_qubits(),
                self.n_qubits
            )));
        }
        let (x, z) = basis_masks(j);
        let iy = y_phase(j);
        let mut acc = C64::new(0.0, 0.0);
        for b in 0..self.mat.nrows() {
            acc += iy * z_sign(b, z) * self.mat[(b, b ^ x)];
        }
        debug_assert!(acc.im.abs() < 1e-9, "Pauli expectation must be real");
        Ok(acc.re.clamp(-1.0, 1.0))
    }

    /// The fidelity F = ⟨ψ|ρ|ψ⟩ with a pure target state.
    pub fn fidelity(&self, psi: &StateVector) -> Result<f64> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::Dimension(format!(
                "target state has {} qubits but the density matrix has {}",
                psi.n_qubits(),
                self.n_qubits
            )));
        }
        let v = DVector::from_column_slice(psi.amplitudes());
        let f = (v.adjoint() * &self.mat * &v)[(0, 0)];
        debug_assert!(f.im.abs() < 1e-9);
        Ok(f.re.clamp(0.0, 1.0))
    }

    /// The smallest eigenvalue, for positivity checks on supplied data.
    pub fn min_eigenvalue(&self) -> f64 {
        self.mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |m, &e| m.min(e))
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix({} qubits)", self.n_qubits)
    }
}

/// The built-in target-state families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StateFamily {
    /// (|0…0⟩ + |1…1⟩)/√2.
    Ghz,
    /// The four-qubit state (|0000⟩ + |0011⟩ − |1100⟩ + |1111⟩)/2.
    Cluster4,
    /// The linear-chain cluster state |C̃_N⟩ fixed by the standard
    /// stabilizer generators; N must be even.
    ClusterStabilizer,
    /// The Dicke state with a fixed number of excitations.
    Dicke,
    /// The W state (one excitation shared over N qubits).
    W,
    /// The four-qubit total-spin singlet.
    Singlet4,
    /// The experiment's two-parameter four-qubit family |Ψ(θ, φ)⟩.
    PsiFamily,
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            StateFamily::Ghz => "ghz",
            StateFamily::Cluster4 => "cluster4",
            StateFamily::ClusterStabilizer => "cluster",
            StateFamily::Dicke => "dicke",
            StateFamily::W => "w",
            StateFamily::Singlet4 => "singlet4",
            StateFamily::PsiFamily => "psi",
        };
        f.write_str(name)
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(StateFamily::Ghz),
            "cluster4" => Ok(StateFamily::Cluster4),
            "cluster" => Ok(StateFamily::ClusterStabilizer),
            "dicke" => Ok(StateFamily::Dicke),
            "w" => Ok(StateFamily::W),
            "singlet4" => Ok(StateFamily::Singlet4),
            "psi" => Ok(StateFamily::PsiFamily),
            other => Err(Error::parse(format!(
                "unknown state family {other:?} (expected ghz, cluster4, cluster, dicke, w, singlet4, or psi)"
            ))),
        }
    }
}

/// Extra parameters for [`make_state`]; families reject parameters they
/// do not use, so mistakes surface instead of being ignored.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StateParams {
    /// Number of excitations (Dicke only).
    pub excitations: Option<usize>,
    /// θ in radians (PsiFamily only).
    pub theta: Option<f64>,
    /// φ in radians (PsiFamily only).
    pub phi: Option<f64>,
}

impl StateParams {
    fn expect_none(&self, family: StateFamily) -> Result<()> {
        if self.excitations.is_some() || self.theta.is_some() || self.phi.is_some() {
            return Err(Error::Argument(format!(
                "family {family} takes no parameters"
            )));
        }
        Ok(())
    }
}

/// Builds one of the reference states.
///
/// `Cluster4`, `Singlet4`, and `PsiFamily` require n = 4;
/// `ClusterStabilizer` requires even n; `Dicke` requires `excitations`
/// and `PsiFamily` requires `theta` and `phi`.
pub fn make_state(family: StateFamily, n: usize, params: &StateParams) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::Argument(format!(
            "reference states need at least 2 qubits, got {n}"
        )));
    }
    let require_four = |family: StateFamily| -> Result<()> {
        if n != 4 {
            return Err(Error::Argument(format!(
                "family {family} is defined for exactly 4 qubits, got {n}"
            )));
        }
        Ok(())
    };
    match family {
        StateFamily::Ghz => {
            params.expect_none(family)?;
            ghz_state(n)
        }
        StateFamily::Cluster4 => {
            params.expect_none(family)?;
            require_four(family)?;
            cluster4_state()
        }
        StateFamily::ClusterStabilizer => {
            params.expect_none(family)?;
            cluster_chain_state(n)
        }
        StateFamily::Dicke => {
            let k = params.excitations.ok_or_else(|| {
                Error::Argument("family dicke requires the excitations parameter".into())
            })?;
            if params.theta.is_some() || params.phi.is_some() {
                return Err(Error::Argument("family dicke takes only excitations".into()));
            }
            dicke_state(n, k)
        }
        StateFamily::W => {
            params.expect_none(family)?;
            dicke_state(n, 1)
        }
        StateFamily::Singlet4 => {
            params.expect_none(family)?;
            require_four(family)?;
            singlet4_state()
        }
        StateFamily::PsiFamily => {
            require_four(family)?;
            if params.excitations.is_some() {
                return Err(Error::Argument("family psi takes only theta and phi".into()));
            }
            let theta = params.theta.ok_or_else(|| {
                Error::Argument("family psi requires the theta parameter".into())
            })?;
            let phi = params.phi.ok_or_else(|| {
                Error::Argument("family psi requires the phi parameter".into())
            })?;
            psi_state(theta, phi)
        }
    }
}

/// (|0…0⟩ + |1…1⟩)/√2 on n qubits.
pub fn ghz_state(n: usize) -> Result<StateVector> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_sparse(n, &[(0, C64::new(s, 0.0)), ((1 << n) - 1, C64::new(s, 0.0))])
}

/// (|0000⟩ + |0011⟩ − |1100⟩ + |1111⟩)/2.
pub fn cluster4_state() -> Result<StateVector> {
    let h = C64::new(0.5, 0.0);
    StateVector::from_sparse(4, &[(0b0000, h), (0b0011, h), (0b1100, -h), (0b1111, h)])
}

/// The linear-chain cluster state: the unique +1 eigenstate of
/// K₁ = σ₁⁽¹⁾σ₃⁽²⁾, K_i = σ₃⁽ⁱ⁻¹⁾σ₁⁽ⁱ⁾σ₃⁽ⁱ⁺¹⁾, K_N = σ₃⁽ᴺ⁻¹⁾σ₁⁽ᴺ⁾.
///
/// In amplitudes: ⟨b|C̃_N⟩ = 2^{−N/2} (−1)^{Σᵢ bᵢbᵢ₊₁}.
pub fn cluster_chain_state(n: usize) -> Result<StateVector> {
    if n % 2 != 0 {
        return Err(Error::Argument(format!(
            "the stabilizer cluster family requires an even number of qubits, got {n}"
        )));
    }
    if n > MAX_STATE_QUBITS {
        return Err(Error::Argument(format!(
            "state vectors support at most {MAX_STATE_QUBITS} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let scale = (dim as f64).sqrt().recip();
    let amps = (0..dim)
        .map(|b| {
            // Adjacent-pair product parity: qubit i is bit (n − i) of b.
            let adjacent_ones = (b & (b << 1) & (dim - 1)).count_ones();
            let sign = if adjacent_ones % 2 == 0 { 1.0 } else { -1.0 };
            C64::new(sign * scale, 0.0)
        })
        .collect();
    StateVector::new(n, amps)
}

/// The Dicke state: equal superposition of all n-bit strings with k ones.
pub fn dicke_state(n: usize, k: usize) -> Result<StateVector> {
    if k > n {
        return Err(Error::Argument(format!(
            "excitations must satisfy 0 ≤ k ≤ n, got k={k} for n={n}"
        )));
    }
    if n > MAX_STATE_QUBITS {
        return Err(Error::Argument(format!(
            "state vectors support at most {MAX_STATE_QUBITS} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let count = (0..dim).filter(|b| b.count_ones() as usize == k).count();
    let amp = C64::new((count as f64).sqrt().recip(), 0.0);
    let entries: Vec<(usize, C64)> = (0..dim)
        .filter(|b| b.count_ones() as usize == k)
        .map(|b| (b, amp))
        .collect();
    StateVector::from_sparse(n, &entries)
}

/// The four-qubit singlet
/// (|0011⟩ + |1100⟩ − (|0101⟩ + |0110⟩ + |1001⟩ + |1010⟩)/2)/√3.
pub fn singlet4_state() -> Result<StateVector> {
    let big = C64::new(3.0f64.sqrt().recip(), 0.0);
    let small = -big / 2.0;
    StateVector::from_sparse(
        4,
        &[
            (0b0011, big),
            (0b1100, big),
            (0b0101, small),
            (0b0110, small),
            (0b1001, small),
            (0b1010, small),
        ],
    )
}

/// The experiment's four-qubit family
/// |Ψ(θ, φ)⟩ = (cos 2θ |0000⟩ + sin 2θ |0011⟩
///             + e^{iφ} sin 2θ |1100⟩ − e^{iφ} cos 2θ |1111⟩)/√2,
/// with θ = 0, φ = π the GHZ state and θ = π/8, φ = π the cluster state.
pub fn psi_state(theta: f64, phi: f64) -> Result<StateVector> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c2t = (2.0 * theta).cos();
    let s2t = (2.0 * theta).sin();
    let eip = C64::new(phi.cos(), phi.sin());
    StateVector::from_sparse(
        4,
        &[
            (0b0000, C64::new(s * c2t, 0.0)),
            (0b0011, C64::new(s * s2t, 0.0)),
            (0b1100, eip * s * s2t),
            (0b1111, -eip * s * c2t),
        ],
    )
}

/// Mixes a pure state with white noise: p·|ψ⟩⟨ψ| + (1−p)·I/2^N.
/// Every non-identity correlation of the result is p times the pure value.
pub fn add_white_noise(psi: &StateVector, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Argument(format!(
            "noise mixing parameter must lie in [0,1], got {p}"
        )));
    }
    let mut rho = psi.projector()?;
    let dim = rho.mat.nrows();
    let uniform = (1.0 - p) / dim as f64;
    rho.mat *= C64::new(p, 0.0);
    for b in 0..dim {
        rho.mat[(b, b)] += uniform;
    }
    Ok(rho)
}

/// Reconstructs a density matrix from correlations via
/// ρ = (1/2^N) Σ_j T_j σ_j; missing entries are treated as zero.
/// The identity entry must be present with value 1.
pub fn density_from_correlations(corrs: &CorrelationSet) -> Result<DensityMatrix> {
    let n = corrs.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::Argument(format!(
            "density reconstruction is limited to {MAX_DENSE_QUBITS} qubits, got {n}"
        )));
    }
    let identity = PauliString::identity(n)?;
    match corrs.get(&identity) {
        Some((v, _)) if (v - 1.0).abs() <= 1e-12 => {}
        Some((v, _)) => {
            return Err(Error::Argument(format!(
                "identity correlation must be 1, got {v}"
            )))
        }
        None => {
            return Err(Error::Argument(
                "correlation set lacks the identity entry".into(),
            ))
        }
    }
    let dim = 1usize << n;
    let mut mat = DMatrix::<C64>::zeros(dim, dim);
    for (j, value, _) in corrs.iter() {
        let (x, z) = basis_masks(j);
        let iy = y_phase(j) * (value / dim as f64);
        for b in 0..dim {
            mat[(b ^ x, b)] += iy * z_sign(b, z);
        }
    }
    DensityMatrix::from_matrix(n, mat)
}

/// Samples `shots` joint outcomes of measuring `setting` on `rho`.
///
/// The probability of the outcome pattern e ∈ {0,1}^N (bit 1 = local
/// eigenvalue −1) is the Born-rule weight
/// p(e) = 2^{−N} Σ_{S ⊆ sites} (−1)^{|e∧S|} T_{M|S},
/// obtained by expanding each local projector (I ± σ)/2. Sampling uses
/// the conditional-binomial decomposition of the multinomial with a
/// ChaCha stream cipher RNG, so results are reproducible for a fixed
/// seed across platforms.
pub fn simulate_counts(
    rho: &DensityMatrix,
    setting: &MeasurementSetting,
    shots: u64,
    seed: u64,
) -> Result<CountsRecord> {
    if setting.n_qubits() != rho.n_qubits() {
        return Err(Error::Dimension(format!(
            "setting acts on {} qubits but the state has {}",
            setting.n_qubits(),
            rho.n_qubits()
        )));
    }
    if shots == 0 {
        return Err(Error::Argument("shots must be positive".into()));
    }
    let n = rho.n_qubits();
    let dim = 1usize << n;

    // T_{M|S} for every site subset S, indexed by basis-order masks.
    let mut sub_corrs = vec![0.0f64; dim];
    for mask in 0..dim {
        let digits: Vec<u8> = (1..=n)
            .map(|site| {
                if mask & (1 << (n - site)) != 0 {
                    setting.local(site)
                } else {
                    0
                }
            })
            .collect();
        sub_corrs[mask] = rho.correlation(&PauliString::from_digits(&digits)?)?;
    }

    let mut probs = vec![0.0f64; dim];
    for (e, prob) in probs.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (mask, t) in sub_corrs.iter().enumerate() {
            acc += z_sign(e, mask) * t;
        }
        *prob = acc / dim as f64;
    }
    let total: f64 = probs.iter().sum();
    if probs.iter().any(|&p| p < -1e-7) || (total - 1.0).abs() > 1e-7 {
        return Err(Error::Validation(
            "density matrix yields an invalid outcome distribution (not positive or unnormalized)"
                .into(),
        ));
    }
    for p in &mut probs {
        *p = p.max(0.0) / total;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    let mut remaining_shots = shots;
    let mut remaining_prob = 1.0f64;
    for (e, &p) in probs.iter().enumerate() {
        if remaining_shots == 0 {
            break;
        }
        let drawn = if e + 1 == dim || remaining_prob <= p {
            remaining_shots
        } else {
            let q = (p / remaining_prob).clamp(0.0, 1.0);
            let dist = Binomial::new(remaining_shots, q)
                .map_err(|err| Error::Validation(format!("binomial sampling failed: {err}")))?;
            dist.sample(&mut rng)
        };
        remaining_shots -= drawn;
        remaining_prob = (remaining_prob - p).max(0.0);
        if drawn > 0 {
            let pattern: String = (1..=n)
                .map(|site| if e & (1 << (n - site)) != 0 { '1' } else { '0' })
                .collect();
            counts.insert(pattern, drawn);
        }
    }
    CountsRecord::new(*setting, shots, counts)
}
