//! Finite-dimensional state algebra: density operators, ensembles, entropies,
//! the Holevo quantity, qubit energy-preserving channels and the bipartite
//! operations used by dense coding.
//!
//! Every logarithm is base 2 and `0 · log 0 = 0`.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::linalg::{pauli, CMatrix, C64};
use crate::rng::SplitMix64;

/// Tolerance on Hermiticity and unit trace of a density operator.
pub const STATE_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted (and clamped to zero) in a state.
pub const EIGEN_FLOOR: f64 = -1e-10;
/// Tolerance on probability-vector normalization.
pub const PROB_TOL: f64 = 1e-10;
/// Tolerance on ensemble-weight normalization.
pub const ENSEMBLE_TOL: f64 = 1e-12;

/// Shannon entropy in bits, checked.
pub fn shannon_entropy(probs: &[f64]) -> Result<f64> {
    check_distribution(probs, PROB_TOL)?;
    Ok(entropy_bits(probs))
}

/// Binary entropy `H(x) = −x log₂ x − (1−x) log₂(1−x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("binary entropy argument {x} outside [0, 1]")));
    }
    Ok(h2(x))
}

pub(crate) fn check_distribution(probs: &[f64], tol: f64) -> Result<()> {
    if let Some(&p) = probs.iter().find(|&&p| p < 0.0 || p.is_nan()) {
        return Err(Error::NegativeProbability(p));
    }
    if let Some(&p) = probs.iter().find(|&&p| p > 1.0 + tol) {
        return Err(domain(format!("probability {p} exceeds 1")));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > tol {
        return Err(Error::NonNormalized { sum });
    }
    Ok(())
}

/// Unchecked `−Σ p log₂ p`, skipping non-positive entries.
pub(crate) fn entropy_bits(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// Unchecked binary entropy; arguments are clamped into `[0, 1]`.
pub(crate) fn h2(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    entropy_bits(&[x, 1.0 - x])
}

/// The dimensionless Hamiltonian `H = Σ n |n⟩⟨n|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hamiltonian {
    dim: usize,
}

impl Hamiltonian {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(domain("Hamiltonian dimension must be positive"));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn levels(&self) -> Vec<f64> {
        (0..self.dim).map(|n| n as f64).collect()
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&self.levels())
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    m: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(m: CMatrix) -> Result<Self> {
        let herm = m.hermiticity_defect();
        if herm > STATE_TOL {
            return Err(Error::NotAState(format!("Hermiticity defect {herm:e}")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::NotAState(format!("trace {tr}")));
        }
        let min = m.hermitian_eigenvalues().first().copied().unwrap_or(0.0);
        if min < EIGEN_FLOOR {
            return Err(Error::NotAState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { m })
    }

    /// Wraps a matrix that is a state by construction.
    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m }
    }

    /// Projector onto `v / ‖v‖`.
    pub fn pure(v: &[C64]) -> Result<Self> {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if v.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotAState("zero state vector".into()));
        }
        let unit: Vec<C64> = v.iter().map(|z| z / norm).collect();
        Ok(Self::from_matrix_unchecked(CMatrix::projector(&unit)))
    }

    /// Projector onto a real-amplitude vector.
    pub fn pure_real(amplitudes: &[f64]) -> Result<Self> {
        let v: Vec<C64> = amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect();
        Self::pure(&v)
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        check_distribution(probs, STATE_TOL)?;
        Ok(Self::from_matrix_unchecked(CMatrix::from_diagonal(probs)))
    }

    pub fn basis(dim: usize, n: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::IndexOutOfRange { index: n, dim });
        }
        let mut probs = vec![0.0; dim];
        probs[n] = 1.0;
        Self::diagonal(&probs)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_matrix_unchecked(CMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// Qubit state with Bloch vector `(x, y, z)`, `|r| ≤ 1`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let r2 = x * x + y * y + z * z;
        if r2 > 1.0 + 1e-12 {
            return Err(Error::NotAState(format!("Bloch radius {} > 1", r2.sqrt())));
        }
        let m = CMatrix::from_rows(
            2,
            vec![
                C64::new(0.5 * (1.0 + z), 0.0),
                C64::new(0.5 * x, -0.5 * y),
                C64::new(0.5 * x, 0.5 * y),
                C64::new(0.5 * (1.0 - z), 0.0),
            ],
        )?;
        Ok(Self::from_matrix_unchecked(m))
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.m.hermitian_eigenvalues()
    }

    /// Real parts of the diagonal (populations in the energy basis).
    pub fn populations(&self) -> Vec<f64> {
        self.m.diagonal().iter().map(|z| z.re).collect()
    }

    /// Checks the state invariants; useful for values assembled elsewhere.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.m.clone()).map(|_| ())
    }

    /// Convex combination `Σ wᵢ ρᵢ` of same-dimension states.
    pub fn mixture(items: &[(f64, &DensityOperator)]) -> Result<Self> {
        let dim = items
            .first()
            .map(|(_, s)| s.dim())
            .ok_or_else(|| domain("empty mixture"))?;
        let weights: Vec<f64> = items.iter().map(|(w, _)| *w).collect();
        check_distribution(&weights, ENSEMBLE_TOL)?;
        let mut acc = CMatrix::zeros(dim);
        for (w, s) in items {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: s.dim(),
                });
            }
            acc = &acc + &s.m.scale_real(*w);
        }
        Ok(Self::from_matrix_unchecked(acc))
    }
}

/// Von Neumann entropy `S(ρ) = −Tr ρ log₂ ρ`.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    spectrum_entropy(&rho.eigenvalues())
}

fn spectrum_entropy(ev: &[f64]) -> Result<f64> {
    if let Some(&min) = ev.iter().find(|&&l| l < EIGEN_FLOOR) {
        return Err(Error::NotAState(format!("negative eigenvalue {min:e}")));
    }
    Ok(entropy_bits(ev))
}

/// A classical-quantum encoding `{pᵢ, ρᵢ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    items: Vec<(f64, DensityOperator)>,
}

impl Ensemble {
    pub fn new(items: Vec<(f64, DensityOperator)>) -> Result<Self> {
        let dim = items
            .first()
            .map(|(_, s)| s.dim())
            .ok_or_else(|| domain("empty ensemble"))?;
        if let Some((_, s)) = items.iter().find(|(_, s)| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: s.dim(),
            });
        }
        let probs: Vec<f64> = items.iter().map(|(p, _)| *p).collect();
        check_distribution(&probs, ENSEMBLE_TOL)?;
        Ok(Self { items })
    }

    /// Equal weights over the given states.
    pub fn uniform(states: Vec<DensityOperator>) -> Result<Self> {
        let p = 1.0 / states.len().max(1) as f64;
        Self::new(states.into_iter().map(|s| (p, s)).collect())
    }

    pub fn items(&self) -> &[(f64, DensityOperator)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.items[0].1.dim()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.items.iter().map(|(p, _)| *p).collect()
    }

    /// `ρ̄ = Σ pᵢ ρᵢ`.
    pub fn average_state(&self) -> DensityOperator {
        let mut acc = CMatrix::zeros(self.dim());
        for (p, s) in &self.items {
            acc = &acc + &s.matrix().scale_real(*p);
        }
        DensityOperator::from_matrix_unchecked(acc)
    }

    /// Applies a fallible map to every member state, keeping weights.
    pub fn try_map<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&DensityOperator) -> Result<DensityOperator>,
    {
        let items = self
            .items
            .iter()
            .map(|(p, s)| Ok((*p, f(s)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { items })
    }
}

/// Holevo quantity `χ = S(ρ̄) − Σ pᵢ S(ρᵢ)`.
pub fn holevo_chi(ens: &Ensemble) -> Result<f64> {
    let avg = von_neumann_entropy(&ens.average_state())?;
    let mut mean = 0.0;
    for (p, s) in ens.items() {
        if *p > 0.0 {
            mean += p * von_neumann_entropy(s)?;
        }
    }
    Ok((avg - mean).max(0.0))
}

/// One term `(q, θ)` of a qubit energy-preserving mixture, applying
/// `U = cos θ I + i sin θ σ_z` with weight `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseTerm {
    pub weight: f64,
    pub theta: f64,
}

/// Channels acting on a single system (or on the first factor of a
/// bipartite system).
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Identity,
    /// `λρ + (1−λ) σ_z ρ σ_z` on a qubit.
    Dephasing { lambda: f64 },
    /// `Σ q_k U_k ρ U_k†` with phase unitaries `U_k = e^{iθ_k σ_z}`.
    EnergyPreservingMixture(Vec<PhaseTerm>),
    /// General mixture of unitaries `Σ q_k U_k ρ U_k†`; used to express
    /// channels that do not commute with the Hamiltonian.
    MixedUnitary(Vec<(f64, CMatrix)>),
}

impl ChannelSpec {
    pub fn dephasing(lambda: f64) -> Result<Self> {
        let ch = Self::Dephasing { lambda };
        ch.validate()?;
        Ok(ch)
    }

    pub fn energy_preserving_mixture(terms: Vec<PhaseTerm>) -> Result<Self> {
        let ch = Self::EnergyPreservingMixture(terms);
        ch.validate()?;
        Ok(ch)
    }

    pub fn mixed_unitary(terms: Vec<(f64, CMatrix)>) -> Result<Self> {
        let ch = Self::MixedUnitary(terms);
        ch.validate()?;
        Ok(ch)
    }

    /// Input dimension the channel requires; `None` for the identity.
    pub fn input_dim(&self) -> Option<usize> {
        match self {
            Self::Identity => None,
            Self::Dephasing { .. } | Self::EnergyPreservingMixture(_) => Some(2),
            Self::MixedUnitary(terms) => terms.first().map(|(_, u)| u.dim()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Identity => Ok(()),
            Self::Dephasing { lambda } => {
                if (0.0..=1.0).contains(lambda) {
                    Ok(())
                } else {
                    Err(domain(format!("dephasing λ = {lambda} outside [0, 1]")))
                }
            }
            Self::EnergyPreservingMixture(terms) => {
                let w: Vec<f64> = terms.iter().map(|t| t.weight).collect();
                check_distribution(&w, ENSEMBLE_TOL)
            }
            Self::MixedUnitary(terms) => {
                let w: Vec<f64> = terms.iter().map(|t| t.0).collect();
                check_distribution(&w, ENSEMBLE_TOL)?;
                let dim = terms[0].1.dim();
                for (_, u) in terms {
                    if u.dim() != dim {
                        return Err(Error::DimensionMismatch {
                            expected: dim,
                            got: u.dim(),
                        });
                    }
                    let defect = u.unitarity_defect();
                    if defect > 1e-10 {
                        return Err(Error::NotUnitary(defect));
                    }
                }
                Ok(())
            }
        }
    }

    /// The channel as a weighted list of unitaries on its input space.
    pub fn unitary_terms(&self, dim: usize) -> Vec<(f64, CMatrix)> {
        match self {
            Self::Identity => vec![(1.0, CMatrix::identity(dim))],
            Self::Dephasing { lambda } => {
                vec![(*lambda, CMatrix::identity(2)), (1.0 - lambda, pauli::z())]
            }
            Self::EnergyPreservingMixture(terms) => terms
                .iter()
                .map(|t| (t.weight, phase_unitary(t.theta)))
                .collect(),
            Self::MixedUnitary(terms) => terms.clone(),
        }
    }
}

/// `cos θ I + i sin θ σ_z = diag(e^{iθ}, e^{−iθ})`.
pub fn phase_unitary(theta: f64) -> CMatrix {
    let mut u = CMatrix::zeros(2);
    u[(0, 0)] = C64::from_polar(1.0, theta);
    u[(1, 1)] = C64::from_polar(1.0, -theta);
    u
}

/// `Λ(ρ)`.
pub fn apply_channel(ch: &ChannelSpec, rho: &DensityOperator) -> Result<DensityOperator> {
    apply_channel_local(ch, rho, (rho.dim(), 1))
}

/// `(Λ ⊗ id)(ρ)` with `Λ` acting on the first factor of `dims = (d_A, d_B)`.
pub fn apply_channel_local(
    ch: &ChannelSpec,
    rho: &DensityOperator,
    dims: (usize, usize),
) -> Result<DensityOperator> {
    let (da, db) = dims;
    if da * db != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            got: rho.dim(),
        });
    }
    if let Some(need) = ch.input_dim() {
        if need != da {
            return Err(Error::DimensionMismatch {
                expected: need,
                got: da,
            });
        }
    }
    ch.validate()?;
    let m = rho.matrix();
    let n = rho.dim();
    let out = match ch {
        ChannelSpec::Identity => m.clone(),
        ChannelSpec::Dephasing { lambda } => {
            // Coherences between different σ_z eigenvalues shrink by 2λ − 1.
            scale_cross_terms(m, db, C64::new(2.0 * lambda - 1.0, 0.0))
        }
        ChannelSpec::EnergyPreservingMixture(terms) => {
            let factor: C64 = terms
                .iter()
                .map(|t| C64::from_polar(t.weight, 2.0 * t.theta))
                .sum();
            scale_cross_terms(m, db, factor)
        }
        ChannelSpec::MixedUnitary(terms) => {
            let id = CMatrix::identity(db);
            let mut acc = CMatrix::zeros(n);
            for (w, u) in terms {
                acc = &acc + &m.conjugate_by(&u.kron(&id)).scale_real(*w);
            }
            acc
        }
    };
    Ok(DensityOperator::from_matrix_unchecked(out))
}

/// Multiplies the `⟨0|·|1⟩` block of the first qubit factor by `factor`
/// and the `⟨1|·|0⟩` block by its conjugate.
fn scale_cross_terms(m: &CMatrix, db: usize, factor: C64) -> CMatrix {
    let mut out = m.clone();
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            match (i / db, j / db) {
                (0, 1) => out[(i, j)] *= factor,
                (1, 0) => out[(i, j)] *= factor.conj(),
                _ => {}
            }
        }
    }
    out
}

/// `Tr(ρH)`.
pub fn energy(rho: &DensityOperator, h: &Hamiltonian) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: rho.dim(),
        });
    }
    Ok(rho
        .matrix()
        .diagonal()
        .iter()
        .enumerate()
        .map(|(n, z)| n as f64 * z.re)
        .sum())
}

/// `Tr(ρ²)`.
pub fn purity(rho: &DensityOperator) -> f64 {
    rho.matrix().trace_of_square()
}

/// Projector onto `Σ_n ω^{kn} √p_n |n⟩`, `ω = e^{2πi/d}`.
pub fn qft_phase_state(k: usize, weights: &[f64]) -> Result<DensityOperator> {
    let d = weights.len();
    if k >= d {
        return Err(Error::IndexOutOfRange { index: k, dim: d });
    }
    check_distribution(weights, PROB_TOL)?;
    let v: Vec<C64> = weights
        .iter()
        .enumerate()
        .map(|(n, &p)| crate::linalg::root_of_unity(d, k * n) * p.sqrt())
        .collect();
    Ok(DensityOperator::from_matrix_unchecked(CMatrix::projector(&v)))
}

/// `a ⊗ b`.
pub fn tensor(a: &DensityOperator, b: &DensityOperator) -> DensityOperator {
    DensityOperator::from_matrix_unchecked(a.matrix().kron(b.matrix()))
}

/// Which factor of a bipartite state to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced state of one factor of `ρ` on `C^{d_A} ⊗ C^{d_B}`.
pub fn partial_trace(
    rho: &DensityOperator,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<DensityOperator> {
    let (da, db) = dims;
    if da * db != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            got: rho.dim(),
        });
    }
    let m = rho.matrix();
    let out = match keep {
        Subsystem::A => {
            let mut r = CMatrix::zeros(da);
            for i in 0..da {
                for j in 0..da {
                    r[(i, j)] = (0..db).map(|k| m[(i * db + k, j * db + k)]).sum();
                }
            }
            r
        }
        Subsystem::B => {
            let mut r = CMatrix::zeros(db);
            for k in 0..db {
                for l in 0..db {
                    r[(k, l)] = (0..da).map(|i| m[(i * db + k, i * db + l)]).sum();
                }
            }
            r
        }
    };
    Ok(DensityOperator::from_matrix_unchecked(out))
}

/// `(U ⊗ I) ρ (U ⊗ I)†` with `U` on the first factor.
pub fn apply_local_unitary(
    u: &CMatrix,
    rho: &DensityOperator,
    dims: (usize, usize),
) -> Result<DensityOperator> {
    let (da, db) = dims;
    if u.dim() != da || da * db != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            got: u.dim() * db,
        });
    }
    let defect = u.unitarity_defect();
    if defect > 1e-10 {
        return Err(Error::NotUnitary(defect));
    }
    let full = u.kron(&CMatrix::identity(db));
    Ok(DensityOperator::from_matrix_unchecked(
        rho.matrix().conjugate_by(&full),
    ))
}

/// Energy preservation on a qubit: every unitary in the channel's mixture
/// commutes with `H`, and `Tr(Λ(ρ)H) = Tr(ρH)` on `trials` random states.
pub fn is_energy_preserving(ch: &ChannelSpec, trials: usize) -> bool {
    const TOL: f64 = 1e-10;
    if ch.validate().is_err() || ch.input_dim().is_some_and(|d| d != 2) {
        return false;
    }
    let h = Hamiltonian { dim: 2 };
    let hm = h.matrix();
    if ch
        .unitary_terms(2)
        .iter()
        .any(|(w, u)| *w > 0.0 && u.commutator_norm(&hm) > TOL)
    {
        return false;
    }
    let mut rng = SplitMix64::new(0x0E1E_C7A1);
    (0..trials).all(|t| {
        let rho = if t % 2 == 0 {
            random_pure_state(2, &mut rng)
        } else {
            random_mixed_state(2, &mut rng)
        };
        match apply_channel(ch, &rho) {
            Ok(out) => {
                let before = energy(&rho, &h).unwrap_or(f64::NAN);
                let after = energy(&out, &h).unwrap_or(f64::NAN);
                (before - after).abs() <= TOL
            }
            Err(_) => false,
        }
    })
}

/// Normalized complex-Gaussian vector.
pub fn random_state_vector(dim: usize, rng: &mut SplitMix64) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| rng.complex_normal()).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

pub fn random_pure_state(dim: usize, rng: &mut SplitMix64) -> DensityOperator {
    DensityOperator::from_matrix_unchecked(CMatrix::projector(&random_state_vector(dim, rng)))
}

/// Mixture of two random projectors with a uniform weight.
pub fn random_mixed_state(dim: usize, rng: &mut SplitMix64) -> DensityOperator {
    let a = CMatrix::projector(&random_state_vector(dim, rng));
    let b = CMatrix::projector(&random_state_vector(dim, rng));
    let w = rng.next_f64();
    DensityOperator::from_matrix_unchecked(&a.scale_real(w) + &b.scale_real(1.0 - w))
}
