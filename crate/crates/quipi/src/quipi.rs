//! The inverse-iteration eigensolver loop.

use crate::error::{Error, Result};
use crate::evolution::{compile_trotter, evolve_exact, run_circuit, Circuit, GateCache};
use crate::hamiltonians::{diagonalize, expectation, LocalHamiltonian, Spectrum, DENSE_QUBIT_LIMIT};
use crate::hilbert::{Grid, HybridState, Qumode, DEFAULT_GRID_POINTS};
use crate::linalg::{norm_sqr, C64};
use crate::qumode::{
    analytic_amplitude, apply_projection, build_resource, fock_state_on_grid, resource_on_grid, ProjectionKernel,
};
use rand::SeedableRng;
use rand_distr::{Binomial, Distribution};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Grid,
    Fock,
}

/// Which resource state is entangled with the register on the grid backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResourceModel {
    /// The untruncated half-Gaussian, sampled on `[0, 8s]`.
    Ideal,
    /// The `cut`-truncated Fock superposition, sampled on `[-8s, 8s]`.
    Truncated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuipiConfig {
    pub s: f64,
    /// Fock truncation of the resource state.
    pub cut: usize,
    pub iterations: usize,
    /// 0 for exact evolution, otherwise first-order Trotter steps.
    pub trotter_n: usize,
    pub backend: Backend,
    pub resource: ResourceModel,
    pub initial_state: Vec<C64>,
    /// 0 for exact expectation values.
    pub shots: u64,
    pub seed: u64,
    /// Fock truncation used for the evolution itself.
    pub fock_cut: usize,
    pub grid_points: usize,
    /// Accept shifts that leave negative eigenvalues; the loop then converges to the
    /// level of smallest magnitude, which is what reports compare against.
    pub allow_indefinite: bool,
}

impl QuipiConfig {
    pub fn new(initial_state: Vec<C64>) -> Self {
        Self {
            s: 10.0,
            cut: 20,
            iterations: 3,
            trotter_n: 0,
            backend: Backend::Grid,
            resource: ResourceModel::Ideal,
            initial_state,
            shots: 0,
            seed: 0,
            fock_cut: 60,
            grid_points: DEFAULT_GRID_POINTS,
            allow_indefinite: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidArgument("iteration count must be at least 1".into()));
        }
        if !(self.s > 0.0) {
            return Err(Error::InvalidArgument(format!("squeezing factor must be positive, got {}", self.s)));
        }
        if self.backend == Backend::Fock && self.fock_cut < self.cut {
            return Err(Error::InvalidArgument("fock_cut must be at least the resource cut".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationReport {
    pub k: usize,
    /// Energy after this round, shift removed.
    pub energy: f64,
    pub energy_std_error: f64,
    pub energy_error: Option<f64>,
    pub success_probability: f64,
    pub cumulative_success: f64,
    pub ground_fidelity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuipiOutcome {
    pub reports: Vec<IterationReport>,
    pub final_state: Vec<C64>,
    pub warnings: Vec<String>,
}

/// Energy estimate with its propagated standard error (0 in exact mode).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QeeEstimate {
    pub energy: f64,
    pub std_error: f64,
}

/// Term-by-term energy estimate, shift included. With `shots > 0`, every Pauli
/// term is sampled `shots` times from its exact ±1 outcome distribution.
pub fn qee_energy(state: &[C64], h: &LocalHamiltonian, shots: u64, seed: u64) -> Result<QeeEstimate> {
    if shots == 0 {
        return Ok(QeeEstimate { energy: expectation(h, state)?, std_error: 0.0 });
    }
    let n = norm_sqr(state);
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized(n));
    }
    if state.len() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), got: state.len() });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut energy = h.shift();
    let mut err = 0.0;
    for t in h.terms() {
        if t.string.is_identity() {
            energy += t.coeff;
            continue;
        }
        let exact = t.string.expectation(state).clamp(-1.0, 1.0);
        let p_plus = 0.5 * (1.0 + exact);
        let plus = Binomial::new(shots, p_plus).map_err(|e| Error::InvalidArgument(e.to_string()))?.sample(&mut rng);
        let mean = 2.0 * plus as f64 / shots as f64 - 1.0;
        energy += t.coeff * mean;
        err += t.coeff.abs() * (1.0 - mean * mean).max(0.0).sqrt() / (shots as f64).sqrt();
    }
    Ok(QeeEstimate { energy, std_error: err })
}

/// Normalized `H^{-k}|b⟩` from the spectrum.
pub fn oracle_inverse_iterate(h: &LocalHamiltonian, b: &[C64], k: u32) -> Result<Vec<C64>> {
    let spec = checked_spectrum(h)?;
    Ok(spectral_filter(&spec, b, |e| C64::from(e.powi(-(k as i32)))))
}

/// Normalized `Σ b_n f_s(E_n)^k |ψ_n⟩`: what `k` ideal rounds produce at finite squeezing.
pub fn finite_squeezing_iterate(h: &LocalHamiltonian, b: &[C64], s: f64, k: u32) -> Result<Vec<C64>> {
    let spec = checked_spectrum(h)?;
    Ok(spectral_filter(&spec, b, |e| analytic_amplitude(e, s).powu(k)))
}

fn checked_spectrum(h: &LocalHamiltonian) -> Result<Spectrum> {
    let spec = diagonalize(h)?;
    if spec.ground_energy() <= 0.0 {
        return Err(Error::InvalidShift { min_eigenvalue: spec.ground_energy() });
    }
    Ok(spec)
}

fn spectral_filter<F: Fn(f64) -> C64>(spec: &Spectrum, b: &[C64], f: F) -> Vec<C64> {
    let coeffs = spec.coefficients(b);
    let mut out = vec![C64::from(0.0); b.len()];
    for (i, bn) in coeffs.iter().enumerate() {
        let w = bn * f(spec.eigenvalues[i]);
        for (o, v) in out.iter_mut().zip(spec.eigenvectors.column(i).iter()) {
            *o += w * v;
        }
    }
    crate::linalg::normalized(&out)
}

/// Everything a round needs that does not change between rounds.
pub struct Pipeline {
    mode: Qumode,
    kernel: ProjectionKernel,
    circuit: Option<Circuit>,
    cache: GateCache,
}

impl Pipeline {
    pub fn new(h: &LocalHamiltonian, config: &QuipiConfig) -> Result<Self> {
        config.validate()?;
        let (mode, kernel) = match (config.backend, config.resource) {
            (Backend::Grid, ResourceModel::Ideal) => {
                let grid = Arc::new(Grid::half_line(config.s, config.grid_points)?);
                (Qumode::Grid(resource_on_grid(config.s, grid)), ProjectionKernel::grid(config.s))
            }
            (Backend::Grid, ResourceModel::Truncated) => {
                let grid = Arc::new(Grid::symmetric(config.s, config.grid_points)?);
                let r = build_resource(config.s, config.cut)?;
                (Qumode::Grid(fock_state_on_grid(&r.fock_coefficients, grid)), ProjectionKernel::grid(config.s))
            }
            (Backend::Fock, _) => {
                let r = build_resource(config.s, config.cut)?;
                (Qumode::Fock(r.fock_state(config.fock_cut)), ProjectionKernel::fock(config.s, config.fock_cut)?)
            }
        };
        let circuit = if config.trotter_n > 0 { Some(compile_trotter(h, config.trotter_n)?) } else { None };
        Ok(Self { mode, kernel, circuit, cache: GateCache::new() })
    }

    pub fn mode(&self) -> &Qumode {
        &self.mode
    }

    pub fn kernel(&self) -> &ProjectionKernel {
        &self.kernel
    }

    pub fn circuit(&self) -> Option<&Circuit> {
        self.circuit.as_ref()
    }

    pub fn cache(&self) -> &GateCache {
        &self.cache
    }

    /// Entangle, evolve, project. Returns the normalized register and the success probability.
    pub fn round(&self, h: &LocalHamiltonian, b: &[C64]) -> Result<(Vec<C64>, f64)> {
        let st = HybridState::product(b, &self.mode)?;
        let evolved = match &self.circuit {
            Some(c) => run_circuit(&st, c, &self.cache)?,
            None => evolve_exact(&st, h, &self.cache)?,
        };
        let p = apply_projection(&evolved, &self.kernel)?;
        Ok((p.qubits, p.success_probability))
    }
}

/// Runs `config.iterations` rounds, re-preparing the qumode each round.
pub fn quipi_solve(h: &LocalHamiltonian, config: &QuipiConfig) -> Result<QuipiOutcome> {
    let b0 = &config.initial_state;
    if b0.len() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), got: b0.len() });
    }
    let n0 = norm_sqr(b0);
    if (n0 - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized(n0));
    }
    let oracle = if h.qubit_count() <= DENSE_QUBIT_LIMIT { Some(diagonalize(h)?) } else { None };
    if let Some(spec) = &oracle {
        if spec.ground_energy() <= 0.0 && !config.allow_indefinite {
            return Err(Error::InvalidShift { min_eigenvalue: spec.ground_energy() });
        }
    }
    // indices of the level the iteration converges to
    let target: Option<(f64, Vec<usize>)> = oracle.as_ref().map(|spec| {
        let emin = spec.eigenvalues.iter().fold(f64::INFINITY, |m, e| m.min(e.abs()));
        let idx: Vec<usize> = (0..spec.eigenvalues.len()).filter(|&i| spec.eigenvalues[i].abs() - emin <= 1e-9).collect();
        (spec.eigenvalues[idx[0]], idx)
    });
    let target_fidelity = |spec: &Spectrum, idx: &[usize], v: &[C64]| -> f64 {
        idx.iter().map(|&i| crate::linalg::inner(&spec.vector(i), v).norm_sqr()).sum::<f64>() / norm_sqr(v)
    };
    let mut warnings = Vec::new();
    if let (Some(spec), Some((_, idx))) = (&oracle, &target) {
        let overlap = target_fidelity(spec, idx, b0);
        if overlap < 1e-12 {
            warnings.push(format!("initial ground-state overlap {overlap:.3e} is below 1e-12; convergence to the ground state is not guaranteed"));
        }
    }
    let pipeline = Pipeline::new(h, config)?;
    let mut b = b0.clone();
    let mut cumulative = 1.0;
    let mut reports = Vec::with_capacity(config.iterations);
    for k in 1..=config.iterations {
        let (next, p) = pipeline.round(h, &b)?;
        b = next;
        cumulative *= p;
        let est = qee_energy(&b, h, config.shots, config.seed.wrapping_add(k as u64))?;
        let energy = est.energy - h.shift();
        reports.push(IterationReport {
            k,
            energy,
            energy_std_error: est.std_error,
            energy_error: target.as_ref().map(|(e, _)| energy - (e - h.shift())),
            success_probability: p,
            cumulative_success: cumulative,
            ground_fidelity: oracle.as_ref().zip(target.as_ref()).map(|(s, (_, idx))| target_fidelity(s, idx, &b)),
        });
    }
    Ok(QuipiOutcome { reports, final_state: b, warnings })
}
