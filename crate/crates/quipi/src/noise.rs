//! Density-matrix simulation with boson loss and qubit depolarization, and
//! zero-noise extrapolation.

use crate::error::{Error, Result};
use crate::evolution::{apply_gate, compile_trotter, Circuit, Gate, GateCache};
use crate::hamiltonians::{diagonalize, LocalHamiltonian, Pauli, PauliString};
use crate::hilbert::{HybridDensityMatrix, HybridState, ModeBasis, Qumode};
use crate::linalg::{CMat, C64, ZERO};
use crate::quipi::{Backend, QuipiConfig};
use crate::qumode::{build_resource, KernelRepr, ProjectionKernel};

/// Default number of retained loss Kraus operators.
pub const DEFAULT_KRAUS_RANK: usize = 8;

/// `E_k = (1/√k!) p^{k/2} (1-p)^{n/2} a^k`, `k < kraus_rank`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossChannel {
    pub p_l: f64,
    pub kraus_rank: usize,
}

impl LossChannel {
    pub fn new(p_l: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p_l) {
            return Err(Error::InvalidArgument(format!("loss probability {p_l} outside [0, 1)")));
        }
        Ok(Self { p_l, kraus_rank: DEFAULT_KRAUS_RANK })
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Ok(Self { p_l: self.p_l * factor, kraus_rank: self.kraus_rank })
    }

    /// `E_k |n⟩ = d_k(n) |n-k⟩`; returns `d_k(n)` for `n = 0..=cut` (zero for `n < k`).
    pub fn kraus_diagonals(&self, cut: usize) -> Vec<Vec<f64>> {
        let p = self.p_l;
        (0..self.kraus_rank.min(cut + 1))
            .map(|k| {
                (0..=cut)
                    .map(|n| {
                        if n < k {
                            return 0.0;
                        }
                        // √C(n,k) p^{k/2} (1-p)^{(n-k)/2}, in logs to stay finite
                        let ln_binom = ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k);
                        let ln_p = if k == 0 { 0.0 } else { k as f64 * p.ln() };
                        let ln_q = if n == k { 0.0 } else { (n - k) as f64 * (1.0 - p).ln() };
                        (0.5 * (ln_binom + ln_p + ln_q)).exp()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn kraus_matrices(&self, cut: usize) -> Vec<CMat> {
        self.kraus_diagonals(cut)
            .into_iter()
            .enumerate()
            .map(|(k, d)| {
                let mut m = CMat::zeros(cut + 1, cut + 1);
                for n in k..=cut {
                    m[(n - k, n)] = C64::from(d[n]);
                }
                m
            })
            .collect()
    }
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// `ρ → (1-p)ρ + (p/3)(XρX + YρY + ZρZ)` on each qubit a gate touches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolarizingChannel {
    pub p_d: f64,
}

impl DepolarizingChannel {
    pub fn new(p_d: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_d) {
            return Err(Error::InvalidArgument(format!("depolarizing probability {p_d} outside [0, 1]")));
        }
        Ok(Self { p_d })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extrapolation {
    /// Least-squares line through all points.
    Linear,
    /// Polynomial through all points (Richardson).
    Richardson,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZneSchedule {
    pub scale_factors: Vec<f64>,
    pub method: Extrapolation,
}

impl Default for ZneSchedule {
    fn default() -> Self {
        Self { scale_factors: vec![1.0, 2.0, 3.0], method: Extrapolation::Richardson }
    }
}

impl ZneSchedule {
    pub fn linear() -> Self {
        Self { scale_factors: vec![1.0, 2.0], method: Extrapolation::Linear }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scale_factors.iter().any(|&s| !(s >= 1.0)) {
            return Err(Error::InvalidArgument("scale factors must be at least 1".into()));
        }
        check_distinct(&self.scale_factors)
    }

    pub fn extrapolate(&self, energies: &[f64]) -> Result<f64> {
        if energies.len() != self.scale_factors.len() {
            return Err(Error::DimensionMismatch { expected: self.scale_factors.len(), got: energies.len() });
        }
        let pts: Vec<(f64, f64)> = self.scale_factors.iter().copied().zip(energies.iter().copied()).collect();
        match self.method {
            Extrapolation::Richardson => zne_extrapolate(&pts),
            Extrapolation::Linear => linear_intercept(&pts),
        }
    }
}

fn check_distinct(scales: &[f64]) -> Result<()> {
    if scales.len() < 2 {
        return Err(Error::InvalidArgument("need at least two noise scales".into()));
    }
    for (i, a) in scales.iter().enumerate() {
        if scales[i + 1..].iter().any(|b| b == a) {
            return Err(Error::InvalidArgument(format!("duplicate noise scale {a}")));
        }
    }
    Ok(())
}

/// Lagrange weights for evaluating the interpolating polynomial at scale 0.
pub fn richardson_weights(scales: &[f64]) -> Result<Vec<f64>> {
    check_distinct(scales)?;
    Ok((0..scales.len())
        .map(|i| {
            scales.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &lj)| lj / (lj - scales[i])).product()
        })
        .collect())
}

/// Zero-noise value of the polynomial through all `(scale, energy)` points.
pub fn zne_extrapolate(points: &[(f64, f64)]) -> Result<f64> {
    let scales: Vec<f64> = points.iter().map(|p| p.0).collect();
    let w = richardson_weights(&scales)?;
    Ok(w.iter().zip(points).map(|(w, p)| w * p.1).sum())
}

/// Intercept of the least-squares line through the points.
pub fn linear_intercept(points: &[(f64, f64)]) -> Result<f64> {
    let scales: Vec<f64> = points.iter().map(|p| p.0).collect();
    check_distinct(&scales)?;
    let n = points.len() as f64;
    let mx = scales.iter().sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(my - sxy / sxx * mx)
}

/// Conjugates `ρ` by a gate: `G ρ G† = (G (G ρ)†)†`.
fn conjugate_gate(rho: &mut CMat, qubit_count: usize, basis: &ModeBasis, gate: &Gate, cache: &GateCache) -> Result<()> {
    let d = rho.nrows();
    for col in rho.as_mut_slice().chunks_mut(d) {
        apply_gate(col, qubit_count, basis, gate, cache)?;
    }
    let mut t = rho.adjoint();
    for col in t.as_mut_slice().chunks_mut(d) {
        apply_gate(col, qubit_count, basis, gate, cache)?;
    }
    *rho = t.adjoint();
    Ok(())
}

fn apply_loss(rho: &CMat, qubit_dim: usize, diags: &[Vec<f64>]) -> CMat {
    let m = diags[0].len();
    let mut out = CMat::zeros(rho.nrows(), rho.ncols());
    for (k, dk) in diags.iter().enumerate() {
        for y in 0..qubit_dim {
            for mc in k..m {
                let wc = dk[mc];
                let (src_c, dst_c) = (y * m + mc, y * m + mc - k);
                for x in 0..qubit_dim {
                    for mr in k..m {
                        let w = dk[mr] * wc;
                        out[(x * m + mr - k, dst_c)] += rho[(x * m + mr, src_c)] * w;
                    }
                }
            }
        }
    }
    out
}

fn apply_depolarizing(rho: &CMat, qubit_count: usize, m: usize, q: usize, p: f64) -> CMat {
    let mut out = rho * C64::from(1.0 - p);
    for letter in [Pauli::X, Pauli::Y, Pauli::Z] {
        let (flip, ph) = PauliString::with(qubit_count, &[(q, letter)]).action();
        let d = rho.nrows();
        // (PρP†)[i,j] = ph(i^f) ρ[i^f, j^f] conj(ph(j^f)) with the flip acting on the qubit index
        for j in 0..d {
            let (yj, mj) = (j / m, j % m);
            let sj = (yj ^ flip) * m + mj;
            let pj = ph[yj ^ flip].conj();
            for i in 0..d {
                let (xi, mi) = (i / m, i % m);
                let si = (xi ^ flip) * m + mi;
                out[(i, j)] += rho[(si, sj)] * ph[xi ^ flip] * pj * (p / 3.0);
            }
        }
    }
    out
}

/// After each gate: unitary conjugation, loss on the qumode, depolarization on the
/// gate's qubits.
pub fn run_noisy_circuit(
    rho: &HybridDensityMatrix,
    circuit: &Circuit,
    loss: Option<&LossChannel>,
    depol: Option<&DepolarizingChannel>,
    cache: &GateCache,
) -> Result<HybridDensityMatrix> {
    if circuit.qubit_count != rho.qubit_count {
        return Err(Error::DimensionMismatch { expected: rho.qubit_count, got: circuit.qubit_count });
    }
    let m = rho.mode_dim();
    let qd = 1usize << rho.qubit_count;
    let basis = ModeBasis::Fock { cut: rho.cut };
    let diags = loss.filter(|l| l.p_l > 0.0).map(|l| l.kraus_diagonals(rho.cut));
    let depol = depol.filter(|d| d.p_d > 0.0);
    let mut mat = rho.matrix.clone();
    for g in &circuit.gates {
        conjugate_gate(&mut mat, rho.qubit_count, &basis, g, cache)?;
        if let Some(d) = &diags {
            mat = apply_loss(&mat, qd, d);
        }
        if let Some(dp) = depol {
            for q in g.qubits() {
                mat = apply_depolarizing(&mat, rho.qubit_count, m, q, dp.p_d);
            }
        }
    }
    Ok(HybridDensityMatrix { matrix: mat, ..rho.clone() })
}

/// `⟨K| ρ |K⟩` on the qumode factor: the unnormalized post-selected register.
pub fn project_density(rho: &HybridDensityMatrix, kernel: &ProjectionKernel) -> Result<CMat> {
    let KernelRepr::Fock(k) = &kernel.repr else {
        return Err(Error::Unsupported("density matrices need a Fock projection kernel".into()));
    };
    let m = rho.mode_dim();
    if k.len() < m {
        return Err(Error::DimensionMismatch { expected: m, got: k.len() });
    }
    let qd = 1usize << rho.qubit_count;
    let mut out = CMat::zeros(qd, qd);
    for x in 0..qd {
        for y in 0..qd {
            let mut acc = ZERO;
            for a in 0..m {
                for b in 0..m {
                    acc += k[a].conj() * rho.matrix[(x * m + a, y * m + b)] * k[b];
                }
            }
            out[(x, y)] = acc;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoisyReport {
    pub k: usize,
    pub energy: f64,
    pub energy_error: f64,
    pub success_probability: f64,
    pub cumulative_success: f64,
    pub ground_fidelity: f64,
}

/// The solver loop in density-matrix form. Requires `trotter_n ≥ 1` and the Fock backend.
pub fn noisy_quipi(
    h: &LocalHamiltonian,
    config: &QuipiConfig,
    loss: Option<&LossChannel>,
    depol: Option<&DepolarizingChannel>,
) -> Result<Vec<NoisyReport>> {
    config.validate()?;
    if config.trotter_n == 0 {
        return Err(Error::InvalidArgument("noisy simulation needs a Trotterized circuit (trotter_n >= 1)".into()));
    }
    if config.backend != Backend::Fock {
        return Err(Error::Unsupported("noise channels need the Fock backend".into()));
    }
    let spec = diagonalize(h)?;
    if spec.ground_energy() <= 0.0 {
        return Err(Error::InvalidShift { min_eigenvalue: spec.ground_energy() });
    }
    let e0 = spec.ground_energy() - h.shift();
    let ground = nalgebra::DVector::from_vec(spec.vector(0));
    let hm = h.matrix()?;
    let circuit = compile_trotter(h, config.trotter_n)?;
    let resource = build_resource(config.s, config.cut)?;
    let mode = Qumode::Fock(resource.fock_state(config.fock_cut));
    let kernel = ProjectionKernel::fock(config.s, config.fock_cut)?;
    let cache = GateCache::new();
    let mode_rho = {
        let st = HybridState::product(&[C64::from(1.0)], &mode)?;
        HybridDensityMatrix::from_pure(&st)?.matrix
    };
    let b = nalgebra::DVector::from_vec(config.initial_state.clone());
    let mut rho_q: CMat = &b * b.adjoint();
    let mut cumulative = 1.0;
    let mut out = Vec::new();
    for k in 1..=config.iterations {
        let rho = HybridDensityMatrix { qubit_count: h.qubit_count(), cut: config.fock_cut, matrix: crate::linalg::kron(&rho_q, &mode_rho) };
        if rho.matrix.nrows() > crate::hilbert::DENSITY_DIM_LIMIT {
            return Err(Error::LimitExceeded {
                what: "density-matrix dimension",
                size: rho.matrix.nrows(),
                limit: crate::hilbert::DENSITY_DIM_LIMIT,
            });
        }
        let evolved = run_noisy_circuit(&rho, &circuit, loss, depol, &cache)?;
        let residue = project_density(&evolved, &kernel)?;
        let p = residue.trace().re;
        if !(p > 0.0) {
            return Err(Error::ProjectionFailure);
        }
        rho_q = residue / C64::from(p);
        cumulative *= p;
        let energy = (&rho_q * &hm).trace().re - h.shift();
        let fid = (ground.adjoint() * &rho_q * &ground)[(0, 0)].re;
        out.push(NoisyReport {
            k,
            energy,
            energy_error: energy - e0,
            success_probability: p,
            cumulative_success: cumulative,
            ground_fidelity: fid,
        });
    }
    Ok(out)
}
