use super::gate::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::hamiltonians::{diagonalize, LocalHamiltonian};
use crate::hilbert::{momentum_operator, HybridState, ModeBasis};
use crate::linalg::{c, hermitian_eigh, CMat, C64, ZERO};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Largest dense operator dimension on the Fock backend.
pub const DENSE_DIM_LIMIT: usize = 4096;

type MomentumEig = Arc<(Vec<f64>, CMat)>;

/// Cache of `exp(-iθ p)` matrices keyed by the exact bits of `θ` and the cut.
/// Shareable between threads.
#[derive(Debug, Default)]
pub struct GateCache {
    momentum: Mutex<HashMap<usize, MomentumEig>>,
    phases: Mutex<HashMap<(u64, usize), Arc<CMat>>>,
}

impl GateCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Eigen-decomposition of the truncated momentum operator.
    pub fn momentum_eig(&self, cut: usize) -> MomentumEig {
        let mut map = self.momentum.lock().unwrap();
        map.entry(cut).or_insert_with(|| Arc::new(hermitian_eigh(&momentum_operator(cut)))).clone()
    }

    /// `exp(-iθ p)` on Fock levels `0..=cut`.
    pub fn mode_phase(&self, cut: usize, theta: f64) -> Arc<CMat> {
        let key = (theta.to_bits(), cut);
        if let Some(m) = self.phases.lock().unwrap().get(&key) {
            return m.clone();
        }
        let eig = self.momentum_eig(cut);
        let (mu, w) = (&eig.0, &eig.1);
        let mut scaled = w.clone();
        for (j, m) in mu.iter().enumerate() {
            let ph = C64::from_polar(1.0, -theta * m);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= ph);
        }
        let u = Arc::new(scaled * w.adjoint());
        self.phases.lock().unwrap().insert(key, u.clone());
        u
    }

    pub fn len(&self) -> usize {
        self.phases.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// An operator on the qumode factor alone.
enum ModeOp {
    Diagonal(Vec<C64>),
    Dense(Arc<CMat>),
}

impl ModeOp {
    fn phase(basis: &ModeBasis, theta: f64, cache: &GateCache) -> Result<Self> {
        match basis {
            ModeBasis::Grid(g) => Ok(ModeOp::Diagonal((0..g.points()).map(|i| C64::from_polar(1.0, -theta * g.p(i))).collect())),
            ModeBasis::Fock { cut } => Ok(ModeOp::Dense(cache.mode_phase(*cut, theta))),
            ModeBasis::Collapsed => Err(Error::Unsupported("qumode gate on a projected state".into())),
        }
    }

    fn apply(&self, block: &mut [C64], scratch: &mut Vec<C64>) {
        match self {
            ModeOp::Diagonal(d) => block.iter_mut().zip(d).for_each(|(a, p)| *a *= p),
            ModeOp::Dense(u) => {
                scratch.clear();
                scratch.extend_from_slice(block);
                let n = block.len();
                for (i, out) in block.iter_mut().enumerate() {
                    let mut acc = ZERO;
                    for j in 0..n {
                        acc += u[(i, j)] * scratch[j];
                    }
                    *out = acc;
                }
            }
        }
    }
}

fn bit(qubit_count: usize, q: usize) -> usize {
    1 << (qubit_count - 1 - q)
}

fn single_qubit(v: &mut [C64], qubit_count: usize, m: usize, q: usize, u: [C64; 4]) {
    let b = bit(qubit_count, q);
    for x in (0..1usize << qubit_count).filter(|x| x & b == 0) {
        let y = x | b;
        for k in 0..m {
            let (p, r) = (v[x * m + k], v[y * m + k]);
            v[x * m + k] = u[0] * p + u[1] * r;
            v[y * m + k] = u[2] * p + u[3] * r;
        }
    }
}

/// Applies one gate to a vector laid out qubit-major / qumode-minor.
pub fn apply_gate(v: &mut [C64], qubit_count: usize, basis: &ModeBasis, gate: &Gate, cache: &GateCache) -> Result<()> {
    let m = basis.dim();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (o, z) = (c(1.0, 0.0), ZERO);
    match *gate {
        Gate::H(q) => single_qubit(v, qubit_count, m, q, [c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)]),
        Gate::S(q) => single_qubit(v, qubit_count, m, q, [o, z, z, c(0.0, 1.0)]),
        Gate::Sdg(q) => single_qubit(v, qubit_count, m, q, [o, z, z, c(0.0, -1.0)]),
        Gate::Cnot { control, target } => {
            let (cb, tb) = (bit(qubit_count, control), bit(qubit_count, target));
            for x in (0..1usize << qubit_count).filter(|x| x & cb != 0 && x & tb == 0) {
                let y = x | tb;
                for k in 0..m {
                    v.swap(x * m + k, y * m + k);
                }
            }
        }
        Gate::Hxp { qubit, theta } => {
            let plus = ModeOp::phase(basis, theta, cache)?;
            let minus = ModeOp::phase(basis, -theta, cache)?;
            let b = bit(qubit_count, qubit);
            let mut bp = vec![ZERO; m];
            let mut bm = vec![ZERO; m];
            let mut scratch = Vec::with_capacity(m);
            for x in (0..1usize << qubit_count).filter(|x| x & b == 0) {
                let y = x | b;
                for k in 0..m {
                    let (p, q) = (v[x * m + k], v[y * m + k]);
                    bp[k] = (p + q) * r;
                    bm[k] = (p - q) * r;
                }
                plus.apply(&mut bp, &mut scratch);
                minus.apply(&mut bm, &mut scratch);
                for k in 0..m {
                    v[x * m + k] = (bp[k] + bm[k]) * r;
                    v[y * m + k] = (bp[k] - bm[k]) * r;
                }
            }
        }
        Gate::Qp { theta } => {
            let op = ModeOp::phase(basis, theta, cache)?;
            let mut scratch = Vec::with_capacity(m);
            for block in v.chunks_mut(m) {
                op.apply(block, &mut scratch);
            }
        }
    }
    Ok(())
}

/// Sequential gate-level simulation.
pub fn run_circuit(state: &HybridState, circuit: &Circuit, cache: &GateCache) -> Result<HybridState> {
    if circuit.qubit_count != state.qubit_count {
        return Err(Error::DimensionMismatch { expected: state.qubit_count, got: circuit.qubit_count });
    }
    let mut out = state.clone();
    for g in &circuit.gates {
        apply_gate(&mut out.amplitudes, out.qubit_count, &out.basis, g, cache)?;
    }
    Ok(out)
}

/// `exp(-i H ⊗ p)` applied exactly through the spectrum of `H`.
pub fn evolve_exact(state: &HybridState, h: &LocalHamiltonian, cache: &GateCache) -> Result<HybridState> {
    if h.qubit_count() != state.qubit_count {
        return Err(Error::DimensionMismatch { expected: state.qubit_count, got: h.qubit_count() });
    }
    let spec = diagonalize(h)?;
    let (e, v) = (&spec.eigenvalues, &spec.eigenvectors);
    let d = state.qubit_dim();
    let m = state.mode_dim();
    let psi = CMat::from_row_slice(d, m, &state.amplitudes);
    let evolved = match &state.basis {
        ModeBasis::Grid(g) => {
            let mut x = v.adjoint() * psi;
            for a in 0..d {
                for i in 0..m {
                    x[(a, i)] *= C64::from_polar(1.0, -e[a] * g.p(i));
                }
            }
            v * x
        }
        ModeBasis::Fock { cut } => {
            if d * m > DENSE_DIM_LIMIT {
                return Err(Error::LimitExceeded { what: "dense exponential dimension", size: d * m, limit: DENSE_DIM_LIMIT });
            }
            let eig = cache.momentum_eig(*cut);
            let (mu, w) = (&eig.0, &eig.1);
            // (V⊗W)† vec(Ψ) = vec(V† Ψ conj(W)) for row-major vec
            let mut x = v.adjoint() * psi * w.conjugate();
            for a in 0..d {
                for b in 0..m {
                    x[(a, b)] *= C64::from_polar(1.0, -e[a] * mu[b]);
                }
            }
            v * x * w.transpose()
        }
        ModeBasis::Collapsed => return Err(Error::Unsupported("evolution of a projected state".into())),
    };
    let mut out = state.clone();
    for a in 0..d {
        for i in 0..m {
            out.amplitudes[a * m + i] = evolved[(a, i)];
        }
    }
    Ok(out)
}

/// Dense matrix of a circuit on qubits ⊗ Fock levels `0..=cut`.
pub fn circuit_matrix(circuit: &Circuit, cut: usize, cache: &GateCache) -> Result<CMat> {
    let dim = (1usize << circuit.qubit_count) * (cut + 1);
    if dim > DENSE_DIM_LIMIT {
        return Err(Error::LimitExceeded { what: "circuit matrix dimension", size: dim, limit: DENSE_DIM_LIMIT });
    }
    let basis = ModeBasis::Fock { cut };
    let mut out = CMat::zeros(dim, dim);
    let mut col = vec![ZERO; dim];
    for j in 0..dim {
        col.iter_mut().for_each(|z| *z = ZERO);
        col[j] = c(1.0, 0.0);
        for g in &circuit.gates {
            apply_gate(&mut col, circuit.qubit_count, &basis, g, cache)?;
        }
        out.set_column(j, &nalgebra::DVector::from_column_slice(&col));
    }
    Ok(out)
}

/// `exp(-i t H ⊗ p)` as a dense matrix on qubits ⊗ Fock levels `0..=cut`.
pub fn coupled_exponential(h: &LocalHamiltonian, cut: usize, t: f64) -> Result<CMat> {
    let dim = h.dim() * (cut + 1);
    if dim > DENSE_DIM_LIMIT {
        return Err(Error::LimitExceeded { what: "dense exponential dimension", size: dim, limit: DENSE_DIM_LIMIT });
    }
    let gen = crate::linalg::kron(&h.matrix()?, &momentum_operator(cut));
    Ok(crate::linalg::expm_hermitian(&gen, t))
}
