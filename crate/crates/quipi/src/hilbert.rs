//! Hybrid qubit ⊗ qumode states on a truncated Fock basis or a momentum grid.
//!
//! Amplitudes are stored qubit-index major, qumode-index minor. Qubit 0 is the
//! most significant bit of the qubit index.

use crate::error::{Error, Result};
use crate::linalg::{c, norm_sqr, CMat, C64, ZERO};
use crate::special::{gregory_weights, GREGORY_MIN_POINTS};
use std::io::Write;
use std::sync::Arc;

/// Default number of momentum samples.
pub const DEFAULT_GRID_POINTS: usize = 4096;
/// Default momentum extent in units of the squeezing factor.
pub const GRID_EXTENT: f64 = 8.0;

/// Uniform momentum grid with end-corrected trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    p_min: f64,
    p_max: f64,
    points: usize,
    weights: Vec<f64>,
}

impl Grid {
    pub fn new(p_min: f64, p_max: f64, points: usize) -> Result<Self> {
        if !(p_max > p_min) || points < GREGORY_MIN_POINTS {
            return Err(Error::InvalidArgument(format!("bad grid [{p_min}, {p_max}] with {points} points")));
        }
        let h = (p_max - p_min) / (points - 1) as f64;
        Ok(Self { p_min, p_max, points, weights: gregory_weights(points, h) })
    }

    /// `[0, 8s]`: the support of the resource state, which is all the projection sees.
    pub fn half_line(s: f64, points: usize) -> Result<Self> {
        Self::new(0.0, GRID_EXTENT * s, points)
    }

    /// `[-8s, 8s]`.
    pub fn symmetric(s: f64, points: usize) -> Result<Self> {
        Self::new(-GRID_EXTENT * s, GRID_EXTENT * s, points)
    }

    pub fn p_min(&self) -> f64 {
        self.p_min
    }
    pub fn p_max(&self) -> f64 {
        self.p_max
    }
    pub fn points(&self) -> usize {
        self.points
    }
    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.points - 1) as f64
    }
    pub fn p(&self, i: usize) -> f64 {
        self.p_min + i as f64 * self.dp()
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn momenta(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.p(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockQumode {
    pub amplitudes: Vec<C64>,
}

impl FockQumode {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("empty Fock state".into()));
        }
        Ok(Self { amplitudes })
    }
    pub fn vacuum(cut: usize) -> Self {
        let mut a = vec![ZERO; cut + 1];
        a[0] = c(1.0, 0.0);
        Self { amplitudes: a }
    }
    pub fn cut(&self) -> usize {
        self.amplitudes.len() - 1
    }
    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }
    /// Copy padded with zeros (or truncated) to `cut`.
    pub fn resized(&self, cut: usize) -> Self {
        let mut a = self.amplitudes.clone();
        a.resize(cut + 1, ZERO);
        Self { amplitudes: a }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridQumode {
    pub grid: Arc<Grid>,
    pub amplitudes: Vec<C64>,
}

impl GridQumode {
    pub fn from_fn<F: FnMut(f64) -> C64>(grid: Arc<Grid>, mut f: F) -> Self {
        let amplitudes = (0..grid.points()).map(|i| f(grid.p(i))).collect();
        Self { grid, amplitudes }
    }
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().zip(self.grid.weights()).map(|(a, w)| w * a.norm_sqr()).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Qumode {
    Fock(FockQumode),
    Grid(GridQumode),
}

impl Qumode {
    pub fn basis(&self) -> ModeBasis {
        match self {
            Qumode::Fock(f) => ModeBasis::Fock { cut: f.cut() },
            Qumode::Grid(g) => ModeBasis::Grid(g.grid.clone()),
        }
    }
    pub fn amplitudes(&self) -> &[C64] {
        match self {
            Qumode::Fock(f) => &f.amplitudes,
            Qumode::Grid(g) => &g.amplitudes,
        }
    }
}

/// Basis of the qumode factor of a [`HybridState`].
#[derive(Debug, Clone, PartialEq)]
pub enum ModeBasis {
    Fock { cut: usize },
    Grid(Arc<Grid>),
    /// The qumode has been projected out.
    Collapsed,
}

impl ModeBasis {
    pub fn dim(&self) -> usize {
        match self {
            ModeBasis::Fock { cut } => cut + 1,
            ModeBasis::Grid(g) => g.points(),
            ModeBasis::Collapsed => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridState {
    pub qubit_count: usize,
    pub basis: ModeBasis,
    pub amplitudes: Vec<C64>,
    /// Product of post-selection amplitudes accumulated so far.
    pub norm_tracking: f64,
}

impl HybridState {
    /// `|qubits⟩ ⊗ |mode⟩`.
    pub fn product(qubits: &[C64], mode: &Qumode) -> Result<Self> {
        let n = qubits.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("qubit vector length {n} is not a power of two")));
        }
        let m = mode.amplitudes();
        let mut amplitudes = Vec::with_capacity(n * m.len());
        for q in qubits {
            amplitudes.extend(m.iter().map(|a| q * a));
        }
        Ok(Self { qubit_count: n.trailing_zeros() as usize, basis: mode.basis(), amplitudes, norm_tracking: 1.0 })
    }

    pub fn qubit_dim(&self) -> usize {
        1 << self.qubit_count
    }

    pub fn mode_dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn block(&self, x: usize) -> &[C64] {
        let m = self.mode_dim();
        &self.amplitudes[x * m..(x + 1) * m]
    }

    pub fn norm_sqr(&self) -> f64 {
        match &self.basis {
            ModeBasis::Grid(g) => {
                let w = g.weights();
                self.amplitudes.chunks(w.len()).map(|b| b.iter().zip(w).map(|(a, w)| w * a.norm_sqr()).sum::<f64>()).sum()
            }
            _ => norm_sqr(&self.amplitudes),
        }
    }

    /// Writes `index,re,im` rows in storage order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "re", "im"])?;
        for (i, a) in self.amplitudes.iter().enumerate() {
            w.write_record([i.to_string(), format!("{:.16e}", a.re), format!("{:.16e}", a.im)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Normalized qubit vector of a collapsed state and its pre-normalization squared norm.
pub fn qubit_marginal(state: &HybridState) -> Result<(Vec<C64>, f64)> {
    if state.basis != ModeBasis::Collapsed {
        return Err(Error::InvalidArgument("qumode axis has not been projected out".into()));
    }
    let p = norm_sqr(&state.amplitudes);
    if !(p > 0.0) {
        return Err(Error::ProjectionFailure);
    }
    let r = p.sqrt();
    Ok((state.amplitudes.iter().map(|a| a / r).collect(), p))
}

/// Fraction of the probability on the top 10% of Fock levels.
pub fn fock_leakage(state: &HybridState) -> Result<f64> {
    let ModeBasis::Fock { cut } = state.basis else {
        return Err(Error::Unsupported("fock_leakage needs the Fock backend".into()));
    };
    let dim = cut + 1;
    let band = dim.div_ceil(10);
    let total = norm_sqr(&state.amplitudes);
    let top: f64 = state.amplitudes.chunks(dim).map(|b| norm_sqr(&b[dim - band..])).sum();
    Ok(top / total)
}

/// `a` truncated to `cut + 1` levels.
pub fn annihilation_operator(cut: usize) -> CMat {
    let mut a = CMat::zeros(cut + 1, cut + 1);
    for n in 1..=cut {
        a[(n - 1, n)] = c((n as f64).sqrt(), 0.0);
    }
    a
}

/// `p = (a - a†)/(i√2)` truncated to `cut + 1` levels.
pub fn momentum_operator(cut: usize) -> CMat {
    let mut p = CMat::zeros(cut + 1, cut + 1);
    for n in 1..=cut {
        let v = (n as f64 / 2.0).sqrt();
        p[(n - 1, n)] = c(0.0, -v);
        p[(n, n - 1)] = c(0.0, v);
    }
    p
}

/// Density matrix on qubits ⊗ truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridDensityMatrix {
    pub qubit_count: usize,
    pub cut: usize,
    pub matrix: CMat,
}

/// Largest density-matrix dimension handled.
pub const DENSITY_DIM_LIMIT: usize = 1024;

impl HybridDensityMatrix {
    pub fn from_pure(state: &HybridState) -> Result<Self> {
        let ModeBasis::Fock { cut } = state.basis else {
            return Err(Error::Unsupported("density matrices need the Fock backend".into()));
        };
        let d = state.amplitudes.len();
        if d > DENSITY_DIM_LIMIT {
            return Err(Error::LimitExceeded { what: "density-matrix dimension", size: d, limit: DENSITY_DIM_LIMIT });
        }
        let v = nalgebra::DVector::from_column_slice(&state.amplitudes);
        Ok(Self { qubit_count: state.qubit_count, cut, matrix: &v * v.adjoint() })
    }

    pub fn mode_dim(&self) -> usize {
        self.cut + 1
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}
