//! Ancilla-free inverse iteration: `H^{-k}` approximated by classical sums of
//! `e^{-iH jΔp}` over a discrete time grid.

use crate::error::{Error, Result};
use crate::hamiltonians::{diagonalize, LocalHamiltonian, Spectrum};
use crate::linalg::{expm_hermitian, inner, norm_sqr, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridIPIConfig {
    pub delta_p: f64,
    pub m_j: usize,
    pub k: u32,
    /// `m_j · delta_p`.
    pub phi_max: f64,
    /// Optional Gaussian damping width: weights `exp(-(jΔp)²/w²)`.
    pub damping: Option<f64>,
}

impl HybridIPIConfig {
    pub fn new(delta_p: f64, m_j: usize, k: u32) -> Result<Self> {
        if !(delta_p > 0.0) || !delta_p.is_finite() {
            return Err(Error::InvalidArgument(format!("delta_p must be positive, got {delta_p}")));
        }
        if m_j == 0 {
            return Err(Error::InvalidArgument("m_j must be at least 1".into()));
        }
        Ok(Self { delta_p, m_j, k, phi_max: m_j as f64 * delta_p, damping: None })
    }

    /// Picks `m_j = round(phi_max / delta_p)`; the stored `phi_max` is then `m_j·delta_p`.
    pub fn from_phi_max(delta_p: f64, phi_max: f64, k: u32) -> Result<Self> {
        if !(delta_p > 0.0) {
            return Err(Error::InvalidArgument(format!("delta_p must be positive, got {delta_p}")));
        }
        Self::new(delta_p, (phi_max / delta_p).round().max(1.0) as usize, k)
    }

    pub fn with_damping(mut self, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::InvalidArgument(format!("damping width must be positive, got {width}")));
        }
        self.damping = Some(width);
        Ok(self)
    }

    fn weight(&self, j: usize) -> f64 {
        match self.damping {
            None => 1.0,
            Some(w) => (-(j as f64 * self.delta_p / w).powi(2)).exp(),
        }
    }
}

/// Single-sum coefficient `Δp Σ_j w_j e^{-iE jΔp}`.
pub fn sum_coefficient(e: f64, config: &HybridIPIConfig) -> C64 {
    let mut acc = C64::from(0.0);
    for j in 0..config.m_j {
        acc += C64::from_polar(config.weight(j), -e * j as f64 * config.delta_p);
    }
    acc * config.delta_p
}

fn checked_spectrum(h: &LocalHamiltonian, b: &[C64]) -> Result<Spectrum> {
    if b.len() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), got: b.len() });
    }
    let spec = diagonalize(h)?;
    if spec.ground_energy() <= 0.0 {
        return Err(Error::InvalidShift { min_eigenvalue: spec.ground_energy() });
    }
    Ok(spec)
}

/// `(Σ_j e^{-iH jΔp} Δp)^k |b⟩`, unnormalized, evaluated eigenvalue by eigenvalue.
pub fn hybrid_inverse_apply(h: &LocalHamiltonian, b: &[C64], config: &HybridIPIConfig) -> Result<Vec<C64>> {
    let spec = checked_spectrum(h, b)?;
    let coeffs = spec.coefficients(b);
    let mut out = vec![C64::from(0.0); b.len()];
    for (i, bn) in coeffs.iter().enumerate() {
        let w = bn * sum_coefficient(spec.eigenvalues[i], config).powu(config.k);
        for (o, v) in out.iter_mut().zip(spec.eigenvectors.column(i).iter()) {
            *o += w * v;
        }
    }
    Ok(out)
}

/// The same vector as [`hybrid_inverse_apply`], by enumerating every index tuple `J`
/// and applying `Û(J)` built from dense exponentials. Cost is `m_j^k`.
pub fn hybrid_inverse_brute_force(h: &LocalHamiltonian, b: &[C64], config: &HybridIPIConfig) -> Result<Vec<C64>> {
    checked_spectrum(h, b)?;
    let tuples = (config.m_j as f64).powi(config.k as i32);
    if tuples > 1e7 {
        return Err(Error::LimitExceeded { what: "multi-index count", size: tuples as usize, limit: 10_000_000 });
    }
    let hm = h.matrix()?;
    let steps: Vec<_> = (0..config.m_j).map(|j| expm_hermitian(&hm, j as f64 * config.delta_p)).collect();
    let b = nalgebra::DVector::from_column_slice(b);
    let mut total = nalgebra::DVector::<C64>::zeros(b.len());
    let mut idx = vec![0usize; config.k as usize];
    loop {
        let mut v = b.clone();
        let mut w = 1.0;
        for &j in &idx {
            v = &steps[j] * v;
            w *= config.weight(j) * config.delta_p;
        }
        total += v * C64::from(w);
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(total.iter().copied().collect());
            }
            idx[pos] += 1;
            if idx[pos] < config.m_j {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Rayleigh quotient of `H` in the hybrid state, with the shift removed.
pub fn hybrid_energy(h: &LocalHamiltonian, b: &[C64], config: &HybridIPIConfig) -> Result<f64> {
    let psi = hybrid_inverse_apply(h, b, config)?;
    let n = norm_sqr(&psi);
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::ProjectionFailure);
    }
    Ok(inner(&psi, &h.apply(&psi)).re / n - h.shift())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionBudget {
    /// Longest single chained evolution `(m_j - 1)·Δp·k`.
    pub max_duration: f64,
    /// Sum of chained durations over all index tuples.
    pub total_time: f64,
    pub unitary_count: f64,
}

pub fn evolution_time_budget(config: &HybridIPIConfig) -> EvolutionBudget {
    let m = config.m_j as f64;
    let k = config.k as f64;
    let tuples = m.powf(k);
    EvolutionBudget {
        max_duration: (m - 1.0) * config.delta_p * k,
        // each slot contributes Δp·m(m-1)/2 summed over the other m^{k-1} choices
        total_time: k * m.powf(k - 1.0) * config.delta_p * m * (m - 1.0) / 2.0,
        unitary_count: tuples,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridSweepRow {
    pub k: u32,
    pub delta_p: f64,
    pub m_j: usize,
    pub phi_max: f64,
    pub energy: f64,
    pub energy_error: f64,
    pub max_evolution_time: f64,
}

/// Energies for `k = 1..=k_max` at each `phi_max`; rows ordered by `phi_max` then `k`.
pub fn hybrid_sweep(h: &LocalHamiltonian, b: &[C64], delta_p: f64, phi_values: &[f64], k_max: u32) -> Result<Vec<HybridSweepRow>> {
    let e0 = checked_spectrum(h, b)?.ground_energy() - h.shift();
    let mut rows = Vec::new();
    for &phi in phi_values {
        for k in 1..=k_max {
            let cfg = HybridIPIConfig::from_phi_max(delta_p, phi, k)?;
            let energy = hybrid_energy(h, b, &cfg)?;
            rows.push(HybridSweepRow {
                k,
                delta_p,
                m_j: cfg.m_j,
                phi_max: cfg.phi_max,
                energy,
                energy_error: (energy - e0).abs(),
                max_evolution_time: evolution_time_budget(&cfg).max_duration,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{build_h2, h2_initial_state, H2CoefficientTable};
    use crate::linalg::c;
    use std::f64::consts::PI;

    fn h2() -> LocalHamiltonian {
        build_h2(0.75, &H2CoefficientTable::bundled()).unwrap().with_shift(1.37)
    }

    #[test]
    fn config_invariants() {
        let cfg = HybridIPIConfig::new(0.1, 37, 2).unwrap();
        assert_eq!(cfg.phi_max, 37.0 * 0.1);
        assert!(HybridIPIConfig::new(0.0, 3, 1).is_err());
        assert!(HybridIPIConfig::new(0.1, 0, 1).is_err());
        assert_eq!(HybridIPIConfig::from_phi_max(0.1, 10.0, 1).unwrap().m_j, 100);
    }

    #[test]
    fn geometric_series() {
        for &(e, dp, m) in &[(0.7, 0.1, 50usize), (2.3, 0.05, 333), (0.01, 0.3, 7)] {
            let cfg = HybridIPIConfig::new(dp, m, 1).unwrap();
            let z = C64::from_polar(1.0, -e * dp);
            let closed = (C64::from(1.0) - z.powu(m as u32)) / (C64::from(1.0) - z) * dp;
            assert!((sum_coefficient(e, &cfg) - closed).norm() < 1e-12 * closed.norm().max(1.0));
        }
    }

    #[test]
    fn aligned_phases_sum_to_phi_max() {
        let dp = 0.25;
        let cfg = HybridIPIConfig::new(dp, 40, 1).unwrap();
        let g = sum_coefficient(2.0 * PI / dp, &cfg);
        assert!((g - C64::from(cfg.phi_max)).norm() < 1e-10);
    }

    #[test]
    fn factorized_equals_brute_force() {
        let h = h2();
        let b = h2_initial_state();
        for k in 1..=3u32 {
            for m in [1usize, 5, 20] {
                let cfg = HybridIPIConfig::new(0.1, m, k).unwrap();
                let f = hybrid_inverse_apply(&h, &b, &cfg).unwrap();
                let bf = hybrid_inverse_brute_force(&h, &b, &cfg).unwrap();
                let scale = norm_sqr(&f).sqrt().max(1e-300);
                let d = f.iter().zip(&bf).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                assert!(d < 1e-10 * scale.max(1.0), "k={k} m={m}: {d}");
            }
        }
        let cfg = HybridIPIConfig::new(0.2, 6, 2).unwrap().with_damping(0.5).unwrap();
        let f = hybrid_inverse_apply(&h, &b, &cfg).unwrap();
        let bf = hybrid_inverse_brute_force(&h, &b, &cfg).unwrap();
        assert!(f.iter().zip(&bf).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn riemann_error_is_first_order() {
        let e = 1.3;
        let phi = 40.0;
        let limit = (C64::from(1.0) - C64::from_polar(1.0, -e * phi)) / c(0.0, e);
        let err = |dp: f64| (sum_coefficient(e, &HybridIPIConfig::from_phi_max(dp, phi, 1).unwrap()) - limit).norm();
        for dp in [0.1, 0.05, 0.02] {
            let ratio = err(dp) / err(dp / 2.0);
            assert!((1.5..=2.5).contains(&ratio), "dp={dp}: {ratio}");
        }
    }

    #[test]
    fn eigenvector_and_phase_invariance() {
        let h = h2();
        let spec = diagonalize(&h).unwrap();
        let e0 = spec.ground_energy() - h.shift();
        let cfg = HybridIPIConfig::new(0.1, 30, 3).unwrap();
        let g = spec.vector(0);
        assert!((hybrid_energy(&h, &g, &cfg).unwrap() - e0).abs() < 1e-12);
        let b = h2_initial_state();
        let rotated: Vec<C64> = b.iter().map(|z| z * C64::from_polar(1.0, 0.83)).collect();
        let a = hybrid_energy(&h, &b, &cfg).unwrap();
        assert!((a - hybrid_energy(&h, &rotated, &cfg).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn damped_sum_approaches_ideal_inverse() {
        let h = h2();
        let b = h2_initial_state();
        let ideal = crate::quipi::oracle_inverse_iterate(&h, &b, 2).unwrap();
        let ideal_e = crate::hamiltonians::expectation(&h, &ideal).unwrap() - h.shift();
        let err = |phi: f64| {
            let cfg = HybridIPIConfig::from_phi_max(0.01, phi, 2).unwrap().with_damping(phi / 4.0).unwrap();
            (hybrid_energy(&h, &b, &cfg).unwrap() - ideal_e).abs()
        };
        assert!(err(200.0) < err(50.0));
        assert!(err(200.0) < 1e-3);
    }

    #[test]
    fn budget_arithmetic() {
        let b = evolution_time_budget(&HybridIPIConfig::new(0.1, 100, 2).unwrap());
        assert!((b.max_duration - 19.8).abs() < 1e-12);
        let one = evolution_time_budget(&HybridIPIConfig::new(0.1, 1, 3).unwrap());
        assert_eq!(one.max_duration, 0.0);
        assert_eq!(one.total_time, 0.0);
        // brute-force total for a small case
        let cfg = HybridIPIConfig::new(0.5, 3, 2).unwrap();
        let mut total = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                total += (i + j) as f64 * 0.5;
            }
        }
        assert!((evolution_time_budget(&cfg).total_time - total).abs() < 1e-12);
    }
}
