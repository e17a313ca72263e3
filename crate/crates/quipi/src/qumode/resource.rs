use crate::error::{Error, Result};
use crate::hilbert::{FockQumode, Grid, GridQumode, GRID_EXTENT};
use crate::linalg::{c, norm_sqr, C64, ONE, ZERO};
use crate::special::{hermite_functions, integrate_vec};
use std::f64::consts::PI;
use std::sync::Arc;

const QUAD_TOL: f64 = 1e-12;

fn i_pow(n: usize) -> C64 {
    [ONE, c(0.0, 1.0), -ONE, c(0.0, -1.0)][n % 4]
}

/// `∫_a^b e^{-p²/2s²} ψ_n(p) dp` for `n = 0..=cut`.
fn gaussian_hermite_integrals(s: f64, cut: usize, a: f64, b: f64) -> Result<Vec<f64>> {
    let inv = 1.0 / (2.0 * s * s);
    let mut h = vec![0.0; cut + 1];
    integrate_vec(
        |p, out| {
            hermite_functions(cut, p, &mut h);
            let g = (-p * p * inv).exp();
            for (o, hn) in out.iter_mut().zip(&h) {
                *o = g * hn;
            }
        },
        a,
        b,
        cut + 1,
        QUAD_TOL,
    )
}

/// Finite-squeezed resource state `|R,s⟩` truncated to Fock levels `0..=cut`.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezedResource {
    pub s: f64,
    pub cut: usize,
    /// Renormalized coefficients.
    pub fock_coefficients: Vec<C64>,
    /// Coefficients before renormalization.
    pub raw_coefficients: Vec<C64>,
    pub renormalized: bool,
}

impl SqueezedResource {
    /// `Σ_{n≤cut} |c_n|²` before renormalization.
    pub fn retained_weight(&self) -> f64 {
        norm_sqr(&self.raw_coefficients)
    }

    pub fn discarded_weight(&self) -> f64 {
        1.0 - self.retained_weight()
    }

    pub fn fock_state(&self, cut: usize) -> FockQumode {
        FockQumode { amplitudes: self.fock_coefficients.clone() }.resized(cut.max(self.cut))
    }
}

/// `c_n = √2 s^{-1/2} π^{-1/4} iⁿ ∫_0^{8s} e^{-p²/2s²} ψ_n(p) dp`, renormalized over the truncation.
pub fn build_resource(s: f64, cut: usize) -> Result<SqueezedResource> {
    if !(s > 0.0) {
        return Err(Error::InvalidArgument(format!("squeezing factor must be positive, got {s}")));
    }
    let norm = 2f64.sqrt() * s.powf(-0.5) * PI.powf(-0.25);
    let ints = gaussian_hermite_integrals(s, cut, 0.0, GRID_EXTENT * s)?;
    let raw: Vec<C64> = ints.iter().enumerate().map(|(n, v)| i_pow(n) * (norm * v)).collect();
    let r = norm_sqr(&raw).sqrt();
    let fock_coefficients = raw.iter().map(|z| z / r).collect();
    Ok(SqueezedResource { s, cut, fock_coefficients, raw_coefficients: raw, renormalized: true })
}

/// Ideal (untruncated) resource on a momentum grid: `√2 s^{-1/2} π^{-1/4} e^{-p²/2s²}` for `p ≥ 0`.
pub fn resource_on_grid(s: f64, grid: Arc<Grid>) -> GridQumode {
    let norm = 2f64.sqrt() * s.powf(-0.5) * PI.powf(-0.25);
    GridQumode::from_fn(grid, |p| if p >= 0.0 { C64::from(norm * (-p * p / (2.0 * s * s)).exp()) } else { ZERO })
}

/// Momentum wavefunction `⟨p|ψ⟩ = Σ c_n (-i)ⁿ ψ_n(p)` of a Fock superposition.
pub fn momentum_wavefunction(coefficients: &[C64], p: f64) -> C64 {
    let cut = coefficients.len() - 1;
    let mut h = vec![0.0; cut + 1];
    hermite_functions(cut, p, &mut h);
    coefficients.iter().enumerate().map(|(n, cn)| cn * i_pow(n).conj() * h[n]).sum()
}

/// A Fock superposition sampled on a grid.
pub fn fock_state_on_grid(coefficients: &[C64], grid: Arc<Grid>) -> GridQumode {
    GridQumode::from_fn(grid, |p| momentum_wavefunction(coefficients, p))
}

/// Representation of the finite-squeezed position eigenstate `|q=0,s⟩`.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelRepr {
    /// Coefficients `⟨n|q=0,s⟩` for `n = 0..=cut`.
    Fock(Vec<C64>),
    /// Evaluated pointwise as `s^{-1/2} π^{-1/4} e^{-p²/2s²}` on whatever grid the state uses.
    Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionKernel {
    pub s: f64,
    pub repr: KernelRepr,
}

impl ProjectionKernel {
    pub fn grid(s: f64) -> Self {
        Self { s, repr: KernelRepr::Grid }
    }

    /// Fock coefficients by quadrature over `[-8s, 8s]`; no renormalization.
    pub fn fock(s: f64, cut: usize) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidArgument(format!("squeezing factor must be positive, got {s}")));
        }
        let norm = s.powf(-0.5) * PI.powf(-0.25);
        let ext = GRID_EXTENT * s;
        let neg = gaussian_hermite_integrals(s, cut, -ext, 0.0)?;
        let pos = gaussian_hermite_integrals(s, cut, 0.0, ext)?;
        let coeffs = (0..=cut).map(|n| i_pow(n) * (norm * (neg[n] + pos[n]))).collect();
        Ok(Self { s, repr: KernelRepr::Fock(coeffs) })
    }

    /// Kernel wavefunction value at momentum `p`.
    pub fn value(&self, p: f64) -> f64 {
        self.s.powf(-0.5) * PI.powf(-0.25) * (-p * p / (2.0 * self.s * self.s)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resource_normalized_and_parity_broken() {
        let r = build_resource(5.0, 20).unwrap();
        assert!((norm_sqr(&r.fock_coefficients) - 1.0).abs() < 1e-12);
        assert!(r.fock_coefficients[1].norm() > 1e-3);
        // phases i^n times real integrals
        assert!(r.fock_coefficients[1].re.abs() < 1e-15);
        assert!(r.fock_coefficients[2].im.abs() < 1e-15);
    }

    #[test]
    fn retained_weight_grows_with_cut() {
        let w: Vec<f64> = [4, 8, 12, 20].iter().map(|&c| build_resource(5.0, c).unwrap().retained_weight()).collect();
        assert!(w.windows(2).all(|p| p[1] > p[0]), "{w:?}");
        assert!(w[3] < 1.0);
    }

    #[test]
    fn kernel_odd_coefficients_vanish() {
        let k = ProjectionKernel::fock(5.0, 60).unwrap();
        let KernelRepr::Fock(c) = k.repr else { unreachable!() };
        for n in (1..=60).step_by(2) {
            assert!(c[n].norm() < 1e-12, "n={n}: {}", c[n]);
        }
        assert!(c[0].norm() > 0.1);
    }

    #[test]
    fn kernel_even_coefficients_closed_form() {
        // ⟨2m|q=0,s⟩ for a squeezed vacuum: k_0 = √(2s/(1+s²)) · π^{-1/4}·π^{1/4}, ratio k_{2m+2}/k_{2m} known
        let s: f64 = 3.0;
        let k = ProjectionKernel::fock(s, 10).unwrap();
        let KernelRepr::Fock(c) = k.repr else { unreachable!() };
        let k0 = (2.0 * s / (1.0 + s * s)).sqrt();
        assert!((c[0].re - k0).abs() < 1e-12);
        let t = (s * s - 1.0) / (s * s + 1.0);
        for m in 0..4usize {
            let n = 2 * m;
            let ratio = c[n + 2] / c[n];
            let want = -t * (((n + 1) as f64) / ((n + 2) as f64)).sqrt();
            assert!((ratio.re - want).abs() < 1e-10 && ratio.im.abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn wavefunction_approaches_half_gaussian() {
        let norm = 2f64.sqrt() * 2f64.powf(-0.5) * PI.powf(-0.25);
        let err = |cut: usize| {
            let r = build_resource(2.0, cut).unwrap();
            [1.0f64, 2.5, 4.0, -1.5]
                .iter()
                .map(|&p| {
                    let want = if p > 0.0 { norm * (-p * p / 8.0).exp() } else { 0.0 };
                    (momentum_wavefunction(&r.raw_coefficients, p) - want).norm()
                })
                .fold(0.0f64, f64::max)
        };
        let (e20, e60) = (err(20), err(60));
        assert!(e60 < 0.02 && e60 < 0.5 * e20, "{e20} {e60}");
    }

}
