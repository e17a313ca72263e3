use crate::linalg::{c, C64};
use crate::special::dawson;
use std::f64::consts::PI;

/// Amplitude picked up by an eigencomponent with eigenvalue `e`:
/// `f_s(E) = (√2/2) e^{-E²s²/4} [1 - i Erfi(Es/2)]`.
///
/// Uses `e^{-x²} Erfi(x) = (2/√π) F(x)` so nothing overflows for large `Es`.
pub fn analytic_amplitude(e: f64, s: f64) -> C64 {
    let x = e * s / 2.0;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    c(r * (-x * x).exp(), -r * 2.0 / PI.sqrt() * dawson(x))
}

/// Large-`Es` limit `-i √(2/π) / (sE)`.
pub fn asymptotic_amplitude(e: f64, s: f64) -> C64 {
    c(0.0, -(2.0 / PI).sqrt() / (s * e))
}
