//! Special functions and quadrature.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Dawson's integral `F(x) = exp(-x^2) ∫_0^x exp(t^2) dt`.
///
/// Rybicki's sampling-theorem sum with step 0.2 (truncation error ~e^{-(π/0.4)^2})
/// and a Maclaurin series near the origin.
pub fn dawson(x: f64) -> f64 {
    const H: f64 = 0.2;
    const NMAX: usize = 18;
    let ax = x.abs();
    if ax < 0.5 {
        // F(x) = Σ (-2)^k x^{2k+1} / (2k+1)!!
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut k = 0.0;
        while term.abs() > 1e-18 * sum.abs().max(1e-300) {
            k += 1.0;
            term *= -2.0 * x2 / (2.0 * k + 1.0);
            sum += term;
        }
        return sum;
    }
    if ax > 1e8 {
        let r = 1.0 / (2.0 * x * x);
        return (1.0 + r * (1.0 + 3.0 * r)) / (2.0 * x);
    }
    let n0 = 2.0 * (0.5 * ax / H).round();
    let xp = ax - n0 * H;
    let mut e1 = (2.0 * xp * H).exp();
    let e2 = e1 * e1;
    let mut d1 = n0 + 1.0;
    let mut d2 = d1 - 2.0;
    let mut sum = 0.0;
    for i in 0..NMAX {
        let ci = (-((2 * i + 1) as f64 * H).powi(2)).exp();
        sum += ci * (e1 / d1 + 1.0 / (d2 * e1));
        d1 += 2.0;
        d2 -= 2.0;
        e1 *= e2;
    }
    x.signum() * (-xp * xp).exp() * sum / PI.sqrt()
}

/// Normalized Hermite functions ψ_0..ψ_nmax at `p`,
/// ψ_n(p) = π^{-1/4} (2^n n!)^{-1/2} H_n(p) e^{-p²/2}.
pub fn hermite_functions(nmax: usize, p: f64, out: &mut [f64]) {
    debug_assert!(out.len() > nmax);
    out[0] = PI.powf(-0.25) * (-0.5 * p * p).exp();
    if nmax >= 1 {
        out[1] = 2f64.sqrt() * p * out[0];
    }
    for n in 1..nmax {
        let nf = n as f64;
        out[n + 1] = (2.0 / (nf + 1.0)).sqrt() * p * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
    }
}

pub const GREGORY_MIN_POINTS: usize = 12;

/// Trapezoid weights with six-point Gregory end corrections on a uniform grid
/// (exact through quintics).
pub fn gregory_weights(points: usize, h: f64) -> Vec<f64> {
    assert!(points >= GREGORY_MIN_POINTS, "Gregory weights need at least {GREGORY_MIN_POINTS} points");
    let mut w = vec![h; points];
    let ends = [
        19087.0 / 60480.0,
        84199.0 / 60480.0,
        18869.0 / 30240.0,
        37621.0 / 30240.0,
        55031.0 / 60480.0,
        61343.0 / 60480.0,
    ];
    for (i, e) in ends.iter().enumerate() {
        w[i] = e * h;
        w[points - 1 - i] = e * h;
    }
    w
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: FnMut(f64, &mut [f64])>(f: &mut F, a: f64, b: f64, dim: usize, buf: &mut [f64], kr: &mut [f64], gs: &mut [f64]) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    kr.iter_mut().for_each(|v| *v = 0.0);
    gs.iter_mut().for_each(|v| *v = 0.0);
    for j in 0..8 {
        let nodes: &[f64] = if j == 7 { &[0.0] } else { &[-1.0, 1.0] };
        for &sgn in nodes {
            f(c + sgn * h * XGK[j], buf);
            for d in 0..dim {
                kr[d] += WGK[j] * buf[d];
                if j % 2 == 1 {
                    gs[d] += WG[j / 2] * buf[d];
                }
            }
        }
    }
    for d in 0..dim {
        kr[d] *= h;
        gs[d] *= h;
    }
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of a vector-valued integrand.
///
/// The integrand writes `dim` values into its output slice. Intervals are bisected
/// until the Kronrod–Gauss difference of every component is below `abs_tol` in sum.
pub fn integrate_vec<F: FnMut(f64, &mut [f64])>(mut f: F, a: f64, b: f64, dim: usize, abs_tol: f64) -> Result<Vec<f64>> {
    let mut buf = vec![0.0; dim];
    let mut kr = vec![0.0; dim];
    let mut gs = vec![0.0; dim];
    let mut total = vec![0.0; dim];
    let mut stack = vec![(a, b, 0u32)];
    let mut worst: f64 = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        gk15(&mut f, lo, hi, dim, &mut buf, &mut kr, &mut gs);
        let err = kr.iter().zip(&gs).fold(0.0f64, |m, (k, g)| m.max((k - g).abs()));
        let budget = abs_tol * (hi - lo) / (b - a);
        if err <= budget || depth >= 40 {
            if err > budget {
                worst = worst.max(err);
            }
            for d in 0..dim {
                total[d] += kr[d];
            }
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    if worst > abs_tol {
        return Err(Error::Quadrature(worst));
    }
    Ok(total)
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    integrate_vec(|x, out| out[0] = f(x), a, b, 1, abs_tol).map(|v| v[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath: sqrt(pi)/2 * exp(-x^2) * erfi(x), 30 digits
    const DAWSON_REF: [(f64, f64); 10] = [
        (0.0, 0.0),
        (0.1, 0.09933599239785287),
        (0.3, 0.2826316650213119),
        (0.5, 0.4244363835020223),
        (0.924138873, 0.5410442246351817),
        (1.5, 0.4282490710853986),
        (3.0, 0.1782710306105583),
        (7.5, 0.06727581164463062),
        (25.0, 0.02001603855446641),
        (300.0, 0.001666675926080251),
    ];

    #[test]
    fn dawson_reference_values() {
        for (x, f) in DAWSON_REF {
            let got = dawson(x);
            assert!((got - f).abs() <= 1e-12 * f.abs(), "x={x} got {got} want {f}");
            assert!((dawson(-x) + got).abs() < 1e-16, "odd symmetry at {x}");
        }
    }

    #[test]
    fn dawson_satisfies_ode() {
        // F'(x) = 1 - 2x F(x)
        for &x in &[0.2, 0.49, 0.51, 1.0, 2.3, 6.0, 14.0] {
            let h = 1e-5;
            let d = (dawson(x + h) - dawson(x - h)) / (2.0 * h);
            assert!((d - (1.0 - 2.0 * x * dawson(x))).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn hermite_orthonormal() {
        let n = 12;
        let m = integrate_vec(
            |p, out| {
                let mut h = vec![0.0; n + 1];
                hermite_functions(n, p, &mut h);
                for i in 0..=n {
                    for j in 0..=n {
                        out[i * (n + 1) + j] = h[i] * h[j];
                    }
                }
            },
            -15.0,
            15.0,
            (n + 1) * (n + 1),
            1e-13,
        )
        .unwrap();
        for i in 0..=n {
            for j in 0..=n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((m[i * (n + 1) + j] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gk_polynomial_and_gaussian() {
        let v = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((v - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
        let g = integrate(|x| (-x * x).exp(), -10.0, 10.0, 1e-14).unwrap();
        assert!((g - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn gregory_exact_for_quintics() {
        let n = 41;
        let h = 2.0 / (n - 1) as f64;
        let w = gregory_weights(n, h);
        let s: f64 = (0..n).map(|i| {
            let x = i as f64 * h;
            w[i] * (x.powi(5) - 2.0 * x.powi(4) + x.powi(3) - x + 1.0)
        }).sum();
        let want = 64.0 / 6.0 - 64.0 / 5.0 + 4.0 - 2.0 + 2.0;
        assert!((s - want).abs() < 1e-12, "{s} {want}");
    }
}
