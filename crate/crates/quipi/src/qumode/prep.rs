use crate::error::{Error, Result};
use crate::hilbert::annihilation_operator;
use crate::linalg::{expm_hermitian, inner, norm_sqr, CMat, CVec, C64, ONE, ZERO};

/// Largest target truncation accepted by the root-finding step.
pub const PREP_CUT_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq)]
pub struct PreparationSequence {
    /// Displacement parameters in application order.
    pub alphas: Vec<C64>,
    /// Normalized target coefficients.
    pub target: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preparation {
    pub sequence: PreparationSequence,
    /// Simulated state, restricted to the target's levels and normalized.
    pub achieved: Vec<C64>,
    /// `|⟨target|achieved⟩|²`.
    pub fidelity: f64,
    /// Weight the simulated state put outside the target's levels.
    pub leakage: f64,
}

fn poly_eval(coeffs: &[C64], x: C64) -> (C64, C64) {
    // Horner for value and derivative; coeffs[k] multiplies x^k
    let mut v = ZERO;
    let mut d = ZERO;
    for a in coeffs.iter().rev() {
        d = d * x + v;
        v = v * x + a;
    }
    (v, d)
}

/// Roots of `Σ a_k x^k` via eigenvalues of the companion matrix, Newton-polished.
pub fn polynomial_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let deg = coeffs.iter().rposition(|z| z.norm() > 0.0).unwrap_or(0);
    if deg == 0 {
        return Ok(vec![]);
    }
    let lead = coeffs[deg];
    let mut comp = CMat::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = ONE;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let mut roots: Vec<C64> = comp.schur().eigenvalues().ok_or(Error::RootFinding(f64::NAN))?.iter().copied().collect();
    let scale: f64 = coeffs.iter().map(|z| z.norm()).sum();
    let mut worst: f64 = 0.0;
    for r in roots.iter_mut() {
        for _ in 0..50 {
            let (v, d) = poly_eval(&coeffs[..=deg], *r);
            if d.norm() == 0.0 {
                break;
            }
            let step = v / d;
            *r -= step;
            if step.norm() <= 1e-15 * r.norm().max(1.0) {
                break;
            }
        }
        let (v, _) = poly_eval(&coeffs[..=deg], *r);
        worst = worst.max(v.norm() / (scale * r.norm().max(1.0).powi(deg as i32)));
    }
    if !(worst < 1e-8) {
        return Err(Error::RootFinding(worst));
    }
    Ok(roots)
}

/// Displacement amplitudes realizing `target ∝ Π_k D(α_k) a† D(α_k)† |0⟩`.
///
/// `D(α) a† D(α)† = a† - α*`, so the `α_k*` are the roots of `Σ c_n/√n! xⁿ`.
/// Stages are applied in order of increasing `|α|`.
pub fn displacement_sequence(target: &[C64]) -> Result<PreparationSequence> {
    let cut = target.len().saturating_sub(1);
    if cut > PREP_CUT_LIMIT {
        return Err(Error::LimitExceeded { what: "preparation cut", size: cut, limit: PREP_CUT_LIMIT });
    }
    let n = norm_sqr(target).sqrt();
    if !(n > 0.0) {
        return Err(Error::InvalidArgument("zero target state".into()));
    }
    let target: Vec<C64> = target.iter().map(|z| z / n).collect();
    let mut fact = 1.0f64;
    let poly: Vec<C64> = target
        .iter()
        .enumerate()
        .map(|(k, cn)| {
            if k > 0 {
                fact *= k as f64;
            }
            cn / fact.sqrt()
        })
        .collect();
    let mut alphas: Vec<C64> = polynomial_roots(&poly)?.into_iter().map(|x| x.conj()).collect();
    alphas.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    Ok(PreparationSequence { alphas, target })
}

fn displacement(alpha: C64, a: &CMat) -> CMat {
    // D(α) = exp(α a† − α* a) = exp(−i K) with K = i(α a† − α* a) Hermitian
    let k = (a.adjoint() * alpha - a * alpha.conj()) * crate::linalg::I;
    expm_hermitian(&k, 1.0)
}

/// Simulates the displacement/creation protocol in a Fock space with headroom and
/// compares the result against the target.
pub fn prepare_by_displacements(target: &[C64]) -> Result<Preparation> {
    let sequence = displacement_sequence(target)?;
    let cut = sequence.target.len() - 1;
    let amax = sequence.alphas.iter().fold(0.0f64, |m, a| m.max(a.norm()));
    let sim_cut = cut + 30 + (3.0 * amax * amax).ceil() as usize;
    let a = annihilation_operator(sim_cut);
    let ad = a.adjoint();
    let mut psi = CVec::zeros(sim_cut + 1);
    psi[0] = ONE;
    for &alpha in &sequence.alphas {
        let d = displacement(alpha, &a);
        psi = &d * (&ad * (d.adjoint() * &psi));
    }
    let total = psi.norm_squared();
    let head: Vec<C64> = psi.iter().take(cut + 1).copied().collect();
    let kept = norm_sqr(&head);
    let achieved: Vec<C64> = head.iter().map(|z| z / kept.sqrt()).collect();
    let fidelity = inner(&sequence.target, &achieved).norm_sqr();
    Ok(Preparation { sequence, achieved, fidelity, leakage: 1.0 - kept / total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::qumode::build_resource;

    #[test]
    fn single_photon_target() {
        let p = prepare_by_displacements(&[ZERO, ONE]).unwrap();
        assert_eq!(p.sequence.alphas.len(), 1);
        assert!(p.sequence.alphas[0].norm() < 1e-14);
        assert!((p.fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn roots_of_known_polynomial() {
        // (x-1)(x+2i)(x-0.5) expanded
        let r = [c(1.0, 0.0), c(0.0, -2.0), c(0.5, 0.0)];
        let mut coeffs = vec![ONE];
        for root in r {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (k, a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * root;
            }
            coeffs = next;
        }
        let mut got = polynomial_roots(&coeffs).unwrap();
        got.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        assert!((got[0] - r[2]).norm() < 1e-12 && (got[1] - r[0]).norm() < 1e-12 && (got[2] - r[1]).norm() < 1e-12);
    }

    #[test]
    fn resource_preparation_is_faithful() {
        let res = build_resource(5.0, 20).unwrap();
        let p = prepare_by_displacements(&res.fock_coefficients).unwrap();
        assert!(p.fidelity > 0.99, "{}", p.fidelity);
        assert!(p.leakage < 1e-8, "{}", p.leakage);
        // the same stages applied through the exact identity D a† D† = a† − α*
        let mut exact = vec![ZERO; 21];
        exact[0] = ONE;
        for a in &p.sequence.alphas {
            let mut next = vec![ZERO; 21];
            for n in 0..20 {
                next[n + 1] += exact[n] * ((n + 1) as f64).sqrt();
            }
            for n in 0..21 {
                next[n] -= exact[n] * a.conj();
            }
            exact = next;
        }
        assert!(crate::linalg::fidelity(&exact, &p.achieved) > 1.0 - 1e-10);
        assert!(crate::linalg::fidelity(&exact, &res.fock_coefficients) > 1.0 - 1e-10);
    }

    #[test]
    fn cut_limit_enforced() {
        assert!(matches!(prepare_by_displacements(&vec![ONE; 30]), Err(Error::LimitExceeded { .. })));
    }
}
