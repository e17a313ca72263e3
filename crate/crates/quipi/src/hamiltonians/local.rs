use super::pauli::PauliString;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigh, identity, inner, norm_sqr, CMat, C64};

/// Largest qubit count handled by dense diagonalization.
pub const DENSE_QUBIT_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub string: PauliString,
}

/// `H = Σ_l c_l h_l + shift · I`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalHamiltonian {
    qubit_count: usize,
    terms: Vec<Term>,
    shift: f64,
}

impl LocalHamiltonian {
    pub fn new(qubit_count: usize, terms: Vec<Term>, shift: f64) -> Result<Self> {
        if qubit_count == 0 {
            return Err(Error::InvalidArgument("qubit_count must be positive".into()));
        }
        for t in &terms {
            if t.string.qubit_count() != qubit_count {
                return Err(Error::DimensionMismatch {
                    expected: qubit_count,
                    got: t.string.qubit_count(),
                });
            }
            if !t.coeff.is_finite() {
                return Err(Error::InvalidArgument("non-finite coefficient".into()));
            }
        }
        Ok(Self { qubit_count, terms, shift })
    }

    pub fn from_terms<S: AsRef<str>>(terms: &[(f64, S)], shift: f64) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|(c, s)| Ok(Term { coeff: *c, string: PauliString::parse(s.as_ref())? }))
            .collect::<Result<Vec<_>>>()?;
        let n = parsed
            .first()
            .map(|t| t.string.qubit_count())
            .ok_or_else(|| Error::InvalidArgument("no terms given".into()))?;
        Self::new(n, parsed, shift)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn dim(&self) -> usize {
        1 << self.qubit_count
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn with_shift(&self, shift: f64) -> Self {
        Self { shift, ..self.clone() }
    }

    pub fn c_max(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, t| m.max(t.coeff.abs()))
    }

    fn check_dense(&self) -> Result<()> {
        if self.qubit_count > DENSE_QUBIT_LIMIT {
            return Err(Error::LimitExceeded {
                what: "qubit count for dense diagonalization",
                size: self.qubit_count,
                limit: DENSE_QUBIT_LIMIT,
            });
        }
        Ok(())
    }

    /// Dense matrix including the shift.
    pub fn matrix(&self) -> Result<CMat> {
        self.check_dense()?;
        let mut m = identity(self.dim()) * C64::from(self.shift);
        for t in &self.terms {
            let (flip, phases) = t.string.action();
            for (x, ph) in phases.iter().enumerate() {
                m[(x ^ flip, x)] += ph * t.coeff;
            }
        }
        Ok(m)
    }

    /// `H v` (shift included) without forming the dense matrix.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out: Vec<C64> = v.iter().map(|z| z * self.shift).collect();
        for t in &self.terms {
            let pv = t.string.apply(v);
            for (o, p) in out.iter_mut().zip(pv) {
                *o += p * t.coeff;
            }
        }
        out
    }
}

/// Eigen-decomposition of the shifted Hamiltonian.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMat,
}

impl Spectrum {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.eigenvectors.column(i).iter().copied().collect()
    }

    /// Indices of eigenvalues within `tol` of the lowest one.
    pub fn ground_space(&self, tol: f64) -> Vec<usize> {
        let e0 = self.eigenvalues[0];
        (0..self.eigenvalues.len()).filter(|&i| self.eigenvalues[i] - e0 <= tol).collect()
    }

    /// Weight of `state` inside the (possibly degenerate) ground eigenspace.
    pub fn ground_fidelity(&self, state: &[C64]) -> f64 {
        let n = norm_sqr(state);
        self.ground_space(1e-9)
            .iter()
            .map(|&i| inner(&self.vector(i), state).norm_sqr())
            .sum::<f64>()
            / n
    }

    /// Expansion coefficients `b_n = <ψ_n|state>`.
    pub fn coefficients(&self, state: &[C64]) -> Vec<C64> {
        (0..self.eigenvalues.len()).map(|i| inner(&self.vector(i), state)).collect()
    }
}

pub fn diagonalize(h: &LocalHamiltonian) -> Result<Spectrum> {
    let m = h.matrix()?;
    let (eigenvalues, eigenvectors) = hermitian_eigh(&m);
    Ok(Spectrum { eigenvalues, eigenvectors })
}

/// True iff every eigenvalue of the shifted Hamiltonian is strictly positive.
pub fn validate_shift(h: &LocalHamiltonian) -> bool {
    match diagonalize(h) {
        Ok(s) => s.ground_energy() > 0.0,
        Err(_) => false,
    }
}

/// `<ψ|H|ψ>` including the shift.
pub fn expectation(h: &LocalHamiltonian, state: &[C64]) -> Result<f64> {
    if state.len() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), got: state.len() });
    }
    let n = norm_sqr(state);
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized(n));
    }
    let e = inner(state, &h.apply(state));
    debug_assert!(e.im.abs() < 1e-10);
    Ok(e.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, hermiticity_residual, CVec};

    #[test]
    fn identity_hamiltonian() {
        let h = LocalHamiltonian::from_terms(&[(1.0, "II")], 0.0).unwrap();
        let s = diagonalize(&h).unwrap();
        assert!(s.eigenvalues.iter().all(|&e| (e - 1.0).abs() < 1e-14));
        for j in 0..4 {
            let col = s.vector(j);
            assert_eq!(col.iter().filter(|z| (z.norm() - 1.0).abs() < 1e-12).count(), 1);
        }
        let h0 = LocalHamiltonian::new(2, vec![], 1.0).unwrap();
        assert!(diagonalize(&h0).unwrap().eigenvalues.iter().all(|&e| e == 1.0));
    }

    #[test]
    fn validate_shift_on_z() {
        let z = LocalHamiltonian::from_terms(&[(1.0, "Z")], 2.0).unwrap();
        assert!(validate_shift(&z));
        assert!(!validate_shift(&z.with_shift(0.5)));
    }

    #[test]
    fn expectation_basic() {
        let x = LocalHamiltonian::from_terms(&[(1.0, "X")], 0.0).unwrap();
        assert_eq!(expectation(&x, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap(), 0.0);
        assert!(matches!(expectation(&x, &[c(2.0, 0.0), c(0.0, 0.0)]), Err(Error::NotNormalized(_))));
        assert!(expectation(&x, &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn eigenvectors_satisfy_residual() {
        let h = LocalHamiltonian::from_terms(&[(0.7, "XZY"), (-0.3, "ZZI"), (1.1, "IYY"), (0.2, "XII")], 0.4).unwrap();
        let m = h.matrix().unwrap();
        assert!(hermiticity_residual(&m) < 1e-12);
        let s = diagonalize(&h).unwrap();
        for i in 0..8 {
            let v = CVec::from_vec(s.vector(i));
            let r = &m * &v - &v * C64::from(s.eigenvalues[i]);
            assert!(r.norm() < 1e-10);
            assert!((expectation(&h, v.as_slice()).unwrap() - s.eigenvalues[i]).abs() < 1e-10);
        }
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}
