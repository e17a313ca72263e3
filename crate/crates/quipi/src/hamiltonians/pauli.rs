use crate::error::{Error, Result};
use crate::linalg::{c, kron, CMat, C64, I, ONE, ZERO};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMat {
        let m = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, c(-1.0, 0.0)],
        };
        CMat::from_row_slice(2, 2, &m)
    }

    pub fn from_char(ch: char) -> Option<Pauli> {
        match ch.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis. Qubit 0 is the most significant bit
/// of a computational-basis index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidArgument("Pauli string needs at least one qubit".into()));
        }
        Ok(Self { letters })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|ch| Pauli::from_char(ch).ok_or_else(|| Error::InvalidArgument(format!("bad Pauli letter '{ch}'"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }

    pub fn identity(n: usize) -> Self {
        Self { letters: vec![Pauli::I; n] }
    }

    /// String with `letter` on the listed qubits and identity elsewhere.
    pub fn with(n: usize, sites: &[(usize, Pauli)]) -> Self {
        let mut letters = vec![Pauli::I; n];
        for &(q, p) in sites {
            letters[q] = p;
        }
        Self { letters }
    }

    pub fn qubit_count(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.letters.len()).filter(|&q| self.letters[q] != Pauli::I).collect()
    }

    pub fn matrix(&self) -> CMat {
        let mut m = self.letters[0].matrix();
        for p in &self.letters[1..] {
            m = kron(&m, &p.matrix());
        }
        m
    }

    fn masks(&self) -> (usize, usize, usize) {
        let n = self.letters.len();
        let (mut flip, mut ys, mut zs) = (0usize, 0usize, 0usize);
        for (q, p) in self.letters.iter().enumerate() {
            let bit = 1 << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    ys |= bit
                }
                Pauli::Z => zs |= bit,
            }
        }
        (flip, ys, zs)
    }

    /// `P|x> = phase(x) |x ^ flip>`; returns `(flip, phase)` for every basis index.
    pub fn action(&self) -> (usize, Vec<C64>) {
        let (flip, ys, zs) = self.masks();
        let ny = ys.count_ones();
        let base = match ny % 4 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        };
        let phases = (0..1usize << self.letters.len())
            .map(|x| {
                // Y|0> = i|1>, Y|1> = -i|0>: each set Y bit contributes an extra -1.
                let sign_bits = ((x & ys).count_ones() + (x & zs).count_ones()) % 2;
                if sign_bits == 1 {
                    -base
                } else {
                    base
                }
            })
            .collect();
        (flip, phases)
    }

    /// `P v` where `v` holds `block` consecutive amplitudes per qubit basis index.
    pub fn apply_blocks(&self, v: &[C64], block: usize) -> Vec<C64> {
        let (flip, phases) = self.action();
        let mut out = vec![ZERO; v.len()];
        for (x, ph) in phases.iter().enumerate() {
            let y = x ^ flip;
            for m in 0..block {
                out[y * block + m] = ph * v[x * block + m];
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.apply_blocks(v, 1)
    }

    pub fn expectation(&self, v: &[C64]) -> f64 {
        let pv = self.apply(v);
        crate::linalg::inner(v, &pv).re
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs, CVec};

    fn all_strings(n: usize) -> Vec<PauliString> {
        let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        (0..4usize.pow(n as u32))
            .map(|mut k| {
                let mut v = Vec::new();
                for _ in 0..n {
                    v.push(letters[k % 4]);
                    k /= 4;
                }
                PauliString::new(v).unwrap()
            })
            .collect()
    }

    #[test]
    fn matrices_hermitian_unitary_involutory() {
        for n in 1..=3 {
            for p in all_strings(n) {
                let m = p.matrix();
                let d = 1 << n;
                assert!(max_abs(&(&m - m.adjoint())) < 1e-15);
                assert!(max_abs(&(&m * &m - identity(d))) < 1e-15);
            }
        }
    }

    #[test]
    fn matrix_matches_explicit_kron() {
        // Hand-built Kronecker products of 2x2 blocks, independent of PauliString::matrix.
        let x = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let y = CMat::from_row_slice(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]);
        let z = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, c(-1.0, 0.0)]);
        let id = identity(2);
        let pick = |p: Pauli| match p {
            Pauli::I => id.clone(),
            Pauli::X => x.clone(),
            Pauli::Y => y.clone(),
            Pauli::Z => z.clone(),
        };
        for n in 1..=3 {
            for p in all_strings(n) {
                let mut m = pick(p.letters()[0]);
                for &l in &p.letters()[1..] {
                    m = m.kronecker(&pick(l));
                }
                assert!(max_abs(&(m - p.matrix())) == 0.0, "{p}");
            }
        }
    }

    #[test]
    fn fast_apply_matches_dense() {
        let v: Vec<C64> = (0..8).map(|k| c(k as f64 * 0.3 - 1.0, 0.5 - k as f64 * 0.1)).collect();
        for p in all_strings(3) {
            let dense = p.matrix() * CVec::from_vec(v.clone());
            let fast = p.apply(&v);
            for k in 0..8 {
                assert!((dense[k] - fast[k]).norm() < 1e-14, "{p}");
            }
        }
    }

    #[test]
    fn parse_roundtrip() {
        let p = PauliString::parse("xIzY").unwrap();
        assert_eq!(p.to_string(), "XIZY");
        assert_eq!(p.support(), vec![0, 2, 3]);
        assert!(PauliString::parse("XQ").is_err());
    }
}
