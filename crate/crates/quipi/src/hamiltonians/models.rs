use super::local::{LocalHamiltonian, Term};
use super::pauli::{Pauli, PauliString};
use crate::error::{Error, Result};
use crate::linalg::{c, C64};
use nalgebra::DMatrix;
use std::io::Read;
use std::path::{Path, PathBuf};

/// Transverse-field Ising model `Σ a_i X_i + Σ_{i>j} J_ij Z_i Z_j` (all-to-all).
pub fn build_tfim(site_count: usize, fields: &[f64], couplings: &DMatrix<f64>) -> Result<LocalHamiltonian> {
    if site_count == 0 {
        return Err(Error::InvalidArgument("site_count must be at least 1".into()));
    }
    if fields.len() != site_count {
        return Err(Error::DimensionMismatch { expected: site_count, got: fields.len() });
    }
    if couplings.nrows() != site_count || couplings.ncols() != site_count {
        return Err(Error::DimensionMismatch { expected: site_count, got: couplings.nrows().max(couplings.ncols()) });
    }
    let mut terms = Vec::new();
    for (i, &a) in fields.iter().enumerate() {
        terms.push(Term { coeff: a, string: PauliString::with(site_count, &[(i, Pauli::X)]) });
    }
    for i in 0..site_count {
        for j in 0..i {
            terms.push(Term {
                coeff: couplings[(i, j)],
                string: PauliString::with(site_count, &[(i, Pauli::Z), (j, Pauli::Z)]),
            });
        }
    }
    LocalHamiltonian::new(site_count, terms, 0.0)
}

/// All fields and couplings equal to one.
pub fn tfim_uniform(site_count: usize) -> Result<LocalHamiltonian> {
    build_tfim(site_count, &vec![1.0; site_count], &DMatrix::from_element(site_count, site_count, 1.0))
}

/// Fields and couplings drawn from uniform[0, 1) with a ChaCha8 stream seeded by `seed`.
/// Fields are drawn first, then `J_ij` for `i > j` in row order.
pub fn tfim_random(site_count: usize, seed: u64) -> Result<LocalHamiltonian> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let fields: Vec<f64> = (0..site_count).map(|_| rng.gen::<f64>()).collect();
    let mut j = DMatrix::zeros(site_count, site_count);
    for i in 0..site_count {
        for k in 0..i {
            j[(i, k)] = rng.gen::<f64>();
        }
    }
    build_tfim(site_count, &fields, &j)
}

/// Kitaev chain closed into a ring after Jordan–Wigner:
/// `-h Σ Z_i - J Σ X_i X_{i+1} - J Y_1 (Π Z) Y_N`.
pub fn build_kitaev_ring(site_count: usize, hopping: f64, field: f64) -> Result<LocalHamiltonian> {
    if site_count < 2 {
        return Err(Error::InvalidArgument("Kitaev ring needs at least 2 sites".into()));
    }
    let n = site_count;
    let mut terms = Vec::new();
    for i in 0..n {
        terms.push(Term { coeff: -field, string: PauliString::with(n, &[(i, Pauli::Z)]) });
    }
    for i in 0..n - 1 {
        terms.push(Term { coeff: -hopping, string: PauliString::with(n, &[(i, Pauli::X), (i + 1, Pauli::X)]) });
    }
    let mut letters = vec![Pauli::Z; n];
    letters[0] = Pauli::Y;
    letters[n - 1] = Pauli::Y;
    terms.push(Term { coeff: -hopping, string: PauliString::new(letters)? });
    LocalHamiltonian::new(n, terms, 0.0)
}

/// Two-qubit H2 Hamiltonian with terms `I, Z1, Z2, Z1Z2, X1X2, Y1Y2`.
pub fn build_h2(bond_distance: f64, table: &H2CoefficientTable) -> Result<LocalHamiltonian> {
    let cs = table.lookup(bond_distance)?;
    let names = ["II", "ZI", "IZ", "ZZ", "XX", "YY"];
    let terms: Vec<(f64, &str)> = cs.iter().copied().zip(names).collect();
    LocalHamiltonian::from_terms(&terms, 0.0)
}

/// Bond-distance lookup tolerance in Å.
pub const BOND_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct H2CoefficientTable {
    rows: Vec<(f64, [f64; 6])>,
}

const BUNDLED_TABLE: &str = include_str!("../../data/h2_coefficients.csv");
pub const H2_TABLE_FILE: &str = "h2_coefficients.csv";

impl H2CoefficientTable {
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let expected = ["bond_angstrom", "c0", "c1", "c2", "c3", "c4", "c5"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::Parse { line: 1, msg: format!("expected header {}", expected.join(",")) });
        }
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let vals = rec
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: i + 2, msg: e.to_string() })?;
            if vals.len() != 7 {
                return Err(Error::Parse { line: i + 2, msg: "expected 7 fields".into() });
            }
            rows.push((vals[0], [vals[1], vals[2], vals[3], vals[4], vals[5], vals[6]]));
        }
        Ok(Self { rows })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    /// The table shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_reader(BUNDLED_TABLE.as_bytes()).expect("bundled H2 table parses")
    }

    /// `$QUIPI_DATA_DIR/h2_coefficients.csv` if the variable is set, else the bundled table.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os("QUIPI_DATA_DIR") {
            Some(dir) => Self::from_path(&PathBuf::from(dir).join(H2_TABLE_FILE)),
            None => Ok(Self::bundled()),
        }
    }

    pub fn distances(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.0).collect()
    }

    pub fn lookup(&self, bond: f64) -> Result<[f64; 6]> {
        if let Some(r) = self.rows.iter().find(|r| (r.0 - bond).abs() <= BOND_TOLERANCE) {
            return Ok(r.1);
        }
        let mut near: Vec<f64> = self.distances();
        near.sort_by(|a, b| (a - bond).abs().total_cmp(&(b - bond).abs()));
        let nearest = near.iter().take(2).map(|d| d.to_string()).collect::<Vec<_>>().join(", ");
        Err(Error::MissingBond { requested: bond, nearest })
    }
}

/// `(|01> - |10>)/√2`.
pub fn h2_initial_state() -> Vec<C64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    vec![c(0.0, 0.0), c(r, 0.0), c(-r, 0.0), c(0.0, 0.0)]
}

/// `Z^{⊗n} H^{⊗n} |0...0>`, i.e. `|−⟩^{⊗n}`.
pub fn tfim_initial_state(n: usize) -> Vec<C64> {
    let amp = (1u64 << n) as f64;
    (0..1usize << n)
        .map(|x| c(if x.count_ones() % 2 == 0 { 1.0 } else { -1.0 } / amp.sqrt(), 0.0))
        .collect()
}

/// `|+⟩^{⊗n}` below the transition (`h < 1`), `|0...0⟩` from `h = 1` on.
pub fn kitaev_initial_state(n: usize, field: f64) -> Vec<C64> {
    let d = 1usize << n;
    if field < 1.0 {
        vec![c(1.0 / (d as f64).sqrt(), 0.0); d]
    } else {
        let mut v = vec![c(0.0, 0.0); d];
        v[0] = c(1.0, 0.0);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{diagonalize, expectation};
    use crate::linalg::hermiticity_residual;

    #[test]
    fn term_counts() {
        for n in 1..=5 {
            assert_eq!(tfim_uniform(n).unwrap().term_count(), n + n * (n - 1) / 2);
        }
        for n in 2..=5 {
            assert_eq!(build_kitaev_ring(n, 1.0, 0.3).unwrap().term_count(), 2 * n);
        }
        assert!(build_kitaev_ring(1, 1.0, 1.0).is_err());
        assert!(build_tfim(3, &[1.0, 1.0], &DMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn tfim_single_site() {
        let h = build_tfim(1, &[1.0], &DMatrix::zeros(1, 1)).unwrap();
        let s = diagonalize(&h).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-14 && (s.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tfim_uniform_spectrum() {
        // closed form for the all-to-all N=3 model
        let s = diagonalize(&tfim_uniform(3).unwrap()).unwrap();
        let r = 2.0 * 3f64.sqrt();
        let want = [-r, -2.0, -2.0, 0.0, 0.0, 0.0, r, 4.0];
        for (a, b) in s.eigenvalues.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn kitaev_decoupled() {
        let h = build_kitaev_ring(3, 0.0, 0.7).unwrap();
        assert!((diagonalize(&h).unwrap().ground_energy() + 2.1).abs() < 1e-12);
    }

    #[test]
    fn h2_table_and_lookup() {
        let t = H2CoefficientTable::bundled();
        let h = build_h2(0.75, &t).unwrap();
        assert!(hermiticity_residual(&h.matrix().unwrap()) < 1e-12);
        let s = diagonalize(&h).unwrap();
        assert!((s.eigenvalues[0] + 1.15).abs() < 0.01);
        assert!((s.eigenvalues[1] - 0.45).abs() < 0.01);
        match build_h2(0.7512, &t) {
            Err(Error::MissingBond { nearest, .. }) => assert!(nearest.contains("0.75")),
            other => panic!("{other:?}"),
        }
        assert!(build_h2(0.75 + 5e-7, &t).is_ok());
    }

    #[test]
    fn h2_identity_table() {
        let t = H2CoefficientTable::from_reader("bond_angstrom,c0,c1,c2,c3,c4,c5\n# c\n1.0,1,0,0,0,0,0\n".as_bytes()).unwrap();
        let s = diagonalize(&build_h2(1.0, &t).unwrap()).unwrap();
        assert!(s.eigenvalues.iter().all(|&e| (e - 1.0).abs() < 1e-14));
    }

    #[test]
    fn initial_states_normalized() {
        let h = tfim_uniform(3).unwrap();
        for v in [tfim_initial_state(3), kitaev_initial_state(3, 0.5), kitaev_initial_state(3, 1.5)] {
            assert!(expectation(&h, &v).is_ok());
        }
        // |−⟩ is the -1 eigenstate of X
        let x = LocalHamiltonian::from_terms(&[(1.0, "X")], 0.0).unwrap();
        assert!((expectation(&x, &tfim_initial_state(1)).unwrap() + 1.0).abs() < 1e-14);
    }
}
