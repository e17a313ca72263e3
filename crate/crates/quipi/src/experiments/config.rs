use crate::error::{Error, Result};
use crate::quipi::{Backend, ResourceModel};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Solver settings shared by the H2 curve, ratio, squeeze and Kitaev studies.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub s: f64,
    pub cut: usize,
    pub iterations: usize,
    pub trotter_n: usize,
    pub backend: Backend,
    pub resource: ResourceModel,
    pub fock_cut: usize,
    pub grid_points: usize,
    pub shots: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct H2Settings {
    /// Empty means every distance in the coefficient table.
    pub bonds: Vec<f64>,
    /// Target `E0'/E1'` used to pick the shift at each distance.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioSettings {
    pub bond: f64,
    pub shifts: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeSettings {
    pub bond: f64,
    pub shift: f64,
    pub s_values: Vec<f64>,
    /// Squeezing factors for the per-eigenstate success-probability table.
    pub probability_s: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutSettings {
    pub bond: f64,
    pub shift: f64,
    pub s: f64,
    pub cuts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSettings {
    pub bond: f64,
    pub shift: f64,
    pub s: f64,
    pub cut: usize,
    pub fock_cut: usize,
    pub trotter_n: usize,
    pub iterations: usize,
    pub p_loss: Vec<f64>,
    pub p_depol: f64,
    pub zne_scales: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrotterSettings {
    pub qubits: usize,
    pub s: f64,
    pub cut: usize,
    pub fock_cut: usize,
    pub iterations: usize,
    pub n_values: Vec<usize>,
    /// Seed for the random-coupling TFIM instance.
    pub model_seed: u64,
    /// Shift places the ground energy at this value.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KitaevSettings {
    pub sites: usize,
    pub hopping: f64,
    pub fields: Vec<f64>,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridSettings {
    pub bond: f64,
    pub shift: f64,
    pub delta_p: f64,
    pub phi_values: Vec<f64>,
    pub k_max: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResourceSettings {
    pub s: f64,
    pub cuts: Vec<usize>,
    pub p_min: f64,
    pub p_max: f64,
    pub p_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSettings {
    pub s: f64,
    pub cuts: Vec<usize>,
    pub e_min: f64,
    pub e_max: f64,
    pub e_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// 0 uses every available core.
    pub threads: usize,
    pub out: PathBuf,
    /// Directory holding `h2_coefficients.csv`; the bundled table is used when unset.
    pub data_dir: Option<PathBuf>,
    pub solver: SolverSettings,
    pub h2: H2Settings,
    pub ratio: RatioSettings,
    pub squeeze: SqueezeSettings,
    pub cut: CutSettings,
    pub noise: NoiseSettings,
    pub trotter: TrotterSettings,
    pub kitaev: KitaevSettings,
    pub hybrid: HybridSettings,
    pub resource: ResourceSettings,
    pub weight: WeightSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            threads: 1,
            out: PathBuf::from("results"),
            data_dir: None,
            solver: SolverSettings {
                s: 10.0,
                cut: 20,
                iterations: 3,
                trotter_n: 0,
                backend: Backend::Grid,
                resource: ResourceModel::Ideal,
                fock_cut: 60,
                grid_points: 4096,
                shots: 0,
            },
            h2: H2Settings { bonds: Vec::new(), ratio: 0.125 },
            ratio: RatioSettings { bond: 0.75, shifts: vec![2.74, 1.68, 1.37] },
            squeeze: SqueezeSettings { bond: 0.75, shift: 1.37, s_values: vec![6.0, 8.0, 10.0], probability_s: vec![5.0, 10.0] },
            cut: CutSettings { bond: 0.75, shift: 1.68, s: 5.0, cuts: vec![4, 8, 12, 20] },
            noise: NoiseSettings {
                bond: 0.75,
                shift: 1.37,
                s: 10.0,
                cut: 20,
                fock_cut: 30,
                trotter_n: 32,
                iterations: 3,
                p_loss: vec![0.0, 1e-4, 1e-3],
                p_depol: 1e-4,
                zne_scales: vec![1.0, 2.0, 3.0],
            },
            trotter: TrotterSettings {
                qubits: 3,
                s: 2.0,
                cut: 20,
                fock_cut: 40,
                iterations: 3,
                n_values: vec![2, 4, 8, 16, 32],
                model_seed: 42,
                margin: 0.5,
            },
            kitaev: KitaevSettings {
                sites: 3,
                hopping: 1.0,
                fields: (1..=10).map(|i| 0.2 * i as f64).collect(),
                margin: 0.5,
            },
            hybrid: HybridSettings { bond: 0.75, shift: 1.37, delta_p: 0.1, phi_values: vec![2.5, 5.0, 10.0, 20.0], k_max: 10 },
            resource: ResourceSettings { s: 5.0, cuts: vec![4, 8, 12, 20], p_min: -10.0, p_max: 20.0, p_points: 301 },
            weight: WeightSettings { s: 5.0, cuts: vec![4, 8, 12, 20], e_min: 0.25, e_max: 4.0, e_points: 16 },
        }
    }
}

fn bad(section: &str, key: &str, value: &str) -> Error {
    Error::InvalidArgument(format!("bad value {value:?} for [{section}] {key}"))
}

fn num<T: std::str::FromStr>(section: &str, key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| bad(section, key, value))
}

fn list<T: std::str::FromStr>(section: &str, key: &str, value: &str) -> Result<Vec<T>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| num(section, key, v)).collect()
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::Grid => "grid",
        Backend::Fock => "fock",
    }
}

fn resource_name(r: ResourceModel) -> &'static str {
    match r {
        ResourceModel::Ideal => "ideal",
        ResourceModel::Truncated => "truncated",
    }
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_ini_str(&text)
    }

    /// Starts from the defaults and applies every key in the file. Unknown
    /// sections or keys are errors.
    pub fn from_ini_str(text: &str) -> Result<Self> {
        let ini = ini::Ini::load_from_str(text).map_err(|e| Error::Parse { line: e.line, msg: e.msg.to_string() })?;
        let mut cfg = Self::default();
        for (section, props) in ini.iter() {
            let section = section.unwrap_or("general");
            for (key, value) in props.iter() {
                cfg.set(section, key, value)?;
            }
        }
        Ok(cfg)
    }

    pub fn set(&mut self, section: &str, key: &str, v: &str) -> Result<()> {
        let s = section;
        match (section, key) {
            ("general", "seed") => self.seed = num(s, key, v)?,
            ("general", "threads") => self.threads = num(s, key, v)?,
            ("general", "out") => self.out = PathBuf::from(v.trim()),
            ("general", "data_dir") => self.data_dir = Some(PathBuf::from(v.trim())),

            ("solver", "s") => self.solver.s = num(s, key, v)?,
            ("solver", "cut") => self.solver.cut = num(s, key, v)?,
            ("solver", "iterations") => self.solver.iterations = num(s, key, v)?,
            ("solver", "trotter_n") => self.solver.trotter_n = num(s, key, v)?,
            ("solver", "backend") => {
                self.solver.backend = match v.trim() {
                    "grid" => Backend::Grid,
                    "fock" => Backend::Fock,
                    _ => return Err(bad(s, key, v)),
                }
            }
            ("solver", "resource") => {
                self.solver.resource = match v.trim() {
                    "ideal" => ResourceModel::Ideal,
                    "truncated" => ResourceModel::Truncated,
                    _ => return Err(bad(s, key, v)),
                }
            }
            ("solver", "fock_cut") => self.solver.fock_cut = num(s, key, v)?,
            ("solver", "grid_points") => self.solver.grid_points = num(s, key, v)?,
            ("solver", "shots") => self.solver.shots = num(s, key, v)?,

            ("h2", "bonds") => self.h2.bonds = list(s, key, v)?,
            ("h2", "ratio") => self.h2.ratio = num(s, key, v)?,

            ("ratio", "bond") => self.ratio.bond = num(s, key, v)?,
            ("ratio", "shifts") => self.ratio.shifts = list(s, key, v)?,

            ("squeeze", "bond") => self.squeeze.bond = num(s, key, v)?,
            ("squeeze", "shift") => self.squeeze.shift = num(s, key, v)?,
            ("squeeze", "s_values") => self.squeeze.s_values = list(s, key, v)?,
            ("squeeze", "probability_s") => self.squeeze.probability_s = list(s, key, v)?,

            ("cut", "bond") => self.cut.bond = num(s, key, v)?,
            ("cut", "shift") => self.cut.shift = num(s, key, v)?,
            ("cut", "s") => self.cut.s = num(s, key, v)?,
            ("cut", "cuts") => self.cut.cuts = list(s, key, v)?,

            ("noise", "bond") => self.noise.bond = num(s, key, v)?,
            ("noise", "shift") => self.noise.shift = num(s, key, v)?,
            ("noise", "s") => self.noise.s = num(s, key, v)?,
            ("noise", "cut") => self.noise.cut = num(s, key, v)?,
            ("noise", "fock_cut") => self.noise.fock_cut = num(s, key, v)?,
            ("noise", "trotter_n") => self.noise.trotter_n = num(s, key, v)?,
            ("noise", "iterations") => self.noise.iterations = num(s, key, v)?,
            ("noise", "p_loss") => self.noise.p_loss = list(s, key, v)?,
            ("noise", "p_depol") => self.noise.p_depol = num(s, key, v)?,
            ("noise", "zne_scales") => self.noise.zne_scales = list(s, key, v)?,

            ("trotter", "qubits") => self.trotter.qubits = num(s, key, v)?,
            ("trotter", "s") => self.trotter.s = num(s, key, v)?,
            ("trotter", "cut") => self.trotter.cut = num(s, key, v)?,
            ("trotter", "fock_cut") => self.trotter.fock_cut = num(s, key, v)?,
            ("trotter", "iterations") => self.trotter.iterations = num(s, key, v)?,
            ("trotter", "n_values") => self.trotter.n_values = list(s, key, v)?,
            ("trotter", "model_seed") => self.trotter.model_seed = num(s, key, v)?,
            ("trotter", "margin") => self.trotter.margin = num(s, key, v)?,

            ("kitaev", "sites") => self.kitaev.sites = num(s, key, v)?,
            ("kitaev", "hopping") => self.kitaev.hopping = num(s, key, v)?,
            ("kitaev", "fields") => self.kitaev.fields = list(s, key, v)?,
            ("kitaev", "margin") => self.kitaev.margin = num(s, key, v)?,

            ("hybrid", "bond") => self.hybrid.bond = num(s, key, v)?,
            ("hybrid", "shift") => self.hybrid.shift = num(s, key, v)?,
            ("hybrid", "delta_p") => self.hybrid.delta_p = num(s, key, v)?,
            ("hybrid", "phi_values") => self.hybrid.phi_values = list(s, key, v)?,
            ("hybrid", "k_max") => self.hybrid.k_max = num(s, key, v)?,

            ("resource", "s") => self.resource.s = num(s, key, v)?,
            ("resource", "cuts") => self.resource.cuts = list(s, key, v)?,
            ("resource", "p_min") => self.resource.p_min = num(s, key, v)?,
            ("resource", "p_max") => self.resource.p_max = num(s, key, v)?,
            ("resource", "p_points") => self.resource.p_points = num(s, key, v)?,

            ("weight", "s") => self.weight.s = num(s, key, v)?,
            ("weight", "cuts") => self.weight.cuts = list(s, key, v)?,
            ("weight", "e_min") => self.weight.e_min = num(s, key, v)?,
            ("weight", "e_max") => self.weight.e_max = num(s, key, v)?,
            ("weight", "e_points") => self.weight.e_points = num(s, key, v)?,

            _ => return Err(Error::InvalidArgument(format!("unknown config key [{section}] {key}"))),
        }
        Ok(())
    }

    /// Full configuration in the same format `from_ini_str` reads.
    pub fn to_ini(&self) -> String {
        let mut o = String::new();
        let _ = writeln!(o, "[general]\nseed = {}\nthreads = {}\nout = {}", self.seed, self.threads, self.out.display());
        if let Some(d) = &self.data_dir {
            let _ = writeln!(o, "data_dir = {}", d.display());
        }
        let v = &self.solver;
        let _ = writeln!(
            o,
            "\n[solver]\ns = {}\ncut = {}\niterations = {}\ntrotter_n = {}\nbackend = {}\nresource = {}\nfock_cut = {}\ngrid_points = {}\nshots = {}",
            v.s, v.cut, v.iterations, v.trotter_n, backend_name(v.backend), resource_name(v.resource), v.fock_cut, v.grid_points, v.shots
        );
        let _ = writeln!(o, "\n[h2]\nbonds = {}\nratio = {}", join(&self.h2.bonds), self.h2.ratio);
        let _ = writeln!(o, "\n[ratio]\nbond = {}\nshifts = {}", self.ratio.bond, join(&self.ratio.shifts));
        let q = &self.squeeze;
        let _ = writeln!(
            o,
            "\n[squeeze]\nbond = {}\nshift = {}\ns_values = {}\nprobability_s = {}",
            q.bond, q.shift, join(&q.s_values), join(&q.probability_s)
        );
        let c = &self.cut;
        let _ = writeln!(o, "\n[cut]\nbond = {}\nshift = {}\ns = {}\ncuts = {}", c.bond, c.shift, c.s, join(&c.cuts));
        let n = &self.noise;
        let _ = writeln!(
            o,
            "\n[noise]\nbond = {}\nshift = {}\ns = {}\ncut = {}\nfock_cut = {}\ntrotter_n = {}\niterations = {}\np_loss = {}\np_depol = {}\nzne_scales = {}",
            n.bond, n.shift, n.s, n.cut, n.fock_cut, n.trotter_n, n.iterations, join(&n.p_loss), n.p_depol, join(&n.zne_scales)
        );
        let t = &self.trotter;
        let _ = writeln!(
            o,
            "\n[trotter]\nqubits = {}\ns = {}\ncut = {}\nfock_cut = {}\niterations = {}\nn_values = {}\nmodel_seed = {}\nmargin = {}",
            t.qubits, t.s, t.cut, t.fock_cut, t.iterations, join(&t.n_values), t.model_seed, t.margin
        );
        let k = &self.kitaev;
        let _ = writeln!(o, "\n[kitaev]\nsites = {}\nhopping = {}\nfields = {}\nmargin = {}", k.sites, k.hopping, join(&k.fields), k.margin);
        let h = &self.hybrid;
        let _ = writeln!(
            o,
            "\n[hybrid]\nbond = {}\nshift = {}\ndelta_p = {}\nphi_values = {}\nk_max = {}",
            h.bond, h.shift, h.delta_p, join(&h.phi_values), h.k_max
        );
        let r = &self.resource;
        let _ = writeln!(o, "\n[resource]\ns = {}\ncuts = {}\np_min = {}\np_max = {}\np_points = {}", r.s, join(&r.cuts), r.p_min, r.p_max, r.p_points);
        let w = &self.weight;
        let _ = write!(o, "\n[weight]\ns = {}\ncuts = {}\ne_min = {}\ne_max = {}\ne_points = {}\n", w.s, join(&w.cuts), w.e_min, w.e_max, w.e_points);
        o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_text() {
        let mut cfg = ExperimentConfig::default();
        cfg.seed = 17;
        cfg.solver.backend = Backend::Fock;
        cfg.h2.bonds = vec![0.5, 0.75];
        cfg.noise.p_loss = vec![1e-3];
        cfg.data_dir = Some("/tmp/x".into());
        let back = ExperimentConfig::from_ini_str(&cfg.to_ini()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(ExperimentConfig::from_ini_str("[solver]\nsqueeze = 3\n").is_err());
        assert!(ExperimentConfig::from_ini_str("[solver]\ns = fast\n").is_err());
        assert!(ExperimentConfig::from_ini_str("[nope]\nx = 1\n").is_err());
        let c = ExperimentConfig::from_ini_str("seed = 5\n[cut]\ncuts = 4, 6\n").unwrap();
        assert_eq!(c.seed, 5);
        assert_eq!(c.cut.cuts, vec![4, 6]);
    }
}
