use super::config::{ExperimentConfig, SolverSettings};
use super::table::{Cell, Table};
use crate::error::{Error, Result};
use crate::hamiltonians::{
    build_h2, build_kitaev_ring, diagonalize, h2_initial_state, kitaev_initial_state, tfim_initial_state, tfim_random,
    tfim_uniform, H2CoefficientTable, LocalHamiltonian, Spectrum,
};
use crate::hilbert::{Grid, DEFAULT_GRID_POINTS, GRID_EXTENT};
use crate::hybrid::{evolution_time_budget, hybrid_sweep, HybridIPIConfig, HybridSweepRow};
use crate::linalg::{inner, C64};
use crate::noise::{noisy_quipi, zne_extrapolate, DepolarizingChannel, LossChannel};
use crate::quipi::{oracle_inverse_iterate, quipi_solve, Backend, IterationReport, Pipeline, QuipiConfig, ResourceModel};
use crate::qumode::{analytic_amplitude, build_resource, momentum_wavefunction, prepare_by_displacements, ProjectionKernel};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Configuration plus the H2 coefficient table every H2 study reads.
#[derive(Debug, Clone)]
pub struct Context {
    pub config: ExperimentConfig,
    pub table: H2CoefficientTable,
}

impl Context {
    /// Table lookup order: `data_dir` from the config, then `QUIPI_DATA_DIR`, then the bundled file.
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        let table = match &config.data_dir {
            Some(dir) => H2CoefficientTable::from_path(&dir.join(crate::hamiltonians::H2_TABLE_FILE))?,
            None => H2CoefficientTable::from_env()?,
        };
        Ok(Self { config, table })
    }

    pub fn with_table(config: ExperimentConfig, table: H2CoefficientTable) -> Self {
        Self { config, table }
    }

    fn h2(&self, bond: f64, shift: f64) -> Result<LocalHamiltonian> {
        Ok(build_h2(bond, &self.table)?.with_shift(shift))
    }
}

/// Order-preserving parallel map; the first error wins.
fn par_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> Result<U> + Sync,
{
    items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()
}

fn solver_config(s: &SolverSettings, init: Vec<C64>, seed: u64) -> QuipiConfig {
    let mut c = QuipiConfig::new(init);
    c.s = s.s;
    c.cut = s.cut;
    c.iterations = s.iterations;
    c.trotter_n = s.trotter_n;
    c.backend = s.backend;
    c.resource = s.resource;
    c.fock_cut = s.fock_cut;
    c.grid_points = s.grid_points;
    c.shots = s.shots;
    c.seed = seed;
    c
}

/// Smallest eigenvalue above the ground level among eigenvectors `b` overlaps.
pub fn first_active_excitation(spec: &Spectrum, b: &[C64]) -> Option<f64> {
    let e0 = spec.ground_energy();
    let coeffs = spec.coefficients(b);
    spec.eigenvalues
        .iter()
        .zip(&coeffs)
        .find(|(e, c)| **e > e0 + 1e-9 && c.norm_sqr() > 1e-12)
        .map(|(e, _)| *e)
}

/// Shift giving `E0'/E1' = ratio`, with `E1` the first excitation `b` overlaps.
pub fn shift_for_ratio(h: &LocalHamiltonian, b: &[C64], ratio: f64) -> Result<f64> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidArgument(format!("target ratio {ratio} outside (0, 1)")));
    }
    let spec = diagonalize(&h.with_shift(0.0))?;
    let e0 = spec.ground_energy();
    let e1 = first_active_excitation(&spec, b)
        .ok_or_else(|| Error::InvalidArgument("initial state overlaps no excited level".into()))?;
    Ok(-e0 + ratio * (e1 - e0) / (1.0 - ratio))
}

const REPORT_COLUMNS: [&str; 6] = ["k", "energy", "energy_error", "success_prob", "cumulative_success", "ground_fidelity"];

fn report_cells(r: &IterationReport) -> Vec<Cell> {
    vec![
        r.k.into(),
        r.energy.into(),
        r.energy_error.unwrap_or(f64::NAN).into(),
        r.success_probability.into(),
        r.cumulative_success.into(),
        r.ground_fidelity.unwrap_or(f64::NAN).into(),
    ]
}

fn report_table(name: &str, prefix: &[&str], rows: &[(Vec<Cell>, IterationReport)]) -> Table {
    let header: Vec<&str> = prefix.iter().copied().chain(REPORT_COLUMNS).collect();
    let mut t = Table::new(name, &header);
    for (cells, r) in rows {
        let mut row = cells.clone();
        row.extend(report_cells(r));
        t.push(row);
    }
    t
}

// ---------------------------------------------------------------- H2 curve

#[derive(Debug, Clone, PartialEq)]
pub struct H2CurveRow {
    pub bond: f64,
    pub shift: f64,
    pub energy: f64,
    pub oracle_energy: f64,
    pub energy_error: f64,
    pub cumulative_success: f64,
}

pub fn h2_curve(ctx: &Context) -> Result<Vec<H2CurveRow>> {
    let cfg = &ctx.config;
    let bonds = if cfg.h2.bonds.is_empty() { ctx.table.distances() } else { cfg.h2.bonds.clone() };
    let missing: Vec<String> = bonds.iter().filter(|b| ctx.table.lookup(**b).is_err()).map(|b| b.to_string()).collect();
    if !missing.is_empty() {
        // report every absent distance at once, with the neighbours of the first
        let first = ctx.table.lookup(bonds.iter().copied().find(|b| ctx.table.lookup(*b).is_err()).unwrap()).unwrap_err();
        return Err(Error::InvalidArgument(format!("coefficient table has no rows for {}: {first}", missing.join(", "))));
    }
    let b = h2_initial_state();
    par_map(&bonds, |i, &bond| {
        let bare = build_h2(bond, &ctx.table)?;
        let shift = shift_for_ratio(&bare, &b, cfg.h2.ratio)?;
        let h = bare.with_shift(shift);
        let out = quipi_solve(&h, &solver_config(&cfg.solver, b.clone(), cfg.seed.wrapping_add(i as u64)))?;
        let last = out.reports.last().expect("at least one iteration");
        let oracle_energy = diagonalize(&bare)?.ground_energy();
        Ok(H2CurveRow {
            bond,
            shift,
            energy: last.energy,
            oracle_energy,
            energy_error: last.energy - oracle_energy,
            cumulative_success: last.cumulative_success,
        })
    })
}

pub fn h2_curve_table(rows: &[H2CurveRow]) -> Table {
    let mut t = Table::new("h2_curve", &["bond_angstrom", "shift", "energy", "oracle_energy", "energy_error", "cumulative_success"]);
    for r in rows {
        t.push(vec![r.bond.into(), r.shift.into(), r.energy.into(), r.oracle_energy.into(), r.energy_error.into(), r.cumulative_success.into()]);
    }
    t
}

// ---------------------------------------------------------------- ratio

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRun {
    pub shift: f64,
    /// `E0'/E1'` with `E1'` the first excitation the initial state overlaps.
    pub ratio: f64,
    pub reports: Vec<IterationReport>,
}

pub fn ratio_study(ctx: &Context) -> Result<Vec<RatioRun>> {
    let cfg = &ctx.config;
    let b = h2_initial_state();
    par_map(&cfg.ratio.shifts, |i, &shift| {
        let h = ctx.h2(cfg.ratio.bond, shift)?;
        let spec = diagonalize(&h)?;
        let e1 = first_active_excitation(&spec, &b).unwrap_or(f64::NAN);
        let out = quipi_solve(&h, &solver_config(&cfg.solver, b.clone(), cfg.seed.wrapping_add(i as u64)))?;
        Ok(RatioRun { shift, ratio: spec.ground_energy() / e1, reports: out.reports })
    })
}

pub fn ratio_table(runs: &[RatioRun]) -> Table {
    let rows: Vec<_> =
        runs.iter().flat_map(|r| r.reports.iter().map(move |rep| (vec![r.shift.into(), r.ratio.into()], rep.clone()))).collect();
    report_table("ratio_study", &["shift", "ratio"], &rows)
}

// ---------------------------------------------------------------- squeeze

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeRun {
    pub s: f64,
    pub reports: Vec<IterationReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenProbability {
    pub s: f64,
    pub index: usize,
    /// Shifted eigenvalue.
    pub eigenvalue: f64,
    pub success_probability: f64,
    pub analytic_probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeStudy {
    pub runs: Vec<SqueezeRun>,
    pub probabilities: Vec<EigenProbability>,
}

pub fn squeeze_study(ctx: &Context) -> Result<SqueezeStudy> {
    let cfg = &ctx.config;
    let q = &cfg.squeeze;
    let h = ctx.h2(q.bond, q.shift)?;
    let b = h2_initial_state();
    let runs = par_map(&q.s_values, |i, &s| {
        let mut c = solver_config(&cfg.solver, b.clone(), cfg.seed.wrapping_add(i as u64));
        c.s = s;
        Ok(SqueezeRun { s, reports: quipi_solve(&h, &c)?.reports })
    })?;
    let spec = diagonalize(&h)?;
    let points: Vec<(f64, usize)> =
        q.probability_s.iter().flat_map(|&s| (0..spec.eigenvalues.len()).map(move |n| (s, n))).collect();
    let probabilities = par_map(&points, |_, &(s, n)| {
        let mut c = solver_config(&cfg.solver, spec.vector(n), 0);
        c.s = s;
        c.iterations = 1;
        let (_, p) = Pipeline::new(&h, &c)?.round(&h, &spec.vector(n))?;
        let e = spec.eigenvalues[n];
        Ok(EigenProbability {
            s,
            index: n,
            eigenvalue: e,
            success_probability: p,
            analytic_probability: analytic_amplitude(e, s).norm_sqr(),
        })
    })?;
    Ok(SqueezeStudy { runs, probabilities })
}

pub fn squeeze_tables(st: &SqueezeStudy) -> Vec<Table> {
    let rows: Vec<_> = st.runs.iter().flat_map(|r| r.reports.iter().map(move |rep| (vec![r.s.into()], rep.clone()))).collect();
    let mut p = Table::new("squeeze_probability", &["s", "eigen_index", "eigenvalue", "success_prob", "analytic_prob"]);
    for e in &st.probabilities {
        p.push(vec![e.s.into(), e.index.into(), e.eigenvalue.into(), e.success_probability.into(), e.analytic_probability.into()]);
    }
    vec![report_table("squeeze_study", &["s"], &rows), p]
}

// ---------------------------------------------------------------- cut

#[derive(Debug, Clone, PartialEq)]
pub struct CutRun {
    pub cut: usize,
    pub reports: Vec<IterationReport>,
}

/// Grid backend with the `cut`-truncated resource.
pub fn cut_study(ctx: &Context) -> Result<Vec<CutRun>> {
    let cfg = &ctx.config;
    let c = &cfg.cut;
    let h = ctx.h2(c.bond, c.shift)?;
    let b = h2_initial_state();
    par_map(&c.cuts, |i, &cut| {
        let mut q = solver_config(&cfg.solver, b.clone(), cfg.seed.wrapping_add(i as u64));
        q.s = c.s;
        q.cut = cut;
        q.backend = Backend::Grid;
        q.resource = ResourceModel::Truncated;
        q.trotter_n = 0;
        Ok(CutRun { cut, reports: quipi_solve(&h, &q)?.reports })
    })
}

pub fn cut_table(runs: &[CutRun]) -> Table {
    let rows: Vec<_> = runs.iter().flat_map(|r| r.reports.iter().map(move |rep| (vec![r.cut.into()], rep.clone()))).collect();
    report_table("cut_study", &["cut"], &rows)
}

// ---------------------------------------------------------------- additional weight

#[derive(Debug, Clone, PartialEq)]
pub struct WeightRow {
    /// `None` for the untruncated resource.
    pub cut: Option<usize>,
    pub energy: f64,
    /// `s √(π/2) |f(E)|`, which tends to `1/E` for large `Es`.
    pub weight: f64,
    pub exact_inverse: f64,
}

fn energy_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..points).map(|i| min + (max - min) * i as f64 / (points - 1) as f64).collect(),
    }
}

/// Single-round amplitude `∫ K(p) e^{-iEp} R_cut(p) dp` for each energy, on a symmetric grid.
pub fn truncated_amplitudes(s: f64, cut: usize, energies: &[f64]) -> Result<Vec<C64>> {
    let grid = Grid::symmetric(s, DEFAULT_GRID_POINTS)?;
    let r = build_resource(s, cut)?;
    let kernel = ProjectionKernel::grid(s);
    let ps = grid.momenta();
    let kr: Vec<C64> = ps
        .iter()
        .zip(grid.weights())
        .map(|(&p, &w)| momentum_wavefunction(&r.fock_coefficients, p) * (kernel.value(p) * w))
        .collect();
    Ok(energies.iter().map(|&e| ps.iter().zip(&kr).map(|(&p, &v)| v * C64::from_polar(1.0, -e * p)).sum()).collect())
}

pub fn additional_weight(ctx: &Context) -> Result<Vec<WeightRow>> {
    let w = &ctx.config.weight;
    let es = energy_grid(w.e_min, w.e_max, w.e_points);
    let scale = w.s * (PI / 2.0).sqrt();
    let mut rows: Vec<WeightRow> = es
        .iter()
        .map(|&e| WeightRow { cut: None, energy: e, weight: scale * analytic_amplitude(e, w.s).norm(), exact_inverse: 1.0 / e })
        .collect();
    let per_cut = par_map(&w.cuts, |_, &cut| truncated_amplitudes(w.s, cut, &es))?;
    for (&cut, amps) in w.cuts.iter().zip(per_cut) {
        rows.extend(
            es.iter().zip(amps).map(|(&e, a)| WeightRow { cut: Some(cut), energy: e, weight: scale * a.norm(), exact_inverse: 1.0 / e }),
        );
    }
    Ok(rows)
}

pub fn weight_table(rows: &[WeightRow]) -> Table {
    let mut t = Table::new("additional_weight", &["cut", "energy", "weight", "exact_inverse"]);
    for r in rows {
        let cut = match r.cut {
            Some(c) => Cell::from(c),
            None => Cell::from("ideal"),
        };
        t.push(vec![cut, r.energy.into(), r.weight.into(), r.exact_inverse.into()]);
    }
    t
}

// ---------------------------------------------------------------- noise

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRow {
    pub k: usize,
    pub p_loss: f64,
    pub p_depol: f64,
    /// 0 marks the extrapolated estimate.
    pub zne_scale: f64,
    pub energy: f64,
    pub energy_error: f64,
}

pub fn noise_study(ctx: &Context) -> Result<Vec<NoiseRow>> {
    let n = &ctx.config.noise;
    let h = ctx.h2(n.bond, n.shift)?;
    let e0 = diagonalize(&h)?.ground_energy() - h.shift();
    let mut q = QuipiConfig::new(h2_initial_state());
    q.s = n.s;
    q.cut = n.cut;
    q.fock_cut = n.fock_cut;
    q.backend = Backend::Fock;
    q.trotter_n = n.trotter_n;
    q.iterations = n.iterations;
    // (p_loss, p_depol, scale)
    let mut jobs: Vec<(f64, f64, f64)> = n.p_loss.iter().map(|&p| (p, 0.0, 1.0)).collect();
    if n.p_depol > 0.0 {
        jobs.extend(n.zne_scales.iter().map(|&sc| (0.0, n.p_depol, sc)));
    }
    let runs = par_map(&jobs, |_, &(pl, pd, sc)| {
        let loss = if pl > 0.0 { Some(LossChannel::new(pl * sc)?) } else { None };
        let dep = if pd > 0.0 { Some(DepolarizingChannel::new(pd * sc)?) } else { None };
        noisy_quipi(&h, &q, loss.as_ref(), dep.as_ref())
    })?;
    let mut rows = Vec::new();
    for (&(pl, pd, sc), reps) in jobs.iter().zip(&runs) {
        for r in reps {
            rows.push(NoiseRow { k: r.k, p_loss: pl, p_depol: pd, zne_scale: sc, energy: r.energy, energy_error: r.energy_error });
        }
    }
    let zne: Vec<&Vec<_>> = jobs.iter().zip(&runs).filter(|(j, _)| j.1 > 0.0).map(|(_, r)| r).collect();
    if zne.len() >= 2 {
        for k in 0..n.iterations {
            let pts: Vec<(f64, f64)> = n.zne_scales.iter().copied().zip(zne.iter().map(|r| r[k].energy)).collect();
            let e = zne_extrapolate(&pts)?;
            rows.push(NoiseRow { k: k + 1, p_loss: 0.0, p_depol: n.p_depol, zne_scale: 0.0, energy: e, energy_error: e - e0 });
        }
    }
    Ok(rows)
}

pub fn noise_table(rows: &[NoiseRow]) -> Table {
    let mut t = Table::new("noise_study", &["k", "p_loss", "p_depol", "zne_scale", "energy", "energy_error"]);
    for r in rows {
        t.push(vec![r.k.into(), r.p_loss.into(), r.p_depol.into(), r.zne_scale.into(), r.energy.into(), r.energy_error.into()]);
    }
    t
}

// ---------------------------------------------------------------- Trotter

#[derive(Debug, Clone, PartialEq)]
pub struct TrotterRow {
    pub model: String,
    pub n: usize,
    pub energy: f64,
    /// Same run with exact coupled evolution.
    pub reference_energy: f64,
    pub energy_error: f64,
}

pub fn trotter_models(ctx: &Context) -> Result<Vec<(String, LocalHamiltonian)>> {
    let t = &ctx.config.trotter;
    let mut out = Vec::new();
    for (name, h) in [("tfim_uniform", tfim_uniform(t.qubits)?), ("tfim_random", tfim_random(t.qubits, t.model_seed)?)] {
        let e0 = diagonalize(&h)?.ground_energy();
        out.push((name.to_string(), h.with_shift(-e0 + t.margin)));
    }
    Ok(out)
}

pub fn trotter_study(ctx: &Context) -> Result<Vec<TrotterRow>> {
    let t = &ctx.config.trotter;
    let models = trotter_models(ctx)?;
    let base = |h: &LocalHamiltonian, n: usize| -> Result<f64> {
        let mut q = QuipiConfig::new(tfim_initial_state(h.qubit_count()));
        q.s = t.s;
        q.cut = t.cut;
        q.fock_cut = t.fock_cut;
        q.backend = Backend::Fock;
        q.iterations = t.iterations;
        q.trotter_n = n;
        Ok(quipi_solve(h, &q)?.reports.last().expect("iterations").energy)
    };
    let jobs: Vec<(usize, usize)> =
        (0..models.len()).flat_map(|m| std::iter::once(0).chain(t.n_values.iter().copied()).map(move |n| (m, n))).collect();
    let energies = par_map(&jobs, |_, &(m, n)| base(&models[m].1, n))?;
    let mut rows = Vec::new();
    for (m, (name, _)) in models.iter().enumerate() {
        let reference = jobs.iter().zip(&energies).find(|(j, _)| j.0 == m && j.1 == 0).map(|(_, e)| *e).expect("reference run");
        for (&(jm, n), &e) in jobs.iter().zip(&energies) {
            if jm == m && n > 0 {
                rows.push(TrotterRow { model: name.clone(), n, energy: e, reference_energy: reference, energy_error: (e - reference).abs() });
            }
        }
    }
    Ok(rows)
}

pub fn trotter_table(rows: &[TrotterRow]) -> Table {
    let mut t = Table::new("trotter_study", &["model", "n", "energy", "reference_energy", "energy_error"]);
    for r in rows {
        t.push(vec![r.model.as_str().into(), r.n.into(), r.energy.into(), r.reference_energy.into(), r.energy_error.into()]);
    }
    t
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

// ---------------------------------------------------------------- Kitaev

#[derive(Debug, Clone, PartialEq)]
pub struct KitaevRow {
    pub field: f64,
    pub energy: f64,
    pub oracle_ground: f64,
    pub oracle_first_excited: f64,
    pub energy_error: f64,
    pub cumulative_success: f64,
}

pub fn kitaev_sweep(ctx: &Context) -> Result<Vec<KitaevRow>> {
    let cfg = &ctx.config;
    let k = &cfg.kitaev;
    par_map(&k.fields, |i, &field| {
        let bare = build_kitaev_ring(k.sites, k.hopping, field)?;
        let spec = diagonalize(&bare)?;
        let e0 = spec.ground_energy();
        let e1 = spec.eigenvalues.get(1).copied().unwrap_or(f64::NAN);
        let h = bare.with_shift(-e0 + k.margin);
        let init = kitaev_initial_state(k.sites, field);
        let out = quipi_solve(&h, &solver_config(&cfg.solver, init, cfg.seed.wrapping_add(i as u64)))?;
        let last = out.reports.last().expect("iterations");
        Ok(KitaevRow {
            field,
            energy: last.energy,
            oracle_ground: e0,
            oracle_first_excited: e1,
            energy_error: last.energy - e0,
            cumulative_success: last.cumulative_success,
        })
    })
}

pub fn kitaev_table(rows: &[KitaevRow]) -> Table {
    let mut t = Table::new("kitaev_sweep", &["h", "energy", "oracle_ground", "oracle_first_excited", "energy_error", "cumulative_success"]);
    for r in rows {
        t.push(vec![
            r.field.into(),
            r.energy.into(),
            r.oracle_ground.into(),
            r.oracle_first_excited.into(),
            r.energy_error.into(),
            r.cumulative_success.into(),
        ]);
    }
    t
}

// ---------------------------------------------------------------- hybrid

#[derive(Debug, Clone, PartialEq)]
pub struct IdealRow {
    pub k: u32,
    pub energy: f64,
    pub energy_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridStudy {
    pub sweep: Vec<HybridSweepRow>,
    pub ideal: Vec<IdealRow>,
}

pub fn hybrid_compare(ctx: &Context) -> Result<HybridStudy> {
    let y = &ctx.config.hybrid;
    let h = ctx.h2(y.bond, y.shift)?;
    let b = h2_initial_state();
    let e0 = diagonalize(&h)?.ground_energy() - h.shift();
    let sweeps = par_map(&y.phi_values, |_, &phi| hybrid_sweep(&h, &b, y.delta_p, &[phi], y.k_max))?;
    let mut ideal = Vec::new();
    for k in 1..=y.k_max {
        let v = oracle_inverse_iterate(&h, &b, k)?;
        let energy = inner(&v, &h.apply(&v)).re - h.shift();
        ideal.push(IdealRow { k, energy, energy_error: (energy - e0).abs() });
    }
    Ok(HybridStudy { sweep: sweeps.into_iter().flatten().collect(), ideal })
}

pub fn hybrid_tables(st: &HybridStudy, cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let mut s = Table::new("hybrid_sweep", &["k", "delta_p", "m_j", "phi_max", "energy", "energy_error", "max_evolution_time"]);
    for r in &st.sweep {
        s.push(vec![
            r.k.into(),
            r.delta_p.into(),
            r.m_j.into(),
            r.phi_max.into(),
            r.energy.into(),
            r.energy_error.into(),
            r.max_evolution_time.into(),
        ]);
    }
    let mut i = Table::new("hybrid_ideal", &["k", "energy", "energy_error"]);
    for r in &st.ideal {
        i.push(vec![r.k.into(), r.energy.into(), r.energy_error.into()]);
    }
    // the coupled evolution e^{-iH⊗p} has unit duration whatever the precision
    let mut b = Table::new("hybrid_budget", &["method", "phi_max", "k", "max_evolution_time", "total_evolution_time"]);
    let y = &cfg.hybrid;
    for k in 1..=y.k_max {
        b.push(vec!["quipi".into(), f64::NAN.into(), k.into(), (k as f64).into(), (k as f64).into()]);
        for &phi in &y.phi_values {
            let c = HybridIPIConfig::from_phi_max(y.delta_p, phi, k)?;
            let e = evolution_time_budget(&c);
            b.push(vec!["hybrid".into(), c.phi_max.into(), k.into(), e.max_duration.into(), e.total_time.into()]);
        }
    }
    Ok(vec![s, i, b])
}

// ---------------------------------------------------------------- resource preparation

#[derive(Debug, Clone, PartialEq)]
pub struct ResourcePrepRow {
    pub cut: usize,
    pub target: Vec<C64>,
    pub achieved: Vec<C64>,
    /// Against the renormalized truncated target.
    pub fidelity: f64,
    /// Against the untruncated resource.
    pub ideal_fidelity: f64,
    pub retained_weight: f64,
    pub leakage: f64,
    /// Fraction of `|ψ(p)|²` on `p ≥ 0`.
    pub positive_mass: f64,
    pub wavefunction: Vec<(f64, C64)>,
}

fn mass(coeffs: &[C64], a: f64, b: f64) -> Result<f64> {
    let g = Grid::new(a, b, DEFAULT_GRID_POINTS + 1)?;
    Ok(g.momenta().iter().zip(g.weights()).map(|(&p, w)| momentum_wavefunction(coeffs, p).norm_sqr() * w).sum())
}

pub fn resource_prep(ctx: &Context) -> Result<Vec<ResourcePrepRow>> {
    let r = &ctx.config.resource;
    let ps = energy_grid(r.p_min, r.p_max, r.p_points);
    par_map(&r.cuts, |_, &cut| {
        let res = build_resource(r.s, cut)?;
        let prep = prepare_by_displacements(&res.fock_coefficients)?;
        let ideal_fidelity = inner(&res.raw_coefficients, &prep.achieved).norm_sqr();
        let ext = GRID_EXTENT * r.s;
        let plus = mass(&prep.achieved, 0.0, ext)?;
        let minus = mass(&prep.achieved, -ext, 0.0)?;
        Ok(ResourcePrepRow {
            cut,
            target: res.fock_coefficients.clone(),
            achieved: prep.achieved.clone(),
            fidelity: prep.fidelity,
            ideal_fidelity,
            retained_weight: res.retained_weight(),
            leakage: prep.leakage,
            positive_mass: plus / (plus + minus),
            wavefunction: ps.iter().map(|&p| (p, momentum_wavefunction(&prep.achieved, p))).collect(),
        })
    })
}

pub fn resource_tables(rows: &[ResourcePrepRow]) -> Vec<Table> {
    let mut c = Table::new("resource_coefficients", &["cut", "n", "re_cn", "im_cn", "re_achieved", "im_achieved"]);
    let mut w = Table::new("resource_wavefunction", &["cut", "p", "psi_re", "psi_im"]);
    let mut f = Table::new("resource_fidelity", &["cut", "fidelity", "ideal_fidelity", "retained_weight", "leakage", "positive_mass"]);
    for r in rows {
        for (n, (t, a)) in r.target.iter().zip(&r.achieved).enumerate() {
            c.push(vec![r.cut.into(), n.into(), t.re.into(), t.im.into(), a.re.into(), a.im.into()]);
        }
        for (p, psi) in &r.wavefunction {
            w.push(vec![r.cut.into(), (*p).into(), psi.re.into(), psi.im.into()]);
        }
        f.push(vec![
            r.cut.into(),
            r.fidelity.into(),
            r.ideal_fidelity.into(),
            r.retained_weight.into(),
            r.leakage.into(),
            r.positive_mass.into(),
        ]);
    }
    vec![c, w, f]
}
