//! Command implementations. Each returns a report; writing files and
//! printing is left to the caller.

use std::path::Path;

use nlkg_core::export::{self, fmt_f64, LinePlot};
use nlkg_core::lattice::{convergence_study_with_logs, ConvergenceRow, EvolutionLog, StudyDomain, TimeScheme};
use nlkg_core::params::{solve_complex_class, solve_real_case1, solve_real_case2, DEFAULT_NU};
use nlkg_core::residual::{verify_exact, verify_pde, ResidualReport};
use nlkg_core::soliton::{
    make_soliton_setup, peak_trajectory, soliton_energy, DensityProfile, EnergyMethod, PeakTrajectory, SolitonSetup,
};
use nlkg_core::{Branch, FieldSolution, ModelClass, ModelParams, WaveVector};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{parse_range, read_file, RunConfig};
use crate::CliError;

/// A file produced by a command, named relative to the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    fn new(name: impl Into<String>, contents: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            contents: contents.into(),
        }
    }
}

pub trait Report {
    /// Text printed to standard output.
    fn summary(&self) -> String;

    fn artifacts(&self) -> Vec<Artifact> {
        Vec::new()
    }

    /// Checks that did not pass; empty on success.
    fn failures(&self) -> Vec<String> {
        Vec::new()
    }
}

/// Writes `artifacts` into `dir`, creating it if needed.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<std::path::PathBuf>, CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    if artifacts.is_empty() {
        return Ok(Vec::new());
    }
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.name);
            std::fs::write(&path, &a.contents).map_err(io(&path))?;
            Ok(path)
        })
        .collect()
}

const FREE_KEYS: [&str; 9] = ["class", "alpha", "q", "a1", "theta", "b", "c", "nu", "m"];

fn class_keys(class: ModelClass) -> &'static [&'static str] {
    match class {
        ModelClass::ComplexClass => &["alpha", "q", "a1", "c", "nu", "m"],
        ModelClass::RealCaseI => &["alpha", "b", "c", "nu", "m"],
        ModelClass::RealCaseII => &["alpha", "theta", "b", "c", "nu", "m"],
    }
}

fn required(cfg: &RunConfig, key: &str, class: ModelClass) -> Result<f64, CliError> {
    cfg.f64(key)?
        .ok_or_else(|| CliError::Usage(format!("class {class} needs `{key}`")))
}

fn parse_class(v: &str) -> Result<ModelClass, CliError> {
    v.parse().map_err(|_| CliError::Usage(format!("unknown class `{v}`")))
}

/// Parameters from a `params` file, or solved from `class` and its free
/// parameters.
pub fn resolve_params(cfg: &RunConfig) -> Result<ModelParams, CliError> {
    if let Some(path) = cfg.get("params") {
        if let Some(k) = FREE_KEYS.iter().find(|k| cfg.has(k)) {
            return Err(CliError::Usage(format!("`params` cannot be combined with `{k}`")));
        }
        return Ok(ModelParams::from_text(&read_file(Path::new(path))?)?);
    }
    let class = parse_class(
        cfg.get("class")
            .ok_or_else(|| CliError::Usage("either `params` or `class` is required".into()))?,
    )?;
    if let Some(k) = FREE_KEYS[1..]
        .iter()
        .find(|k| cfg.has(k) && !class_keys(class).contains(k))
    {
        return Err(CliError::Usage(format!("class {class} does not take `{k}`")));
    }
    let c = cfg.f64_or("c", 1.0)?;
    let nu = cfg.u32_or("nu", DEFAULT_NU)?;
    let m = cfg.f64_or("m", 1.0)?;
    let alpha = required(cfg, "alpha", class)?;
    let p = match class {
        ModelClass::ComplexClass => {
            let q = required(cfg, "q", class)?;
            solve_complex_class(alpha, q, cfg.f64_or("a1", 0.0)?, c, nu, m)?
        }
        ModelClass::RealCaseI => solve_real_case1(alpha, required(cfg, "b", class)?, c, nu, m)?,
        ModelClass::RealCaseII => {
            let theta = required(cfg, "theta", class)?;
            solve_real_case2(alpha, theta, required(cfg, "b", class)?, c, nu, m)?
        }
    };
    Ok(p)
}

/// Wave vector with mass `m`; `omega` defaults to the on-shell value.
fn resolve_wave(cfg: &RunConfig, m: f64, k_default: &[f64]) -> Result<WaveVector, CliError> {
    let k = cfg.list_or("k", k_default)?;
    Ok(match cfg.f64("omega")? {
        Some(omega) => WaveVector::new(omega, k, m),
        None => WaveVector::on_shell(k, m),
    })
}

fn resolve_branch(cfg: &RunConfig) -> Result<Branch, CliError> {
    match cfg.get("branch").map(|v| v.trim().to_ascii_lowercase()).as_deref() {
        None | Some("cos") => Ok(Branch::Cos),
        Some("sin") => Ok(Branch::Sin),
        Some(other) => Err(CliError::Usage(format!("unknown branch `{other}`"))),
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub params: ModelParams,
}

impl Report for SolveReport {
    fn summary(&self) -> String {
        self.params.to_text()
    }
}

pub fn cmd_solve(cfg: &RunConfig) -> Result<SolveReport, CliError> {
    Ok(SolveReport {
        params: resolve_params(cfg)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualCheck {
    pub threshold: f64,
    pub passed: bool,
    pub report: ResidualReport,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub class: ModelClass,
    pub wave: WaveVector,
    pub checks: Vec<ResidualCheck>,
}

impl VerifyReport {
    pub fn max_rel(&self) -> f64 {
        self.checks.iter().map(|c| c.report.max_rel).fold(0.0, f64::max)
    }
}

impl Report for VerifyReport {
    fn summary(&self) -> String {
        let mut out = format!(
            "class {}  omega = {}  k = {:?}  dispersion residual = {:e}\n",
            self.class,
            self.wave.omega,
            self.wave.k,
            self.wave.dispersion_residual()
        );
        for c in &self.checks {
            out += &format!(
                "{:<40} points {:>4}  max_rel {:.3e}  threshold {:.0e}  {}\n",
                c.report.label,
                c.report.points.len(),
                c.report.max_rel,
                c.threshold,
                verdict(c.passed)
            );
        }
        out
    }

    fn artifacts(&self) -> Vec<Artifact> {
        vec![Artifact::new(
            format!("verify_{}.json", self.class),
            export::to_json(&json!({
                "class": self.class.name(),
                "wave": self.wave,
                "checks": self.checks,
            })),
        )]
    }

    fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| {
                format!(
                    "{}: max_rel {:e} >= {:e}",
                    c.report.label, c.report.max_rel, c.threshold
                )
            })
            .collect()
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    let p = resolve_params(cfg)?;
    let w = resolve_wave(cfg, p.m, &[0.5])?;
    let branch = resolve_branch(cfg)?;
    let n = cfg.usize_or("points", 50)?;
    let h = cfg.f64("h")?;
    let fd_tol = cfg.f64_or("fd_tol", 1e-6)?;
    let exact_tol = cfg.f64_or("exact_tol", 1e-10)?;
    let phi1 = FieldSolution::phi1(p.clone(), w.clone()).with_branch(branch);
    let aux = match p.class {
        ModelClass::ComplexClass => Some(FieldSolution::phi2_complex(
            p.clone(),
            w.clone(),
            cfg.f64_or("kappa1", 1.0)?,
            cfg.f64_or("kappa2", 1.0)?,
        )),
        ModelClass::RealCaseII if branch == Branch::Cos => Some(FieldSolution::phi2_real(
            p.clone(),
            w.clone(),
            cfg.f64_or("chi1", 1.0)?,
            cfg.f64_or("chi2", 1.0)?,
        )),
        _ => None,
    };
    let mut jobs: Vec<(&FieldSolution, bool, f64)> = vec![(&phi1, true, fd_tol), (&phi1, false, exact_tol)];
    if let Some(aux) = &aux {
        jobs.push((aux, false, exact_tol));
    }
    let checks = jobs
        .par_iter()
        .map(|&(sol, fd, threshold)| {
            let report = if fd {
                verify_pde(sol, n, h)?
            } else {
                verify_exact(sol, n)?
            };
            Ok(ResidualCheck {
                threshold,
                passed: report.max_rel < threshold,
                report,
            })
        })
        .collect::<Result<Vec<_>, nlkg_core::Error>>()?;
    Ok(VerifyReport {
        class: p.class,
        wave: w,
        checks,
    })
}

#[derive(Debug, Clone)]
pub struct SimulateReport {
    pub params: ModelParams,
    pub domain: StudyDomain,
    pub rows: Vec<ConvergenceRow>,
    pub finest_log: EvolutionLog,
    pub snapshot_csv: String,
    pub drift_bound: f64,
    pub order_band: (f64, f64),
}

impl Report for SimulateReport {
    fn summary(&self) -> String {
        let mut out = format!(
            "real1 alpha = {} b = {}  window x [{}, {}]  t [{}, {}]  scheme {:?}\n",
            self.params.alpha,
            self.params.b.unwrap_or(f64::NAN),
            self.domain.x0,
            self.domain.x1,
            self.domain.t0,
            self.domain.t_end,
            self.domain.scheme
        );
        out += &format!(
            "{:>10} {:>12} {:>7} {:>12} {:>7} {:>12}\n",
            "dx", "dt", "steps", "l2_error", "order", "drift"
        );
        for r in &self.rows {
            let order = r.observed_order.map_or("-".to_string(), |o| format!("{o:.4}"));
            out += &format!(
                "{:>10.3e} {:>12.5e} {:>7} {:>12.5e} {:>7} {:>12.3e}\n",
                r.dx, r.dt, r.steps, r.l2_error, order, r.energy_drift
            );
        }
        out
    }

    fn artifacts(&self) -> Vec<Artifact> {
        let table = export::csv(
            &["dx", "dt", "steps", "l2_error", "observed_order", "energy_drift"],
            self.rows.iter().map(|r| {
                vec![
                    r.dx,
                    r.dt,
                    r.steps as f64,
                    r.l2_error,
                    r.observed_order.unwrap_or(f64::NAN),
                    r.energy_drift,
                ]
            }),
        );
        vec![
            Artifact::new("convergence.csv", table),
            Artifact::new("evolution_log.json", self.finest_log.to_json()),
            Artifact::new("snapshot.csv", self.snapshot_csv.clone()),
        ]
    }

    fn failures(&self) -> Vec<String> {
        let (lo, hi) = self.order_band;
        let mut out: Vec<String> = self
            .rows
            .iter()
            .filter_map(|r| r.observed_order.map(|o| (r.dx, o)))
            .filter(|&(_, o)| !(lo..=hi).contains(&o))
            .map(|(dx, o)| format!("observed order {o:.4} at dx = {dx:e} outside [{lo}, {hi}]"))
            .collect();
        if self.rows.len() < 2 {
            out.push("at least two resolutions are needed for an order".into());
        }
        let drift = self.finest_log.max_energy_drift();
        if !(drift < self.drift_bound) {
            out.push(format!("energy drift {drift:e} >= {:e}", self.drift_bound));
        }
        out
    }
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<SimulateReport, CliError> {
    let p = if cfg.has("params") || cfg.has("class") {
        resolve_params(cfg)?
    } else {
        let c = cfg.f64_or("c", 1.0)?;
        let nu = cfg.u32_or("nu", DEFAULT_NU)?;
        let m = cfg.f64_or("m", 1.0)?;
        solve_real_case1(cfg.f64_or("alpha", 3.0)?, cfg.f64_or("b", 1.0)?, c, nu, m)?
    };
    if p.class != ModelClass::RealCaseI {
        return Err(CliError::Usage(format!(
            "simulate runs real1 parameters, got {}",
            p.class
        )));
    }
    let w = resolve_wave(cfg, p.m, &[1.0])?;
    let scheme = match cfg.get("scheme").map(|v| v.trim().to_ascii_lowercase()).as_deref() {
        None | Some("product") => TimeScheme::Product,
        Some("lagged") => TimeScheme::Lagged,
        Some(other) => return Err(CliError::Usage(format!("unknown scheme `{other}`"))),
    };
    let domain = StudyDomain {
        x0: cfg.f64_or("x0", -0.3)?,
        x1: cfg.f64_or("x1", 0.3)?,
        t0: cfg.f64_or("t0", -0.8)?,
        t_end: cfg.f64_or("t_end", 0.8)?,
        courant: cfg.f64_or("courant", 0.5)?,
        scheme,
    };
    let resolutions = cfg.list_or("resolutions", &[4e-3, 2e-3, 1e-3])?;
    let runs = convergence_study_with_logs(&p, &w, &domain, &resolutions)?;
    let rows: Vec<ConvergenceRow> = runs.iter().map(|(r, _, _)| r.clone()).collect();
    let (_, grid, finest_log) = runs
        .into_iter()
        .last()
        .ok_or_else(|| CliError::Usage("`resolutions` is empty".into()))?;
    let snapshot_csv = grid.snapshot_csv(&p)?;
    Ok(SimulateReport {
        params: p,
        domain,
        rows,
        finest_log,
        snapshot_csv,
        drift_bound: cfg.f64_or("drift_bound", 1e-4)?,
        order_band: (cfg.f64_or("order_min", 1.8)?, cfg.f64_or("order_max", 2.2)?),
    })
}

#[derive(Debug, Clone)]
pub struct SolitonReport {
    pub setup: SolitonSetup,
    pub energy_quadrature: f64,
    pub energy_closed_form: f64,
    pub energy_tol: f64,
    pub profile: DensityProfile,
    pub svg: Option<String>,
    pub trajectory: Option<PeakTrajectory>,
}

impl SolitonReport {
    pub fn energy_rel_error(&self) -> f64 {
        ((self.energy_quadrature - self.energy_closed_form) / self.energy_closed_form).abs()
    }
}

impl Report for SolitonReport {
    fn summary(&self) -> String {
        let s = &self.setup;
        let mut out = format!(
            "alpha = {}  q = {}  omega = {}  k = {}\n\
             kappa1 = {}  kappa2 = {}  lambda = {}\n\
             peak height = {}  fwhm = {}\n\
             energy (quadrature)  = {}\n\
             energy (2|alpha|pi)  = {}\n\
             relative difference  = {:.3e}\n",
            s.alpha,
            s.q,
            s.w.omega,
            s.k(),
            s.kappa1,
            s.kappa2,
            s.lambda,
            s.peak_height(),
            s.fwhm(),
            fmt_f64(self.energy_quadrature),
            fmt_f64(self.energy_closed_form),
            self.energy_rel_error()
        );
        if let Some(tr) = &self.trajectory {
            for p in &tr.samples {
                let pos = p.position.map_or("-".to_string(), |x| format!("{x:.9}"));
                out += &format!("t = {:<10} peak at x = {pos}  height {:.12}\n", p.t, p.height);
            }
        }
        out
    }

    fn artifacts(&self) -> Vec<Artifact> {
        let s = &self.setup;
        let summary = json!({
            "alpha": s.alpha,
            "q": s.q,
            "a1": s.a1,
            "omega": s.w.omega,
            "k": s.k(),
            "m": s.w.m,
            "kappa1": s.kappa1,
            "kappa2": s.kappa2,
            "lambda": s.lambda,
            "peak_height": s.peak_height(),
            "fwhm": s.fwhm(),
            "energy_quadrature": self.energy_quadrature,
            "energy_closed_form": self.energy_closed_form,
            "energy_rel_error": self.energy_rel_error(),
            "trajectory": self.trajectory,
        });
        let mut out = vec![
            Artifact::new("soliton_profile.csv", self.profile.to_csv()),
            Artifact::new("soliton_summary.json", export::to_json(&summary)),
        ];
        if let Some(svg) = &self.svg {
            out.push(Artifact::new("soliton_profile.svg", svg.clone()));
        }
        out
    }

    fn failures(&self) -> Vec<String> {
        let e = self.energy_rel_error();
        if e < self.energy_tol {
            Vec::new()
        } else {
            vec![format!("energy relative difference {e:e} >= {:e}", self.energy_tol)]
        }
    }
}

pub fn cmd_soliton(cfg: &RunConfig) -> Result<SolitonReport, CliError> {
    let alpha = cfg
        .f64("alpha")?
        .ok_or_else(|| CliError::Usage("soliton needs `alpha`".into()))?;
    let q = cfg
        .f64("q")?
        .ok_or_else(|| CliError::Usage("soliton needs `q`".into()))?;
    let m = cfg.f64_or("m", 1.0)?;
    let k = cfg.f64_or("k", 1.0)?;
    let w = match cfg.f64("omega")? {
        Some(omega) => WaveVector::new(omega, vec![k], m),
        None => WaveVector::on_shell(vec![k], m),
    };
    let mut setup = make_soliton_setup(
        alpha,
        q,
        w,
        cfg.f64_or("c1", 1.0)?,
        cfg.f64_or("c2", 1.0)?,
        cfg.u32_or("nu", DEFAULT_NU)?,
    )?;
    if let Some(kappa1) = cfg.f64("kappa1")? {
        setup = setup.with_kappa1(kappa1);
    }
    let energy_quadrature = soliton_energy(&setup, EnergyMethod::AdaptiveQuadrature)?;
    let energy_closed_form = soliton_energy(&setup, EnergyMethod::ClosedForm)?;
    let profile = DensityProfile::sample(
        &setup,
        cfg.f64_or("zmin", -5.0)?,
        cfg.f64_or("zmax", 5.0)?,
        cfg.usize_or("points", 401)?,
    )?;
    let svg = cfg.bool_or("plot", false)?.then(|| {
        LinePlot {
            x_label: "ẑ".into(),
            y_label: "normalized density".into(),
            title: format!("Lorentzian soliton, alpha = {alpha}, q = {q}"),
        }
        .render(&profile.zhat, &profile.density)
    });
    let trajectory = match cfg.get("times") {
        Some(_) => Some(peak_trajectory(&setup, &cfg.list_or("times", &[])?)?),
        None => None,
    };
    Ok(SolitonReport {
        setup,
        energy_quadrature,
        energy_closed_form,
        energy_tol: cfg.f64_or("energy_tol", 1e-6)?,
        profile,
        svg,
        trajectory,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Values of the swept keys, in [`SweepReport::keys`] order.
    pub inputs: Vec<f64>,
    pub params: Option<ModelParams>,
    pub max_rel_fd: f64,
    pub max_rel_exact: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub class: ModelClass,
    pub keys: Vec<&'static str>,
    pub rows: Vec<SweepRow>,
}

impl Report for SweepReport {
    fn summary(&self) -> String {
        let failed = self.rows.iter().filter(|r| r.error.is_some()).count();
        let worst = |f: fn(&SweepRow) -> f64| self.rows.iter().map(f).filter(|v| v.is_finite()).fold(0.0, f64::max);
        let mut out = format!(
            "class {}  sets {}  failed {}  worst fd {:.3e}  worst exact {:.3e}\n",
            self.class,
            self.rows.len(),
            failed,
            worst(|r| r.max_rel_fd),
            worst(|r| r.max_rel_exact)
        );
        for r in self.rows.iter().filter(|r| r.error.is_some()) {
            out += &format!("  {:?}: {}\n", r.inputs, r.error.as_deref().unwrap_or_default());
        }
        out
    }

    fn artifacts(&self) -> Vec<Artifact> {
        let mut header: Vec<&str> = self.keys.clone();
        header.extend(["a1", "a2", "beta", "gamma", "delta", "max_rel_fd", "max_rel_exact"]);
        let table = export::csv(
            &header,
            self.rows.iter().map(|r| {
                let derived = r
                    .params
                    .as_ref()
                    .map_or([f64::NAN; 5], |p| [p.a1, p.a2, p.beta, p.gamma, p.delta]);
                let mut row = r.inputs.clone();
                row.extend(derived);
                row.extend([r.max_rel_fd, r.max_rel_exact]);
                row
            }),
        );
        vec![Artifact::new(format!("sweep_{}.csv", self.class), table)]
    }
}

/// Settings shared by every point of a sweep.
struct SweepPlan<'a> {
    class: ModelClass,
    keys: &'a [&'static str],
    nu: u32,
    branch: Branch,
    points: usize,
    h: Option<f64>,
    cfg: &'a RunConfig,
}

impl SweepPlan<'_> {
    fn run(&self, values: &[f64]) -> Result<(ModelParams, f64, f64), CliError> {
        let get = |k: &str, default: f64| self.keys.iter().position(|x| *x == k).map_or(default, |i| values[i]);
        let (alpha, c, m, nu) = (get("alpha", f64::NAN), get("c", 1.0), get("m", 1.0), self.nu);
        let p = match self.class {
            ModelClass::ComplexClass => solve_complex_class(alpha, get("q", f64::NAN), get("a1", 0.0), c, nu, m)?,
            ModelClass::RealCaseI => solve_real_case1(alpha, get("b", f64::NAN), c, nu, m)?,
            ModelClass::RealCaseII => solve_real_case2(alpha, get("theta", f64::NAN), get("b", f64::NAN), c, nu, m)?,
        };
        let w = resolve_wave(self.cfg, m, &[0.5])?;
        let sol = FieldSolution::phi1(p.clone(), w).with_branch(self.branch);
        let fd = verify_pde(&sol, self.points, self.h)?.max_rel;
        let exact = verify_exact(&sol, self.points)?.max_rel;
        Ok((p, fd, exact))
    }
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<SweepReport, CliError> {
    let class = parse_class(
        cfg.get("class")
            .ok_or_else(|| CliError::Usage("sweep needs `class`".into()))?,
    )?;
    let allowed: Vec<&str> = class_keys(class).iter().copied().filter(|k| *k != "nu").collect();
    if let Some(k) = ["alpha", "q", "a1", "theta", "b", "c", "m"]
        .iter()
        .find(|k| cfg.has(k) && !allowed.contains(k))
    {
        return Err(CliError::Usage(format!("class {class} does not take `{k}`")));
    }
    let mut keys: Vec<&'static str> = Vec::new();
    let mut axes: Vec<Vec<f64>> = Vec::new();
    for k in ["alpha", "q", "a1", "theta", "b", "c", "m"] {
        if let Some(v) = cfg.get(k) {
            keys.push(k);
            axes.push(parse_range(k, v)?);
        }
    }
    for k in match class {
        ModelClass::ComplexClass => &["alpha", "q"][..],
        ModelClass::RealCaseI => &["alpha", "b"][..],
        ModelClass::RealCaseII => &["alpha", "theta", "b"][..],
    } {
        if !keys.contains(k) {
            return Err(CliError::Usage(format!("class {class} needs `{k}`")));
        }
    }
    let plan = SweepPlan {
        class,
        keys: &keys,
        nu: cfg.u32_or("nu", DEFAULT_NU)?,
        branch: resolve_branch(cfg)?,
        points: cfg.usize_or("points", 50)?,
        h: cfg.f64("h")?,
        cfg,
    };
    resolve_wave(cfg, 1.0, &[0.5])?;

    let total: usize = axes.iter().map(Vec::len).product();
    let grid: Vec<Vec<f64>> = (0..total)
        .map(|mut idx| {
            let mut point = vec![0.0; axes.len()];
            for (slot, axis) in point.iter_mut().zip(&axes).rev() {
                *slot = axis[idx % axis.len()];
                idx /= axis.len();
            }
            point
        })
        .collect();
    let rows = grid
        .into_par_iter()
        .map(|inputs| match plan.run(&inputs) {
            Ok((p, fd, exact)) => SweepRow {
                inputs,
                params: Some(p),
                max_rel_fd: fd,
                max_rel_exact: exact,
                error: None,
            },
            Err(e) => SweepRow {
                inputs,
                params: None,
                max_rel_fd: f64::NAN,
                max_rel_exact: f64::NAN,
                error: Some(e.to_string()),
            },
        })
        .collect();
    Ok(SweepReport { class, keys, rows })
}
