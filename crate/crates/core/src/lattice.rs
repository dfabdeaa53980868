//! 1+1D finite-difference evolution of the real Case I field.
//!
//! The field equation divided by its leading coefficient reads
//!
//! `Phi_tt = Phi_xx - kappa Phi^-1 (Phi_t^2 - Phi_x^2) - mu Phi`
//!
//! with `kappa = (alpha-1)/2` and `mu = 2 b^2 m^2/(1+alpha)`. Space uses
//! centred second-order stencils; time is a three-level leapfrog. Boundary
//! nodes follow the closed-form solution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ModelClass, ModelParams, WaveVector};
use crate::soliton::hamiltonian_density_real1;
use crate::waveforms::{phi1_real, real_power, Branch, RealProfile};

/// Largest admissible `dt/dx`.
pub const CFL_LIMIT: f64 = 0.5;
/// Positivity floor relative to the amplitude `c m^delta`.
pub const FLOOR_FRACTION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    /// End nodes are set from the closed-form solution at every step.
    AnalyticDirichlet,
}

/// Discretization of the `(Phi_t)^2` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TimeScheme {
    /// `(Phi_t)^2 ~ a v` with `a`, `v` the backward and forward differences
    /// around the current level; the update stays explicit and pointwise.
    #[default]
    Product,
    /// `(Phi_t)^2 ~ a^2` from the two known levels only.
    Lagged,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
    pub dt: f64,
    pub phi_prev: Vec<f64>,
    pub phi_curr: Vec<f64>,
    /// Time of `phi_curr`.
    pub time: f64,
    pub boundary: Boundary,
    pub wave: WaveVector,
    pub scheme: TimeScheme,
    pub phi_floor: f64,
}

fn check_case1(p: &ModelParams) -> Result<()> {
    if p.class != ModelClass::RealCaseI {
        return Err(Error::InvalidParameter(format!(
            "the lattice evolves Case I only, got {}",
            p.class
        )));
    }
    Ok(())
}

fn check_cfl(dt: f64, dx: f64) -> Result<()> {
    let limit = CFL_LIMIT * dx;
    if !(dt != 0.0 && dt.abs() <= limit * (1.0 + 1e-12)) {
        return Err(Error::Cfl { dt, limit });
    }
    Ok(())
}

/// Closed-form field on the grid nodes at time `t`.
pub fn analytic_level(p: &ModelParams, w: &WaveVector, x0: f64, dx: f64, n: usize, t: f64) -> Result<Vec<f64>> {
    (0..n)
        .map(|i| phi1_real(p, w, Branch::Cos, &[x0 + dx * i as f64], t))
        .collect()
}

/// Grid sampled from the closed form at `t = -dt` and `t = 0`.
pub fn init_from_analytic(p: &ModelParams, w: &WaveVector, domain: (f64, f64, usize), dt: f64) -> Result<Grid1D> {
    init_from_analytic_at(p, w, domain, dt, 0.0)
}

/// Grid sampled from the closed form at `t0 - dt` and `t0`.
pub fn init_from_analytic_at(
    p: &ModelParams,
    w: &WaveVector,
    (x0, x1, n): (f64, f64, usize),
    dt: f64,
    t0: f64,
) -> Result<Grid1D> {
    check_case1(p)?;
    if w.dim() != 1 {
        return Err(Error::InvalidParameter("the lattice has one spatial dimension".into()));
    }
    if n < 3 || !(x1 > x0) {
        return Err(Error::InvalidParameter(format!("domain [{x0}, {x1}] with {n} nodes")));
    }
    let dx = (x1 - x0) / (n - 1) as f64;
    check_cfl(dt, dx)?;
    let phi_floor = FLOOR_FRACTION * p.amplitude();
    let phi_prev = analytic_level(p, w, x0, dx, n, t0 - dt)?;
    let phi_curr = analytic_level(p, w, x0, dx, n, t0)?;
    let g = Grid1D {
        x0,
        dx,
        n,
        dt,
        phi_prev,
        phi_curr,
        time: t0,
        boundary: Boundary::AnalyticDirichlet,
        wave: w.clone(),
        scheme: TimeScheme::Product,
        phi_floor,
    };
    if nonlinear(p) {
        g.check_floor(&g.phi_prev, t0 - dt)?;
        g.check_floor(&g.phi_curr, t0)?;
    }
    Ok(g)
}

fn nonlinear(p: &ModelParams) -> bool {
    p.alpha != 1.0
}

impl Grid1D {
    pub fn with_scheme(mut self, scheme: TimeScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + self.dx * i as f64
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    fn check_floor(&self, level: &[f64], time: f64) -> Result<()> {
        match level.iter().position(|&v| !(v > self.phi_floor)) {
            Some(i) => Err(Error::PositivityFloor {
                x: self.x(i),
                time,
                value: level[i],
                floor: self.phi_floor,
            }),
            None => Ok(()),
        }
    }

    /// Closed-form value at node `i`. A boundary that has left the
    /// positivity window is reported as a zero field below the floor.
    fn boundary_value(&self, p: &ModelParams, i: usize, t: f64) -> Result<f64> {
        match phi1_real(p, &self.wave, Branch::Cos, &[self.x(i)], t) {
            Err(Error::Domain(_)) => Err(Error::PositivityFloor {
                x: self.x(i),
                time: t,
                value: 0.0,
                floor: self.phi_floor,
            }),
            other => other,
        }
    }

    /// Swaps the two levels and negates `dt`, so that further steps run
    /// backwards in time.
    pub fn reverse(&mut self) {
        std::mem::swap(&mut self.phi_prev, &mut self.phi_curr);
        self.time -= self.dt;
        self.dt = -self.dt;
    }

    /// Discrete L2 norm of the deviation from the closed form at the
    /// current time.
    pub fn l2_error(&self, p: &ModelParams) -> Result<f64> {
        let exact = analytic_level(p, &self.wave, self.x0, self.dx, self.n, self.time)?;
        let sum: f64 = self.phi_curr.iter().zip(&exact).map(|(u, e)| (u - e) * (u - e)).sum();
        Ok((sum * self.dx).sqrt())
    }

    /// CSV with columns `x, phi, phi_analytic, abs_err` at the current time.
    pub fn snapshot_csv(&self, p: &ModelParams) -> Result<String> {
        let exact = analytic_level(p, &self.wave, self.x0, self.dx, self.n, self.time)?;
        Ok(crate::export::csv(
            &["x", "phi", "phi_analytic", "abs_err"],
            (0..self.n).map(|i| {
                let (u, e) = (self.phi_curr[i], exact[i]);
                [self.x(i), u, e, (u - e).abs()]
            }),
        ))
    }
}

/// `(kappa, mu)` of the evolution equation.
pub fn evolution_coefficients(p: &ModelParams) -> Result<(f64, f64)> {
    check_case1(p)?;
    let b = p.b()?;
    Ok((0.5 * (p.alpha - 1.0), 2.0 * b * b * p.m * p.m / (1.0 + p.alpha)))
}

/// Advances the grid by one time step in place.
pub fn step(g: &mut Grid1D, p: &ModelParams) -> Result<()> {
    check_cfl(g.dt, g.dx)?;
    let (kappa, mu) = evolution_coefficients(p)?;
    let n = g.n;
    let (dt, dx) = (g.dt, g.dx);
    let dt2 = dt * dt;
    let inv_dx2 = 1.0 / (dx * dx);
    let inv_2dx = 0.5 / dx;
    let t_next = g.time + dt;
    let mut next = vec![0.0; n];
    {
        let (u, up) = (&g.phi_curr, &g.phi_prev);
        for i in 1..n - 1 {
            let phi = u[i];
            let lap = (u[i + 1] - 2.0 * phi + u[i - 1]) * inv_dx2;
            let phi_x = (u[i + 1] - u[i - 1]) * inv_2dx;
            let back = phi - up[i];
            next[i] = if kappa == 0.0 {
                2.0 * phi - up[i] + dt2 * (lap - mu * phi)
            } else {
                match g.scheme {
                    TimeScheme::Product => {
                        let rhs = lap + kappa * phi_x * phi_x / phi - mu * phi;
                        phi + (back + dt2 * rhs) / (1.0 + kappa * back / phi)
                    }
                    TimeScheme::Lagged => {
                        let a = back / dt;
                        let rhs = lap - kappa * (a * a - phi_x * phi_x) / phi - mu * phi;
                        2.0 * phi - up[i] + dt2 * rhs
                    }
                }
            };
        }
    }
    match g.boundary {
        Boundary::AnalyticDirichlet => {
            for i in [0, n - 1] {
                next[i] = g.boundary_value(p, i, t_next)?;
            }
        }
    }
    if let Some(i) = next.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("field at x = {} and t = {t_next}", g.x(i))));
    }
    if nonlinear(p) {
        g.check_floor(&next, t_next)?;
    }
    g.phi_prev = std::mem::replace(&mut g.phi_curr, next);
    g.time = t_next;
    Ok(())
}

/// Total Case I energy at the half level `time - dt/2`, from
/// `Phi = (phi_curr + phi_prev)/2` and `Phi_t = (phi_curr - phi_prev)/dt`,
/// trapezoid rule in `x`.
pub fn energy_total_case1(g: &Grid1D, p: &ModelParams) -> Result<f64> {
    check_case1(p)?;
    let n = g.n;
    let mid: Vec<f64> = g.phi_curr.iter().zip(&g.phi_prev).map(|(a, b)| 0.5 * (a + b)).collect();
    let mut total = 0.0;
    for i in 0..n {
        let phi_t = (g.phi_curr[i] - g.phi_prev[i]) / g.dt;
        let phi_x = if i == 0 {
            (-3.0 * mid[0] + 4.0 * mid[1] - mid[2]) / (2.0 * g.dx)
        } else if i == n - 1 {
            (3.0 * mid[n - 1] - 4.0 * mid[n - 2] + mid[n - 3]) / (2.0 * g.dx)
        } else {
            (mid[i + 1] - mid[i - 1]) / (2.0 * g.dx)
        };
        let weight = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        total += weight * hamiltonian_density_real1(mid[i], phi_t, &[phi_x], p)?;
    }
    Ok(total * g.dx)
}

/// Energy current `-alpha Phi^(alpha-1) Phi_x Phi_t` of the closed form at
/// `(x, t)`; `dE/dt` over `[x0, x1]` equals `S(x0) - S(x1)`.
pub fn analytic_energy_flux(p: &ModelParams, w: &WaveVector, x: f64, t: f64) -> Result<f64> {
    let prof = RealProfile::new(p.theta()?, p.b()?, Branch::Cos);
    let amp = p.amplitude();
    let [f, df, _] = prof.derivatives(w.phase(&[x], t))?;
    let phi = amp * f;
    let phi_t = amp * w.omega * df;
    let phi_x = -amp * w.k[0] * df;
    Ok(-p.alpha * real_power(phi, p.alpha - 1.0)? * phi_x * phi_t)
}

/// Net inflow through both ends between `t_a` and `t_b` (Simpson rule).
fn boundary_inflow(g: &Grid1D, p: &ModelParams, t_a: f64, t_b: f64) -> Result<f64> {
    let x1 = g.x(g.n - 1);
    let net = |t: f64| -> Result<f64> {
        Ok(analytic_energy_flux(p, &g.wave, g.x0, t)? - analytic_energy_flux(p, &g.wave, x1, t)?)
    };
    let tm = 0.5 * (t_a + t_b);
    Ok((t_b - t_a) / 6.0 * (net(t_a)? + 4.0 * net(tm)? + net(t_b)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub time: f64,
    pub l2_error: f64,
    /// Energy at `time - dt/2`.
    pub energy: f64,
    /// `|E - E0 - inflow| / |E0|`, the energy change not accounted for by
    /// the flux through the boundaries.
    pub energy_drift: f64,
    pub max_abs_phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionLog {
    pub dx: f64,
    pub dt: f64,
    pub snapshots: Vec<Snapshot>,
}

impl EvolutionLog {
    pub fn max_energy_drift(&self) -> f64 {
        self.snapshots.iter().map(|s| s.energy_drift).fold(0.0, f64::max)
    }

    pub fn final_error(&self) -> f64 {
        self.snapshots.last().map_or(0.0, |s| s.l2_error)
    }

    pub fn to_json(&self) -> String {
        crate::export::to_json(self)
    }
}

/// Steps until `t_end`, recording a snapshot every `snapshot_every` steps
/// and at the end. `t_end - time` must be a whole number of steps.
pub fn evolve(g: &mut Grid1D, p: &ModelParams, t_end: f64, snapshot_every: usize) -> Result<EvolutionLog> {
    let span = t_end - g.time;
    let steps = (span / g.dt).round();
    if steps < 0.0 || (steps * g.dt - span).abs() > 1e-9 * span.abs().max(g.dt.abs()) {
        return Err(Error::InvalidParameter(format!(
            "t_end = {t_end} is not a whole number of steps of {} from t = {}",
            g.dt, g.time
        )));
    }
    let steps = steps as usize;
    let every = snapshot_every.max(1);
    let e0 = energy_total_case1(g, p)?;
    let mut inflow = 0.0;
    let snap = |g: &Grid1D, inflow: f64| -> Result<Snapshot> {
        let energy = energy_total_case1(g, p)?;
        Ok(Snapshot {
            time: g.time,
            l2_error: g.l2_error(p)?,
            energy,
            energy_drift: if e0 != 0.0 {
                ((energy - e0 - inflow) / e0).abs()
            } else {
                (energy - inflow).abs()
            },
            max_abs_phi: g.phi_curr.iter().fold(0.0, |m, v| m.max(v.abs())),
        })
    };
    let mut snapshots = vec![snap(g, inflow)?];
    for s in 1..=steps {
        let half = g.time - 0.5 * g.dt;
        step(g, p)?;
        inflow += boundary_inflow(g, p, half, half + g.dt)?;
        if s % every == 0 || s == steps {
            snapshots.push(snap(g, inflow)?);
        }
    }
    Ok(EvolutionLog {
        dx: g.dx,
        dt: g.dt,
        snapshots,
    })
}

/// Space-time window and time-step ratio of a convergence study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyDomain {
    pub x0: f64,
    pub x1: f64,
    pub t0: f64,
    pub t_end: f64,
    /// `dt/dx` before rounding `dt` to divide the time span.
    pub courant: f64,
    pub scheme: TimeScheme,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub dx: f64,
    pub dt: f64,
    pub steps: usize,
    pub l2_error: f64,
    /// Order from the previous, coarser row.
    pub observed_order: Option<f64>,
    pub energy_drift: f64,
}

/// Number of snapshot intervals recorded per run of a study.
pub const STUDY_SNAPSHOTS: usize = 10;

/// One travelling-wave run of `d` at grid spacing `dx`.
pub fn run_resolution(p: &ModelParams, w: &WaveVector, d: &StudyDomain, dx: f64) -> Result<(Grid1D, EvolutionLog)> {
    let cells = ((d.x1 - d.x0) / dx).round();
    if cells < 2.0 || ((d.x1 - d.x0) / cells - dx).abs() > 1e-9 * dx {
        return Err(Error::InvalidParameter(format!(
            "dx = {dx} does not divide [{}, {}]",
            d.x0, d.x1
        )));
    }
    if !(d.t_end > d.t0) || !(d.courant > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "time window [{}, {}] with dt/dx = {}",
            d.t0, d.t_end, d.courant
        )));
    }
    let span = d.t_end - d.t0;
    let steps = (span / (d.courant * dx)).ceil().max(1.0) as usize;
    let dt = span / steps as f64;
    let mut g = init_from_analytic_at(p, w, (d.x0, d.x1, cells as usize + 1), dt, d.t0)?.with_scheme(d.scheme);
    let log = evolve(&mut g, p, d.t_end, steps.div_ceil(STUDY_SNAPSHOTS))?;
    Ok((g, log))
}

/// Like [`convergence_study`], also returning the final grid and log of
/// every run.
pub fn convergence_study_with_logs(
    p: &ModelParams,
    w: &WaveVector,
    d: &StudyDomain,
    resolutions: &[f64],
) -> Result<Vec<(ConvergenceRow, Grid1D, EvolutionLog)>> {
    let mut out: Vec<(ConvergenceRow, Grid1D, EvolutionLog)> = Vec::with_capacity(resolutions.len());
    for &dx in resolutions {
        let (g, log) = run_resolution(p, w, d, dx)?;
        let l2_error = log.final_error();
        let observed_order = out
            .last()
            .map(|(prev, _, _)| (prev.l2_error / l2_error).ln() / (prev.dx / g.dx).ln());
        let row = ConvergenceRow {
            dx: g.dx,
            dt: g.dt,
            steps: ((d.t_end - d.t0) / g.dt).round() as usize,
            l2_error,
            observed_order,
            energy_drift: log.max_energy_drift(),
        };
        out.push((row, g, log));
    }
    Ok(out)
}

/// Runs the travelling wave at each grid spacing in `resolutions` and
/// compares with the closed form at `t_end`.
pub fn convergence_study(
    p: &ModelParams,
    w: &WaveVector,
    d: &StudyDomain,
    resolutions: &[f64],
) -> Result<Vec<ConvergenceRow>> {
    Ok(convergence_study_with_logs(p, w, d, resolutions)?
        .into_iter()
        .map(|(row, _, _)| row)
        .collect())
}
