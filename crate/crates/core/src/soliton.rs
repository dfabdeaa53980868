//! Lorentzian soliton of the complex class in one spatial dimension.
//!
//! With `a1 = alpha(1-q) - alpha^2` the auxiliary exponents satisfy
//! `Delta1 = 0` and `Delta2 = q - 1`. Adding the interaction
//! `lambda (kappa1 e_q^Delta1 + kappa2 e_q^Delta2)` with the matching
//! `lambda` removes the constant `kappa1` sector, and the normalized energy
//! density becomes `2 |q-1| |alpha| / (1 + (1-q)^2 zhat^2)` with
//! `zhat = omega t - k x`.
//!
//! [`density_from_hamiltonian`] rebuilds the same density from the field
//! samplers and the canonical momenta, independently of the closed form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{solve_complex_class, ModelClass, ModelParams, WaveVector};
use crate::qfunc::{q_exp_power, q_exp_power_deriv, ComplexValue, QReal};
use crate::quad::{integrate, DEFAULT_TOL};
use crate::waveforms::{aux_complex_derivative, exponent_deltas, exponent_pair, real_power};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolitonSetup {
    pub alpha: f64,
    pub q: f64,
    pub a1: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub lambda: f64,
    pub w: WaveVector,
    pub c1: f64,
    pub c2: f64,
    pub delta: f64,
    /// Complex-class parameters with this `a1`.
    pub params: ModelParams,
}

/// Coefficient of `kappa_j e_q^Delta_j` in the normalized density,
/// `(a1 - alpha r_j)(omega^2 + k^2) + (alpha q + a1 + alpha(alpha-1)) m^2`.
fn sector_coefficient(alpha: f64, q: f64, a1: f64, r: f64, w: &WaveVector) -> f64 {
    (a1 - alpha * r) * (w.omega * w.omega + w.k_sq()) + (alpha * q + a1 + alpha * (alpha - 1.0)) * w.m * w.m
}

/// Soliton parameters for `(alpha, q)` on the wave `w`; `kappa1` defaults to 1.
pub fn make_soliton_setup(alpha: f64, q: f64, w: WaveVector, c1: f64, c2: f64, nu: u32) -> Result<SolitonSetup> {
    if QReal(q).is_undeformed() {
        return Err(Error::InvalidParameter("the soliton needs q != 1".into()));
    }
    if alpha == 0.0 {
        return Err(Error::InvalidParameter("the soliton needs alpha != 0".into()));
    }
    if w.k.len() != 1 {
        return Err(Error::InvalidParameter(format!(
            "the soliton has finite energy in one spatial dimension only, got {}",
            w.k.len()
        )));
    }
    let norm = w.omega * w.omega + w.k_sq();
    if norm == 0.0 {
        return Err(Error::InvalidParameter("omega and k both vanish".into()));
    }
    if c2 == 0.0 {
        return Err(Error::InvalidParameter("c2 must be nonzero".into()));
    }
    let a1 = alpha * (1.0 - q) - alpha * alpha;
    let params = solve_complex_class(alpha, q, a1, c1, nu, w.m)?;
    let r = exponent_pair(alpha, q, a1)?;
    let kappa2 = alpha.signum() * (1.0 - q).signum() / norm;
    let lambda = -sector_coefficient(alpha, q, a1, r.r1, &w);
    Ok(SolitonSetup {
        alpha,
        q,
        a1,
        kappa1: 1.0,
        kappa2,
        lambda,
        c1,
        c2,
        delta: params.delta,
        params,
        w,
    })
}

impl SolitonSetup {
    pub fn with_kappa1(mut self, kappa1: f64) -> Self {
        self.kappa1 = kappa1;
        self
    }

    /// `c1^alpha c2 m^(delta(alpha+1))`.
    pub fn normalization(&self) -> f64 {
        self.c1.powf(self.alpha) * self.c2 * self.w.m.powf(self.delta * (self.alpha + 1.0))
    }

    pub fn k(&self) -> f64 {
        self.w.k[0]
    }

    pub fn zhat(&self, x: f64, t: f64) -> f64 {
        self.w.omega * t - self.k() * x
    }

    /// Peak of the closed-form density, `2 |q-1| |alpha|`.
    pub fn peak_height(&self) -> f64 {
        2.0 * (self.q - 1.0).abs() * self.alpha.abs()
    }

    /// Full width at half maximum on the `zhat` axis, `2/|1-q|`.
    pub fn fwhm(&self) -> f64 {
        2.0 / (1.0 - self.q).abs()
    }
}

/// `2 |q-1| |alpha| / (1 + (1-q)^2 zhat^2)`.
pub fn density_closed_form(s: &SolitonSetup, zhat: f64) -> f64 {
    let u = (1.0 - s.q) * zhat;
    s.peak_height() / (1.0 + u * u)
}

/// Complex-class Hamiltonian density plus its complex conjugate, assembled
/// from the momenta `Pi1 = alpha Phi1^(alpha-1) dPhi2/dt - 2 a1 Phi1^(alpha-2) Phi2 dPhi1/dt`
/// and `Pi2 = alpha Phi1^(alpha-1) dPhi1/dt`. `Phi2` carries the amplitude
/// `c2`; one spatial dimension.
pub fn hamiltonian_density_complex(
    p: &ModelParams,
    w: &WaveVector,
    kappa1: f64,
    kappa2: f64,
    c2: f64,
    x: f64,
    t: f64,
) -> Result<f64> {
    if p.class != ModelClass::ComplexClass {
        return Err(Error::InvalidParameter(format!(
            "expected complex class, got {}",
            p.class
        )));
    }
    if w.k.len() != 1 {
        return Err(Error::InvalidParameter("one spatial dimension expected".into()));
    }
    let (alpha, a1) = (p.alpha, p.a1);
    let q = QReal(p.q()?);
    let z = Complex64::new(0.0, w.omega * t - w.k[0] * x);
    let amp = p.amplitude();
    let amp2 = c2 * p.m.powf(p.delta);
    // Powers of Phi1 share one sheet through q_exp_power.
    let phi1_pow = |e: f64| -> Result<ComplexValue> { Ok(q_exp_power(z, q, e)? * amp.powf(e)) };
    let dphi1 = q_exp_power_deriv(z, q, 1.0, 1)? * amp;
    let phi2 = aux_complex_derivative(p, kappa1, kappa2, z, 0)? * amp2;
    let dphi2 = aux_complex_derivative(p, kappa1, kappa2, z, 1)? * amp2;
    // d/dt = i omega d/dz, d/dx = -i k d/dz
    let i = Complex64::i();
    let (phi1_t, phi1_x) = (i * w.omega * dphi1, -i * w.k[0] * dphi1);
    let (phi2_t, phi2_x) = (i * w.omega * dphi2, -i * w.k[0] * dphi2);

    let pi1 = phi1_pow(alpha - 1.0)? * phi2_t * alpha - phi1_pow(alpha - 2.0)? * phi2 * phi1_t * (2.0 * a1);
    let pi2 = phi1_pow(alpha - 1.0)? * phi1_t * alpha;
    let h = phi1_pow(1.0 - alpha)? * pi1 * pi2 / alpha
        + phi1_pow(-alpha)? * phi2 * pi2 * pi2 * (a1 / (alpha * alpha))
        + phi1_pow(alpha - 1.0)? * phi1_x * phi2_x * alpha
        - phi1_pow(alpha - 2.0)? * phi2 * phi1_x * phi1_x * a1
        + phi1_pow(p.gamma)? * phi2 * (p.a2 * p.m.powf(p.beta));
    let total = 2.0 * h.re;
    if !total.is_finite() {
        return Err(Error::NonFinite(format!("Hamiltonian density at x = {x}, t = {t}")));
    }
    Ok(total)
}

/// Renormalized density from the Hamiltonian, divided by
/// `c1^alpha c2 m^(delta(alpha+1))`, with the conjugate counted as twice the
/// real part.
pub fn density_from_hamiltonian(s: &SolitonSetup, x: f64, t: f64) -> Result<f64> {
    let h = hamiltonian_density_complex(&s.params, &s.w, s.kappa1, s.kappa2, s.c2, x, t)?;
    let (d1, d2) = exponent_deltas(s.alpha, s.q, s.a1)?;
    let z = Complex64::new(0.0, s.zhat(x, t));
    let q = QReal(s.q);
    let counter = (q_exp_power(z, q, d1)? * s.kappa1 + q_exp_power(z, q, d2)? * s.kappa2) * s.lambda;
    Ok(h / s.normalization() + 2.0 * counter.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyMethod {
    ClosedForm,
    AdaptiveQuadrature,
}

/// Total normalized energy, `2 |alpha| pi` in closed form.
pub fn soliton_energy(s: &SolitonSetup, method: EnergyMethod) -> Result<f64> {
    match method {
        EnergyMethod::ClosedForm => Ok(2.0 * s.alpha.abs() * std::f64::consts::PI),
        EnergyMethod::AdaptiveQuadrature => Ok(integrate(
            |z| density_closed_form(s, z),
            f64::NEG_INFINITY,
            f64::INFINITY,
            DEFAULT_TOL,
        )?
        .value),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub zhat: Vec<f64>,
    pub density: Vec<f64>,
}

impl DensityProfile {
    /// Closed-form profile on `n` evenly spaced points of `[lo, hi]`.
    pub fn sample(s: &SolitonSetup, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) {
            return Err(Error::InvalidParameter(format!(
                "bad profile grid [{lo}, {hi}] with {n} points"
            )));
        }
        let last = (n - 1) as f64;
        let zhat: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / last).collect();
        let density = zhat.iter().map(|&z| density_closed_form(s, z)).collect();
        Ok(Self { zhat, density })
    }

    pub fn to_csv(&self) -> String {
        crate::export::csv(
            &["zhat", "density"],
            self.zhat.iter().zip(&self.density).map(|(z, d)| vec![*z, *d]),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakSample {
    pub t: f64,
    pub height: f64,
    /// `None` when the density does not depend on `x`.
    pub position: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakTrajectory {
    pub samples: Vec<PeakSample>,
    /// True when `k = 0` and the profile is uniform in space.
    pub stationary: bool,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Maximizer of a unimodal `f` starting from `guess` with initial step `step`.
fn maximize<F: Fn(f64) -> Result<f64>>(f: F, guess: f64, step: f64) -> Result<f64> {
    // bracket: a < b < c with f(b) >= f(a), f(c)
    let (mut a, mut b) = (guess - step, guess);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa > fb {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = b + 2.0 * (b - a);
    let mut fc = f(c)?;
    let mut iters = 0;
    while fc > fb {
        a = b;
        b = c;
        fb = fc;
        c = b + 2.0 * (b - a);
        fc = f(c)?;
        iters += 1;
        if iters > 200 {
            return Err(Error::NonFinite("peak bracket did not close".into()));
        }
    }
    let (mut lo, mut hi) = if a < c { (a, c) } else { (c, a) };
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > 1e-13 * (1.0 + b.abs()) {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Location and height of the density maximum in `x` at each time, found
/// numerically on [`density_from_hamiltonian`].
pub fn peak_trajectory(s: &SolitonSetup, times: &[f64]) -> Result<PeakTrajectory> {
    let k = s.k();
    if k == 0.0 {
        let samples = times
            .iter()
            .map(|&t| {
                Ok(PeakSample {
                    t,
                    height: density_from_hamiltonian(s, 0.0, t)?,
                    position: None,
                })
            })
            .collect::<Result<_>>()?;
        return Ok(PeakTrajectory {
            samples,
            stationary: true,
        });
    }
    let step = 0.5 * s.fwhm() / k.abs();
    let mut guess = 0.0;
    let mut samples = Vec::with_capacity(times.len());
    for &t in times {
        let x = maximize(|x| density_from_hamiltonian(s, x, t), guess, step)?;
        samples.push(PeakSample {
            t,
            height: density_from_hamiltonian(s, x, t)?,
            position: Some(x),
        });
        guess = x;
    }
    Ok(PeakTrajectory {
        samples,
        stationary: false,
    })
}

/// Case I density `(alpha/2) Phi^(alpha-1) (Phi_t^2 + |grad Phi|^2)
/// + (alpha theta b^2/(alpha+1)) m^2 Phi^(alpha+1)`.
pub fn hamiltonian_density_real1(phi: f64, dphi_dt: f64, dphi_dx: &[f64], p: &ModelParams) -> Result<f64> {
    if p.class != ModelClass::RealCaseI {
        return Err(Error::InvalidParameter(format!(
            "expected real1 class, got {}",
            p.class
        )));
    }
    let (alpha, theta, b) = (p.alpha, p.theta()?, p.b()?);
    let grad_sq: f64 = dphi_dx.iter().map(|d| d * d).sum();
    let kinetic = 0.5 * alpha * real_power(phi, alpha - 1.0)? * (dphi_dt * dphi_dt + grad_sq);
    let potential = alpha * theta * b * b / (alpha + 1.0) * p.m * p.m * real_power(phi, alpha + 1.0)?;
    Ok(kinetic + potential)
}

/// Case I density written with the momentum `Pi = alpha Phi^(alpha-1) Phi_t`:
/// `Phi^(1-alpha) Pi^2/(2 alpha) + (alpha/2) Phi^(alpha-1) |grad Phi|^2 + ...`.
pub fn hamiltonian_density_real1_momentum(phi: f64, pi: f64, dphi_dx: &[f64], p: &ModelParams) -> Result<f64> {
    if p.alpha == 0.0 {
        return Err(Error::Pole("momentum form at alpha = 0".into()));
    }
    let static_part = hamiltonian_density_real1(phi, 0.0, dphi_dx, p)?;
    Ok(real_power(phi, 1.0 - p.alpha)? * pi * pi / (2.0 * p.alpha) + static_part)
}

/// Field values and first derivatives at a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldJet {
    pub value: f64,
    pub dt: f64,
    pub grad: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Case II density of the pair `(Phi1, Phi2)`, velocity form
/// `Phi1^(alpha-1) Phi1_t Phi2_t + alpha Phi1^(alpha-2) Phi1_t^2 Phi2
///  + Phi1^(alpha-1) grad Phi1 . grad Phi2 + alpha Phi1^(alpha-2) |grad Phi1|^2 Phi2
///  + p Phi2 Phi1^gamma` with `p = c^(2/theta) theta b^2 m^beta`.
pub fn hamiltonian_density_real2(phi1: &FieldJet, phi2: &FieldJet, p: &ModelParams) -> Result<f64> {
    let (alpha, coupling) = real2_setup(p)?;
    let f1 = phi1.value;
    let w1 = real_power(f1, alpha - 1.0)?;
    let w2 = real_power(f1, alpha - 2.0)?;
    Ok(w1 * phi1.dt * phi2.dt
        + alpha * w2 * phi1.dt * phi1.dt * phi2.value
        + w1 * dot(&phi1.grad, &phi2.grad)
        + alpha * w2 * dot(&phi1.grad, &phi1.grad) * phi2.value
        + coupling * phi2.value * real_power(f1, p.gamma)?)
}

/// Case II density in momentum form,
/// `Phi1^(1-alpha) Pi1 Pi2 - alpha Phi2 Phi1^(-alpha) Pi2^2 + ...` with
/// `Pi1 = Phi1^(alpha-1) Phi2_t + 2 alpha Phi1^(alpha-2) Phi2 Phi1_t` and
/// `Pi2 = Phi1^(alpha-1) Phi1_t`.
pub fn hamiltonian_density_real2_momentum(phi1: &FieldJet, phi2: &FieldJet, p: &ModelParams) -> Result<f64> {
    let (alpha, coupling) = real2_setup(p)?;
    let f1 = phi1.value;
    let w1 = real_power(f1, alpha - 1.0)?;
    let w2 = real_power(f1, alpha - 2.0)?;
    let pi1 = w1 * phi2.dt + 2.0 * alpha * w2 * phi2.value * phi1.dt;
    let pi2 = w1 * phi1.dt;
    Ok(
        real_power(f1, 1.0 - alpha)? * pi1 * pi2 - alpha * phi2.value * real_power(f1, -alpha)? * pi2 * pi2
            + w1 * dot(&phi1.grad, &phi2.grad)
            + alpha * w2 * dot(&phi1.grad, &phi1.grad) * phi2.value
            + coupling * phi2.value * real_power(f1, p.gamma)?,
    )
}

fn real2_setup(p: &ModelParams) -> Result<(f64, f64)> {
    if p.class != ModelClass::RealCaseII {
        return Err(Error::InvalidParameter(format!(
            "expected real2 class, got {}",
            p.class
        )));
    }
    let (theta, b) = (p.theta()?, p.b()?);
    Ok((p.alpha, p.c.powf(2.0 / theta) * theta * b * b * p.m.powf(p.beta)))
}
