//! Residual verification of the closed-form solutions.
//!
//! Two independent paths:
//!
//! * [`pde_residual`] evaluates the spacetime field equation with
//!   fourth-order central differences of sampled `Phi` and `Phi^alpha`;
//! * [`travelwave_ode_residual`], [`aux_residual_complex`] and
//!   [`aux_residual_real2`] evaluate the reduced one-variable equations with
//!   exact derivatives.
//!
//! Every residual carries a scale, the largest magnitude among the terms of
//! the equation, so relative residuals stay meaningful near field zeros.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ModelClass, ModelParams, WaveVector};
use crate::qfunc::{q_exp_power, q_exp_power_deriv, ComplexValue, QReal};
use crate::waveforms::{
    aux_complex_derivative, case2_aux_derivatives, real_power, trig_base, Branch, FieldKind, FieldSolution,
    RealProfile, Sampler,
};

/// Metric sign convention used when evaluating the kinetic terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signature {
    /// The sign each class is solved with: `(+,-,...)` metric in spacetime,
    /// `+` branch of the reduction for real fields, `-` for complex.
    Correct,
    /// Kinetic terms negated relative to the mass term.
    Flipped,
}

impl Signature {
    fn sign(self) -> f64 {
        match self {
            Signature::Correct => 1.0,
            Signature::Flipped => -1.0,
        }
    }
}

/// A residual together with the magnitude it should be compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResidual {
    pub value: ComplexValue,
    pub scale: f64,
}

impl PointResidual {
    fn from_terms(terms: &[ComplexValue]) -> Self {
        Self::from_terms_with_floor(terms, 0.0)
    }

    /// Like `from_terms`, never comparing against less than `floor`.
    fn from_terms_with_floor(terms: &[ComplexValue], floor: f64) -> Self {
        let value = terms.iter().sum();
        let scale = terms.iter().map(|t| t.norm()).fold(floor, f64::max);
        // every term vanishes; compare absolutely
        let scale = if scale > 0.0 { scale } else { 1.0 };
        Self { value, scale }
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    pub fn rel(&self) -> f64 {
        self.value.norm() / self.scale
    }
}

/// Default finite-difference step, `1e-3 / max(omega, |k|, m)`.
pub fn default_step(w: &WaveVector) -> f64 {
    1e-3 / w.omega.abs().max(w.k_sq().sqrt()).max(w.m)
}

/// Multiple of machine epsilon applied to the magnitude of the
/// second-difference stencil contributions to obtain the smallest scale a
/// finite-difference residual is compared against.
pub const STENCIL_NOISE_FACTOR: f64 = 1e8 * f64::EPSILON;

const D1: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
const D2: [(f64, f64); 5] = [(-2.0, -1.0), (-1.0, 16.0), (0.0, -30.0), (1.0, 16.0), (2.0, -1.0)];

/// Left side of the field equation at `(x, t)`, fourth-order differences
/// with step `h` in `t` and every spatial coordinate.
pub fn pde_residual<S: Sampler + ?Sized>(
    field: &S,
    p: &ModelParams,
    x: &[f64],
    t: f64,
    h: f64,
) -> Result<PointResidual> {
    pde_residual_signed(field, p, x, t, h, Signature::Correct)
}

pub fn pde_residual_signed<S: Sampler + ?Sized>(
    field: &S,
    p: &ModelParams,
    x: &[f64],
    t: f64,
    h: f64,
    sig: Signature,
) -> Result<PointResidual> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
    }
    let dim = field.dim();
    let mut pt = x.to_vec();
    // axis 0 is time, axis i > 0 is x[i-1]; metric weight +1 for time.
    let mut at = |axis: usize, off: f64, f: &dyn Fn(&[f64], f64) -> Result<ComplexValue>| {
        if axis == 0 {
            f(x, t + off * h)
        } else {
            pt.copy_from_slice(x);
            pt[axis - 1] += off * h;
            f(&pt, t)
        }
    };
    let phi = |y: &[f64], s: f64| field.value(y, s);
    let phi_alpha = |y: &[f64], s: f64| field.power(y, s, p.alpha);

    let mut box_alpha = Complex64::new(0.0, 0.0);
    let mut grad_sq = Complex64::new(0.0, 0.0);
    let mut stencil_mag = 0.0;
    for axis in 0..=dim {
        let metric = if axis == 0 { 1.0 } else { -1.0 };
        let mut d2 = Complex64::new(0.0, 0.0);
        for (off, wgt) in D2 {
            let v = at(axis, off, &phi_alpha)?;
            stencil_mag += v.norm() * wgt.abs();
            d2 += v * wgt;
        }
        let mut d1 = Complex64::new(0.0, 0.0);
        for (off, wgt) in D1 {
            d1 += at(axis, off, &phi)? * wgt;
        }
        box_alpha += d2 / (12.0 * h * h) * metric;
        let d1 = d1 / (12.0 * h);
        grad_sq += d1 * d1 * metric;
    }
    let s = sig.sign();
    let kinetic = box_alpha * s;
    let gradient = field.power(x, t, p.alpha - 2.0)? * grad_sq * (p.a1 * s);
    let mass = field.power(x, t, p.gamma)? * (p.a2 * p.m.powf(p.beta));
    let floor = STENCIL_NOISE_FACTOR * stencil_mag / (12.0 * h * h);
    Ok(PointResidual::from_terms_with_floor(&[kinetic, gradient, mass], floor))
}

/// The reduced travelling-wave equation
/// `a2 c^(gamma-alpha) f^(gamma-alpha+2) +/- [alpha f f'' + (a1 + alpha(alpha-1)) f'^2]`
/// at phase `z`, with exact derivatives. The complex class is evaluated at
/// `i z` with the `-` sign, the real classes at `z` with `+`.
pub fn travelwave_ode_residual(p: &ModelParams, branch: Branch, z: f64) -> Result<PointResidual> {
    travelwave_ode_residual_signed(p, branch, z, Signature::Correct)
}

pub fn travelwave_ode_residual_signed(
    p: &ModelParams,
    branch: Branch,
    z: f64,
    sig: Signature,
) -> Result<PointResidual> {
    let alpha = p.alpha;
    let mass_coeff = p.a2 * p.c.powf(p.gamma - alpha);
    let grad_coeff = p.a1 + alpha * (alpha - 1.0);
    let mass_pow = p.gamma - alpha + 2.0;
    match p.class {
        ModelClass::ComplexClass => {
            let q = QReal(p.q()?);
            let zc = Complex64::new(0.0, z);
            let f = q_exp_power(zc, q, 1.0)?;
            let df = q_exp_power_deriv(zc, q, 1.0, 1)?;
            let d2f = q_exp_power_deriv(zc, q, 1.0, 2)?;
            let mass = q_exp_power(zc, q, mass_pow)? * mass_coeff;
            let s = -sig.sign();
            Ok(PointResidual::from_terms(&[
                mass,
                f * d2f * (alpha * s),
                df * df * (grad_coeff * s),
            ]))
        }
        _ => {
            let prof = RealProfile::new(p.theta()?, p.b()?, branch);
            let [f, df, d2f] = prof.derivatives(z)?;
            let base = trig_base(branch, prof.b * z);
            let mass = mass_coeff * real_power(base, prof.theta * mass_pow)?;
            let s = sig.sign();
            Ok(PointResidual::from_terms(&[
                mass.into(),
                (s * alpha * f * d2f).into(),
                (s * grad_coeff * df * df).into(),
            ]))
        }
    }
}

/// `-alpha g'' + A e_q^(q-1) g' + B e_q^(2q-2) g` at `i z` with
/// `g = kappa1 e_q^r1 + kappa2 e_q^r2`, `A = 2 a1` and
/// `B = [alpha + 2(q-1)][2 a1 + alpha(alpha + q - 1)]`.
pub fn aux_residual_complex(p: &ModelParams, kappa1: f64, kappa2: f64, z: f64) -> Result<PointResidual> {
    if p.class != ModelClass::ComplexClass {
        return Err(Error::InvalidParameter(format!(
            "expected complex class, got {}",
            p.class
        )));
    }
    if p.alpha == 0.0 {
        return Err(Error::Pole("auxiliary equation at alpha = 0".into()));
    }
    let (alpha, a1) = (p.alpha, p.a1);
    let q = p.q()?;
    let zc = Complex64::new(0.0, z);
    let a = 2.0 * a1;
    let b = (alpha + 2.0 * (q - 1.0)) * (2.0 * a1 + alpha * (alpha + q - 1.0));
    let g = aux_complex_derivative(p, kappa1, kappa2, zc, 0)?;
    let dg = aux_complex_derivative(p, kappa1, kappa2, zc, 1)?;
    let d2g = aux_complex_derivative(p, kappa1, kappa2, zc, 2)?;
    Ok(PointResidual::from_terms(&[
        d2g * -alpha,
        q_exp_power(zc, QReal(q), q - 1.0)? * dg * a,
        q_exp_power(zc, QReal(q), 2.0 * q - 2.0)? * g * b,
    ]))
}

/// The Case II auxiliary equation
/// `cos^(2 theta) g'' - 2 b alpha theta cos^(2 theta - 1) sin g'
///  - (b^2/2) cos^(2 theta - 2) (4 + 2 alpha theta - alpha^2 theta^2 + alpha^2 theta^2 cos 2bz) g`
/// with exact derivatives of the closed-form `g`.
pub fn aux_residual_real2(p: &ModelParams, chi1: f64, chi2: f64, z: f64) -> Result<PointResidual> {
    if p.class != ModelClass::RealCaseII {
        return Err(Error::InvalidParameter(format!(
            "expected real2 class, got {}",
            p.class
        )));
    }
    let (theta, b, alpha) = (p.theta()?, p.b()?, p.alpha);
    let [g, dg, d2g] = case2_aux_derivatives(p, chi1, chi2, z)?;
    let (s, c) = (b * z).sin_cos();
    let at = alpha * theta;
    let t1 = c.powf(2.0 * theta) * d2g;
    let t2 = -2.0 * b * at * c.powf(2.0 * theta - 1.0) * s * dg;
    let t3 = -0.5 * b * b * c.powf(2.0 * theta - 2.0) * (4.0 + 2.0 * at - at * at + at * at * (2.0 * b * z).cos()) * g;
    Ok(PointResidual::from_terms(&[t1.into(), t2.into(), t3.into()]))
}

/// Radical-inverse (van der Corput) value of `index` in `base`.
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let b = base as f64;
    while index > 0 {
        f /= b;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Interval of the phase `z` on which the closed form for `p` is smooth,
/// shrunk towards its centre by `fill`.
pub fn phase_window(p: &ModelParams, branch: Branch, fill: f64) -> Result<(f64, f64)> {
    const COMPLEX_HALF_WIDTH: f64 = 3.0;
    let (lo, hi) = match p.class {
        ModelClass::ComplexClass => (-COMPLEX_HALF_WIDTH, COMPLEX_HALF_WIDTH),
        _ if p.b()? == 0.0 => (-COMPLEX_HALF_WIDTH, COMPLEX_HALF_WIDTH),
        _ => {
            let b = p.b()?.abs();
            match branch {
                Branch::Cos => (-FRAC_PI_2 / b, FRAC_PI_2 / b),
                Branch::Sin => {
                    // sin(bz) > 0 on (0, pi/|b|) for b > 0, mirrored for b < 0
                    let w = 2.0 * FRAC_PI_2 / b;
                    if p.b()? > 0.0 {
                        (0.0, w)
                    } else {
                        (-w, 0.0)
                    }
                }
            }
        }
    };
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo) * fill;
    Ok((mid - half, mid + half))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub x: Vec<f64>,
    pub t: f64,
}

/// `n` deterministic Halton points whose phase `omega t - k.x` lies in
/// `[z_lo, z_hi]`.
pub fn sample_points(w: &WaveVector, n: usize, (z_lo, z_hi): (f64, f64)) -> Vec<SamplePoint> {
    let dim = w.dim();
    let k_norm = w.k_sq().sqrt();
    (1..=n as u64)
        .map(|i| {
            let z = z_lo + (z_hi - z_lo) * halton(i, PRIMES[0]);
            let u: Vec<f64> = (0..dim)
                .map(|d| 2.0 * halton(i, PRIMES[(2 + d) % PRIMES.len()]) - 1.0)
                .collect();
            if k_norm == 0.0 {
                return SamplePoint { x: u, t: z / w.omega };
            }
            let t = 2.0 * halton(i, PRIMES[1]) - 1.0;
            let khat: Vec<f64> = w.k.iter().map(|k| k / k_norm).collect();
            let along: f64 = khat.iter().zip(&u).map(|(a, b)| a * b).sum();
            let shift = (w.omega * t - z) / k_norm;
            let x = u
                .iter()
                .zip(&khat)
                .map(|(ui, ki)| ui - ki * along + ki * shift)
                .collect();
            SamplePoint { x, t }
        })
        .collect()
}

/// Per-point residuals over a sample set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub label: String,
    pub points: Vec<SamplePoint>,
    pub residual_abs: Vec<f64>,
    pub scale: Vec<f64>,
    pub residual_rel: Vec<f64>,
    pub max_rel: f64,
}

impl ResidualReport {
    pub fn from_residuals(label: impl Into<String>, points: Vec<SamplePoint>, res: &[PointResidual]) -> Self {
        let residual_rel: Vec<f64> = res.iter().map(PointResidual::rel).collect();
        Self {
            label: label.into(),
            points,
            residual_abs: res.iter().map(PointResidual::abs).collect(),
            scale: res.iter().map(|r| r.scale).collect(),
            max_rel: residual_rel.iter().copied().fold(0.0, f64::max),
            residual_rel,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Window fill used for verification sample points.
pub const SAMPLE_FILL: f64 = 0.8;

/// Finite-difference residual of `Phi1` at `n` sample points.
pub fn verify_pde(sol: &FieldSolution, n: usize, h: Option<f64>) -> Result<ResidualReport> {
    if sol.kind != FieldKind::Phi1 {
        return Err(Error::InvalidParameter("the field equation governs Phi1".into()));
    }
    let h = h.unwrap_or_else(|| default_step(&sol.wave));
    let window = phase_window(&sol.params, sol.branch, SAMPLE_FILL)?;
    let points = sample_points(&sol.wave, n, window);
    let res = points
        .iter()
        .map(|pt| pde_residual(sol, &sol.params, &pt.x, pt.t, h))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::from_residuals(
        format!("{} Phi1 finite-difference", sol.params.class),
        points,
        &res,
    ))
}

/// Exact-derivative residual of the reduced equation governing `sol`.
pub fn verify_exact(sol: &FieldSolution, n: usize) -> Result<ResidualReport> {
    let p = &sol.params;
    let window = phase_window(p, sol.branch, SAMPLE_FILL)?;
    let points = sample_points(&sol.wave, n, window);
    let res = points
        .iter()
        .map(|pt| {
            let z = sol.wave.phase(&pt.x, pt.t);
            match sol.kind {
                FieldKind::Phi1 => travelwave_ode_residual(p, sol.branch, z),
                FieldKind::Phi2Kappa { kappa1, kappa2 } => aux_residual_complex(p, kappa1, kappa2, z),
                FieldKind::Phi2Chi { chi1, chi2 } => aux_residual_real2(p, chi1, chi2, z),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let which = match sol.kind {
        FieldKind::Phi1 => "Phi1",
        _ => "Phi2",
    };
    Ok(ResidualReport::from_residuals(
        format!("{} {which} exact-derivative", p.class),
        points,
        &res,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{solve_complex_class, solve_real_case1, solve_real_case2};

    fn complex_example() -> FieldSolution {
        let p = solve_complex_class(2.0, 1.5, 0.5, 1.0, 4, 1.0).unwrap();
        FieldSolution::phi1(p, WaveVector::on_shell(vec![0.7], 1.0))
    }

    #[test]
    fn standard_plane_wave() {
        let p = solve_complex_class(1.0, 1.0, 0.0, 1.0, 4, 1.0).unwrap();
        let w = WaveVector::on_shell(vec![1.0], 1.0);
        let sol = FieldSolution::phi1(p.clone(), w.clone());
        let r = pde_residual(&sol, &p, &[0.3], 0.2, 1e-3).unwrap();
        assert!(r.rel() < 1e-8, "{}", r.rel());
    }

    #[test]
    fn complex_worked_example_passes() {
        let sol = complex_example();
        let rep = verify_pde(&sol, 50, None).unwrap();
        assert!(rep.max_rel < 1e-6, "{}", rep.max_rel);
        assert_eq!(rep.points.len(), 50);
    }

    #[test]
    fn fourth_order_convergence() {
        for sol in [
            complex_example(),
            FieldSolution::phi1(
                solve_real_case1(3.0, 1.0, 1.0, 4, 1.0).unwrap(),
                WaveVector::on_shell(vec![0.5], 1.0),
            ),
        ] {
            let p = &sol.params;
            let (x, t) = ([0.1], 0.25);
            let h = 4e-2;
            let r1 = pde_residual(&sol, p, &x, t, h).unwrap().abs();
            let r2 = pde_residual(&sol, p, &x, t, h / 2.0).unwrap().abs();
            let ratio = r1 / r2;
            assert!((12.0..=20.0).contains(&ratio), "{:?}: ratio {ratio}", p.class);
        }
    }

    #[test]
    fn detuning_is_detected_linearly() {
        let p = solve_complex_class(2.0, 1.5, 0.5, 1.0, 4, 1.0).unwrap();
        let on = WaveVector::on_shell(vec![0.7], 1.0);
        let mut slopes = Vec::new();
        for eps in [1e-3, 1e-2] {
            let w = WaveVector::new(on.omega * (1.0 + eps), on.k.clone(), 1.0);
            let sol = FieldSolution::phi1(p.clone(), w.clone());
            let rep = verify_pde(&sol, 20, None).unwrap();
            slopes.push(rep.max_rel / w.dispersion_residual().abs());
        }
        // relative residual is proportional to the dispersion residual
        assert!((slopes[0] / slopes[1] - 1.0).abs() < 0.05, "{slopes:?}");
    }

    #[test]
    fn exact_paths_vanish() {
        let p = solve_real_case1(1.0, 1.0, 1.0, 4, 1.0).unwrap();
        for z in [-1.0, 0.0, 0.5, 1.2] {
            assert!(travelwave_ode_residual(&p, Branch::Cos, z).unwrap().abs() < 1e-15);
        }
        let p = solve_real_case2(1.0, 2.0, 1.0, 1.0, 4, 1.0).unwrap();
        let w = WaveVector::on_shell(vec![0.4], 1.0);
        let rep = verify_exact(&FieldSolution::phi1(p.clone(), w.clone()), 50).unwrap();
        assert!(rep.max_rel < 1e-12, "{}", rep.max_rel);
        for (c1, c2) in [(1.0, 0.0), (0.0, 1.0)] {
            let rep = verify_exact(&FieldSolution::phi2_real(p.clone(), w.clone(), c1, c2), 50).unwrap();
            assert!(rep.max_rel < 1e-10, "{}", rep.max_rel);
        }
        assert_eq!(aux_residual_real2(&p, 0.0, 0.0, 0.3).unwrap().abs(), 0.0);
    }

    #[test]
    fn aux_complex_standard_limit() {
        let p = solve_complex_class(1.0, 1.0, 0.0, 1.0, 4, 1.0).unwrap();
        for z in [-2.0, 0.3, 1.7] {
            assert!(aux_residual_complex(&p, 1.0, 0.0, z).unwrap().abs() < 1e-15);
        }
        let p = solve_complex_class(1.3, 0.6, 0.2, 1.0, 4, 1.0).unwrap();
        assert_eq!(aux_residual_complex(&p, 0.0, 0.0, 0.5).unwrap().abs(), 0.0);
    }

    #[test]
    fn flipped_sign_does_not_vanish() {
        let sol = complex_example();
        let r = pde_residual_signed(&sol, &sol.params, &[0.1], 0.2, 1e-3, Signature::Flipped).unwrap();
        assert!(r.rel() > 0.1);
        for p in [
            solve_complex_class(2.0, 1.5, 0.5, 1.0, 4, 1.0).unwrap(),
            solve_real_case1(3.0, 2.0, 1.0, 4, 1.0).unwrap(),
            solve_real_case2(1.0, 2.0, 1.0, 1.0, 4, 1.0).unwrap(),
        ] {
            let r = travelwave_ode_residual_signed(&p, Branch::Cos, 0.3, Signature::Flipped).unwrap();
            assert!(r.rel() > 0.1, "{:?}", p.class);
        }
    }

    #[test]
    fn identically_vanishing_terms_pass() {
        // a2 = 0 and Phi^alpha linear in the phase
        let p = solve_complex_class(0.5, 0.5, 0.0, 1.0, 4, 1.0).unwrap();
        assert_eq!(p.a2, 0.0);
        let sol = FieldSolution::phi1(p, WaveVector::on_shell(vec![0.7], 1.0));
        assert!(verify_pde(&sol, 50, None).unwrap().max_rel < 1e-6);
        let detuned = FieldSolution::phi1(
            sol.params.clone(),
            WaveVector::new(1.01 * sol.wave.omega, vec![0.7], 1.0),
        );
        assert!(verify_pde(&detuned, 50, None).unwrap().max_rel < 1e-6);
    }

    #[test]
    fn stencil_outside_window_is_an_error() {
        let p = solve_real_case1(3.0, 1.0, 1.0, 4, 1.0).unwrap();
        let w = WaveVector::on_shell(vec![0.0], 1.0);
        let sol = FieldSolution::phi1(p.clone(), w);
        // cos(t) crosses zero within 2h of t = pi/2 - 1e-3
        let r = pde_residual(&sol, &p, &[0.0], FRAC_PI_2 - 1e-3, 1e-3);
        assert!(r.is_err());
    }

    #[test]
    fn halton_sequence() {
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(2, 2), 0.25);
        assert_eq!(halton(3, 2), 0.75);
        assert!((halton(1, 3) - 1.0 / 3.0).abs() < 1e-16);
        assert!((halton(4, 3) - 4.0 / 9.0).abs() < 1e-16);
    }

    #[test]
    fn sample_points_respect_window() {
        let w = WaveVector::on_shell(vec![0.6, -0.8, 0.3], 1.1);
        let pts = sample_points(&w, 50, (-0.5, 1.0));
        for pt in &pts {
            let z = w.phase(&pt.x, pt.t);
            assert!((-0.5 - 1e-12..=1.0 + 1e-12).contains(&z));
        }
        assert_eq!(pts, sample_points(&w, 50, (-0.5, 1.0)));
    }

    #[test]
    fn report_json_has_fields() {
        let rep = verify_exact(&complex_example(), 5).unwrap();
        let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        for key in ["points", "residual_abs", "scale", "residual_rel", "max_rel"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
