//! Closed-form travelling-wave samplers.
//!
//! Complex class: `Phi1 = c m^delta e_q(z)` with `z = i(omega t - k.x)` and the
//! auxiliary `Phi2 = c2 m^delta [kappa1 e_q^r1 + kappa2 e_q^r2]`.
//! Real classes: `Phi1 = c m^delta cos(b z)^theta` (or `sin`) with
//! `z = omega t - k.x`; Case II also has a closed-form auxiliary field.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ModelClass, ModelParams, WaveVector};
use crate::qfunc::{complex_powf, q_exp_power, q_exp_power_deriv, ComplexValue, QReal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `cos(bz)^theta`, sampled on `|bz| < pi/2` for fractional powers.
    Cos,
    /// `sin(bz)^theta`, sampled on `0 < bz < pi` for fractional powers.
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FieldKind {
    Phi1,
    /// Complex-class auxiliary field.
    Phi2Kappa {
        kappa1: f64,
        kappa2: f64,
    },
    /// Case II auxiliary field.
    Phi2Chi {
        chi1: f64,
        chi2: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub r1: f64,
    pub r2: f64,
}

/// Anything that can be evaluated on spacetime points.
pub trait Sampler {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64], t: f64) -> Result<ComplexValue>;

    /// `Phi^p` on the sheet the closed form lives on. Defaults to the
    /// principal power of [`Sampler::value`].
    fn power(&self, x: &[f64], t: f64, p: f64) -> Result<ComplexValue> {
        complex_powf(self.value(x, t)?, p)
    }
}

/// A closed-form solution bound to its parameters and wave vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSolution {
    pub params: ModelParams,
    pub wave: WaveVector,
    pub kind: FieldKind,
    pub branch: Branch,
    /// Amplitude of the auxiliary field.
    pub c2: f64,
}

impl FieldSolution {
    pub fn phi1(params: ModelParams, wave: WaveVector) -> Self {
        Self {
            params,
            wave,
            kind: FieldKind::Phi1,
            branch: Branch::Cos,
            c2: 1.0,
        }
    }

    pub fn phi2_complex(params: ModelParams, wave: WaveVector, kappa1: f64, kappa2: f64) -> Self {
        Self {
            kind: FieldKind::Phi2Kappa { kappa1, kappa2 },
            ..Self::phi1(params, wave)
        }
    }

    pub fn phi2_real(params: ModelParams, wave: WaveVector, chi1: f64, chi2: f64) -> Self {
        Self {
            kind: FieldKind::Phi2Chi { chi1, chi2 },
            ..Self::phi1(params, wave)
        }
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }

    pub fn with_c2(mut self, c2: f64) -> Self {
        self.c2 = c2;
        self
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.wave.dim() {
            return Err(Error::InvalidParameter(format!(
                "point has {} coordinates, wave vector has {}",
                x.len(),
                self.wave.dim()
            )));
        }
        Ok(())
    }
}

impl Sampler for FieldSolution {
    fn dim(&self) -> usize {
        self.wave.dim()
    }

    fn value(&self, x: &[f64], t: f64) -> Result<ComplexValue> {
        self.check_dim(x)?;
        let p = &self.params;
        match (self.kind, p.class) {
            (FieldKind::Phi1, ModelClass::ComplexClass) => phi1_complex(p, &self.wave, x, t),
            (FieldKind::Phi1, _) => phi1_real(p, &self.wave, self.branch, x, t).map(Complex64::from),
            (FieldKind::Phi2Kappa { kappa1, kappa2 }, ModelClass::ComplexClass) => {
                Ok(phi2_complex(p, &self.wave, kappa1, kappa2, x, t)? * self.c2)
            }
            (FieldKind::Phi2Chi { chi1, chi2 }, ModelClass::RealCaseII) => {
                if self.branch != Branch::Cos {
                    return Err(Error::InvalidParameter(
                        "the Case II auxiliary field is only defined for the cosine branch".into(),
                    ));
                }
                Ok(Complex64::from(
                    phi2_real_case2(p, &self.wave, chi1, chi2, x, t)? * self.c2,
                ))
            }
            (kind, class) => Err(Error::InvalidParameter(format!(
                "field {kind:?} is not defined for the {class} class"
            ))),
        }
    }

    fn power(&self, x: &[f64], t: f64, pw: f64) -> Result<ComplexValue> {
        self.check_dim(x)?;
        let p = &self.params;
        if self.kind != FieldKind::Phi1 {
            return complex_powf(self.value(x, t)?, pw);
        }
        let amp = p.amplitude().powf(pw);
        match p.class {
            ModelClass::ComplexClass => {
                let z = Complex64::new(0.0, self.wave.phase(x, t));
                Ok(q_exp_power(z, QReal(p.q()?), pw)? * amp)
            }
            _ => {
                let (theta, b) = (p.theta()?, p.b()?);
                let s = trig_base(self.branch, b * self.wave.phase(x, t));
                Ok(Complex64::from(real_power(s, theta * pw)? * amp))
            }
        }
    }
}

/// `cos(u)` or `sin(u)`.
pub fn trig_base(branch: Branch, u: f64) -> f64 {
    match branch {
        Branch::Cos => u.cos(),
        Branch::Sin => u.sin(),
    }
}

fn is_integer(v: f64) -> bool {
    v.fract() == 0.0
}

/// `base^e` for a real base; non-positive bases are only admitted with
/// integer exponents.
pub fn real_power(base: f64, e: f64) -> Result<f64> {
    if base > 0.0 {
        Ok(base.powf(e))
    } else if is_integer(e) && (base != 0.0 || e >= 0.0) {
        Ok(base.powi(e as i32))
    } else if base == 0.0 && e < 0.0 {
        Err(Error::Singularity(format!("0 raised to {e}")))
    } else {
        Err(Error::Domain(format!(
            "non-positive base {base} raised to non-integer {e}"
        )))
    }
}

/// `m^delta c e_q(z)`, `z = i(omega t - k.x)`.
pub fn phi1_complex(p: &ModelParams, w: &WaveVector, x: &[f64], t: f64) -> Result<ComplexValue> {
    if p.class != ModelClass::ComplexClass {
        return Err(Error::InvalidParameter(format!(
            "expected complex class, got {}",
            p.class
        )));
    }
    let z = Complex64::new(0.0, w.phase(x, t));
    Ok(q_exp_power(z, QReal(p.q()?), 1.0)? * p.amplitude())
}

/// Exponents of the two power solutions of the complex auxiliary equation.
pub fn exponent_pair(alpha: f64, q: f64, a1: f64) -> Result<ExponentPair> {
    if alpha == 0.0 {
        return Err(Error::Pole("exponent pair at alpha = 0".into()));
    }
    Ok(ExponentPair {
        // (2 - alpha - 2q) and (2 a1 - alpha + q alpha + alpha^2)/alpha, grouped
        // so that alpha = 1, a1 = 0 gives (1 - 2q, q) without rounding.
        r1: (2.0 - alpha) - 2.0 * q,
        r2: 2.0 * a1 / alpha + q + (alpha - 1.0),
    })
}

/// `(Delta1, Delta2)` with `Delta_i = r_i + 2q + alpha - 2`; `Delta2` is
/// evaluated from its closed form `3(q-1) + 2 a1/alpha + 2 alpha`.
pub fn exponent_deltas(alpha: f64, q: f64, a1: f64) -> Result<(f64, f64)> {
    let r = exponent_pair(alpha, q, a1)?;
    let d1 = r.r1 + 2.0 * q + alpha - 2.0;
    let d2 = 3.0 * (q - 1.0) + 2.0 * a1 / alpha + 2.0 * alpha;
    Ok((d1, d2))
}

/// `m^delta [kappa1 e_q^r1 + kappa2 e_q^r2]` (auxiliary amplitude `c2 = 1`).
pub fn phi2_complex(
    p: &ModelParams,
    w: &WaveVector,
    kappa1: f64,
    kappa2: f64,
    x: &[f64],
    t: f64,
) -> Result<ComplexValue> {
    let z = Complex64::new(0.0, w.phase(x, t));
    Ok(aux_complex_derivative(p, kappa1, kappa2, z, 0)? * p.m.powf(p.delta))
}

/// n-th z-derivative of `g(z) = kappa1 e_q^r1 + kappa2 e_q^r2`.
pub fn aux_complex_derivative(
    p: &ModelParams,
    kappa1: f64,
    kappa2: f64,
    z: ComplexValue,
    n: u32,
) -> Result<ComplexValue> {
    let q = p.q()?;
    let r = exponent_pair(p.alpha, q, p.a1)?;
    let mut g = Complex64::new(0.0, 0.0);
    if kappa1 != 0.0 {
        g += q_exp_power_deriv(z, QReal(q), r.r1, n)? * kappa1;
    }
    if kappa2 != 0.0 {
        g += q_exp_power_deriv(z, QReal(q), r.r2, n)? * kappa2;
    }
    Ok(g)
}

/// `c m^delta cos(bz)^theta` (or `sin`), `z = omega t - k.x`.
pub fn phi1_real(p: &ModelParams, w: &WaveVector, branch: Branch, x: &[f64], t: f64) -> Result<f64> {
    if !p.class.is_real() {
        return Err(Error::InvalidParameter(format!(
            "expected a real class, got {}",
            p.class
        )));
    }
    let prof = RealProfile::new(p.theta()?, p.b()?, branch);
    Ok(prof.value(w.phase(x, t))? * p.amplitude())
}

/// `f(z) = trig(bz)^theta` with exact derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealProfile {
    pub theta: f64,
    pub b: f64,
    pub branch: Branch,
}

impl RealProfile {
    pub fn new(theta: f64, b: f64, branch: Branch) -> Self {
        Self { theta, b, branch }
    }

    pub fn value(&self, z: f64) -> Result<f64> {
        real_power(trig_base(self.branch, self.b * z), self.theta)
    }

    /// `(f, f', f'')` at `z`.
    pub fn derivatives(&self, z: f64) -> Result<[f64; 3]> {
        let (th, b) = (self.theta, self.b);
        let u = self.b * z;
        // s = base, ds = d(base)/du; d2s = -s for both branches.
        let (s, ds) = match self.branch {
            Branch::Cos => (u.cos(), -u.sin()),
            Branch::Sin => (u.sin(), u.cos()),
        };
        let f = real_power(s, th)?;
        if th == 0.0 {
            return Ok([f, 0.0, 0.0]);
        }
        let sm1 = real_power(s, th - 1.0)?;
        let df = th * b * sm1 * ds;
        let d2f = if th == 1.0 {
            -b * b * s
        } else {
            th * (th - 1.0) * b * b * real_power(s, th - 2.0)? * ds * ds - th * b * b * f
        };
        Ok([f, df, d2f])
    }
}

/// Case II auxiliary profile
/// `g = cos^p [chi1 sin + chi2 (cos - 2 sin atan(cos/(sin - 1)))]`,
/// `p = -1 - alpha theta`, arguments `b z`.
pub fn phi2_real_case2(p: &ModelParams, w: &WaveVector, chi1: f64, chi2: f64, x: &[f64], t: f64) -> Result<f64> {
    if p.class != ModelClass::RealCaseII {
        return Err(Error::InvalidParameter(format!(
            "expected real2 class, got {}",
            p.class
        )));
    }
    let [g, _, _] = case2_aux_derivatives(p, chi1, chi2, w.phase(x, t))?;
    Ok(g * p.m.powf(p.delta))
}

/// `(g, g', g'')` of the Case II auxiliary profile at `z`.
///
/// The arctangent term has derivative `-b/2` on the window, which gives the
/// closed-form derivatives used here.
pub fn case2_aux_derivatives(p: &ModelParams, chi1: f64, chi2: f64, z: f64) -> Result<[f64; 3]> {
    let (theta, b) = (p.theta()?, p.b()?);
    let u = b * z;
    let (s, c) = u.sin_cos();
    if c <= 0.0 {
        return Err(Error::Domain(format!("cos(bz) = {c} is not positive at z = {z}")));
    }
    if s == 1.0 {
        return Err(Error::Singularity(format!("sin(bz) = 1 at z = {z}")));
    }
    if chi1 == 0.0 && chi2 == 0.0 {
        return Ok([0.0; 3]);
    }
    let pw = -1.0 - p.alpha * theta;
    let h = (c / (s - 1.0)).atan();

    let cp = c.powf(pw);
    let dcp = -pw * b * c.powf(pw - 1.0) * s;
    let d2cp = pw * (pw - 1.0) * b * b * c.powf(pw - 2.0) * s * s - pw * b * b * cp;

    // G = chi1 sin + chi2 (cos - 2 sin h), with h' = -b/2
    let gg = chi1 * s + chi2 * (c - 2.0 * s * h);
    let dg = chi1 * b * c + chi2 * (-2.0 * b * c * h);
    let d2g = -chi1 * b * b * s + chi2 * (2.0 * b * b * s * h + b * b * c);

    Ok([cp * gg, dcp * gg + cp * dg, d2cp * gg + 2.0 * dcp * dg + cp * d2g])
}
