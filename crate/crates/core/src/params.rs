//! Parameter resolution for the three model classes.
//!
//! The field equation
//!
//! ```text
//! d_mu d^mu Phi^alpha + a1 Phi^(alpha-2) d_mu Phi d^mu Phi + a2 m^beta Phi^gamma = 0
//! ```
//!
//! admits travelling waves obeying `omega^2 = |k|^2 + m^2` only when its
//! coefficients satisfy class-specific algebraic relations. The solvers here
//! take the free inputs of each class and fill in the rest; [`ModelParams::validate`]
//! re-derives every relation independently of the solver that produced the set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::Record;

/// Absolute tolerance on dimensionless constraint residuals, scaled up by the
/// magnitude of the compared quantities when they exceed one.
pub const CONSTRAINT_TOL: f64 = 1e-12;

pub const DEFAULT_NU: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelClass {
    ComplexClass,
    RealCaseI,
    RealCaseII,
}

impl ModelClass {
    pub const ALL: [ModelClass; 3] = [ModelClass::ComplexClass, ModelClass::RealCaseI, ModelClass::RealCaseII];

    pub fn name(self) -> &'static str {
        match self {
            ModelClass::ComplexClass => "complex",
            ModelClass::RealCaseI => "real1",
            ModelClass::RealCaseII => "real2",
        }
    }

    pub fn is_real(self) -> bool {
        !matches!(self, ModelClass::ComplexClass)
    }
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "complex" | "complexclass" => Ok(ModelClass::ComplexClass),
            "real1" | "realcasei" | "case1" | "i" => Ok(ModelClass::RealCaseI),
            "real2" | "realcaseii" | "case2" | "ii" => Ok(ModelClass::RealCaseII),
            other => Err(Error::InvalidParameter(format!("unknown model class `{other}`"))),
        }
    }
}

/// A fully resolved parameter set.
///
/// `q` is present only for the complex class; `theta` and `b` only for the
/// real classes. `lagrangian` is false for Case I sets built with a free
/// `theta` (they solve the field equation but have no single-field
/// Lagrangian, hence no Hamiltonian).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub class: ModelClass,
    pub alpha: f64,
    pub q: Option<f64>,
    pub theta: Option<f64>,
    pub b: Option<f64>,
    pub a1: f64,
    pub a2: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub nu: u32,
    pub c: f64,
    pub m: f64,
    pub lagrangian: bool,
}

/// Energy-momentum of a plane wave. `k` has one entry per spatial dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveVector {
    pub omega: f64,
    pub k: Vec<f64>,
    pub m: f64,
}

impl WaveVector {
    pub fn new(omega: f64, k: Vec<f64>, m: f64) -> Self {
        Self { omega, k, m }
    }

    /// The wave with `omega = sqrt(|k|^2 + m^2)`.
    pub fn on_shell(k: Vec<f64>, m: f64) -> Self {
        let k_sq: f64 = k.iter().map(|v| v * v).sum();
        Self {
            omega: (k_sq + m * m).sqrt(),
            k,
            m,
        }
    }

    pub fn k_sq(&self) -> f64 {
        self.k.iter().map(|v| v * v).sum()
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    /// `omega t - k.x`.
    pub fn phase(&self, x: &[f64], t: f64) -> f64 {
        debug_assert_eq!(x.len(), self.k.len());
        self.omega * t - self.k.iter().zip(x).map(|(k, x)| k * x).sum::<f64>()
    }

    pub fn dispersion_residual(&self) -> f64 {
        dispersion_residual(self)
    }
}

/// `omega^2 - |k|^2 - m^2`.
pub fn dispersion_residual(w: &WaveVector) -> f64 {
    w.omega * w.omega - w.k_sq() - w.m * w.m
}

/// Mass dimension of the field, `(nu - 2) / (1 + alpha)`.
pub fn mass_dimension(nu: u32, alpha: f64) -> Result<f64> {
    if alpha == -1.0 {
        return Err(Error::Pole("mass dimension at alpha = -1".into()));
    }
    Ok((nu as f64 - 2.0) / (1.0 + alpha))
}

fn check_common(alpha: f64, c: f64, nu: u32, m: f64) -> Result<()> {
    if !alpha.is_finite() || !c.is_finite() || !m.is_finite() {
        return Err(Error::InvalidParameter("parameters must be finite".into()));
    }
    if alpha == -1.0 {
        return Err(Error::Pole("alpha = -1".into()));
    }
    if c <= 0.0 {
        return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
    }
    if m <= 0.0 {
        return Err(Error::InvalidParameter(format!("m must be positive, got {m}")));
    }
    if nu < 2 {
        return Err(Error::InvalidParameter(format!("nu must be at least 2, got {nu}")));
    }
    Ok(())
}

/// Complex class: `alpha`, `q`, `a1`, `c` free.
pub fn solve_complex_class(alpha: f64, q: f64, a1: f64, c: f64, nu: u32, m: f64) -> Result<ModelParams> {
    check_common(alpha, c, nu, m)?;
    if !q.is_finite() || !a1.is_finite() {
        return Err(Error::InvalidParameter("parameters must be finite".into()));
    }
    let delta = mass_dimension(nu, alpha)?;
    let gamma = alpha + 2.0 * q - 2.0;
    let beta = 2.0 - delta * (gamma - alpha);
    let a2 = (alpha * q + a1 + alpha * (alpha - 1.0)) / c.powf(2.0 * (q - 1.0));
    Ok(ModelParams {
        class: ModelClass::ComplexClass,
        alpha,
        q: Some(q),
        theta: None,
        b: None,
        a1,
        a2,
        beta,
        gamma,
        delta,
        nu,
        c,
        m,
        lagrangian: true,
    })
}

/// Real Case I with the Lagrangian-consistent `theta = 2/(1+alpha)`:
/// `alpha`, `b`, `c` free.
pub fn solve_real_case1(alpha: f64, b: f64, c: f64, nu: u32, m: f64) -> Result<ModelParams> {
    check_common(alpha, c, nu, m)?;
    let theta = 2.0 / (1.0 + alpha);
    let mut p = real_case1_free_theta(alpha, theta, b, c, nu, m)?;
    // Closed form of alpha(1 - alpha theta)/theta at this theta.
    p.a1 = -alpha * (alpha - 1.0) / 2.0;
    p.lagrangian = true;
    Ok(p)
}

/// Real Case I with `theta` left free. The result solves the field equation
/// but is flagged `lagrangian = false`.
pub fn real_case1_free_theta(alpha: f64, theta: f64, b: f64, c: f64, nu: u32, m: f64) -> Result<ModelParams> {
    if alpha == 0.0 {
        return Err(Error::Pole("alpha = 0 in real Case I".into()));
    }
    check_common(alpha, c, nu, m)?;
    if theta == 0.0 || !theta.is_finite() {
        return Err(Error::Pole("theta = 0".into()));
    }
    if b == 0.0 || !b.is_finite() {
        return Err(Error::InvalidParameter("b must be nonzero".into()));
    }
    let delta = mass_dimension(nu, alpha)?;
    Ok(ModelParams {
        class: ModelClass::RealCaseI,
        alpha,
        q: None,
        theta: Some(theta),
        b: Some(b),
        a1: alpha * (1.0 - alpha * theta) / theta,
        a2: alpha * theta * b * b,
        beta: 2.0,
        gamma: alpha,
        delta,
        nu,
        c,
        m,
        lagrangian: false,
    })
}

/// Real Case II: `alpha`, `theta`, `b`, `c` free.
pub fn solve_real_case2(alpha: f64, theta: f64, b: f64, c: f64, nu: u32, m: f64) -> Result<ModelParams> {
    if theta == 0.0 {
        return Err(Error::Pole("theta = 0 in real Case II".into()));
    }
    check_common(alpha, c, nu, m)?;
    if !theta.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter("parameters must be finite".into()));
    }
    let delta = mass_dimension(nu, alpha)?;
    let gamma = alpha - 2.0 / theta;
    Ok(ModelParams {
        class: ModelClass::RealCaseII,
        alpha,
        q: None,
        theta: Some(theta),
        b: Some(b),
        a1: -alpha * alpha,
        a2: c.powf(alpha - gamma) * alpha * theta * b * b,
        beta: 2.0 + 2.0 * delta / theta,
        gamma,
        delta,
        nu,
        c,
        m,
        lagrangian: true,
    })
}

fn check_relation(name: &'static str, lhs: f64, rhs: f64) -> Result<()> {
    let scale = 1f64.max(lhs.abs()).max(rhs.abs());
    let residual = lhs - rhs;
    if residual.is_finite() && residual.abs() <= CONSTRAINT_TOL * scale {
        Ok(())
    } else {
        Err(Error::Constraint { name, residual })
    }
}

fn need(v: Option<f64>, what: &str, class: ModelClass) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidParameter(format!("{class} parameters require `{what}`")))
}

impl ModelParams {
    pub fn q(&self) -> Result<f64> {
        need(self.q, "q", self.class)
    }

    pub fn theta(&self) -> Result<f64> {
        need(self.theta, "theta", self.class)
    }

    pub fn b(&self) -> Result<f64> {
        need(self.b, "b", self.class)
    }

    /// Field amplitude `c m^delta`.
    pub fn amplitude(&self) -> f64 {
        self.c * self.m.powf(self.delta)
    }

    /// Re-checks every relation of the class from scratch.
    pub fn validate(&self) -> Result<()> {
        let (alpha, c, m) = (self.alpha, self.c, self.m);
        check_common(alpha, c, self.nu, m)?;
        check_relation("delta = (nu-2)/(1+alpha)", self.delta, mass_dimension(self.nu, alpha)?)?;
        check_relation(
            "beta = 2 - delta(gamma-alpha)",
            self.beta,
            2.0 - self.delta * (self.gamma - alpha),
        )?;
        match self.class {
            ModelClass::ComplexClass => {
                if self.theta.is_some() || self.b.is_some() {
                    return Err(Error::InvalidParameter("complex class takes no theta or b".into()));
                }
                let q = self.q()?;
                check_relation("gamma - alpha + 2 = 2q", self.gamma - alpha + 2.0, 2.0 * q)?;
                check_relation(
                    "a2 c^(2(q-1)) = alpha q + a1 + alpha(alpha-1)",
                    self.a2 * c.powf(2.0 * (q - 1.0)),
                    alpha * q + self.a1 + alpha * (alpha - 1.0),
                )?;
            }
            ModelClass::RealCaseI => {
                if self.q.is_some() {
                    return Err(Error::InvalidParameter("real classes take no q".into()));
                }
                let (theta, b) = (self.theta()?, self.b()?);
                if alpha == 0.0 || theta == 0.0 || b == 0.0 {
                    return Err(Error::Pole("alpha, theta and b must be nonzero in Case I".into()));
                }
                check_relation("gamma = alpha", self.gamma, alpha)?;
                check_relation("beta = 2", self.beta, 2.0)?;
                check_relation(
                    "a1 = alpha(1 - alpha theta)/theta",
                    self.a1,
                    alpha * (1.0 - alpha * theta) / theta,
                )?;
                check_relation("a2 = alpha theta b^2", self.a2, alpha * theta * b * b)?;
                if self.lagrangian {
                    check_relation("theta = 2/(1+alpha)", theta, 2.0 / (1.0 + alpha))?;
                }
                let (lead, mass) = case1_dispersion_pair(self)?;
                check_relation("-alpha theta b^2 + (a1+alpha^2) theta^2 b^2 = 0", lead, 0.0)?;
                check_relation("a2 c^(gamma-alpha) = (a1+alpha^2) theta^2 b^2", mass, 0.0)?;
            }
            ModelClass::RealCaseII => {
                if self.q.is_some() {
                    return Err(Error::InvalidParameter("real classes take no q".into()));
                }
                let (theta, b) = (self.theta()?, self.b()?);
                if theta == 0.0 {
                    return Err(Error::Pole("theta = 0".into()));
                }
                check_relation("a1 = -alpha^2", self.a1, -alpha * alpha)?;
                check_relation("alpha - gamma = 2/theta", alpha - self.gamma, 2.0 / theta)?;
                check_relation("beta = 2 + 2 delta/theta", self.beta, 2.0 + 2.0 * self.delta / theta)?;
                check_relation(
                    "a2 = c^(alpha-gamma) alpha theta b^2",
                    self.a2,
                    c.powf(alpha - self.gamma) * alpha * theta * b * b,
                )?;
                check_relation(
                    "(a1+alpha^2) theta^2 b^2 = 0",
                    (self.a1 + alpha * alpha) * theta * theta * b * b,
                    0.0,
                )?;
            }
        }
        Ok(())
    }

    pub fn to_record(&self) -> Record {
        let mut r = Record::new();
        r.set("class", self.class);
        r.set("alpha", self.alpha);
        if let Some(q) = self.q {
            r.set("q", q);
        }
        if let Some(theta) = self.theta {
            r.set("theta", theta);
        }
        if let Some(b) = self.b {
            r.set("b", b);
        }
        r.set("a1", self.a1);
        r.set("a2", self.a2);
        r.set("beta", self.beta);
        r.set("gamma", self.gamma);
        r.set("delta", self.delta);
        r.set("nu", self.nu);
        r.set("c", self.c);
        r.set("m", self.m);
        r.set("lagrangian", self.lagrangian);
        r
    }

    /// Reads a record written by [`ModelParams::to_record`] and validates it.
    pub fn from_record(r: &Record) -> Result<Self> {
        r.reject_unknown(&[
            "class",
            "alpha",
            "q",
            "theta",
            "b",
            "a1",
            "a2",
            "beta",
            "gamma",
            "delta",
            "nu",
            "c",
            "m",
            "lagrangian",
        ])?;
        let p = ModelParams {
            class: r.required("class")?,
            alpha: r.required("alpha")?,
            q: r.parsed("q")?,
            theta: r.parsed("theta")?,
            b: r.parsed("b")?,
            a1: r.required("a1")?,
            a2: r.required("a2")?,
            beta: r.required("beta")?,
            gamma: r.required("gamma")?,
            delta: r.required("delta")?,
            nu: r.required("nu")?,
            c: r.required("c")?,
            m: r.required("m")?,
            lagrangian: r.parsed("lagrangian")?.unwrap_or(true),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn to_text(&self) -> String {
        self.to_record().to_text()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_record(&Record::parse(text)?)
    }
}

/// Left sides of the two Case I power-matching equations:
/// `-alpha theta b^2 + (a1+alpha^2) theta^2 b^2` and
/// `-a2 c^(gamma-alpha) + (a1+alpha^2) theta^2 b^2`.
pub fn case1_dispersion_pair(p: &ModelParams) -> Result<(f64, f64)> {
    let (theta, b) = (p.theta()?, p.b()?);
    let s = (p.a1 + p.alpha * p.alpha) * theta * theta * b * b;
    Ok((-p.alpha * theta * b * b + s, -p.a2 * p.c.powf(p.gamma - p.alpha) + s))
}

impl FromStr for ModelParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_text(s)
    }
}
