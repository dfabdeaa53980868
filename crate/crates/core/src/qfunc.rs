//! Complex q-exponential and the power algebra built on it.
//!
//! `e_q(z) = [1 + (1-q) z]^{1/(1-q)}` is extended to complex `z` through
//! principal-branch powers. Every power of `e_q` is evaluated as a single
//! principal power of the base `w = 1 + (1-q) z`, so that products and
//! derivatives of different powers stay on one sheet:
//! `e_q^a * e_q^b == e_q^{a+b}` and `d/dz e_q^r = r e_q^{r+q-1}` hold exactly
//! wherever `w` is off the negative real axis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

/// Deformations closer to 1 than this are evaluated with the ordinary
/// exponential.
pub const UNDEFORMED_TOL: f64 = 1e-12;

/// Deformation parameter of the q-exponential.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct QReal(pub f64);

impl QReal {
    pub fn value(self) -> f64 {
        self.0
    }

    /// `q == 1` up to [`UNDEFORMED_TOL`].
    pub fn is_undeformed(self) -> bool {
        (self.0 - 1.0).abs() < UNDEFORMED_TOL
    }

    /// `1 - q`.
    pub fn one_minus(self) -> f64 {
        1.0 - self.0
    }
}

impl From<f64> for QReal {
    fn from(q: f64) -> Self {
        QReal(q)
    }
}

/// Principal logarithm with the imaginary part in `(-pi, pi]`.
fn principal_ln(z: Complex64) -> Complex64 {
    let mut arg = z.im.atan2(z.re);
    if arg == -std::f64::consts::PI {
        arg = std::f64::consts::PI;
    }
    Complex64::new(z.norm().ln(), arg)
}

/// Principal-branch power `exp(exponent * Log(base))`.
///
/// Integer real exponents are evaluated by repeated multiplication; they are
/// single-valued, so the result is identical on every branch.
pub fn complex_pow(base: ComplexValue, exponent: ComplexValue) -> Result<ComplexValue> {
    if base.re == 0.0 && base.im == 0.0 {
        return if exponent.re > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else if exponent.re < 0.0 {
            Err(Error::Pole(format!("0 raised to {exponent}")))
        } else if exponent.im == 0.0 {
            Ok(Complex64::new(1.0, 0.0))
        } else {
            Err(Error::Domain(format!("0 raised to {exponent}")))
        };
    }
    if exponent.im == 0.0 && exponent.re.fract() == 0.0 && exponent.re.abs() <= 64.0 {
        return Ok(base.powi(exponent.re as i32));
    }
    Ok((exponent * principal_ln(base)).exp())
}

/// Principal power with a real exponent.
pub fn complex_powf(base: ComplexValue, exponent: f64) -> Result<ComplexValue> {
    complex_pow(base, Complex64::new(exponent, 0.0))
}

/// `1 + (1-q) z`.
pub fn q_base(z: ComplexValue, q: QReal) -> ComplexValue {
    Complex64::new(1.0, 0.0) + z * q.one_minus()
}

/// The q-exponential `e_q(z)`; reduces to `exp(z)` for `q = 1`.
pub fn q_exp(z: ComplexValue, q: QReal) -> Result<ComplexValue> {
    q_exp_power(z, q, 1.0)
}

/// `e_q(z)^r`, evaluated as the single principal power `[1+(1-q)z]^{r/(1-q)}`.
pub fn q_exp_power(z: ComplexValue, q: QReal, r: f64) -> Result<ComplexValue> {
    if q.is_undeformed() {
        return Ok((z * r).exp());
    }
    let w = q_base(z, q);
    complex_powf(w, r / q.one_minus()).map_err(|e| match e {
        Error::Pole(_) => Error::Pole(format!("e_q(z)^{r} at z = {z}, q = {}", q.0)),
        other => other,
    })
}

/// Falling factorial of the derivative rule: `prod_{j<n} (r + j(q-1))`.
pub fn q_exp_power_deriv_coeff(q: QReal, r: f64, n: u32) -> f64 {
    let step = q.0 - 1.0;
    (0..n).map(|j| r + j as f64 * step).product()
}

/// n-th derivative of `e_q(z)^r` in `z`, from iterating
/// `d/dz e_q^r = r e_q^{r+q-1}`:
/// `prod_{j<n} (r + j(q-1)) * e_q^{r + n(q-1)}`.
pub fn q_exp_power_deriv(z: ComplexValue, q: QReal, r: f64, n: u32) -> Result<ComplexValue> {
    let coeff = q_exp_power_deriv_coeff(q, r, n);
    if coeff == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let p = q_exp_power(z, q, r + n as f64 * (q.0 - 1.0))?;
    Ok(p * coeff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn pow_examples() {
        assert_eq!(complex_pow(c(1.0, 0.0), c(0.37, 0.0)).unwrap(), c(1.0, 0.0));
        let r = complex_pow(c(-1.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!(close(r, c(0.0, 1.0), 1e-15), "{r}");
        assert_eq!(complex_pow(c(0.0, 1.0), c(2.0, 0.0)).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn pow_principal_branch_on_negative_axis() {
        // -1 - 0i must still use arg = +pi
        let r = complex_pow(c(-1.0, -0.0), c(0.5, 0.0)).unwrap();
        assert!(close(r, c(0.0, 1.0), 1e-15), "{r}");
        let r = complex_pow(c(-4.0, 0.0), c(1.5, 0.0)).unwrap();
        assert!(close(r, c(0.0, -8.0), 1e-13), "{r}");
    }

    #[test]
    fn pow_zero_base() {
        assert_eq!(complex_pow(c(0.0, 0.0), c(2.5, 1.0)).unwrap(), c(0.0, 0.0));
        assert!(matches!(complex_pow(c(0.0, 0.0), c(-1.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(complex_pow(c(0.0, 0.0), c(0.0, 1.0)), Err(Error::Domain(_))));
        assert_eq!(complex_pow(c(0.0, 0.0), c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn q_exp_examples() {
        for q in [0.2, 0.5, 1.0, 1.7, 3.0] {
            assert_eq!(q_exp(c(0.0, 0.0), q.into()).unwrap(), c(1.0, 0.0));
        }
        assert_abs_diff_eq!(q_exp(c(1.0, 0.0), 0.5.into()).unwrap().re, 2.25, epsilon = 1e-15);
        let v = q_exp(c(0.0, 1.0), 2.0.into()).unwrap();
        assert!(close(v, c(0.5, 0.5), 1e-15), "{v}");
    }

    #[test]
    fn q_exp_pole() {
        // q = 2: pole at z = 1/(q-1) = 1
        assert!(matches!(q_exp(c(1.0, 0.0), 2.0.into()), Err(Error::Pole(_))));
        // q < 1: the base vanishes with a positive exponent
        assert_eq!(q_exp(c(-2.0, 0.0), 0.5.into()).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn q_exp_undeformed_is_exp() {
        let z = c(0.3, -1.2);
        assert_eq!(q_exp(z, 1.0.into()).unwrap(), z.exp());
        assert_eq!(q_exp(z, (1.0 + 1e-13).into()).unwrap(), z.exp());
    }

    #[test]
    fn q_exp_power_examples() {
        let z = c(0.4, 0.9);
        for q in [0.3, 1.0, 2.2] {
            assert_eq!(q_exp_power(z, q.into(), 0.0).unwrap(), c(1.0, 0.0));
            assert_eq!(q_exp_power(z, q.into(), 1.0).unwrap(), q_exp(z, q.into()).unwrap());
        }
        assert_eq!(q_exp_power(c(0.0, 1.0), 2.0.into(), -1.0).unwrap(), c(1.0, -1.0));
    }

    #[test]
    fn derivative_examples() {
        let z = c(0.2, 0.7);
        for q in [0.4, 1.5, 2.0] {
            let q: QReal = q.into();
            let d1 = q_exp_power_deriv(z, q, 1.0, 1).unwrap();
            let expect = q_exp_power(z, q, q.0).unwrap();
            assert!(close(d1, expect, 1e-14 * expect.norm()));
            let d2 = q_exp_power_deriv(z, q, 1.0, 2).unwrap();
            let expect = q_exp_power(z, q, 2.0 * q.0 - 1.0).unwrap() * q.0;
            assert!(close(d2, expect, 1e-14 * expect.norm()));
            assert_eq!(
                q_exp_power_deriv(z, q, 1.3, 0).unwrap(),
                q_exp_power(z, q, 1.3).unwrap()
            );
        }
        let d = q_exp_power_deriv(c(0.0, 0.0), 1.0.into(), 2.0, 1).unwrap();
        assert_eq!(d, c(2.0, 0.0));
    }

    #[test]
    fn functional_identity() {
        for (z, q) in [(c(0.3, 2.0), 0.4), (c(-1.0, 0.5), 1.8), (c(0.0, -3.0), 2.5)] {
            let q: QReal = q.into();
            let e = q_exp(z, q).unwrap();
            let back = complex_powf(e, q.one_minus()).unwrap();
            let w = q_base(z, q);
            assert!(close(back, w, 1e-13 * w.norm()), "{back} vs {w}");
        }
    }
}
