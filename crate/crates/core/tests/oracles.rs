//! Fixed reference values: closed-form claims and hand-computed
//! arithmetic, checked through the public API.

use std::f64::consts::{FRAC_PI_6, PI, SQRT_2};

use approx::assert_relative_eq;
use nlkg_core::params::{mass_dimension, solve_complex_class, solve_real_case1, solve_real_case2, WaveVector};
use nlkg_core::qfunc::{q_exp, q_exp_power, QReal};
use nlkg_core::residual::{verify_exact, verify_pde};
use nlkg_core::soliton::{density_closed_form, make_soliton_setup, soliton_energy, EnergyMethod};
use nlkg_core::waveforms::{exponent_deltas, exponent_pair, phi1_complex, phi1_real, phi2_complex, phi2_real_case2};
use nlkg_core::{Branch, FieldSolution};
use num_complex::Complex64;

mod closed_form {
    use super::*;

    #[test]
    fn exponent_pair_at_unit_alpha() {
        for q in [0.0, 0.3, 0.6, 1.0, 1.7, 2.5] {
            let r = exponent_pair(1.0, q, 0.0).unwrap();
            assert_eq!((r.r1, r.r2), (1.0 - 2.0 * q, q));
        }
    }

    #[test]
    fn standard_limit_coefficients() {
        let p = solve_complex_class(1.0, 1.0, 0.0, 1.0, 4, 1.0).unwrap();
        assert_eq!((p.a2, p.gamma, p.beta, p.delta), (1.0, 1.0, 2.0, 1.0));
        let p = solve_real_case1(1.0, 1.0, 1.0, 4, 1.0).unwrap();
        assert_eq!((p.theta.unwrap(), p.a1, p.a2), (1.0, 0.0, 1.0));
        assert_eq!(mass_dimension(4, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn unit_alpha_complex_coefficients() {
        for (q, c) in [(0.5, 2.0), (1.5, 0.7), (2.0, 1.3)] {
            let p = solve_complex_class(1.0, q, 0.0, c, 4, 1.0).unwrap();
            assert_relative_eq!(p.a2, q * c.powf(2.0 * (1.0 - q)), max_relative = 1e-15);
            assert_relative_eq!(p.gamma, 2.0 * q - 1.0);
            assert_relative_eq!(p.beta, 2.0 * (2.0 - q), max_relative = 1e-15);
        }
    }

    #[test]
    fn delta_values() {
        for (alpha, q) in [(1.0, 2.0), (1.5, 3.0), (-0.4, 0.2)] {
            let (d1, d2) = exponent_deltas(alpha, q, alpha * (1.0 - q) - alpha * alpha).unwrap();
            assert!(d1.abs() < 1e-15);
            assert!((d2 - (q - 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn lorentzian_peak_and_energy() {
        let s = make_soliton_setup(1.0, 2.0, WaveVector::new(SQRT_2, vec![1.0], 1.0), 1.0, 1.0, 4).unwrap();
        assert_eq!(density_closed_form(&s, 0.0), 2.0);
        assert_relative_eq!(
            soliton_energy(&s, EnergyMethod::AdaptiveQuadrature).unwrap(),
            2.0 * PI,
            max_relative = 1e-8
        );
        let s = make_soliton_setup(1.0, 0.0, WaveVector::new(SQRT_2, vec![1.0], 1.0), 1.0, 1.0, 4).unwrap();
        assert_eq!(s.a1, 0.0);
    }

    #[test]
    fn conjugate_plane_wave_aux() {
        let p = solve_complex_class(1.0, 1.0, 0.0, 1.0, 4, 1.0).unwrap();
        let w = WaveVector::new(1.0, vec![0.0], 1.0);
        for t in [0.4, 2.0] {
            let v = phi2_complex(&p, &w, 1.0, 0.0, &[0.0], t).unwrap();
            assert!((v - Complex64::new(0.0, -t).exp()).norm() < 1e-15);
        }
    }
}

mod hand_computed {
    use super::*;

    #[test]
    fn q_exp_values() {
        assert_relative_eq!(q_exp(Complex64::new(1.0, 0.0), QReal(0.5)).unwrap().re, 2.25);
        let v = q_exp(Complex64::new(0.0, 1.0), QReal(2.0)).unwrap();
        assert!((v - Complex64::new(0.5, 0.5)).norm() < 1e-15);
        let v = q_exp_power(Complex64::new(0.0, 1.0), QReal(2.0), 2.0).unwrap();
        assert!((v - Complex64::new(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn solved_parameter_values() {
        let p = solve_complex_class(2.0, 1.5, 0.5, 1.0, 4, 1.0).unwrap();
        assert_relative_eq!(p.gamma, 3.0);
        assert_relative_eq!(p.delta, 2.0 / 3.0);
        assert_relative_eq!(p.beta, 4.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(p.a2, 5.5);
        let r = exponent_pair(2.0, 1.5, 0.5).unwrap();
        assert_eq!((r.r1, r.r2), (-3.0, 3.0));

        let p = solve_real_case1(3.0, 2.0, 1.0, 4, 1.0).unwrap();
        assert_eq!((p.theta.unwrap(), p.a1, p.a2), (0.5, -3.0, 6.0));

        let p = solve_real_case2(1.0, 2.0, 1.0, 1.0, 4, 1.0).unwrap();
        assert_eq!((p.a1, p.gamma, p.delta, p.beta, p.a2), (-1.0, 0.0, 1.0, 3.0, 2.0));
        let p = solve_real_case2(2.0, 1.0, 1.0, 1.0, 4, 1.0).unwrap();
        assert_eq!((p.a1, p.gamma, p.a2), (-4.0, 0.0, 2.0));
        assert_relative_eq!(p.delta, 2.0 / 3.0);
        assert_relative_eq!(p.beta, 10.0 / 3.0);
    }

    #[test]
    fn sampler_values() {
        let p = solve_complex_class(1.0, 2.0, 0.0, 1.0, 4, 1.0).unwrap();
        let w = WaveVector::new(1.0, vec![0.0], 1.0);
        let v = phi1_complex(&p, &w, &[0.0], 1.0).unwrap();
        assert!((v - Complex64::new(0.5, 0.5)).norm() < 1e-15);
        let v = phi2_complex(&p, &w, 0.0, 1.0, &[0.0], 1.0).unwrap();
        assert!((v - Complex64::new(0.0, 0.5)).norm() < 1e-15);

        let p = solve_real_case1(3.0, 2.0, 1.0, 4, 1.0).unwrap();
        let v = phi1_real(&p, &w, Branch::Cos, &[0.0], PI / 6.0).unwrap();
        assert_relative_eq!(v, 0.5f64.sqrt(), max_relative = 1e-15);

        let p = solve_real_case2(1.0, 2.0, 1.0, 1.0, 4, 1.0).unwrap();
        let v = phi2_real_case2(&p, &w, 1.0, 0.0, &[0.0], FRAC_PI_6).unwrap();
        assert_relative_eq!(v, 0.769800358919501, max_relative = 1e-14);
        let v = phi2_real_case2(&p, &w, 0.0, 1.0, &[0.0], 0.0).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn kappa2_selection() {
        let s = make_soliton_setup(1.0, 2.0, WaveVector::new(SQRT_2, vec![1.0], 1.0), 1.0, 1.0, 4).unwrap();
        assert_eq!(s.a1, -2.0);
        assert_relative_eq!(s.kappa2, -1.0 / 3.0, max_relative = 1e-15);
        let s = make_soliton_setup(1.5, 3.0, WaveVector::on_shell(vec![1.0], 1.0), 1.0, 1.0, 4).unwrap();
        assert_relative_eq!(
            soliton_energy(&s, EnergyMethod::AdaptiveQuadrature).unwrap(),
            3.0 * PI,
            max_relative = 1e-6
        );
    }

    #[test]
    fn residual_oracle_runs() {
        let p = solve_real_case2(1.0, 2.0, 1.0, 1.0, 4, 1.0).unwrap();
        let w = WaveVector::on_shell(vec![0.6], 1.0);
        assert!(
            verify_exact(&FieldSolution::phi1(p.clone(), w.clone()), 50)
                .unwrap()
                .max_rel
                < 1e-12
        );
        assert!(verify_pde(&FieldSolution::phi1(p, w), 50, None).unwrap().max_rel < 1e-6);
        let p = solve_real_case1(3.0, 2.0, 1.0, 4, 1.0).unwrap();
        let w = WaveVector::on_shell(vec![0.6], 1.0);
        for branch in [Branch::Cos, Branch::Sin] {
            let sol = FieldSolution::phi1(p.clone(), w.clone()).with_branch(branch);
            assert!(verify_exact(&sol, 50).unwrap().max_rel < 1e-12);
            assert!(verify_pde(&sol, 50, None).unwrap().max_rel < 1e-6);
        }
    }
}
