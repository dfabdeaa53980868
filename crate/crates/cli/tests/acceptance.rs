//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::{PI, SQRT_2};
use std::time::{Duration, Instant};

use nlkg_cli::commands::{cmd_simulate, cmd_soliton, cmd_verify, Report};
use nlkg_cli::config::{RunConfig, SIMULATE, SOLITON, VERIFY};
use nlkg_core::export::svg_series;
use nlkg_core::lattice::{run_resolution, StudyDomain};
use nlkg_core::params::{solve_complex_class, solve_real_case1};
use nlkg_core::soliton::{density_closed_form, density_from_hamiltonian, make_soliton_setup};
use nlkg_core::waveforms::{exponent_deltas, exponent_pair, phi1_complex};
use nlkg_core::{Error, WaveVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Name, optional runtime limit in seconds, check.
type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn timed<F: FnOnce() -> Outcome>(limit: Option<Duration>, f: F) -> Outcome {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let within = limit.is_none_or(|l| elapsed < l);
    let note = match limit {
        Some(l) => format!("{:.3} s (limit {} s)", elapsed.as_secs_f64(), l.as_secs_f64()),
        None => format!("{:.3} s", elapsed.as_secs_f64()),
    };
    match out {
        Ok(d) if within => Ok(format!("{d}; {note}")),
        Ok(d) => Err(format!("{d}; {note}")),
        Err(d) => Err(format!("{d}; {note}")),
    }
}

fn pairs(v: &[(&str, String)]) -> Vec<(String, String)> {
    v.iter().map(|(k, s)| (k.to_string(), s.clone())).collect()
}

fn config(spec: nlkg_cli::config::CommandSpec, v: &[(&str, String)]) -> RunConfig {
    let owned = pairs(v);
    let borrowed: Vec<(&str, &str)> = owned.iter().map(|(k, s)| (k.as_str(), s.as_str())).collect();
    RunConfig::from_pairs(spec, &borrowed).expect("acceptance configuration")
}

fn soliton_energy_matches() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (alpha, expected) in [(1.0, 2.0 * PI), (1.5, 3.0 * PI)] {
        let start = Instant::now();
        let cfg = config(
            SOLITON,
            &[
                ("alpha", alpha.to_string()),
                ("q", "2".into()),
                ("omega", SQRT_2.to_string()),
                ("k", "1".into()),
            ],
        );
        let r = cmd_soliton(&cfg).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed().as_secs_f64();
        let rel = ((r.energy_quadrature - expected) / expected).abs();
        ok &= rel <= 1e-6 && elapsed < 1.0 && r.failures().is_empty();
        notes.push(format!("alpha {alpha}: rel {rel:.2e} in {elapsed:.4} s"));
    }
    check(ok, notes.join(", "))
}

fn profile_plot_matches() -> Outcome {
    let cfg = config(
        SOLITON,
        &[("alpha", "1".into()), ("q", "2".into()), ("plot", "true".into())],
    );
    let r = cmd_soliton(&cfg).map_err(|e| e.to_string())?;
    let svg = r.svg.as_ref().ok_or("no SVG emitted")?;
    let series = svg_series(svg).ok_or("SVG series unreadable")?;
    let worst = series
        .iter()
        .map(|&(z, d)| (d - 2.0 / (1.0 + z * z)).abs())
        .fold(0.0, f64::max);
    let at = |z0: f64| series.iter().find(|(z, _)| *z == z0).map(|&(_, d)| d);
    let (peak, left, right) = (at(0.0), at(-1.0), at(1.0));
    let ok = worst <= 1e-9
        && series.len() == r.profile.zhat.len()
        && peak == Some(2.0)
        && left.is_some_and(|v| (v - 1.0).abs() <= 1e-12)
        && right.is_some_and(|v| (v - 1.0).abs() <= 1e-12);
    check(
        ok,
        format!(
            "{} points, max deviation {worst:.1e}, peak {peak:?}, at -1 {left:?}, at +1 {right:?}",
            series.len()
        ),
    )
}

fn random_sets_verify() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_917);
    let mut notes = Vec::new();
    let mut ok = true;
    for class in ["complex", "real1", "real2"] {
        let (mut worst_fd, mut worst_exact) = (0.0f64, 0.0f64);
        for _ in 0..20 {
            let mut v: Vec<(&str, String)> = vec![
                ("class", class.into()),
                ("alpha", rng.random_range(0.3..3.0).to_string()),
                ("c", rng.random_range(0.5..2.0).to_string()),
                ("m", rng.random_range(0.5..2.0).to_string()),
                ("k", rng.random_range(-1.5..1.5).to_string()),
                ("points", "50".into()),
            ];
            match class {
                "complex" => {
                    let q = if rng.random_bool(0.5) {
                        rng.random_range(0.2..0.9)
                    } else {
                        rng.random_range(1.1..2.5)
                    };
                    v.push(("q", q.to_string()));
                    v.push(("a1", rng.random_range(-1.0..1.0).to_string()));
                    v.push(("kappa1", rng.random_range(-2.0..2.0).to_string()));
                    v.push(("kappa2", rng.random_range(-2.0..2.0).to_string()));
                }
                "real1" => v.push(("b", rng.random_range(0.3..2.0).to_string())),
                _ => {
                    let theta = if rng.random_bool(0.5) {
                        rng.random_range(-2.0..-0.3)
                    } else {
                        rng.random_range(0.3..2.0)
                    };
                    v.push(("theta", theta.to_string()));
                    v.push(("b", rng.random_range(0.3..2.0).to_string()));
                    v.push(("chi1", rng.random_range(-2.0..2.0).to_string()));
                    v.push(("chi2", rng.random_range(-2.0..2.0).to_string()));
                }
            }
            let r = cmd_verify(&config(VERIFY, &v)).map_err(|e| format!("{class} {v:?}: {e}"))?;
            for c in &r.checks {
                if c.report.label.contains("finite-difference") {
                    worst_fd = worst_fd.max(c.report.max_rel);
                } else {
                    worst_exact = worst_exact.max(c.report.max_rel);
                }
                ok &= c.report.points.len() == 50;
            }
        }
        ok &= worst_fd < 1e-6 && worst_exact < 1e-10;
        notes.push(format!("{class}: fd {worst_fd:.1e} exact {worst_exact:.1e}"));
    }
    check(ok, notes.join(", "))
}

fn standard_limit_recovered() -> Outcome {
    let mut worst = 0.0f64;
    for (c, m, k) in [(1.0, 1.0, 0.3), (0.7, 2.0, -1.2), (2.5, 0.5, 0.0)] {
        let p = solve_complex_class(1.0, 1.0, 0.0, c, 4, m).map_err(|e| e.to_string())?;
        let w = WaveVector::on_shell(vec![k], m);
        for (x, t) in [(0.0, 0.0), (0.4, -1.3), (-2.0, 3.7), (5.0, 11.0)] {
            let got = phi1_complex(&p, &w, &[x], t).map_err(|e| e.to_string())?;
            let want = Complex64::new(0.0, w.omega * t - k * x).exp() * (m * c);
            worst = worst.max((got - want).norm() / want.norm());
        }
    }
    let mut exact_pair = true;
    for q in [-1.0, 0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.7] {
        let r = exponent_pair(1.0, q, 0.0).map_err(|e| e.to_string())?;
        exact_pair &= r.r1 == 1.0 - 2.0 * q && r.r2 == q;
    }
    check(
        worst <= 1e-12 && exact_pair,
        format!("plane wave rel {worst:.1e}, exponent pair exact: {exact_pair}"),
    )
}

fn detuned_wave_rejected() -> Outcome {
    let mut lowest = f64::INFINITY;
    let mut ok = true;
    for (alpha, q, k) in [(1.0, 1.5, 1.0), (2.0, 0.5, 0.5), (0.7, 2.0, -1.0), (1.0, 1.0, 0.8)] {
        let omega = 1.01 * (k * k + 1.0f64).sqrt();
        let cfg = config(
            VERIFY,
            &[
                ("class", "complex".into()),
                ("alpha", alpha.to_string()),
                ("q", q.to_string()),
                ("k", k.to_string()),
                ("omega", omega.to_string()),
            ],
        );
        let r = cmd_verify(&cfg).map_err(|e| e.to_string())?;
        let fd = r
            .checks
            .iter()
            .find(|c| c.report.label.contains("finite-difference"))
            .ok_or("no finite-difference report")?;
        lowest = lowest.min(fd.report.max_rel);
        ok &= fd.report.max_rel > 1e-3 && !fd.passed && !r.failures().is_empty();
    }
    check(ok, format!("smallest max residual {lowest:.2e} over 4 detuned waves"))
}

fn lattice_converges() -> Outcome {
    let r = cmd_simulate(&config(SIMULATE, &[])).map_err(|e| e.to_string())?;
    let orders: Vec<String> = r
        .rows
        .iter()
        .filter_map(|row| row.observed_order)
        .map(|o| format!("{o:.4}"))
        .collect();
    let drift = r.finest_log.max_energy_drift();
    let failures = r.failures();
    let domain = StudyDomain {
        t0: 0.0,
        t_end: 2.0 * PI / SQRT_2,
        ..r.domain.clone()
    };
    let p = solve_real_case1(3.0, 1.0, 1.0, 4, 1.0).map_err(|e| e.to_string())?;
    let full = run_resolution(&p, &WaveVector::on_shell(vec![1.0], 1.0), &domain, 4e-3);
    let floor_hit = matches!(full, Err(Error::PositivityFloor { .. }));
    check(
        failures.is_empty() && r.rows.len() == 3 && floor_hit,
        format!(
            "orders [{}], finest drift {drift:.1e}, full period halts at positivity floor: {floor_hit}{}",
            orders.join(", "),
            if failures.is_empty() {
                String::new()
            } else {
                format!(" ({})", failures.join("; "))
            }
        ),
    )
}

fn two_path_density_agrees() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let alpha = if rng.random_bool(0.3) {
            rng.random_range(-0.9..-0.1)
        } else {
            rng.random_range(0.1..3.0)
        };
        let q = if rng.random_bool(0.5) {
            rng.random_range(0.1..0.95)
        } else {
            rng.random_range(1.05..3.0)
        };
        let w = WaveVector::on_shell(vec![rng.random_range(-2.0..2.0)], rng.random_range(0.5..2.0));
        let s = make_soliton_setup(alpha, q, w, rng.random_range(0.5..2.0), rng.random_range(0.5..2.0), 4)
            .map_err(|e| e.to_string())?
            .with_kappa1(rng.random_range(-5.0..5.0));
        let (x, t) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let h = density_from_hamiltonian(&s, x, t).map_err(|e| e.to_string())?;
        let c = density_closed_form(&s, s.zhat(x, t));
        worst = worst.max(((h - c) / c).abs());
    }
    check(worst <= 1e-8, format!("max relative gap {worst:.1e} over 200 samples"))
}

fn delta_identities_hold() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut d1_max, mut d2_max) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let alpha = if rng.random_bool(0.5) {
            rng.random_range(-5.0..-0.01)
        } else {
            rng.random_range(0.01..5.0)
        };
        let q = rng.random_range(-3.0..4.0);
        let a1 = alpha * (1.0 - q) - alpha * alpha;
        let (d1, d2) = exponent_deltas(alpha, q, a1).map_err(|e| e.to_string())?;
        d1_max = d1_max.max(d1.abs());
        d2_max = d2_max.max((d2 - (q - 1.0)).abs());
    }
    check(
        d1_max <= 1e-12 && d2_max <= 1e-12,
        format!("max |first| {d1_max:.1e}, max |second - (q-1)| {d2_max:.1e}"),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("soliton energy by quadrature", None, soliton_energy_matches),
        ("Lorentzian profile plot", None, profile_plot_matches),
        ("randomized solution verification", Some(10), random_sets_verify),
        ("undeformed limit", None, standard_limit_recovered),
        ("dispersion selectivity", None, detuned_wave_rejected),
        ("lattice convergence and energy drift", Some(60), lattice_converges),
        ("two-path soliton density", None, two_path_density_agrees),
        ("exponent identities", None, delta_identities_hold),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        match timed(limit.map(Duration::from_secs), run) {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 8 passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
