use std::f64::consts::PI;

use super::quadrature::{quadrature, DEFAULT_TOL};
use super::turning::{find_turning_intervals_with, TurningIntervals, SCAN_POINTS};
use crate::deform::{form_energy, DeformedSystem, EvaluableFunction, IntegrandForm};
use crate::error::Result;
use crate::exact::Variable;
use crate::systems::{physical_energy, Family, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwkbOptions {
    /// Reduced form; `None` picks the system's default.
    pub form: Option<IntegrandForm>,
    pub tol: f64,
    pub scan_points: usize,
}

impl Default for SwkbOptions {
    fn default() -> Self {
        SwkbOptions {
            form: None,
            tol: DEFAULT_TOL,
            scan_points: SCAN_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwkbResult {
    /// Node count of the deformed eigenstate.
    pub n: usize,
    /// Index of the base level it corresponds to.
    pub breve_n: usize,
    pub integral: f64,
    pub err: f64,
    pub intervals: TurningIntervals,
}

/// `(I - n pi) / I`, and 0 at `n = 0`.
pub fn relative_error(integral: f64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        (integral - n as f64 * PI) / integral
    }
}

fn integrate(
    w2: &EvaluableFunction,
    energy: f64,
    measure: impl Fn(f64) -> f64,
    scan_points: usize,
    tol: f64,
) -> Result<(f64, TurningIntervals)> {
    let intervals = find_turning_intervals_with(w2, energy, w2.domain, scan_points)?;
    let f = |t: f64| (energy - w2.eval(t)).max(0.0).sqrt() * measure(t);
    let mut total = 0.0;
    for &(a, b) in &intervals.intervals {
        total += quadrature(&f, a, b, tol)?;
    }
    Ok((total, intervals))
}

fn ground_result(n: usize) -> SwkbResult {
    SwkbResult {
        n,
        breve_n: 0,
        integral: 0.0,
        err: 0.0,
        intervals: TurningIntervals {
            intervals: Vec::new(),
            energy: 0.0,
        },
    }
}

/// SWKB integral of the state with `n` nodes, in the default reduced form.
pub fn swkb_integral(dsys: &DeformedSystem, n: usize) -> Result<SwkbResult> {
    swkb_integral_with(dsys, n, &SwkbOptions::default())
}

pub fn swkb_integral_with(dsys: &DeformedSystem, n: usize, opts: &SwkbOptions) -> Result<SwkbResult> {
    if n == 0 {
        return Ok(ground_result(0));
    }
    let form = opts.form.unwrap_or_else(|| dsys.default_form());
    let breve_n = dsys.level_index(n);
    let energy = form_energy(&dsys.base, form, breve_n);
    let w2 = dsys.logderiv_sq(form)?;
    let (integral, intervals) = integrate(&w2, energy, |t| form.measure(t), opts.scan_points, opts.tol)?;
    Ok(SwkbResult {
        n,
        breve_n,
        integral,
        err: relative_error(integral, n),
        intervals,
    })
}

/// SWKB integral evaluated in the physical coordinate `x` with explicit
/// `hbar` and `omega`, divided by `hbar`.
///
/// The reduced variable is `xi = sqrt(omega/hbar) x` (H), `z = (omega/hbar)
/// x^2` (L) or `y = cos 2x` (J); the superpotential is
/// `hbar u'(x) d/du ln|phi_0|`.
pub fn swkb_integral_dimensionful(dsys: &DeformedSystem, n: usize, hbar: f64, omega: f64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let level = dsys.level_index(n) as f64;
    let spec = &dsys.base;
    let sys = dsys.clone();
    let k = omega / hbar;
    let (energy, domain) = match spec.family {
        Family::H => (2.0 * level * hbar * omega, (f64::NEG_INFINITY, f64::INFINITY)),
        Family::L => (4.0 * level * hbar * omega, (0.0, f64::INFINITY)),
        Family::J => (
            4.0 * hbar * hbar * level * (level + spec.g_f64() + spec.h_f64()),
            (0.0, std::f64::consts::FRAC_PI_2),
        ),
    };
    let family = spec.family;
    let w2 = EvaluableFunction::new(domain, Variable::Xi, move |x| {
        let (u, du) = match family {
            Family::H => (k.sqrt() * x, k.sqrt()),
            Family::L => (k * x * x, 2.0 * k * x),
            Family::J => ((2.0 * x).cos(), -2.0 * (2.0 * x).sin()),
        };
        (hbar * du * sys.ground_log_derivative(u)).powi(2)
    });
    let (integral, _) = integrate(&w2, energy, |_| 1.0, SCAN_POINTS, DEFAULT_TOL * hbar)?;
    Ok(integral / hbar)
}

/// WKB integral `int sqrt(E_n - V) dx` of the undeformed potential at
/// `hbar = omega = 1`.
pub fn wkb_integral(spec: &SystemSpec, n: usize) -> Result<f64> {
    let s = spec.clone();
    let v = EvaluableFunction::new(spec.family.x_domain(), Variable::Xi, move |x| s.potential(x));
    // Shift so the scan sees a positive energy even at n = 0.
    let shift = -spec.potential_minimum();
    let shifted = {
        let v = v.clone();
        EvaluableFunction::new(v.domain, Variable::Xi, move |x| v.eval(x) + shift)
    };
    let energy = physical_energy(spec, n) + shift;
    let (integral, _) = integrate(&shifted, energy, |_| 1.0, SCAN_POINTS, DEFAULT_TOL)?;
    Ok(integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deform::{build_krein_adler, build_multi_indexed};
    use crate::exact::int;

    #[test]
    fn ground_state_is_exact() {
        let sys = build_krein_adler(&SystemSpec::harmonic(), 3).unwrap();
        let r = swkb_integral(&sys, 0).unwrap();
        assert_eq!((r.integral, r.err), (0.0, 0.0));
    }

    #[test]
    fn undeformed_radial_is_exact() {
        let sys = DeformedSystem::identity(&SystemSpec::radial(int(5)).unwrap());
        let r = swkb_integral(&sys, 3).unwrap();
        assert!((r.integral - 3.0 * PI).abs() < 1e-8, "{}", r.integral);
        let z = swkb_integral_with(
            &sys,
            3,
            &SwkbOptions {
                form: Some(IntegrandForm::ZScaled),
                ..Default::default()
            },
        )
        .unwrap();
        assert!((z.integral - 3.0 * PI).abs() < 1e-8, "{}", z.integral);
    }

    #[test]
    fn wkb_harmonic_is_exact() {
        let spec = SystemSpec::harmonic();
        assert!((wkb_integral(&spec, 3).unwrap() - 3.5 * PI).abs() < 1e-8);
        assert!((wkb_integral(&spec, 0).unwrap() - 0.5 * PI).abs() < 1e-8);
    }

    /// WKB for the radial oscillator has the closed form
    /// `(pi/4)(4n + 2g + 1 - 2 sqrt(g(g-1)))`, which differs from `(n+1/2)pi`.
    #[test]
    fn wkb_radial_matches_closed_form() {
        let g: f64 = 5.0;
        let spec = SystemSpec::radial(int(5)).unwrap();
        let got = wkb_integral(&spec, 2).unwrap();
        let oracle = PI / 4.0 * (8.0 + 2.0 * g + 1.0 - 2.0 * (g * (g - 1.0)).sqrt());
        assert!((got - oracle).abs() < 1e-8, "{got} vs {oracle}");
        assert!((got - 2.5 * PI).abs() > 1e-3);
    }

    #[test]
    fn dimensionful_matches_reduced() {
        let sys = build_multi_indexed(&SystemSpec::radial(int(5)).unwrap(), &[1], &[2]).unwrap();
        let reduced = swkb_integral(&sys, 4).unwrap().integral;
        for (hbar, omega) in [(1.0, 1.0), (0.5, 2.3)] {
            let d = swkb_integral_dimensionful(&sys, 4, hbar, omega).unwrap();
            assert!((d - reduced).abs() < 1e-9, "{hbar},{omega}: {d} vs {reduced}");
        }
        let j = build_multi_indexed(&SystemSpec::poschl_teller(int(5), int(6)).unwrap(), &[1], &[1]).unwrap();
        let reduced = swkb_integral(&j, 3).unwrap().integral;
        let d = swkb_integral_dimensionful(&j, 3, 0.5, 2.3).unwrap();
        assert!((d - reduced).abs() < 1e-9, "{d} vs {reduced}");
    }
}
