//! Quadrature for integrands that vanish like a square root at both ends.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default absolute tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Node budget before giving up.
pub const MAX_NODES: usize = 1 << 20;

const GL_ORDER: usize = 20;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(order);
    let nf = order as f64;
    for i in 0..order {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn gl20() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| gauss_legendre(GL_ORDER))
}

fn composite_gl(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    let width = (hi - lo) / panels as f64;
    let rule = gl20();
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * width;
        let half = 0.5 * width;
        sum += half * rule.iter().map(|&(x, w)| w * g(mid + half * x)).sum::<f64>();
    }
    sum
}

/// Double-exponential rule on [lo, hi], refined by halving the step.
fn tanh_sinh(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, budget: usize) -> Option<f64> {
    let (c, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let term = |t: f64| {
        let s = FRAC_PI_2 * t.sinh();
        let x = s.tanh();
        let w = FRAC_PI_2 * t.cosh() / (s.cosh() * s.cosh());
        if w < 1e-300 || x.abs() >= 1.0 {
            0.0
        } else {
            w * g(c + r * x)
        }
    };
    let tmax = 4.0;
    let mut h = 0.5;
    let mut sum = term(0.0);
    let mut k = 1;
    while k as f64 * h <= tmax {
        let t = k as f64 * h;
        sum += term(t) + term(-t);
        k += 1;
    }
    let mut used = 2 * k;
    let mut prev = r * h * sum;
    while used < budget {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= tmax {
            let t = k as f64 * h;
            sum += term(t) + term(-t);
            k += 2;
        }
        used += k;
        let cur = r * h * sum;
        if (cur - prev).abs() < tol {
            return Some(cur);
        }
        prev = cur;
    }
    None
}

/// `int_a^b f(u) du` with `u = (a+b)/2 + (b-a)/2 sin(theta)`, using
/// Gauss-Legendre panels doubled until two successive estimates agree to
/// `tol`.
pub fn quadrature(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a < b) {
        return Ok(0.0);
    }
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    let g = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let u = (m + r * s).clamp(a, b);
        let v = f(u);
        if v.is_finite() {
            v * r * c
        } else {
            0.0
        }
    };
    let mut panels = 1;
    let mut prev = composite_gl(&g, -FRAC_PI_2, FRAC_PI_2, panels);
    let mut nodes = GL_ORDER;
    while nodes < MAX_NODES / 2 {
        panels *= 2;
        nodes += panels * GL_ORDER;
        let cur = composite_gl(&g, -FRAC_PI_2, FRAC_PI_2, panels);
        let target = tol.max(64.0 * f64::EPSILON * cur.abs());
        if (cur - prev).abs() < target {
            return Ok(cur);
        }
        prev = cur;
    }
    let target = tol.max(64.0 * f64::EPSILON * prev.abs());
    tanh_sinh(&g, -FRAC_PI_2, FRAC_PI_2, target, MAX_NODES - nodes).ok_or(Error::QuadratureNonConvergence {
        a,
        b,
        nodes: MAX_NODES,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let rule = gauss_legendre(GL_ORDER);
        let w: f64 = rule.iter().map(|p| p.1).sum();
        assert!((w - 2.0).abs() < 1e-14);
        // Exact through degree 39.
        let m: f64 = rule.iter().map(|&(x, w)| w * x.powi(38)).sum();
        assert!((m - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn semicircle() {
        let f = |u: f64| (4.0 - u * u).max(0.0).sqrt();
        assert!((quadrature(&f, -2.0, 2.0, 1e-10).unwrap() - 2.0 * PI).abs() < 1e-10);
        let s = 2f64.sqrt();
        let g = |u: f64| (2.0 - u * u).max(0.0).sqrt();
        assert!((quadrature(&g, -s, s, 1e-10).unwrap() - PI).abs() < 1e-10);
    }

    #[test]
    fn radial_bracket_matches_closed_form() {
        // (xi - 5/xi)^2 = 12 has roots xi^2 = (22 +- sqrt(22^2 - 100)) / 2;
        // the closed form of the integral is 12 pi / 4.
        let e: f64 = 12.0;
        let disc = (22.0f64 * 22.0 - 100.0).sqrt();
        let (a, b) = (((22.0 - disc) / 2.0).sqrt(), ((22.0 + disc) / 2.0).sqrt());
        let f = |x: f64| (e - (x - 5.0 / x).powi(2)).max(0.0).sqrt();
        let got = quadrature(&f, a, b, 1e-10).unwrap();
        assert!((got - 3.0 * PI).abs() < 1e-10, "{got}");
    }

    #[test]
    fn tanh_sinh_fallback_handles_endpoint_behaviour() {
        let g = |t: f64| (1.0 - t * t).max(0.0).sqrt();
        let got = tanh_sinh(&g, -1.0, 1.0, 1e-12, 1 << 16).unwrap();
        assert!((got - PI / 2.0).abs() < 1e-10, "{got}");
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(quadrature(&|_| 1.0, 1.0, 1.0, 1e-10).unwrap(), 0.0);
    }
}
