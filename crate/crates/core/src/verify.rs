//! Finite-difference Schrodinger eigensolver used to check isospectrality.

use crate::deform::{DeformedSystem, EvaluableFunction};
use crate::error::{Error, Result};
use crate::systems::{physical_energy, Family};

/// Default number of interior grid points.
pub const DEFAULT_GRID: usize = 4000;
/// Relative change tolerated when the truncated domain is enlarged.
pub const TRUNCATION_TOL: f64 = 1e-3;
/// Inner hard wall for the half-line family.
pub const HALF_LINE_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub grid_n: usize,
    /// Combine grids `n` and `2n` as `(4 E(h/2) - E(h)) / 3`.
    pub richardson: bool,
    /// Re-solve on an enlarged domain and fail on large changes.
    pub truncation_check: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            grid_n: DEFAULT_GRID,
            richardson: true,
            truncation_check: true,
        }
    }
}

/// Number of eigenvalues of the tridiagonal matrix below `lambda`.
fn sturm_count(diag: &[f64], off2: f64, lambda: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        q = if i == 0 { d - lambda } else { d - lambda - off2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (d.abs() + lambda.abs()).max(1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn fd_eigenvalues(v: &EvaluableFunction, a: f64, b: f64, k: usize, n: usize) -> Result<Vec<f64>> {
    let h = (b - a) / (n + 1) as f64;
    let inv = 1.0 / (h * h);
    let diag: Vec<f64> = (1..=n)
        .map(|i| {
            let x = a + i as f64 * h;
            let val = v.eval(x);
            if val.is_finite() {
                Ok(2.0 * inv + val)
            } else {
                Err(Error::DomainError {
                    what: "potential is not finite on the grid",
                    at: x,
                })
            }
        })
        .collect::<Result<_>>()?;
    let off2 = inv * inv;
    let lower = diag.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0 * inv;
    let mut upper = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 2.0 * inv;
    if sturm_count(&diag, off2, upper) < k {
        upper *= 2.0;
    }
    (0..k)
        .map(|j| {
            let (mut lo, mut hi) = (lower, upper);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(&diag, off2, mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(0.5 * (lo + hi))
        })
        .collect()
}

fn solve_on(v: &EvaluableFunction, domain: (f64, f64), k: usize, opts: &SolveOptions) -> Result<Vec<f64>> {
    let coarse = fd_eigenvalues(v, domain.0, domain.1, k, opts.grid_n)?;
    if !opts.richardson {
        return Ok(coarse);
    }
    // 2n + 1 interior points halve the step exactly.
    let fine = fd_eigenvalues(v, domain.0, domain.1, k, 2 * opts.grid_n + 1)?;
    Ok(coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect())
}

/// Lowest `k` eigenvalues of `-d^2/dx^2 + V` with Dirichlet walls at the
/// ends of `domain`.
pub fn solve_spectrum(v: &EvaluableFunction, domain: (f64, f64), k: usize, opts: &SolveOptions) -> Result<Vec<f64>> {
    if !(domain.0 < domain.1 && domain.0.is_finite() && domain.1.is_finite()) {
        return Err(Error::InvalidParameters(vec![format!("domain {domain:?} must be finite")]));
    }
    let levels = solve_on(v, domain, k, opts)?;
    if !opts.truncation_check {
        return Ok(levels);
    }
    // Enlarge each side that cuts into the natural domain.
    let width = domain.1 - domain.0;
    let grow = |cut: f64, natural: f64, dir: f64| {
        if (cut - natural).abs() > 1e-12 * width.max(1.0) {
            let t = cut + dir * 0.25 * width;
            if dir < 0.0 { t.max(natural) } else { t.min(natural) }
        } else {
            cut
        }
    };
    let wider = (grow(domain.0, v.domain.0, -1.0), grow(domain.1, v.domain.1, 1.0));
    if wider == domain {
        return Ok(levels);
    }
    let widened = SolveOptions {
        grid_n: (opts.grid_n as f64 * (wider.1 - wider.0) / width).ceil() as usize,
        ..*opts
    };
    let check = solve_on(v, wider, k, &widened)?;
    for (level, (a, b)) in levels.iter().zip(&check).enumerate() {
        let relative = (a - b).abs() / b.abs().max(1.0);
        if relative > TRUNCATION_TOL {
            return Err(Error::TruncationError { level, relative });
        }
    }
    Ok(levels)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumLevel {
    pub index: usize,
    pub numeric: f64,
    pub reference: f64,
    /// `|numeric - reference| / max(|reference|, 1)`.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub levels: Vec<SpectrumLevel>,
    pub grid_points: usize,
    pub domain: (f64, f64),
}

impl SpectrumReport {
    pub fn max_deviation(&self) -> f64 {
        self.levels.iter().map(|l| l.deviation).fold(0.0, f64::max)
    }
}

/// Energies `E_n` (multi-indexed) or `E_{breve(n)}` (Krein-Adler) of the
/// first `k` levels, at `hbar = omega = 1`.
pub fn reference_spectrum(dsys: &DeformedSystem, k: usize) -> Vec<f64> {
    (0..k)
        .map(|n| physical_energy(&dsys.base, dsys.level_index(n)))
        .collect()
}

/// Truncated domain large enough for levels up to `e_max`.
pub fn truncation_domain(family: Family, e_max: f64) -> (f64, f64) {
    let reach = 12f64.max(2.0 * e_max.max(0.0).sqrt());
    match family {
        Family::H => (-reach, reach),
        Family::L => (HALF_LINE_EPS, reach),
        Family::J => family.x_domain(),
    }
}

pub fn isospectrality_report(dsys: &DeformedSystem, k: usize, opts: &SolveOptions) -> Result<SpectrumReport> {
    let reference = reference_spectrum(dsys, k);
    let e_max = reference.last().copied().unwrap_or(0.0);
    let domain = truncation_domain(dsys.family(), e_max);
    let numeric = solve_spectrum(&dsys.deformed_potential(), domain, k, opts)?;
    let levels = numeric
        .into_iter()
        .zip(reference)
        .enumerate()
        .map(|(index, (numeric, reference))| SpectrumLevel {
            index,
            numeric,
            reference,
            deviation: (numeric - reference).abs() / reference.abs().max(1.0),
        })
        .collect();
    Ok(SpectrumReport {
        levels,
        grid_points: opts.grid_n,
        domain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deform::{build_krein_adler, build_multi_indexed};
    use crate::exact::{int, Variable};
    use crate::systems::SystemSpec;

    #[test]
    fn harmonic_levels() {
        let v = EvaluableFunction::new((f64::NEG_INFINITY, f64::INFINITY), Variable::Xi, |x| x * x - 1.0);
        let e = solve_spectrum(&v, (-12.0, 12.0), 4, &SolveOptions::default()).unwrap();
        for (n, e) in e.iter().enumerate() {
            assert!((e - 2.0 * n as f64).abs() < 1e-4, "{n}: {e}");
        }
    }

    #[test]
    fn second_order_convergence() {
        let v = EvaluableFunction::new((f64::NEG_INFINITY, f64::INFINITY), Variable::Xi, |x| x * x - 1.0);
        let raw = |n| SolveOptions {
            grid_n: n,
            richardson: false,
            truncation_check: false,
        };
        let a = solve_spectrum(&v, (-12.0, 12.0), 5, &raw(2000)).unwrap();
        let b = solve_spectrum(&v, (-12.0, 12.0), 5, &raw(4001)).unwrap();
        for n in 1..5 {
            let exact = 2.0 * n as f64;
            assert!((a[n] - exact).abs() >= 3.0 * (b[n] - exact).abs(), "level {n}");
        }
    }

    #[test]
    fn truncation_is_detected() {
        let v = EvaluableFunction::new((f64::NEG_INFINITY, f64::INFINITY), Variable::Xi, |x| x * x - 1.0);
        assert!(matches!(
            solve_spectrum(&v, (-2.0, 2.0), 3, &SolveOptions::default()),
            Err(Error::TruncationError { .. })
        ));
    }

    #[test]
    fn krein_adler_deletes_two_levels() {
        let sys = build_krein_adler(&SystemSpec::harmonic(), 3).unwrap();
        let r = isospectrality_report(&sys, 4, &SolveOptions::default()).unwrap();
        let reference: Vec<f64> = r.levels.iter().map(|l| l.reference).collect();
        assert_eq!(reference, vec![0.0, 2.0, 4.0, 10.0]);
        assert!(r.max_deviation() < 1e-3, "{:?}", r.levels);
        let d4 = build_krein_adler(&SystemSpec::harmonic(), 4).unwrap();
        assert_eq!(reference_spectrum(&d4, 5), vec![0.0, 2.0, 4.0, 6.0, 12.0]);
    }

    #[test]
    fn multi_indexed_radial_is_isospectral() {
        let sys = build_multi_indexed(&SystemSpec::radial(int(5)).unwrap(), &[1], &[2]).unwrap();
        let r = isospectrality_report(&sys, 5, &SolveOptions::default()).unwrap();
        assert!(r.max_deviation() < 1e-3, "{:?}", r.levels);
    }

    #[test]
    fn undeformed_harmonic_report() {
        let sys = DeformedSystem::identity(&SystemSpec::harmonic());
        let r = isospectrality_report(&sys, 5, &SolveOptions::default()).unwrap();
        assert!(r.max_deviation() < 1e-4);
    }
}
