//! Classical intervals `{u : w2(u) < E}`.

use crate::deform::EvaluableFunction;
use crate::error::{Error, Result};

/// Minimum number of scan points.
pub const SCAN_POINTS: usize = 4000;
const REFINE: usize = 10;
const REFINE_DEPTH: usize = 3;

/// Disjoint, sorted intervals on which `E - w2 > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TurningIntervals {
    pub intervals: Vec<(f64, f64)>,
    pub energy: f64,
}

impl TurningIntervals {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Bounds `[l, r]` containing every point of `samples` where `f > 0`, with
/// `f < 0` at both ends.
fn positive_hull(f: &dyn Fn(f64) -> f64, samples: &[f64]) -> Option<(f64, f64)> {
    let vals: Vec<f64> = samples.iter().map(|&t| f(t)).collect();
    if !(vals[0] < 0.0 && vals[vals.len() - 1] < 0.0) {
        return None;
    }
    let first = vals.iter().position(|&v| v > 0.0);
    let last = vals.iter().rposition(|&v| v > 0.0);
    let (i, j) = match (first, last) {
        (Some(i), Some(j)) => (i, j),
        // No positive sample: centre on the smallest gap to the wall.
        _ => {
            let k = (0..vals.len())
                .max_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap();
            (k, k)
        }
    };
    let i = i.saturating_sub(2);
    let j = (j + 2).min(samples.len() - 1);
    Some((samples[i], samples[j]))
}

fn log_samples(lo: i32, hi: i32) -> impl Iterator<Item = f64> {
    (4 * lo..=4 * hi).map(|k| 2f64.powf(k as f64 / 4.0))
}

fn scan_grid(domain: (f64, f64), f: &dyn Fn(f64) -> f64, points: usize) -> Result<Vec<f64>> {
    let (lo, hi) = domain;
    let n = points.max(SCAN_POINTS);
    let no_wall = |at: f64| Error::DomainError {
        what: "classical region reaches the domain boundary",
        at,
    };
    if lo.is_finite() && hi.is_finite() {
        let (m, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        return Ok((1..n)
            .map(|k| m - r * (std::f64::consts::PI * k as f64 / n as f64).cos())
            .collect());
    }
    if lo.is_infinite() && hi.is_infinite() {
        let mut samples: Vec<f64> = log_samples(-20, 60).collect();
        let neg: Vec<f64> = samples.iter().map(|t| -t).collect();
        samples.extend(neg);
        samples.push(0.0);
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (left, right) = positive_hull(f, &samples).ok_or(no_wall(f64::INFINITY))?;
        return Ok((0..=n).map(|k| left + (right - left) * k as f64 / n as f64).collect());
    }
    // Half line (lo, inf); the scale of the wall at lo is unknown, so the
    // grid is geometric as well as uniform.
    let samples: Vec<f64> = log_samples(-100, 60).map(|t| lo + t).collect();
    let (left, right) = positive_hull(f, &samples).ok_or(no_wall(lo))?;
    let half = n / 2;
    let ratio = ((right - lo) / (left - lo)).powf(1.0 / half as f64);
    let mut pts: Vec<f64> = (0..=half).map(|k| lo + (left - lo) * ratio.powi(k as i32)).collect();
    pts.extend((0..=half).map(|k| left + (right - left) * k as f64 / half as f64));
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    Ok(pts)
}

fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, fa: f64, tol: f64) -> f64 {
    let sa = fa > 0.0;
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m) > 0.0) == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Appends the sign changes of `f` on the sorted points `ts` to `roots`,
/// refining cells around near-tangencies.
fn collect_roots(f: &dyn Fn(f64) -> f64, ts: &[f64], tol: f64, depth: usize, roots: &mut Vec<(f64, bool)>) {
    let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let scale = vals.iter().fold(0.0f64, |m, v| if v.is_finite() { m.max(v.abs()) } else { m });
    for i in 0..ts.len().saturating_sub(1) {
        let (a, b, fa, fb) = (ts[i], ts[i + 1], vals[i], vals[i + 1]);
        if !(fa.is_finite() && fb.is_finite()) {
            continue;
        }
        if (fa > 0.0) != (fb > 0.0) {
            // `true` marks the start of a classical interval.
            roots.push((bisect(f, a, b, fa, tol), fb > 0.0));
            continue;
        }
        if depth == 0 || i == 0 || i + 2 > ts.len() - 1 {
            continue;
        }
        let fp = vals[i - 1];
        let fn_ = vals[i + 2];
        // f has a local maximum below zero (or minimum above) close to zero:
        // a pair of roots may hide inside the cell.
        let near_extremum = (fa.abs() < 0.05 * scale || fb.abs() < 0.05 * scale)
            && ((fa - fp) * (fn_ - fb) < 0.0 || (fb - fa) * (fn_ - fb) < 0.0);
        if near_extremum {
            let lo = ts[i - 1];
            let hi = ts[i + 2];
            let fine: Vec<f64> = (0..=3 * REFINE)
                .map(|k| lo + (hi - lo) * k as f64 / (3 * REFINE) as f64)
                .collect();
            let mut sub = Vec::new();
            collect_roots(f, &fine, tol, depth - 1, &mut sub);
            roots.extend(sub.into_iter().filter(|&(r, _)| r > a && r < b));
        }
    }
}

/// Locates every root of `w2 = e` on `domain` and pairs them into the
/// maximal intervals where `e - w2 > 0`.
pub fn find_turning_intervals(w2: &EvaluableFunction, e: f64, domain: (f64, f64)) -> Result<TurningIntervals> {
    find_turning_intervals_with(w2, e, domain, SCAN_POINTS)
}

pub fn find_turning_intervals_with(
    w2: &EvaluableFunction,
    e: f64,
    domain: (f64, f64),
    points: usize,
) -> Result<TurningIntervals> {
    if !(e > 0.0) {
        return Err(Error::NoClassicalRegion { energy: e });
    }
    let f = |t: f64| e - w2.eval(t);
    let grid = scan_grid(domain, &f, points)?;
    let width = grid.last().unwrap() - grid.first().unwrap();
    let tol = 1e-13 * width;
    let mut roots = Vec::new();
    collect_roots(&f, &grid, tol, REFINE_DEPTH, &mut roots);
    roots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    roots.dedup_by(|a, b| (a.0 - b.0).abs() <= tol && a.1 == b.1);

    let mut intervals = Vec::new();
    let mut open: Option<f64> = None;
    for (r, starts) in roots {
        if starts {
            open = Some(r);
        } else if let Some(a) = open.take() {
            if r > a {
                intervals.push((a, r));
            }
        }
    }
    if intervals.is_empty() {
        return Err(Error::NoClassicalRegion { energy: e });
    }
    Ok(TurningIntervals { intervals, energy: e })
}
