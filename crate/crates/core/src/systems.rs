//! The three exactly solvable base systems in units `2m = 1`.
//!
//! | family | potential                                              | energies        |
//! |--------|--------------------------------------------------------|-----------------|
//! | `H`    | `w^2 x^2 - hbar w`                                     | `2 n hbar w`    |
//! | `L`    | `w^2 x^2 + hbar^2 g(g-1)/x^2 - hbar w (2g+1)`          | `4 n hbar w`    |
//! | `J`    | `hbar^2 [g(g-1)/sin^2 x + h(h-1)/cos^2 x - (g+h)^2]`   | `4 hbar^2 n(n+g+h)` |
//!
//! Eigenfunctions are stored in the reduced variables `xi = sqrt(w/hbar) x`,
//! `z = xi^2` and `y = cos 2x`. The `J` system lives on `0 < x < pi/2`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{hermite, int, jacobi, laguerre, rat, ExactPolynomial, Prefactor, PrefactoredFunction, Rational, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Harmonic oscillator (Hermite).
    H,
    /// Radial oscillator (Laguerre).
    L,
    /// Pöschl-Teller (Jacobi).
    J,
}

impl Family {
    pub fn variable(self) -> Variable {
        match self {
            Family::H => Variable::Xi,
            Family::L => Variable::Z,
            Family::J => Variable::Y,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::H => "H",
            Family::L => "L",
            Family::J => "J",
        }
    }

    /// Physical coordinate range (in units `hbar = w = 1`).
    pub fn x_domain(self) -> (f64, f64) {
        match self {
            Family::H => (f64::NEG_INFINITY, f64::INFINITY),
            Family::L => (0.0, f64::INFINITY),
            Family::J => (0.0, std::f64::consts::FRAC_PI_2),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the base systems with its couplings.
///
/// `hbar` and `omega` only enter the dimensionful cross-checks; all reduced
/// quantities are independent of them.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub family: Family,
    pub g: Rational,
    pub h: Rational,
    pub hbar: f64,
    pub omega: f64,
}

impl SystemSpec {
    pub fn harmonic() -> Self {
        SystemSpec {
            family: Family::H,
            g: Rational::zero(),
            h: Rational::zero(),
            hbar: 1.0,
            omega: 1.0,
        }
    }

    pub fn radial(g: Rational) -> Result<Self> {
        Self::new(Family::L, g, Rational::zero())
    }

    pub fn poschl_teller(g: Rational, h: Rational) -> Result<Self> {
        Self::new(Family::J, g, h)
    }

    pub fn new(family: Family, g: Rational, h: Rational) -> Result<Self> {
        let half = rat(1, 2);
        let mut bad = Vec::new();
        if matches!(family, Family::L | Family::J) && g <= half {
            bad.push(format!("g = {g} must exceed 1/2"));
        }
        if family == Family::J && h <= half {
            bad.push(format!("h = {h} must exceed 1/2"));
        }
        if !bad.is_empty() {
            return Err(Error::InvalidParameters(bad));
        }
        Ok(SystemSpec {
            family,
            g,
            h,
            hbar: 1.0,
            omega: 1.0,
        })
    }

    pub fn with_units(mut self, hbar: f64, omega: f64) -> Self {
        self.hbar = hbar;
        self.omega = omega;
        self
    }

    pub fn g_f64(&self) -> f64 {
        self.g.to_f64().unwrap_or(f64::NAN)
    }

    pub fn h_f64(&self) -> f64 {
        self.h.to_f64().unwrap_or(f64::NAN)
    }

    pub fn variable(&self) -> Variable {
        self.family.variable()
    }

    /// Dimensionless potential `V(x)` at `hbar = w = 1`.
    pub fn potential(&self, x: f64) -> f64 {
        let (g, h) = (self.g_f64(), self.h_f64());
        match self.family {
            Family::H => x * x - 1.0,
            Family::L => x * x + g * (g - 1.0) / (x * x) - (2.0 * g + 1.0),
            Family::J => {
                let (s, c) = x.sin_cos();
                g * (g - 1.0) / (s * s) + h * (h - 1.0) / (c * c) - (g + h) * (g + h)
            }
        }
    }
}

impl SystemSpec {
    /// Minimum of [`SystemSpec::potential`] over the domain.
    pub fn potential_minimum(&self) -> f64 {
        let (g, h) = (self.g_f64(), self.h_f64());
        match self.family {
            Family::H => -1.0,
            Family::L => 2.0 * (g * (g - 1.0)).sqrt() - (2.0 * g + 1.0),
            Family::J => ((g * (g - 1.0)).sqrt() + (h * (h - 1.0)).sqrt()).powi(2) - (g + h) * (g + h),
        }
    }
}

/// Reduced energy of level `n`, in the normalization of the reduced SWKB
/// integrands: `2n` (H), `4n` (L, in `xi`), `n(n+g+h)` (J, in `y`).
pub fn energy(spec: &SystemSpec, n: usize) -> f64 {
    let n = n as f64;
    match spec.family {
        Family::H => 2.0 * n,
        Family::L => 4.0 * n,
        Family::J => n * (n + spec.g_f64() + spec.h_f64()),
    }
}

/// Energy of level `n` for the dimensionless Hamiltonian `-d^2/dx^2 + V(x)`
/// at `hbar = w = 1`.
pub fn physical_energy(spec: &SystemSpec, n: usize) -> f64 {
    match spec.family {
        Family::J => 4.0 * energy(spec, n),
        _ => energy(spec, n),
    }
}

/// Dimensionful energy `E_n` at the given `hbar` and `omega`.
pub fn dimensionful_energy(spec: &SystemSpec, n: usize) -> f64 {
    let n_f = n as f64;
    match spec.family {
        Family::H => 2.0 * n_f * spec.hbar * spec.omega,
        Family::L => 4.0 * n_f * spec.hbar * spec.omega,
        Family::J => 4.0 * spec.hbar * spec.hbar * n_f * (n_f + spec.g_f64() + spec.h_f64()),
    }
}

fn half_minus(a: &Rational) -> Rational {
    a - rat(1, 2)
}

/// Classical polynomial part of eigenfunction `n`, without prefactor.
pub fn eigen_polynomial(spec: &SystemSpec, n: usize) -> ExactPolynomial {
    match spec.family {
        Family::H => hermite(n),
        Family::L => laguerre(n, &half_minus(&spec.g)),
        Family::J => jacobi(n, &half_minus(&spec.g), &half_minus(&spec.h)),
    }
}

/// Prefactor of every eigenfunction of the base system.
pub fn eigen_prefactor(spec: &SystemSpec) -> Prefactor {
    match spec.family {
        Family::H => Prefactor::gaussian(rat(-1, 2)),
        Family::L => Prefactor::exp_power(rat(-1, 2), &spec.g / int(2)),
        Family::J => Prefactor::powers(&spec.g / int(2), &spec.h / int(2)),
    }
}

/// Eigenfunction `phi_n` in the family's reduced variable.
pub fn eigenfunction(spec: &SystemSpec, n: usize) -> PrefactoredFunction {
    PrefactoredFunction {
        prefactor: eigen_prefactor(spec),
        poly: eigen_polynomial(spec, n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VirtualType {
    I,
    II,
}

/// Virtual-state seed `(type, index)`; the index is at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VirtualStateLabel {
    pub vtype: VirtualType,
    pub index: usize,
}

impl VirtualStateLabel {
    pub fn new(vtype: VirtualType, index: usize) -> Result<Self> {
        if index == 0 {
            return Err(Error::InvalidParameters(vec!["virtual-state index must be >= 1".into()]));
        }
        Ok(VirtualStateLabel { vtype, index })
    }
}

/// Virtual-state wavefunction used as a Darboux seed.
///
/// * `L, I`:  `e^{z/2} z^{g/2} L_n^{(g-1/2)}(-z)`
/// * `L, II`: `e^{-z/2} z^{(1-g)/2} L_n^{(1/2-g)}(z)`
/// * `J, I`:  `((1-y)/2)^{g/2} ((1+y)/2)^{(1-h)/2} P_n^{(g-1/2, 1/2-h)}(y)`
/// * `J, II`: `((1-y)/2)^{(1-g)/2} ((1+y)/2)^{h/2} P_n^{(1/2-g, h-1/2)}(y)`
pub fn virtual_state(spec: &SystemSpec, label: VirtualStateLabel) -> Result<PrefactoredFunction> {
    let n = label.index;
    let (g, h) = (&spec.g, &spec.h);
    let half = rat(1, 2);
    let one = Rational::one();
    let two = int(2);
    let (prefactor, poly) = match (spec.family, label.vtype) {
        (Family::H, _) => return Err(Error::UnsupportedFamily("H")),
        (Family::L, VirtualType::I) => (
            Prefactor::exp_power(half.clone(), g / &two),
            laguerre(n, &(g - &half)).reflect(),
        ),
        (Family::L, VirtualType::II) => (
            Prefactor::exp_power(-half.clone(), (&one - g) / &two),
            laguerre(n, &(&half - g)),
        ),
        (Family::J, VirtualType::I) => (
            Prefactor::powers(g / &two, (&one - h) / &two),
            jacobi(n, &(g - &half), &(&half - h)),
        ),
        (Family::J, VirtualType::II) => (
            Prefactor::powers((&one - g) / &two, h / &two),
            jacobi(n, &(&half - g), &(h - &half)),
        ),
    };
    PrefactoredFunction::new(prefactor, poly)
}

/// A violated admissibility condition for a deformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn check_index_set(name: &str, set: &[usize], out: &mut Vec<Violation>) {
    if set.iter().any(|&d| d == 0) {
        out.push(Violation(format!("{name} indices must be positive")));
    }
    if set.windows(2).any(|w| w[0] >= w[1]) {
        out.push(Violation(format!("{name} indices must be strictly increasing")));
    }
}

fn max_rational(values: impl IntoIterator<Item = Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

/// Checks the parameter inequalities for a multi-indexed deformation with
/// type-I indices `d_i` and type-II indices `d_ii`.
///
/// * `L`: `g > max{N + 3/2, d_j^II + 1/2}`
/// * `J`: `g > max{N + 2, d_j^II + 1/2}` and `h > max{M + 2, d_j^I + 1/2}`
///
/// with `M = |d_i|`, `N = |d_ii|`. Never fails; returns every violation.
pub fn validate_deformation(
    spec: &SystemSpec,
    d_i: &[usize],
    d_ii: &[usize],
) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    check_index_set("type I", d_i, &mut out);
    check_index_set("type II", d_ii, &mut out);
    let m = int(d_i.len() as i64);
    let n = int(d_ii.len() as i64);
    let half = rat(1, 2);
    let shifted = |set: &[usize]| -> Vec<Rational> { set.iter().map(|&d| int(d as i64) + &half).collect() };
    match spec.family {
        Family::H => {
            if !d_i.is_empty() || !d_ii.is_empty() {
                out.push(Violation("the H family admits no multi-indexed deformation".into()));
            }
        }
        Family::L => {
            let bound = max_rational(std::iter::once(&n + rat(3, 2)).chain(shifted(d_ii)));
            if spec.g <= bound {
                out.push(Violation(format!("L: g = {} must exceed {}", spec.g, bound)));
            }
        }
        Family::J => {
            let gb = max_rational(std::iter::once(&n + int(2)).chain(shifted(d_ii)));
            if spec.g <= gb {
                out.push(Violation(format!("J: g = {} must exceed {}", spec.g, gb)));
            }
            let hb = max_rational(std::iter::once(&m + int(2)).chain(shifted(d_i)));
            if spec.h <= hb {
                out.push(Violation(format!("J: h = {} must exceed {}", spec.h, hb)));
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Index of the surviving level with `n` nodes after deleting levels `d` and
/// `d + 1`.
pub fn breve(n: usize, d: usize) -> usize {
    if n < d {
        n
    } else {
        n + 2
    }
}

/// Generalized Laguerre `L_n^(alpha)(t)` for real `alpha`.
pub fn laguerre_f64(n: usize, alpha: f64, t: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - t;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - t) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Radial oscillator eigenfunctions written two ways:
///
/// * `psi_n ~ e^{-w x^2/4hbar} x^{l/hbar} L_n^{(l/hbar - 1/2)}(w x^2 / 2hbar)`
///   from the superpotential `W_0 = w x / 2 - l / x`,
/// * `phi_n ~ e^{-w x^2/4hbar} x^{l'+1} L_n^{(l' + 1/2)}(w x^2 / 2hbar)`
///   for angular momentum `l'`.
///
/// Both are normalized at the sample where `|phi_n|` is largest; the result
/// is `max |psi - phi| / max |phi|` over the samples.
pub fn radial_map_deviation(ell: f64, ell_prime: usize, n: usize, hbar: f64, omega: f64, samples: &[f64]) -> Result<f64> {
    if let Some(&bad) = samples.iter().find(|&&x| x <= 0.0 || !x.is_finite()) {
        return Err(Error::DomainError {
            what: "radial sample point",
            at: bad,
        });
    }
    let lp = ell_prime as f64;
    let psi = |x: f64| {
        let t = omega * x * x / (2.0 * hbar);
        (-omega * x * x / (4.0 * hbar)).exp() * x.powf(ell / hbar) * laguerre_f64(n, ell / hbar - 0.5, t)
    };
    let phi = |x: f64| {
        let t = omega * x * x / (2.0 * hbar);
        (-omega * x * x / (4.0 * hbar)).exp() * x.powf(lp + 1.0) * laguerre_f64(n, lp + 0.5, t)
    };
    let phis: Vec<f64> = samples.iter().map(|&x| phi(x)).collect();
    let psis: Vec<f64> = samples.iter().map(|&x| psi(x)).collect();
    let (iref, _) = phis
        .iter()
        .enumerate()
        .fold((0, 0.0), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) });
    let (pr, qr) = (phis[iref], psis[iref]);
    if pr == 0.0 || qr == 0.0 || !qr.is_finite() {
        return Ok(f64::INFINITY);
    }
    let dev = phis
        .iter()
        .zip(&psis)
        .map(|(p, q)| (q / qr - p / pr).abs())
        .fold(0.0, f64::max);
    Ok(dev)
}

/// Sample grid on `(0, x_max]` covering the classically relevant region of
/// level `n`.
pub fn radial_map_samples(ell_prime: usize, n: usize, hbar: f64, omega: f64, count: usize) -> Vec<f64> {
    let width = (2.0 * hbar / omega).sqrt() * ((4 * n + 2 * ell_prime + 3) as f64).sqrt() + 3.0 * (2.0 * hbar / omega).sqrt();
    (1..=count).map(|k| width * k as f64 / count as f64).collect()
}

/// Checks that the superpotential model coincides with the textbook radial
/// oscillator when `l = hbar (l' + 1)`; returns the maximal deviation.
pub fn radial_map_check(ell_prime: usize, n: usize, hbar: f64, omega: f64, sample_count: usize) -> Result<f64> {
    let samples = radial_map_samples(ell_prime, n, hbar, omega, sample_count);
    radial_map_deviation(hbar * (ell_prime as f64 + 1.0), ell_prime, n, hbar, omega, &samples)
}

/// Parses `5`, `-3/2` or `2.5` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() || s.len() > 64 {
        return None;
    }
    if let Some((a, b)) = s.split_once('/') {
        let num: num_bigint::BigInt = a.trim().parse().ok()?;
        let den: num_bigint::BigInt = b.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let (neg, ip_digits) = match ip.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, ip.strip_prefix('+').unwrap_or(ip)),
        };
        if !ip_digits.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits: num_bigint::BigInt = format!("{ip_digits}{fp}").parse().ok()?;
        let den = num_traits::pow(num_bigint::BigInt::from(10), fp.len());
        let r = BigRational::new(digits, den);
        return Some(if neg { -r } else { r });
    }
    let n: num_bigint::BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}
