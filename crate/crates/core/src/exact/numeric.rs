//! Floating-point evaluation of exact polynomials, in plain double or
//! double-double arithmetic.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::poly::ExactPolynomial;

/// Polynomials up to this degree are evaluated in plain double under
/// [`Precision::Auto`].
pub const AUTO_DOUBLE_MAX_DEGREE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    Double,
    DoubleDouble,
    #[default]
    Auto,
}

impl Precision {
    pub fn resolve(self, degree: usize) -> Precision {
        match self {
            Precision::Auto if degree > AUTO_DOUBLE_MAX_DEGREE => Precision::DoubleDouble,
            Precision::Auto => Precision::Double,
            p => p,
        }
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub fn from_rational(r: &BigRational) -> Self {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() || hi == 0.0 {
            return DoubleDouble { hi, lo: 0.0 };
        }
        let lo = BigRational::from_float(hi)
            .map(|h| (r - h).to_f64().unwrap_or(0.0))
            .unwrap_or(0.0);
        let (hi, lo) = fast_two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Self {
        let (p, e) = two_prod(self.hi, x);
        let (hi, lo) = fast_two_sum(p, e + self.lo * x);
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (hi, lo) = fast_two_sum(s, e + self.lo + other.lo);
        DoubleDouble { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Coefficients of an exact polynomial rounded to double-double.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    coeffs: Vec<DoubleDouble>,
}

impl CompiledPoly {
    pub fn new(p: &ExactPolynomial) -> Self {
        CompiledPoly {
            coeffs: p.coeffs().iter().map(DoubleDouble::from_rational).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, u: f64, precision: Precision) -> f64 {
        match precision.resolve(self.degree()) {
            Precision::DoubleDouble => self.eval_dd(u).to_f64(),
            _ => self.eval_double(u),
        }
    }

    /// `u^n p(1/u)` for `n` the degree, i.e. the coefficients in reverse.
    pub fn eval_reversed(&self, v: f64, precision: Precision) -> f64 {
        match precision.resolve(self.degree()) {
            Precision::DoubleDouble => self
                .coeffs
                .iter()
                .fold(DoubleDouble::default(), |acc, &c| acc.mul_f64(v).add(c))
                .to_f64(),
            _ => self.coeffs.iter().fold(0.0, |acc, c| acc * v + c.hi),
        }
    }

    /// `p(u) / u^n`, finite for large `|u|` where `p(u)` itself overflows.
    pub fn eval_scaled(&self, u: f64, precision: Precision) -> f64 {
        self.eval_reversed(1.0 / u, precision)
    }

    pub fn eval_double(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c.hi)
    }

    pub fn eval_dd(&self, u: f64) -> DoubleDouble {
        self.coeffs
            .iter()
            .rev()
            .fold(DoubleDouble::default(), |acc, &c| acc.mul_f64(u).add(c))
    }
}
