//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds `num/den` as an exact rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical variable a polynomial is written in.
///
/// `Xi` is the scaled coordinate `sqrt(omega/hbar) x`, `Z = Xi^2`, and
/// `Y = cos 2x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    Xi,
    Z,
    Y,
}

impl Variable {
    pub fn symbol(self) -> &'static str {
        match self {
            Variable::Xi => "xi",
            Variable::Z => "z",
            Variable::Y => "y",
        }
    }
}

/// Dense polynomial, `coeffs[k]` multiplies `u^k`.
///
/// The coefficient list never ends in a zero; the zero polynomial has no
/// coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPolynomial {
    coeffs: Vec<Rational>,
    var: Variable,
}

impl ExactPolynomial {
    pub fn new(mut coeffs: Vec<Rational>, var: Variable) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ExactPolynomial { coeffs, var }
    }

    pub fn zero(var: Variable) -> Self {
        ExactPolynomial {
            coeffs: Vec::new(),
            var,
        }
    }

    pub fn constant(c: Rational, var: Variable) -> Self {
        Self::new(vec![c], var)
    }

    pub fn one(var: Variable) -> Self {
        Self::constant(Rational::one(), var)
    }

    /// `a + b u`
    pub fn linear(a: Rational, b: Rational, var: Variable) -> Self {
        Self::new(vec![a, b], var)
    }

    /// The monomial `c u^k`.
    pub fn monomial(c: Rational, k: usize, var: Variable) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs, var)
    }

    pub fn from_integers(coeffs: &[i64], var: Variable) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect(), var)
    }

    pub fn var(&self) -> Variable {
        self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * int(k as i64))
            .collect();
        Self::new(coeffs, self.var)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.var);
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect(), self.var)
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs, self.var)
    }

    /// `p(-u)`
    pub fn reflect(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
            .collect();
        Self::new(coeffs, self.var)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.var);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact Horner evaluation.
    pub fn eval_exact(&self, u: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * u + c)
    }

    /// Plain double-precision Horner evaluation.
    pub fn eval_f64(&self, u: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * u + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Quotient and remainder of Euclidean division by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let lead = divisor
            .leading()
            .expect("division by the zero polynomial")
            .clone();
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(self.var), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] / &lead;
            if !q.is_zero() {
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &q * c;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::new(quot, self.var), Self::new(rem, self.var))
    }

    /// Division known to be exact; panics in debug builds otherwise.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Multiplicity of `root` as a zero of this (nonzero) polynomial, with the
    /// deflated cofactor.
    pub fn deflate_root(&self, root: &Rational) -> (usize, Self) {
        let factor = Self::linear(-root.clone(), Rational::one(), self.var);
        let mut p = self.clone();
        let mut count = 0;
        while !p.is_zero() && p.eval_exact(root).is_zero() {
            p = p.div_exact(&factor);
            count += 1;
        }
        (count, p)
    }

    /// Cauchy bound: every complex root lies in `|u| < bound`.
    /// Fujiwara bound `2 max_k |a_{n-k} / a_n|^{1/k}` on the moduli of the
    /// roots.
    pub fn root_bound(&self) -> f64 {
        let Some(lead) = self.leading() else {
            return 0.0;
        };
        let lead = lead.abs();
        let n = self.coeffs.len() - 1;
        let max = (1..=n)
            .map(|k| {
                let r = (self.coeffs[n - k].abs() / &lead).to_f64().unwrap_or(f64::INFINITY);
                let r = if k == n { r / 2.0 } else { r };
                r.powf(1.0 / k as f64)
            })
            .fold(0.0, f64::max);
        2.0 * max
    }

    pub(crate) fn combine(&self, other: &Self, sign: bool) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeff(k);
                let b = other.coeff(k);
                if sign {
                    a + b
                } else {
                    a - b
                }
            })
            .collect();
        Self::new(coeffs, self.var)
    }
}

impl Add for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn add(self, rhs: Self) -> ExactPolynomial {
        self.combine(rhs, true)
    }
}

impl Sub for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn sub(self, rhs: Self) -> ExactPolynomial {
        self.combine(rhs, false)
    }
}

impl Neg for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn neg(self) -> ExactPolynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn mul(self, rhs: Self) -> ExactPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ExactPolynomial::zero(self.var);
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ExactPolynomial::new(coeffs, self.var)
    }
}

impl fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let x = self.var.symbol();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "{x}")?,
                (1, false) => write!(f, "{mag}*{x}")?,
                (_, true) => write!(f, "{x}^{k}")?,
                (_, false) => write!(f, "{mag}*{x}^{k}")?,
            }
        }
        Ok(())
    }
}
