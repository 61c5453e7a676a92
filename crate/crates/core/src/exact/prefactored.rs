//! Functions of the form `prefactor(u) * P(u)` with `P` an exact polynomial.

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::laurent::LaurentPolynomial;
use super::numeric::{CompiledPoly, Precision};
use super::poly::{int, rat, ExactPolynomial, Rational, Variable};
use crate::error::{Error, Result};

/// Elementary prefactor multiplying the polynomial part.
///
/// Interpretation depends on the variable:
///
/// | variable | exponential                         | powers                              |
/// |----------|-------------------------------------|-------------------------------------|
/// | `Xi`     | `exp(r xi^2)` if `gaussian`, else `exp(r xi)` | `xi^pow1`                  |
/// | `Z`      | `exp(r z)`                          | `z^pow1`                            |
/// | `Y`      | none                                | `((1-y)/2)^pow1 ((1+y)/2)^pow2`     |
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prefactor {
    pub gaussian: bool,
    pub exp_rate: Rational,
    pub pow1: Rational,
    pub pow2: Rational,
}

impl Default for Prefactor {
    fn default() -> Self {
        Prefactor {
            gaussian: false,
            exp_rate: Rational::zero(),
            pow1: Rational::zero(),
            pow2: Rational::zero(),
        }
    }
}

impl Prefactor {
    pub fn gaussian(rate: Rational) -> Self {
        Prefactor {
            gaussian: true,
            exp_rate: rate,
            ..Default::default()
        }
    }

    pub fn exp_power(rate: Rational, pow1: Rational) -> Self {
        Prefactor {
            exp_rate: rate,
            pow1,
            ..Default::default()
        }
    }

    pub fn powers(pow1: Rational, pow2: Rational) -> Self {
        Prefactor {
            pow1,
            pow2,
            ..Default::default()
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.exp_rate.is_zero() && self.pow1.is_zero() && self.pow2.is_zero()
    }

    /// Product of two prefactors, if the exponential kinds agree.
    pub fn combine(&self, other: &Prefactor) -> Result<Prefactor> {
        let gaussian = match (self.exp_rate.is_zero(), other.exp_rate.is_zero()) {
            (true, _) => other.gaussian,
            (_, true) => self.gaussian,
            _ if self.gaussian == other.gaussian => self.gaussian,
            _ => {
                return Err(Error::IncompatiblePrefactors(
                    "cannot multiply a Gaussian by a linear exponential".into(),
                ))
            }
        };
        let exp_rate = &self.exp_rate + &other.exp_rate;
        Ok(Prefactor {
            gaussian: gaussian && !exp_rate.is_zero(),
            exp_rate,
            pow1: &self.pow1 + &other.pow1,
            pow2: &self.pow2 + &other.pow2,
        })
    }

    fn check(&self, var: Variable) -> Result<()> {
        let bad = match var {
            Variable::Xi => !self.pow2.is_zero(),
            Variable::Z => self.gaussian || !self.pow2.is_zero(),
            Variable::Y => !self.exp_rate.is_zero(),
        };
        if bad {
            return Err(Error::IncompatiblePrefactors(format!(
                "prefactor {self:?} is not valid in variable {}",
                var.symbol()
            )));
        }
        Ok(())
    }

    /// Numeric form of this prefactor.
    pub fn compile(&self, var: Variable) -> NumericPrefactor {
        NumericPrefactor {
            var,
            gaussian: self.gaussian,
            rate: self.exp_rate.to_f64().unwrap_or(f64::NAN),
            pow1: self.pow1.to_f64().unwrap_or(f64::NAN),
            pow2: self.pow2.to_f64().unwrap_or(f64::NAN),
            pow1_int: integer_exponent(&self.pow1),
            pow2_int: integer_exponent(&self.pow2),
        }
    }
}

fn integer_exponent(p: &Rational) -> Option<i32> {
    if p.is_integer() {
        p.to_integer().to_i32()
    } else {
        None
    }
}

/// Floating-point evaluator for a [`Prefactor`].
#[derive(Debug, Clone, Copy)]
pub struct NumericPrefactor {
    var: Variable,
    gaussian: bool,
    rate: f64,
    pow1: f64,
    pow2: f64,
    pow1_int: Option<i32>,
    pow2_int: Option<i32>,
}

fn power(base: f64, p: f64, p_int: Option<i32>, what: &'static str, at: f64) -> Result<f64> {
    match p_int {
        Some(0) => Ok(1.0),
        Some(k) if k < 0 && base == 0.0 => Err(Error::DomainError { what, at }),
        Some(k) => Ok(base.powi(k)),
        None if base > 0.0 => Ok((p * base.ln()).exp()),
        None if base == 0.0 && p > 0.0 => Ok(0.0),
        None => Err(Error::DomainError { what, at }),
    }
}

impl NumericPrefactor {
    fn bases(&self, u: f64) -> (f64, f64) {
        match self.var {
            Variable::Xi | Variable::Z => (u, 1.0),
            Variable::Y => ((1.0 - u) / 2.0, (1.0 + u) / 2.0),
        }
    }

    pub fn value(&self, u: f64) -> Result<f64> {
        let (b1, b2) = self.bases(u);
        let e = if self.rate == 0.0 {
            1.0
        } else if self.gaussian {
            (self.rate * u * u).exp()
        } else {
            (self.rate * u).exp()
        };
        let p1 = power(b1, self.pow1, self.pow1_int, "prefactor power", u)?;
        let p2 = power(b2, self.pow2, self.pow2_int, "prefactor power", u)?;
        Ok(e * p1 * p2)
    }

    /// `d/du ln|prefactor|`
    pub fn log_derivative(&self, u: f64) -> f64 {
        let mut d = if self.gaussian {
            2.0 * self.rate * u
        } else {
            self.rate
        };
        match self.var {
            Variable::Xi | Variable::Z => {
                if self.pow1 != 0.0 {
                    d += self.pow1 / u;
                }
            }
            Variable::Y => {
                if self.pow1 != 0.0 {
                    d -= self.pow1 / (1.0 - u);
                }
                if self.pow2 != 0.0 {
                    d += self.pow2 / (1.0 + u);
                }
            }
        }
        d
    }

    /// `d^2/du^2 ln|prefactor|`
    pub fn log_derivative2(&self, u: f64) -> f64 {
        let mut d = if self.gaussian { 2.0 * self.rate } else { 0.0 };
        match self.var {
            Variable::Xi | Variable::Z => {
                if self.pow1 != 0.0 {
                    d -= self.pow1 / (u * u);
                }
            }
            Variable::Y => {
                if self.pow1 != 0.0 {
                    d -= self.pow1 / ((1.0 - u) * (1.0 - u));
                }
                if self.pow2 != 0.0 {
                    d -= self.pow2 / ((1.0 + u) * (1.0 + u));
                }
            }
        }
        d
    }
}

/// `prefactor(u) * poly(u)` in a fixed canonical variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefactoredFunction {
    pub prefactor: Prefactor,
    pub poly: ExactPolynomial,
}

impl PrefactoredFunction {
    pub fn new(prefactor: Prefactor, poly: ExactPolynomial) -> Result<Self> {
        prefactor.check(poly.var())?;
        Ok(PrefactoredFunction { prefactor, poly })
    }

    pub fn polynomial(poly: ExactPolynomial) -> Self {
        PrefactoredFunction {
            prefactor: Prefactor::default(),
            poly,
        }
    }

    pub fn var(&self) -> Variable {
        self.poly.var()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.var() != other.var() {
            return Err(Error::DimensionMismatch {
                expected: self.var(),
                found: other.var(),
            });
        }
        Ok(PrefactoredFunction {
            prefactor: self.prefactor.combine(&other.prefactor)?,
            poly: &self.poly * &other.poly,
        })
    }

    /// Exact derivative with respect to the canonical variable.
    ///
    /// Nonzero power exponents drop by one; the polynomial part absorbs
    /// everything else.
    pub fn differentiate(&self) -> Self {
        let var = self.var();
        let pf = &self.prefactor;
        match var {
            Variable::Xi | Variable::Z => {
                let p = &self.poly;
                let mut d = LaurentPolynomial::from_poly(&p.derivative(), 0);
                if !pf.exp_rate.is_zero() {
                    let shift = if pf.gaussian { 1 } else { 0 };
                    let rate = if pf.gaussian {
                        &pf.exp_rate * int(2)
                    } else {
                        pf.exp_rate.clone()
                    };
                    d = d.add(&LaurentPolynomial::from_poly(p, shift).scale(&rate));
                }
                if !pf.pow1.is_zero() {
                    d = d.add(&LaurentPolynomial::from_poly(p, -1).scale(&pf.pow1));
                }
                let (shift, q) = d.split();
                let mut prefactor = pf.clone();
                let poly = if q.is_zero() {
                    q
                } else if shift < 0 || !pf.pow1.is_zero() {
                    prefactor.pow1 += int(shift);
                    q
                } else {
                    q.shift(shift as usize)
                };
                PrefactoredFunction { prefactor, poly }
            }
            Variable::Y => {
                let p = &self.poly;
                let lower1 = !pf.pow1.is_zero();
                let lower2 = !pf.pow2.is_zero();
                let b1 = ExactPolynomial::linear(rat(1, 2), rat(-1, 2), var);
                let b2 = ExactPolynomial::linear(rat(1, 2), rat(1, 2), var);
                let one = ExactPolynomial::one(var);
                let m1 = if lower1 { &b1 } else { &one };
                let m2 = if lower2 { &b2 } else { &one };
                let mut d = &(&p.derivative() * m1) * m2;
                if lower1 {
                    d = &d + &(p * m2).scale(&(&pf.pow1 * rat(-1, 2)));
                }
                if lower2 {
                    d = &d + &(p * m1).scale(&(&pf.pow2 * rat(1, 2)));
                }
                let mut prefactor = pf.clone();
                if lower1 {
                    prefactor.pow1 -= Rational::one();
                }
                if lower2 {
                    prefactor.pow2 -= Rational::one();
                }
                PrefactoredFunction { prefactor, poly: d }
            }
        }
    }

    /// Rewrites the function with smaller power exponents `(t1, t2)`, moving
    /// the difference into the polynomial. The differences must be
    /// nonnegative integers.
    pub(crate) fn rebase(&self, t1: &Rational, t2: &Rational) -> ExactPolynomial {
        let var = self.var();
        let k1 = (&self.prefactor.pow1 - t1)
            .to_integer()
            .to_usize()
            .expect("rebase exponent must be a nonnegative integer");
        let k2 = (&self.prefactor.pow2 - t2)
            .to_integer()
            .to_usize()
            .expect("rebase exponent must be a nonnegative integer");
        let (b1, b2) = match var {
            Variable::Xi | Variable::Z => (ExactPolynomial::linear(int(0), int(1), var), ExactPolynomial::one(var)),
            Variable::Y => (
                ExactPolynomial::linear(rat(1, 2), rat(-1, 2), var),
                ExactPolynomial::linear(rat(1, 2), rat(1, 2), var),
            ),
        };
        &(&self.poly * &b1.pow(k1)) * &b2.pow(k2)
    }

    /// Pulls factors of the boundary bases out of the polynomial: `z` for
    /// `Z`, and `(1-y)/2`, `(1+y)/2` for `Y`. `Xi` functions are returned
    /// unchanged.
    pub fn normalize(&self) -> Self {
        if self.poly.is_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        match self.var() {
            Variable::Xi => {}
            Variable::Z => {
                let (m, rest) = out.poly.deflate_root(&Rational::zero());
                out.prefactor.pow1 += int(m as i64);
                out.poly = rest;
            }
            Variable::Y => {
                // (u - 1) = -2 (1-y)/2 and (u + 1) = 2 (1+y)/2
                let (m1, rest) = out.poly.deflate_root(&int(1));
                let (m2, rest) = rest.deflate_root(&int(-1));
                let scale = (0..m1).fold(Rational::one(), |a, _| a * int(-2))
                    * (0..m2).fold(Rational::one(), |a, _| a * int(2));
                out.prefactor.pow1 += int(m1 as i64);
                out.prefactor.pow2 += int(m2 as i64);
                out.poly = rest.scale(&scale);
            }
        }
        out
    }

    /// Evaluates at `u` with the requested polynomial precision.
    pub fn eval(&self, u: f64, precision: Precision) -> Result<f64> {
        let pre = self.prefactor.compile(self.var()).value(u)?;
        let p = CompiledPoly::new(&self.poly).eval(u, precision);
        Ok(pre * p)
    }

    pub fn compile(&self) -> NumericFunction {
        NumericFunction::new(self)
    }

    pub fn is_negative_leading(&self) -> bool {
        self.poly.leading().is_some_and(Signed::is_negative)
    }
}

/// Compiled evaluator for a [`PrefactoredFunction`] and its logarithmic
/// derivatives.
#[derive(Debug, Clone)]
pub struct NumericFunction {
    prefactor: NumericPrefactor,
    p: CompiledPoly,
    dp: CompiledPoly,
    d2p: CompiledPoly,
}

impl NumericFunction {
    pub fn new(f: &PrefactoredFunction) -> Self {
        let d = f.poly.derivative();
        let d2 = d.derivative();
        NumericFunction {
            prefactor: f.prefactor.compile(f.var()),
            p: CompiledPoly::new(&f.poly),
            dp: CompiledPoly::new(&d),
            d2p: CompiledPoly::new(&d2),
        }
    }

    pub fn degree(&self) -> usize {
        self.p.degree()
    }

    pub fn value(&self, u: f64, precision: Precision) -> Result<f64> {
        Ok(self.prefactor.value(u)? * self.p.eval(u, precision))
    }

    pub fn poly_value(&self, u: f64, precision: Precision) -> f64 {
        self.p.eval(u, precision)
    }

    /// `p'/p` and `p''/p`; for `|u| > 1` each polynomial is scaled by its
    /// leading power so large arguments do not overflow.
    fn poly_ratios(&self, u: f64, precision: Precision) -> (f64, f64) {
        if u.abs() <= 1.0 {
            let p = self.p.eval(u, precision);
            return (self.dp.eval(u, precision) / p, self.d2p.eval(u, precision) / p);
        }
        let n = self.p.degree() as i32;
        let p = self.p.eval_scaled(u, precision);
        let ratio = |q: &CompiledPoly| {
            if q.degree() == 0 && q.eval_double(0.0) == 0.0 {
                0.0
            } else {
                q.eval_scaled(u, precision) / p * u.powi(q.degree() as i32 - n)
            }
        };
        (ratio(&self.dp), ratio(&self.d2p))
    }

    /// `d/du ln|f(u)|`
    pub fn log_derivative(&self, u: f64, precision: Precision) -> f64 {
        self.prefactor.log_derivative(u) + self.poly_ratios(u, precision).0
    }

    /// `d^2/du^2 ln|f(u)|`
    pub fn log_derivative2(&self, u: f64, precision: Precision) -> f64 {
        let (r1, r2) = self.poly_ratios(u, precision);
        self.prefactor.log_derivative2(u) + r2 - r1 * r1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zpoly(c: &[Rational]) -> ExactPolynomial {
        ExactPolynomial::new(c.to_vec(), Variable::Z)
    }

    #[test]
    fn power_rule() {
        let rho = rat(7, 3);
        let f = PrefactoredFunction::new(
            Prefactor::exp_power(Rational::zero(), rho.clone()),
            ExactPolynomial::one(Variable::Z),
        )
        .unwrap();
        let d = f.differentiate();
        assert_eq!(d.prefactor.pow1, &rho - int(1));
        assert_eq!(d.poly, ExactPolynomial::constant(rho, Variable::Z));
    }

    #[test]
    fn exponential_rule() {
        let f = PrefactoredFunction::new(
            Prefactor::exp_power(rat(1, 2), Rational::zero()),
            ExactPolynomial::one(Variable::Z),
        )
        .unwrap();
        let d = f.differentiate();
        assert_eq!(d.prefactor, f.prefactor);
        assert_eq!(d.poly, ExactPolynomial::constant(rat(1, 2), Variable::Z));
    }

    #[test]
    fn product_rule_against_hand_expansion() {
        // d/dz [e^{-z/2} z^{1/2} (1 - z)] = e^{-z/2} z^{-1/2} (1/2 - 2z + z^2/2)
        let f = PrefactoredFunction::new(
            Prefactor::exp_power(rat(-1, 2), rat(1, 2)),
            zpoly(&[int(1), int(-1)]),
        )
        .unwrap();
        let d = f.differentiate();
        assert_eq!(d.prefactor.pow1, rat(-1, 2));
        assert_eq!(d.prefactor.exp_rate, rat(-1, 2));
        assert_eq!(d.poly, zpoly(&[rat(1, 2), int(-2), rat(1, 2)]));
    }

    #[test]
    fn gaussian_rule() {
        // d/dxi [e^{-xi^2/2} (2 xi)] = e^{-xi^2/2} (2 - 2 xi^2)
        let f = PrefactoredFunction::new(
            Prefactor::gaussian(rat(-1, 2)),
            ExactPolynomial::from_integers(&[0, 2], Variable::Xi),
        )
        .unwrap();
        let d = f.differentiate();
        assert!(d.prefactor.gaussian);
        assert_eq!(d.poly, ExactPolynomial::from_integers(&[2, 0, -2], Variable::Xi));
    }

    #[test]
    fn jacobi_prefactor_rule() {
        // d/dy ((1-y)/2)^a ((1+y)/2)^b, checked numerically
        let f = PrefactoredFunction::new(
            Prefactor::powers(rat(5, 2), rat(3, 1)),
            ExactPolynomial::new(vec![rat(1, 3), int(2), int(-1)], Variable::Y),
        )
        .unwrap();
        let d = f.differentiate();
        for &y in &[-0.7, -0.1, 0.3, 0.85] {
            let h = 1e-5;
            let fd = (f.eval(y + h, Precision::Double).unwrap()
                - f.eval(y - h, Precision::Double).unwrap())
                / (2.0 * h);
            let an = d.eval(y, Precision::Double).unwrap();
            assert!((fd - an).abs() < 1e-8 * an.abs().max(1.0), "{fd} vs {an}");
        }
    }

    #[test]
    fn domain_errors() {
        let f = PrefactoredFunction::new(
            Prefactor::exp_power(Rational::zero(), rat(1, 2)),
            ExactPolynomial::one(Variable::Z),
        )
        .unwrap();
        assert!(matches!(f.eval(-1.0, Precision::Double), Err(Error::DomainError { .. })));
        let g = PrefactoredFunction::new(
            Prefactor::powers(rat(-1, 1), Rational::zero()),
            ExactPolynomial::one(Variable::Y),
        )
        .unwrap();
        assert!(g.eval(1.0, Precision::Double).is_err());
        assert!(g.eval(0.5, Precision::Double).is_ok());
    }

    #[test]
    fn invalid_prefactor_for_variable() {
        let r = PrefactoredFunction::new(
            Prefactor::exp_power(int(1), Rational::zero()),
            ExactPolynomial::one(Variable::Y),
        );
        assert!(matches!(r, Err(Error::IncompatiblePrefactors(_))));
    }

    #[test]
    fn normalize_extracts_boundary_factors() {
        // (1 - y)^2 (1 + y) * 3  ->  pow1 += 2, pow2 += 1, poly = 3 * 4 * 2 = 24
        let one_minus = ExactPolynomial::from_integers(&[1, -1], Variable::Y);
        let one_plus = ExactPolynomial::from_integers(&[1, 1], Variable::Y);
        let p = (&(&one_minus * &one_minus) * &one_plus).scale(&int(3));
        let f = PrefactoredFunction::polynomial(p).normalize();
        assert_eq!(f.prefactor.pow1, int(2));
        assert_eq!(f.prefactor.pow2, int(1));
        assert_eq!(f.poly, ExactPolynomial::constant(int(24), Variable::Y));
    }
}
