use std::collections::BTreeMap;

use num_traits::Zero;

use super::poly::{int, ExactPolynomial, Rational, Variable};

/// Finite sum of `c_k u^k` with `k` possibly negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, Rational>,
    var: Variable,
}

impl LaurentPolynomial {
    pub fn zero(var: Variable) -> Self {
        LaurentPolynomial {
            terms: BTreeMap::new(),
            var,
        }
    }

    /// `u^shift * p`
    pub fn from_poly(p: &ExactPolynomial, shift: i64) -> Self {
        let mut out = Self::zero(p.var());
        for (k, c) in p.coeffs().iter().enumerate() {
            out.add_term(k as i64 + shift, c.clone());
        }
        out
    }

    pub fn var(&self) -> Variable {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn add_term(&mut self, k: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.var);
        for (k, a) in &self.terms {
            out.add_term(*k, a * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.var);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                out.add_term(i + j, a * b);
            }
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.var);
        for (k, c) in &self.terms {
            out.add_term(k - 1, c * int(*k));
        }
        out
    }

    /// Splits into `u^shift * p` with `p(0) != 0` (or `p` zero).
    pub fn split(&self) -> (i64, ExactPolynomial) {
        let Some(lo) = self.min_exponent() else {
            return (0, ExactPolynomial::zero(self.var));
        };
        let hi = *self.terms.keys().next_back().unwrap();
        let mut coeffs = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (k, c) in &self.terms {
            coeffs[(k - lo) as usize] = c.clone();
        }
        (lo, ExactPolynomial::new(coeffs, self.var))
    }

    pub fn eval_f64(&self, u: f64) -> f64 {
        let (shift, p) = self.split();
        p.eval_f64(u) * u.powi(shift as i32)
    }
}
