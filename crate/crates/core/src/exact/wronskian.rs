//! Exact Wronskian determinants of prefactored functions.
//!
//! Column prefactors are pulled out of the determinant by multilinearity,
//! row `j` contributes a common `b^{-j}` for each power base that appears,
//! and the remaining polynomial determinant is expanded by fraction-free
//! (Bareiss) elimination.

use num_traits::{One, Zero};

use super::poly::{int, ExactPolynomial, Rational, Variable};
use super::prefactored::{Prefactor, PrefactoredFunction};
use crate::error::{Error, Result};

/// `W[f_1, ..., f_n](u) = det(d^j f_k / du^j)` computed exactly in `var`.
pub fn wronskian(fs: &[PrefactoredFunction], var: Variable) -> Result<PrefactoredFunction> {
    if fs.is_empty() {
        return Ok(PrefactoredFunction::polynomial(ExactPolynomial::one(var)));
    }
    for f in fs {
        if f.var() != var {
            return Err(Error::DimensionMismatch {
                expected: var,
                found: f.var(),
            });
        }
    }
    let n = fs.len();
    let uses1 = fs.iter().any(|f| !f.prefactor.pow1.is_zero());
    let uses2 = fs.iter().any(|f| !f.prefactor.pow2.is_zero());

    // entries[j][k] = rebased polynomial of d^j f_k
    let mut matrix = vec![Vec::with_capacity(n); n];
    let mut column_prefactor = Prefactor::default();
    for f in fs {
        column_prefactor = column_prefactor.combine(&f.prefactor)?;
        let mut g = f.clone();
        for (j, row) in matrix.iter_mut().enumerate() {
            let shift = int(j as i64);
            let t1 = if uses1 { &f.prefactor.pow1 - &shift } else { Rational::zero() };
            let t2 = if uses2 { &f.prefactor.pow2 - &shift } else { Rational::zero() };
            row.push(g.rebase(&t1, &t2));
            if j + 1 < n {
                g = g.differentiate();
            }
        }
    }

    let row_shift = int((n * (n - 1) / 2) as i64);
    let mut prefactor = column_prefactor;
    if uses1 {
        prefactor.pow1 -= &row_shift;
    }
    if uses2 {
        prefactor.pow2 -= &row_shift;
    }
    let det = bareiss_determinant(matrix, var);
    if det.is_zero() {
        return Ok(PrefactoredFunction {
            prefactor: Prefactor::default(),
            poly: det,
        });
    }
    Ok(PrefactoredFunction { prefactor, poly: det }.normalize())
}

/// Determinant of a square matrix over `Q[u]` by Bareiss elimination with
/// row pivoting on nonzero entries.
pub fn bareiss_determinant(mut m: Vec<Vec<ExactPolynomial>>, var: Variable) -> ExactPolynomial {
    let n = m.len();
    if n == 0 {
        return ExactPolynomial::one(var);
    }
    let mut sign = Rational::one();
    let mut prev = ExactPolynomial::one(var);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return ExactPolynomial::zero(var),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(&sign)
}
