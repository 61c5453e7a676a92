//! Hermite, Laguerre and Jacobi polynomials with exact coefficients.

use num_traits::{One, Zero};

use super::poly::{int, rat, ExactPolynomial, Rational, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalKind {
    Hermite,
    Laguerre,
    Jacobi,
}

impl ClassicalKind {
    pub fn variable(self) -> Variable {
        match self {
            ClassicalKind::Hermite => Variable::Xi,
            ClassicalKind::Laguerre => Variable::Z,
            ClassicalKind::Jacobi => Variable::Y,
        }
    }
}

/// Classical orthogonal polynomial of degree `n`.
///
/// `alpha` is ignored for Hermite, `beta` for Hermite and Laguerre. Negative
/// and non-integer parameters are allowed.
pub fn classical_poly(
    kind: ClassicalKind,
    n: usize,
    alpha: &Rational,
    beta: &Rational,
) -> ExactPolynomial {
    match kind {
        ClassicalKind::Hermite => hermite(n),
        ClassicalKind::Laguerre => laguerre(n, alpha),
        ClassicalKind::Jacobi => jacobi(n, alpha, beta),
    }
}

/// Physicists' Hermite polynomial `H_n(xi)`.
pub fn hermite(n: usize) -> ExactPolynomial {
    let v = Variable::Xi;
    let two_x = ExactPolynomial::from_integers(&[0, 2], v);
    let mut prev = ExactPolynomial::one(v);
    if n == 0 {
        return prev;
    }
    let mut cur = two_x.clone();
    for k in 1..n {
        // H_{k+1} = 2 xi H_k - 2k H_{k-1}
        let next = &(&two_x * &cur) - &prev.scale(&int(2 * k as i64));
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_n^(alpha)(z)`.
pub fn laguerre(n: usize, alpha: &Rational) -> ExactPolynomial {
    let v = Variable::Z;
    let mut prev = ExactPolynomial::one(v);
    if n == 0 {
        return prev;
    }
    let mut cur = ExactPolynomial::linear(alpha + int(1), int(-1), v);
    for k in 1..n {
        // (k+1) L_{k+1} = (2k+1+alpha-z) L_k - (k+alpha) L_{k-1}
        let k_r = int(k as i64);
        let factor = ExactPolynomial::linear(int(2 * k as i64 + 1) + alpha, int(-1), v);
        let next = (&(&factor * &cur) - &prev.scale(&(&k_r + alpha))).scale(&rat(1, k as i64 + 1));
        prev = cur;
        cur = next;
    }
    cur
}

/// Jacobi polynomial `P_n^(alpha,beta)(y)`.
///
/// Uses the three-term recurrence; if one of its normalizing factors
/// vanishes for these parameters the explicit binomial sum is used instead.
pub fn jacobi(n: usize, alpha: &Rational, beta: &Rational) -> ExactPolynomial {
    let v = Variable::Y;
    let mut prev = ExactPolynomial::one(v);
    if n == 0 {
        return prev;
    }
    let ab = alpha + beta;
    // P_1 = (alpha+1) + (alpha+beta+2)(y-1)/2
    let half_slope = (&ab + int(2)) / int(2);
    let mut cur = ExactPolynomial::linear(alpha + int(1) - &half_slope, half_slope, v);
    for k in 1..n {
        let k_r = int(k as i64);
        let s = int(2 * k as i64) + &ab; // 2k + alpha + beta
        let lead = int(2) * (&k_r + int(1)) * (&k_r + &ab + int(1)) * &s;
        if lead.is_zero() {
            return jacobi_explicit(n, alpha, beta);
        }
        let c1 = (&s + int(1)) * (&s + int(2)) * &s;
        let c0 = (&s + int(1)) * (alpha * alpha - beta * beta);
        let c_prev = int(2) * (&k_r + alpha) * (&k_r + beta) * (&s + int(2));
        let factor = ExactPolynomial::linear(c0, c1, v);
        let next = (&(&factor * &cur) - &prev.scale(&c_prev)).scale(&(Rational::one() / lead));
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized binomial coefficient `C(a, k)` for rational `a`.
pub fn binomial(a: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * (a - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

/// `P_n = sum_s C(n+alpha, n-s) C(n+beta, s) ((y-1)/2)^s ((y+1)/2)^(n-s)`
pub(crate) fn jacobi_explicit(n: usize, alpha: &Rational, beta: &Rational) -> ExactPolynomial {
    let v = Variable::Y;
    let minus = ExactPolynomial::linear(rat(-1, 2), rat(1, 2), v);
    let plus = ExactPolynomial::linear(rat(1, 2), rat(1, 2), v);
    let na = int(n as i64) + alpha;
    let nb = int(n as i64) + beta;
    let mut acc = ExactPolynomial::zero(v);
    for s in 0..=n {
        let c = binomial(&na, n - s) * binomial(&nb, s);
        if c.is_zero() {
            continue;
        }
        let term = &minus.pow(s) * &plus.pow(n - s);
        acc = &acc + &term.scale(&c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit-sum oracles, independent of the recurrences.
    fn hermite_oracle(n: usize) -> ExactPolynomial {
        let mut coeffs = vec![Rational::zero(); n + 1];
        let fact = |k: usize| (1..=k).fold(Rational::one(), |a, i| a * int(i as i64));
        for m in 0..=n / 2 {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let pow2 = (0..n - 2 * m).fold(Rational::one(), |a, _| a * int(2));
            coeffs[n - 2 * m] = int(sign) * fact(n) * pow2 / (fact(m) * fact(n - 2 * m));
        }
        ExactPolynomial::new(coeffs, Variable::Xi)
    }

    fn laguerre_oracle(n: usize, alpha: &Rational) -> ExactPolynomial {
        let na = int(n as i64) + alpha;
        let mut fact = Rational::one();
        let mut coeffs = Vec::new();
        for k in 0..=n {
            if k > 0 {
                fact *= int(k as i64);
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            coeffs.push(int(sign) * binomial(&na, n - k) / &fact);
        }
        ExactPolynomial::new(coeffs, Variable::Z)
    }

    #[test]
    fn hermite_small_cases() {
        assert_eq!(hermite(0), ExactPolynomial::from_integers(&[1], Variable::Xi));
        assert_eq!(
            hermite(3),
            ExactPolynomial::from_integers(&[0, -12, 0, 8], Variable::Xi)
        );
    }

    #[test]
    fn laguerre_degree_one() {
        let a = rat(7, 3);
        assert_eq!(
            laguerre(1, &a),
            ExactPolynomial::linear(&a + int(1), int(-1), Variable::Z)
        );
    }

    #[test]
    fn recurrences_match_explicit_sums() {
        let params = [rat(9, 2), rat(-5, 2), rat(1, 3), int(-2), int(0)];
        for n in 0..=30 {
            assert_eq!(hermite(n), hermite_oracle(n), "H_{n}");
            for a in &params {
                assert_eq!(laguerre(n, a), laguerre_oracle(n, a), "L_{n}^{a}");
            }
        }
        for n in 0..=12 {
            for a in &params {
                for b in &params {
                    assert_eq!(jacobi(n, a, b), jacobi_explicit(n, a, b), "P_{n}^({a},{b})");
                }
            }
        }
    }

    #[test]
    fn derivative_identities_hold_exactly() {
        for n in 1..=30usize {
            // H_n' = 2n H_{n-1}
            assert_eq!(hermite(n).derivative(), hermite(n - 1).scale(&int(2 * n as i64)));
            // d/dz L_n^(a) = -L_{n-1}^(a+1)
            let a = rat(9, 2);
            assert_eq!(laguerre(n, &a).derivative(), -&laguerre(n - 1, &(&a + int(1))));
            // d/dy P_n^(a,b) = (n+a+b+1)/2 P_{n-1}^(a+1,b+1)
            let (a, b) = (rat(9, 2), rat(11, 2));
            let c = (int(n as i64) + &a + &b + int(1)) / int(2);
            assert_eq!(
                jacobi(n, &a, &b).derivative(),
                jacobi(n - 1, &(&a + int(1)), &(&b + int(1))).scale(&c)
            );
        }
    }

    #[test]
    fn degenerate_jacobi_parameters_fall_back() {
        // alpha + beta = -2 makes 2k + alpha + beta vanish at k = 1.
        let (a, b) = (rat(-1, 2), rat(-3, 2));
        let p = jacobi(3, &a, &b);
        assert_eq!(p, jacobi_explicit(3, &a, &b));
    }
}
