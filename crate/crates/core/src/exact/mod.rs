//! Exact polynomial algebra: rational polynomials, the classical families,
//! prefactored functions and their Wronskians, plus floating-point
//! evaluation in double or double-double precision.

pub mod classical;
pub mod laurent;
pub mod numeric;
pub mod poly;
pub mod prefactored;
pub mod wronskian;

pub use classical::{classical_poly, hermite, jacobi, laguerre, ClassicalKind};
pub use laurent::LaurentPolynomial;
pub use numeric::{CompiledPoly, DoubleDouble, Precision};
pub use poly::{int, rat, ExactPolynomial, Rational, Variable};
pub use prefactored::{NumericFunction, NumericPrefactor, Prefactor, PrefactoredFunction};
pub use wronskian::wronskian;
