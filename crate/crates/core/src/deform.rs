//! Multi-indexed and Krein-Adler deformations of the base systems.
//!
//! A deformed ground state is stored as `prefactor * gs_num / den`, where
//! `gs_num` and `den` are exact Wronskians in the family variable. Its
//! logarithmic derivative is then the sum of three exact pieces, so no
//! quotient is ever differentiated numerically.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{
    int, rat, wronskian, CompiledPoly, ExactPolynomial, NumericFunction, NumericPrefactor, Precision, Prefactor, PrefactoredFunction,
    Variable,
};
use crate::systems::{
    eigen_polynomial, eigenfunction, validate_deformation, virtual_state, Family, SystemSpec, VirtualStateLabel,
    VirtualType,
};

/// Grid size used by the builders' regularity check.
pub const NODELESS_GRID: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeformationKind {
    /// The base system itself.
    Identity,
    /// Virtual-state Darboux transformation with type-I and type-II index
    /// sets.
    MultiIndexed { type_i: Vec<usize>, type_ii: Vec<usize> },
    /// Deletion of the eigenstates `d` and `d + 1`.
    KreinAdler { d: usize },
}

impl fmt::Display for DeformationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            DeformationKind::Identity => write!(f, "identity"),
            DeformationKind::MultiIndexed { type_i, type_ii } => {
                write!(f, "multi-indexed D_I={{{}}} D_II={{{}}}", list(type_i), list(type_ii))
            }
            DeformationKind::KreinAdler { d } => write!(f, "krein-adler D={{{},{}}}", d, d + 1),
        }
    }
}

/// Reduced form of the squared superpotential and the matching measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegrandForm {
    /// `(d/dxi ln|phi_0|)^2` with measure `dxi` (H and L).
    XiSquared,
    /// `z (d/dz ln|phi_0|)^2` with measure `dz / sqrt(z)` (L).
    ZScaled,
    /// `(1 - y^2)(d/dy ln|phi_0|)^2` with measure `dy / sqrt(1 - y^2)` (J).
    YScaled,
}

impl IntegrandForm {
    pub fn variable(self) -> Variable {
        match self {
            IntegrandForm::XiSquared => Variable::Xi,
            IntegrandForm::ZScaled => Variable::Z,
            IntegrandForm::YScaled => Variable::Y,
        }
    }

    /// Weight multiplying `sqrt(E - W^2)` in the integral.
    pub fn measure(self, t: f64) -> f64 {
        match self {
            IntegrandForm::XiSquared => 1.0,
            IntegrandForm::ZScaled => 1.0 / t.sqrt(),
            IntegrandForm::YScaled => 1.0 / (1.0 - t * t).sqrt(),
        }
    }

    fn supports(self, family: Family) -> bool {
        matches!(
            (self, family),
            (IntegrandForm::XiSquared, Family::H | Family::L)
                | (IntegrandForm::ZScaled, Family::L)
                | (IntegrandForm::YScaled, Family::J)
        )
    }
}

/// Reduced energy of level `level` in the normalization of `form`.
pub fn form_energy(spec: &SystemSpec, form: IntegrandForm, level: usize) -> f64 {
    let n = level as f64;
    match (form, spec.family) {
        (IntegrandForm::XiSquared, Family::H) => 2.0 * n,
        (IntegrandForm::XiSquared, _) => 4.0 * n,
        (IntegrandForm::ZScaled, _) => n,
        (IntegrandForm::YScaled, _) => n * (n + spec.g_f64() + spec.h_f64()),
    }
}

/// Real function on an open interval, backed by exact data.
#[derive(Clone)]
pub struct EvaluableFunction {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub domain: (f64, f64),
    pub variable: Variable,
}

impl fmt::Debug for EvaluableFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvaluableFunction")
            .field("domain", &self.domain)
            .field("variable", &self.variable)
            .finish()
    }
}

impl EvaluableFunction {
    pub fn new(domain: (f64, f64), variable: Variable, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        EvaluableFunction {
            f: Arc::new(f),
            domain,
            variable,
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }
}

#[derive(Debug)]
struct Compiled {
    prefactor: NumericPrefactor,
    num: NumericFunction,
    den: NumericFunction,
    seeds: NumericFunction,
}

/// A deformed solvable system with its exact Wronskian data.
#[derive(Debug, Clone)]
pub struct DeformedSystem {
    pub base: SystemSpec,
    pub kind: DeformationKind,
    /// Denominator Wronskian of the ground state.
    pub den: PrefactoredFunction,
    /// Numerator Wronskian of the ground state.
    pub gs_num: PrefactoredFunction,
    /// Explicit prefactor of the ground state.
    pub ground_prefactor: Prefactor,
    /// Wronskian of the full seed functions, which enters the potential.
    pub seed_wronskian: PrefactoredFunction,
    pub seed_count: usize,
    precision: Precision,
    compiled: Arc<Compiled>,
}

impl DeformedSystem {
    fn assemble(
        base: SystemSpec,
        kind: DeformationKind,
        den: PrefactoredFunction,
        gs_num: PrefactoredFunction,
        ground_prefactor: Prefactor,
        seed_wronskian: PrefactoredFunction,
        seed_count: usize,
    ) -> Self {
        let var = base.variable();
        let compiled = Compiled {
            prefactor: ground_prefactor.compile(var),
            num: gs_num.compile(),
            den: den.compile(),
            seeds: seed_wronskian.compile(),
        };
        DeformedSystem {
            base,
            kind,
            den,
            gs_num,
            ground_prefactor,
            seed_wronskian,
            seed_count,
            precision: Precision::Auto,
            compiled: Arc::new(compiled),
        }
    }

    /// The undeformed system.
    pub fn identity(spec: &SystemSpec) -> Self {
        let var = spec.variable();
        let one = PrefactoredFunction::polynomial(ExactPolynomial::one(var));
        Self::assemble(
            spec.clone(),
            DeformationKind::Identity,
            one.clone(),
            eigenfunction(spec, 0),
            Prefactor::default(),
            one,
            0,
        )
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn family(&self) -> Family {
        self.base.family
    }

    /// Largest polynomial degree among the Wronskians.
    pub fn max_degree(&self) -> usize {
        [&self.den, &self.gs_num, &self.seed_wronskian]
            .iter()
            .filter_map(|f| f.poly.degree())
            .max()
            .unwrap_or(0)
    }

    /// Index of the base level with `n` nodes in this system.
    pub fn level_index(&self, n: usize) -> usize {
        match self.kind {
            DeformationKind::KreinAdler { d } => crate::systems::breve(n, d),
            _ => n,
        }
    }

    /// Default reduced integrand form for this system.
    pub fn default_form(&self) -> IntegrandForm {
        match (self.base.family, &self.kind) {
            (Family::H, _) => IntegrandForm::XiSquared,
            (Family::L, DeformationKind::KreinAdler { .. }) => IntegrandForm::ZScaled,
            (Family::L, _) => IntegrandForm::XiSquared,
            (Family::J, _) => IntegrandForm::YScaled,
        }
    }

    /// `d/du ln|phi_0|` in the family variable.
    pub fn ground_log_derivative(&self, u: f64) -> f64 {
        let c = &self.compiled;
        let p = self.precision;
        c.prefactor.log_derivative(u) + c.num.log_derivative(u, p) - c.den.log_derivative(u, p)
    }

    /// `phi_0(u)` up to a constant; may under- or overflow far from the
    /// bulk.
    pub fn ground_state(&self, u: f64) -> Result<f64> {
        let c = &self.compiled;
        let p = self.precision;
        Ok(c.prefactor.value(u)? * c.num.value(u, p)? / c.den.value(u, p)?)
    }

    /// Squared superpotential in the requested reduced form.
    pub fn logderiv_sq(&self, form: IntegrandForm) -> Result<EvaluableFunction> {
        if !form.supports(self.base.family) {
            return Err(Error::InvalidParameters(vec![format!(
                "integrand form {form:?} does not apply to the {} family",
                self.base.family
            )]));
        }
        let sys = self.clone();
        Ok(match (form, self.base.family) {
            (IntegrandForm::XiSquared, Family::H) => {
                EvaluableFunction::new((f64::NEG_INFINITY, f64::INFINITY), Variable::Xi, move |xi| {
                    sys.ground_log_derivative(xi).powi(2)
                })
            }
            (IntegrandForm::XiSquared, _) => EvaluableFunction::new((0.0, f64::INFINITY), Variable::Xi, move |xi| {
                let d = 2.0 * xi * sys.ground_log_derivative(xi * xi);
                d * d
            }),
            (IntegrandForm::ZScaled, _) => EvaluableFunction::new((0.0, f64::INFINITY), Variable::Z, move |z| {
                z * sys.ground_log_derivative(z).powi(2)
            }),
            (IntegrandForm::YScaled, _) => EvaluableFunction::new((-1.0, 1.0), Variable::Y, move |y| {
                (1.0 - y * y) * sys.ground_log_derivative(y).powi(2)
            }),
        })
    }

    /// `V_D(x) = V(x) - 2 d^2/dx^2 ln|W[seeds](x)|` at `hbar = w = 1`.
    pub fn deformed_potential(&self) -> EvaluableFunction {
        let sys = self.clone();
        let family = self.base.family;
        let pairs = (self.seed_count * self.seed_count.saturating_sub(1) / 2) as f64;
        EvaluableFunction::new(family.x_domain(), Variable::Xi, move |x| {
            let c = &sys.compiled;
            let p = sys.precision;
            let v = sys.base.potential(x);
            if sys.seed_count == 0 {
                return v;
            }
            // u(x), u'(x), u''(x) and d^2/dx^2 ln|u'(x)|
            let (u, du, d2u, jac2) = match family {
                Family::H => (x, 1.0, 0.0, 0.0),
                Family::L => (x * x, 2.0 * x, 2.0, -1.0 / (x * x)),
                Family::J => {
                    let (s2, c2) = (2.0 * x).sin_cos();
                    (c2, -2.0 * s2, -4.0 * c2, -4.0 / (s2 * s2))
                }
            };
            let f1 = c.seeds.log_derivative(u, p);
            let f2 = c.seeds.log_derivative2(u, p);
            v - 2.0 * (f2 * du * du + f1 * d2u + pairs * jac2)
        })
    }

    /// True iff the denominator Wronskian has no sign change on an interior
    /// grid of the physical domain.
    pub fn check_nodeless(&self, grid_points: usize) -> bool {
        !has_interior_sign_change(&self.den, grid_points, self.precision)
    }

    fn check_regular(self) -> Result<Self> {
        if has_interior_sign_change(&self.den, NODELESS_GRID, self.precision) {
            return Err(Error::SingularDeformation(format!(
                "{} of {}: denominator Wronskian changes sign",
                self.kind, self.base.family
            )));
        }
        if has_interior_sign_change(&self.gs_num, NODELESS_GRID, self.precision) {
            return Err(Error::SingularDeformation(format!(
                "{} of {}: ground state has a node",
                self.kind, self.base.family
            )));
        }
        Ok(self)
    }
}

/// Interior sample points of the family-variable domain, dense enough to
/// resolve every real root of `poly`.
fn interior_grid(poly: &ExactPolynomial, grid_points: usize) -> Vec<f64> {
    let n = grid_points.max(1000);
    match poly.var() {
        Variable::Y => (1..n)
            .map(|k| -(std::f64::consts::PI * k as f64 / n as f64).cos())
            .collect(),
        var => {
            let bound = poly.root_bound().max(1.0);
            let core = bound.min(40.0);
            let mut pts: Vec<f64> = (1..n).map(|k| core * k as f64 / n as f64).collect();
            if bound > core {
                let steps = 400;
                let ratio = (bound / core).powf(1.0 / steps as f64);
                pts.extend((1..=steps).map(|k| core * ratio.powi(k)));
            }
            pts.extend((1..=200).map(|k| core / n as f64 * 10f64.powf(-(k as f64) / 20.0)));
            if var == Variable::Xi {
                let neg: Vec<f64> = pts.iter().map(|x| -x).collect();
                pts.extend(neg);
                pts.push(0.0);
            }
            pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            pts
        }
    }
}

fn has_interior_sign_change(f: &PrefactoredFunction, grid_points: usize, precision: Precision) -> bool {
    if f.poly.degree().unwrap_or(0) == 0 {
        return f.poly.is_zero();
    }
    let c = CompiledPoly::new(&f.poly);
    let odd = c.degree() % 2 == 1;
    let mut prev = 0.0;
    for u in interior_grid(&f.poly, grid_points) {
        let v = if u.abs() <= 1.0 {
            c.eval(u, precision)
        } else if odd && u < 0.0 {
            -c.eval_scaled(u, precision)
        } else {
            c.eval_scaled(u, precision)
        };
        if v == 0.0 {
            continue;
        }
        if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
            return true;
        }
        prev = v;
    }
    false
}

/// Multi-indexed deformation with virtual-state seeds `d_i` (type I) and
/// `d_ii` (type II). Empty index sets give the identity.
pub fn build_multi_indexed(spec: &SystemSpec, d_i: &[usize], d_ii: &[usize]) -> Result<DeformedSystem> {
    validate_deformation(spec, d_i, d_ii)
        .map_err(|v| Error::InvalidParameters(v.into_iter().map(|v| v.0).collect()))?;
    if d_i.is_empty() && d_ii.is_empty() {
        return Ok(DeformedSystem::identity(spec));
    }
    let var = spec.variable();
    let mut seeds = Vec::with_capacity(d_i.len() + d_ii.len() + 1);
    for (vtype, set) in [(VirtualType::I, d_i), (VirtualType::II, d_ii)] {
        for &index in set {
            seeds.push(virtual_state(spec, VirtualStateLabel::new(vtype, index)?)?);
        }
    }
    let count = seeds.len();
    let den = wronskian(&seeds, var)?;
    seeds.push(eigenfunction(spec, 0));
    let gs_num = wronskian(&seeds, var)?;
    let half_count = rat(count as i64, 2);
    let ground_prefactor = match spec.family {
        // z^{(M+N)/2}
        Family::L => Prefactor::exp_power(int(0), half_count),
        // (1 - y^2)^{(M+N)/2} up to a constant
        Family::J => Prefactor::powers(half_count.clone(), half_count),
        Family::H => unreachable!("rejected by validate_deformation"),
    };
    DeformedSystem::assemble(
        spec.clone(),
        DeformationKind::MultiIndexed {
            type_i: d_i.to_vec(),
            type_ii: d_ii.to_vec(),
        },
        den.clone(),
        gs_num,
        ground_prefactor,
        den,
        count,
    )
    .check_regular()
}

/// Krein-Adler deformation deleting levels `d` and `d + 1`.
///
/// The ground state is `prefactor * W[P_d, P_{d+1}, 1] / W[P_d, P_{d+1}]`
/// with the Wronskians taken over the bare classical polynomials.
pub fn build_krein_adler(spec: &SystemSpec, d: usize) -> Result<DeformedSystem> {
    if d == 0 {
        return Err(Error::InvalidParameters(vec!["Krein-Adler index d must be >= 1".into()]));
    }
    krein_adler_unchecked(spec, &[d, d + 1])?.check_regular()
}

/// Krein-Adler style construction for an arbitrary set of deleted levels,
/// without the regularity check.
pub(crate) fn krein_adler_unchecked(spec: &SystemSpec, levels: &[usize]) -> Result<DeformedSystem> {
    let var = spec.variable();
    let polys: Vec<PrefactoredFunction> = levels
        .iter()
        .map(|&n| PrefactoredFunction::polynomial(eigen_polynomial(spec, n)))
        .collect();
    let den = wronskian(&polys, var)?;
    let mut with_one = polys.clone();
    with_one.push(PrefactoredFunction::polynomial(ExactPolynomial::one(var)));
    let gs_num = wronskian(&with_one, var)?;
    let k = int(levels.len() as i64);
    // Converting the ratio of x-Wronskians to u-Wronskians contributes
    // (du/dx)^k on top of the common eigenfunction prefactor.
    let ground_prefactor = match spec.family {
        Family::H => Prefactor::gaussian(rat(-1, 2)),
        Family::L => Prefactor::exp_power(rat(-1, 2), (&spec.g + &k) / int(2)),
        Family::J => Prefactor::powers((&spec.g + &k) / int(2), (&spec.h + &k) / int(2)),
    };
    let seeds: Vec<PrefactoredFunction> = levels.iter().map(|&n| eigenfunction(spec, n)).collect();
    let seed_wronskian = wronskian(&seeds, var)?;
    let kind = match levels {
        [d, e] if *e == d + 1 => DeformationKind::KreinAdler { d: *d },
        _ => DeformationKind::KreinAdler { d: levels[0] },
    };
    Ok(DeformedSystem::assemble(
        spec.clone(),
        kind,
        den,
        gs_num,
        ground_prefactor,
        seed_wronskian,
        levels.len(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn undeformed_harmonic_superpotential() {
        let sys = DeformedSystem::identity(&SystemSpec::harmonic());
        let w2 = sys.logderiv_sq(IntegrandForm::XiSquared).unwrap();
        for &xi in &[-3.0, -0.5, 0.0, 1.25, 4.0] {
            assert!(close(w2.eval(xi), xi * xi, 1e-14));
        }
        let v = sys.deformed_potential();
        assert!(close(v.eval(1.5), 1.5 * 1.5 - 1.0, 1e-14));
    }

    #[test]
    fn undeformed_radial_superpotential() {
        let spec = SystemSpec::radial(int(3)).unwrap();
        let sys = DeformedSystem::identity(&spec);
        let w2 = sys.logderiv_sq(IntegrandForm::XiSquared).unwrap();
        let zs = sys.logderiv_sq(IntegrandForm::ZScaled).unwrap();
        for &xi in &[0.2, 1.0, 2.5] {
            assert!(close(w2.eval(xi), (xi - 3.0 / xi).powi(2), 1e-13));
            let z = xi * xi;
            assert!(close(4.0 * zs.eval(z), w2.eval(xi), 1e-13));
        }
    }

    #[test]
    fn form_mismatch_is_rejected() {
        let sys = DeformedSystem::identity(&SystemSpec::harmonic());
        assert!(sys.logderiv_sq(IntegrandForm::YScaled).is_err());
        assert!(sys.logderiv_sq(IntegrandForm::ZScaled).is_err());
    }

    #[test]
    fn krein_adler_harmonic_is_regular() {
        let sys = build_krein_adler(&SystemSpec::harmonic(), 3).unwrap();
        assert!(sys.check_nodeless(NODELESS_GRID));
        assert_eq!(sys.seed_count, 2);
        // W[H_3, H_4] has degree 6; W[H_3, H_4, 1] is proportional to W[H_2, H_3].
        assert_eq!(sys.den.poly.degree(), Some(6));
        assert_eq!(sys.gs_num.poly.degree(), Some(4));
        assert_eq!(sys.level_index(2), 2);
        assert_eq!(sys.level_index(3), 5);
    }

    #[test]
    fn single_level_deletion_is_singular() {
        for d in 1..6 {
            let sys = krein_adler_unchecked(&SystemSpec::harmonic(), &[d]).unwrap();
            assert!(!sys.check_nodeless(NODELESS_GRID), "d={d}");
        }
        assert!(build_krein_adler(&SystemSpec::harmonic(), 0).is_err());
    }

    #[test]
    fn multi_indexed_radial_degrees() {
        let spec = SystemSpec::radial(int(5)).unwrap();
        let sys = build_multi_indexed(&spec, &[1], &[2]).unwrap();
        // Mixed types add M*N to the summed seed degrees: 1 + 2 + 1.
        assert_eq!(sys.den.poly.degree(), Some(4));
        assert!(sys.check_nodeless(NODELESS_GRID));
        assert_eq!(sys.seed_count, 2);
    }

    #[test]
    fn harmonic_multi_indexed_is_rejected() {
        assert!(build_multi_indexed(&SystemSpec::harmonic(), &[1], &[]).is_err());
        let id = build_multi_indexed(&SystemSpec::harmonic(), &[], &[]).unwrap();
        assert_eq!(id.kind, DeformationKind::Identity);
    }

    /// Ground-state log-derivative against a central difference of `ln|phi_0|`.
    #[test]
    fn log_derivative_matches_finite_difference() {
        let cases = [
            build_krein_adler(&SystemSpec::harmonic(), 3).unwrap(),
            build_krein_adler(&SystemSpec::radial(int(3)).unwrap(), 2).unwrap(),
            build_multi_indexed(&SystemSpec::radial(int(5)).unwrap(), &[1], &[2]).unwrap(),
            build_multi_indexed(&SystemSpec::poschl_teller(int(5), int(7)).unwrap(), &[1], &[1]).unwrap(),
        ];
        for sys in &cases {
            let pts: &[f64] = match sys.family() {
                Family::H => &[-1.3, 0.4, 2.2],
                Family::L => &[0.3, 1.7, 5.0],
                Family::J => &[-0.6, 0.1, 0.8],
            };
            for &u in pts {
                let h = 1e-5;
                let lp = sys.ground_state(u + h).unwrap().abs().ln();
                let lm = sys.ground_state(u - h).unwrap().abs().ln();
                let fd = (lp - lm) / (2.0 * h);
                let got = sys.ground_log_derivative(u);
                assert!(close(got, fd, 1e-6), "{}: u={u}: {got} vs {fd}", sys.kind);
            }
        }
    }

    /// Deformed potential against the supersymmetric form `W^2 - W' + E_shift`
    /// built from the deformed ground state itself.
    #[test]
    fn deformed_potential_matches_ground_state() {
        let sys = build_krein_adler(&SystemSpec::harmonic(), 3).unwrap();
        let v = sys.deformed_potential();
        let lnphi = |x: f64| sys.ground_state(x).unwrap().abs().ln();
        // V_D = phi_0''/phi_0 + E_0, with E_0 = 0 for this normalization.
        let h = 1e-3;
        let mut shift = None;
        for &x in &[-1.1, 0.3, 1.9] {
            let w = (lnphi(x + h) - lnphi(x - h)) / (2.0 * h);
            let w1 = (lnphi(x + h) - 2.0 * lnphi(x) + lnphi(x - h)) / (h * h);
            let q = w * w + w1;
            let diff = v.eval(x) - q;
            let s = *shift.get_or_insert(diff);
            assert!((diff - s).abs() < 1e-4, "x={x}: {diff} vs {s}");
        }
    }
}
