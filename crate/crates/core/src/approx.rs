//! Certificates for best one-sided L1 approximation from below by harmonic
//! polynomials.
//!
//! If `h` is harmonic, `h ≤ f` on the cube, and `f - h` vanishes on `D_n`, then
//! `h` is a best approximant from below and the error is `∫_I (f - h)`. The
//! first and third conditions are decided exactly. One-sidedness is
//! nonnegativity of a polynomial on a box. That has a sound certified path:
//! the quotient by `∏_{i<j} (x_i^2 - x_j^2)^2` together with a nonnegativity
//! pattern. Everything else is an explicitly labelled grid heuristic.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonic::is_polyharmonic;
use crate::integrate::{integrate_cube, integrate_diagonal, CubeDomain, Weight};
use crate::poly::{Exponent, Polynomial, UnivariatePolynomial};
use crate::scalar::{rational_string, Scalar};
use crate::{Poly, Rational, UniPoly};

/// `p` vanishes identically on `D_n`: the integral of `p^2` over `D_n` is zero.
///
/// `p^2` is continuous and nonnegative, and every sheet of `D_n` has positive
/// measure, so a zero integral forces `p = 0` on each sheet.
pub fn vanishes_on_diagonal<T: Scalar>(p: &Polynomial<T>, d: &CubeDomain<T>) -> Result<bool> {
    let sq = p.try_mul(p)?;
    Ok(integrate_diagonal(&sq, d, &Weight::OmegaK(0))?.is_zero())
}

/// Every first partial of `p` vanishes on `D_n`.
pub fn gradient_vanishes_on_diagonal<T: Scalar>(p: &Polynomial<T>, d: &CubeDomain<T>) -> Result<bool> {
    for axis in 0..p.dim() {
        if !vanishes_on_diagonal(&p.partial(axis)?, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `∏_{i<j} (x_i^2 - x_j^2)^2` in `n` variables.
pub fn diagonal_product(n: usize) -> Poly {
    let mut acc = Poly::one(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = &Poly::var(n, i).pow(2) - &Poly::var(n, j).pow(2);
            acc = &acc * &diff.pow(2);
        }
    }
    acc
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(rn, rd))
}

/// Exact square root of a polynomial, if it is a perfect square.
pub fn sqrt_exact(g: &Poly) -> Option<Poly> {
    let dim = g.dim();
    let Some((lead_e, lead_c)) = g.leading_term() else {
        return Some(Poly::zero(dim));
    };
    if !lead_e.is_even() {
        return None;
    }
    let half: Vec<u32> = lead_e.as_slice().iter().map(|a| a / 2).collect();
    let s_lead_e = Exponent::new(half);
    let s_lead_c = rational_sqrt(lead_c)?;
    let two_lead = Poly::monomial(s_lead_c.clone() * Rational::from_integer(2.into()), s_lead_e.clone());
    let mut s = Poly::monomial(s_lead_c, s_lead_e.clone());
    let mut last = s_lead_e;
    loop {
        let rem = g - &(&s * &s);
        let Some((re, rc)) = rem.leading_term() else {
            return Some(s);
        };
        let (te, tc) = {
            let (le, lc) = two_lead.leading_term().expect("nonzero");
            let exps = re
                .as_slice()
                .iter()
                .zip(le.as_slice())
                .map(|(a, b)| a.checked_sub(*b))
                .collect::<Option<Vec<_>>>()?;
            (Exponent::new(exps), rc.clone() / lc.clone())
        };
        // Terms of the root are produced in strictly decreasing order.
        if te >= last {
            return None;
        }
        last = te.clone();
        s = &s + &Poly::monomial(tc, te);
    }
}

/// Which nonnegativity pattern certified the quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonnegPattern {
    /// Only even monomials with nonnegative coefficients.
    EvenMonomials,
    /// A positive multiple of an exact square.
    ScaledSquare,
}

pub fn nonneg_pattern(g: &Poly) -> Option<NonnegPattern> {
    if g.terms().all(|(e, c)| e.is_even() && !c.is_negative()) {
        return Some(NonnegPattern::EvenMonomials);
    }
    let (_, lead) = g.leading_term()?;
    if !lead.is_positive() {
        return None;
    }
    sqrt_exact(&g.scale(&(Rational::one() / lead.clone()))).map(|_| NonnegPattern::ScaledSquare)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OnesidedStrategy {
    /// Grid points per axis for the heuristic path.
    pub grid_per_axis: usize,
    /// Cap on the total number of grid points.
    pub max_points: usize,
}

impl Default for OnesidedStrategy {
    fn default() -> Self {
        OnesidedStrategy {
            grid_per_axis: 41,
            max_points: 1_000_000,
        }
    }
}

impl OnesidedStrategy {
    /// Points per axis after applying the total-point cap.
    pub fn effective_per_axis(&self, n: usize) -> usize {
        let mut per_axis = self.grid_per_axis.max(1);
        while per_axis > 2 && (per_axis as f64).powi(n as i32) > self.max_points as f64 {
            per_axis -= 1;
        }
        per_axis
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Onesided {
    /// `f - h = quotient * factor` with `quotient` matching `pattern`;
    /// `factor` is the diagonal product if `divided`, else 1.
    Certified {
        quotient: Poly,
        divided: bool,
        pattern: NonnegPattern,
    },
    /// No certificate, but no negative value on a uniform grid.
    Heuristic { grid_per_axis: usize, min: Rational },
    /// A grid point where `f - h < 0`.
    Failed { point: Vec<Rational>, value: Rational },
}

impl Onesided {
    pub fn holds(&self) -> bool {
        !matches!(self, Onesided::Failed { .. })
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Onesided::Certified { .. })
    }
}

/// Uniform rational grid on `[-r, r]`: `i/(N-1) * 2r - r`; the single point 0 for `N = 1`.
pub fn grid_axis(per_axis: usize, r: &Rational) -> Vec<Rational> {
    if per_axis <= 1 {
        return vec![Rational::zero()];
    }
    let steps = Rational::from_integer(((per_axis - 1) as i64).into());
    let two_r = r.clone() * Rational::from_integer(2.into());
    (0..per_axis)
        .map(|i| Rational::from_integer((i as i64).into()) / steps.clone() * two_r.clone() - r.clone())
        .collect()
}

fn grid_point(index: usize, axis: &[Rational], n: usize) -> Vec<Rational> {
    let mut rest = index;
    let mut point = vec![Rational::zero(); n];
    for slot in point.iter_mut().rev() {
        *slot = axis[rest % axis.len()].clone();
        rest /= axis.len();
    }
    point
}

/// Minimum of `p` over the grid; ties resolve to the lowest grid index.
pub fn grid_minimum(p: &Poly, d: &CubeDomain<Rational>, per_axis: usize) -> (Vec<Rational>, Rational) {
    let n = d.n();
    let axis = grid_axis(per_axis, d.r());
    let total = axis.len().pow(n as u32);
    let (idx, value) = (0..total)
        .into_par_iter()
        .map(|i| {
            let v = p
                .evaluate(&grid_point(i, &axis, n))
                .expect("grid point has dimension n");
            (i, v)
        })
        .reduce_with(|a, b| if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a })
        .expect("grid is nonempty");
    (grid_point(idx, &axis, n), value)
}

/// Decides (or estimates) `f - h ≥ 0` on the cube.
pub fn check_onesided(f_minus_h: &Poly, d: &CubeDomain<Rational>, strategy: &OnesidedStrategy) -> Onesided {
    let product = diagonal_product(d.n());
    if let Ok(Some(quotient)) = f_minus_h.divide_exact(&product) {
        if let Some(pattern) = nonneg_pattern(&quotient) {
            return Onesided::Certified {
                quotient,
                divided: true,
                pattern,
            };
        }
    }
    if let Some(pattern) = nonneg_pattern(f_minus_h) {
        return Onesided::Certified {
            quotient: f_minus_h.clone(),
            divided: false,
            pattern,
        };
    }
    let per_axis = strategy.effective_per_axis(d.n());
    let (point, min) = grid_minimum(f_minus_h, d, per_axis);
    if min.is_negative() {
        Onesided::Failed { point, value: min }
    } else {
        Onesided::Heuristic {
            grid_per_axis: per_axis,
            min,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimality {
    /// All hypotheses hold and one-sidedness is certified.
    Proved,
    /// All hypotheses hold, but one-sidedness is only grid-checked.
    Heuristic,
    NotEstablished,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxCertificate {
    pub f: Poly,
    pub h: Poly,
    pub domain: CubeDomain<Rational>,
    pub harmonic_ok: bool,
    pub vanishes_on_diagonal: bool,
    pub gradient_vanishes_on_diagonal: bool,
    pub onesided: Onesided,
    /// `∫ (f - h)`, which equals `‖f - h‖_1` whenever `f - h ≥ 0`. Present
    /// unless one-sidedness failed.
    pub l1_error: Option<Rational>,
}

impl ApproxCertificate {
    pub fn optimality(&self) -> Optimality {
        if !(self.harmonic_ok && self.vanishes_on_diagonal && self.onesided.holds()) {
            return Optimality::NotEstablished;
        }
        if self.onesided.is_certified() {
            Optimality::Proved
        } else {
            Optimality::Heuristic
        }
    }

    pub fn all_hypotheses(&self) -> bool {
        self.harmonic_ok
            && self.vanishes_on_diagonal
            && self.gradient_vanishes_on_diagonal
            && self.onesided.is_certified()
    }

    pub fn to_json(&self) -> CertificateJson {
        let onesided = match &self.onesided {
            Onesided::Certified {
                quotient,
                divided,
                pattern,
            } => OnesidedJson {
                status: "certified",
                quotient: Some(quotient.to_string()),
                divided_by_diagonal_product: Some(*divided),
                pattern: Some(*pattern),
                grid_per_axis: None,
                min: None,
                point: None,
            },
            Onesided::Heuristic { grid_per_axis, min } => OnesidedJson {
                status: "heuristic",
                quotient: None,
                divided_by_diagonal_product: None,
                pattern: None,
                grid_per_axis: Some(*grid_per_axis),
                min: Some(rational_string(min)),
                point: None,
            },
            Onesided::Failed { point, value } => OnesidedJson {
                status: "failed",
                quotient: None,
                divided_by_diagonal_product: None,
                pattern: None,
                grid_per_axis: None,
                min: Some(rational_string(value)),
                point: Some(point.iter().map(rational_string).collect()),
            },
        };
        CertificateJson {
            f: self.f.to_string(),
            h: self.h.to_string(),
            n: self.domain.n(),
            r: rational_string(self.domain.r()),
            harmonic_ok: self.harmonic_ok,
            vanishes_on_diagonal: self.vanishes_on_diagonal,
            gradient_vanishes_on_diagonal: self.gradient_vanishes_on_diagonal,
            onesided,
            optimality: self.optimality(),
            l1_error: self.l1_error.as_ref().map(rational_string),
            weighted_l1_error: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OnesidedJson {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divided_by_diagonal_product: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<NonnegPattern>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_per_axis: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateJson {
    pub f: String,
    pub h: String,
    pub n: usize,
    pub r: String,
    pub harmonic_ok: bool,
    pub vanishes_on_diagonal: bool,
    pub gradient_vanishes_on_diagonal: bool,
    pub onesided: OnesidedJson,
    pub optimality: Optimality,
    pub l1_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weighted_l1_error: Option<WeightedL1Json>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightedL1Json {
    pub phi: String,
    pub value: String,
    pub weight_check: &'static str,
    pub weight_check_points: usize,
    pub weight_nonnegative: bool,
}

/// Checks every hypothesis for `h` as a best approximant from below to `f`.
pub fn certify_best_approx(
    f: &Poly,
    h: &Poly,
    d: &CubeDomain<Rational>,
    strategy: &OnesidedStrategy,
) -> Result<ApproxCertificate> {
    let diff = f.try_sub(h)?;
    if diff.dim() != d.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            found: diff.dim(),
        });
    }
    let onesided = check_onesided(&diff, d, strategy);
    let l1_error = if onesided.holds() {
        Some(integrate_cube(&diff, d, &Weight::OmegaK(0))?)
    } else {
        None
    };
    Ok(ApproxCertificate {
        f: f.clone(),
        h: h.clone(),
        domain: d.clone(),
        harmonic_ok: is_polyharmonic(h, 1),
        vanishes_on_diagonal: vanishes_on_diagonal(&diff, d)?,
        gradient_vanishes_on_diagonal: gradient_vanishes_on_diagonal(&diff, d)?,
        onesided,
        l1_error,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedL1 {
    pub value: Rational,
    /// Points of `[0, r]` at which `φ'` and `φ''` were sampled.
    pub check_points: usize,
    /// `φ' ≥ 0` and `φ'' ≥ 0` at every sample (a grid check, not a proof).
    pub weight_nonnegative: bool,
}

impl WeightedL1 {
    pub fn to_json(&self, phi: &UniPoly) -> WeightedL1Json {
        WeightedL1Json {
            phi: phi.to_string(),
            value: rational_string(&self.value),
            weight_check: "grid",
            weight_check_points: self.check_points,
            weight_nonnegative: self.weight_nonnegative,
        }
    }
}

/// Samples used for the `φ', φ'' ≥ 0` check on `[0, r]`.
pub const WEIGHT_CHECK_POINTS: usize = 1001;

/// `∫_I (f - h) φ''(r - M)`; requires `φ(0) = φ'(0) = 0`.
pub fn weighted_l1_error(
    f: &Poly,
    h: &Poly,
    d: &CubeDomain<Rational>,
    phi: &UnivariatePolynomial<Rational>,
) -> Result<WeightedL1> {
    if let Some(j) = phi.first_nonvanishing_below(2) {
        return Err(Error::WeightVanishing {
            derivative: j,
            required: 2,
        });
    }
    let diff = f.try_sub(h)?;
    let d1 = phi.derivative(1);
    let d2 = phi.derivative(2);
    let steps = Rational::from_integer(((WEIGHT_CHECK_POINTS - 1) as i64).into());
    let weight_nonnegative = (0..WEIGHT_CHECK_POINTS).all(|i| {
        let u = Rational::from_integer((i as i64).into()) / steps.clone() * d.r().clone();
        !d1.evaluate(&u).is_negative() && !d2.evaluate(&u).is_negative()
    });
    Ok(WeightedL1 {
        value: integrate_cube(&diff, d, &Weight::Profile(d2))?,
        check_points: WEIGHT_CHECK_POINTS,
        weight_nonnegative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, parse_unipoly, ExprSource};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn poly(s: &str, n: usize) -> Poly {
        parse_poly(ExprSource::with_dim(s, n)).unwrap()
    }

    fn square() -> CubeDomain<Rational> {
        CubeDomain::new(2, q(1, 1)).unwrap()
    }

    const H1: &str = "-1/4*x1^4 + 3/2*x1^2*x2^2 - 1/4*x2^4";
    const F2: &str = "x1^8 + 14*x1^4*x2^4 + x2^8";
    const H2: &str = "x1^8 + x2^8 - 28*(x1^6*x2^2 + x1^2*x2^6) + 70*x1^4*x2^4";

    #[test]
    fn diagonal_vanishing() {
        let d = square();
        assert!(vanishes_on_diagonal(&poly("x1^2 - x2^2", 2), &d).unwrap());
        let e1 = &poly("x1^2*x2^2", 2) - &poly(H1, 2);
        assert_eq!(e1, poly("1/4*(x1^2 - x2^2)^2", 2));
        assert!(vanishes_on_diagonal(&e1, &d).unwrap());
        assert!(!vanishes_on_diagonal(&poly("x1", 2), &d).unwrap());
        assert!(vanishes_on_diagonal(&poly("x1^2 - x2^2", 2).scale(&q(-7, 3)), &d).unwrap());
    }

    #[test]
    fn gradient_vanishing() {
        let d = square();
        assert!(gradient_vanishes_on_diagonal(&poly("1/4*(x1^2 - x2^2)^2", 2), &d).unwrap());
        assert!(!gradient_vanishes_on_diagonal(&poly("x1^2 - x2^2", 2), &d).unwrap());
        assert!(gradient_vanishes_on_diagonal(&Poly::zero(2), &d).unwrap());
    }

    #[test]
    fn onesided_paths() {
        let d = square();
        let s = OnesidedStrategy::default();
        match check_onesided(&poly("1/4*(x1^2 - x2^2)^2", 2), &d, &s) {
            Onesided::Certified { quotient, divided, .. } => {
                assert!(divided);
                assert_eq!(quotient, Poly::constant(2, q(1, 4)));
            }
            other => panic!("expected certificate, got {:?}", other),
        }
        let e2 = &poly(F2, 2) - &poly(H2, 2);
        assert_eq!(e2, poly("28*x1^2*x2^2*(x1^2 - x2^2)^2", 2));
        match check_onesided(&e2, &d, &s) {
            Onesided::Certified { quotient, pattern, .. } => {
                assert_eq!(quotient, poly("28*x1^2*x2^2", 2));
                assert_eq!(pattern, NonnegPattern::EvenMonomials);
            }
            other => panic!("expected certificate, got {:?}", other),
        }
        match check_onesided(&poly("x1", 2), &d, &s) {
            Onesided::Failed { value, point } => {
                assert!(value.is_negative());
                assert_eq!(point[0], q(-1, 1));
            }
            other => panic!("expected failure, got {:?}", other),
        }
        match check_onesided(&poly("x1^2*x2 + 2", 2), &d, &s) {
            Onesided::Heuristic { grid_per_axis, min } => {
                assert_eq!(grid_per_axis, 41);
                assert_eq!(min, q(1, 1));
            }
            other => panic!("expected heuristic, got {:?}", other),
        }
    }

    #[test]
    fn square_roots() {
        let s = poly("x1^2 - 3/2*x1*x2 + 5", 2);
        assert_eq!(sqrt_exact(&(&s * &s)).map(|r| r.pow(2)), Some(&s * &s));
        assert_eq!(sqrt_exact(&poly("x1^2 + x2^2", 2)), None);
        assert_eq!(sqrt_exact(&poly("4", 2)), Some(poly("2", 2)));
        assert_eq!(sqrt_exact(&poly("2", 2)), None);
        assert_eq!(
            nonneg_pattern(&poly("3*(x1 - x2 + 1)^2", 2)),
            Some(NonnegPattern::ScaledSquare)
        );
        assert_eq!(nonneg_pattern(&poly("x1*x2", 2)), None);
    }

    #[test]
    fn diagonal_product_in_three_dimensions() {
        let d = CubeDomain::new(3, q(1, 1)).unwrap();
        let f = diagonal_product(3);
        let cert = certify_best_approx(&f, &Poly::zero(3), &d, &OnesidedStrategy::default()).unwrap();
        assert!(cert.all_hypotheses());
        assert_eq!(cert.optimality(), Optimality::Proved);
        assert_eq!(cert.l1_error, Some(integrate_cube(&f, &d, &Weight::OmegaK(0)).unwrap()));
    }

    #[test]
    fn quartic_approximant_certificate() {
        let cert = certify_best_approx(
            &poly("x1^2*x2^2", 2),
            &poly(H1, 2),
            &square(),
            &OnesidedStrategy::default(),
        )
        .unwrap();
        assert!(cert.all_hypotheses());
        assert_eq!(cert.l1_error, Some(q(8, 45)));
        let json = serde_json::to_value(cert.to_json()).unwrap();
        assert_eq!(json["l1_error"], "8/45");
        assert_eq!(json["onesided"]["status"], "certified");
    }

    #[test]
    fn failed_certificate_has_no_error_value() {
        let cert =
            certify_best_approx(&poly("x1", 2), &Poly::zero(2), &square(), &OnesidedStrategy::default()).unwrap();
        assert_eq!(cert.l1_error, None);
        assert_eq!(cert.optimality(), Optimality::NotEstablished);
        assert!(certify_best_approx(&poly("x1", 2), &Poly::zero(3), &square(), &OnesidedStrategy::default()).is_err());
    }

    #[test]
    fn weighted_errors() {
        let d = square();
        let (f, h) = (poly("x1^2*x2^2", 2), poly(H1, 2));
        let phi = parse_unipoly(ExprSource::new("1/2*t^2")).unwrap();
        let w = weighted_l1_error(&f, &h, &d, &phi).unwrap();
        assert_eq!(w.value, q(8, 45));
        assert!(w.weight_nonnegative);
        assert!(weighted_l1_error(&f, &f, &d, &UniPoly::omega(3))
            .unwrap()
            .value
            .is_zero());
        let bad = parse_unipoly(ExprSource::new("t")).unwrap();
        assert!(weighted_l1_error(&f, &h, &d, &bad).is_err());
        let concave = parse_unipoly(ExprSource::new("t^2 - t^3")).unwrap();
        assert!(!weighted_l1_error(&f, &h, &d, &concave).unwrap().weight_nonnegative);
    }

    #[test]
    fn grid_axis_points() {
        assert_eq!(grid_axis(1, &q(1, 1)), vec![q(0, 1)]);
        assert_eq!(grid_axis(3, &q(2, 1)), vec![q(-2, 1), q(0, 1), q(2, 1)]);
        let s = OnesidedStrategy::default();
        assert_eq!(s.effective_per_axis(2), 41);
        assert_eq!(s.effective_per_axis(4), 31);
    }
}
