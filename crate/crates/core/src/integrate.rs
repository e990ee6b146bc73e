//! Closed-form integration over the cube `I_n(r) = [-r, r]^n`, its boundary
//! `P_n(r)` and the diagonal set `D_n(r)`.
//!
//! Every integral is reduced monomial by monomial to *argmax cells*: the cube
//! splits into `2n` pieces on which a fixed coordinate `x_i = σ t` carries the
//! maximum absolute value `M(x) = t`, while every other coordinate ranges over
//! `[-t, t]`. On a cell the weight `φ(r - M)` depends on `t` alone, so the
//! integral factors into 1-D box moments and a radial integral
//!
//! ```text
//! ∫_0^r t^a (r - t)^b dt = a! b! r^(a+b+1) / (a+b+1)!
//! ```
//!
//! Ties between coordinates have measure zero and are ignored.
//!
//! ## Measure on `D_n`
//!
//! `D_n` is the union over `i < j` of the sheets `|x_i| = |x_j| ≥ |x_k|`. These
//! are integrated against the *projected* measure. Each sheet is parametrised
//! by `t = |x_i| = |x_j|` and the remaining coordinates, with measure
//! `dt ∏_{k≠i,j} dx_k`. That is not the Euclidean surface measure, which is
//! larger by `√2`. The projected convention is the one under which
//! `λ_{n-1}(D_n) = 2^(n-1) n! r^(n-1) / (n-1)!`. Every mean over `D_n` is a
//! ratio of two such integrals, so means do not depend on the choice.
//!
//! ## Weights on `P_n`
//!
//! On the face `x_i = ±r` the profile is applied to `r - M_i`, with
//! `M_i = max_{j≠i} |x_j|`, which is the face's own cube weight. At `k = 0`
//! this is plain surface measure. For every `k` the boundary mass is
//! `2^n n! r^(n+k-1) / (n+k-1)!`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, UnivariatePolynomial};
use crate::scalar::{factorial, pow, Scalar};

/// The cube `[-r, r]^n` together with its boundary and diagonal set.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeDomain<T> {
    n: usize,
    r: T,
}

impl<T: Scalar> CubeDomain<T> {
    /// `n ≥ 2` (so that `D_n` is nonempty) and `r > 0`.
    pub fn new(n: usize, r: T) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDomain(format!("dimension must be at least 2, got {}", n)));
        }
        if r <= T::zero() {
            return Err(Error::InvalidDomain("half-width r must be positive".into()));
        }
        Ok(CubeDomain { n, r })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> &T {
        &self.r
    }
}

/// Radial weight applied at `u = r - M(x)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight<T> {
    /// `ω_k = u^k / k!`.
    OmegaK(u32),
    /// An arbitrary polynomial profile `φ(u)`.
    Profile(UnivariatePolynomial<T>),
}

impl<T: Scalar> Weight<T> {
    pub fn unweighted() -> Self {
        Weight::OmegaK(0)
    }

    /// The profile as a polynomial in `u`.
    pub fn profile(&self) -> UnivariatePolynomial<T> {
        match self {
            Weight::OmegaK(k) => UnivariatePolynomial::omega(*k),
            Weight::Profile(phi) => phi.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    Cube,
    Boundary,
    Diagonal,
}

impl std::str::FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cube" => Ok(Region::Cube),
            "boundary" => Ok(Region::Boundary),
            "diagonal" => Ok(Region::Diagonal),
            other => Err(Error::InvalidRequest(format!("unknown region {:?}", other))),
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Region::Cube => "cube",
            Region::Boundary => "boundary",
            Region::Diagonal => "diagonal",
        })
    }
}

/// `∫_0^r t^a φ(r - t) dt` for a profile given by its coefficients.
fn radial<T: Scalar>(a: u32, profile: &[T], r: &T) -> T {
    let mut acc = T::zero();
    for (b, c) in profile.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let b = b as u32;
        let beta = T::from_fraction(factorial(a) * factorial(b), factorial(a + b + 1));
        acc = acc + c.clone() * beta * pow(r, a + b + 1);
    }
    acc
}

/// `∫_{-t}^{t} x^a dx / t^(a+1)`: `2/(a+1)` for even `a`, zero for odd.
fn box_moment<T: Scalar>(a: u32) -> Option<T> {
    if a % 2 == 1 {
        None
    } else {
        Some(T::from_fraction(BigInt::from(2), BigInt::from(a + 1)))
    }
}

/// `σ^a` for `σ = ±1`.
fn sign_power<T: Scalar>(negative: bool, a: u32) -> T {
    if negative && a % 2 == 1 {
        -T::one()
    } else {
        T::one()
    }
}

/// Cube integral of `x^alpha` in `alpha.len()` dimensions (any dimension ≥ 1).
fn cube_monomial<T: Scalar>(alpha: &[u32], profile: &[T], r: &T) -> T {
    let dim = alpha.len();
    let mut total = T::zero();
    for i in 0..dim {
        let mut box_factor = T::one();
        let mut t_power = alpha[i];
        let mut vanishes = false;
        for (k, &a) in alpha.iter().enumerate() {
            if k == i {
                continue;
            }
            match box_moment::<T>(a) {
                Some(m) => box_factor = box_factor * m,
                None => {
                    vanishes = true;
                    break;
                }
            }
            t_power += a + 1;
        }
        if vanishes {
            continue;
        }
        let rad = radial(t_power, profile, r);
        for negative in [true, false] {
            total = total + sign_power::<T>(negative, alpha[i]) * box_factor.clone() * rad.clone();
        }
    }
    total
}

/// Diagonal-set integral of `x^alpha` (projected measure).
fn diagonal_monomial<T: Scalar>(alpha: &[u32], profile: &[T], r: &T) -> T {
    let dim = alpha.len();
    let mut total = T::zero();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut box_factor = T::one();
            let mut t_power = alpha[i] + alpha[j];
            let mut vanishes = false;
            for (k, &a) in alpha.iter().enumerate() {
                if k == i || k == j {
                    continue;
                }
                match box_moment::<T>(a) {
                    Some(m) => box_factor = box_factor * m,
                    None => {
                        vanishes = true;
                        break;
                    }
                }
                t_power += a + 1;
            }
            if vanishes {
                continue;
            }
            let rad = radial(t_power, profile, r);
            for neg_i in [true, false] {
                for neg_j in [true, false] {
                    let sign = sign_power::<T>(neg_i, alpha[i]) * sign_power::<T>(neg_j, alpha[j]);
                    total = total + sign * box_factor.clone() * rad.clone();
                }
            }
        }
    }
    total
}

fn check_dim<T: Scalar>(p: &Polynomial<T>, d: &CubeDomain<T>) -> Result<()> {
    if p.dim() != d.n {
        return Err(Error::DimensionMismatch {
            expected: d.n,
            found: p.dim(),
        });
    }
    Ok(())
}

/// `∫_{I_n(r)} p(x) φ(r - M(x)) dλ_n`.
pub fn integrate_cube<T: Scalar>(p: &Polynomial<T>, d: &CubeDomain<T>, w: &Weight<T>) -> Result<T> {
    check_dim(p, d)?;
    let profile = w.profile();
    Ok(p.terms().fold(T::zero(), |acc, (e, c)| {
        acc + c.clone() * cube_monomial(e.as_slice(), profile.coeffs(), &d.r)
    }))
}

/// `∫_{P_n(r)} p dλ_{n-1}`, plain surface measure.
pub fn integrate_boundary<T: Scalar>(p: &Polynomial<T>, d: &CubeDomain<T>) -> Result<T> {
    integrate_boundary_weighted(p, d, &Weight::OmegaK(0))
}

/// Boundary integral with the face-intrinsic weight `φ(r - M_i)` on the
/// faces `x_i = ±r`; see the module docs.
pub fn integrate_boundary_weighted<T: Scalar>(p: &Polynomial<T>, d: &CubeDomain<T>, w: &Weight<T>) -> Result<T> {
    check_dim(p, d)?;
    let profile = w.profile();
    let mut total = T::zero();
    for axis in 0..d.n {
        for value in [-d.r.clone(), d.r.clone()] {
            let face = p.restrict(axis, &value)?;
            total = face.terms().fold(total, |acc, (e, c)| {
                acc + c.clone() * cube_monomial(e.as_slice(), profile.coeffs(), &d.r)
            });
        }
    }
    Ok(total)
}

/// `∫_{D_n(r)} p(x) φ(r - M(x)) dλ_{n-1}` in the projected measure.
pub fn integrate_diagonal<T: Scalar>(p: &Polynomial<T>, d: &CubeDomain<T>, w: &Weight<T>) -> Result<T> {
    check_dim(p, d)?;
    let profile = w.profile();
    Ok(p.terms().fold(T::zero(), |acc, (e, c)| {
        acc + c.clone() * diagonal_monomial(e.as_slice(), profile.coeffs(), &d.r)
    }))
}

pub fn integrate<T: Scalar>(p: &Polynomial<T>, d: &CubeDomain<T>, region: Region, w: &Weight<T>) -> Result<T> {
    match region {
        Region::Cube => integrate_cube(p, d, w),
        Region::Boundary => integrate_boundary_weighted(p, d, w),
        Region::Diagonal => integrate_diagonal(p, d, w),
    }
}

/// `λ^{ω_k}` of a region, computed by integrating the constant 1.
pub fn measure<T: Scalar>(d: &CubeDomain<T>, region: Region, k: u32) -> T {
    integrate(&Polynomial::one(d.n), d, region, &Weight::OmegaK(k)).expect("constant has the domain's dimension")
}

/// The closed-form masses, evaluated exactly:
/// cube `2^n n! r^(n+k)/(n+k)!`, boundary `2^n n! r^(n+k-1)/(n+k-1)!`,
/// diagonal `2^(n-1) n! r^(n+k-1)/(n+k-1)!`.
pub fn closed_form_measure(n: u32, r: &BigRational, region: Region, k: u32) -> BigRational {
    let two = BigInt::from(2);
    let (lead, power) = match region {
        Region::Cube => (two.pow(n), n + k),
        Region::Boundary => (two.pow(n), n + k - 1),
        Region::Diagonal => (two.pow(n - 1), n + k - 1),
    };
    let coeff = BigRational::new(lead * factorial(n), factorial(power));
    coeff * pow(r, power)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, ExprSource};
    use crate::{Cube, Poly, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn cube(n: usize, r: Rational) -> Cube {
        CubeDomain::new(n, r).unwrap()
    }

    fn poly(s: &str, n: usize) -> Poly {
        parse_poly(ExprSource::with_dim(s, n)).unwrap()
    }

    #[test]
    fn domain_validation() {
        assert!(CubeDomain::new(1, q(1, 1)).is_err());
        assert!(CubeDomain::new(2, q(0, 1)).is_err());
        assert!(CubeDomain::new(2, q(-1, 2)).is_err());
    }

    #[test]
    fn cube_examples() {
        let d = cube(2, q(1, 1));
        let w = Weight::OmegaK(0);
        assert_eq!(integrate_cube(&poly("x1^2*x2^2", 2), &d, &w).unwrap(), q(4, 9));
        assert_eq!(integrate_cube(&poly("1/4*(x1^2-x2^2)^2", 2), &d, &w).unwrap(), q(8, 45));
        assert_eq!(integrate_cube(&poly("x1^3*x2^2 + x2", 2), &d, &w).unwrap(), q(0, 1));
        assert_eq!(measure(&d, Region::Cube, 0), q(4, 1));
        assert_eq!(measure(&d, Region::Cube, 1), q(4, 3));
    }

    #[test]
    fn boundary_examples() {
        let d = cube(2, q(1, 1));
        assert_eq!(integrate_boundary(&Poly::one(2), &d).unwrap(), q(8, 1));
        assert_eq!(integrate_boundary(&poly("x1^2 - x2^2", 2), &d).unwrap(), q(0, 1));
        // faces x1 = ±1 give 2 each, faces x2 = ±1 give 2/3 each
        assert_eq!(integrate_boundary(&poly("x1^2", 2), &d).unwrap(), q(16, 3));
        assert_eq!(integrate_boundary(&Poly::one(3), &cube(3, q(2, 1))).unwrap(), q(96, 1));
    }

    #[test]
    fn diagonal_examples() {
        let d = cube(2, q(1, 1));
        let w = Weight::OmegaK(0);
        assert_eq!(integrate_diagonal(&Poly::one(2), &d, &w).unwrap(), q(4, 1));
        assert_eq!(integrate_diagonal(&poly("x1^2", 2), &d, &w).unwrap(), q(4, 3));
        assert_eq!(integrate_diagonal(&poly("x1*x2", 2), &d, &w).unwrap(), q(0, 1));
        assert_eq!(
            integrate_diagonal(&Poly::one(3), &cube(3, q(1, 1)), &Weight::OmegaK(1)).unwrap(),
            q(4, 1)
        );
        assert_eq!(measure(&cube(3, q(1, 1)), Region::Diagonal, 0), q(12, 1));
    }

    #[test]
    fn weighted_boundary_matches_closed_form() {
        for n in 2..=4u32 {
            for k in 0..=3 {
                let r = q(3, 2);
                let d = cube(n as usize, r.clone());
                assert_eq!(
                    measure(&d, Region::Boundary, k),
                    closed_form_measure(n, &r, Region::Boundary, k)
                );
            }
        }
    }

    #[test]
    fn omega_and_profile_share_a_path() {
        let d = cube(3, q(1, 2));
        let p = poly("x1^2*x3^4 - 5*x2^2 + 1/3", 3);
        for k in 0..4 {
            let a = integrate_diagonal(&p, &d, &Weight::OmegaK(k)).unwrap();
            let b = integrate_diagonal(&p, &d, &Weight::Profile(UnivariatePolynomial::omega(k))).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let d = cube(3, q(1, 1));
        let p = Poly::one(2);
        let w = Weight::OmegaK(0);
        assert!(integrate_cube(&p, &d, &w).is_err());
        assert!(integrate_boundary(&p, &d).is_err());
        assert!(integrate_diagonal(&p, &d, &w).is_err());
    }

    #[test]
    fn works_in_floating_point_too() {
        let d = CubeDomain::new(2, 1.0f64).unwrap();
        let p = parse_poly(ExprSource::with_dim("x1^2*x2^2", 2)).unwrap().to_f64();
        let v = integrate_cube(&p, &d, &Weight::OmegaK(0)).unwrap();
        assert!((v - 4.0 / 9.0).abs() < 1e-15);
    }
}
