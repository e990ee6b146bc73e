//! Sparse multivariate polynomials with differential operators.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Exponent`], whose ordering is
//! graded lexicographic, so iteration order (and therefore the text form) is
//! canonical. Zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{pow, Scalar};

/// Exponent vector of a monomial `x1^a1 * ... * xn^an`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(exps: Vec<u32>) -> Self {
        Exponent(exps)
    }

    pub fn zero(dim: usize) -> Self {
        Exponent(vec![0; dim])
    }

    /// `x_axis` (0-based axis).
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut e = vec![0; dim];
        e[axis] = 1;
        Exponent(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }

    fn product(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    fn quotient(&self, other: &Exponent) -> Option<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponents of total degree `d` in `dim` variables, in descending
/// graded-lex order (`x1^d` first).
pub fn monomials_of_degree(dim: usize, d: u32) -> Vec<Exponent> {
    fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == dim {
            prefix.push(left);
            out.push(Exponent(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(dim, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        if d == 0 {
            out.push(Exponent(Vec::new()));
        }
        return out;
    }
    rec(dim, d, &mut Vec::with_capacity(dim), &mut out);
    out
}

/// Sparse polynomial in `dim` variables over a scalar field.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    dim: usize,
    terms: BTreeMap<Exponent, T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: T) -> Self {
        Self::monomial(c, Exponent::zero(dim))
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, T::one())
    }

    /// The coordinate function `x_{axis}` (0-based axis).
    pub fn var(dim: usize, axis: usize) -> Self {
        Self::monomial(T::one(), Exponent::unit(dim, axis))
    }

    pub fn monomial(c: T, exp: Exponent) -> Self {
        let dim = exp.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Polynomial { dim, terms }
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, merging
    /// duplicates and dropping zeros.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, T)>,
    {
        let mut p = Self::zero(dim);
        for (exps, c) in terms {
            if exps.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: exps.len(),
                });
            }
            p.add_term(Exponent(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exp: Exponent, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &T)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &Exponent) -> T {
        self.terms.get(exp).cloned().unwrap_or_else(T::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponent::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Exponent::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Exponent, &T)> {
        self.terms.iter().next_back()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.product(eb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative along the 0-based `axis`.
    pub fn partial(&self, axis: usize) -> Result<Self> {
        if axis >= self.dim {
            return Err(Error::AxisOutOfRange {
                axis: axis + 1,
                dim: self.dim,
            });
        }
        Ok(self.partial_unchecked(axis))
    }

    fn partial_unchecked(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let a = e.0[axis];
            if a == 0 {
                continue;
            }
            let mut de = e.clone();
            de.0[axis] -= 1;
            out.add_term(de, c.clone() * T::from_i64(a as i64));
        }
        out
    }

    /// Sum of the unmixed second partials.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            for axis in 0..self.dim {
                let a = e.0[axis];
                if a < 2 {
                    continue;
                }
                let mut de = e.clone();
                de.0[axis] -= 2;
                out.add_term(de, c.clone() * T::from_i64((a * (a - 1)) as i64));
            }
        }
        out
    }

    /// `m`-fold Laplacian; `m = 0` is the identity.
    pub fn iterated_laplacian(&self, m: u32) -> Self {
        let mut p = self.clone();
        for _ in 0..m {
            if p.is_zero() {
                break;
            }
            p = p.laplacian();
        }
        p
    }

    pub fn evaluate(&self, point: &[T]) -> Result<T> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &a) in point.iter().zip(&e.0) {
                if a > 0 {
                    term = term * pow(x, a);
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Substitutes the constant `value` for coordinate `axis` and drops that
    /// variable, giving a polynomial in `dim - 1` variables.
    pub fn restrict(&self, axis: usize, value: &T) -> Result<Self> {
        if axis >= self.dim {
            return Err(Error::AxisOutOfRange {
                axis: axis + 1,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.dim - 1);
        for (e, c) in &self.terms {
            let mut rest = e.0.clone();
            let a = rest.remove(axis);
            out.add_term(Exponent(rest), c.clone() * pow(value, a));
        }
        Ok(out)
    }

    /// Applies a signed permutation of the variables:
    /// `x_i -> signs[i] * x_{perm[i]}`.
    pub fn signed_permute(&self, perm: &[usize], signs: &[bool]) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let mut ne = vec![0; self.dim];
            let mut coeff = c.clone();
            for i in 0..self.dim {
                ne[perm[i]] = e.0[i];
                if signs[i] && e.0[i] % 2 == 1 {
                    coeff = -coeff;
                }
            }
            out.add_term(Exponent(ne), coeff);
        }
        out
    }

    /// Homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact quotient `self / divisor` when the division algorithm leaves no
    /// remainder; `None` otherwise. With a single divisor the remainder is
    /// zero exactly when `divisor` divides `self`.
    pub fn divide_exact(&self, divisor: &Self) -> Result<Option<Self>> {
        self.check_dim(divisor)?;
        let (lead_e, lead_c) = match divisor.leading_term() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(self.dim);
        while let Some((e, c)) = rem.leading_term() {
            let qe = match e.quotient(&lead_e) {
                Some(qe) => qe,
                None => return Ok(None),
            };
            let qc = c.clone() / lead_c.clone();
            let step = Self::monomial(qc.clone(), qe.clone());
            rem = rem.try_sub(&step.try_mul(divisor)?)?;
            quot.add_term(qe, qc);
        }
        Ok(Some(quot))
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        let mut out = Polynomial::zero(self.dim);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Approximate copy in `f64`, for fast pointwise evaluation.
    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map_coeffs(|c| c.to_f64())
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    /// Canonical text form: terms in descending graded-lex order joined by
    /// `" + "`, each written `c * x1^a1*x2^a2` (zero exponents omitted, the
    /// factor list omitted for the constant term). The zero polynomial is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            c.fmt_scalar(f)?;
            let mut first = true;
            for (axis, &a) in e.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                f.write_str(if first { " * " } else { "*" })?;
                first = false;
                write!(f, "x{}^{}", axis + 1, a)?;
            }
        }
        Ok(())
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    /// Panics on a dimension mismatch; use [`Polynomial::try_add`] otherwise.
    fn add(self, rhs: Self) -> Polynomial<T> {
        self.try_add(rhs).expect("polynomial dimensions differ")
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: Self) -> Polynomial<T> {
        self.try_sub(rhs).expect("polynomial dimensions differ")
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: Self) -> Polynomial<T> {
        self.try_mul(rhs).expect("polynomial dimensions differ")
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        self.scale(&-T::one())
    }
}

/// Univariate polynomial; `coeffs[k]` multiplies `t^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivariatePolynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> UnivariatePolynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UnivariatePolynomial { coeffs }
    }

    pub fn zero() -> Self {
        UnivariatePolynomial { coeffs: Vec::new() }
    }

    /// `c * t^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The profile `t^k / k!`.
    pub fn omega(k: u32) -> Self {
        let c = T::one() / T::from_integer(crate::scalar::factorial(k));
        Self::monomial(c, k as usize)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `j`-th derivative.
    pub fn derivative(&self, j: u32) -> Self {
        let j = j as usize;
        if j >= self.coeffs.len() {
            return Self::zero();
        }
        let coeffs = (j..self.coeffs.len())
            .map(|k| {
                // k! / (k - j)!
                let falling = ((k - j + 1)..=k).fold(T::one(), |acc, f| acc * T::from_i64(f as i64));
                self.coeffs[k].clone() * falling
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn evaluate(&self, t: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    /// True when `phi^(j)(0) = 0` for every `j < order`, i.e. the first
    /// `order` coefficients vanish.
    pub fn vanishes_to_order(&self, order: usize) -> bool {
        self.coeffs.iter().take(order).all(Zero::is_zero)
    }

    /// First derivative order `j < order` with a nonzero value at 0.
    pub fn first_nonvanishing_below(&self, order: usize) -> Option<usize> {
        self.coeffs.iter().take(order).position(|c| !c.is_zero())
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> UnivariatePolynomial<U> {
        UnivariatePolynomial::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Scalar> fmt::Display for UnivariatePolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            c.fmt_scalar(f)?;
            if k > 0 {
                write!(f, " * t^{}", k)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
