//! Bases of harmonic and polyharmonic polynomials.
//!
//! `Δ^m` maps homogeneous degree-`d` polynomials to homogeneous degree
//! `d - 2m` ones, so the kernel is computed one degree block at a time as the
//! exact nullspace of a small matrix in monomial coordinates. Columns follow
//! descending graded-lex order, and basis elements are the raw free-column
//! nullspace vectors (not normalised).

use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::Matrix;
use crate::poly::{monomials_of_degree, Exponent, Polynomial};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BasisRequest {
    pub n: usize,
    pub max_degree: u32,
    /// Polyharmonic order; 1 means harmonic.
    pub m: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisSet<T> {
    pub request: BasisRequest,
    pub elements: Vec<Polynomial<T>>,
    /// Homogeneous degree of each element, parallel to `elements`.
    pub degrees: Vec<u32>,
}

impl<T: Scalar> BasisSet<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Stable label of element `idx`: `d<degree>.<index within degree>`.
    pub fn label(&self, idx: usize) -> String {
        let d = self.degrees[idx];
        let within = self.degrees[..idx].iter().filter(|&&e| e == d).count();
        format!("d{}.{}", d, within)
    }
}

/// Matrix of `Δ^m` from degree-`d` monomials (columns) to degree-`(d-2m)`
/// monomials (rows).
pub fn laplacian_power_matrix<T: Scalar>(n: usize, d: u32, m: u32) -> Matrix<T> {
    let cols = monomials_of_degree(n, d);
    let rows = if d >= 2 * m {
        monomials_of_degree(n, d - 2 * m)
    } else {
        Vec::new()
    };
    let mut mat = Matrix::zeros(rows.len(), cols.len());
    for (c, e) in cols.iter().enumerate() {
        let image = Polynomial::<T>::monomial(T::one(), e.clone()).iterated_laplacian(m);
        for (r, re) in rows.iter().enumerate() {
            let v = image.coeff(re);
            if !v.is_zero() {
                mat.set(r, c, v);
            }
        }
    }
    mat
}

fn poly_from_vector<T: Scalar>(n: usize, monomials: &[Exponent], v: &[T]) -> Polynomial<T> {
    let terms = monomials
        .iter()
        .zip(v)
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e.as_slice().to_vec(), c.clone()));
    Polynomial::from_terms(n, terms).expect("monomials have dimension n")
}

/// Basis of homogeneous degree-`d` polynomials in `n` variables annihilated by `Δ^m`.
pub fn homogeneous_kernel<T: Scalar>(n: usize, d: u32, m: u32) -> Vec<Polynomial<T>> {
    let monomials = monomials_of_degree(n, d);
    laplacian_power_matrix::<T>(n, d, m)
        .nullspace()
        .iter()
        .map(|v| poly_from_vector(n, &monomials, v))
        .collect()
}

/// Concatenation of the homogeneous kernels for `d = 0..=max_degree`.
pub fn graded_basis<T: Scalar>(req: BasisRequest) -> BasisSet<T> {
    let blocks: Vec<Vec<Polynomial<T>>> = (0..=req.max_degree)
        .into_par_iter()
        .map(|d| homogeneous_kernel(req.n, d, req.m))
        .collect();
    let mut elements = Vec::new();
    let mut degrees = Vec::new();
    for (d, block) in blocks.into_iter().enumerate() {
        degrees.extend(std::iter::repeat_n(d as u32, block.len()));
        elements.extend(block);
    }
    BasisSet {
        request: req,
        elements,
        degrees,
    }
}

pub fn is_polyharmonic<T: Scalar>(p: &Polynomial<T>, m: u32) -> bool {
    p.iterated_laplacian(m).is_zero()
}

/// Rank of a family of polynomials as vectors over their joint monomial support.
pub fn span_rank<T: Scalar>(polys: &[Polynomial<T>]) -> usize {
    let mut support: Vec<Exponent> = polys.iter().flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect();
    support.sort();
    support.dedup();
    let mut mat = Matrix::zeros(polys.len(), support.len());
    for (r, p) in polys.iter().enumerate() {
        for (c, e) in support.iter().enumerate() {
            mat.set(r, c, p.coeff(e));
        }
    }
    mat.rank()
}
