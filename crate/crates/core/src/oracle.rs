//! Floating-point reference integrals by tensor Gauss–Legendre quadrature.
//!
//! This is an independent check on the exact engine. It shares only the
//! geometry: each region is split into argmax cells, and on every cell the
//! integrand is sampled pointwise. The polynomial is evaluated at the actual
//! point, and so is the weight, via `φ(r - max |x_k|)`.
//!
//! A cell is parametrised by `t ∈ [0, r]` (the leading coordinate or
//! coordinates are `±t`) and `u ∈ [-1, 1]^m` (the remaining coordinates are
//! `t u`). The Jacobian is `t^m`. Pieces are smooth, so a rule with `q` points
//! per axis is exact up to rounding for integrands of degree `≤ 2q - 1` in each
//! variable. At the default `q = 24` that covers total degree well past 40.
//! Without the split the max-weight would only be piecewise smooth and
//! convergence would be algebraic.
//!
//! Cells are evaluated in parallel. Partial sums are then combined pairwise in
//! a fixed order, so results are identical from run to run.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::integrate::{CubeDomain, Region, Weight};
use crate::scalar::Scalar;
use crate::{Poly, Rational};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_q`, stopped once a step is below 1e-15.
    pub fn new(q: usize) -> Self {
        let mut nodes = vec![0.0; q];
        let mut weights = vec![0.0; q];
        let qf = q as f64;
        for i in 0..q {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (qf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(q, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            let (_, d) = legendre(q, x);
            if d != 0.0 {
                dp = d;
            }
            nodes[q - 1 - i] = x;
            weights[q - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussLegendre { nodes, weights }
    }
}

/// `(P_q(x), P_q'(x))` by the three-term recurrence.
fn legendre(q: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if q == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=q {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub points_per_axis: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { points_per_axis: 24 }
    }
}

impl QuadratureSpec {
    pub fn new(points_per_axis: usize) -> Result<Self> {
        if points_per_axis < 2 {
            return Err(Error::InvalidRequest(format!(
                "quadrature needs at least 2 points per axis, got {}",
                points_per_axis
            )));
        }
        Ok(QuadratureSpec { points_per_axis })
    }
}

/// Polynomial flattened for fast `f64` evaluation.
struct Evaluator {
    terms: Vec<(f64, Vec<u32>)>,
    dim: usize,
    max_exp: u32,
}

impl Evaluator {
    fn new(p: &Poly) -> Self {
        let terms: Vec<(f64, Vec<u32>)> = p.terms().map(|(e, c)| (c.to_f64(), e.as_slice().to_vec())).collect();
        let max_exp = terms.iter().flat_map(|(_, e)| e.iter().copied()).max().unwrap_or(0);
        Evaluator {
            terms,
            dim: p.dim(),
            max_exp,
        }
    }

    /// `scratch` holds the power table and must have `dim * (max_exp + 1)` slots.
    fn eval(&self, x: &[f64], scratch: &mut [f64]) -> f64 {
        let stride = self.max_exp as usize + 1;
        for (k, &xk) in x.iter().enumerate() {
            let row = &mut scratch[k * stride..(k + 1) * stride];
            row[0] = 1.0;
            for j in 1..stride {
                row[j] = row[j - 1] * xk;
            }
        }
        let mut acc = 0.0;
        for (c, e) in &self.terms {
            let mut v = *c;
            for (k, &a) in e.iter().enumerate() {
                v *= scratch[k * stride + a as usize];
            }
            acc += v;
        }
        acc
    }

    fn scratch(&self) -> Vec<f64> {
        vec![0.0; self.dim * (self.max_exp as usize + 1)]
    }
}

fn profile_f64(w: &Weight<Rational>) -> Vec<f64> {
    w.profile().coeffs().iter().map(|c| c.to_f64()).collect()
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Pairwise summation in index order.
fn pairwise(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise(&xs[..n / 2]) + pairwise(&xs[n / 2..]),
    }
}

#[derive(Clone, Copy, Debug)]
enum Lead {
    Fixed(f64),
    /// `σ t`.
    Radial(f64),
}

/// One smooth piece of a region.
#[derive(Clone, Debug)]
struct Cell {
    lead: Vec<(usize, Lead)>,
    free: Vec<usize>,
    /// Axis left out of the max in the weight (the normal of a face).
    excluded: Option<usize>,
}

fn cube_cells(n: usize) -> Vec<Cell> {
    let mut cells = Vec::new();
    for i in 0..n {
        for sign in [-1.0, 1.0] {
            cells.push(Cell {
                lead: vec![(i, Lead::Radial(sign))],
                free: (0..n).filter(|&k| k != i).collect(),
                excluded: None,
            });
        }
    }
    cells
}

fn boundary_cells(n: usize, r: f64) -> Vec<Cell> {
    let mut cells = Vec::new();
    for face in 0..n {
        for face_sign in [-1.0, 1.0] {
            for i in (0..n).filter(|&k| k != face) {
                for sign in [-1.0, 1.0] {
                    cells.push(Cell {
                        lead: vec![(face, Lead::Fixed(face_sign * r)), (i, Lead::Radial(sign))],
                        free: (0..n).filter(|&k| k != face && k != i).collect(),
                        excluded: Some(face),
                    });
                }
            }
        }
    }
    cells
}

fn diagonal_cells(n: usize) -> Vec<Cell> {
    let mut cells = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for si in [-1.0, 1.0] {
                for sj in [-1.0, 1.0] {
                    cells.push(Cell {
                        lead: vec![(i, Lead::Radial(si)), (j, Lead::Radial(sj))],
                        free: (0..n).filter(|&k| k != i && k != j).collect(),
                        excluded: None,
                    });
                }
            }
        }
    }
    cells
}

fn integrate_cell(
    cell: &Cell,
    n: usize,
    r: f64,
    rule: &GaussLegendre,
    integrand: &(dyn Fn(&[f64], &mut [f64]) -> f64 + Sync),
    scratch_len: usize,
    profile: &[f64],
) -> f64 {
    let q = rule.nodes.len();
    let m = cell.free.len();
    let inner_count = q.pow(m as u32);
    let mut scratch = vec![0.0; scratch_len];
    let mut x = vec![0.0; n];
    let mut per_t = Vec::with_capacity(q);
    let mut inner = Vec::with_capacity(inner_count);
    for (&tn, &tw) in rule.nodes.iter().zip(&rule.weights) {
        let t = 0.5 * r * (tn + 1.0);
        for &(axis, lead) in &cell.lead {
            x[axis] = match lead {
                Lead::Fixed(v) => v,
                Lead::Radial(s) => s * t,
            };
        }
        inner.clear();
        for idx in 0..inner_count {
            let mut rest = idx;
            let mut w = 1.0;
            for &axis in &cell.free {
                let node = rest % q;
                rest /= q;
                x[axis] = t * rule.nodes[node];
                w *= rule.weights[node];
            }
            let big_m = x
                .iter()
                .enumerate()
                .filter(|&(k, _)| Some(k) != cell.excluded)
                .fold(0.0f64, |acc, (_, v)| acc.max(v.abs()));
            let weight = horner(profile, r - big_m);
            inner.push(w * weight * integrand(&x, &mut scratch));
        }
        per_t.push(0.5 * r * tw * t.powi(m as i32) * pairwise(&inner));
    }
    pairwise(&per_t)
}

fn integrate_region(
    cells: Vec<Cell>,
    n: usize,
    r: f64,
    q: &QuadratureSpec,
    profile: &[f64],
    integrand: &(dyn Fn(&[f64], &mut [f64]) -> f64 + Sync),
    scratch_len: usize,
) -> f64 {
    let rule = GaussLegendre::new(q.points_per_axis.max(2));
    let parts: Vec<f64> = cells
        .par_iter()
        .map(|c| integrate_cell(c, n, r, &rule, integrand, scratch_len, profile))
        .collect();
    pairwise(&parts)
}

fn check_dim(p: &Poly, d: &CubeDomain<Rational>) -> Result<()> {
    if p.dim() != d.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            found: p.dim(),
        });
    }
    Ok(())
}

fn numeric_region(
    p: &Poly,
    d: &CubeDomain<Rational>,
    region: Region,
    w: &Weight<Rational>,
    q: &QuadratureSpec,
) -> Result<f64> {
    check_dim(p, d)?;
    let (n, r) = (d.n(), d.r().to_f64());
    let ev = Evaluator::new(p);
    let cells = match region {
        Region::Cube => cube_cells(n),
        Region::Boundary => boundary_cells(n, r),
        Region::Diagonal => diagonal_cells(n),
    };
    let f = |x: &[f64], s: &mut [f64]| ev.eval(x, s);
    Ok(integrate_region(
        cells,
        n,
        r,
        q,
        &profile_f64(w),
        &f,
        ev.scratch().len(),
    ))
}

pub fn numeric_integrate_cube(
    p: &Poly,
    d: &CubeDomain<Rational>,
    w: &Weight<Rational>,
    q: &QuadratureSpec,
) -> Result<f64> {
    numeric_region(p, d, Region::Cube, w, q)
}

/// Face-intrinsic weight on each face, as in the exact engine.
pub fn numeric_integrate_boundary(
    p: &Poly,
    d: &CubeDomain<Rational>,
    w: &Weight<Rational>,
    q: &QuadratureSpec,
) -> Result<f64> {
    numeric_region(p, d, Region::Boundary, w, q)
}

/// Projected measure `dt ∏ dx_k` on each sheet of `D_n`.
pub fn numeric_integrate_diagonal(
    p: &Poly,
    d: &CubeDomain<Rational>,
    w: &Weight<Rational>,
    q: &QuadratureSpec,
) -> Result<f64> {
    numeric_region(p, d, Region::Diagonal, w, q)
}

pub fn numeric_integrate(
    p: &Poly,
    d: &CubeDomain<Rational>,
    region: Region,
    w: &Weight<Rational>,
    q: &QuadratureSpec,
) -> Result<f64> {
    numeric_region(p, d, region, w, q)
}

/// `∫_I |f - h|` with no sign assumption. Sign changes inside a cell make the
/// integrand nonsmooth there, so accuracy is then only algebraic.
pub fn numeric_l1(f: &Poly, h: &Poly, d: &CubeDomain<Rational>, q: &QuadratureSpec) -> Result<f64> {
    let diff = f.try_sub(h)?;
    check_dim(&diff, d)?;
    let (n, r) = (d.n(), d.r().to_f64());
    let ev = Evaluator::new(&diff);
    let g = |x: &[f64], s: &mut [f64]| ev.eval(x, s).abs();
    Ok(integrate_region(cube_cells(n), n, r, q, &[1.0], &g, ev.scratch().len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, ExprSource};

    fn poly(s: &str, n: usize) -> Poly {
        parse_poly(ExprSource::with_dim(s, n)).unwrap()
    }

    fn domain(n: usize) -> CubeDomain<Rational> {
        CubeDomain::new(n, Rational::from_integer(1.into())).unwrap()
    }

    const H1: &str = "-1/4*x1^4 + 3/2*x1^2*x2^2 - 1/4*x2^4";

    #[test]
    fn rule_integrates_polynomials() {
        let rule = GaussLegendre::new(24);
        assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m46: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(46)).sum();
        assert!((m46 - 2.0 / 47.0).abs() < 1e-14);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        let two = GaussLegendre::new(2);
        assert!((two.nodes[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cube_examples() {
        let (d, q, w) = (domain(2), QuadratureSpec::default(), Weight::OmegaK(0));
        assert!((numeric_integrate_cube(&Poly::one(2), &d, &w, &q).unwrap() - 4.0).abs() < 1e-12);
        assert!((numeric_integrate_cube(&poly("x1^2*x2^2", 2), &d, &w, &q).unwrap() - 4.0 / 9.0).abs() < 1e-10);
        let e1 = &poly("x1^2*x2^2", 2) - &poly(H1, 2);
        assert!((numeric_integrate_cube(&e1, &d, &w, &q).unwrap() - 8.0 / 45.0).abs() < 1e-9);
    }

    #[test]
    fn diagonal_examples() {
        let q = QuadratureSpec::default();
        let w0 = Weight::OmegaK(0);
        assert!((numeric_integrate_diagonal(&Poly::one(2), &domain(2), &w0, &q).unwrap() - 4.0).abs() < 1e-12);
        let v = numeric_integrate_diagonal(&poly("x1^2", 2), &domain(2), &w0, &q).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-10);
        let v = numeric_integrate_diagonal(&Poly::one(3), &domain(3), &Weight::OmegaK(1), &q).unwrap();
        assert!((v - 4.0).abs() < 1e-10);
    }

    #[test]
    fn boundary_examples() {
        let q = QuadratureSpec::default();
        let w0 = Weight::OmegaK(0);
        assert!((numeric_integrate_boundary(&Poly::one(2), &domain(2), &w0, &q).unwrap() - 8.0).abs() < 1e-12);
        let v = numeric_integrate_boundary(&poly("x1^2", 2), &domain(2), &w0, &q).unwrap();
        assert!((v - 16.0 / 3.0).abs() < 1e-12);
        let v = numeric_integrate_boundary(&Poly::one(3), &domain(3), &w0, &q).unwrap();
        assert!((v - 24.0).abs() < 1e-12);
        let v = numeric_integrate_boundary(&Poly::one(3), &domain(3), &Weight::OmegaK(1), &q).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn l1_examples() {
        let (d, q) = (domain(2), QuadratureSpec::default());
        let f = poly("x1^2*x2^2", 2);
        assert_eq!(numeric_l1(&f, &f, &d, &q).unwrap(), 0.0);
        assert!((numeric_l1(&f, &poly(H1, 2), &d, &q).unwrap() - 8.0 / 45.0).abs() < 1e-9);
        assert!((numeric_l1(&f, &Poly::zero(2), &d, &q).unwrap() - 4.0 / 9.0).abs() < 1e-10);
        let sign_change = numeric_l1(&poly("x1", 2), &Poly::zero(2), &d, &q).unwrap();
        assert!((sign_change - 2.0).abs() < 1e-2);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(1).is_err());
        assert_eq!(QuadratureSpec::new(5).unwrap().points_per_axis, 5);
        assert!(numeric_integrate_cube(
            &Poly::one(3),
            &domain(2),
            &Weight::OmegaK(0),
            &QuadratureSpec::default()
        )
        .is_err());
    }

    #[test]
    fn deterministic() {
        let p = poly("3*x1^5*x2 - x2^4*x3^2 + 7/3*x1*x2*x3 + 1", 3);
        let (d, q, w) = (domain(3), QuadratureSpec::default(), Weight::OmegaK(2));
        let a = numeric_integrate_cube(&p, &d, &w, &q).unwrap();
        let b = numeric_integrate_cube(&p, &d, &w, &q).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
