//! Exact residuals of the hypercube mean-value, quadrature and Pizzetti-type
//! identities.
//!
//! Each residual is "left side minus right side", so a zero residual means the
//! identity holds for that input and anything else is a diagnostic value.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harmonic::{graded_basis, is_polyharmonic, BasisRequest};
use crate::integrate::{integrate_boundary, integrate_cube, integrate_diagonal, measure, CubeDomain, Region, Weight};
use crate::poly::{Polynomial, UnivariatePolynomial};
use crate::scalar::Scalar;
use crate::Rational;

/// Defaults for suite runs.
pub const DEFAULT_KS: [u32; 4] = [0, 1, 2, 3];
pub const DEFAULT_MAX_DEGREE: u32 = 8;

/// Surface mean over `P_n` minus the mean over `D_n`.
pub fn residual_surface_mean<T: Scalar>(h: &Polynomial<T>, d: &CubeDomain<T>) -> Result<T> {
    let boundary = integrate_boundary(h, d)? / measure(d, Region::Boundary, 0);
    let diagonal = integrate_diagonal(h, d, &Weight::OmegaK(0))? / measure(d, Region::Diagonal, 0);
    Ok(boundary - diagonal)
}

/// `ω_k`-weighted mean over the cube minus the `ω_{k+1}`-weighted mean over `D_n`.
pub fn residual_volume_mean<T: Scalar>(h: &Polynomial<T>, d: &CubeDomain<T>, k: u32) -> Result<T> {
    let cube = integrate_cube(h, d, &Weight::OmegaK(k))? / measure(d, Region::Cube, k);
    let diagonal = integrate_diagonal(h, d, &Weight::OmegaK(k + 1))? / measure(d, Region::Diagonal, k + 1);
    Ok(cube - diagonal)
}

fn require_vanishing<T: Scalar>(phi: &UnivariatePolynomial<T>, order: usize) -> Result<()> {
    match phi.first_nonvanishing_below(order) {
        Some(j) => Err(Error::WeightVanishing {
            derivative: j,
            required: order,
        }),
        None => Ok(()),
    }
}

/// `∫_I φ''(r-M) h - 2 ∫_D φ'(r-M) h`; requires `φ(0) = φ'(0) = 0`.
pub fn residual_corollary1<T: Scalar>(
    h: &Polynomial<T>,
    d: &CubeDomain<T>,
    phi: &UnivariatePolynomial<T>,
) -> Result<T> {
    require_vanishing(phi, 2)?;
    let cube = integrate_cube(h, d, &Weight::Profile(phi.derivative(2)))?;
    let diagonal = integrate_diagonal(h, d, &Weight::Profile(phi.derivative(1)))?;
    Ok(cube - T::from_i64(2) * diagonal)
}

/// `∫_I φ^(2m)(r-M) g - 2 Σ_{s<m} ∫_D φ^(2s+1)(r-M) Δ^(m-s-1) g`.
///
/// Requires `Δ^m g = 0` and `φ^(j)(0) = 0` for `j < 2m`.
pub fn residual_pizzetti<T: Scalar>(
    g: &Polynomial<T>,
    d: &CubeDomain<T>,
    m: u32,
    phi: &UnivariatePolynomial<T>,
) -> Result<T> {
    if m == 0 {
        return Err(Error::InvalidRequest("polyharmonic order m must be at least 1".into()));
    }
    if !is_polyharmonic(g, m) {
        return Err(Error::NotPolyharmonic { m });
    }
    require_vanishing(phi, 2 * m as usize)?;
    let lhs = integrate_cube(g, d, &Weight::Profile(phi.derivative(2 * m)))?;
    let mut rhs = T::zero();
    for s in 0..m {
        let term = g.iterated_laplacian(m - s - 1);
        rhs = rhs + integrate_diagonal(&term, d, &Weight::Profile(phi.derivative(2 * s + 1)))?;
    }
    Ok(lhs - T::from_i64(2) * rhs)
}

/// `t^j / j!` for each `j` in `js`.
pub fn omega_profiles<T: Scalar>(js: impl IntoIterator<Item = u32>) -> Vec<UnivariatePolynomial<T>> {
    js.into_iter().map(UnivariatePolynomial::omega).collect()
}

/// Default quadrature profiles `t^j/j!`, `j = 2..=6`.
pub fn corollary1_profiles<T: Scalar>() -> Vec<UnivariatePolynomial<T>> {
    omega_profiles(2..=6)
}

/// Default Pizzetti profiles `t^(2m+j)/(2m+j)!`, `j = 0..=2`.
pub fn pizzetti_profiles<T: Scalar>(m: u32) -> Vec<UnivariatePolynomial<T>> {
    omega_profiles((0..=2).map(|j| 2 * m + j))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityKind {
    SurfaceMean,
    VolumeMean,
    Corollary1,
    Pizzetti,
}

impl IdentityKind {
    pub fn name(self) -> &'static str {
        match self {
            IdentityKind::SurfaceMean => "surface",
            IdentityKind::VolumeMean => "volume",
            IdentityKind::Corollary1 => "corollary1",
            IdentityKind::Pizzetti => "pizzetti",
        }
    }
}

impl std::str::FromStr for IdentityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "surface" => Ok(IdentityKind::SurfaceMean),
            "volume" => Ok(IdentityKind::VolumeMean),
            "corollary1" => Ok(IdentityKind::Corollary1),
            "pizzetti" => Ok(IdentityKind::Pizzetti),
            other => Err(Error::InvalidRequest(format!(
                "unknown identity {:?} (expected surface, volume, corollary1 or pizzetti)",
                other
            ))),
        }
    }
}

/// One identity with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum IdentitySpec {
    SurfaceMean,
    VolumeMean {
        k: u32,
    },
    Corollary1 {
        phi: UnivariatePolynomial<Rational>,
    },
    Pizzetti {
        m: u32,
        phi: UnivariatePolynomial<Rational>,
    },
}

impl IdentitySpec {
    pub fn kind(&self) -> IdentityKind {
        match self {
            IdentitySpec::SurfaceMean => IdentityKind::SurfaceMean,
            IdentitySpec::VolumeMean { .. } => IdentityKind::VolumeMean,
            IdentitySpec::Corollary1 { .. } => IdentityKind::Corollary1,
            IdentitySpec::Pizzetti { .. } => IdentityKind::Pizzetti,
        }
    }

    /// `k` for the volume identity, `φ` for the profile identities, empty
    /// for the surface identity.
    pub fn k_or_phi(&self) -> String {
        match self {
            IdentitySpec::SurfaceMean => String::new(),
            IdentitySpec::VolumeMean { k } => k.to_string(),
            IdentitySpec::Corollary1 { phi } | IdentitySpec::Pizzetti { phi, .. } => phi.to_string(),
        }
    }

    pub fn m(&self) -> u32 {
        match self {
            IdentitySpec::Pizzetti { m, .. } => *m,
            _ => 1,
        }
    }

    pub fn residual(&self, h: &Polynomial<Rational>, d: &CubeDomain<Rational>) -> Result<Rational> {
        match self {
            IdentitySpec::SurfaceMean => residual_surface_mean(h, d),
            IdentitySpec::VolumeMean { k } => residual_volume_mean(h, d, *k),
            IdentitySpec::Corollary1 { phi } => residual_corollary1(h, d, phi),
            IdentitySpec::Pizzetti { m, phi } => residual_pizzetti(h, d, *m, phi),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportEntry {
    pub label: String,
    pub residual: Rational,
    pub pass: bool,
}

/// Residuals of one identity over a list of inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub spec: IdentitySpec,
    pub n: usize,
    pub r: Rational,
    pub entries: Vec<ReportEntry>,
}

impl IdentityReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// A labelled polynomial fed to the verifiers.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPoly {
    pub label: String,
    pub poly: Polynomial<Rational>,
}

/// Evaluates every identity on every input. Entries keep the input order.
///
/// Non-harmonic inputs to the mean-value and quadrature identities simply
/// produce nonzero residuals (negative controls). The Pizzetti identity
/// rejects inputs that are not `m`-polyharmonic.
pub fn run_inputs(
    inputs: &[LabeledPoly],
    d: &CubeDomain<Rational>,
    specs: &[IdentitySpec],
) -> Result<Vec<IdentityReport>> {
    specs
        .iter()
        .map(|spec| {
            let entries = inputs
                .par_iter()
                .map(|input| {
                    let residual = spec
                        .residual(&input.poly, d)
                        .map_err(|e| e.labelled(input.label.clone()))?;
                    let pass = residual == Rational::from_integer(0.into());
                    Ok(ReportEntry {
                        label: input.label.clone(),
                        residual,
                        pass,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(IdentityReport {
                spec: spec.clone(),
                n: d.n(),
                r: d.r().clone(),
                entries,
            })
        })
        .collect()
}

/// Generates `graded_basis(req)` and runs every identity on it.
pub fn run_suite(req: BasisRequest, d: &CubeDomain<Rational>, specs: &[IdentitySpec]) -> Result<Vec<IdentityReport>> {
    if req.n != d.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            found: req.n,
        });
    }
    let basis = graded_basis::<Rational>(req);
    let inputs: Vec<LabeledPoly> = basis
        .elements
        .iter()
        .enumerate()
        .map(|(i, p)| LabeledPoly {
            label: basis.label(i),
            poly: p.clone(),
        })
        .collect();
    run_inputs(&inputs, d, specs)
}
