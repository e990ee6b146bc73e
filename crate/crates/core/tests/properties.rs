use proptest::prelude::*;

use cubemean::approx::{
    check_onesided, diagonal_product, gradient_vanishes_on_diagonal, sqrt_exact, vanishes_on_diagonal, Onesided,
    OnesidedStrategy,
};
use cubemean::harmonic::{graded_basis, BasisRequest};
use cubemean::integrate::{closed_form_measure, integrate, measure, Region, Weight};
use cubemean::oracle::{numeric_integrate, QuadratureSpec};
use cubemean::parse::{parse_poly, ExprSource};
use cubemean::scalar::Scalar;
use cubemean::verify::{residual_surface_mean, residual_volume_mean};
use cubemean::{Cube, Poly, Rational};
use num_traits::{Signed, Zero};

const REGIONS: [Region; 3] = [Region::Cube, Region::Boundary, Region::Diagonal];

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-10i64..=10, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn positive_radius() -> impl Strategy<Value = Rational> {
    prop_oneof![
        Just(q(1, 2)),
        Just(q(1, 1)),
        Just(q(3, 1)),
        (1i64..=7, 1i64..=4).prop_map(|(n, d)| q(n, d))
    ]
}

/// Polynomial in `n` variables with up to `terms` terms, each of degree ≤ `deg`.
fn poly_in(n: usize, terms: usize, deg: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=deg, n), rational()), 0..=terms).prop_map(move |ts| {
        let ts = ts.into_iter().map(|(mut e, c)| {
            while e.iter().sum::<u32>() > deg {
                let i = e.iter().position(|&a| a > 0).unwrap();
                e[i] -= 1;
            }
            (e, c)
        });
        Poly::from_terms(n, ts).unwrap()
    })
}

fn poly() -> impl Strategy<Value = Poly> {
    (2usize..=3).prop_flat_map(|n| poly_in(n, 5, 5))
}

fn poly_triple() -> impl Strategy<Value = (Poly, Poly, Poly)> {
    (2usize..=3).prop_flat_map(|n| (poly_in(n, 4, 4), poly_in(n, 4, 4), poly_in(n, 4, 4)))
}

fn laplacian_product(f: &Poly, g: &Poly) -> Poly {
    let mut rhs = &(f * &g.laplacian()) + &(g * &f.laplacian());
    for i in 0..f.dim() {
        let cross = &f.partial(i).unwrap() * &g.partial(i).unwrap();
        rhs = &rhs + &cross.scale(&q(2, 1));
    }
    rhs
}

fn domain(n: usize, r: Rational) -> Cube {
    Cube::new(n, r).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((a, b, c) in poly_triple()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &Poly::zero(a.dim()), a.clone());
        prop_assert_eq!(&a * &Poly::one(a.dim()), a.clone());
    }

    #[test]
    fn sums_stay_canonical((a, b, _c) in poly_triple()) {
        let s = &a + &(-&b);
        prop_assert!(s.terms().all(|(_, c)| !c.is_zero()));
        prop_assert_eq!(&s + &b, a);
    }

    #[test]
    fn laplacian_product_rule((f, g, _h) in poly_triple()) {
        prop_assert_eq!((&f * &g).laplacian(), laplacian_product(&f, &g));
    }

    #[test]
    fn partials_commute(p in poly()) {
        for i in 0..p.dim() {
            for j in 0..p.dim() {
                prop_assert_eq!(p.partial(i).unwrap().partial(j).unwrap(), p.partial(j).unwrap().partial(i).unwrap());
            }
        }
    }

    #[test]
    fn text_round_trip(p in poly()) {
        let back = parse_poly(ExprSource::with_dim(&p.to_string(), p.dim())).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn evaluation_is_a_ring_map((a, b, _c) in poly_triple(), point in prop::collection::vec(rational(), 3)) {
        let x = &point[..a.dim()];
        prop_assert_eq!((&a * &b).evaluate(x).unwrap(), a.evaluate(x).unwrap() * b.evaluate(x).unwrap());
        prop_assert_eq!((&a + &b).evaluate(x).unwrap(), a.evaluate(x).unwrap() + b.evaluate(x).unwrap());
    }

    #[test]
    fn integration_is_linear((a, b, _c) in poly_triple(), s in rational(), r in positive_radius(), k in 0u32..=2) {
        let d = domain(a.dim(), r);
        let w = Weight::OmegaK(k);
        let combo = &a.scale(&s) + &b;
        for region in REGIONS {
            let lhs = integrate(&combo, &d, region, &w).unwrap();
            let rhs = s.clone() * integrate(&a, &d, region, &w).unwrap() + integrate(&b, &d, region, &w).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn integrals_invariant_under_signed_permutations(
        p in poly(),
        seed in any::<u64>(),
        k in 0u32..=2,
    ) {
        let n = p.dim();
        let mut perm: Vec<usize> = (0..n).collect();
        let rot = (seed % n as u64) as usize;
        perm.rotate_left(rot);
        if seed & 8 != 0 {
            perm.swap(0, n - 1);
        }
        let signs: Vec<bool> = (0..n).map(|i| seed >> (4 + i) & 1 == 1).collect();
        let moved = p.signed_permute(&perm, &signs);
        let d = domain(n, q(1, 1));
        for region in REGIONS {
            let w = Weight::OmegaK(k);
            prop_assert_eq!(integrate(&moved, &d, region, &w).unwrap(), integrate(&p, &d, region, &w).unwrap());
        }
    }

    #[test]
    fn homogeneous_scaling(p in poly(), deg in 0u32..=5, k in 0u32..=2, r in positive_radius()) {
        let h = p.homogeneous_part(deg);
        let n = h.dim() as u32;
        let one = domain(h.dim(), q(1, 1));
        let scaled = domain(h.dim(), r.clone());
        for region in REGIONS {
            let w = Weight::OmegaK(k);
            let exponent = match region {
                Region::Cube => n + deg + k,
                _ => n - 1 + deg + k,
            };
            let expected = integrate(&h, &one, region, &w).unwrap() * cubemean::scalar::pow(&r, exponent);
            prop_assert_eq!(integrate(&h, &scaled, region, &w).unwrap(), expected);
        }
    }

    #[test]
    fn masses_match_closed_forms(n in 2usize..=6, k in 0u32..=4, r in positive_radius()) {
        let d = domain(n, r.clone());
        for region in REGIONS {
            prop_assert_eq!(measure(&d, region, k), closed_form_measure(n as u32, &r, region, k));
        }
    }

    #[test]
    fn diagonal_multiples_vanish_on_the_diagonal(g in poly_in(2, 3, 2), g3 in poly_in(3, 2, 1)) {
        for (g, n) in [(g, 2usize), (g3, 3)] {
            let p = &g * &diagonal_product(n);
            let d = domain(n, q(1, 1));
            prop_assert!(vanishes_on_diagonal(&p, &d).unwrap());
            prop_assert!(gradient_vanishes_on_diagonal(&p, &d).unwrap());
            let for_d = integrate(&p, &d, Region::Diagonal, &Weight::OmegaK(1)).unwrap();
            prop_assert!(for_d.is_zero());
        }
    }

    #[test]
    fn onesided_verdicts_are_sound(p in poly_in(2, 4, 4), point in prop::collection::vec(rational(), 2)) {
        let d = domain(2, q(1, 1));
        let x: Vec<Rational> = point.iter().map(|v| v.clone() / q(10, 1)).collect();
        match check_onesided(&p, &d, &OnesidedStrategy { grid_per_axis: 9, max_points: 100 }) {
            Onesided::Certified { .. } => prop_assert!(!p.evaluate(&x).unwrap().is_negative()),
            Onesided::Failed { point, value } => {
                prop_assert!(value.is_negative());
                prop_assert_eq!(p.evaluate(&point).unwrap(), value);
            }
            Onesided::Heuristic { min, .. } => prop_assert!(!min.is_negative()),
        }
    }

    #[test]
    fn squares_have_exact_roots(p in poly_in(2, 3, 3)) {
        let sq = &p * &p;
        let root = sqrt_exact(&sq).expect("a square has a root");
        prop_assert_eq!(&root * &root, sq);
    }

    #[test]
    fn harmonic_combinations_have_mean_values(
        coeffs in prop::collection::vec(rational(), 17),
        k in 0u32..=3,
        r in positive_radius(),
    ) {
        let basis = graded_basis::<Rational>(BasisRequest { n: 2, max_degree: 8, m: 1 });
        let h = basis.elements.iter().zip(&coeffs).fold(Poly::zero(2), |acc, (e, c)| &acc + &e.scale(c));
        let d = domain(2, r);
        prop_assert!(residual_surface_mean(&h, &d).unwrap().is_zero());
        prop_assert!(residual_volume_mean(&h, &d, k).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_agrees_with_exact(p in (2usize..=3).prop_flat_map(|n| poly_in(n, 6, 6)), k in 0u32..=2, r in positive_radius()) {
        let d = domain(p.dim(), r);
        let spec = QuadratureSpec::default();
        for region in REGIONS {
            let w = Weight::OmegaK(k);
            let exact = integrate(&p, &d, region, &w).unwrap().to_f64();
            let numeric = numeric_integrate(&p, &d, region, &w, &spec).unwrap();
            prop_assert!((numeric - exact).abs() / exact.abs().max(1.0) <= 1e-9, "{} vs {}", numeric, exact);
        }
    }
}
