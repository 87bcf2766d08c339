use std::sync::OnceLock;

use nalgebra::DVector;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use s3_sga::algebra::{all_triples, commutator_rhs, jacobi_residual, BracketMode, GeneratorIndex, Gaussian, ProductTable};
use s3_sga::classical::{self, AmbientState, PhaseState};
use s3_sga::hilbert::{inner_product, monomial_sphere_integral, ComplexPoly, Exponents, RationalPoly};
use s3_sga::linalg;
use s3_sga::operators::{f_gamma, Representation};
use s3_sga::verify::CheckResult;

fn rep4() -> &'static Representation {
    static REP: OnceLock<Representation> = OnceLock::new();
    REP.get_or_init(|| Representation::build(4).unwrap())
}

fn exponents(degree: u32) -> impl Strategy<Value = Exponents> {
    (0..=degree, 0..=degree, 0..=degree).prop_filter_map("degree", move |(a, b, c)| {
        (a + b + c <= degree).then(|| [a, b, c, degree - a - b - c])
    })
}

fn rational_poly(degree: u32) -> impl Strategy<Value = RationalPoly> {
    prop::collection::vec((exponents(degree), -20i64..=20), 1..6).prop_map(move |terms| {
        RationalPoly::from_terms(
            degree,
            terms.into_iter().map(|(e, c)| (e, BigRational::from_integer(BigInt::from(c)))),
        )
        .unwrap()
    })
}

fn complex_poly(degree: u32) -> impl Strategy<Value = ComplexPoly> {
    prop::collection::vec((exponents(degree), -3.0f64..3.0, -3.0f64..3.0), 1..6).prop_map(move |terms| {
        ComplexPoly::from_terms(degree, terms.into_iter().map(|(e, re, im)| (e, Complex64::new(re, im)))).unwrap()
    })
}

fn ambient() -> impl Strategy<Value = AmbientState> {
    let v = || prop::array::uniform4(-2.0f64..2.0);
    (v(), v())
        .prop_filter("nonzero radius", |(xi, _)| xi.iter().map(|a| a * a).sum::<f64>() > 0.1)
        .prop_map(|(xi, pi)| AmbientState { xi, pi })
}

fn generator() -> impl Strategy<Value = GeneratorIndex> {
    (0usize..15).prop_map(|k| GeneratorIndex::from_ordinal(k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_product_rule(p in rational_poly(4), k in 0usize..4) {
        // Δ(x_k p) = x_k Δp + 2 ∂_k p
        let lhs = p.mul_coordinate(k).laplacian();
        let two = BigRational::from_integer(BigInt::from(2));
        let rhs = p.laplacian().mul_coordinate(k).try_add(&p.derivative(k).scale(&two)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sphere_integral_sees_unit_radius(e in exponents(4)) {
        // ∫ (x·x) x^e = ∫ x^e on the unit sphere
        let lifted: f64 = (0..4)
            .map(|k| {
                let mut f = e;
                f[k] += 2;
                monomial_sphere_integral(&f)
            })
            .sum();
        let base = monomial_sphere_integral(&e);
        prop_assert!((lifted - base).abs() <= 1e-13 * base.abs().max(1.0));
    }

    #[test]
    fn inner_product_is_hermitian_and_positive(p in complex_poly(3), q in complex_poly(3)) {
        let pq = inner_product(&p, &q);
        let qp = inner_product(&q, &p);
        prop_assert!((pq - qp.conj()).norm() <= 1e-12 * pq.norm().max(1.0));
        prop_assert!(inner_product(&p, &p).re > 0.0);
        prop_assert!(inner_product(&p, &p).im.abs() < 1e-12);
    }

    #[test]
    fn structure_constants_antisymmetric(ab in generator(), cd in generator()) {
        for mode in [BracketMode::Quantum, BracketMode::Classical] {
            let forward = commutator_rhs(ab, cd, mode);
            let backward = commutator_rhs(cd, ab, mode).scaled(Gaussian::new(-1, 0));
            prop_assert_eq!(forward, backward);
        }
        let q = commutator_rhs(ab, cd, BracketMode::Quantum);
        let cl = commutator_rhs(ab, cd, BracketMode::Classical).scaled(Gaussian::new(0, -1));
        prop_assert_eq!(q, cl);
    }

    #[test]
    fn jacobi_on_sampled_triples(k in 0usize..455) {
        let triple = all_triples()[k];
        prop_assert_eq!(jacobi_residual(&[triple], BracketMode::Quantum), 0);
        prop_assert_eq!(jacobi_residual(&[triple], BracketMode::Classical), 0);
    }

    #[test]
    fn f_recursion_for_real_h(h in 0.5f64..80.0) {
        let lhs = f_gamma(h) * f_gamma(h + 1.0);
        prop_assert!((lhs - (2.0 * h + 1.0)).abs() <= 1e-12 * (2.0 * h + 1.0));
    }

    #[test]
    fn ambient_map_lands_on_the_surface(a in ambient()) {
        let s = classical::ambient_map(&a).unwrap();
        let (n, o) = s.defects();
        prop_assert!(n < 1e-14 && o < 1e-13);
        let g = classical::classical_generators(&s);
        let scale = g.hamiltonian.max(1.0);
        prop_assert!(g.restrictive_residual() <= 1e-12 * scale);
        prop_assert!(g.casimir().abs() <= 1e-12 * scale);
        prop_assert!((g.hamiltonian - s.hamiltonian()).abs() <= 1e-12 * scale);
    }

    #[test]
    fn analytic_flow_is_a_one_parameter_group(a in ambient(), t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let s = classical::ambient_map(&a).unwrap();
        let direct = classical::analytic_solution(&s, t1 + t2);
        let composed = classical::analytic_solution(&classical::analytic_solution(&s, t1), t2);
        let scale = s.hamiltonian().sqrt().max(1.0);
        for i in 0..4 {
            prop_assert!((direct.x[i] - composed.x[i]).abs() <= 1e-11 * scale);
            prop_assert!((direct.p[i] - composed.p[i]).abs() <= 1e-11 * scale * scale);
        }
    }

    #[test]
    fn ladder_phase_law(a in ambient(), t in 0.0f64..5.0) {
        let s0 = classical::ambient_map(&a).unwrap();
        prop_assume!(s0.hamiltonian() > 1e-3);
        let root = s0.hamiltonian().sqrt();
        let g0 = classical::classical_generators(&s0);
        let gt = classical::classical_generators(&classical::analytic_solution(&s0, t));
        for sign in [1.0, -1.0] {
            let phase = Complex64::from_polar(1.0, sign * 2.0 * t * root);
            for j in 0..4 {
                let expected = g0.ladder(sign)[j] * phase;
                prop_assert!((gt.ladder(sign)[j] - expected).norm() <= 1e-11 * root.max(1.0));
            }
        }
        let j0 = s0.angular_momentum();
        let jt = gt.j;
        for i in 0..4 {
            for k in 0..4 {
                prop_assert!((j0[i][k] - jt[i][k]).abs() <= 1e-11 * root.max(1.0));
            }
        }
    }

    #[test]
    fn projection_is_idempotent(x in prop::array::uniform4(-2.0f64..2.0), p in prop::array::uniform4(-2.0f64..2.0)) {
        prop_assume!(x.iter().map(|v| v * v).sum::<f64>() > 0.01);
        let once = PhaseState::projected(x, p).unwrap();
        let twice = PhaseState::projected(once.x, once.p).unwrap();
        for i in 0..4 {
            prop_assert!((once.x[i] - twice.x[i]).abs() < 1e-15);
            prop_assert!((once.p[i] - twice.p[i]).abs() < 1e-14);
        }
        prop_assert!(PhaseState::new(once.x, once.p).is_ok());
    }

    #[test]
    fn quadratic_casimir_on_random_interior_vectors(coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 15)) {
        // every vector supported on levels ≤ N − 2 is an eigenvector of C₂ with eigenvalue −6
        let rep = rep4();
        let gens = rep.assemble_so42();
        let products = ProductTable::new(&gens);
        let mut c2 = linalg::zeros(rep.dim());
        for ab in GeneratorIndex::all() {
            let g = s3_sga::algebra::Metric::g(ab.a(), ab.a()) * s3_sga::algebra::Metric::g(ab.b(), ab.b());
            products.accumulate(&mut c2, linalg::c(2.0 * g as f64), ab.a(), ab.b(), ab.a(), ab.b());
        }
        let inner = rep.layout().dim_through(2);
        let v = DVector::from_fn(rep.dim(), |k, _| {
            if k < inner {
                let (re, im) = coeffs[k % coeffs.len()];
                Complex64::new(re, im)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let w = &c2 * &v;
        let r = (&w + &v * Complex64::new(6.0, 0.0)).norm();
        prop_assert!(r <= 1e-10 * v.norm().max(1.0), "residual {r}");
    }

    #[test]
    fn random_real_generator_combination_is_hermitian(coeffs in prop::collection::vec(-1.0f64..1.0, 15)) {
        let rep = rep4();
        let gens = rep.assemble_so42();
        let mut m = linalg::zeros(rep.dim());
        for (ab, c) in GeneratorIndex::all().zip(&coeffs) {
            m += gens.get(ab) * Complex64::new(*c, 0.0);
        }
        prop_assert!(linalg::frobenius(&(&m - m.adjoint())) <= 1e-12 * linalg::frobenius(&m).max(1.0));
    }

    #[test]
    fn residual_json_round_trips(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
        let r = CheckResult::new("x", x, 1.0, None);
        let json = serde_json::to_string(&r).unwrap();
        let field = json.split("\"residual\":").nth(1).unwrap().split(',').next().unwrap();
        prop_assert_eq!(field.parse::<f64>().unwrap(), x);
    }
}
