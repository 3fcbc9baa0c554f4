//! Acceptance suite: one test per criterion, each printing its own
//! pass/fail line through the harness. Expected values are frozen from
//! independent derivations (root counting, brute-force rewriting, or hand
//! elimination); tolerances are exact throughout.

mod common;

use common::{assert_within, random_generators, random_homogeneous, random_relative_sullivan, Rng};
use hofix::algebra::{q, qr, Generators, Poly, Q};
use num_traits::Zero;
use hofix::cdga::{DualCoalgebra, FiniteAlgebra, FreeCdga};
use hofix::elliptic::{
    certify_component_elliptic, check_elliptic, find_witnesses, Precedence, WitnessConfig,
    WitnessDifferential,
};
use hofix::equivariant::{
    localize_check, never_equivalence_check, pi_k_injective_check, BorelModel, EquivariantPair,
    KModel,
};
use hofix::roots::rational_roots;
use hofix::section::{
    enumerate_retractions, identify_catalog, simplify_presentation, CatalogFactor,
    ComponentModel, Identification, RelativeSullivan, SectionModel, SplitStrategy,
};
use std::sync::Arc;
use std::time::Instant;

fn components_of(rel: &RelativeSullivan) -> Vec<ComponentModel> {
    let model = SectionModel::build(rel, false).expect("section model builds");
    enumerate_retractions(rel)
        .expect("retractions enumerate")
        .iter()
        .map(|phi| ComponentModel::compute(&model, phi).expect("component builds"))
        .collect()
}

fn identified(component: &ComponentModel) -> Identification {
    identify_catalog(&simplify_presentation(component.cdga()))
}

fn odd_product(degrees: &[i64]) -> Identification {
    Identification::Product(degrees.iter().map(|&d| CatalogFactor::OddSphere(d)).collect())
}

#[test]
fn criterion_01_odd_sphere_circle_actions() {
    for n in [3i64, 5, 7] {
        let start = Instant::now();
        let borel = BorelModel::odd_sphere(n, 1, None).unwrap();
        let components = components_of(borel.rel());
        assert_eq!(components.len(), 1, "one component for S^{}", n);
        let c = &components[0];
        // Exact generator degrees n, n-2, ..., 1 with zero differential.
        let mut degrees: Vec<i64> = c
            .cdga()
            .ctx()
            .iter()
            .map(|(_, g)| g.degree)
            .collect();
        degrees.sort_unstable();
        let expect: Vec<i64> = (0..=(n - 1) / 2).map(|i| 2 * i + 1).collect();
        assert_eq!(degrees, expect);
        assert!(c.cdga().differentials().iter().all(Poly::is_zero));
        let expect_id = odd_product(&expect);
        assert_eq!(identified(c), expect_id, "S^1 x S^3 x ... x S^{}", n);
        assert_within(&format!("criterion 1 (n={})", n), start, 5);
    }
}

#[test]
fn criterion_02_even_sphere_circle_actions() {
    let start = Instant::now();
    for n in [2i64, 4] {
        // λ = 0: a single component whose model is the flag-type algebra
        // with d y_r = Σ_{s+t=r} x_s x_t.
        let borel = BorelModel::even_sphere(n, q(0), None).unwrap();
        let components = components_of(borel.rel());
        assert_eq!(components.len(), 1, "single component at λ=0, n={}", n);
        let c = &components[0];
        let ctx = c.cdga().ctx();
        let x_s = |s: i64| {
            let dual = (n / 2 - s) as usize;
            Poly::gen(ctx, c.gen_of(0, dual).expect("x generator"))
        };
        let y_r = |r: i64| c.gen_of(1, (n - r) as usize).expect("y generator");
        // Degrees: x_s in degree 2s, y_r in degree 2r - 1.
        let mut degrees: Vec<i64> = ctx.iter().map(|(_, g)| g.degree).collect();
        degrees.sort_unstable();
        let mut expect: Vec<i64> = (1..=n / 2).map(|s| 2 * s).collect();
        expect.extend((1..=n).map(|r| 2 * r - 1));
        expect.sort_unstable();
        assert_eq!(degrees, expect, "generator degrees at λ=0, n={}", n);
        for r in 1..=n {
            let mut rhs = Poly::zero(ctx);
            for s in 1..=n / 2 {
                let t = r - s;
                if (1..=n / 2).contains(&t) {
                    rhs = rhs.add(&x_s(s).mul(&x_s(t)));
                }
            }
            assert_eq!(
                c.cdga().d_gen(y_r(r)),
                &rhs,
                "d y_{} = sum x_s x_t (n={})",
                r,
                n
            );
        }

        // λ ≠ 0: exactly two components, each a product of odd spheres in
        // degrees n+1, n+3, ..., 2n-1.
        let borel = BorelModel::even_sphere(n, q(1), None).unwrap();
        let components = components_of(borel.rel());
        assert_eq!(components.len(), 2, "two components at λ=1, n={}", n);
        let expect: Vec<i64> = (0..n / 2).map(|i| n + 1 + 2 * i).collect();
        for c in &components {
            assert_eq!(identified(c), odd_product(&expect), "n={}", n);
        }
    }
    assert_within("criterion 2", start, 30);
}

/// Admissible identifications for the projective space of dimension n, in
/// catalog factors (CP^1 appears as its even-sphere presentation).
fn projective_allowed(n: i64) -> Vec<Identification> {
    let mut allowed = vec![Identification::Product(
        (1..=n).map(|i| CatalogFactor::OddSphere(2 * i + 1)).collect(),
    )];
    for i in 1..=n {
        // Odd spheres S^1, S^3, ..., S^{2i-1} precede the projective factor.
        let mut factors = vec![CatalogFactor::OddSphere(1)];
        factors.extend((2..=i).map(|k| CatalogFactor::OddSphere(2 * k - 1)));
        factors.push(if i == 1 {
            CatalogFactor::EvenSphere(2)
        } else {
            CatalogFactor::ComplexProjective(i as u32)
        });
        factors.extend((i + 1..=n).map(|k| CatalogFactor::OddSphere(2 * k + 1)));
        factors.sort_by_key(|f| (f.dimension(), *f));
        allowed.push(Identification::Product(factors));
    }
    allowed
}

#[test]
fn criterion_03_projective_circle_actions() {
    let start = Instant::now();
    // Parameter sets: distinct rational roots, repeated roots, and no
    // rational roots beyond the forced one.
    let cases: Vec<(i64, Vec<Q>)> = vec![
        (1, vec![q(1)]),
        (1, vec![q(0)]),
        (2, vec![q(-3), q(2)]),
        (2, vec![q(-2), q(1)]),
        (2, vec![q(0), q(-2)]),
        (3, vec![q(-6), q(11), q(-6)]),
        (3, vec![q(-2), q(1), q(0)]),
        (3, vec![q(0), q(1), q(0)]),
        (3, vec![qr(1, 2), q(0), q(0)]),
    ];
    for (n, lambdas) in cases {
        let borel = BorelModel::complex_projective(n, lambdas.clone(), None).unwrap();
        let components = components_of(borel.rel());

        // Independent oracle: distinct rational roots of
        // z^{n+1} + Σ λ_j z^{n+1-j}, built directly from the parameters.
        let mut coeffs = vec![Q::zero(); (n + 2) as usize];
        coeffs[(n + 1) as usize] = q(1);
        for (j, l) in lambdas.iter().enumerate() {
            let power = (n + 1) as usize - (j + 1);
            coeffs[power] = l.clone();
        }
        let mut roots = rational_roots(&coeffs).unwrap();
        roots.dedup();
        assert!(
            components.len() <= (n + 1) as usize,
            "at most n+1 components"
        );
        assert_eq!(
            components.len(),
            roots.len(),
            "component count equals distinct rational roots (n={}, λ={:?})",
            n,
            lambdas
        );

        let allowed = projective_allowed(n);
        for c in &components {
            let id = identified(c);
            assert!(
                allowed.contains(&id),
                "identification {} not in the list for n={} (λ={:?})",
                id,
                n,
                lambdas
            );
        }
    }
    assert_within("criterion 3", start, 60);
}

#[test]
fn criterion_04_torus_action_on_odd_sphere() {
    let n = 3i64;
    let borel = BorelModel::odd_sphere(n, 2, Some(4)).unwrap();
    let model = SectionModel::build(borel.rel(), false).unwrap();
    // The full section model is free on x ⊗ β over all six dual elements,
    // with zero differential.
    assert!(model.cdga().differentials().iter().all(Poly::is_zero));
    assert_eq!(model.cdga().ctx().len(), 6);

    // The component keeps exactly the duals of degree at most n - 1 over
    // the two base variables.
    let components = components_of(borel.rel());
    assert_eq!(components.len(), 1);
    let c = &components[0];
    assert!(c.cdga().differentials().iter().all(Poly::is_zero));
    let base = c.rebased_source().base().clone();
    let kept: Vec<usize> = c.origins().iter().map(|&(_, k)| k).collect();
    let expect: Vec<usize> = (0..base.dim())
        .filter(|&k| base.degree(k) <= n - 1)
        .collect();
    assert_eq!(kept, expect, "duals of degree <= n-1 over two variables");
    let mut degrees: Vec<i64> = c.cdga().ctx().iter().map(|(_, g)| g.degree).collect();
    degrees.sort_unstable();
    assert_eq!(degrees, vec![1, 1, 3]);
}

fn all_desk_components() -> Vec<(String, ComponentModel, RelativeSullivan)> {
    let mut out = Vec::new();
    for n in [3i64, 5, 7] {
        let borel = BorelModel::odd_sphere(n, 1, None).unwrap();
        for c in components_of(borel.rel()) {
            out.push((format!("S^{} odd", n), c, borel.rel().clone()));
        }
    }
    for n in [2i64, 4] {
        for lambda in [q(0), q(1)] {
            let borel = BorelModel::even_sphere(n, lambda.clone(), None).unwrap();
            for c in components_of(borel.rel()) {
                out.push((format!("S^{} λ={}", n, lambda), c, borel.rel().clone()));
            }
        }
    }
    let cases: Vec<(i64, Vec<Q>)> = vec![
        (1, vec![q(1)]),
        (2, vec![q(-3), q(2)]),
        (2, vec![q(-2), q(1)]),
        (3, vec![q(-6), q(11), q(-6)]),
    ];
    for (n, lambdas) in cases {
        let borel = BorelModel::complex_projective(n, lambdas.clone(), None).unwrap();
        for c in components_of(borel.rel()) {
            out.push((format!("CP^{} λ={:?}", n, lambdas), c, borel.rel().clone()));
        }
    }
    out
}

#[test]
fn criterion_05_components_certified_elliptic_both_routes() {
    let config = WitnessConfig::default();
    for (label, component, rel) in all_desk_components() {
        // Route one: lift the fiber witnesses.
        let fiber_verdict =
            check_elliptic(rel.fiber_model(), WitnessDifferential::Pure, &config).unwrap();
        assert!(fiber_verdict.is_elliptic(), "{} fiber", label);
        let lifts = certify_component_elliptic(&component, fiber_verdict.witnesses());
        assert!(lifts.is_ok(), "{} lifts: {:?}", label, lifts.err());

        // Route two: direct witness search on the component model.
        let direct = find_witnesses(component.cdga(), &config).unwrap();
        assert!(direct.is_elliptic(), "{} direct search", label);
    }
}

#[test]
fn criterion_06_witness_lift_remainders_decompose() {
    for lambdas in [vec![q(0), q(0)], vec![q(-3), q(2)], vec![q(-2), q(1)]] {
        let borel = BorelModel::complex_projective(2, lambdas.clone(), None).unwrap();
        let fiber_verdict = check_elliptic(
            borel.rel().fiber_model(),
            WitnessDifferential::Pure,
            &WitnessConfig::default(),
        )
        .unwrap();
        for component in components_of(borel.rel()) {
            let precedence = Precedence::new(&component);
            let lifts =
                certify_component_elliptic(&component, fiber_verdict.witnesses()).unwrap();
            let evens: Vec<usize> = (0..component.cdga().ctx().len())
                .filter(|&g| !component.cdga().ctx().is_odd(g))
                .collect();
            assert_eq!(lifts.len(), evens.len(), "one lift per even generator");
            for lift in &lifts {
                for (m, _) in lift.remainder.terms() {
                    assert!(
                        m.factors()
                            .iter()
                            .any(|&(g, _)| precedence.precedes(g as usize, lift.target)),
                        "remainder monomial lacks a preceding generator (λ={:?})",
                        lambdas
                    );
                }
            }
        }
    }
}

#[test]
fn criterion_07_k_model_hits_the_expected_factor() {
    for (n, j) in [(3i64, 1i64), (3, 3), (5, 1), (5, 3)] {
        let pair = EquivariantPair::odd_sphere(n, j, None).unwrap();
        let model = KModel::build(&pair).unwrap();
        let base = pair.total().base().clone();
        let target_dual = base.monomial_index(&[((n - j) / 2) as u32]).unwrap();
        let z = Poly::gen(model.fixed_fiber().ctx(), 0);
        for (s, &(_, k)) in model.section().origins().iter().enumerate() {
            if k == target_dual {
                assert_eq!(model.k_image(s), &z, "x⊗α_(n-j)/2 -> z (n={}, j={})", n, j);
            } else {
                assert!(
                    model.k_image(s).is_zero(),
                    "other generators vanish (n={}, j={})",
                    n,
                    j
                );
            }
        }
        assert!(pi_k_injective_check(&model).injective, "n={}, j={}", n, j);
    }
}

#[test]
fn criterion_08_never_a_rational_homotopy_equivalence() {
    // ψ(x) = z is the pair with j = n; ψ(x) = a z the pair with j = n - 2.
    for (n, j, expect_degree) in [
        (3i64, 3i64, 1i64),
        (3, 1, 3),
        (5, 5, 3),
        (5, 3, 5),
    ] {
        let pair = EquivariantPair::odd_sphere(n, j, None).unwrap();
        let verdict = never_equivalence_check(&pair, true).unwrap();
        assert_eq!(verdict.degree, expect_degree, "n={}, j={}", n, j);
        assert!(verdict.degree > 0);
        // The exhibited element is a single generator here.
        assert_eq!(verdict.element.num_terms(), 1);
        // Preconditions are enforced.
        assert!(never_equivalence_check(&pair, false).is_err());
    }
}

#[test]
fn criterion_09_borel_localization_ranks() {
    // Trivial action on the even two-sphere: fixed set the sphere itself.
    let total = BorelModel::even_sphere(2, q(0), None).unwrap().rel().clone();
    let base = total.base().clone();
    let zg = Generators::new(vec![("z", 2), ("w", 3)]);
    let zp = Poly::gen(&zg, 0);
    let fixed_model = FreeCdga::new(zg.clone(), vec![Poly::zero(&zg), zp.pow(2)]).unwrap();
    let fixed = RelativeSullivan::trivial(base, &fixed_model).unwrap();
    let ctx = fixed.ctx().clone();
    let psi = vec![
        hofix::section::RelPoly::fiber_gen(&ctx, 0),
        hofix::section::RelPoly::fiber_gen(&ctx, 1),
    ];
    let pair = EquivariantPair::new(total, fixed, psi).unwrap();
    let report = localize_check(&pair).unwrap();
    assert_eq!((report.full_even, report.full_odd), (Some(2), Some(0)));
    assert_eq!((report.indec_even, report.indec_odd), (1, 1));
    assert_eq!((report.z_even, report.z_odd), (1, 1));
    assert!(report.quasi_iso);

    // Rotation: fixed set S^0; each component is a point, and the full
    // K-cohomology keeps two even classes.
    let total = BorelModel::even_sphere(2, q(1), None).unwrap().rel().clone();
    let base = total.base().clone();
    let zg = Generators::new(Vec::<(String, i64)>::new());
    let fixed = RelativeSullivan::trivial(base, &FreeCdga::zero_differential(zg)).unwrap();
    let pair = EquivariantPair::zero_psi(total, fixed).unwrap();
    let report = localize_check(&pair).unwrap();
    assert_eq!((report.full_even, report.full_odd), (Some(2), Some(0)));
    assert_eq!((report.indec_even, report.indec_odd), (0, 0));
    assert_eq!((report.z_even, report.z_odd), (0, 0));
    assert!(report.quasi_iso);
}

#[test]
fn criterion_10_property_suites() {
    let start = Instant::now();

    // d-squared and confluence on 200 randomized relative Sullivan
    // instances; the constructor of each section model already certifies
    // that the differential squares to zero.
    let mut rng = Rng::new(0x5EED_0001);
    let mut built = 0;
    let mut twisted = 0;
    while built < 200 {
        let rel = random_relative_sullivan(&mut rng);
        let model = SectionModel::build(&rel, false).expect("d-squared holds");
        let rtl = model.differential_with_strategy(SplitStrategy::RightToLeft);
        for (i, d) in model.cdga().differentials().iter().enumerate() {
            assert_eq!(d, &rtl[i], "confluence on instance {}", built);
        }
        // Coassociativity and the counit laws are checked inside dualize.
        let _ = DualCoalgebra::dualize(rel.base().clone()).expect("coalgebra laws");
        if (0..rel.fiber().len()).any(|v| {
            rel.d_gen(v)
                .terms()
                .any(|(b, _, _)| b != rel.base().unit())
        }) {
            twisted += 1;
        }
        built += 1;
    }
    assert!(twisted > 60, "corpus is too degenerate: {} twisted", twisted);

    // A couple of explicit tables join the dualization corpus.
    let ctx = Generators::new(vec![("a1", 2), ("a2", 4)]);
    let table_alg = FiniteAlgebra::truncate_free(&FreeCdga::zero_differential(ctx), 8).unwrap();
    DualCoalgebra::dualize(Arc::new(table_alg)).expect("coalgebra laws");

    // Multiplication invariants on 1000 randomized homogeneous triples.
    let mut rng = Rng::new(0x5EED_0002);
    for case in 0..1000 {
        let ctx = random_generators(&mut rng, 4, 5);
        let dp = rng.below(6) as i64 + 1;
        let dq = rng.below(6) as i64 + 1;
        let dr = rng.below(6) as i64 + 1;
        let p = random_homogeneous(&mut rng, &ctx, dp, 2);
        let q_ = random_homogeneous(&mut rng, &ctx, dq, 2);
        let r = random_homogeneous(&mut rng, &ctx, dr, 2);
        assert_eq!(
            p.mul(&q_).mul(&r),
            p.mul(&q_.mul(&r)),
            "associativity case {}",
            case
        );
        let sign = if dp % 2 == 1 && dq % 2 == 1 { -1 } else { 1 };
        let flipped = if sign < 0 { q_.mul(&p).neg() } else { q_.mul(&p) };
        assert_eq!(p.mul(&q_), flipped, "graded commutativity case {}", case);
    }

    assert_within("criterion 10", start, 300);
}

#[test]
fn components_agree_between_direct_and_rebased_construction() {
    // The quotient through the rebased fibration matches substituting the
    // retraction scalars directly: spot-check on the twisted even sphere.
    let borel = BorelModel::even_sphere(2, q(1), None).unwrap();
    let rel = borel.rel();
    let model = SectionModel::build(rel, false).unwrap();
    let phis = enumerate_retractions(rel).unwrap();
    for phi in &phis {
        let c = ComponentModel::compute(&model, phi).unwrap();
        // Independent route: substitute scalars into the unrebased
        // differentials and eliminate by hand.
        let ctx = model.cdga().ctx();
        let scalars: Vec<Q> = (0..ctx.len())
            .map(|s| {
                let (v, k) = model.origin(s);
                phi.value(v)[k].clone()
            })
            .collect();
        for (f, &(v, k)) in c.origins().iter().enumerate() {
            let s = model.gen_of(v, k).unwrap();
            let direct = model.cdga().d_gen(s).substitute(c.cdga().ctx(), |g| {
                let (gv, gk) = model.origin(g);
                if ctx.degree(g) < 1 {
                    if ctx.degree(g) == 0 {
                        Poly::constant(c.cdga().ctx(), scalars[g].clone())
                    } else {
                        Poly::zero(c.cdga().ctx())
                    }
                } else {
                    match c.gen_of(gv, gk) {
                        Some(cf) => Poly::gen(c.cdga().ctx(), cf),
                        None => Poly::zero(c.cdga().ctx()),
                    }
                }
            });
            assert_eq!(c.cdga().d_gen(f), &direct);
        }
    }
}
