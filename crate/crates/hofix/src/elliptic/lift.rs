//! Lifting fiber ellipticity witnesses onto component models of section
//! spaces. For a target x ⊗ β with fiber witness (N, Ψ), the candidate is
//! the normal form of Ψ tensored with the dual element whose exponents are
//! those of β scaled by N; its pure differential equals the N-th power of
//! the target up to a remainder in the ideal of preceding generators, and
//! the certification checks that monomial by monomial.

use super::order::Precedence;
use super::pure::pure_part;
use super::witness::EllipticityWitness;
use super::EllipticError;
use crate::algebra::Poly;
use crate::cdga::BasisLabel;
use crate::section::{ComponentModel, RhoReducer, SplitStrategy};

/// A certified lift: the pure differential of `eta` equals
/// `target^exponent + remainder` with the remainder in the ideal of
/// generators preceding the target.
#[derive(Debug, Clone)]
pub struct LiftedWitness {
    pub target: usize,
    pub exponent: u32,
    pub eta: Poly,
    pub remainder: Poly,
}

pub fn lift_witness(
    component: &ComponentModel,
    target: usize,
    base_witness: &EllipticityWitness,
    precedence: &Precedence,
) -> Result<LiftedWitness, EllipticError> {
    let ctx = component.cdga().ctx();
    let (v, k) = component.origin(target);
    assert_eq!(
        base_witness.generator, v,
        "base witness must certify the fiber generator of the target"
    );
    let base = component.rebased_source().base().clone();
    let dual = component.dual().clone();
    let fiber = component.rebased_source().fiber().clone();
    let n = base_witness.exponent;

    // α: the dual element with β's exponents scaled by N.
    let BasisLabel::Monomial(exps) = base.label(k) else {
        return Err(EllipticError::NonMonomialBase);
    };
    let scaled: Vec<u32> = exps.iter().map(|e| e * n).collect();
    let alpha = match base.monomial_index(&scaled) {
        Some(a) => a,
        None => {
            return Err(EllipticError::AlphaOutOfRange {
                gen: ctx.name(target).to_string(),
                needed: dual.underlying_degree(k) * n as i64,
            });
        }
    };

    // η: normal form of Ψ ⊗ α pushed onto the component.
    let section = component.section();
    let reducer = RhoReducer::new(
        &dual,
        &fiber,
        section.cdga().ctx(),
        section.gen_index(),
        SplitStrategy::LeftToRight,
    );
    let mut eta_section = Poly::zero(section.cdga().ctx());
    for (m, c) in base_witness.psi.terms() {
        eta_section = eta_section.add(&reducer.reduce(base.unit(), m, alpha).scale(c));
    }
    let eta = component.project(&eta_section);

    let pure = pure_part(component.cdga());
    let d_eta = pure.as_cdga().apply_d(&eta);
    let power = Poly::gen(ctx, target).pow(n);
    let remainder = d_eta.sub(&power);
    for (m, _) in remainder.terms() {
        let ok = m
            .factors()
            .iter()
            .any(|&(g, _)| precedence.precedes(g as usize, target));
        if !ok {
            return Err(EllipticError::RemainderNotInIdeal {
                gen: ctx.name(target).to_string(),
                monomial: m.display(ctx).to_string(),
            });
        }
    }
    Ok(LiftedWitness {
        target,
        exponent: n,
        eta,
        remainder,
    })
}

/// Lift a witness for every even generator of the component, in precedence
/// order. An empty list certifies components with no even generators.
pub fn certify_component_elliptic(
    component: &ComponentModel,
    fiber_witnesses: &[EllipticityWitness],
) -> Result<Vec<LiftedWitness>, EllipticError> {
    let precedence = Precedence::new(component);
    let mut lifts = Vec::new();
    for target in precedence.sorted_even() {
        let (v, _) = component.origin(target);
        let base_witness = fiber_witnesses
            .iter()
            .find(|w| w.generator == v)
            .ok_or_else(|| EllipticError::MissingBaseWitness {
                gen: component
                    .rebased_source()
                    .fiber()
                    .name(v)
                    .to_string(),
            })?;
        lifts.push(lift_witness(component, target, base_witness, &precedence)?);
    }
    Ok(lifts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generators;
    use crate::cdga::{FiniteAlgebra, FreeCdga};
    use crate::elliptic::witness::{check_elliptic, WitnessConfig, WitnessDifferential};
    use crate::section::{RelativeSullivan, Retraction, SectionModel};
    use std::sync::Arc;

    fn fiber_witnesses(rel: &RelativeSullivan) -> Vec<EllipticityWitness> {
        let verdict = check_elliptic(
            rel.fiber_model(),
            WitnessDifferential::Pure,
            &WitnessConfig::default(),
        )
        .unwrap();
        assert!(verdict.is_elliptic());
        verdict.witnesses().to_vec()
    }

    fn component_of(rel: &RelativeSullivan, phi: &Retraction) -> ComponentModel {
        let s = SectionModel::build(rel, false).unwrap();
        ComponentModel::compute(&s, phi).unwrap()
    }

    #[test]
    fn odd_sphere_component_certifies_vacuously() {
        let base_ctx = Generators::new(vec![("a", 2)]);
        let base = Arc::new(
            FiniteAlgebra::truncate_free(&FreeCdga::zero_differential(base_ctx), 4).unwrap(),
        );
        let fiber = Generators::new(vec![("x", 3)]);
        let rel =
            RelativeSullivan::trivial(base, &FreeCdga::zero_differential(fiber)).unwrap();
        let c = component_of(&rel, &Retraction::zero(&rel));
        let lifts = certify_component_elliptic(&c, &[]).unwrap();
        assert!(lifts.is_empty());
    }

    #[test]
    fn trivial_even_sphere_lifts_with_zero_remainder() {
        let rel = crate::section::fixtures::even_sphere_borel(4, 0, 8);
        let c = component_of(&rel, &Retraction::zero(&rel));
        let ws = fiber_witnesses(&rel);
        let lifts = certify_component_elliptic(&c, &ws).unwrap();
        assert_eq!(lifts.len(), 2); // x<1> and x<a>
        for l in &lifts {
            assert!(l.remainder.is_zero());
            assert_eq!(l.exponent, 2);
        }
    }

    #[test]
    fn twisted_even_sphere_remainder_lands_in_preceding_ideal() {
        let rel = crate::section::fixtures::even_sphere_borel(4, 1, 8);
        let c = component_of(&rel, &Retraction::zero(&rel));
        let ws = fiber_witnesses(&rel);
        let prec = Precedence::new(&c);
        let x_a = c.gen_of(0, 1).unwrap();
        let x_1 = c.gen_of(0, 0).unwrap();
        let w = ws.iter().find(|w| w.generator == 0).unwrap();
        let lift = lift_witness(&c, x_a, w, &prec).unwrap();
        // d(y<a^2>) = (x<a>)^2 + x<1> in the component, so the remainder is
        // exactly x<1>, which precedes x<a>.
        let expect = Poly::gen(c.cdga().ctx(), x_1);
        assert_eq!(lift.remainder, expect);
        assert!(prec.precedes(x_1, x_a));
        // And the full certification succeeds.
        let lifts = certify_component_elliptic(&c, &ws).unwrap();
        assert_eq!(lifts.len(), 2);
    }

    #[test]
    fn eta_matches_dual_scaling() {
        let rel = crate::section::fixtures::even_sphere_borel(4, 0, 8);
        let c = component_of(&rel, &Retraction::zero(&rel));
        let ws = fiber_witnesses(&rel);
        let prec = Precedence::new(&c);
        let x_a = c.gen_of(0, 1).unwrap();
        let w = ws.iter().find(|w| w.generator == 0).unwrap();
        let lift = lift_witness(&c, x_a, w, &prec).unwrap();
        // Ψ = y, β = a#, N = 2: η = y<a^2>.
        let y_a2 = c.gen_of(1, 2).unwrap();
        assert_eq!(lift.eta, Poly::gen(c.cdga().ctx(), y_a2));
    }

    #[test]
    fn alpha_out_of_range_signals_truncation() {
        // Fiber x(4), y(11) with dy = x^3 needs α = (a^3)# for the target
        // x<a>, but the base is truncated at degree 4.
        let base_ctx = Generators::new(vec![("a", 2)]);
        let base = Arc::new(
            FiniteAlgebra::truncate_free(&FreeCdga::zero_differential(base_ctx), 4).unwrap(),
        );
        let fiber = Generators::new(vec![("x", 4), ("y", 11)]);
        let ctx = crate::section::RelCtx::new(base.clone(), fiber.clone());
        let x = crate::section::RelPoly::fiber_gen(&ctx, 0);
        let rel = RelativeSullivan::new(
            base,
            fiber,
            vec![crate::section::RelPoly::zero(&ctx), x.pow(3)],
        )
        .unwrap();
        let c = component_of(&rel, &Retraction::zero(&rel));
        let ws = fiber_witnesses(&rel);
        let err = certify_component_elliptic(&c, &ws).unwrap_err();
        assert!(matches!(err, EllipticError::AlphaOutOfRange { needed: 6, .. }));
    }

    #[test]
    fn larger_truncation_fixes_alpha_range() {
        let base_ctx = Generators::new(vec![("a", 2)]);
        let base = Arc::new(
            FiniteAlgebra::truncate_free(&FreeCdga::zero_differential(base_ctx), 12).unwrap(),
        );
        let fiber = Generators::new(vec![("x", 4), ("y", 11)]);
        let ctx = crate::section::RelCtx::new(base.clone(), fiber.clone());
        let x = crate::section::RelPoly::fiber_gen(&ctx, 0);
        let rel = RelativeSullivan::new(
            base,
            fiber,
            vec![crate::section::RelPoly::zero(&ctx), x.pow(3)],
        )
        .unwrap();
        let c = component_of(&rel, &Retraction::zero(&rel));
        let ws = fiber_witnesses(&rel);
        let lifts = certify_component_elliptic(&c, &ws).unwrap();
        // x<1>, x<a>, and x<a^2>..x<a...> as long as degrees stay positive:
        // 4, 2 are the positive even ones... degree 4-2i > 0 for i in {0,1}.
        assert_eq!(lifts.len(), 2);
        for l in &lifts {
            assert_eq!(l.exponent, 3);
        }
    }

    #[test]
    fn missing_base_witness_reported() {
        let rel = crate::section::fixtures::even_sphere_borel(2, 0, 4);
        let c = component_of(&rel, &Retraction::zero(&rel));
        let err = certify_component_elliptic(&c, &[]).unwrap_err();
        assert!(matches!(err, EllipticError::MissingBaseWitness { .. }));
    }
}
