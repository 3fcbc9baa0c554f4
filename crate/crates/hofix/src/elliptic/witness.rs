//! Nilpotence witnesses for even generators: the least exponent N with
//! dΨ = v^N + Θ where every monomial of Θ contains an earlier generator.
//! Finding one for every even generator certifies finite-dimensional
//! cohomology; failing up to the cap is reported as inconclusive, never as
//! a negative verdict.

use super::{pure_part, EllipticError};
use crate::algebra::{Monomial, Poly};
use crate::cdga::{enumerate_monomials, FreeCdga};
use crate::linalg::{solve_membership, Membership};
use crate::section::{triangular_order_of, SectionError};
use num_traits::Zero;

/// Which differential certified a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessDifferential {
    Full,
    Pure,
}

#[derive(Debug, Clone)]
pub struct WitnessConfig {
    /// Largest exponent tried per generator.
    pub n_cap: u32,
    /// Largest polynomial degree searched.
    pub degree_bound: i64,
}

impl Default for WitnessConfig {
    fn default() -> WitnessConfig {
        WitnessConfig {
            n_cap: 16,
            degree_bound: 64,
        }
    }
}

/// A certificate dΨ = v^N + Θ with Θ in the ideal of generators preceding
/// v in the triangular order used by the search.
#[derive(Debug, Clone)]
pub struct EllipticityWitness {
    pub generator: usize,
    pub exponent: u32,
    pub psi: Poly,
    pub theta: Poly,
    pub differential: WitnessDifferential,
}

#[derive(Debug, Clone)]
pub enum EllipticityVerdict {
    Elliptic(Vec<EllipticityWitness>),
    /// Some even generators found no witness up to the cap. Witnesses that
    /// were found are kept; the tool never claims hyperbolicity.
    Inconclusive {
        witnesses: Vec<EllipticityWitness>,
        failed: Vec<usize>,
    },
}

impl EllipticityVerdict {
    pub fn is_elliptic(&self) -> bool {
        matches!(self, EllipticityVerdict::Elliptic(_))
    }

    pub fn witnesses(&self) -> &[EllipticityWitness] {
        match self {
            EllipticityVerdict::Elliptic(w) => w,
            EllipticityVerdict::Inconclusive { witnesses, .. } => witnesses,
        }
    }
}

/// Search using the differential the CDGA already carries.
pub fn find_witnesses(
    cdga: &FreeCdga,
    config: &WitnessConfig,
) -> Result<EllipticityVerdict, EllipticError> {
    find_with(cdga, config, WitnessDifferential::Full)
}

/// Search after replacing the differential by its pure part (`Pure`), or
/// as-is (`Full`). The witness records which differential certified it.
pub fn check_elliptic(
    cdga: &FreeCdga,
    which: WitnessDifferential,
    config: &WitnessConfig,
) -> Result<EllipticityVerdict, EllipticError> {
    match which {
        WitnessDifferential::Full => find_with(cdga, config, which),
        WitnessDifferential::Pure => find_with(pure_part(cdga).as_cdga(), config, which),
    }
}

fn find_with(
    cdga: &FreeCdga,
    config: &WitnessConfig,
    which: WitnessDifferential,
) -> Result<EllipticityVerdict, EllipticError> {
    let ctx = cdga.ctx();
    for (_, g) in ctx.iter() {
        if g.degree <= 0 {
            return Err(EllipticError::NonPositiveGenerator {
                gen: g.name.clone(),
            });
        }
    }
    let order = triangular_order_of(cdga).map_err(|e| match e {
        SectionError::CyclicDifferential => EllipticError::NonTriangular,
        _ => EllipticError::NonTriangular,
    })?;
    let position: Vec<usize> = {
        let mut pos = vec![0usize; ctx.len()];
        for (p, &g) in order.iter().enumerate() {
            pos[g] = p;
        }
        pos
    };

    let mut witnesses = Vec::new();
    let mut failed = Vec::new();
    for &v in &order {
        if ctx.is_odd(v) {
            continue;
        }
        match witness_for(cdga, &order, &position, v, config, which) {
            Some(w) => witnesses.push(w),
            None => failed.push(v),
        }
    }
    witnesses.sort_by_key(|w| w.generator);
    failed.sort_unstable();
    if failed.is_empty() {
        Ok(EllipticityVerdict::Elliptic(witnesses))
    } else {
        Ok(EllipticityVerdict::Inconclusive { witnesses, failed })
    }
}

fn witness_for(
    cdga: &FreeCdga,
    order: &[usize],
    position: &[usize],
    v: usize,
    config: &WitnessConfig,
    which: WitnessDifferential,
) -> Option<EllipticityWitness> {
    let ctx = cdga.ctx();
    let earlier: Vec<usize> = order
        .iter()
        .copied()
        .take_while(|&g| g != v)
        .collect();
    let contains_earlier = |m: &Monomial| {
        m.factors()
            .iter()
            .any(|&(g, _)| position[g as usize] < position[v])
    };
    let _ = &earlier;
    for n in 1..=config.n_cap {
        let degree = ctx.degree(v) * n as i64;
        if degree > config.degree_bound {
            break;
        }
        let target = Poly::gen(ctx, v).pow(n);
        // Span: exact differentials of one degree lower, then the monomials
        // containing a generator earlier in the order.
        let mut span: Vec<Poly> = Vec::new();
        let mut psis: Vec<Monomial> = Vec::new();
        for m in enumerate_monomials(ctx, degree - 1) {
            let dm = cdga.apply_d(&Poly::monomial(ctx, m.clone(), crate::algebra::q(1)));
            if !dm.is_zero() {
                span.push(dm);
                psis.push(m);
            }
        }
        let d_count = span.len();
        let ideal: Vec<Monomial> = enumerate_monomials(ctx, degree)
            .into_iter()
            .filter(contains_earlier)
            .collect();
        for m in &ideal {
            span.push(Poly::monomial(ctx, m.clone(), crate::algebra::q(1)));
        }
        match solve_membership(&target, &span).expect("homogeneous by construction") {
            Membership::Absent => continue,
            Membership::Coefficients(cs) => {
                let mut psi = Poly::zero(ctx);
                for (c, m) in cs[..d_count].iter().zip(&psis) {
                    if !c.is_zero() {
                        psi = psi.add(&Poly::monomial(ctx, m.clone(), c.clone()));
                    }
                }
                let theta = cdga.apply_d(&psi).sub(&target);
                debug_assert!(theta.terms().all(|(m, _)| contains_earlier(m)));
                return Some(EllipticityWitness {
                    generator: v,
                    exponent: n,
                    psi,
                    theta,
                    differential: which,
                });
            }
        }
    }
    None
}

/// Re-verify a witness by direct substitution: dΨ - v^N must have every
/// monomial containing a generator earlier in the given order.
pub fn verify_witness(
    cdga: &FreeCdga,
    order: &[usize],
    w: &EllipticityWitness,
) -> bool {
    let ctx = cdga.ctx();
    let position: Vec<usize> = {
        let mut pos = vec![0usize; ctx.len()];
        for (p, &g) in order.iter().enumerate() {
            pos[g] = p;
        }
        pos
    };
    let target = Poly::gen(ctx, w.generator).pow(w.exponent);
    let diff = cdga.apply_d(&w.psi).sub(&target);
    if diff != w.theta {
        return false;
    }
    let in_ideal = diff.terms().all(|(m, _)| {
        m.factors()
            .iter()
            .any(|&(g, _)| position[g as usize] < position[w.generator])
    });
    in_ideal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generators;

    fn sphere(n: i64) -> FreeCdga {
        let ctx = Generators::new(vec![("x", n), ("y", 2 * n - 1)]);
        let x = Poly::gen(&ctx, 0);
        FreeCdga::new(ctx.clone(), vec![Poly::zero(&ctx), x.pow(2)]).unwrap()
    }

    #[test]
    fn even_sphere_witness_is_forced() {
        let s = sphere(2);
        let verdict = find_witnesses(&s, &WitnessConfig::default()).unwrap();
        let EllipticityVerdict::Elliptic(ws) = verdict else {
            panic!("expected elliptic");
        };
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].exponent, 2);
        assert_eq!(ws[0].psi, Poly::gen(s.ctx(), 1));
        assert!(ws[0].theta.is_zero());
        assert!(verify_witness(&s, &[0, 1], &ws[0]));
    }

    #[test]
    fn projective_space_witness() {
        for n in 2..=4u32 {
            let ctx = Generators::new(vec![("x", 2), ("y", 2 * n as i64 + 1)]);
            let x = Poly::gen(&ctx, 0);
            let cp = FreeCdga::new(ctx.clone(), vec![Poly::zero(&ctx), x.pow(n + 1)]).unwrap();
            let verdict = find_witnesses(&cp, &WitnessConfig::default()).unwrap();
            let EllipticityVerdict::Elliptic(ws) = verdict else {
                panic!("expected elliptic");
            };
            assert_eq!(ws[0].exponent, n + 1);
        }
    }

    #[test]
    fn polynomial_generator_is_inconclusive() {
        let ctx = Generators::new(vec![("x", 2)]);
        let free = FreeCdga::zero_differential(ctx);
        let verdict = find_witnesses(&free, &WitnessConfig::default()).unwrap();
        let EllipticityVerdict::Inconclusive { failed, .. } = verdict else {
            panic!("expected inconclusive");
        };
        assert_eq!(failed, vec![0]);
    }

    #[test]
    fn pure_and_full_agree_on_pure_models() {
        let s = sphere(4);
        let full = check_elliptic(&s, WitnessDifferential::Full, &WitnessConfig::default())
            .unwrap();
        let pure = check_elliptic(&s, WitnessDifferential::Pure, &WitnessConfig::default())
            .unwrap();
        assert!(full.is_elliptic() && pure.is_elliptic());
    }

    #[test]
    fn theta_lands_in_earlier_ideal() {
        // Λ(x2, x4, y, z) with dy = x2^2, dz = x4^2 + 5 x2^2 x4: the witness
        // for x4 needs a theta with an x2 factor.
        let ctx = Generators::new(vec![("x2", 2), ("x4", 4), ("y", 3), ("z", 7)]);
        let x2 = Poly::gen(&ctx, 0);
        let x4 = Poly::gen(&ctx, 1);
        let cdga = FreeCdga::new(
            ctx.clone(),
            vec![
                Poly::zero(&ctx),
                Poly::zero(&ctx),
                x2.pow(2),
                x4.pow(2)
                    .add(&x2.pow(2).mul(&x4).scale(&crate::algebra::q(5))),
            ],
        )
        .unwrap();
        let verdict = find_witnesses(&cdga, &WitnessConfig::default()).unwrap();
        assert!(verdict.is_elliptic());
        let w4 = verdict
            .witnesses()
            .iter()
            .find(|w| w.generator == 1)
            .unwrap();
        assert_eq!(w4.exponent, 2);
        assert!(w4.theta.terms().all(|(m, _)| m.contains(0)));
        assert!(verify_witness(&cdga, &[0, 1, 2, 3], w4));
    }

    #[test]
    fn degree_bound_stops_search() {
        let ctx = Generators::new(vec![("x", 2)]);
        let free = FreeCdga::zero_differential(ctx);
        let config = WitnessConfig {
            n_cap: 1000,
            degree_bound: 10,
        };
        let verdict = find_witnesses(&free, &config).unwrap();
        assert!(!verdict.is_elliptic());
    }
}
