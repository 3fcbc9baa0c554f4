//! Relative Sullivan algebras A ⊗ ΛV over a finite evenly graded base, and
//! exact arithmetic in them. Elements are stored as linear combinations of
//! (base basis element, fiber monomial) pairs; base products go through the
//! base's multiplication table, fiber products through the Koszul rules.

use super::SectionError;
use crate::algebra::{Generators, Monomial, Poly, Q};
use crate::cdga::{FiniteAlgebra, FreeCdga};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

static NEXT_REL_ID: AtomicU64 = AtomicU64::new(1);

/// Shared context of a relative algebra: the base and the fiber generators.
#[derive(Debug)]
pub struct RelCtx {
    id: u64,
    base: Arc<FiniteAlgebra>,
    fiber: Arc<Generators>,
}

impl RelCtx {
    pub fn new(base: Arc<FiniteAlgebra>, fiber: Arc<Generators>) -> Arc<RelCtx> {
        Arc::new(RelCtx {
            id: NEXT_REL_ID.fetch_add(1, AtomicOrdering::Relaxed),
            base,
            fiber,
        })
    }

    pub fn base(&self) -> &Arc<FiniteAlgebra> {
        &self.base
    }

    pub fn fiber(&self) -> &Arc<Generators> {
        &self.fiber
    }
}

/// An element of A ⊗ ΛV.
#[derive(Clone)]
pub struct RelPoly {
    ctx: Arc<RelCtx>,
    /// (base basis index, fiber monomial) -> coefficient.
    terms: BTreeMap<(usize, Monomial), Q>,
}

impl RelPoly {
    pub fn zero(ctx: &Arc<RelCtx>) -> RelPoly {
        RelPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<RelCtx>) -> RelPoly {
        let mut p = RelPoly::zero(ctx);
        p.add_term(ctx.base.unit(), Monomial::one(), crate::algebra::q(1));
        p
    }

    pub fn base_elem(ctx: &Arc<RelCtx>, i: usize) -> RelPoly {
        let mut p = RelPoly::zero(ctx);
        p.add_term(i, Monomial::one(), crate::algebra::q(1));
        p
    }

    pub fn fiber_gen(ctx: &Arc<RelCtx>, v: usize) -> RelPoly {
        let mut p = RelPoly::zero(ctx);
        p.add_term(ctx.base.unit(), Monomial::gen(&ctx.fiber, v), crate::algebra::q(1));
        p
    }

    /// Element of A (coefficients over the base basis) viewed in A ⊗ ΛV.
    pub fn from_base_vec(ctx: &Arc<RelCtx>, v: &[Q]) -> RelPoly {
        let mut p = RelPoly::zero(ctx);
        for (i, c) in v.iter().enumerate() {
            p.add_term(i, Monomial::one(), c.clone());
        }
        p
    }

    pub fn ctx(&self) -> &Arc<RelCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Monomial, &Q)> {
        self.terms.iter().map(|((b, m), c)| (*b, m, c))
    }

    pub fn add_term(&mut self, base: usize, mono: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((base, mono)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_ctx(&self, other: &RelPoly) {
        assert!(
            self.ctx.id == other.ctx.id,
            "mixing elements of different relative algebras"
        );
    }

    pub fn add(&self, other: &RelPoly) -> RelPoly {
        self.check_ctx(other);
        let mut out = self.clone();
        for ((b, m), c) in &other.terms {
            out.add_term(*b, m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &RelPoly) -> RelPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RelPoly {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.clone(), -c))
            .collect();
        RelPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &Q) -> RelPoly {
        if c.is_zero() {
            return RelPoly::zero(&self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), v * c))
            .collect();
        RelPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Product. Base elements are even, so they move freely past fiber
    /// letters; the only signs come from the fiber Koszul rule.
    pub fn mul(&self, other: &RelPoly) -> RelPoly {
        self.check_ctx(other);
        let base = &self.ctx.base;
        let mut out = RelPoly::zero(&self.ctx);
        for ((b1, m1), c1) in &self.terms {
            for ((b2, m2), c2) in &other.terms {
                let Some((m, sign)) = m1.mul(m2, &self.ctx.fiber) else {
                    continue;
                };
                let c = c1 * c2;
                let c = if sign < 0 { -c } else { c };
                for (k, t) in base.product(*b1, *b2).iter().enumerate() {
                    if !t.is_zero() {
                        out.add_term(k, m.clone(), t * &c);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> RelPoly {
        let mut out = RelPoly::one(&self.ctx);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// True when every term has total degree `d`.
    pub fn is_homogeneous_of_degree(&self, d: i64) -> bool {
        self.terms
            .keys()
            .all(|(b, m)| self.ctx.base.degree(*b) + m.degree() == d)
    }

    /// Coefficient of the unit base element: the image in ΛV under the
    /// augmentation A -> Q.
    pub fn fiber_projection(&self) -> Poly {
        let unit = self.ctx.base.unit();
        Poly::from_terms(
            &self.ctx.fiber,
            self.terms
                .iter()
                .filter(|((b, _), _)| *b == unit)
                .map(|((_, m), c)| (m.clone(), c.clone()))
                .collect(),
        )
    }

    /// Part with no fiber letters, as a coefficient vector over the base.
    pub fn base_part(&self) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.ctx.base.dim()];
        for ((b, m), c) in &self.terms {
            if m.is_one() {
                out[*b] = &out[*b] + c;
            }
        }
        out
    }

    /// Substitute every fiber letter by the given element, extending as an
    /// algebra map that is the identity on the base. Images must preserve
    /// degree and parity.
    pub fn substitute_fiber(&self, image: impl Fn(usize) -> RelPoly) -> RelPoly {
        let mut out = RelPoly::zero(&self.ctx);
        for ((b, m), c) in &self.terms {
            let mut acc = RelPoly::base_elem(&self.ctx, *b).scale(c);
            for &(g, e) in m.factors() {
                let img = image(g as usize);
                for _ in 0..e {
                    acc = acc.mul(&img);
                }
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }
}

impl PartialEq for RelPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id == other.ctx.id && self.terms == other.terms
    }
}

impl Eq for RelPoly {}

impl fmt::Display for RelPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_traits::Signed;
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let unit = self.ctx.base.unit();
        let mut first = true;
        for ((b, m), c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            use num_traits::One;
            let mut pieces: Vec<String> = Vec::new();
            if !abs.is_one() || (*b == unit && m.is_one()) {
                pieces.push(abs.to_string());
            }
            if *b != unit {
                pieces.push(self.ctx.base.label_string(*b));
            }
            if !m.is_one() {
                pieces.push(m.display(&self.ctx.fiber).to_string());
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RelPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RelPoly({})", self)
    }
}

/// A relative Sullivan algebra (A ⊗ ΛV, D) with finite evenly graded base
/// of zero differential and connected fiber. Construction verifies D^2 = 0
/// and extracts the fiber model (ΛV, d) by projecting the base to Q.
#[derive(Debug, Clone)]
pub struct RelativeSullivan {
    ctx: Arc<RelCtx>,
    diff: Vec<RelPoly>,
    fiber_model: FreeCdga,
}

impl RelativeSullivan {
    pub fn new(
        base: Arc<FiniteAlgebra>,
        fiber: Arc<Generators>,
        diff: Vec<RelPoly>,
    ) -> Result<RelativeSullivan, SectionError> {
        if !base.is_evenly_graded() {
            return Err(SectionError::OddBase);
        }
        if !base.differential_is_zero() {
            return Err(SectionError::BaseDifferential);
        }
        for (_, g) in fiber.iter() {
            if g.degree < 1 {
                return Err(SectionError::FiberDegree {
                    gen: g.name.clone(),
                });
            }
        }
        assert_eq!(diff.len(), fiber.len(), "one differential per fiber generator");
        let ctx = diff
            .first()
            .map(|p| p.ctx().clone())
            .unwrap_or_else(|| RelCtx::new(base.clone(), fiber.clone()));
        for (i, g) in fiber.iter() {
            if !diff[i].is_homogeneous_of_degree(g.degree + 1) {
                return Err(SectionError::DifferentialDegree {
                    gen: g.name.clone(),
                    expected: g.degree + 1,
                });
            }
        }
        let rel = RelativeSullivan {
            ctx,
            diff,
            // Placeholder; replaced below once D^2 = 0 is confirmed.
            fiber_model: FreeCdga::zero_differential(fiber.clone()),
        };
        for (i, g) in fiber.iter() {
            if !rel.apply_d(&rel.diff[i]).is_zero() {
                return Err(SectionError::DifferentialSquare {
                    gen: g.name.clone(),
                });
            }
        }
        let fiber_diff: Vec<Poly> = rel.diff.iter().map(RelPoly::fiber_projection).collect();
        let fiber_model = FreeCdga::new(fiber.clone(), fiber_diff)?;
        Ok(RelativeSullivan { fiber_model, ..rel })
    }

    /// Trivial relative algebra: D is the fiber differential, no base terms.
    pub fn trivial(
        base: Arc<FiniteAlgebra>,
        fiber_model: &FreeCdga,
    ) -> Result<RelativeSullivan, SectionError> {
        let fiber = fiber_model.ctx().clone();
        let ctx = RelCtx::new(base, fiber.clone());
        let diff = fiber_model
            .differentials()
            .iter()
            .map(|p| lift_fiber_poly(&ctx, p))
            .collect();
        RelativeSullivan::new(ctx.base().clone(), fiber, diff)
    }

    pub fn ctx(&self) -> &Arc<RelCtx> {
        &self.ctx
    }

    pub fn base(&self) -> &Arc<FiniteAlgebra> {
        self.ctx.base()
    }

    pub fn fiber(&self) -> &Arc<Generators> {
        self.ctx.fiber()
    }

    pub fn d_gen(&self, v: usize) -> &RelPoly {
        &self.diff[v]
    }

    /// The fiber model (ΛV, d) obtained by projecting the base to Q.
    pub fn fiber_model(&self) -> &FreeCdga {
        &self.fiber_model
    }

    /// Leibniz extension of D. The base has zero differential, so base
    /// coefficients pass through.
    pub fn apply_d(&self, p: &RelPoly) -> RelPoly {
        let mut out = RelPoly::zero(&self.ctx);
        for (b, m, c) in p.terms() {
            let dm = self.d_monomial(m);
            out = out.add(&RelPoly::base_elem(&self.ctx, b).mul(&dm).scale(c));
        }
        out
    }

    fn d_monomial(&self, m: &Monomial) -> RelPoly {
        let fiber = self.ctx.fiber();
        let Some((g, rest)) = m.split_first(fiber) else {
            return RelPoly::zero(&self.ctx);
        };
        let rest_rel = lift_fiber_mono(&self.ctx, &rest);
        let mut out = self.diff[g].mul(&rest_rel);
        let tail = self.d_monomial(&rest);
        if !tail.is_zero() {
            let g_rel = RelPoly::fiber_gen(&self.ctx, g);
            let signed = if fiber.is_odd(g) {
                g_rel.mul(&tail).neg()
            } else {
                g_rel.mul(&tail)
            };
            out = out.add(&signed);
        }
        out
    }

    /// Whether the zero assignment is a retraction, i.e. DV ⊂ A ⊗ Λ⁺V.
    pub fn zero_retraction_valid(&self) -> bool {
        self.diff
            .iter()
            .all(|p| p.base_part().iter().all(Q::is_zero))
    }
}

/// View a fiber polynomial inside A ⊗ ΛV.
pub fn lift_fiber_poly(ctx: &Arc<RelCtx>, p: &Poly) -> RelPoly {
    let mut out = RelPoly::zero(ctx);
    for (m, c) in p.terms() {
        out.add_term(ctx.base().unit(), m.clone(), c.clone());
    }
    out
}

fn lift_fiber_mono(ctx: &Arc<RelCtx>, m: &Monomial) -> RelPoly {
    let mut out = RelPoly::zero(ctx);
    out.add_term(ctx.base().unit(), m.clone(), crate::algebra::q(1));
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::q;

    pub(crate) fn even_sphere_borel(n: i64, lambda: i64, trunc: i64) -> RelativeSullivan {
        let base_ctx = Generators::new(vec![("a", 2)]);
        let base = Arc::new(
            FiniteAlgebra::truncate_free(&FreeCdga::zero_differential(base_ctx), trunc).unwrap(),
        );
        let fiber = Generators::new(vec![("x", n), ("y", 2 * n - 1)]);
        let ctx = RelCtx::new(base.clone(), fiber.clone());
        let x = RelPoly::fiber_gen(&ctx, 0);
        let a_half = base.monomial_index(&[(n / 2) as u32]).unwrap();
        let dy = x.pow(2).add(
            &RelPoly::base_elem(&ctx, a_half)
                .mul(&x)
                .scale(&q(lambda)),
        );
        RelativeSullivan::new(base, fiber, vec![RelPoly::zero(&ctx), dy]).unwrap()
    }

    #[test]
    fn even_sphere_differential_squares_to_zero() {
        let rel = even_sphere_borel(2, 1, 4);
        let dy = rel.d_gen(1);
        assert!(rel.apply_d(dy).is_zero());
        assert!(dy.is_homogeneous_of_degree(4));
    }

    #[test]
    fn fiber_projection_recovers_sphere_model() {
        let rel = even_sphere_borel(2, 1, 4);
        let fiber = rel.fiber_model();
        let x = Poly::gen(fiber.ctx(), 0);
        assert_eq!(fiber.d_gen(1), &x.pow(2));
        assert!(fiber.d_gen(0).is_zero());
    }

    #[test]
    fn base_truncation_kills_high_products() {
        let rel = even_sphere_borel(2, 1, 4);
        let ctx = rel.ctx();
        let a = RelPoly::base_elem(ctx, 1);
        assert!(a.pow(3).is_zero());
        assert!(!a.pow(2).is_zero());
    }

    #[test]
    fn zero_retraction_detects_pure_base_terms() {
        let rel = even_sphere_borel(2, 1, 4);
        assert!(rel.zero_retraction_valid());

        // Dy = a^2 has a pure base term.
        let base_ctx = Generators::new(vec![("a", 2)]);
        let base = Arc::new(
            FiniteAlgebra::truncate_free(&FreeCdga::zero_differential(base_ctx), 4).unwrap(),
        );
        let fiber = Generators::new(vec![("y", 3)]);
        let ctx = RelCtx::new(base.clone(), fiber.clone());
        let a2 = base.monomial_index(&[2]).unwrap();
        let rel = RelativeSullivan::new(
            base.clone(),
            fiber,
            vec![RelPoly::base_elem(&ctx, a2)],
        )
        .unwrap();
        assert!(!rel.zero_retraction_valid());
    }

    #[test]
    fn odd_base_rejected() {
        let base_labels = vec![
            crate::cdga::BasisLabel::Named("one".into()),
            crate::cdga::BasisLabel::Named("t".into()),
        ];
        let mut table = vec![vec![vec![Q::zero(); 2]; 2]; 2];
        table[0][0][0] = q(1);
        table[0][1][1] = q(1);
        table[1][0][1] = q(1);
        // t odd: t*t = -t*t forces zero.
        let base = Arc::new(
            FiniteAlgebra::new(Vec::new(), base_labels, vec![0, 3], 0, table, None).unwrap(),
        );
        let fiber = Generators::new(vec![("x", 3)]);
        let ctx = RelCtx::new(base.clone(), fiber.clone());
        let r = RelativeSullivan::new(base, fiber, vec![RelPoly::zero(&ctx)]);
        assert!(matches!(r, Err(SectionError::OddBase)));
    }
}
