//! The free CDGA on generators v ⊗ β modeling the space of sections of a
//! fibration with finite evenly graded base, together with its pointed
//! variant.

use super::relative::RelativeSullivan;
use super::rho::{RhoReducer, SplitStrategy};
use super::SectionError;
use crate::algebra::{Generators, Poly};
use crate::cdga::{DualCoalgebra, FreeCdga};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Free CDGA on the generators v ⊗ β with the induced differential. The
/// degree of v ⊗ β is |v| minus the degree of the underlying basis element
/// of β; construction checks that the differential squares to zero on every
/// generator.
#[derive(Debug, Clone)]
pub struct SectionModel {
    cdga: FreeCdga,
    /// Section ordinal -> (fiber generator, dual index).
    origin: Vec<(usize, usize)>,
    gen_index: BTreeMap<(usize, usize), usize>,
    source: RelativeSullivan,
    dual: Arc<DualCoalgebra>,
    pointed: bool,
}

impl SectionModel {
    pub fn build(source: &RelativeSullivan, pointed: bool) -> Result<SectionModel, SectionError> {
        let dual = Arc::new(DualCoalgebra::dualize(source.base().clone())?);
        let fiber = source.fiber().clone();
        let unit = dual.counit_index();

        let mut names: Vec<(String, i64)> = Vec::new();
        let mut origin: Vec<(usize, usize)> = Vec::new();
        for (v, g) in fiber.iter() {
            for k in 0..dual.dim() {
                if pointed && k == unit {
                    continue;
                }
                let name = format!("{}<{}>", g.name, source.base().label_string(k));
                names.push((name, g.degree - dual.underlying_degree(k)));
                origin.push((v, k));
            }
        }
        let section = Generators::new(names);
        let gen_index: BTreeMap<(usize, usize), usize> = origin
            .iter()
            .enumerate()
            .map(|(s, &(v, k))| ((v, k), s))
            .collect();

        let reducer = RhoReducer::new(
            &dual,
            &fiber,
            &section,
            &gen_index,
            SplitStrategy::LeftToRight,
        );
        let mut diff = Vec::with_capacity(origin.len());
        for &(v, k) in &origin {
            let mut d = Poly::zero(&section);
            for (b, w, c) in source.d_gen(v).terms() {
                d = d.add(&reducer.reduce(b, w, k).scale(c));
            }
            diff.push(d);
        }
        let cdga = FreeCdga::new(section, diff)?;
        Ok(SectionModel {
            cdga,
            origin,
            gen_index,
            source: source.clone(),
            dual,
            pointed,
        })
    }

    pub fn cdga(&self) -> &FreeCdga {
        &self.cdga
    }

    pub fn pointed(&self) -> bool {
        self.pointed
    }

    pub fn source(&self) -> &RelativeSullivan {
        &self.source
    }

    pub fn dual(&self) -> &Arc<DualCoalgebra> {
        &self.dual
    }

    /// (fiber generator, dual index) of a section generator.
    pub fn origin(&self, s: usize) -> (usize, usize) {
        self.origin[s]
    }

    pub fn origins(&self) -> &[(usize, usize)] {
        &self.origin
    }

    pub fn gen_of(&self, fiber_gen: usize, dual_idx: usize) -> Option<usize> {
        self.gen_index.get(&(fiber_gen, dual_idx)).copied()
    }

    pub(crate) fn gen_index(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.gen_index
    }

    /// Rerun the differential computation with the opposite splitting
    /// strategy; used by confluence checks.
    pub fn differential_with_strategy(&self, strategy: SplitStrategy) -> Vec<Poly> {
        let reducer = RhoReducer::new(
            &self.dual,
            self.source.fiber(),
            self.cdga.ctx(),
            &self.gen_index,
            strategy,
        );
        self.origin
            .iter()
            .map(|&(v, k)| {
                let mut d = Poly::zero(self.cdga.ctx());
                for (b, w, c) in self.source.d_gen(v).terms() {
                    d = d.add(&reducer.reduce(b, w, k).scale(c));
                }
                d
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, Monomial};
    use crate::cdga::FiniteAlgebra;
    use crate::section::rho::oracle;

    fn truncated_base(n: i64) -> Arc<FiniteAlgebra> {
        let ctx = Generators::new(vec![("a", 2)]);
        Arc::new(FiniteAlgebra::truncate_free(&FreeCdga::zero_differential(ctx), n).unwrap())
    }

    /// Odd sphere with a circle base: everything has zero differential.
    fn odd_sphere_model(n: i64, trunc: i64) -> SectionModel {
        let base = truncated_base(trunc);
        let fiber = Generators::new(vec![("x", n)]);
        let fiber_model = FreeCdga::zero_differential(fiber);
        let rel = RelativeSullivan::trivial(base, &fiber_model).unwrap();
        SectionModel::build(&rel, false).unwrap()
    }

    #[test]
    fn odd_sphere_generators_and_degrees() {
        let s = odd_sphere_model(3, 4);
        let ctx = s.cdga().ctx();
        let degrees: Vec<i64> = (0..ctx.len()).map(|i| ctx.degree(i)).collect();
        assert_eq!(degrees, vec![3, 1, -1]);
        assert!(s.cdga().differentials().iter().all(Poly::is_zero));
        assert_eq!(ctx.name(0), "x<1>");
        assert_eq!(ctx.name(1), "x<a>");
        assert_eq!(ctx.name(2), "x<a^2>");
    }

    #[test]
    fn point_base_returns_fiber_model() {
        let base = Arc::new(FiniteAlgebra::rationals());
        let fiber = Generators::new(vec![("x", 2), ("y", 3)]);
        let x = Poly::gen(&fiber, 0);
        let fiber_model =
            FreeCdga::new(fiber.clone(), vec![Poly::zero(&fiber), x.pow(2)]).unwrap();
        let rel = RelativeSullivan::trivial(base, &fiber_model).unwrap();
        let s = SectionModel::build(&rel, false).unwrap();
        let ctx = s.cdga().ctx();
        assert_eq!(ctx.len(), 2);
        assert_eq!(ctx.degree(0), 2);
        assert_eq!(ctx.degree(1), 3);
        // d(y<1>) = (x<1>)^2, the fiber differential in new names.
        let expect = Poly::gen(ctx, 0).pow(2);
        assert_eq!(s.cdga().d_gen(1), &expect);
    }

    #[test]
    fn even_sphere_linear_term_appears() {
        let rel = crate::section::fixtures::even_sphere_borel(2, 1, 4);
        let s = SectionModel::build(&rel, false).unwrap();
        let ctx = s.cdga().ctx();
        // Generators: x<1>, x<a>, x<a^2>, y<1>, y<a>, y<a^2>.
        let x1 = Poly::gen(ctx, s.gen_of(0, 0).unwrap());
        let xa = Poly::gen(ctx, s.gen_of(0, 1).unwrap());
        let xa2 = Poly::gen(ctx, s.gen_of(0, 2).unwrap());
        let dy1 = s.cdga().d_gen(s.gen_of(1, 0).unwrap());
        assert_eq!(dy1, &x1.pow(2));
        let dya = s.cdga().d_gen(s.gen_of(1, 1).unwrap());
        let expect = x1.mul(&xa).scale(&q(2)).add(&x1);
        assert_eq!(dya, &expect);
        let dya2 = s.cdga().d_gen(s.gen_of(1, 2).unwrap());
        let expect = x1.mul(&xa2).scale(&q(2)).add(&xa.pow(2)).add(&xa);
        assert_eq!(dya2, &expect);
    }

    #[test]
    fn pointed_variant_drops_unit_duals() {
        let rel = crate::section::fixtures::even_sphere_borel(2, 1, 4);
        let s = SectionModel::build(&rel, true).unwrap();
        let ctx = s.cdga().ctx();
        assert_eq!(ctx.len(), 4);
        assert!((0..ctx.len()).all(|i| !ctx.name(i).ends_with("<1>")));
        // d(y<a>) loses its x<1> terms: with x<1> absent the only survivor
        // of 2 x<1> x<a> + x<1> is nothing.
        let dya = s.cdga().d_gen(s.gen_of(1, 1).unwrap());
        assert!(dya.is_zero());
    }

    #[test]
    fn strategies_agree_on_even_sphere() {
        let rel = crate::section::fixtures::even_sphere_borel(4, 1, 8);
        let s = SectionModel::build(&rel, false).unwrap();
        let rtl = s.differential_with_strategy(SplitStrategy::RightToLeft);
        for (i, d) in s.cdga().differentials().iter().enumerate() {
            assert_eq!(d, &rtl[i], "generator {}", s.cdga().ctx().name(i));
        }
    }

    #[test]
    fn rho_matches_fixpoint_oracle() {
        // A = Q[a]/(a^3), fiber x even of degree 2: reduce 1 ⊗ x^2 ⊗ (a^2)#
        // and a^m ⊗ z ⊗ (a^m)#.
        let rel = crate::section::fixtures::even_sphere_borel(2, 1, 4);
        let s = SectionModel::build(&rel, false).unwrap();
        let dual = s.dual().clone();
        let fiber = s.source().fiber().clone();
        let section = s.cdga().ctx().clone();
        let reducer = RhoReducer::new(
            &dual,
            &fiber,
            &section,
            s.gen_index(),
            SplitStrategy::LeftToRight,
        );
        let x_sq = Monomial::new(&fiber, &[(0, 2)]).unwrap();
        for beta in 0..3 {
            for base in 0..3 {
                let got = reducer.reduce(base, &x_sq, beta);
                let want = oracle::rho_fixpoint(
                    &dual,
                    &fiber,
                    &section,
                    s.gen_index(),
                    base,
                    &x_sq,
                    beta,
                );
                assert_eq!(got, want, "base {} beta {}", base, beta);
            }
        }
        // The frozen instance: 1 ⊗ x^2 ⊗ (a^2)# is
        // 2 (x<1>)(x<a^2>) + (x<a>)^2.
        let x1 = Poly::gen(&section, s.gen_of(0, 0).unwrap());
        let xa = Poly::gen(&section, s.gen_of(0, 1).unwrap());
        let xa2 = Poly::gen(&section, s.gen_of(0, 2).unwrap());
        let got = reducer.reduce(0, &x_sq, 2);
        assert_eq!(got, x1.mul(&xa2).scale(&q(2)).add(&xa.pow(2)));

        // a^m ⊗ x ⊗ (a^m)# -> x ⊗ 1# with sign +1.
        let x_word = Monomial::gen(&fiber, 0);
        for m in 1..3 {
            let got = reducer.reduce(m, &x_word, m);
            assert_eq!(got, x1, "m = {}", m);
        }
        // 1 ⊗ 1 ⊗ 1# -> 1, and 1 ⊗ 1 ⊗ a# -> 0.
        assert_eq!(reducer.reduce(0, &Monomial::one(), 0), Poly::one(&section));
        assert!(reducer.reduce(0, &Monomial::one(), 1).is_zero());
    }

    #[test]
    fn torus_rank_two_section_model() {
        // Odd sphere, two base variables, truncation 4.
        let ctx = Generators::new(vec![("a1", 2), ("a2", 2)]);
        let base = Arc::new(
            FiniteAlgebra::truncate_free(&FreeCdga::zero_differential(ctx), 4).unwrap(),
        );
        let fiber = Generators::new(vec![("x", 3)]);
        let fiber_model = FreeCdga::zero_differential(fiber);
        let rel = RelativeSullivan::trivial(base, &fiber_model).unwrap();
        let s = SectionModel::build(&rel, false).unwrap();
        let ctx = s.cdga().ctx();
        // Duals 1, a1, a2, a1^2, a1 a2, a2^2 give degrees 3, 1, 1, -1, -1, -1.
        let degrees: Vec<i64> = (0..ctx.len()).map(|i| ctx.degree(i)).collect();
        assert_eq!(degrees, vec![3, 1, 1, -1, -1, -1]);
        assert!(s.cdga().differentials().iter().all(Poly::is_zero));
    }

    #[test]
    fn differential_squares_checked_at_build() {
        // Indirect: build succeeds on a twisted model, meaning the exact
        // d-squared check inside FreeCdga::new passed.
        let rel = crate::section::fixtures::even_sphere_borel(2, 7, 4);
        let s = SectionModel::build(&rel, false).unwrap();
        for i in 0..s.cdga().ctx().len() {
            assert!(s.cdga().apply_d(s.cdga().d_gen(i)).is_zero());
        }
    }

}
