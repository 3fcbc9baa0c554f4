//! Normal forms for the reduction that identifies the free algebra on
//! A ⊗ ΛV ⊗ A♯ modulo its defining ideal with the free algebra on V ⊗ A♯.
//!
//! Two rewriting rules generate the ideal: a fiber word splits across the
//! diagonal of the dual element, one letter at a time, and a base
//! coefficient is absorbed by pairing it against the first diagonal leg.
//! Iterated signs come from repeated application of the two rules, never
//! from a closed-form formula; the left-to-right and right-to-left
//! splitting strategies must agree, and tests check that they do.

use crate::algebra::{Generators, Monomial, Poly};
use crate::cdga::DualCoalgebra;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Splitting strategy for fiber words; both give the same normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitStrategy {
    LeftToRight,
    RightToLeft,
}

/// Rewrites triples (base element, fiber word, dual element) into the free
/// algebra on the generators v ⊗ β.
pub struct RhoReducer<'a> {
    dual: &'a DualCoalgebra,
    fiber: &'a Arc<Generators>,
    section: &'a Arc<Generators>,
    /// (fiber generator, dual index) -> section generator ordinal.
    gen_index: &'a BTreeMap<(usize, usize), usize>,
    strategy: SplitStrategy,
}

impl<'a> RhoReducer<'a> {
    pub fn new(
        dual: &'a DualCoalgebra,
        fiber: &'a Arc<Generators>,
        section: &'a Arc<Generators>,
        gen_index: &'a BTreeMap<(usize, usize), usize>,
        strategy: SplitStrategy,
    ) -> RhoReducer<'a> {
        RhoReducer {
            dual,
            fiber,
            section,
            gen_index,
            strategy,
        }
    }

    /// Normal form of (b ⊗ w ⊗ β). The base element is absorbed first: the
    /// diagonal legs pairing nontrivially against `b` contribute
    /// `(-1)^{|β'|(|w|+1)} β'(b) · (w ⊗ β'')`, then the word splits.
    pub fn reduce(&self, base: usize, word: &Monomial, beta: usize) -> Poly {
        let mut out = Poly::zero(self.section);
        for &(i, j, ref c) in self.dual.diagonal(beta) {
            if i != base {
                continue;
            }
            let split = self.split(word, j);
            if split.is_zero() {
                continue;
            }
            let sign_exp = self.dual.underlying_degree(i) * (word.degree() + 1);
            let signed = if sign_exp.rem_euclid(2) == 1 {
                split.neg()
            } else {
                split
            };
            out = out.add(&signed.scale(c));
        }
        out
    }

    /// Normal form of (w ⊗ β) for a bare fiber word.
    pub fn split(&self, word: &Monomial, beta: usize) -> Poly {
        let mut memo = BTreeMap::new();
        self.split_memo(word, beta, &mut memo)
    }

    fn split_memo(
        &self,
        word: &Monomial,
        beta: usize,
        memo: &mut BTreeMap<(Monomial, usize), Poly>,
    ) -> Poly {
        if word.is_one() {
            // The empty word pairs only against the counit: (1 ⊗ 1#) = 1 and
            // (1 ⊗ β) = 0 for β ≠ 1#.
            return if beta == self.dual.counit_index() {
                Poly::one(self.section)
            } else {
                Poly::zero(self.section)
            };
        }
        if word.word_length() == 1 {
            let (g, _) = word.split_first(self.fiber).unwrap();
            return match self.gen_index.get(&(g, beta)) {
                Some(&s) => Poly::gen(self.section, s),
                None => Poly::zero(self.section),
            };
        }
        if let Some(hit) = memo.get(&(word.clone(), beta)) {
            return hit.clone();
        }
        let mut out = Poly::zero(self.section);
        match self.strategy {
            SplitStrategy::LeftToRight => {
                // (v · w') ⊗ β = Σ (-1)^{|w'||β'|} (v ⊗ β')(w' ⊗ β'').
                let (g, rest) = word.split_first(self.fiber).unwrap();
                for &(i, j, ref c) in self.dual.diagonal(beta) {
                    let head = match self.gen_index.get(&(g, i)) {
                        Some(&s) => Poly::gen(self.section, s),
                        None => continue,
                    };
                    let tail = self.split_memo(&rest, j, memo);
                    if tail.is_zero() {
                        continue;
                    }
                    let sign_exp = rest.degree() * self.dual.underlying_degree(i);
                    let prod = head.mul(&tail);
                    let prod = if sign_exp.rem_euclid(2) == 1 {
                        prod.neg()
                    } else {
                        prod
                    };
                    out = out.add(&prod.scale(c));
                }
            }
            SplitStrategy::RightToLeft => {
                // (w' · v) ⊗ β = Σ (-1)^{|v||β'|} (w' ⊗ β')(v ⊗ β'').
                let (g, rest) = word.split_last(self.fiber).unwrap();
                for &(i, j, ref c) in self.dual.diagonal(beta) {
                    let tail = match self.gen_index.get(&(g, j)) {
                        Some(&s) => Poly::gen(self.section, s),
                        None => continue,
                    };
                    let head = self.split_memo(&rest, i, memo);
                    if head.is_zero() {
                        continue;
                    }
                    let sign_exp = self.fiber.degree(g) * self.dual.underlying_degree(i);
                    let prod = head.mul(&tail);
                    let prod = if sign_exp.rem_euclid(2) == 1 {
                        prod.neg()
                    } else {
                        prod
                    };
                    out = out.add(&prod.scale(c));
                }
            }
        }
        memo.insert((word.clone(), beta), out.clone());
        out
    }
}
