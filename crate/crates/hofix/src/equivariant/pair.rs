//! Equivariant pairs: the Borel model of the ambient action together with
//! the trivial Borel model of the fixed point set and the base-linear
//! morphism between them covering a model of the inclusion.

use super::borel::{truncated_base, BorelModel};
use super::EquivariantError;
use crate::algebra::Generators;
use crate::cdga::FreeCdga;
use crate::section::{RelPoly, RelativeSullivan};
use std::sync::Arc;

/// The ambient side (A ⊗ ΛV, D), the fixed side (A ⊗ ΛZ, d) trivial over
/// the base, and ψ: one image in A ⊗ ΛZ per ambient fiber generator.
/// Construction checks that ψ preserves degrees, restricts to the identity
/// on the base (it is base-linear by definition), and commutes with the
/// differentials.
#[derive(Debug, Clone)]
pub struct EquivariantPair {
    total: RelativeSullivan,
    fixed: RelativeSullivan,
    psi: Vec<RelPoly>,
}

impl EquivariantPair {
    pub fn new(
        total: RelativeSullivan,
        fixed: RelativeSullivan,
        psi: Vec<RelPoly>,
    ) -> Result<EquivariantPair, EquivariantError> {
        if !Arc::ptr_eq(total.base(), fixed.base()) {
            return Err(EquivariantError::BaseMismatch);
        }
        let unit = fixed.base().unit();
        for (z, _) in fixed.fiber().iter() {
            if fixed.d_gen(z).terms().any(|(b, _, _)| b != unit) {
                return Err(EquivariantError::FixedSideTwisted);
            }
        }
        assert_eq!(psi.len(), total.fiber().len(), "one psi image per generator");
        for (v, g) in total.fiber().iter() {
            if !psi[v].is_homogeneous_of_degree(g.degree) {
                return Err(EquivariantError::PsiDegree {
                    gen: g.name.clone(),
                });
            }
        }
        let pair = EquivariantPair { total, fixed, psi };
        for (v, g) in pair.total.fiber().iter() {
            let lhs = pair.apply_psi(pair.total.d_gen(v));
            let rhs = pair.fixed.apply_d(&pair.psi[v]);
            if lhs != rhs {
                return Err(EquivariantError::PsiNotChainMap {
                    gen: g.name.clone(),
                });
            }
        }
        Ok(pair)
    }

    /// Circle action on an odd sphere with fixed set an odd sphere of
    /// dimension j: ψ(x) = a^{(n-j)/2} z.
    pub fn odd_sphere(
        n: i64,
        j: i64,
        truncation: Option<i64>,
    ) -> Result<EquivariantPair, EquivariantError> {
        if n % 2 == 0 || j % 2 == 0 || j < 1 || j > n {
            return Err(EquivariantError::BadParameters(format!(
                "need odd 1 <= j <= n for a fixed S^j inside S^n, got j={j}, n={n}"
            )));
        }
        let truncation = truncation.unwrap_or(n + 1);
        let m0 = ((n - j) / 2) as u32;
        let borel = BorelModel::odd_sphere(n, 1, Some(truncation))?;
        let total = borel.rel().clone();
        let base = total.base().clone();
        if base.monomial_index(&[m0]).is_none() {
            return Err(EquivariantError::BadParameters(format!(
                "truncation {truncation} cannot hold a^{m0}"
            )));
        }
        let z_fiber = Generators::new(vec![("z", j)]);
        let fixed =
            RelativeSullivan::trivial(base.clone(), &FreeCdga::zero_differential(z_fiber))?;
        let ctx = fixed.ctx().clone();
        let z = RelPoly::fiber_gen(&ctx, 0);
        let a_m0 = RelPoly::base_elem(&ctx, base.monomial_index(&[m0]).unwrap());
        EquivariantPair::new(total, fixed, vec![a_m0.mul(&z)])
    }

    /// Trivial-group pair: base the ground field, ψ given by fiber-level
    /// images (a model of the inclusion of the fixed set).
    pub fn trivial_group(
        fiber_model: &FreeCdga,
        fixed_model: &FreeCdga,
        psi_fiber: Vec<crate::algebra::Poly>,
    ) -> Result<EquivariantPair, EquivariantError> {
        let base = truncated_base(1, 0);
        let total = RelativeSullivan::trivial(base.clone(), fiber_model)?;
        let fixed = RelativeSullivan::trivial(base, fixed_model)?;
        let ctx = fixed.ctx().clone();
        let psi = psi_fiber
            .iter()
            .map(|p| crate::section::lift_fiber_poly(&ctx, p))
            .collect();
        EquivariantPair::new(total, fixed, psi)
    }

    pub fn total(&self) -> &RelativeSullivan {
        &self.total
    }

    pub fn fixed(&self) -> &RelativeSullivan {
        &self.fixed
    }

    pub fn psi(&self, v: usize) -> &RelPoly {
        &self.psi[v]
    }

    /// Extend ψ multiplicatively and base-linearly to all of A ⊗ ΛV.
    pub fn apply_psi(&self, p: &RelPoly) -> RelPoly {
        let ctx = self.fixed.ctx();
        let mut out = RelPoly::zero(ctx);
        for (b, m, c) in p.terms() {
            let mut acc = RelPoly::base_elem(ctx, b).scale(c);
            for &(g, e) in m.factors() {
                for _ in 0..e {
                    acc = acc.mul(&self.psi[g as usize]);
                }
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Dimension bounds that genuine actions satisfy: the fixed side cannot
    /// have more homotopy than the ambient space in either parity. A
    /// violation flags the input as not modeling an honest action.
    pub fn validity_flags(&self) -> Vec<String> {
        let count = |gens: &Arc<Generators>, odd: bool| {
            gens.iter().filter(|(_, g)| g.is_odd() == odd).count()
        };
        let mut flags = Vec::new();
        let (v_even, v_odd) = (
            count(self.total.fiber(), false),
            count(self.total.fiber(), true),
        );
        let (z_even, z_odd) = (
            count(self.fixed.fiber(), false),
            count(self.fixed.fiber(), true),
        );
        if z_even > v_even {
            flags.push(format!(
                "fixed side has {z_even} even generators but the ambient side only {v_even}"
            ));
        }
        if z_odd > v_odd {
            flags.push(format!(
                "fixed side has {z_odd} odd generators but the ambient side only {v_odd}"
            ));
        }
        flags
    }

    /// ψ with every image zero; a valid pair whenever the ambient
    /// differential has no pure-base terms. Used as a negative control.
    pub fn zero_psi(
        total: RelativeSullivan,
        fixed: RelativeSullivan,
    ) -> Result<EquivariantPair, EquivariantError> {
        let ctx = fixed.ctx().clone();
        let psi = vec![RelPoly::zero(&ctx); total.fiber().len()];
        EquivariantPair::new(total, fixed, psi)
    }
}
