//! The space of indecomposables of an action: the linear part of the
//! relative differential as a matrix over the untruncated base polynomial
//! ring, minimality, localization over the fraction field, and the column
//! reduction producing one fiber element over each fixed-side generator.

use super::pair::EquivariantPair;
use super::EquivariantError;
use crate::algebra::{Generators, Monomial, Poly, Q};
use crate::cdga::{BasisLabel, FreeCdga};
use crate::linalg::QMatrix;
use crate::polymat::PolyMatrix;
use crate::section::{enumerate_retractions, rebase, RelativeSullivan, Retraction};
use num_traits::{One, Zero};
use std::sync::Arc;

/// (R ⊗ V, D₁): the fiber generators as a module over R = Q[a1, ..., am]
/// with the linear part of the differential.
#[derive(Debug, Clone)]
pub struct Indecomposables {
    vars: Arc<Generators>,
    fiber: Arc<Generators>,
    /// Entry (w, v) is the coefficient of w in D₁(v).
    d1: PolyMatrix,
}

impl Indecomposables {
    pub fn vars(&self) -> &Arc<Generators> {
        &self.vars
    }

    pub fn fiber(&self) -> &Arc<Generators> {
        &self.fiber
    }

    pub fn d1(&self) -> &PolyMatrix {
        &self.d1
    }
}

/// Extract (R ⊗ V, D₁). The differential must admit a retraction: the zero
/// assignment if DV ⊂ A ⊗ Λ⁺V already, the supplied one, or the first
/// enumerated one otherwise; the model is rewritten in its coordinates
/// before the linear part is read off. The base labels are reinterpreted as
/// monomials in the untruncated polynomial ring.
pub fn indecomposables(
    rel: &RelativeSullivan,
    phi: Option<&Retraction>,
) -> Result<Indecomposables, EquivariantError> {
    let rel = normalized(rel, phi)?;
    let base = rel.base();
    let fiber = rel.fiber().clone();
    // Fiber minimality: no linear part over the unit.
    for (v, g) in fiber.iter() {
        let linear_unit = rel
            .fiber_model()
            .d_gen(v)
            .filter_terms(|m| m.word_length() == 1);
        if !linear_unit.is_zero() {
            return Err(EquivariantError::NotMinimal {
                gen: g.name.clone(),
            });
        }
    }
    let vars = Generators::new(
        base.vars()
            .iter()
            .map(|(n, d)| (n.clone(), *d))
            .collect::<Vec<_>>(),
    );
    let n = fiber.len();
    let mut d1 = PolyMatrix::new(&vars, n, n);
    for v in 0..n {
        for (b, m, c) in rel.d_gen(v).terms() {
            if m.word_length() != 1 {
                continue;
            }
            let w = m.factors()[0].0 as usize;
            let BasisLabel::Monomial(exps) = base.label(b) else {
                return Err(EquivariantError::NonMonomialBase);
            };
            let factors: Vec<(usize, u32)> = exps
                .iter()
                .enumerate()
                .map(|(i, &e)| (i, e))
                .collect();
            let mono = Monomial::new(&vars, &factors).expect("even variables");
            let entry = d1.get(w, v).add(&Poly::monomial(&vars, mono, c.clone()));
            d1.set(w, v, entry);
        }
    }
    // D₁ ∘ D₁ = 0 as matrices over R.
    let square = d1.matmul(&d1);
    assert!(square.is_zero(), "the linear part must square to zero");
    Ok(Indecomposables { vars, fiber, d1 })
}

fn normalized(
    rel: &RelativeSullivan,
    phi: Option<&Retraction>,
) -> Result<RelativeSullivan, EquivariantError> {
    if let Some(phi) = phi {
        return Ok(rebase(rel, phi)?);
    }
    if rel.zero_retraction_valid() {
        return Ok(rel.clone());
    }
    let phis = enumerate_retractions(rel).map_err(|_| EquivariantError::NoRetraction)?;
    let phi = phis.first().ok_or(EquivariantError::NoRetraction)?;
    Ok(rebase(rel, phi)?)
}

/// A torus action is minimal when the linear part of its differential
/// vanishes identically.
pub fn is_t_minimal(indec: &Indecomposables) -> bool {
    indec.d1().is_zero()
}

/// The outcome of localizing the indecomposables at the fraction field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizeReport {
    /// Homology of (K ⊗ V, D₁) by parity.
    pub indec_even: usize,
    pub indec_odd: usize,
    /// Fixed-side generator counts by parity.
    pub z_even: usize,
    pub z_odd: usize,
    /// Whether the two agree, as Borel localization demands of genuine
    /// actions.
    pub quasi_iso: bool,
    /// For circle actions: the stable dimensions of the cohomology of the
    /// untruncated total algebra, by parity. The full K-cohomology rank.
    pub full_even: Option<usize>,
    pub full_odd: Option<usize>,
}

/// Compare the homology of (K ⊗ V, D₁) with the fixed-side generators by
/// parity, and, for circle actions, compute the stable K-cohomology of the
/// total algebra as well.
pub fn localize_check(pair: &EquivariantPair) -> Result<LocalizeReport, EquivariantError> {
    let indec = indecomposables(pair.total(), None)?;
    let fiber = indec.fiber().clone();
    let evens: Vec<usize> = (0..fiber.len()).filter(|&v| !fiber.is_odd(v)).collect();
    let odds: Vec<usize> = (0..fiber.len()).filter(|&v| fiber.is_odd(v)).collect();

    // Blocks of D₁ between the parities. D₁ raises degree, so it maps even
    // generators into odd rows and vice versa.
    let block = |rows: &[usize], cols: &[usize]| {
        let mut m = PolyMatrix::new(indec.vars(), rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, indec.d1().get(r, c).clone());
            }
        }
        m
    };
    let even_to_odd = block(&odds, &evens).rank();
    let odd_to_even = block(&evens, &odds).rank();
    let indec_even = evens.len() - even_to_odd - odd_to_even;
    let indec_odd = odds.len() - odd_to_even - even_to_odd;

    let z_fiber = pair.fixed().fiber();
    let z_even = z_fiber.iter().filter(|(_, g)| !g.is_odd()).count();
    let z_odd = z_fiber.iter().filter(|(_, g)| g.is_odd()).count();

    let (full_even, full_odd) = if pair.total().base().vars().len() == 1 {
        stable_full_ranks(pair.total())?
    } else {
        (None, None)
    };

    Ok(LocalizeReport {
        indec_even,
        indec_odd,
        z_even,
        z_odd,
        quasi_iso: indec_even == z_even && indec_odd == z_odd,
        full_even,
        full_odd,
    })
}

/// Cohomology of the untruncated total algebra Q[a] ⊗ ΛV in high degrees:
/// once the dimensions repeat, they equal the rank of the localized
/// cohomology by parity.
fn stable_full_ranks(
    rel: &RelativeSullivan,
) -> Result<(Option<usize>, Option<usize>), EquivariantError> {
    let base = rel.base();
    let fiber = rel.fiber();
    let mut names: Vec<(String, i64)> = base
        .vars()
        .iter()
        .map(|(n, d)| (n.clone(), *d))
        .collect();
    let offset = names.len();
    for (_, g) in fiber.iter() {
        names.push((g.name.clone(), g.degree));
    }
    let ctx = Generators::new(names);
    let mut diff = vec![Poly::zero(&ctx); ctx.len()];
    for (v, _) in fiber.iter() {
        let mut d = Poly::zero(&ctx);
        for (b, m, c) in rel.d_gen(v).terms() {
            let BasisLabel::Monomial(exps) = base.label(b) else {
                return Err(EquivariantError::NonMonomialBase);
            };
            let mut factors: Vec<(usize, u32)> = exps
                .iter()
                .enumerate()
                .map(|(i, &e)| (i, e))
                .collect();
            for &(g, e) in m.factors() {
                factors.push((offset + g as usize, e));
            }
            let mono = Monomial::new(&ctx, &factors).expect("parity preserved");
            d = d.add(&Poly::monomial(&ctx, mono, c.clone()));
        }
        diff[offset + v] = d;
    }
    let cdga = FreeCdga::new(ctx, diff)?;
    let max_fiber = fiber.iter().map(|(_, g)| g.degree).max().unwrap_or(1);
    let bound = 4 * max_fiber + 8;
    let h = cdga.cohomology(bound)?;
    let dims: Vec<usize> = h.iter().map(|c| c.dim).collect();
    let stable = |parity: usize| -> Option<usize> {
        let tail: Vec<usize> = dims
            .iter()
            .enumerate()
            .filter(|(d, _)| d % 2 == parity)
            .map(|(_, &v)| v)
            .rev()
            .take(3)
            .collect();
        if tail.len() == 3 && tail[0] == tail[1] && tail[1] == tail[2] {
            Some(tail[0])
        } else {
            None
        }
    };
    Ok((stable(0), stable(1)))
}

/// One triple per fixed-side generator: a fiber element `w`, the exponent
/// `m`, and the index of `z`, with ψ(w) = a^m z + decomposables. Verified
/// by substitution.
#[derive(Debug, Clone)]
pub struct LemmaTriple {
    pub w: Poly,
    pub z: usize,
    pub exponent: u32,
}

/// For circle actions, column-reduce the linear part of ψ over Q[a]: each
/// fixed-side generator z receives a fiber element w of minimal a-exponent
/// with ψ(w) - a^m z decomposable.
pub fn lemma_aux_basis(pair: &EquivariantPair) -> Result<Vec<LemmaTriple>, EquivariantError> {
    let base = pair.total().base();
    if base.vars().len() != 1 {
        return Err(EquivariantError::NotRankOne);
    }
    let fiber = pair.total().fiber().clone();
    let z_fiber = pair.fixed().fiber().clone();
    let max_v = fiber.iter().map(|(_, g)| g.degree).max().unwrap_or(0);

    let mut out = Vec::new();
    for (z, zg) in z_fiber.iter() {
        let mut found = None;
        let mut m = 0u32;
        while zg.degree + 2 * m as i64 <= max_v {
            let delta = zg.degree + 2 * m as i64;
            // Columns: fiber generators of degree delta; rows: pairs
            // (z index, exponent) reachable at that degree.
            let cols: Vec<usize> = (0..fiber.len())
                .filter(|&v| fiber.degree(v) == delta)
                .collect();
            if !cols.is_empty() {
                let rows: Vec<(usize, u32)> = z_fiber
                    .iter()
                    .filter(|(_, g)| {
                        (delta - g.degree) >= 0 && (delta - g.degree) % 2 == 0
                    })
                    .map(|(k, g)| (k, ((delta - g.degree) / 2) as u32))
                    .collect();
                let mut mat = QMatrix::zeros(rows.len(), cols.len());
                let mut target = vec![Q::zero(); rows.len()];
                for (j, &v) in cols.iter().enumerate() {
                    for (b, mono, c) in pair.psi(v).terms() {
                        if mono.word_length() != 1 {
                            continue;
                        }
                        let zk = mono.factors()[0].0 as usize;
                        let BasisLabel::Monomial(exps) = base.label(b) else {
                            return Err(EquivariantError::NonMonomialBase);
                        };
                        let e = exps.first().copied().unwrap_or(0);
                        let row = rows
                            .iter()
                            .position(|&(k, ex)| k == zk && ex == e)
                            .expect("degree bookkeeping");
                        mat.set(row, j, c.clone());
                    }
                }
                let ridx = rows
                    .iter()
                    .position(|&(k, ex)| k == z && ex == m)
                    .expect("target row present");
                target[ridx] = Q::one();
                if let Some(coeffs) = solve_exact(&mat, &target, rows.len(), cols.len()) {
                    let mut w = Poly::zero(&fiber);
                    for (c, &v) in coeffs.iter().zip(&cols) {
                        if !c.is_zero() {
                            w = w.add(&Poly::gen(&fiber, v).scale(c));
                        }
                    }
                    found = Some((w, m));
                    break;
                }
            }
            m += 1;
        }
        let Some((w, exponent)) = found else {
            return Err(EquivariantError::LemmaReductionFailed {
                gen: zg.name.clone(),
            });
        };
        // Verify by substitution: ψ(w) - a^m z is decomposable.
        let total_ctx = pair.total().ctx();
        let mut w_rel = crate::section::RelPoly::zero(total_ctx);
        for (mono, c) in w.terms() {
            w_rel.add_term(base.unit(), mono.clone(), c.clone());
        }
        let image = pair.apply_psi(&w_rel);
        let a_m = base
            .monomial_index(&[exponent])
            .expect("exponent within truncation");
        let fixed_ctx = pair.fixed().ctx();
        let lead = crate::section::RelPoly::base_elem(fixed_ctx, a_m)
            .mul(&crate::section::RelPoly::fiber_gen(fixed_ctx, z));
        let gamma = image.sub(&lead);
        assert!(
            gamma.terms().all(|(_, mono, _)| mono.word_length() >= 2),
            "reduced leading term must leave only decomposables"
        );
        out.push(LemmaTriple { w, z, exponent });
    }
    Ok(out)
}

fn solve_exact(
    mat: &QMatrix,
    target: &[Q],
    rows: usize,
    cols: usize,
) -> Option<Vec<Q>> {
    // Augment [A | t] and row reduce: solvable iff the target column holds
    // no pivot.
    let mut aug = QMatrix::zeros(rows, cols + 1);
    for r in 0..rows {
        for c in 0..cols {
            aug.set(r, c, mat.get(r, c).clone());
        }
        aug.set(r, cols, target[r].clone());
    }
    let (rref, pivots) = aug.rref();
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = rref[row][cols].clone();
    }
    Some(x)
}
