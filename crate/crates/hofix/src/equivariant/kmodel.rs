//! The model of the inclusion of the fixed point set into the homotopy
//! fixed point set: the composition of the section-model morphism induced
//! by ψ with the evaluation sending z ⊗ β to z for β the counit and to
//! zero otherwise.

use super::indec::{indecomposables, is_t_minimal, lemma_aux_basis};
use super::pair::EquivariantPair;
use super::EquivariantError;
use crate::algebra::{Poly, Q};
use crate::cdga::FreeCdga;
use crate::elliptic::{check_elliptic, WitnessConfig, WitnessDifferential};
use crate::linalg::QMatrix;
use crate::section::{RhoReducer, SectionModel, SplitStrategy};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Generator-wise data of the composed morphism
/// Λ(V ⊗ A♯) -> Λ(Z ⊗ A♯) -> ΛZ, validated as a chain map in both stages.
#[derive(Debug, Clone)]
pub struct KModel {
    section: SectionModel,
    intermediate: SectionModel,
    /// Image of each ambient section generator in Λ(Z ⊗ A♯).
    phi_images: Vec<Poly>,
    /// Image of each ambient section generator in ΛZ.
    k_images: Vec<Poly>,
    fixed_fiber: FreeCdga,
}

impl KModel {
    pub fn build(pair: &EquivariantPair) -> Result<KModel, EquivariantError> {
        let section = SectionModel::build(pair.total(), false)?;
        let intermediate = SectionModel::build(pair.fixed(), false)?;
        let fixed_fiber = pair.fixed().fiber_model().clone();
        let dual = intermediate.dual().clone();
        let z_fiber = pair.fixed().fiber().clone();
        let reducer = RhoReducer::new(
            &dual,
            &z_fiber,
            intermediate.cdga().ctx(),
            intermediate.gen_index(),
            SplitStrategy::LeftToRight,
        );

        // φ(v ⊗ α) is the normal form of ψ(v) ⊗ α.
        let mut phi_images = Vec::new();
        for &(v, alpha) in section.origins() {
            let mut image = Poly::zero(intermediate.cdga().ctx());
            for (b, w, c) in pair.psi(v).terms() {
                image = image.add(&reducer.reduce(b, w, alpha).scale(c));
            }
            phi_images.push(image);
        }

        // γ kills every generator not paired with the counit.
        let unit = dual.counit_index();
        let gamma: Vec<Poly> = intermediate
            .origins()
            .iter()
            .map(|&(z, beta)| {
                if beta == unit {
                    Poly::gen(fixed_fiber.ctx(), z)
                } else {
                    Poly::zero(fixed_fiber.ctx())
                }
            })
            .collect();
        let k_images: Vec<Poly> = phi_images
            .iter()
            .map(|p| p.substitute(fixed_fiber.ctx(), |g| gamma[g].clone()))
            .collect();

        let model = KModel {
            section,
            intermediate,
            phi_images,
            k_images,
            fixed_fiber,
        };
        model.check_chain_maps()?;
        Ok(model)
    }

    fn check_chain_maps(&self) -> Result<(), EquivariantError> {
        let sec = self.section.cdga();
        for (s, _) in sec.ctx().iter() {
            // φ commutes with the section differentials.
            let lhs = sec
                .d_gen(s)
                .substitute(self.intermediate.cdga().ctx(), |g| self.phi_images[g].clone());
            let rhs = self.intermediate.cdga().apply_d(&self.phi_images[s]);
            if lhs != rhs {
                return Err(EquivariantError::PsiNotChainMap {
                    gen: sec.ctx().name(s).to_string(),
                });
            }
            // And so does the composition into ΛZ.
            let lhs = sec
                .d_gen(s)
                .substitute(self.fixed_fiber.ctx(), |g| self.k_images[g].clone());
            let rhs = self.fixed_fiber.apply_d(&self.k_images[s]);
            if lhs != rhs {
                return Err(EquivariantError::PsiNotChainMap {
                    gen: sec.ctx().name(s).to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn section(&self) -> &SectionModel {
        &self.section
    }

    pub fn intermediate(&self) -> &SectionModel {
        &self.intermediate
    }

    pub fn fixed_fiber(&self) -> &FreeCdga {
        &self.fixed_fiber
    }

    pub fn phi_image(&self, s: usize) -> &Poly {
        &self.phi_images[s]
    }

    pub fn k_image(&self, s: usize) -> &Poly {
        &self.k_images[s]
    }

    /// Coefficient of each fixed-side generator in the linear part of the
    /// image of a section generator.
    pub fn linear_image(&self, s: usize) -> Vec<Q> {
        let z_ctx = self.fixed_fiber.ctx();
        let mut out = vec![Q::zero(); z_ctx.len()];
        for (m, c) in self.k_images[s].terms() {
            if m.word_length() == 1 {
                out[m.factors()[0].0 as usize] = c.clone();
            }
        }
        out
    }

    /// The linear part of the model as one matrix per degree: rows are
    /// fixed-side generators of that degree, columns the section generators.
    pub fn linear_matrices(&self) -> BTreeMap<i64, QMatrix> {
        let z_ctx = self.fixed_fiber.ctx();
        let sec_ctx = self.section.cdga().ctx();
        let mut out = BTreeMap::new();
        let degrees: std::collections::BTreeSet<i64> =
            z_ctx.iter().map(|(_, g)| g.degree).collect();
        for d in degrees {
            let rows: Vec<usize> = z_ctx
                .iter()
                .filter(|(_, g)| g.degree == d)
                .map(|(i, _)| i)
                .collect();
            let cols: Vec<usize> = sec_ctx
                .iter()
                .filter(|(_, g)| g.degree == d)
                .map(|(i, _)| i)
                .collect();
            let mut mat = QMatrix::zeros(rows.len(), cols.len());
            for (j, &s) in cols.iter().enumerate() {
                let lin = self.linear_image(s);
                for (i, &z) in rows.iter().enumerate() {
                    mat.set(i, j, lin[z].clone());
                }
            }
            out.insert(d, mat);
        }
        out
    }
}

/// Surjectivity of the linear part onto the fixed-side generators, degree
/// by degree. Surjective everywhere means the induced map on rational
/// homotopy groups is injective.
#[derive(Debug, Clone)]
pub struct InjectivityReport {
    /// (degree, fixed-side dimension, achieved rank).
    pub per_degree: Vec<(i64, usize, usize)>,
    pub injective: bool,
}

pub fn pi_k_injective_check(model: &KModel) -> InjectivityReport {
    let mut per_degree = Vec::new();
    let mut injective = true;
    for (d, mat) in model.linear_matrices() {
        let dim = mat.nrows();
        let rank = mat.rank();
        if rank < dim {
            injective = false;
        }
        per_degree.push((d, dim, rank));
    }
    InjectivityReport {
        per_degree,
        injective,
    }
}

/// Outcome of the never-equivalence verification: an element of positive
/// degree in the generating space whose image vanishes at the linear level.
#[derive(Debug, Clone)]
pub struct NeverEquivalence {
    /// The exhibited element, written in the ambient section model.
    pub element: Poly,
    pub degree: i64,
}

/// For a minimal circle action on a nontrivial simply connected certified
/// elliptic fiber, exhibit a positive-degree generator (or combination)
/// with vanishing linear image; the induced map on rational homotopy is
/// then never surjective.
pub fn never_equivalence_check(
    pair: &EquivariantPair,
    minimality: bool,
) -> Result<NeverEquivalence, EquivariantError> {
    if !minimality {
        return Err(EquivariantError::Preconditions(
            "caller did not assert minimality".into(),
        ));
    }
    if pair.total().base().vars().len() != 1 {
        return Err(EquivariantError::NotRankOne);
    }
    let indec = indecomposables(pair.total(), None)?;
    if !is_t_minimal(&indec) {
        return Err(EquivariantError::Preconditions(
            "the action is not minimal: its linear part is nonzero".into(),
        ));
    }
    let fiber = pair.total().fiber();
    if fiber.is_empty() {
        return Err(EquivariantError::Preconditions(
            "the fiber is trivial".into(),
        ));
    }
    if fiber.iter().any(|(_, g)| g.degree < 2) {
        return Err(EquivariantError::Preconditions(
            "the fiber is not simply connected".into(),
        ));
    }
    let verdict = check_elliptic(
        pair.total().fiber_model(),
        WitnessDifferential::Pure,
        &WitnessConfig::default(),
    )?;
    if !verdict.is_elliptic() {
        return Err(EquivariantError::Preconditions(
            "the fiber is not certified elliptic".into(),
        ));
    }

    let triples = lemma_aux_basis(pair)?;
    let triple = triples
        .iter()
        .find(|t| t.w.try_degree().is_some_and(|d| d % 2 == 1 && d >= 3))
        .ok_or_else(|| {
            EquivariantError::Preconditions(
                "no odd fiber element of degree at least three".into(),
            )
        })?;

    let model = KModel::build(pair)?;
    let section = model.section();
    let base = pair.total().base();
    // m >= 1: pair the element against the counit; m = 0: against the dual
    // of the degree-two variable.
    let dual_index = if triple.exponent >= 1 {
        base.unit()
    } else {
        base.monomial_index(&[1]).ok_or_else(|| {
            EquivariantError::BadParameters("truncation exludes the base variable".into())
        })?
    };
    let mut element = Poly::zero(section.cdga().ctx());
    for (m, c) in triple.w.terms() {
        let v = m.factors()[0].0 as usize;
        let s = section
            .gen_of(v, dual_index)
            .expect("dual index within truncation");
        element = element.add(&Poly::gen(section.cdga().ctx(), s).scale(c));
    }
    let degree = element.try_degree().expect("homogeneous by construction");
    if degree < 1 {
        return Err(EquivariantError::Preconditions(
            "exhibited element is not of positive degree".into(),
        ));
    }
    // Verify the vanishing exactly.
    let mut linear = vec![Q::zero(); model.fixed_fiber().ctx().len()];
    for (m, c) in element.terms() {
        let s = m.factors()[0].0 as usize;
        for (acc, v) in linear.iter_mut().zip(model.linear_image(s)) {
            *acc = &*acc + &(&v * c);
        }
    }
    if linear.iter().any(|c| !c.is_zero()) {
        return Err(EquivariantError::Preconditions(
            "the exhibited element does not vanish at the linear level".into(),
        ));
    }
    Ok(NeverEquivalence { element, degree })
}
