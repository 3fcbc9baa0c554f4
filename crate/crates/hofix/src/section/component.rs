//! Path-component models of section spaces. Given a retraction φ, the
//! fibration is first rewritten so φ becomes the zero retraction; the
//! quotient then kills negative-degree generators, sends degree-zero
//! generators to their scalar values, and divides the degree-one generator
//! space by the linear parts of the degree-zero differentials.

use super::model::SectionModel;
use super::relative::RelativeSullivan;
use super::retraction::{rebase, Retraction};
use super::SectionError;
use crate::algebra::{Generators, Poly, Q};
use crate::cdga::{DualCoalgebra, FreeCdga};
use crate::linalg::Echelon;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A free CDGA on generators of degree at least one modeling one path
/// component of the section space, with enough provenance to lift
/// ellipticity witnesses through it.
#[derive(Debug, Clone)]
pub struct ComponentModel {
    cdga: FreeCdga,
    /// Final ordinal -> (fiber generator, dual index).
    origin: Vec<(usize, usize)>,
    /// The retraction that selected this component, in original coordinates.
    retraction: Retraction,
    /// Scalar substituted for each degree-zero generator of the original
    /// section model: the pairing of the dual element against φ(v).
    scalars: Vec<((usize, usize), Q)>,
    /// Rebased section model (its source has the zero retraction).
    section: SectionModel,
    /// Substitution from the rebased section model onto the quotient.
    subst: Vec<Poly>,
    /// Origins of degree-one generators eliminated by the quotient.
    eliminated: Vec<(usize, usize)>,
}

impl ComponentModel {
    pub fn compute(
        section: &SectionModel,
        phi: &Retraction,
    ) -> Result<ComponentModel, SectionError> {
        let source = section.source();
        let rebased = rebase(source, phi)?;
        let model = SectionModel::build(&rebased, section.pointed())?;
        let ctx = model.cdga().ctx().clone();

        // Record the original scalar values of the degree-zero generators.
        let mut scalars = Vec::new();
        for (s, &(v, k)) in model.origins().iter().enumerate() {
            if ctx.degree(s) == 0 {
                scalars.push(((v, k), phi.value(v)[k].clone()));
            }
        }

        // Stage one: negative and degree-zero generators vanish (the
        // rebased retraction is zero).
        let sigma0 = |g: usize| -> Poly {
            if ctx.degree(g) < 1 {
                Poly::zero(&ctx)
            } else {
                Poly::gen(&ctx, g)
            }
        };

        // Linear relations in degree one from the degree-zero differentials.
        let mut relations = Echelon::new(ctx.len());
        for s in 0..ctx.len() {
            if ctx.degree(s) != 0 {
                continue;
            }
            let r = model.cdga().d_gen(s).substitute(&ctx, sigma0);
            if r.is_zero() {
                continue;
            }
            let mut row = vec![Q::zero(); ctx.len()];
            for (m, c) in r.terms() {
                assert_eq!(m.word_length(), 1, "degree-zero differentials reduce to linear forms");
                let g = m.factors()[0].0 as usize;
                row[g] = c.clone();
            }
            relations.insert(row);
        }
        let mut pivot_of: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
        for row in relations.rows() {
            let p = row.iter().position(|c| !c.is_zero()).unwrap();
            pivot_of.insert(p, row.clone());
        }

        // Final generator set: degree >= 1, not a pivot.
        let mut names = Vec::new();
        let mut origin = Vec::new();
        let mut final_of: BTreeMap<usize, usize> = BTreeMap::new();
        let mut eliminated = Vec::new();
        for s in 0..ctx.len() {
            if ctx.degree(s) < 1 {
                continue;
            }
            if pivot_of.contains_key(&s) {
                eliminated.push(model.origin(s));
                continue;
            }
            final_of.insert(s, names.len());
            names.push((ctx.name(s).to_string(), ctx.degree(s)));
            origin.push(model.origin(s));
        }
        let final_ctx = Generators::new(names);

        // Substitution map through both stages.
        let mut subst: Vec<Poly> = Vec::with_capacity(ctx.len());
        for s in 0..ctx.len() {
            let image = if ctx.degree(s) < 1 {
                Poly::zero(&final_ctx)
            } else if let Some(row) = pivot_of.get(&s) {
                // p = -(rest of its reduced relation).
                let mut p = Poly::zero(&final_ctx);
                for (g, c) in row.iter().enumerate() {
                    if g == s || c.is_zero() {
                        continue;
                    }
                    let f = final_of[&g];
                    p = p.add(&Poly::gen(&final_ctx, f).scale(&-c.clone()));
                }
                p
            } else {
                Poly::gen(&final_ctx, final_of[&s])
            };
            subst.push(image);
        }

        let diff: Vec<Poly> = (0..final_ctx.len())
            .map(|f| {
                let s = *final_of
                    .iter()
                    .find(|(_, &v)| v == f)
                    .map(|(k, _)| k)
                    .unwrap();
                model.cdga().d_gen(s).substitute(&final_ctx, |g| subst[g].clone())
            })
            .collect();
        let cdga = FreeCdga::new(final_ctx, diff)?;

        Ok(ComponentModel {
            cdga,
            origin,
            retraction: phi.clone(),
            scalars,
            section: model,
            subst,
            eliminated,
        })
    }

    pub fn cdga(&self) -> &FreeCdga {
        &self.cdga
    }

    pub fn origin(&self, f: usize) -> (usize, usize) {
        self.origin[f]
    }

    pub fn origins(&self) -> &[(usize, usize)] {
        &self.origin
    }

    pub fn retraction(&self) -> &Retraction {
        &self.retraction
    }

    pub fn scalars(&self) -> &[((usize, usize), Q)] {
        &self.scalars
    }

    pub fn eliminated(&self) -> &[(usize, usize)] {
        &self.eliminated
    }

    /// The rebased section model this quotient came from.
    pub fn section(&self) -> &SectionModel {
        &self.section
    }

    pub fn rebased_source(&self) -> &RelativeSullivan {
        self.section.source()
    }

    pub fn dual(&self) -> &Arc<DualCoalgebra> {
        self.section.dual()
    }

    /// Push an element of the rebased section model onto the quotient.
    pub fn project(&self, p: &Poly) -> Poly {
        p.substitute(self.cdga.ctx(), |g| self.subst[g].clone())
    }

    /// Final ordinal of the generator with the given origin, if it survived.
    pub fn gen_of(&self, fiber_gen: usize, dual_idx: usize) -> Option<usize> {
        self.origin
            .iter()
            .position(|&(v, k)| (v, k) == (fiber_gen, dual_idx))
    }
}
