//! Morphisms of free CDGAs given by generator assignments. Validity
//! (degree preservation and commuting with the differentials) is checked at
//! construction, not deferred.

use super::{CdgaError, FreeCdga};
use crate::algebra::Poly;

#[derive(Debug, Clone)]
pub struct CdgaMorphism {
    source: FreeCdga,
    target: FreeCdga,
    images: Vec<Poly>,
}

impl CdgaMorphism {
    pub fn new(
        source: FreeCdga,
        target: FreeCdga,
        images: Vec<Poly>,
    ) -> Result<CdgaMorphism, CdgaError> {
        assert_eq!(images.len(), source.ctx().len(), "one image per generator");
        for (i, g) in source.ctx().iter() {
            if !images[i].is_homogeneous_of_degree(g.degree) {
                return Err(CdgaError::DegreeViolation {
                    gen: g.name.clone(),
                });
            }
        }
        let morphism = CdgaMorphism {
            source,
            target,
            images,
        };
        for (i, g) in morphism.source.ctx().iter() {
            let lhs = morphism.apply(morphism.source.d_gen(i));
            let rhs = morphism.target.apply_d(&morphism.images[i]);
            if lhs != rhs {
                return Err(CdgaError::NotChainMap {
                    gen: g.name.clone(),
                });
            }
        }
        Ok(morphism)
    }

    pub fn source(&self) -> &FreeCdga {
        &self.source
    }

    pub fn target(&self) -> &FreeCdga {
        &self.target
    }

    pub fn image(&self, i: usize) -> &Poly {
        &self.images[i]
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        p.substitute(self.target.ctx(), |g| self.images[g].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generators;

    #[test]
    fn chain_map_validated() {
        // Source: S^2 model; target: S^2 model; identity is a chain map.
        let ctx = Generators::new(vec![("x", 2), ("y", 3)]);
        let x = Poly::gen(&ctx, 0);
        let a = FreeCdga::new(ctx.clone(), vec![Poly::zero(&ctx), x.pow(2)]).unwrap();
        let id = CdgaMorphism::new(
            a.clone(),
            a.clone(),
            vec![Poly::gen(&ctx, 0), Poly::gen(&ctx, 1)],
        );
        assert!(id.is_ok());

        // Sending y to 0 but keeping x is not a chain map: d(y) = x^2 maps
        // to x^2 but d(0) = 0.
        let bad = CdgaMorphism::new(
            a.clone(),
            a.clone(),
            vec![Poly::gen(&ctx, 0), Poly::zero(&ctx)],
        );
        assert!(matches!(bad, Err(CdgaError::NotChainMap { .. })));
    }
}
