//! Builders for the relative Sullivan models of Borel fibrations of the
//! sphere and complex projective families, plus custom models.

use super::EquivariantError;
use crate::algebra::{Generators, Q};
use crate::cdga::{FiniteAlgebra, FreeCdga};
use crate::section::{RelCtx, RelPoly, RelativeSullivan};
use num_traits::Zero;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
pub enum BorelFamily {
    OddSphere { n: i64 },
    EvenSphere { n: i64, lambda: Q },
    ComplexProjective { n: i64, lambdas: Vec<Q> },
    Custom,
}

/// A Borel-fibration model: a relative Sullivan algebra whose base is the
/// truncated polynomial algebra on the torus variables.
#[derive(Debug, Clone)]
pub struct BorelModel {
    rel: RelativeSullivan,
    family: BorelFamily,
    torus_rank: usize,
    truncation: i64,
}

impl BorelModel {
    /// Trivial fibration with fiber an odd sphere. The default truncation is
    /// one above the fiber degree.
    pub fn odd_sphere(
        n: i64,
        torus_rank: usize,
        truncation: Option<i64>,
    ) -> Result<BorelModel, EquivariantError> {
        if n < 1 || n % 2 == 0 {
            return Err(EquivariantError::BadParameters(format!(
                "odd sphere dimension must be odd and positive, got {n}"
            )));
        }
        if torus_rank == 0 {
            return Err(EquivariantError::BadParameters("torus rank must be positive".into()));
        }
        let truncation = truncation.unwrap_or(n + 1);
        let base = truncated_base(torus_rank, truncation);
        let fiber = Generators::new(vec![("x", n)]);
        let rel = RelativeSullivan::trivial(base, &FreeCdga::zero_differential(fiber))?;
        Ok(BorelModel {
            rel,
            family: BorelFamily::OddSphere { n },
            torus_rank,
            truncation,
        })
    }

    /// Circle action on an even sphere: Dy = x^2 + λ a^{n/2} x.
    pub fn even_sphere(
        n: i64,
        lambda: Q,
        truncation: Option<i64>,
    ) -> Result<BorelModel, EquivariantError> {
        if n < 2 || n % 2 == 1 {
            return Err(EquivariantError::BadParameters(format!(
                "even sphere dimension must be even and at least 2, got {n}"
            )));
        }
        let truncation = truncation.unwrap_or(2 * n);
        if truncation < n {
            return Err(EquivariantError::BadParameters(format!(
                "truncation {truncation} cannot hold the twisting term of degree {n}"
            )));
        }
        let base = truncated_base(1, truncation);
        let fiber = Generators::new(vec![("x", n), ("y", 2 * n - 1)]);
        let ctx = RelCtx::new(base.clone(), fiber.clone());
        let x = RelPoly::fiber_gen(&ctx, 0);
        let mut dy = x.pow(2);
        if !lambda.is_zero() {
            let idx = base
                .monomial_index(&[(n / 2) as u32])
                .expect("truncation holds a^{n/2}");
            dy = dy.add(&RelPoly::base_elem(&ctx, idx).mul(&x).scale(&lambda));
        }
        let rel = RelativeSullivan::new(base, fiber, vec![RelPoly::zero(&ctx), dy])?;
        Ok(BorelModel {
            rel,
            family: BorelFamily::EvenSphere { n, lambda },
            torus_rank: 1,
            truncation,
        })
    }

    /// Circle action on complex projective n-space:
    /// Dy = x^{n+1} + Σ λ_j a^j x^{n+1-j}.
    pub fn complex_projective(
        n: i64,
        lambdas: Vec<Q>,
        truncation: Option<i64>,
    ) -> Result<BorelModel, EquivariantError> {
        if n < 1 {
            return Err(EquivariantError::BadParameters(format!(
                "projective dimension must be positive, got {n}"
            )));
        }
        if lambdas.len() as i64 != n {
            return Err(EquivariantError::BadParameters(format!(
                "expected {n} twisting scalars, got {}",
                lambdas.len()
            )));
        }
        let truncation = truncation.unwrap_or(2 * n + 2);
        if truncation < 2 * n + 2 {
            return Err(EquivariantError::BadParameters(format!(
                "truncation {truncation} cannot hold the twisting terms up to degree {}",
                2 * n + 2
            )));
        }
        let base = truncated_base(1, truncation);
        let fiber = Generators::new(vec![("x", 2), ("y", 2 * n + 1)]);
        let ctx = RelCtx::new(base.clone(), fiber.clone());
        let x = RelPoly::fiber_gen(&ctx, 0);
        let mut dy = x.pow((n + 1) as u32);
        for (j, lambda) in lambdas.iter().enumerate() {
            if lambda.is_zero() {
                continue;
            }
            let j = j as i64 + 1;
            let idx = base
                .monomial_index(&[j as u32])
                .expect("truncation holds a^j");
            dy = dy.add(
                &RelPoly::base_elem(&ctx, idx)
                    .mul(&x.pow((n + 1 - j) as u32))
                    .scale(lambda),
            );
        }
        let rel = RelativeSullivan::new(base, fiber, vec![RelPoly::zero(&ctx), dy])?;
        Ok(BorelModel {
            rel,
            family: BorelFamily::ComplexProjective { n, lambdas },
            torus_rank: 1,
            truncation,
        })
    }

    /// Wrap a hand-built relative Sullivan algebra whose base came from a
    /// truncated polynomial algebra.
    pub fn custom(rel: RelativeSullivan, truncation: i64) -> BorelModel {
        let torus_rank = rel.base().vars().len();
        BorelModel {
            rel,
            family: BorelFamily::Custom,
            torus_rank,
            truncation,
        }
    }

    pub fn rel(&self) -> &RelativeSullivan {
        &self.rel
    }

    pub fn family(&self) -> &BorelFamily {
        &self.family
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }
}

/// The base algebra of a rank-m torus at the given truncation: variables
/// a1, ..., am of degree two (just `a` for the circle).
pub fn truncated_base(rank: usize, truncation: i64) -> Arc<FiniteAlgebra> {
    let vars: Vec<(String, i64)> = if rank == 1 {
        vec![("a".to_string(), 2)]
    } else {
        (1..=rank).map(|i| (format!("a{i}"), 2)).collect()
    };
    Arc::new(FiniteAlgebra::truncated_polynomial(vars, truncation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn odd_sphere_model_is_trivial() {
        let b = BorelModel::odd_sphere(3, 1, None).unwrap();
        assert_eq!(b.truncation(), 4);
        assert_eq!(b.rel().base().dim(), 3); // 1, a, a^2
        assert!(b.rel().d_gen(0).is_zero());
    }

    #[test]
    fn even_sphere_twisting_term() {
        let b = BorelModel::even_sphere(2, q(1), Some(8)).unwrap();
        let rel = b.rel();
        let ctx = rel.ctx();
        let x = RelPoly::fiber_gen(ctx, 0);
        let a = RelPoly::base_elem(ctx, rel.base().monomial_index(&[1]).unwrap());
        assert_eq!(rel.d_gen(1), &x.pow(2).add(&a.mul(&x)));
    }

    #[test]
    fn projective_trivial_parameters() {
        let b = BorelModel::complex_projective(2, vec![q(0), q(0)], None).unwrap();
        let rel = b.rel();
        let x = RelPoly::fiber_gen(rel.ctx(), 0);
        assert_eq!(rel.d_gen(1), &x.pow(3));
    }

    #[test]
    fn degree_inconsistent_parameters_rejected() {
        assert!(BorelModel::even_sphere(3, q(1), None).is_err());
        assert!(BorelModel::odd_sphere(4, 1, None).is_err());
        assert!(BorelModel::complex_projective(2, vec![q(1)], None).is_err());
        assert!(BorelModel::even_sphere(4, q(1), Some(2)).is_err());
    }

    #[test]
    fn torus_base_variables_are_named() {
        let base = truncated_base(2, 4);
        assert_eq!(base.vars()[0].0, "a1");
        assert_eq!(base.vars()[1].0, "a2");
        assert_eq!(base.dim(), 6);
    }
}
