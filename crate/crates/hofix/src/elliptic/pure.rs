//! The associated pure differential: even generators map to zero, odd
//! generators keep only the part of their differential lying in the even
//! subalgebra.

use crate::algebra::Poly;
use crate::cdga::FreeCdga;

/// A free CDGA whose differential is the pure part of a source CDGA.
#[derive(Debug, Clone)]
pub struct PureCdga {
    cdga: FreeCdga,
}

impl PureCdga {
    pub fn as_cdga(&self) -> &FreeCdga {
        &self.cdga
    }

    pub fn into_cdga(self) -> FreeCdga {
        self.cdga
    }
}

/// Compute the associated pure differential. The result is validated as a
/// CDGA, so the fact that the pure part squares to zero is re-checked on
/// every instance.
pub fn pure_part(cdga: &FreeCdga) -> PureCdga {
    let ctx = cdga.ctx().clone();
    let diff: Vec<Poly> = ctx
        .iter()
        .map(|(i, g)| {
            if g.is_odd() {
                cdga.d_gen(i).filter_terms(|m| {
                    m.factors()
                        .iter()
                        .all(|&(h, _)| !ctx.is_odd(h as usize))
                })
            } else {
                Poly::zero(&ctx)
            }
        })
        .collect();
    let cdga = FreeCdga::new(ctx, diff).expect("pure part squares to zero");
    PureCdga { cdga }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generators;

    #[test]
    fn already_pure_is_unchanged() {
        let ctx = Generators::new(vec![("x", 2), ("y", 3)]);
        let x = Poly::gen(&ctx, 0);
        let a = FreeCdga::new(ctx.clone(), vec![Poly::zero(&ctx), x.pow(2)]).unwrap();
        let p = pure_part(&a);
        assert_eq!(p.as_cdga().d_gen(1), &x.pow(2));
        assert!(p.as_cdga().d_gen(0).is_zero());
    }

    #[test]
    fn odd_containing_terms_dropped() {
        // d y2 = y1 w + x^3: the pure part keeps only x^3.
        let ctx = Generators::new(vec![("x", 2), ("y1", 3), ("w", 3), ("y2", 5)]);
        let x = Poly::gen(&ctx, 0);
        let y1 = Poly::gen(&ctx, 1);
        let w = Poly::gen(&ctx, 2);
        let a = FreeCdga::new(
            ctx.clone(),
            vec![
                Poly::zero(&ctx),
                Poly::zero(&ctx),
                Poly::zero(&ctx),
                y1.mul(&w).add(&x.pow(3)),
            ],
        )
        .unwrap();
        let p = pure_part(&a);
        assert_eq!(p.as_cdga().d_gen(3), &x.pow(3));
    }

    #[test]
    fn zero_differential_stays_zero() {
        let ctx = Generators::new(vec![("x", 2), ("y", 3)]);
        let a = FreeCdga::zero_differential(ctx);
        let p = pure_part(&a);
        assert!(p.as_cdga().differentials().iter().all(Poly::is_zero));
    }
}
