//! Quasi-isomorphic simplification of free CDGAs: removal of contractible
//! generator pairs, and normalization of differentials modulo exact
//! decomposables. Both passes are changes of generators, so cohomology is
//! preserved; tests check this degree by degree on the corpus.

use crate::algebra::{Generators, Monomial, Poly, Q};
use crate::cdga::{enumerate_monomials, FreeCdga};
use crate::linalg::Echelon;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Remove pairs (u, w) where the linear part of d(u) is a nonzero scalar
/// times the generator w, substituting w by the solved decomposable rest.
/// Runs to a fixpoint; the result has no such pair left.
pub fn eliminate_contractibles(cdga: &FreeCdga) -> FreeCdga {
    let mut current = cdga.clone();
    loop {
        let Some((u, w, c, gamma)) = find_pair(&current) else {
            return current;
        };
        let ctx = current.ctx().clone();
        let mut names = Vec::new();
        let mut keep_of: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, g) in ctx.iter() {
            if i == u || i == w {
                continue;
            }
            keep_of.insert(i, names.len());
            names.push((g.name.clone(), g.degree));
        }
        let new_ctx = Generators::new(names);
        // Quotient map: u -> 0, w -> -Γ/c, others to themselves.
        let w_image = gamma.scale(&(-Q::one() / &c));
        let image = |g: usize| -> Poly {
            if g == u {
                Poly::zero(&ctx)
            } else if g == w {
                w_image.clone()
            } else {
                Poly::gen(&ctx, g)
            }
        };
        let rename = |p: &Poly| -> Poly {
            p.substitute(&new_ctx, |g| match keep_of.get(&g) {
                Some(&n) => Poly::gen(&new_ctx, n),
                None => unreachable!("eliminated generator survived substitution"),
            })
        };
        let diff: Vec<Poly> = (0..ctx.len())
            .filter(|&i| i != u && i != w)
            .map(|i| rename(&current.d_gen(i).substitute(&ctx, image)))
            .collect();
        current = FreeCdga::new(new_ctx, diff)
            .expect("contractible quotient stays a CDGA");
    }
}

/// Locate an eliminable pair: linear(d u) = c·w with the decomposable rest
/// Γ free of u and w, and w absent from every other linear part. Scans in
/// generator order for determinism.
fn find_pair(cdga: &FreeCdga) -> Option<(usize, usize, Q, Poly)> {
    let ctx = cdga.ctx();
    let linear_parts: Vec<Poly> = (0..ctx.len())
        .map(|i| cdga.d_gen(i).filter_terms(|m| m.word_length() == 1))
        .collect();
    for u in 0..ctx.len() {
        let lin = &linear_parts[u];
        if lin.num_terms() != 1 {
            continue;
        }
        let (m, c) = lin.terms().next().unwrap();
        let w = m.factors()[0].0 as usize;
        let gamma = cdga.d_gen(u).sub(lin);
        if gamma.terms().any(|(m, _)| m.contains(u) || m.contains(w)) {
            continue;
        }
        let w_elsewhere = (0..ctx.len())
            .any(|i| i != u && linear_parts[i].terms().any(|(m, _)| m.contains(w)));
        if w_elsewhere {
            continue;
        }
        return Some((u, w, c.clone(), gamma));
    }
    None
}

/// Normalize differentials by subtracting exact decomposables: for each
/// generator u in increasing degree, reduce d(u) modulo the span of d(m)
/// over decomposable monomials m of degree |u| not involving u, replacing u
/// by u - ξ. Presentations of twisted components become products this way.
pub fn reduce_differentials(cdga: &FreeCdga) -> FreeCdga {
    let mut current = cdga.clone();
    if current.ctx().iter().any(|(_, g)| g.degree < 1) {
        // Monomial enumeration per degree needs positive generators.
        return current;
    }
    let ctx_len = current.ctx().len();
    let mut order: Vec<usize> = (0..ctx_len).collect();
    order.sort_by_key(|&i| (current.ctx().degree(i), i));
    for &u in &order {
        if current.d_gen(u).is_zero() {
            continue;
        }
        let ctx = current.ctx().clone();
        let target_degree = ctx.degree(u) + 1;
        if ctx.degree(u) <= 0 {
            continue;
        }
        // Candidate decomposables of degree |u| avoiding u itself.
        let candidates: Vec<Monomial> = enumerate_monomials(&ctx, ctx.degree(u))
            .into_iter()
            .filter(|m| m.word_length() >= 2 && !m.contains(u))
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let monomials = enumerate_monomials(&ctx, target_degree);
        let index: BTreeMap<&Monomial, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let dim = monomials.len();
        let useful: Vec<(Monomial, Poly)> = candidates
            .into_iter()
            .filter_map(|m| {
                let dm = current
                    .apply_d(&Poly::monomial(&ctx, m.clone(), Q::one()));
                if dm.is_zero() {
                    None
                } else {
                    Some((m, dm))
                }
            })
            .collect();
        if useful.is_empty() {
            continue;
        }
        // Augmented elimination: coordinates of d(m) first, bookkeeping tail
        // after, so reductions of d(u) record the combination used.
        let width = dim + useful.len();
        let mut ech = Echelon::new(width);
        for (i, (_, dm)) in useful.iter().enumerate() {
            let mut row = vec![Q::zero(); width];
            for (m, c) in dm.terms() {
                row[index[m]] = c.clone();
            }
            row[dim + i] = Q::one();
            ech.insert(row);
        }
        let mut v = vec![Q::zero(); width];
        for (m, c) in current.d_gen(u).terms() {
            v[index[m]] = c.clone();
        }
        let reduced = ech.reduce(v);
        let du_red = Poly::from_terms(
            &ctx,
            (0..dim)
                .filter(|&i| !reduced[i].is_zero())
                .map(|i| (monomials[i].clone(), reduced[i].clone()))
                .collect(),
        );
        if &du_red == current.d_gen(u) {
            continue;
        }
        let xi = {
            let mut p = Poly::zero(&ctx);
            for (i, (m, _)) in useful.iter().enumerate() {
                let c = &reduced[dim + i];
                if !c.is_zero() {
                    p = p.add(&Poly::monomial(&ctx, m.clone(), -c.clone()));
                }
            }
            p
        };
        debug_assert_eq!(current.apply_d(&xi), current.d_gen(u).sub(&du_red));
        // New generator u' = u - ξ: its differential is the reduction, and
        // every other differential rewrites u as u' + ξ.
        let diff: Vec<Poly> = (0..ctx.len())
            .map(|i| {
                if i == u {
                    du_red.clone()
                } else {
                    current.d_gen(i).substitute(&ctx, |g| {
                        if g == u {
                            Poly::gen(&ctx, u).add(&xi)
                        } else {
                            Poly::gen(&ctx, g)
                        }
                    })
                }
            })
            .collect();
        current = FreeCdga::new(ctx, diff).expect("generator change stays a CDGA");
    }
    current
}

/// Both passes in order: contractible pairs, then decomposable reduction.
pub fn simplify_presentation(cdga: &FreeCdga) -> FreeCdga {
    reduce_differentials(&eliminate_contractibles(cdga))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn contractible_pair_collapses_to_ground_field() {
        let ctx = Generators::new(vec![("x", 2), ("y", 1)]);
        let x = Poly::gen(&ctx, 0);
        let cdga = FreeCdga::new(ctx.clone(), vec![Poly::zero(&ctx), x]).unwrap();
        let reduced = eliminate_contractibles(&cdga);
        assert_eq!(reduced.ctx().len(), 0);
    }

    #[test]
    fn zero_differential_unchanged() {
        let ctx = Generators::new(vec![("x", 2), ("y", 3)]);
        let cdga = FreeCdga::zero_differential(ctx);
        let reduced = eliminate_contractibles(&cdga);
        assert_eq!(reduced.ctx().len(), 2);
    }

    #[test]
    fn even_sphere_component_reduces_to_one_generator() {
        // Λ(x:2, y1:3, ya:1) with d y1 = x^2, d ya = x: the pair (ya, x)
        // collapses, killing x^2, and only y1 with zero differential stays.
        let ctx = Generators::new(vec![("x", 2), ("y1", 3), ("ya", 1)]);
        let x = Poly::gen(&ctx, 0);
        let cdga =
            FreeCdga::new(ctx.clone(), vec![Poly::zero(&ctx), x.pow(2), x.clone()]).unwrap();
        let reduced = eliminate_contractibles(&cdga);
        assert_eq!(reduced.ctx().len(), 1);
        assert_eq!(reduced.ctx().name(0), "y1");
        assert_eq!(reduced.ctx().degree(0), 3);
        assert!(reduced.d_gen(0).is_zero());
    }

    #[test]
    fn elimination_preserves_cohomology() {
        let ctx = Generators::new(vec![("x", 2), ("y1", 3), ("ya", 1), ("z", 5)]);
        let x = Poly::gen(&ctx, 0);
        let cdga = FreeCdga::new(
            ctx.clone(),
            vec![
                Poly::zero(&ctx),
                x.pow(2),
                x.scale(&q(3)),
                x.pow(3),
            ],
        )
        .unwrap();
        let reduced = eliminate_contractibles(&cdga);
        let h1: Vec<usize> = cdga.cohomology(12).unwrap().iter().map(|c| c.dim).collect();
        let h2: Vec<usize> = reduced
            .cohomology(12)
            .unwrap()
            .iter()
            .map(|c| c.dim)
            .collect();
        assert_eq!(h1, h2);
    }

    #[test]
    fn pair_with_decomposable_rest_substitutes_it() {
        // d u1 = w + u2 u3 with everything else closed: the pair (u1, w)
        // collapses and w is replaced by -u2 u3 wherever it appears.
        let ctx = Generators::new(vec![("u1", 1), ("u2", 1), ("u3", 1), ("w", 2)]);
        let u2 = Poly::gen(&ctx, 1);
        let u3 = Poly::gen(&ctx, 2);
        let w = Poly::gen(&ctx, 3);
        let cdga = FreeCdga::new(
            ctx.clone(),
            vec![
                w.add(&u2.mul(&u3)),
                Poly::zero(&ctx),
                Poly::zero(&ctx),
                Poly::zero(&ctx),
            ],
        )
        .unwrap();
        let reduced = eliminate_contractibles(&cdga);
        assert_eq!(reduced.ctx().len(), 2);
        assert!(reduced.differentials().iter().all(Poly::is_zero));
        let h1: Vec<usize> = cdga.cohomology(8).unwrap().iter().map(|c| c.dim).collect();
        let h2: Vec<usize> = reduced
            .cohomology(8)
            .unwrap()
            .iter()
            .map(|c| c.dim)
            .collect();
        assert_eq!(h1, h2);
    }

    #[test]
    fn reduction_rewrites_changed_generators_in_other_differentials() {
        // du = x^3 reduces through ξ = x y, and the occurrence of u inside
        // dw must be rewritten as u + ξ before w itself reduces to zero.
        let ctx = Generators::new(vec![("x", 2), ("y", 3), ("u", 5), ("w", 8)]);
        let x = Poly::gen(&ctx, 0);
        let y = Poly::gen(&ctx, 1);
        let u = Poly::gen(&ctx, 2);
        let cdga = FreeCdga::new(
            ctx.clone(),
            vec![
                Poly::zero(&ctx),
                x.pow(2),
                x.pow(3),
                x.pow(2).mul(&u).sub(&x.pow(3).mul(&y)),
            ],
        )
        .unwrap();
        let reduced = reduce_differentials(&cdga);
        assert_eq!(reduced.d_gen(1), &x.pow(2), "dy is irreducible");
        assert!(reduced.d_gen(2).is_zero(), "du reduces through x y");
        assert!(reduced.d_gen(3).is_zero(), "dw reduces after the rewrite");
        let h1: Vec<usize> = cdga.cohomology(12).unwrap().iter().map(|c| c.dim).collect();
        let h2: Vec<usize> = reduced
            .cohomology(12)
            .unwrap()
            .iter()
            .map(|c| c.dim)
            .collect();
        assert_eq!(h1, h2);
    }

    #[test]
    fn decomposable_reduction_splits_projective_component() {
        // Λ(x:2, y5:5, y3:3, y1:1), d y5 = x^3, d y3 = 2 x^2: the change
        // y5 -> y5 - (1/2) x y3 kills d y5.
        let ctx = Generators::new(vec![("x", 2), ("y5", 5), ("y3", 3), ("y1", 1)]);
        let x = Poly::gen(&ctx, 0);
        let cdga = FreeCdga::new(
            ctx.clone(),
            vec![
                Poly::zero(&ctx),
                x.pow(3),
                x.pow(2).scale(&q(2)),
                Poly::zero(&ctx),
            ],
        )
        .unwrap();
        let reduced = reduce_differentials(&cdga);
        assert!(reduced.d_gen(1).is_zero(), "d y5 reduces to zero");
        assert_eq!(reduced.d_gen(2), &x.pow(2).scale(&q(2)));
        let h1: Vec<usize> = cdga.cohomology(12).unwrap().iter().map(|c| c.dim).collect();
        let h2: Vec<usize> = reduced
            .cohomology(12)
            .unwrap()
            .iter()
            .map(|c| c.dim)
            .collect();
        assert_eq!(h1, h2);
    }
}
