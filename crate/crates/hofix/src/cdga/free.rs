//! Free CDGAs: a generator list plus a differential assignment, extended by
//! the Leibniz rule, with exact cohomology up to a degree bound.

use super::CdgaError;
use crate::algebra::{Generators, Monomial, Poly, Q};
use crate::linalg::{Echelon, QMatrix};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A free graded-commutative algebra with a differential of degree +1.
/// Construction verifies that d raises degree by one and that d^2 = 0 on
/// every generator.
#[derive(Debug, Clone)]
pub struct FreeCdga {
    ctx: Arc<Generators>,
    diff: Vec<Poly>,
}

impl FreeCdga {
    pub fn new(ctx: Arc<Generators>, diff: Vec<Poly>) -> Result<FreeCdga, CdgaError> {
        assert_eq!(diff.len(), ctx.len(), "one differential value per generator");
        for (i, g) in ctx.iter() {
            if !diff[i].is_homogeneous_of_degree(g.degree + 1) {
                return Err(CdgaError::DifferentialDegree {
                    gen: g.name.clone(),
                    expected: g.degree + 1,
                });
            }
        }
        let cdga = FreeCdga { ctx, diff };
        for (i, g) in cdga.ctx.iter() {
            if !cdga.apply_d(&cdga.diff[i]).is_zero() {
                return Err(CdgaError::DifferentialSquare {
                    gen: g.name.clone(),
                });
            }
        }
        Ok(cdga)
    }

    pub fn zero_differential(ctx: Arc<Generators>) -> FreeCdga {
        let diff = (0..ctx.len()).map(|_| Poly::zero(&ctx)).collect();
        FreeCdga { ctx, diff }
    }

    pub fn ctx(&self) -> &Arc<Generators> {
        &self.ctx
    }

    pub fn d_gen(&self, i: usize) -> &Poly {
        &self.diff[i]
    }

    pub fn differentials(&self) -> &[Poly] {
        &self.diff
    }

    /// Extend the differential to a polynomial by the Leibniz rule
    /// `d(pq) = d(p) q + (-1)^{|p|} p d(q)`.
    pub fn apply_d(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero(&self.ctx);
        for (m, c) in p.terms() {
            out = out.add(&self.d_monomial(m).scale(c));
        }
        out
    }

    fn d_monomial(&self, m: &Monomial) -> Poly {
        let Some((g, rest)) = m.split_first(&self.ctx) else {
            return Poly::zero(&self.ctx);
        };
        let g_poly = Poly::gen(&self.ctx, g);
        let rest_poly = Poly::monomial(&self.ctx, rest.clone(), crate::algebra::q(1));
        let mut out = self.diff[g].mul(&rest_poly);
        let tail = self.d_monomial(&rest);
        if !tail.is_zero() {
            let signed = if self.ctx.degree(g).rem_euclid(2) == 1 {
                g_poly.mul(&tail).neg()
            } else {
                g_poly.mul(&tail)
            };
            out = out.add(&signed);
        }
        out
    }

    /// Exact Betti numbers and reduced-echelon representative cocycles in
    /// degrees `0..=dmax`. Requires every generator in positive degree.
    pub fn cohomology(&self, dmax: i64) -> Result<Vec<CohomologyDegree>, CdgaError> {
        for (_, g) in self.ctx.iter() {
            if g.degree <= 0 {
                return Err(CdgaError::NonPositiveGenerator {
                    gen: g.name.clone(),
                    degree: g.degree,
                });
            }
        }
        let bases: Vec<Vec<Monomial>> = (0..=dmax + 1)
            .map(|d| enumerate_monomials(&self.ctx, d))
            .collect();
        let index: Vec<BTreeMap<&Monomial, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, m)| (m, i)).collect())
            .collect();

        // One differential matrix per degree: columns index degree-d
        // monomials, rows index degree-(d+1) monomials.
        let mut mats: Vec<QMatrix> = Vec::new();
        for d in 0..=dmax {
            let (dn, dn1) = (d as usize, (d + 1) as usize);
            let mut mat = QMatrix::zeros(bases[dn1].len(), bases[dn].len());
            for (j, m) in bases[dn].iter().enumerate() {
                let dm = self.d_monomial(m);
                for (m1, c) in dm.terms() {
                    mat.set(index[dn1][m1], j, c.clone());
                }
            }
            mats.push(mat);
        }

        let mut out = Vec::new();
        let mut prev_image: Option<Vec<Vec<Q>>> = None;
        for d in 0..=dmax {
            let dn = d as usize;
            let dim = bases[dn].len();
            let kernel = mats[dn].nullspace();
            let mut image = Echelon::new(dim);
            if let Some(cols) = prev_image.take() {
                for col in cols {
                    image.insert(col);
                }
            }
            let mut reps = Echelon::new(dim);
            for v in kernel {
                reps.insert(image.reduce(v));
            }
            let representatives: Vec<Poly> = reps
                .rows()
                .iter()
                .map(|row| {
                    Poly::from_terms(
                        &self.ctx,
                        row.iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(i, c)| (bases[dn][i].clone(), c.clone()))
                            .collect(),
                    )
                })
                .collect();
            out.push(CohomologyDegree {
                degree: d,
                dim: representatives.len(),
                representatives,
            });
            // Columns of this degree's differential feed the next degree.
            let cols: Vec<Vec<Q>> = (0..bases[dn].len())
                .map(|j| {
                    (0..bases[dn + 1].len())
                        .map(|i| mats[dn].get(i, j).clone())
                        .collect()
                })
                .collect();
            prev_image = Some(cols);
        }
        Ok(out)
    }
}

/// Cohomology in a single degree: dimension and representative cocycles in
/// reduced echelon form.
#[derive(Debug, Clone)]
pub struct CohomologyDegree {
    pub degree: i64,
    pub dim: usize,
    pub representatives: Vec<Poly>,
}

/// All monomials of exact degree `d` over generators of positive degree,
/// sorted in the canonical monomial order.
pub fn enumerate_monomials(ctx: &Arc<Generators>, d: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, u32)> = Vec::new();
    enumerate_rec(ctx, 0, d, &mut stack, &mut out);
    out.sort();
    out
}

fn enumerate_rec(
    ctx: &Arc<Generators>,
    from: usize,
    remaining: i64,
    stack: &mut Vec<(usize, u32)>,
    out: &mut Vec<Monomial>,
) {
    if remaining == 0 {
        out.push(Monomial::new(ctx, stack).expect("exponents in range"));
        return;
    }
    if remaining < 0 || from == ctx.len() {
        return;
    }
    let deg = ctx.degree(from);
    debug_assert!(deg > 0);
    let max_e = if ctx.is_odd(from) {
        1
    } else {
        (remaining / deg) as u32
    };
    for e in 0..=max_e {
        if deg * e as i64 > remaining {
            break;
        }
        if e > 0 {
            stack.push((from, e));
        }
        enumerate_rec(ctx, from + 1, remaining - deg * e as i64, stack, out);
        if e > 0 {
            stack.pop();
        }
    }
}
