//! Retractions of a relative Sullivan algebra onto its base: assignments
//! φ(v) ∈ A with φ(Dv) = 0, their exact enumeration when the constraint
//! system is triangular with univariate equations, and the change of fiber
//! coordinates that turns a chosen retraction into the zero one.

use super::relative::{RelativeSullivan, RelPoly};
use super::SectionError;
use crate::algebra::{Generators, Poly, Q};
use crate::roots::rational_roots;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A degree-preserving algebra retraction (A ⊗ ΛV, D) -> (A, 0), stored as
/// one coefficient vector over the base basis per fiber generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Retraction {
    values: Vec<Vec<Q>>,
}

impl Retraction {
    /// The zero retraction; valid exactly when DV ⊂ A ⊗ Λ⁺V.
    pub fn zero(rel: &RelativeSullivan) -> Retraction {
        Retraction {
            values: vec![vec![Q::zero(); rel.base().dim()]; rel.fiber().len()],
        }
    }

    pub fn new(rel: &RelativeSullivan, values: Vec<Vec<Q>>) -> Result<Retraction, SectionError> {
        assert_eq!(values.len(), rel.fiber().len());
        for (v, g) in rel.fiber().iter() {
            assert_eq!(values[v].len(), rel.base().dim());
            for (b, c) in values[v].iter().enumerate() {
                if !c.is_zero() && rel.base().degree(b) != g.degree {
                    return Err(SectionError::RetractionDegree {
                        gen: g.name.clone(),
                    });
                }
            }
        }
        let phi = Retraction { values };
        for (v, g) in rel.fiber().iter() {
            let image = phi.apply(rel, rel.d_gen(v));
            if image.iter().any(|c| !c.is_zero()) {
                return Err(SectionError::NotRetraction {
                    gen: g.name.clone(),
                });
            }
        }
        Ok(phi)
    }

    pub fn value(&self, v: usize) -> &[Q] {
        &self.values[v]
    }

    pub fn is_zero(&self) -> bool {
        self.values
            .iter()
            .all(|row| row.iter().all(Q::is_zero))
    }

    /// Apply the multiplicative extension to an element of A ⊗ ΛV, landing
    /// in A.
    pub fn apply(&self, rel: &RelativeSullivan, p: &RelPoly) -> Vec<Q> {
        let base = rel.base();
        let mut out = vec![Q::zero(); base.dim()];
        for (b, m, c) in p.terms() {
            let mut acc = vec![Q::zero(); base.dim()];
            acc[b] = c.clone();
            for &(g, e) in m.factors() {
                for _ in 0..e {
                    acc = base.mul_vec(&acc, &self.values[g as usize]);
                }
                if acc.iter().all(Q::is_zero) {
                    break;
                }
            }
            for (o, a) in out.iter_mut().zip(acc) {
                *o = &*o + &a;
            }
        }
        out
    }

    /// Describe φ compactly: `x = 0`, `x = -1*a`, one entry per fiber
    /// generator with a nonzero space of possible values.
    pub fn describe(&self, rel: &RelativeSullivan) -> Vec<(String, String)> {
        let base = rel.base();
        let mut out = Vec::new();
        for (v, g) in rel.fiber().iter() {
            if base.degrees().iter().all(|&d| d != g.degree) {
                continue;
            }
            let mut pieces: Vec<String> = Vec::new();
            for (b, c) in self.values[v].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                use num_traits::One;
                if c.is_one() {
                    pieces.push(base.label_string(b));
                } else {
                    pieces.push(format!("{}*{}", c, base.label_string(b)));
                }
            }
            let rhs = if pieces.is_empty() {
                "0".to_string()
            } else {
                pieces.join(" + ")
            };
            out.push((g.name.clone(), rhs));
        }
        out
    }
}

/// Rewrite the fibration in the coordinates v - φ(v), so that the given
/// retraction becomes the zero one. The section-model quotient for (F, φ)
/// and for (rebase(F, φ), 0) coincide.
pub fn rebase(rel: &RelativeSullivan, phi: &Retraction) -> Result<RelativeSullivan, SectionError> {
    let ctx = rel.ctx();
    let diff: Vec<RelPoly> = (0..rel.fiber().len())
        .map(|v| {
            rel.d_gen(v).substitute_fiber(|g| {
                RelPoly::fiber_gen(ctx, g)
                    .add(&RelPoly::from_base_vec(ctx, phi.value(g)))
            })
        })
        .collect();
    let rebased = RelativeSullivan::new(rel.base().clone(), rel.fiber().clone(), diff)?;
    debug_assert!(rebased.zero_retraction_valid());
    Ok(rebased)
}

/// Enumerate every retraction, processing fiber generators in an order
/// where each constraint φ(Dv) = 0 involves only already-seen unknowns and
/// each new equation is univariate over Q. Equations in two or more unknowns
/// abort with `NonTriangular`; a coefficient that no equation ever fixes
/// aborts with `FreeRetractionParameter`.
pub fn enumerate_retractions(
    rel: &RelativeSullivan,
) -> Result<Vec<Retraction>, SectionError> {
    let base = rel.base();
    let fiber = rel.fiber();

    // Unknowns: one even symbol per (fiber generator, base element of equal
    // degree).
    let mut unknown_names: Vec<(String, i64)> = Vec::new();
    let mut unknown_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (v, g) in fiber.iter() {
        for b in 0..base.dim() {
            if base.degree(b) == g.degree {
                unknown_of.insert((v, b), unknown_names.len());
                unknown_names.push((format!("u_{}_{}", fiber.name(v), b), 0));
            }
        }
    }
    let uvars = Generators::new(unknown_names);

    // Symbolic φ(v): coefficient vector over the base with polynomial
    // entries in the unknowns.
    let phi_sym: Vec<Vec<Poly>> = (0..fiber.len())
        .map(|v| {
            (0..base.dim())
                .map(|b| match unknown_of.get(&(v, b)) {
                    Some(&u) => Poly::gen(&uvars, u),
                    None => Poly::zero(&uvars),
                })
                .collect()
        })
        .collect();

    let order = triangular_order(rel)?;

    // Each partial solution assigns rationals to a subset of unknowns.
    let mut solutions: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new()];
    for &v in &order {
        let equations = symbolic_phi_of_d(rel, &uvars, &phi_sym, v);
        for eq in equations {
            let mut next: Vec<BTreeMap<usize, Q>> = Vec::new();
            for assignment in solutions {
                let reduced = substitute_known(&eq, &uvars, &assignment);
                if reduced.is_zero() {
                    next.push(assignment);
                    continue;
                }
                let vars = variables_of(&reduced);
                match vars.len() {
                    0 => { /* nonzero constant: contradiction, prune */ }
                    1 => {
                        let u = vars[0];
                        let coeffs = univariate_coeffs(&reduced, u);
                        let mut roots = rational_roots(&coeffs)
                            .expect("nonzero polynomial");
                        roots.dedup();
                        for r in roots {
                            let mut a = assignment.clone();
                            a.insert(u, r);
                            next.push(a);
                        }
                    }
                    _ => {
                        return Err(SectionError::NonTriangular {
                            gen: fiber.name(v).to_string(),
                        });
                    }
                }
            }
            solutions = next;
        }
    }

    // Any unknown untouched by every equation parametrizes an infinite
    // family; report it instead of guessing.
    for assignment in &solutions {
        for (&(v, _), &u) in &unknown_of {
            if !assignment.contains_key(&u) {
                return Err(SectionError::FreeRetractionParameter {
                    gen: fiber.name(v).to_string(),
                });
            }
        }
    }

    let mut out = Vec::new();
    for assignment in solutions {
        let mut values = vec![vec![Q::zero(); base.dim()]; fiber.len()];
        for (&(v, b), &u) in &unknown_of {
            values[v][b] = assignment[&u].clone();
        }
        let phi = Retraction::new(rel, values)?;
        out.push(phi);
    }
    out.sort_by(|a, b| a.values.cmp(&b.values));
    out.dedup();
    Ok(out)
}

/// Order the fiber generators so every differential only involves earlier
/// ones.
pub fn triangular_order(rel: &RelativeSullivan) -> Result<Vec<usize>, SectionError> {
    let n = rel.fiber().len();
    let deps: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut d = Vec::new();
            for (_, m, _) in rel.d_gen(v).terms() {
                for &(g, _) in m.factors() {
                    d.push(g as usize);
                }
            }
            d.sort_unstable();
            d.dedup();
            d
        })
        .collect();
    toposort(n, &deps).ok_or(SectionError::CyclicDifferential)
}

/// The same ordering for a plain free CDGA. Ties are broken by the original
/// generator order, so the result is deterministic.
pub fn triangular_order_of(cdga: &crate::cdga::FreeCdga) -> Result<Vec<usize>, SectionError> {
    let n = cdga.ctx().len();
    let deps: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut d = Vec::new();
            for (m, _) in cdga.d_gen(v).terms() {
                for &(g, _) in m.factors() {
                    d.push(g as usize);
                }
            }
            d.sort_unstable();
            d.dedup();
            d
        })
        .collect();
    toposort(n, &deps).ok_or(SectionError::CyclicDifferential)
}

pub(crate) fn toposort(n: usize, deps: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut state = vec![0u8; n]; // 0 unseen, 1 active, 2 done
    let mut order = Vec::with_capacity(n);
    fn visit(
        v: usize,
        deps: &[Vec<usize>],
        state: &mut [u8],
        order: &mut Vec<usize>,
    ) -> bool {
        match state[v] {
            2 => return true,
            1 => return false,
            _ => {}
        }
        state[v] = 1;
        for &w in &deps[v] {
            if w != v && !visit(w, deps, state, order) {
                return false;
            }
            if w == v {
                return false;
            }
        }
        state[v] = 2;
        order.push(v);
        true
    }
    for v in 0..n {
        if !visit(v, deps, &mut state, &mut order) {
            return None;
        }
    }
    Some(order)
}

/// φ(Dv) with symbolic unknowns: one polynomial equation per base
/// coordinate, nonzero ones only.
fn symbolic_phi_of_d(
    rel: &RelativeSullivan,
    uvars: &Arc<Generators>,
    phi_sym: &[Vec<Poly>],
    v: usize,
) -> Vec<Poly> {
    let base = rel.base();
    let dim = base.dim();
    let mut acc = vec![Poly::zero(uvars); dim];
    for (b, m, c) in rel.d_gen(v).terms() {
        let mut term = vec![Poly::zero(uvars); dim];
        term[b] = Poly::constant(uvars, c.clone());
        for &(g, e) in m.factors() {
            for _ in 0..e {
                term = mul_symbolic(base, &term, &phi_sym[g as usize], uvars);
            }
            if term.iter().all(Poly::is_zero) {
                break;
            }
        }
        for (a, t) in acc.iter_mut().zip(term) {
            *a = a.add(&t);
        }
    }
    acc.into_iter().filter(|p| !p.is_zero()).collect()
}

fn mul_symbolic(
    base: &crate::cdga::FiniteAlgebra,
    a: &[Poly],
    b: &[Poly],
    uvars: &Arc<Generators>,
) -> Vec<Poly> {
    let dim = base.dim();
    let mut out = vec![Poly::zero(uvars); dim];
    for (i, pa) in a.iter().enumerate() {
        if pa.is_zero() {
            continue;
        }
        for (j, pb) in b.iter().enumerate() {
            if pb.is_zero() {
                continue;
            }
            let prod = pa.mul(pb);
            for (k, c) in base.product(i, j).iter().enumerate() {
                if !c.is_zero() {
                    out[k] = out[k].add(&prod.scale(c));
                }
            }
        }
    }
    out
}

fn substitute_known(
    p: &Poly,
    uvars: &Arc<Generators>,
    assignment: &BTreeMap<usize, Q>,
) -> Poly {
    p.substitute(uvars, |g| match assignment.get(&g) {
        Some(c) => Poly::constant(uvars, c.clone()),
        None => Poly::gen(uvars, g),
    })
}

fn variables_of(p: &Poly) -> Vec<usize> {
    let mut vars = Vec::new();
    for (m, _) in p.terms() {
        for &(g, _) in m.factors() {
            vars.push(g as usize);
        }
    }
    vars.sort_unstable();
    vars.dedup();
    vars
}

fn univariate_coeffs(p: &Poly, u: usize) -> Vec<Q> {
    let mut coeffs: Vec<Q> = Vec::new();
    for (m, c) in p.terms() {
        let e = m.exponent(u) as usize;
        if coeffs.len() <= e {
            coeffs.resize(e + 1, Q::zero());
        }
        coeffs[e] = &coeffs[e] + c;
    }
    coeffs
}
