//! Syntactic identification of simplified free CDGAs against a catalog of
//! rational homotopy types: products of odd spheres, even spheres, and
//! complex projective spaces.

use crate::algebra::Poly;
use crate::cdga::FreeCdga;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CatalogFactor {
    /// S^n for odd n: one odd generator, zero differential.
    OddSphere(i64),
    /// S^n for even n: Λ(x, y) with dy = x^2.
    EvenSphere(i64),
    /// CP^k: Λ(x, y) with |x| = 2 and dy = x^{k+1}.
    ComplexProjective(u32),
}

impl CatalogFactor {
    pub fn dimension(&self) -> i64 {
        match self {
            CatalogFactor::OddSphere(n) | CatalogFactor::EvenSphere(n) => *n,
            CatalogFactor::ComplexProjective(k) => 2 * *k as i64,
        }
    }
}

impl fmt::Display for CatalogFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogFactor::OddSphere(n) | CatalogFactor::EvenSphere(n) => write!(f, "S^{}", n),
            CatalogFactor::ComplexProjective(k) => write!(f, "CP^{}", k),
        }
    }
}

/// Catalog identification of a simplified presentation. Matching is
/// syntactic on the given generators and differentials, not up to
/// arbitrary isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identification {
    /// A point: no generators at all.
    Point,
    Product(Vec<CatalogFactor>),
    Unknown,
}

impl fmt::Display for Identification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identification::Point => write!(f, "point"),
            Identification::Unknown => write!(f, "unknown"),
            Identification::Product(factors) => {
                let mut first = true;
                for factor in factors {
                    if !first {
                        write!(f, " x ")?;
                    }
                    first = false;
                    write!(f, "{}", factor)?;
                }
                Ok(())
            }
        }
    }
}

/// Split the generators into groups closed under the differential and match
/// each group against the catalog shapes.
pub fn identify_catalog(cdga: &FreeCdga) -> Identification {
    let ctx = cdga.ctx();
    let n = ctx.len();
    if n == 0 {
        return Identification::Point;
    }
    // Union-find over generators: g joins everything in d(g).
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for g in 0..n {
        for (m, _) in cdga.d_gen(g).terms() {
            for &(h, _) in m.factors() {
                let (a, b) = (find(&mut parent, g), find(&mut parent, h as usize));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for g in 0..n {
        let root = find(&mut parent, g);
        groups.entry(root).or_default().push(g);
    }

    let mut factors = Vec::new();
    for group in groups.values() {
        match identify_group(cdga, group) {
            Some(f) => factors.push(f),
            None => return Identification::Unknown,
        }
    }
    factors.sort_by_key(|f| (f.dimension(), *f));
    Identification::Product(factors)
}

fn identify_group(cdga: &FreeCdga, group: &[usize]) -> Option<CatalogFactor> {
    let ctx = cdga.ctx();
    match group {
        [g] => {
            if cdga.d_gen(*g).is_zero() && ctx.degree(*g).rem_euclid(2) == 1 && ctx.degree(*g) > 0
            {
                Some(CatalogFactor::OddSphere(ctx.degree(*g)))
            } else {
                None
            }
        }
        [a, b] => {
            let (x, y) = if ctx.is_odd(*a) { (*b, *a) } else { (*a, *b) };
            if ctx.is_odd(x) || !ctx.is_odd(y) || !cdga.d_gen(x).is_zero() {
                return None;
            }
            let dy = cdga.d_gen(y);
            if dy.num_terms() != 1 {
                return None;
            }
            let (m, _c) = dy.terms().next().unwrap();
            // dy = c x^{k+1} for some k >= 1.
            if m.factors().len() != 1 || m.factors()[0].0 as usize != x {
                return None;
            }
            let e = m.factors()[0].1;
            if e < 2 {
                return None;
            }
            let k = e - 1;
            if k == 1 {
                Some(CatalogFactor::EvenSphere(ctx.degree(x)))
            } else if ctx.degree(x) == 2 {
                Some(CatalogFactor::ComplexProjective(k))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Convenience: the set of generator degrees of a presentation, with
/// multiplicity, for printed summaries.
pub fn degree_multiset(cdga: &FreeCdga) -> Vec<i64> {
    let mut out: Vec<i64> = cdga.ctx().iter().map(|(_, g)| g.degree).collect();
    out.sort_unstable();
    out
}

/// The differentials that are nonzero, as (generator name, value) pairs in
/// generator order.
pub fn nonzero_differentials(cdga: &FreeCdga) -> Vec<(String, Poly)> {
    cdga.ctx()
        .iter()
        .filter(|(i, _)| !cdga.d_gen(*i).is_zero())
        .map(|(i, g)| (g.name.clone(), cdga.d_gen(i).clone()))
        .collect()
}

/// All generator degrees distinct and odd: used by tests asserting odd
/// sphere products.
pub fn odd_sphere_product_degrees(cdga: &FreeCdga) -> Option<BTreeSet<i64>> {
    if !cdga.differentials().iter().all(Poly::is_zero) {
        return None;
    }
    let mut out = BTreeSet::new();
    for (_, g) in cdga.ctx().iter() {
        if g.degree.rem_euclid(2) == 0 {
            return None;
        }
        out.insert(g.degree);
    }
    Some(out)
}
