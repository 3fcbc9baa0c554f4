//! Exact linear algebra over the rationals: reduced echelon forms, ranks,
//! nullspaces, and membership of a polynomial in the span of others.

use crate::algebra::{Poly, Q};
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("inputs must be homogeneous of one common degree")]
    Inhomogeneous,
}

/// Dense matrix of exact rationals, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> QMatrix {
        QMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> QMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Vec<Vec<Q>>, Vec<usize>) {
        let mut m: Vec<Vec<Q>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..self.cols {
            let Some(sel) = (lead..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(lead, sel);
            let inv = m[lead][col].recip();
            for v in m[lead].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..self.rows {
                if r != lead && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in 0..self.cols {
                        let delta = &m[lead][c] * &factor;
                        m[r][c] = &m[r][c] - &delta;
                    }
                }
            }
            pivots.push(col);
            lead += 1;
            if lead == self.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the kernel, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (m, pivots) = self.rref();
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -m[row][free].clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Incrementally built reduced echelon basis of a subspace of Q^n.
#[derive(Debug, Clone)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Echelon {
        Echelon {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    /// Fully reduce a vector against the stored rows.
    pub fn reduce(&self, mut v: Vec<Q>) -> Vec<Q> {
        assert_eq!(v.len(), self.dim);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for c in 0..self.dim {
                    let delta = &row[c] * &factor;
                    v[c] = &v[c] - &delta;
                }
            }
        }
        v
    }

    /// Insert a vector; returns true when it enlarges the span.
    pub fn insert(&mut self, v: Vec<Q>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        // Back-substitute into earlier rows to keep the basis reduced.
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let factor = row[p].clone();
                for c in 0..self.dim {
                    let delta = &v[c] * &factor;
                    row[c] = &row[c] - &delta;
                }
            }
        }
        let at = self
            .pivots
            .iter()
            .position(|&q| q > p)
            .unwrap_or(self.pivots.len());
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    pub fn contains(&self, v: Vec<Q>) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }
}

/// Result of expressing a target in the span of given polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Exact coefficients, one per span element, recombining to the target.
    Coefficients(Vec<Q>),
    /// Certified: the target is independent of the span.
    Absent,
}

/// Express `target` as an exact rational combination of `span`, or certify
/// that no combination exists. All nonzero inputs must be homogeneous of one
/// common degree.
pub fn solve_membership(target: &Poly, span: &[Poly]) -> Result<Membership, LinalgError> {
    let mut degree: Option<i64> = None;
    for p in std::iter::once(target).chain(span.iter()) {
        if p.is_zero() {
            continue;
        }
        let Some(d) = p.try_degree() else {
            return Err(LinalgError::Inhomogeneous);
        };
        match degree {
            None => degree = Some(d),
            Some(d0) if d0 == d => {}
            _ => return Err(LinalgError::Inhomogeneous),
        }
    }

    let mut monomials = BTreeSet::new();
    for p in std::iter::once(target).chain(span.iter()) {
        for (m, _) in p.terms() {
            monomials.insert(m.clone());
        }
    }
    let monomials: Vec<_> = monomials.into_iter().collect();
    let index: std::collections::BTreeMap<_, _> = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();

    // Columns are the span elements, plus the target as the last column.
    let mut mat = QMatrix::zeros(monomials.len(), span.len() + 1);
    for (j, p) in span.iter().enumerate() {
        for (m, c) in p.terms() {
            mat.set(index[m], j, c.clone());
        }
    }
    for (m, c) in target.terms() {
        mat.set(index[m], span.len(), c.clone());
    }

    let (rref, pivots) = mat.rref();
    if pivots.contains(&span.len()) {
        return Ok(Membership::Absent);
    }
    // Free variables are zero: read each pivot row for its coefficient.
    let mut coeffs = vec![Q::zero(); span.len()];
    for (row, &p) in pivots.iter().enumerate() {
        coeffs[p] = rref[row][span.len()].clone();
    }
    Ok(Membership::Coefficients(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, Generators};

    fn setup() -> (std::sync::Arc<Generators>, Poly, Poly) {
        let ctx = Generators::new(vec![("x", 2), ("y", 2)]);
        let x = Poly::gen(&ctx, 0);
        let y = Poly::gen(&ctx, 1);
        (ctx, x, y)
    }

    #[test]
    fn membership_in_span() {
        let (_, x, y) = setup();
        let x2 = x.pow(2);
        let xy = x.mul(&y);
        let got = solve_membership(&x2, &[x2.clone(), xy.clone()]).unwrap();
        assert_eq!(got, Membership::Coefficients(vec![q(1), q(0)]));

        let got = solve_membership(&x2, &[xy.clone()]).unwrap();
        assert_eq!(got, Membership::Absent);

        let target = x2.scale(&q(3)).add(&xy.scale(&q(2)));
        let got = solve_membership(&target, &[x2.clone(), xy.clone()]).unwrap();
        assert_eq!(got, Membership::Coefficients(vec![q(3), q(2)]));
    }

    #[test]
    fn membership_round_trip() {
        let (ctx, x, y) = setup();
        let span = vec![
            x.pow(2).add(&y.pow(2)),
            x.mul(&y).sub(&y.pow(2)),
            y.pow(2),
        ];
        let target = x.pow(2).scale(&q(5)).add(&x.mul(&y).scale(&q(-2)));
        match solve_membership(&target, &span).unwrap() {
            Membership::Coefficients(cs) => {
                let mut sum = Poly::zero(&ctx);
                for (c, p) in cs.iter().zip(&span) {
                    sum = sum.add(&p.scale(c));
                }
                assert_eq!(sum, target);
            }
            Membership::Absent => panic!("expected membership"),
        }
    }

    #[test]
    fn inhomogeneous_rejected() {
        let (_, x, y) = setup();
        let bad = x.add(&y.pow(2));
        assert_eq!(
            solve_membership(&bad, &[x.clone()]),
            Err(LinalgError::Inhomogeneous)
        );
    }

    #[test]
    fn rank_nullity() {
        let m = QMatrix::from_rows(vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(1), q(0), q(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(m.rank() + ns.len(), m.ncols());
    }

    #[test]
    fn echelon_insert_and_reduce() {
        let mut e = Echelon::new(3);
        assert!(e.insert(vec![q(0), q(2), q(4)]));
        assert!(e.insert(vec![q(1), q(1), q(0)]));
        assert!(!e.insert(vec![q(1), q(5), q(8)]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(vec![q(3), q(5), q(4)]));
        assert!(!e.contains(vec![q(0), q(0), q(1)]));
    }
}
