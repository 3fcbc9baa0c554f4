//! Dual coalgebras of finite algebras. The diagonal structure constants are
//! the transpose of the multiplication table; for a monomial basis the
//! diagonal of a dual element enumerates the ordered factorizations of its
//! underlying monomial inside the basis.

use super::{CdgaError, FiniteAlgebra};
use crate::algebra::Q;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// The dual of a [`FiniteAlgebra`]: one dual basis element per algebra basis
/// element, with the transposed diagonal. Coassociativity and the counit
/// laws are verified at construction.
#[derive(Debug, Clone)]
pub struct DualCoalgebra {
    algebra: Arc<FiniteAlgebra>,
    /// `diagonal[k]` lists (i, j, c) with Δβ_k = Σ c · β_i ⊗ β_j.
    diagonal: Vec<Vec<(usize, usize, Q)>>,
}

impl DualCoalgebra {
    pub fn dualize(algebra: Arc<FiniteAlgebra>) -> Result<DualCoalgebra, CdgaError> {
        let n = algebra.dim();
        let mut diagonal = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                for (k, c) in algebra.product(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        diagonal[k].push((i, j, c.clone()));
                    }
                }
            }
        }
        for row in diagonal.iter_mut() {
            row.sort_by_key(|&(i, j, _)| (i, j));
        }
        let dual = DualCoalgebra { algebra, diagonal };
        dual.check_coassociativity()?;
        dual.check_counit()?;
        Ok(dual)
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Degree of the underlying basis element.
    pub fn underlying_degree(&self, k: usize) -> i64 {
        self.algebra.degree(k)
    }

    pub fn counit_index(&self) -> usize {
        self.algebra.unit()
    }

    pub fn diagonal(&self, k: usize) -> &[(usize, usize, Q)] {
        &self.diagonal[k]
    }

    /// Iterated diagonal Δ_p, as a map from length-p index tuples to
    /// coefficients. Δ_1 is the identity.
    pub fn iterated_diagonal(&self, k: usize, p: usize) -> BTreeMap<Vec<usize>, Q> {
        assert!(p >= 1);
        let mut acc: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
        acc.insert(vec![k], Q::one());
        for _ in 1..p {
            let mut next: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
            for (tuple, c) in acc {
                let last = *tuple.last().unwrap();
                for &(i, j, ref s) in &self.diagonal[last] {
                    let mut t = tuple.clone();
                    *t.last_mut().unwrap() = i;
                    t.push(j);
                    let entry = next.entry(t).or_insert_with(Q::zero);
                    *entry = &*entry + &(c.clone() * s);
                }
            }
            acc = next;
        }
        acc
    }

    /// Name of a dual basis element, e.g. `(a^2)#`.
    pub fn name(&self, k: usize) -> String {
        format!("({})#", self.algebra.label_string(k))
    }

    fn check_coassociativity(&self) -> Result<(), CdgaError> {
        for k in 0..self.dim() {
            let mut left: BTreeMap<(usize, usize, usize), Q> = BTreeMap::new();
            let mut right: BTreeMap<(usize, usize, usize), Q> = BTreeMap::new();
            for &(i, j, ref c) in &self.diagonal[k] {
                // (Δ ⊗ 1)Δ: expand the first leg.
                for &(i1, i2, ref s) in &self.diagonal[i] {
                    add_entry(&mut left, (i1, i2, j), c * s);
                }
                // (1 ⊗ Δ)Δ: expand the second leg.
                for &(j1, j2, ref s) in &self.diagonal[j] {
                    add_entry(&mut right, (i, j1, j2), c * s);
                }
            }
            left.retain(|_, v| !v.is_zero());
            right.retain(|_, v| !v.is_zero());
            if left != right {
                return Err(CdgaError::InvalidAlgebra(format!(
                    "coassociativity fails at {}",
                    self.name(k)
                )));
            }
        }
        Ok(())
    }

    fn check_counit(&self) -> Result<(), CdgaError> {
        let unit = self.algebra.unit();
        for k in 0..self.dim() {
            // (ε ⊗ 1)Δβ = β = (1 ⊗ ε)Δβ, with ε(β_i) = [i = unit].
            let mut left = vec![Q::zero(); self.dim()];
            let mut right = vec![Q::zero(); self.dim()];
            for &(i, j, ref c) in &self.diagonal[k] {
                if i == unit {
                    left[j] = &left[j] + c;
                }
                if j == unit {
                    right[i] = &right[i] + c;
                }
            }
            let expect: Vec<Q> = (0..self.dim())
                .map(|i| if i == k { Q::one() } else { Q::zero() })
                .collect();
            if left != expect || right != expect {
                return Err(CdgaError::InvalidAlgebra(format!(
                    "counit law fails at {}",
                    self.name(k)
                )));
            }
        }
        Ok(())
    }
}

fn add_entry(map: &mut BTreeMap<(usize, usize, usize), Q>, key: (usize, usize, usize), v: Q) {
    let e = map.entry(key).or_insert_with(Q::zero);
    *e = &*e + &v;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, Generators};
    use crate::cdga::FreeCdga;

    fn truncated(n: i64) -> Arc<FiniteAlgebra> {
        let ctx = Generators::new(vec![("a", 2)]);
        let free = FreeCdga::zero_differential(ctx);
        Arc::new(FiniteAlgebra::truncate_free(&free, n).unwrap())
    }

    #[test]
    fn diagonal_enumerates_factorizations() {
        // A = Q[a]/(a^3): Δ(a^2)# = (a^2)# ⊗ 1# + a# ⊗ a# + 1# ⊗ (a^2)#.
        let dual = DualCoalgebra::dualize(truncated(4)).unwrap();
        let d = dual.diagonal(2);
        assert_eq!(
            d,
            &[(0, 2, q(1)), (1, 1, q(1)), (2, 0, q(1))]
        );
    }

    #[test]
    fn unit_diagonal_is_grouplike() {
        let dual = DualCoalgebra::dualize(truncated(4)).unwrap();
        assert_eq!(dual.diagonal(0), &[(0, 0, q(1))]);
    }

    #[test]
    fn iterated_diagonal_counts_weak_compositions() {
        // Δ_3 (a^2)# has one term per weak composition of 2 into 3 parts.
        let dual = DualCoalgebra::dualize(truncated(4)).unwrap();
        let d3 = dual.iterated_diagonal(2, 3);
        assert_eq!(d3.len(), 6);
        for (tuple, c) in &d3 {
            assert_eq!(tuple.len(), 3);
            let total: i64 = tuple.iter().map(|&i| dual.underlying_degree(i)).sum();
            assert_eq!(total, 4);
            assert_eq!(c, &q(1));
        }
    }

    #[test]
    fn dualize_two_variable_base() {
        let ctx = Generators::new(vec![("a1", 2), ("a2", 2)]);
        let free = FreeCdga::zero_differential(ctx);
        let alg = Arc::new(FiniteAlgebra::truncate_free(&free, 4).unwrap());
        let dual = DualCoalgebra::dualize(alg.clone()).unwrap();
        // Δ of (a1 a2)# has the four ordered factorizations of a1 a2.
        let idx = alg.monomial_index(&[1, 1]).unwrap();
        assert_eq!(dual.diagonal(idx).len(), 4);
    }
}
