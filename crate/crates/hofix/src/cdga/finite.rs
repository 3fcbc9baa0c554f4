//! Finite-dimensional graded algebras presented by a basis and a
//! multiplication table of exact rational structure constants.

use super::{CdgaError, FreeCdga};
use crate::algebra::Q;
use num_traits::{One, Zero};
use std::fmt::Write as _;

/// How a basis element is written: as a monomial in named variables (the
/// usual case for truncated polynomial algebras) or by a bare name (for
/// algebras given by explicit tables).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisLabel {
    /// Exponents over the algebra's variable list.
    Monomial(Vec<u32>),
    Named(String),
}

/// A connected finite graded-commutative algebra with basis, unit, exact
/// multiplication table, and an optional differential.
///
/// Construction checks unitality, graded commutativity and associativity on
/// all basis pairs and triples, and, when a differential is present, the
/// Leibniz rule and d^2 = 0.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    vars: Vec<(String, i64)>,
    labels: Vec<BasisLabel>,
    degrees: Vec<i64>,
    unit: usize,
    /// `table[i][j]` is the coefficient vector of `b_i b_j` over the basis.
    table: Vec<Vec<Vec<Q>>>,
    diff: Option<Vec<Vec<Q>>>,
}

impl FiniteAlgebra {
    pub fn new(
        vars: Vec<(String, i64)>,
        labels: Vec<BasisLabel>,
        degrees: Vec<i64>,
        unit: usize,
        table: Vec<Vec<Vec<Q>>>,
        diff: Option<Vec<Vec<Q>>>,
    ) -> Result<FiniteAlgebra, CdgaError> {
        let n = labels.len();
        let fail = |msg: String| Err(CdgaError::InvalidAlgebra(msg));
        if degrees.len() != n || table.len() != n || table.iter().any(|r| r.len() != n) {
            return fail("basis, degrees and table sizes disagree".into());
        }
        if degrees.iter().any(|&d| d < 0) {
            return fail("basis degrees must be non-negative".into());
        }
        if degrees[unit] != 0 {
            return fail("unit must sit in degree zero".into());
        }
        if degrees.iter().filter(|&&d| d == 0).count() != 1 {
            return fail("algebra must be connected: one basis element in degree zero".into());
        }
        let alg = FiniteAlgebra {
            vars,
            labels,
            degrees,
            unit,
            table,
            diff,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<(), CdgaError> {
        let n = self.dim();
        let fail = |msg: String| Err(CdgaError::InvalidAlgebra(msg));
        for i in 0..n {
            for j in 0..n {
                let prod = &self.table[i][j];
                if prod.len() != n {
                    return fail("ragged multiplication table".into());
                }
                let expected = self.degrees[i] + self.degrees[j];
                for (k, c) in prod.iter().enumerate() {
                    if !c.is_zero() && self.degrees[k] != expected {
                        return fail(format!(
                            "product {}*{} is not homogeneous",
                            self.label_string(i),
                            self.label_string(j)
                        ));
                    }
                }
            }
        }
        for i in 0..n {
            if self.table[self.unit][i] != unit_vec(n, i) || self.table[i][self.unit] != unit_vec(n, i)
            {
                return fail(format!("unit law fails at {}", self.label_string(i)));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let sign = if self.degrees[i] % 2 == 1 && self.degrees[j] % 2 == 1 {
                    -Q::one()
                } else {
                    Q::one()
                };
                let rhs: Vec<Q> = self.table[j][i].iter().map(|c| c * &sign).collect();
                if self.table[i][j] != rhs {
                    return fail(format!(
                        "graded commutativity fails at {}*{}",
                        self.label_string(i),
                        self.label_string(j)
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.table[i][j].clone();
                for k in 0..n {
                    let left = self.mul_vec(&ij, &unit_vec(n, k));
                    let right = self.mul_vec(&unit_vec(n, i), &self.table[j][k]);
                    if left != right {
                        return fail(format!(
                            "associativity fails at ({},{},{})",
                            self.label_string(i),
                            self.label_string(j),
                            self.label_string(k)
                        ));
                    }
                }
            }
        }
        if let Some(d) = &self.diff {
            if d.len() != n || d.iter().any(|r| r.len() != n) {
                return fail("differential matrix has the wrong shape".into());
            }
            for i in 0..n {
                for (k, c) in d[i].iter().enumerate() {
                    if !c.is_zero() && self.degrees[k] != self.degrees[i] + 1 {
                        return fail(format!(
                            "differential of {} does not raise degree by one",
                            self.label_string(i)
                        ));
                    }
                }
            }
            for i in 0..n {
                if !self.d_vec(&d[i]).iter().all(Q::is_zero) {
                    return fail(format!("d^2 != 0 at {}", self.label_string(i)));
                }
            }
            // Leibniz on basis pairs: d(b_i b_j) = d(b_i) b_j + (-1)^{|b_i|} b_i d(b_j).
            for i in 0..n {
                for j in 0..n {
                    let lhs = self.d_vec(&self.table[i][j]);
                    let mut rhs = self.mul_vec(&d[i], &unit_vec(n, j));
                    let sign = if self.degrees[i] % 2 == 1 {
                        -Q::one()
                    } else {
                        Q::one()
                    };
                    let second = self.mul_vec(&unit_vec(n, i), &d[j]);
                    for (r, s) in rhs.iter_mut().zip(second) {
                        *r = &*r + &(&s * &sign);
                    }
                    if lhs != rhs {
                        return fail(format!(
                            "Leibniz fails at {}*{}",
                            self.label_string(i),
                            self.label_string(j)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Quotient of a free polynomial CDGA with zero differential by all
    /// monomials of degree above `n`. Generators must be even and positive.
    pub fn truncate_free(free: &FreeCdga, n: i64) -> Result<FiniteAlgebra, CdgaError> {
        if free.differentials().iter().any(|p| !p.is_zero()) {
            return Err(CdgaError::InvalidAlgebra(
                "truncation requires a zero differential".into(),
            ));
        }
        for (_, g) in free.ctx().iter() {
            if g.is_odd() || g.degree <= 0 {
                return Err(CdgaError::InvalidAlgebra(format!(
                    "truncation requires even positive generators; `{}` has degree {}",
                    g.name, g.degree
                )));
            }
        }
        let vars: Vec<(String, i64)> = free
            .ctx()
            .iter()
            .map(|(_, g)| (g.name.clone(), g.degree))
            .collect();
        Ok(Self::truncated_polynomial(vars, n))
    }

    /// The truncated polynomial algebra on even variables: basis is every
    /// monomial of degree at most `n`, products beyond `n` vanish.
    pub fn truncated_polynomial(vars: Vec<(String, i64)>, n: i64) -> FiniteAlgebra {
        assert!(n >= 0);
        let mut exps: Vec<Vec<u32>> = Vec::new();
        enumerate_bounded(&vars, 0, n, &mut vec![0; vars.len()], &mut exps);
        exps.sort_by_key(|e| (mono_degree(&vars, e), e.clone()));
        let degrees: Vec<i64> = exps.iter().map(|e| mono_degree(&vars, e)).collect();
        let dim = exps.len();
        let index: std::collections::BTreeMap<Vec<u32>, usize> = exps
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let mut table = vec![vec![vec![Q::zero(); dim]; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let sum: Vec<u32> = exps[i]
                    .iter()
                    .zip(&exps[j])
                    .map(|(a, b)| a + b)
                    .collect();
                if let Some(&k) = index.get(&sum) {
                    table[i][j][k] = Q::one();
                }
            }
        }
        FiniteAlgebra {
            vars,
            labels: exps.into_iter().map(BasisLabel::Monomial).collect(),
            degrees,
            unit: 0,
            table,
            diff: None,
        }
    }

    /// The ground field as a finite algebra (base of a trivial group).
    pub fn rationals() -> FiniteAlgebra {
        FiniteAlgebra::truncated_polynomial(Vec::new(), 0)
    }

    /// Skeletal truncation: quotient by everything above degree `n` plus a
    /// complement of the cocycles in degree `n`. The complement is chosen by
    /// Gaussian elimination in the canonical basis order, so the result is
    /// deterministic. With a zero differential this is the degree <= n part.
    pub fn skeleton_truncate(&self, n: i64) -> FiniteAlgebra {
        let dim = self.dim();
        // Pivot degree-n elements: those whose differentials are jointly
        // independent; they span the chosen complement C^n.
        let mut pivot = vec![false; dim];
        if let Some(d) = &self.diff {
            let mut ech = crate::linalg::Echelon::new(dim);
            for i in 0..dim {
                if self.degrees[i] == n && ech.insert(d[i].clone()) {
                    pivot[i] = true;
                }
            }
        }
        let keep: Vec<usize> = (0..dim)
            .filter(|&i| self.degrees[i] < n || (self.degrees[i] == n && !pivot[i]))
            .collect();
        let reindex: std::collections::BTreeMap<usize, usize> = keep
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let project = |v: &[Q]| -> Vec<Q> {
            keep.iter().map(|&old| v[old].clone()).collect()
        };
        let table: Vec<Vec<Vec<Q>>> = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| project(&self.table[i][j])).collect())
            .collect();
        let diff = self
            .diff
            .as_ref()
            .map(|d| keep.iter().map(|&i| project(&d[i])).collect());
        FiniteAlgebra {
            vars: self.vars.clone(),
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            degrees: keep.iter().map(|&i| self.degrees[i]).collect(),
            unit: reindex[&self.unit],
            table,
            diff,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn vars(&self) -> &[(String, i64)] {
        &self.vars
    }

    pub fn label(&self, i: usize) -> &BasisLabel {
        &self.labels[i]
    }

    pub fn top_degree(&self) -> i64 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn has_differential(&self) -> bool {
        self.diff.is_some()
    }

    pub fn differential_is_zero(&self) -> bool {
        match &self.diff {
            None => true,
            Some(d) => d.iter().all(|row| row.iter().all(Q::is_zero)),
        }
    }

    pub fn is_evenly_graded(&self) -> bool {
        self.degrees.iter().all(|d| d % 2 == 0)
    }

    /// Index of the basis element with the given monomial exponents, if it
    /// survives the truncation.
    pub fn monomial_index(&self, exps: &[u32]) -> Option<usize> {
        self.labels.iter().position(|l| match l {
            BasisLabel::Monomial(e) => e == exps,
            BasisLabel::Named(_) => false,
        })
    }

    pub fn named_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| match l {
            BasisLabel::Monomial(_) => false,
            BasisLabel::Named(n) => n == name,
        })
    }

    pub fn product(&self, i: usize, j: usize) -> &[Q] {
        &self.table[i][j]
    }

    /// Product of two coefficient vectors.
    pub fn mul_vec(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let c = ca * cb;
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = &out[k] + &(t * &c);
                    }
                }
            }
        }
        out
    }

    pub fn d_vec(&self, v: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        if let Some(d) = &self.diff {
            for (i, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (k, t) in d[i].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = &out[k] + &(t * c);
                    }
                }
            }
        }
        out
    }

    /// Printable form of a basis element.
    pub fn label_string(&self, i: usize) -> String {
        match &self.labels[i] {
            BasisLabel::Named(n) => n.clone(),
            BasisLabel::Monomial(exps) => {
                if exps.iter().all(|&e| e == 0) {
                    return "1".into();
                }
                let mut out = String::new();
                for (v, &e) in exps.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !out.is_empty() {
                        out.push('*');
                    }
                    let _ = write!(out, "{}", self.vars[v].0);
                    if e > 1 {
                        let _ = write!(out, "^{}", e);
                    }
                }
                out
            }
        }
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

fn mono_degree(vars: &[(String, i64)], exps: &[u32]) -> i64 {
    vars.iter()
        .zip(exps)
        .map(|((_, d), &e)| d * e as i64)
        .sum()
}

fn enumerate_bounded(
    vars: &[(String, i64)],
    from: usize,
    budget: i64,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if from == vars.len() {
        out.push(current.clone());
        return;
    }
    let deg = vars[from].1;
    let mut e = 0u32;
    loop {
        let used = deg * e as i64;
        if used > budget {
            break;
        }
        current[from] = e;
        enumerate_bounded(vars, from + 1, budget - used, current, out);
        e += 1;
    }
    current[from] = 0;
}
