//! Matrices with entries in a commutative polynomial ring over the
//! rationals, and their rank over the fraction field.
//!
//! Rank is computed by fraction-free elimination: every division is by an
//! earlier pivot and is exact, so no rational-function arithmetic is needed.
//! A random-evaluation check at a point avoiding the pivot zero locus runs
//! as a safety net after each elimination.

use crate::algebra::{Generators, Monomial, Poly, Q};
use crate::linalg::QMatrix;
use num_traits::Zero;
use std::sync::Arc;

/// Matrix over a multivariate polynomial ring; all variables must have even
/// degree so the ring is honestly commutative.
#[derive(Debug, Clone)]
pub struct PolyMatrix {
    vars: Arc<Generators>,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(vars: &Arc<Generators>, rows: usize, cols: usize) -> PolyMatrix {
        for (_, g) in vars.iter() {
            assert!(!g.is_odd(), "polynomial matrix variables must be even");
        }
        PolyMatrix {
            vars: vars.clone(),
            rows,
            cols,
            entries: vec![Poly::zero(vars); rows * cols],
        }
    }

    pub fn from_rows(vars: &Arc<Generators>, rows: Vec<Vec<Poly>>) -> PolyMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = PolyMatrix::new(vars, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, p) in row.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &Arc<Generators> {
        &self.vars
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.entries[r * self.cols + c] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// Matrix product over the polynomial ring.
    pub fn matmul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = PolyMatrix::new(&self.vars, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(&self.vars);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Evaluate every entry at a rational point.
    pub fn evaluate(&self, point: &[Q]) -> QMatrix {
        let mut out = QMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, eval_poly(self.get(r, c), point));
            }
        }
        out
    }

    /// Rank over the fraction field, by fraction-free elimination with the
    /// evaluation cross-check described in the module docs.
    pub fn rank(&self) -> usize {
        let (rank, pivots) = self.fraction_free_rank();
        // Safety net: evaluate at a point where no pivot vanishes; the
        // specialized rank must agree.
        let mut rng = XorShift::new(0x9e3779b97f4a7c15);
        let nvars = self.vars.len();
        'outer: for _ in 0..64 {
            let point: Vec<Q> = (0..nvars).map(|_| rng.small_rational()).collect();
            for p in &pivots {
                if eval_poly(p, &point).is_zero() {
                    continue 'outer;
                }
            }
            let eval_rank = self.evaluate(&point).rank();
            assert_eq!(
                eval_rank, rank,
                "fraction-free rank disagrees with evaluation at a regular point"
            );
            return rank;
        }
        // No regular point found in the attempt budget; the exact answer
        // stands on its own.
        rank
    }

    /// One-step fraction-free elimination. Returns the rank and the pivot
    /// polynomials encountered.
    fn fraction_free_rank(&self) -> (usize, Vec<Poly>) {
        let mut m: Vec<Vec<Poly>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).clone()).collect())
            .collect();
        let mut prev = Poly::one(&self.vars);
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..self.cols {
            if lead == self.rows {
                break;
            }
            // Deterministic pivot: fewest terms among nonzero candidates,
            // ties to the smallest row index.
            let pivot_row = (lead..self.rows)
                .filter(|&r| !m[r][col].is_zero())
                .min_by_key(|&r| (m[r][col].num_terms(), r));
            let Some(pr) = pivot_row else {
                continue;
            };
            m.swap(lead, pr);
            let pivot = m[lead][col].clone();
            for i in lead + 1..self.rows {
                for j in col + 1..self.cols {
                    let num = pivot.mul(&m[i][j]).sub(&m[i][col].mul(&m[lead][j]));
                    m[i][j] = div_exact(&num, &prev)
                        .expect("fraction-free elimination divides exactly");
                }
                m[i][col] = Poly::zero(&self.vars);
            }
            prev = pivot.clone();
            pivots.push(pivot);
            lead += 1;
        }
        (lead, pivots)
    }
}

/// Evaluate a polynomial at a rational point (one value per variable).
pub fn eval_poly(p: &Poly, point: &[Q]) -> Q {
    let mut out = Q::zero();
    for (m, c) in p.terms() {
        let mut v = c.clone();
        for &(g, e) in m.factors() {
            for _ in 0..e {
                v *= &point[g as usize];
            }
        }
        out += v;
    }
    out
}

/// Exact division of multivariate polynomials in even variables. Returns
/// `None` when the division is not exact.
pub fn div_exact(num: &Poly, den: &Poly) -> Option<Poly> {
    assert!(!den.is_zero(), "division by zero polynomial");
    let ctx = num.ctx().clone();
    let nvars = ctx.len();
    let (lt_den_m, lt_den_c) = leading_term(den, nvars)?;
    let den_exp = dense_exponents(&lt_den_m, nvars);

    let mut quotient = Poly::zero(&ctx);
    let mut rem = num.clone();
    while !rem.is_zero() {
        let (lt_m, lt_c) = leading_term(&rem, nvars).unwrap();
        let exp = dense_exponents(&lt_m, nvars);
        let mut t = Vec::with_capacity(nvars);
        for v in 0..nvars {
            if exp[v] < den_exp[v] {
                return None;
            }
            t.push((v, exp[v] - den_exp[v]));
        }
        let mono = Monomial::new(&ctx, &t).expect("even variables never collide");
        let term = Poly::monomial(&ctx, mono, &lt_c / &lt_den_c);
        rem = rem.sub(&term.mul(den));
        quotient = quotient.add(&term);
    }
    Some(quotient)
}

/// Leading term in graded lexicographic order on dense exponent vectors.
fn leading_term(p: &Poly, nvars: usize) -> Option<(Monomial, Q)> {
    p.terms()
        .max_by(|(m1, _), (m2, _)| {
            m1.degree().cmp(&m2.degree()).then_with(|| {
                dense_exponents(m1, nvars).cmp(&dense_exponents(m2, nvars))
            })
        })
        .map(|(m, c)| (m.clone(), c.clone()))
}

fn dense_exponents(m: &Monomial, nvars: usize) -> Vec<u32> {
    let mut out = vec![0u32; nvars];
    for &(g, e) in m.factors() {
        out[g as usize] = e;
    }
    out
}

/// Small deterministic xorshift generator for evaluation points.
pub(crate) struct XorShift {
    state: u64,
}

impl XorShift {
    pub(crate) fn new(seed: u64) -> XorShift {
        XorShift {
            state: seed.max(1),
        }
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    /// Nonzero rational with small numerator and denominator.
    pub(crate) fn small_rational(&mut self) -> Q {
        let num = (self.next_u64() % 19) as i64 - 9;
        let den = (self.next_u64() % 7) as i64 + 1;
        let num = if num == 0 { 10 } else { num };
        Q::new(num.into(), den.into())
    }
}
