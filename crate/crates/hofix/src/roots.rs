//! All rational roots of a univariate polynomial with rational coefficients,
//! with multiplicity, found exactly.

use crate::algebra::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootsError {
    #[error("the zero polynomial has no well-defined root set")]
    ZeroPolynomial,
}

/// Rational roots, with multiplicity, of `c[0] + c[1] t + ... + c[n] t^n`.
///
/// The coefficients are scaled to integers, candidates come from the
/// rational-root theorem, and every accepted root is verified by exact
/// substitution before the polynomial is deflated by it. The returned list
/// is sorted ascending.
pub fn rational_roots(coeffs: &[Q]) -> Result<Vec<Q>, RootsError> {
    let mut cs: Vec<Q> = coeffs.to_vec();
    while cs.last().is_some_and(Q::is_zero) {
        cs.pop();
    }
    if cs.is_empty() {
        return Err(RootsError::ZeroPolynomial);
    }

    let mut roots = Vec::new();

    // Zero roots: multiplicity is the lowest nonzero coefficient index.
    let low = cs.iter().position(|c| !c.is_zero()).unwrap();
    for _ in 0..low {
        roots.push(Q::zero());
    }
    cs.drain(..low);

    // Nonzero roots of the deflated polynomial with integer coefficients.
    let mut ints = to_integer_coeffs(&cs);
    while ints.len() > 1 {
        let Some(root) = find_one_root(&ints) else {
            break;
        };
        ints = deflate(&ints, &root);
        debug_assert!(eval_q(&ints, &root) != Q::zero() || has_root(&ints, &root));
        roots.push(root);
    }

    roots.sort();
    Ok(roots)
}

fn has_root(ints: &[BigInt], r: &Q) -> bool {
    eval_int_at(ints, r).is_zero()
}

fn find_one_root(ints: &[BigInt]) -> Option<Q> {
    let constant = &ints[0];
    let leading = ints.last().unwrap();
    debug_assert!(!constant.is_zero() && !leading.is_zero());
    let ps = divisors(&constant.abs());
    let qs = divisors(&leading.abs());
    let mut candidates = BTreeSet::new();
    for p in &ps {
        for q in &qs {
            let c = Q::new(p.clone(), q.clone());
            candidates.insert(c.clone());
            candidates.insert(-c);
        }
    }
    candidates.into_iter().find(|c| has_root(ints, c))
}

fn to_integer_coeffs(cs: &[Q]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in cs {
        lcm = lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = cs.iter().map(|c| (c * &Q::from_integer(lcm.clone())).numer().clone()).collect();
    let mut gcd = BigInt::zero();
    for c in &ints {
        gcd = gcd.gcd(c);
    }
    if !gcd.is_zero() && !gcd.is_one() {
        for c in ints.iter_mut() {
            *c /= &gcd;
        }
    }
    ints
}

fn eval_int_at(ints: &[BigInt], r: &Q) -> Q {
    let mut acc = Q::zero();
    for c in ints.iter().rev() {
        acc = acc * r + Q::from_integer(c.clone());
    }
    acc
}

fn eval_q(cs: &[BigInt], r: &Q) -> Q {
    eval_int_at(cs, r)
}

/// Synthetic division by `(t - r)`, returning integer coefficients again by
/// clearing denominators.
fn deflate(ints: &[BigInt], r: &Q) -> Vec<BigInt> {
    let n = ints.len();
    let mut out = vec![Q::zero(); n - 1];
    let mut carry = Q::zero();
    for k in (0..n - 1).rev() {
        let c = Q::from_integer(ints[k + 1].clone()) + &carry;
        carry = &c * r;
        out[k] = c;
    }
    debug_assert_eq!(Q::from_integer(ints[0].clone()) + carry, Q::zero());
    to_integer_coeffs(&out)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    debug_assert!(n.is_positive());
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= *n {
        if (n % &i).is_zero() {
            out.push(i.clone());
            let j = n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qr};

    #[test]
    fn linear_factors() {
        // t^2 + t = t(t + 1)
        let roots = rational_roots(&[q(0), q(1), q(1)]).unwrap();
        assert_eq!(roots, vec![q(-1), q(0)]);
    }

    #[test]
    fn triple_zero_root() {
        let roots = rational_roots(&[q(0), q(0), q(0), q(1)]).unwrap();
        assert_eq!(roots, vec![q(0), q(0), q(0)]);
    }

    #[test]
    fn irrational_roots_are_absent() {
        let roots = rational_roots(&[q(-2), q(0), q(1)]).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn fractional_roots_with_multiplicity() {
        // (2t - 1)^2 (t + 3) = 4t^3 + 8t^2 - 11t + 3
        let roots = rational_roots(&[q(3), q(-11), q(8), q(4)]).unwrap();
        assert_eq!(roots, vec![q(-3), qr(1, 2), qr(1, 2)]);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(
            rational_roots(&[q(0), q(0)]),
            Err(RootsError::ZeroPolynomial)
        );
    }

    #[test]
    fn roots_verify_by_substitution() {
        let coeffs = [qr(1, 3), q(2), q(-5), q(1), q(1)];
        for r in rational_roots(&coeffs).unwrap() {
            let mut acc = Q::zero();
            for c in coeffs.iter().rev() {
                acc = acc * &r + c;
            }
            assert!(acc.is_zero());
        }
    }
}
