//! Shared fixtures for the integration suites: deterministic pseudo-random
//! instances of the algebraic structures at desk scale.

use hofix::algebra::{Generators, Poly, Q};
use hofix::cdga::FiniteAlgebra;
use hofix::section::{RelCtx, RelPoly, RelativeSullivan};
use std::sync::Arc;

/// xorshift64*: deterministic across platforms, seeded per test.
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng {
            state: seed.max(1),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn coeff(&mut self) -> Q {
        let num = self.below(9) as i64 - 4;
        let num = if num == 0 { 1 } else { num };
        let den = self.below(3) as i64 + 1;
        Q::new(num.into(), den.into())
    }
}

/// A random generator set with mixed parities, degrees 1..=max_degree.
pub fn random_generators(rng: &mut Rng, count: usize, max_degree: i64) -> Arc<Generators> {
    let names: Vec<(String, i64)> = (0..count)
        .map(|i| (format!("g{}", i + 1), rng.below(max_degree as u64) as i64 + 1))
        .collect();
    Generators::new(names)
}

/// A random homogeneous polynomial of the given degree (possibly zero).
pub fn random_homogeneous(
    rng: &mut Rng,
    ctx: &Arc<Generators>,
    degree: i64,
    terms: usize,
) -> Poly {
    let monomials = hofix::cdga::enumerate_monomials(ctx, degree);
    if monomials.is_empty() {
        return Poly::zero(ctx);
    }
    let mut p = Poly::zero(ctx);
    for _ in 0..terms {
        let m = monomials[rng.below(monomials.len() as u64) as usize].clone();
        p = p.add(&Poly::monomial(ctx, m, rng.coeff()));
    }
    p
}

/// A random relative Sullivan algebra: one or two base variables truncated
/// at degree at most eight, at most four fiber generators, and a pure
/// fiber-positive differential so the square vanishes identically.
pub fn random_relative_sullivan(rng: &mut Rng) -> RelativeSullivan {
    let rank = rng.below(2) as usize + 1;
    let truncation = (rng.below(4) as i64 + 1) * 2; // 2, 4, 6, 8
    let vars: Vec<(String, i64)> = (1..=rank).map(|i| (format!("a{}", i), 2)).collect();
    let base = Arc::new(FiniteAlgebra::truncated_polynomial(vars, truncation));

    let n_gens = rng.below(3) as usize + 2; // 2..=4
    let mut names = Vec::new();
    let mut evens = Vec::new();
    for i in 0..n_gens {
        // Half the generators even, half odd, degrees between 2 and 6.
        let degree = if i % 2 == 0 {
            (rng.below(3) as i64 + 1) * 2
        } else {
            (rng.below(3) as i64) * 2 + 3
        };
        if degree % 2 == 0 {
            evens.push(i);
        }
        names.push((format!("v{}", i + 1), degree));
    }
    let fiber = Generators::new(names);
    let ctx = RelCtx::new(base.clone(), fiber.clone());

    // Pure differential supported on even fiber generators and the base:
    // odd generators map to sums of terms (base monomial) * (even word).
    let mut diff = Vec::new();
    for (_v, g) in fiber.iter() {
        if !g.is_odd() {
            diff.push(RelPoly::zero(&ctx));
            continue;
        }
        let target = g.degree + 1;
        let mut d = RelPoly::zero(&ctx);
        for _ in 0..=rng.below(3) {
            if let Some(term) = random_pure_term(rng, &ctx, &evens, target) {
                d = d.add(&term);
            }
        }
        diff.push(d);
    }
    RelativeSullivan::new(base, fiber, diff).expect("pure differentials square to zero")
}

/// One term b ⊗ w with w a nonempty word in even fiber generators and b a
/// base element such that degrees add to `target`.
fn random_pure_term(
    rng: &mut Rng,
    ctx: &Arc<RelCtx>,
    evens: &[usize],
    target: i64,
) -> Option<RelPoly> {
    if evens.is_empty() {
        return None;
    }
    let fiber = ctx.fiber().clone();
    let mut word = RelPoly::one(ctx);
    let mut remaining = target;
    let mut letters = 0;
    for _ in 0..3 {
        let v = evens[rng.below(evens.len() as u64) as usize];
        if fiber.degree(v) <= remaining {
            word = word.mul(&RelPoly::fiber_gen(ctx, v));
            remaining -= fiber.degree(v);
            letters += 1;
        }
    }
    if letters == 0 || remaining % 2 != 0 {
        return None;
    }
    // Base element of the remaining degree, if the truncation holds one.
    let base = ctx.base();
    let candidates: Vec<usize> = (0..base.dim())
        .filter(|&b| base.degree(b) == remaining)
        .collect();
    if candidates.is_empty() {
        return None;
    }
    let b = candidates[rng.below(candidates.len() as u64) as usize];
    Some(
        RelPoly::base_elem(ctx, b)
            .mul(&word)
            .scale(&rng.coeff()),
    )
}

/// Elapsed-seconds guard used by the timed criteria.
#[allow(dead_code)]
pub fn assert_within(label: &str, start: std::time::Instant, seconds: u64) {
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < seconds,
        "{} took {:?}, budget {}s",
        label,
        elapsed,
        seconds
    );
}
