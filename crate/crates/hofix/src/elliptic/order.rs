//! The total order on component-model generators used by witness lifting.
//!
//! Even generators are compared first by the ratio of the fiber degree to
//! the degree of the underlying dual monomial; generators paired with the
//! counit have infinite ratio and come first, and among finite ratios the
//! larger one precedes. Ties fall back to the fiber-generator index, then
//! to the exponent vectors of the dual monomial. Every even generator
//! precedes every odd one; odd generators are ordered by degree, then name.

use crate::algebra::{q, Q};
use crate::cdga::BasisLabel;
use crate::section::ComponentModel;
use std::cmp::Ordering;

#[derive(Debug, Clone)]
struct EvenKey {
    /// None encodes the infinite ratio of a counit pairing.
    ratio: Option<Q>,
    fiber: usize,
    exps: Vec<u32>,
}

/// Precomputed comparison keys for one component model.
#[derive(Debug, Clone)]
pub struct Precedence {
    keys: Vec<Option<EvenKey>>,
    degrees: Vec<i64>,
    names: Vec<String>,
}

impl Precedence {
    pub fn new(component: &ComponentModel) -> Precedence {
        let ctx = component.cdga().ctx();
        let base = component.rebased_source().base().clone();
        let dual = component.dual().clone();
        let fiber = component.rebased_source().fiber().clone();
        let mut keys = Vec::with_capacity(ctx.len());
        for f in 0..ctx.len() {
            if ctx.is_odd(f) {
                keys.push(None);
                continue;
            }
            let (v, k) = component.origin(f);
            let und = dual.underlying_degree(k);
            let ratio = if und == 0 {
                None
            } else {
                Some(q(fiber.degree(v)) / q(und))
            };
            let exps = match base.label(k) {
                BasisLabel::Monomial(e) => e.clone(),
                // Named bases have no exponent vectors; the index is the
                // only deterministic stand-in.
                BasisLabel::Named(_) => vec![k as u32],
            };
            keys.push(Some(EvenKey {
                ratio,
                fiber: v,
                exps,
            }));
        }
        Precedence {
            keys,
            degrees: (0..ctx.len()).map(|i| ctx.degree(i)).collect(),
            names: (0..ctx.len()).map(|i| ctx.name(i).to_string()).collect(),
        }
    }

    /// Total comparison: `Less` means "precedes".
    pub fn cmp(&self, a: usize, b: usize) -> Ordering {
        match (&self.keys[a], &self.keys[b]) {
            (Some(ka), Some(kb)) => cmp_even(ka, kb),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.degrees[a]
                .cmp(&self.degrees[b])
                .then_with(|| self.names[a].cmp(&self.names[b])),
        }
    }

    pub fn precedes(&self, a: usize, b: usize) -> bool {
        a != b && self.cmp(a, b) == Ordering::Less
    }

    /// Even generators, most-preceding first.
    pub fn sorted_even(&self) -> Vec<usize> {
        let mut evens: Vec<usize> = (0..self.keys.len())
            .filter(|&i| self.keys[i].is_some())
            .collect();
        evens.sort_by(|&a, &b| self.cmp(a, b));
        evens
    }

    pub fn is_even(&self, i: usize) -> bool {
        self.keys[i].is_some()
    }
}

fn cmp_even(a: &EvenKey, b: &EvenKey) -> Ordering {
    let by_ratio = match (&a.ratio, &b.ratio) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        // Larger ratio precedes, so compare reversed.
        (Some(ra), Some(rb)) => rb.cmp(ra),
    };
    by_ratio
        .then_with(|| a.fiber.cmp(&b.fiber))
        .then_with(|| {
            for (ea, eb) in a.exps.iter().zip(&b.exps) {
                if ea != eb {
                    // Larger exponent at the first difference precedes.
                    return eb.cmp(ea);
                }
            }
            Ordering::Equal
        })
}
