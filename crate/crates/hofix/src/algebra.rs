//! Exact graded-commutative polynomial arithmetic over the rationals.
//!
//! Generators carry a name, an integer degree (which may be zero or negative
//! in intermediate section models) and an ordinal. The ordinal fixes the
//! canonical order of monomial factors and thereby every Koszul sign, so all
//! results are reproducible byte for byte.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

/// Exact rational scalar used everywhere. No floating point.
pub type Q = BigRational;

/// Integer as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Fraction `num/den` as a rational.
pub fn qr(num: i64, den: i64) -> Q {
    Q::new(num.into(), den.into())
}

static NEXT_CTX_ID: AtomicU64 = AtomicU64::new(1);

/// A named generator of a free graded-commutative algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

impl Generator {
    /// Parity is derived from the degree, never stored separately.
    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// An ordered list of generators. Position in the list is the ordinal.
///
/// Every [`Poly`] holds an `Arc` to the set it was built over; mixing
/// polynomials over different sets is a programming error and panics.
#[derive(Debug)]
pub struct Generators {
    id: u64,
    gens: Vec<Generator>,
}

impl Generators {
    pub fn new(gens: Vec<(impl Into<String>, i64)>) -> Arc<Generators> {
        let mut seen = std::collections::BTreeSet::new();
        let gens: Vec<Generator> = gens
            .into_iter()
            .map(|(name, degree)| Generator {
                name: name.into(),
                degree,
            })
            .collect();
        for g in &gens {
            assert!(seen.insert(g.name.clone()), "duplicate generator `{}`", g.name);
        }
        Arc::new(Generators {
            id: NEXT_CTX_ID.fetch_add(1, AtomicOrdering::Relaxed),
            gens,
        })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.gens[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.gens[i].is_odd()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].name
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Generator)> {
        self.gens.iter().enumerate()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    fn same_as(&self, other: &Generators) -> bool {
        self.id == other.id
    }
}

/// A monomial: exponent list sorted by generator ordinal, with cached degree.
///
/// Odd generators appear with exponent exactly one; squares of odd generators
/// are zero and never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(u32, u32)>,
    degree: i64,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial {
            factors: Vec::new(),
            degree: 0,
        }
    }

    /// Build from (ordinal, exponent) pairs; sorts and merges duplicates.
    /// Returns `None` when an odd generator would acquire exponent > 1.
    pub fn new(ctx: &Generators, factors: &[(usize, u32)]) -> Option<Monomial> {
        let mut map: BTreeMap<usize, u64> = BTreeMap::new();
        for &(g, e) in factors {
            if e == 0 {
                continue;
            }
            *map.entry(g).or_insert(0) += e as u64;
        }
        let mut out = Vec::with_capacity(map.len());
        let mut degree = 0i64;
        for (g, e) in map {
            if ctx.is_odd(g) && e > 1 {
                return None;
            }
            degree += ctx.degree(g) * e as i64;
            out.push((g as u32, e as u32));
        }
        Some(Monomial {
            factors: out,
            degree,
        })
    }

    pub fn gen(ctx: &Generators, g: usize) -> Monomial {
        Monomial {
            factors: vec![(g as u32, 1)],
            degree: ctx.degree(g),
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total number of letters, counted with multiplicity.
    pub fn word_length(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn exponent(&self, g: usize) -> u32 {
        self.factors
            .iter()
            .find(|&&(h, _)| h as usize == g)
            .map_or(0, |&(_, e)| e)
    }

    pub fn contains(&self, g: usize) -> bool {
        self.exponent(g) > 0
    }

    /// The first letter in canonical order together with the rest of the word.
    pub fn split_first(&self, ctx: &Generators) -> Option<(usize, Monomial)> {
        let &(g, e) = self.factors.first()?;
        let mut rest = self.clone();
        if e == 1 {
            rest.factors.remove(0);
        } else {
            rest.factors[0].1 = e - 1;
        }
        rest.degree -= ctx.degree(g as usize);
        Some((g as usize, rest))
    }

    /// The last letter in canonical order together with the rest of the word.
    pub fn split_last(&self, ctx: &Generators) -> Option<(usize, Monomial)> {
        let &(g, e) = self.factors.last()?;
        let mut rest = self.clone();
        if e == 1 {
            rest.factors.pop();
        } else {
            let k = rest.factors.len() - 1;
            rest.factors[k].1 = e - 1;
        }
        rest.degree -= ctx.degree(g as usize);
        Some((g as usize, rest))
    }

    /// Graded-commutative product. Returns the merged monomial and the Koszul
    /// sign, or `None` when an odd generator repeats.
    pub fn mul(&self, other: &Monomial, ctx: &Generators) -> Option<(Monomial, i64)> {
        // Crossings: each odd letter of `other` moves past the odd letters of
        // `self` with strictly larger ordinal.
        let mut crossings: u64 = 0;
        for &(h, eh) in &other.factors {
            if !ctx.is_odd(h as usize) {
                continue;
            }
            for &(g, eg) in &self.factors {
                if g as usize == h as usize {
                    return None;
                }
                if g > h && ctx.is_odd(g as usize) {
                    crossings += (eg as u64) * (eh as u64);
                }
            }
        }
        let mut map: BTreeMap<u32, u64> = BTreeMap::new();
        for &(g, e) in self.factors.iter().chain(other.factors.iter()) {
            *map.entry(g).or_insert(0) += e as u64;
        }
        let mut factors = Vec::with_capacity(map.len());
        for (g, e) in map {
            if ctx.is_odd(g as usize) && e > 1 {
                return None;
            }
            factors.push((g, e as u32));
        }
        let sign = if crossings % 2 == 0 { 1 } else { -1 };
        Some((
            Monomial {
                factors,
                degree: self.degree + other.degree,
            },
            sign,
        ))
    }

    pub fn display<'a>(&'a self, ctx: &'a Generators) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, ctx }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    ctx: &'a Generators,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(g, e) in &self.mono.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.ctx.name(g as usize))?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

/// A sparse polynomial: finite map from canonical monomials to nonzero
/// rational coefficients. Equal maps are equal polynomials.
#[derive(Clone)]
pub struct Poly {
    ctx: Arc<Generators>,
    terms: BTreeMap<Monomial, Q>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_as(&other.ctx) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ctx: &Arc<Generators>) -> Poly {
        Poly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<Generators>) -> Poly {
        Poly::constant(ctx, Q::one())
    }

    pub fn constant(ctx: &Arc<Generators>, c: Q) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn gen(ctx: &Arc<Generators>, g: usize) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::gen(ctx, g), Q::one());
        Poly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn monomial(ctx: &Arc<Generators>, m: Monomial, c: Q) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn from_terms(ctx: &Arc<Generators>, terms: Vec<(Monomial, Q)>) -> Poly {
        let mut p = Poly::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ctx(&self) -> &Arc<Generators> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Q {
        self.coefficient(&Monomial::one())
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_ctx(&self, other: &Poly) {
        assert!(
            self.ctx.same_as(&other.ctx),
            "mixing polynomials over different generator sets"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_ctx(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Poly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        Poly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Graded-commutative product with Koszul signs.
    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_ctx(other);
        let mut out = Poly::zero(&self.ctx);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, sign)) = m1.mul(m2, &self.ctx) {
                    let c = c1 * c2;
                    out.add_term(m, if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(&self.ctx);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// `Some(d)` when every term has degree `d`; `None` for zero or mixed.
    pub fn try_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree();
        if it.all(|m| m.degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    /// True when every stored term has the given degree (zero included).
    pub fn is_homogeneous_of_degree(&self, d: i64) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.try_degree().is_some()
    }

    pub fn homogeneous_part(&self, d: i64) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Split into homogeneous components, keyed by degree. The parts sum back
    /// to the polynomial exactly.
    pub fn homogeneous_components(&self) -> BTreeMap<i64, Poly> {
        let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Poly::zero(&self.ctx))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Apply a parity-preserving algebra map given on generators. Each image
    /// must be homogeneous of the same parity as the source generator; Koszul
    /// signs then come out of the products themselves.
    pub fn substitute(&self, target: &Arc<Generators>, image: impl Fn(usize) -> Poly) -> Poly {
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for &(g, e) in m.factors() {
                let img = image(g as usize);
                term = term.mul(&img.pow(e));
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Keep only terms whose monomial passes the filter.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| keep(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly {
            ctx: self.ctx.clone(),
            terms,
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", m.display(&self.ctx))?;
            } else {
                write!(f, "{}*{}", abs, m.display(&self.ctx))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}
