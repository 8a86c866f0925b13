//! Exact sparse Laurent polynomials in `t` over a pluggable coefficient ring.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Serialize, Serializer};

pub type Rational = BigRational;

/// Exact commutative coefficient ring with a decidable zero test.
pub trait CoeffRing: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;
}

impl CoeffRing for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exponent vector of a monomial in `a_1, a_2, ...` with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// `a_k` for `k >= 1`.
    pub fn var(k: usize) -> Self {
        assert!(k >= 1, "indeterminates are numbered from 1");
        let mut e = vec![0; k];
        e[k - 1] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        let e = (0..len).map(|i| self.0.get(i).unwrap_or(&0) + other.0.get(i).unwrap_or(&0)).collect();
        Monomial(e)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "a{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    /// The indeterminate `a_k`.
    pub fn var(k: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(k), <Rational as One>::one());
        MultiPoly { terms }
    }

    pub fn constant(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&q) {
            terms.insert(Monomial::one(), q);
        }
        MultiPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn accumulate(terms: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
        match terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if Zero::is_zero(v) {
                    terms.remove(&m);
                }
            }
            None => {
                if !Zero::is_zero(&c) {
                    terms.insert(m, c);
                }
            }
        }
    }
}

impl CoeffRing for MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }
    fn one() -> Self {
        MultiPoly::constant(One::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            MultiPoly::accumulate(&mut terms, m.clone(), c.clone());
        }
        MultiPoly { terms }
    }
    fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                MultiPoly::accumulate(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        MultiPoly { terms }
    }
    fn neg(&self) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
    fn from_rational(q: &Rational) -> Self {
        MultiPoly::constant(q.clone())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let abs = c.abs();
            let unit = abs.is_one();
            match (unit, m.degree() == 0) {
                (true, true) => f.write_str("1")?,
                (true, false) => write!(f, "{m}")?,
                (false, true) => write!(f, "{abs}")?,
                (false, false) => write!(f, "{abs}*{m}")?,
            }
        }
        Ok(())
    }
}

/// Valuation of a Laurent polynomial or vector: a finite exponent or `+inf`
/// for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// Valuation of a product.
    pub fn plus(self, other: Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Sparse Laurent polynomial `sum c_e t^e` with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly<C> {
    terms: BTreeMap<i64, C>,
}

impl<C: CoeffRing> Default for LaurentPoly<C> {
    fn default() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }
}

impl<C: CoeffRing> LaurentPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), 0)
    }

    /// `c * t^exp`.
    pub fn monomial(c: C, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        terms.into_iter().fold(Self::zero(), |acc, (e, c)| acc.add(&Self::monomial(c, e)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&e, c) in &other.terms {
            let sum = match terms.get(&e) {
                Some(prev) => prev.add(c),
                None => c.clone(),
            };
            if sum.is_zero() {
                terms.remove(&e);
            } else {
                terms.insert(e, sum);
            }
        }
        LaurentPoly { terms }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (e, c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        for (&ea, ca) in &self.terms {
            let row = other.terms.iter().map(|(&eb, cb)| (ea + eb, ca.mul(cb)));
            acc = acc.add(&Self::from_terms(row));
        }
        acc
    }

    pub fn scale(&self, c: &C) -> Self {
        let terms = self.terms.iter().map(|(&e, x)| (e, x.mul(c))).filter(|(_, x)| !x.is_zero()).collect();
        LaurentPoly { terms }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&C::from_rational(q))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Smallest exponent with a nonzero coefficient; `+inf` for zero.
    pub fn val(&self) -> Valuation {
        self.terms.keys().next().map_or(Valuation::Infinite, |&e| Valuation::Finite(e))
    }

    /// `{"exp": "coeff"}` rendering.
    pub fn to_json(&self) -> serde_json::Value {
        let map = self.terms.iter().map(|(e, c)| (e.to_string(), c.to_string().into())).collect();
        serde_json::Value::Object(map)
    }
}

impl<C: CoeffRing> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            match e.cmp(&0) {
                Ordering::Equal => {}
                _ => write!(f, "*t^{e}")?,
            }
        }
        Ok(())
    }
}

impl<C: CoeffRing> Serialize for LaurentPoly<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

pub fn lp_add<C: CoeffRing>(a: &LaurentPoly<C>, b: &LaurentPoly<C>) -> LaurentPoly<C> {
    a.add(b)
}

pub fn lp_mul<C: CoeffRing>(a: &LaurentPoly<C>, b: &LaurentPoly<C>) -> LaurentPoly<C> {
    a.mul(b)
}

pub fn lp_scale<C: CoeffRing>(a: &LaurentPoly<C>, c: &C) -> LaurentPoly<C> {
    a.scale(c)
}

pub fn lp_val<C: CoeffRing>(a: &LaurentPoly<C>) -> Valuation {
    a.val()
}
