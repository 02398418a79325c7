//! Laurent polynomials in `n` variables with exact rational coefficients.

mod parse;
mod powers;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use parse::parse_laurent;
pub use powers::{constant_term_powers, constant_term_powers_with};

/// A lattice point of Z^n. Ordering is lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Self {
        ExponentVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        ExponentVector(self.0.iter().map(|a| a * k).collect())
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

/// Exact-rational Laurent polynomial. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    n: usize,
    terms: BTreeMap<ExponentVector, BigRational>,
}

/// Finite sequence of exact rationals indexed from `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSequence {
    pub start: usize,
    pub values: Vec<BigRational>,
}

impl RationalSequence {
    pub fn new(start: usize, values: Vec<BigRational>) -> Self {
        RationalSequence { start, values }
    }

    pub fn from_integers(values: &[BigInt]) -> Self {
        RationalSequence {
            start: 0,
            values: values.iter().cloned().map(BigRational::from_integer).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, m: usize) -> Option<&BigRational> {
        m.checked_sub(self.start).and_then(|i| self.values.get(i))
    }

    /// The values as integers, if they all are.
    pub fn integers(&self) -> Option<Vec<BigInt>> {
        self.values
            .iter()
            .map(|v| v.is_integer().then(|| v.to_integer()))
            .collect()
    }
}

/// The map `x_i -> x_{perm[i]}^{signs[i]}` with `signs[i]` in {1, -1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation { perm: (0..n).collect(), signs: vec![1; n] }
    }

    /// All 2^n n! signed permutations of n variables.
    pub fn all(n: usize) -> Vec<SignedPermutation> {
        let mut perms = vec![vec![]];
        for k in 0..n {
            let mut next = Vec::new();
            for p in &perms {
                for pos in 0..=k {
                    let mut q: Vec<usize> = p.clone();
                    q.insert(pos, k);
                    next.push(q);
                }
            }
            perms = next;
        }
        let mut out = Vec::new();
        for p in perms {
            for mask in 0..(1u32 << n) {
                let signs = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                out.push(SignedPermutation { perm: p.clone(), signs });
            }
        }
        out
    }
}

impl LaurentPoly {
    pub fn zero(n: usize) -> Self {
        LaurentPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        LaurentPoly::monomial(n, ExponentVector::zero(n), c)
    }

    pub fn one(n: usize) -> Self {
        LaurentPoly::constant(n, BigRational::one())
    }

    pub fn monomial(n: usize, exp: ExponentVector, c: BigRational) -> Self {
        assert_eq!(exp.dim(), n, "exponent dimension");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { n, terms }
    }

    /// The variable `x_{i+1}`.
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        LaurentPoly::monomial(n, ExponentVector(e), BigRational::one())
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, BigRational)>,
    {
        let mut p = LaurentPoly::zero(n);
        for (e, c) in terms {
            if e.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: e.dim() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Convenience constructor from integer exponent/coefficient pairs.
    pub fn from_int_terms(n: usize, terms: &[(&[i64], i64)]) -> Self {
        let it = terms
            .iter()
            .map(|(e, c)| (ExponentVector(e.to_vec()), BigRational::from_integer((*c).into())));
        LaurentPoly::from_terms(n, it).expect("dimension")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &BigRational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff(&self, e: &ExponentVector) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&ExponentVector::zero(self.n))
    }

    pub fn add_term(&mut self, e: ExponentVector, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return LaurentPoly::zero(self.n);
        }
        LaurentPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    /// Multiply by the monomial `x^e`.
    pub fn shift(&self, e: &ExponentVector) -> Self {
        LaurentPoly {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (k.add(e), c.clone())).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = LaurentPoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = LaurentPoly::one(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse of a monomial; `None` for anything else.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if !self.is_monomial() {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(LaurentPoly::monomial(self.n, e.neg(), c.recip()))
    }

    /// Per-coordinate (min, max) over the support.
    pub fn exponent_bounds(&self) -> Vec<(i64, i64)> {
        let mut b = vec![(i64::MAX, i64::MIN); self.n];
        for e in self.terms.keys() {
            for (i, &x) in e.0.iter().enumerate() {
                b[i].0 = b[i].0.min(x);
                b[i].1 = b[i].1.max(x);
            }
        }
        b
    }

    pub fn monomial_substitute(&self, map: &SignedPermutation) -> Result<Self> {
        if map.perm.len() != self.n || map.signs.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: map.perm.len() });
        }
        let mut seen = vec![false; self.n];
        for &p in &map.perm {
            if p >= self.n || seen[p] {
                return Err(Error::NonBijective);
            }
            seen[p] = true;
        }
        if map.signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::NonBijective);
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0; self.n];
            for i in 0..self.n {
                ne[map.perm[i]] += map.signs[i] as i64 * e.0[i];
            }
            (ExponentVector(ne), c.clone())
        });
        LaurentPoly::from_terms(self.n, terms)
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: point.len() });
        }
        if let Some(i) = point.iter().position(|x| x.is_zero()) {
            return Err(Error::ZeroCoordinate(i));
        }
        let mut sum = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&e.0) {
                t *= pow_rational(x, k);
            }
            sum += t;
        }
        Ok(sum)
    }

    /// Coordinatewise minimum exponent.
    pub fn min_exponents(&self) -> ExponentVector {
        ExponentVector(self.exponent_bounds().iter().map(|b| b.0).collect())
    }

    /// `self / g` when the quotient is a Laurent polynomial.
    pub fn exact_div(&self, g: &Self) -> Option<Self> {
        if g.is_zero() || self.n != g.n {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        // once both are shifted to polynomials and g has no monomial
        // factor, a Laurent quotient is a polynomial quotient
        let mf = self.min_exponents();
        let mg = g.min_exponents();
        let mut rem = self.shift(&mf.neg());
        let g0 = g.shift(&mg.neg());
        let (lg, lc) = g0.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut q = LaurentPoly::zero(self.n);
        while let Some((le, c)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let diff = ExponentVector(le.0.iter().zip(&lg.0).map(|(a, b)| a - b).collect());
            if diff.0.iter().any(|&v| v < 0) {
                return None;
            }
            let f = &c / &lc;
            let step = LaurentPoly::monomial(self.n, diff.clone(), f.clone());
            rem = &rem - &(&step * &g0);
            q.add_term(diff, f);
        }
        Some(q.shift(&mf.add(&mg.neg())))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }
}

pub(crate) fn pow_rational(x: &BigRational, k: i64) -> BigRational {
    let r = num_traits::pow(x.clone(), k.unsigned_abs() as usize);
    if k < 0 {
        r.recip()
    } else {
        r
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("dimension mismatch in add")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("dimension mismatch in mul")
    }
}

fn var_name(i: usize) -> String {
    format!("x{}", i + 1)
}

fn fmt_monomial(e: &ExponentVector) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.0.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(var_name(i)),
            _ => parts.push(format!("{}^{}", var_name(i), k)),
        }
    }
    parts.join("*")
}

/// Canonical form: terms in decreasing lexicographic order.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono = fmt_monomial(e);
            if mono.is_empty() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", a, mono)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<i64>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    n: usize,
    terms: Vec<TermJson>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { exp: e.0.clone(), coef: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = LaurentJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            let c: BigRational = t.coef.trim().parse().map_err(D::Error::custom)?;
            terms.push((ExponentVector(t.exp), c));
        }
        LaurentPoly::from_terms(j.n, terms).map_err(D::Error::custom)
    }
}
