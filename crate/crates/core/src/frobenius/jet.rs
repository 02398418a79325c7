use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Truncated power series in `nvars` commuting nilpotent variables, keeping
/// terms of total degree `<= order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetSeries {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl JetSeries {
    pub fn zero(nvars: usize, order: u32) -> Self {
        JetSeries { nvars, order, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: u32, c: BigRational) -> Self {
        let mut j = Self::zero(nvars, order);
        j.add_term(vec![0; nvars], c);
        j
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, BigRational::one())
    }

    /// `c + Σ_k a_k J_k`.
    pub fn linear(order: u32, c: BigRational, a: &[BigRational]) -> Self {
        let nvars = a.len();
        let mut j = Self::constant(nvars, order, c);
        if order >= 1 {
            for (k, ak) in a.iter().enumerate() {
                let mut e = vec![0; nvars];
                e[k] = 1;
                j.add_term(e, ak.clone());
            }
        }
        j
    }

    pub fn linear_int(order: u32, c: i64, a: &[i64]) -> Self {
        let a: Vec<BigRational> = a.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        Self::linear(order, BigRational::from_integer(c.into()), &a)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() || e.iter().sum::<u32>() > self.order {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        JetSeries { nvars: self.nvars, order: self.order, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let order = self.order.min(o.order);
        let mut out = Self::zero(self.nvars, order);
        for (e1, c1) in &self.terms {
            let d1: u32 = e1.iter().sum();
            for (e2, c2) in &o.terms {
                if d1 + e2.iter().sum::<u32>() > order {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars, self.order), |acc, _| acc.mul(self))
    }

    /// `Σ_k x^k/k!` for `x` without constant term.
    pub fn exp(&self) -> Self {
        assert!(self.constant_term().is_zero(), "exp needs a nilpotent argument");
        let mut out = Self::one(self.nvars, self.order);
        let mut term = out.clone();
        for k in 1..=self.order {
            term = term.mul(self).scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
            out = out.add(&term);
        }
        out
    }

    /// Inverse of a jet with nonzero constant term.
    pub fn inverse(&self) -> Option<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return None;
        }
        let cinv = c.recip();
        // 1/(c + x) = c^-1 Σ (-x/c)^k
        let x = self.sub(&Self::constant(self.nvars, self.order, c)).scale(&-cinv.clone());
        let mut out = Self::one(self.nvars, self.order);
        let mut term = out.clone();
        for _ in 1..=self.order {
            term = term.mul(&x);
            out = out.add(&term);
        }
        Some(out.scale(&cinv))
    }
}
