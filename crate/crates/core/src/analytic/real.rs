use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 256;

/// `m * 2^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Dyadic {
    m: BigInt,
    e: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn floor_div(n: &BigInt, d: &BigInt, up: bool) -> BigInt {
    if up {
        -((-n).div_floor(d))
    } else {
        n.div_floor(d)
    }
}

impl Dyadic {
    fn zero() -> Self {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    fn int(m: BigInt) -> Self {
        Dyadic { m, e: 0 }
    }

    fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// Smallest `t` with `|x| < 2^t`.
    fn top(&self) -> i64 {
        self.m.bits() as i64 + self.e
    }

    fn round(self, prec: u32, up: bool) -> Self {
        let b = self.m.bits();
        if b <= prec as u64 {
            return self;
        }
        let k = b - prec as u64;
        Dyadic { m: floor_div(&self.m, &pow2(k), up), e: self.e + k as i64 }
    }

    fn neg(&self) -> Self {
        Dyadic { m: -&self.m, e: self.e }
    }

    fn abs(&self) -> Self {
        Dyadic { m: self.m.abs(), e: self.e }
    }

    fn to_rational(&self) -> BigRational {
        if self.e >= 0 {
            BigRational::from_integer(&self.m << self.e as u64)
        } else {
            BigRational::new(self.m.clone(), pow2((-self.e) as u64))
        }
    }

    fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.m.bits();
        let (m, e) = if b > 60 {
            let k = b - 60;
            (&self.m >> k, self.e + k as i64)
        } else {
            (self.m.clone(), self.e)
        };
        let mf = m.to_f64().unwrap_or(0.0);
        mf * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    fn exact_add(a: &Self, b: &Self) -> Self {
        let e = a.e.min(b.e);
        Dyadic { m: (&a.m << (a.e - e) as u64) + (&b.m << (b.e - e) as u64), e }
    }

    fn add_round(a: &Self, b: &Self, prec: u32, up: bool) -> Self {
        if a.is_zero() {
            return b.clone().round(prec, up);
        }
        if b.is_zero() {
            return a.clone().round(prec, up);
        }
        let (big, small) = if a.top() >= b.top() { (a, b) } else { (b, a) };
        let guard = big.top() - prec as i64 - 8;
        if small.top() < guard {
            // |small| < 2^guard: replace it by a one-sided bound
            let tiny = Dyadic { m: BigInt::one(), e: guard };
            let sub = match (up, small.m.is_positive()) {
                (true, true) => tiny,
                (false, false) => tiny.neg(),
                _ => Dyadic::zero(),
            };
            return Dyadic::exact_add(big, &sub).round(prec, up);
        }
        Dyadic::exact_add(a, b).round(prec, up)
    }

    fn mul_exact(a: &Self, b: &Self) -> Self {
        Dyadic { m: &a.m * &b.m, e: a.e + b.e }
    }

    fn div_round(a: &Self, b: &Self, prec: u32, up: bool) -> Self {
        let s = (prec as i64 + b.m.bits() as i64 - a.m.bits() as i64 + 2).max(0);
        let num = &a.m << s as u64;
        Dyadic { m: floor_div(&num, &b.m, up), e: a.e - b.e - s }.round(prec, up)
    }

    fn sqrt_round(&self, prec: u32, up: bool) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut sh = (2 * prec as i64 + 4 - self.m.bits() as i64).max(0);
        if (self.e - sh).rem_euclid(2) != 0 {
            sh += 1;
        }
        let n = &self.m << sh as u64;
        let mut r = n.sqrt();
        if up && &r * &r != n {
            r += 1;
        }
        Dyadic { m: r, e: (self.e - sh) / 2 }.round(prec, up)
    }

    fn from_rational(r: &BigRational, prec: u32, up: bool) -> Self {
        Dyadic::div_round(&Dyadic::int(r.numer().clone()), &Dyadic::int(r.denom().clone()), prec, up)
    }
}

fn sign_rank(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let (sa, so) = (self.m.sign(), o.m.sign());
        if sa != so {
            return sign_rank(sa).cmp(&sign_rank(so));
        }
        if self.is_zero() {
            return Ordering::Equal;
        }
        let (ta, to) = (self.top(), o.top());
        if ta != to {
            let c = ta.cmp(&to);
            return if sa == Sign::Plus { c } else { c.reverse() };
        }
        let e = self.e.min(o.e);
        (&self.m << (self.e - e) as u64).cmp(&(&o.m << (o.e - e) as u64))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A real number enclosed in `[lo, hi]`, endpoints with at most `prec`
/// significant bits. Every operation rounds outward, so the true value is
/// always inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl BigReal {
    fn from_bounds(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        BigReal { lo: lo.round(prec, false), hi: hi.round(prec, true), prec }
    }

    fn point(d: Dyadic, prec: u32) -> Self {
        BigReal::from_bounds(d.clone(), d, prec)
    }

    pub fn zero(prec: u32) -> Self {
        BigReal::point(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        BigReal::from_int(1, prec)
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> Self {
        BigReal::point(Dyadic::int(v.into()), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        BigReal { lo: Dyadic::from_rational(r, prec, false), hi: Dyadic::from_rational(r, prec, true), prec }
    }

    /// The interval `[lo, hi]`.
    pub fn from_interval(lo: &BigRational, hi: &BigRational, prec: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Invalid("empty interval".into()));
        }
        Ok(BigReal { lo: Dyadic::from_rational(lo, prec, false), hi: Dyadic::from_rational(hi, prec, true), prec })
    }

    pub fn from_f64(x: f64, prec: u32) -> Result<Self> {
        let r = BigRational::from_float(x).ok_or_else(|| Error::Invalid(format!("non-finite value {}", x)))?;
        Ok(BigReal::from_rational(&r, prec))
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigReal::from_bounds(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn lo(&self) -> BigRational {
        self.lo.to_rational()
    }

    pub fn hi(&self) -> BigRational {
        self.hi.to_rational()
    }

    pub fn mid(&self) -> BigRational {
        (self.lo() + self.hi()) / BigRational::from_integer(2.into())
    }

    pub fn radius(&self) -> BigRational {
        (self.hi() - self.lo()) / BigRational::from_integer(2.into())
    }

    pub fn to_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    pub fn radius_f64(&self) -> f64 {
        (self.hi.to_f64() - self.lo.to_f64()) / 2.0
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64()
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        self.lo() <= *r && *r <= self.hi()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.m.is_positive() && !self.hi.m.is_negative()
    }

    pub fn overlaps(&self, o: &BigReal) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.m.is_positive()
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi.m.is_negative()
    }

    pub fn certainly_lt(&self, o: &BigReal) -> bool {
        self.hi < o.lo
    }

    pub fn certainly_le(&self, o: &BigReal) -> bool {
        self.hi <= o.lo
    }

    /// Upper endpoint below the rational `r`.
    pub fn certainly_below(&self, r: &BigRational) -> bool {
        self.hi() < *r
    }

    pub fn hull(&self, o: &BigReal) -> BigReal {
        let prec = self.prec.max(o.prec);
        BigReal::from_bounds(self.lo.clone().min(o.lo.clone()), self.hi.clone().max(o.hi.clone()), prec)
    }

    /// Enlarge by `eps >= 0` on both sides.
    pub fn widen(&self, eps: &BigRational) -> BigReal {
        let e = eps.abs();
        let lo_e = Dyadic::from_rational(&e, self.prec, true).neg();
        let hi_e = Dyadic::from_rational(&e, self.prec, true);
        BigReal {
            lo: Dyadic::add_round(&self.lo, &lo_e, self.prec, false),
            hi: Dyadic::add_round(&self.hi, &hi_e, self.prec, true),
            prec: self.prec,
        }
    }

    fn widen_dyadic(&self, e: &Dyadic) -> BigReal {
        let e = e.abs();
        BigReal {
            lo: Dyadic::add_round(&self.lo, &e.neg(), self.prec, false),
            hi: Dyadic::add_round(&self.hi, &e, self.prec, true),
            prec: self.prec,
        }
    }

    /// `max(|lo|, |hi|)`.
    fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn abs(&self) -> BigReal {
        if !self.lo.m.is_negative() {
            self.clone()
        } else if !self.hi.m.is_positive() {
            -self
        } else {
            BigReal { lo: Dyadic::zero(), hi: self.mag(), prec: self.prec }
        }
    }

    pub fn recip(&self) -> Result<BigReal> {
        if self.contains_zero() {
            return Err(Error::Invalid("division by an interval containing zero".into()));
        }
        let one = Dyadic::int(BigInt::one());
        Ok(BigReal {
            lo: Dyadic::div_round(&one, &self.hi, self.prec, false),
            hi: Dyadic::div_round(&one, &self.lo, self.prec, true),
            prec: self.prec,
        })
    }

    pub fn div(&self, o: &BigReal) -> Result<BigReal> {
        if o.contains_zero() {
            return Err(Error::Invalid("division by an interval containing zero".into()));
        }
        let prec = self.prec.max(o.prec);
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&o.lo, &o.hi] {
                let d = Dyadic::div_round(a, b, prec, false);
                let u = Dyadic::div_round(a, b, prec, true);
                lo = Some(match lo {
                    Some(x) => x.min(d),
                    None => d,
                });
                hi = Some(match hi {
                    Some(x) => x.max(u),
                    None => u,
                });
            }
        }
        Ok(BigReal { lo: lo.unwrap(), hi: hi.unwrap(), prec })
    }

    pub fn div_int(&self, k: i64) -> BigReal {
        self.div(&BigReal::from_int(k, self.prec)).expect("nonzero divisor")
    }

    pub fn mul_int(&self, k: i64) -> BigReal {
        self * &BigReal::from_int(k, self.prec)
    }

    pub fn mul_rational(&self, r: &BigRational) -> BigReal {
        self * &BigReal::from_rational(r, self.prec)
    }

    pub fn powi(&self, k: u32) -> BigReal {
        let mut acc = BigReal::one(self.prec);
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

    pub fn sqrt(&self) -> Result<BigReal> {
        if self.lo.m.is_negative() {
            return Err(Error::Invalid("square root of a possibly negative interval".into()));
        }
        Ok(BigReal { lo: self.lo.sqrt_round(self.prec, false), hi: self.hi.sqrt_round(self.prec, true), prec: self.prec })
    }

    pub fn exp(&self) -> BigReal {
        BigReal { lo: exp_point(&self.lo, self.prec).lo, hi: exp_point(&self.hi, self.prec).hi, prec: self.prec }
    }

    pub fn ln(&self) -> Result<BigReal> {
        if !self.certainly_positive() {
            return Err(Error::Invalid("logarithm of a possibly non-positive interval".into()));
        }
        Ok(BigReal { lo: ln_point(&self.lo, self.prec).lo, hi: ln_point(&self.hi, self.prec).hi, prec: self.prec })
    }

    /// `self^y` for `self > 0`.
    pub fn pow(&self, y: &BigReal) -> Result<BigReal> {
        Ok((&self.ln()? * y).exp())
    }

    pub fn pi(prec: u32) -> BigReal {
        let wp = prec + 16;
        let a = atan_inv(5, wp).mul_int(16);
        let b = atan_inv(239, wp).mul_int(4);
        (&a - &b).with_prec(prec)
    }

    pub fn ln2(prec: u32) -> BigReal {
        let wp = prec + 16;
        atanh(&BigReal::from_rational(&BigRational::new(1.into(), 3.into()), wp), wp).mul_int(2).with_prec(prec)
    }

    /// Midpoint with `digits` significant decimal digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        decimal_string(&self.mid(), digits)
    }
}

/// Enclosure of `exp(x)` for an exact dyadic `x`.
fn exp_point(x: &Dyadic, prec: u32) -> BigReal {
    if x.is_zero() {
        return BigReal::one(prec);
    }
    let s = (x.top() + 10).max(0) as u32;
    let wp = prec + s + 32;
    let y = BigReal::point(Dyadic { m: x.m.clone(), e: x.e - s as i64 }, wp);
    let mut sum = BigReal::one(wp);
    let mut term = BigReal::one(wp);
    let mut k = 1i64;
    loop {
        term = (&term * &y).div_int(k);
        sum = &sum + &term;
        if term.mag().top() < -(wp as i64) - 2 {
            break;
        }
        k += 1;
    }
    // |y| < 2^-10, so the tail is below |term|
    sum = sum.widen_dyadic(&term.mag());
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum.with_prec(prec)
}

/// Enclosure of `ln(x)` for an exact dyadic `x > 0`.
fn ln_point(x: &Dyadic, prec: u32) -> BigReal {
    let mut k = x.top() - 1;
    let mut y = Dyadic { m: x.m.clone(), e: x.e - k };
    let three_y = Dyadic { m: &y.m * 3, e: y.e };
    if three_y > Dyadic::int(4.into()) {
        k += 1;
        y.e -= 1;
    }
    let wp = prec + 64 - k.unsigned_abs().leading_zeros() + 32;
    let yv = BigReal::point(y, wp);
    let one = BigReal::one(wp);
    let z = (&yv - &one).div(&(&yv + &one)).expect("positive denominator");
    let lny = atanh(&z, wp).mul_int(2);
    let res = if k == 0 { lny } else { &lny + &BigReal::ln2(wp).mul_int(k) };
    res.with_prec(prec)
}

/// `Σ z^(2j+1)/(2j+1)` for `|z| <= 1/3`.
pub(crate) fn atanh(z: &BigReal, wp: u32) -> BigReal {
    let z2 = z * z;
    let mut p = z.clone();
    let mut sum = z.clone();
    let mut j = 1i64;
    loop {
        p = &p * &z2;
        sum = &sum + &p.div_int(2 * j + 1);
        if p.mag().top() < -(wp as i64) - 4 {
            break;
        }
        j += 1;
    }
    sum.widen_dyadic(&p.mag())
}

/// `atan(1/q)` by the alternating Taylor series.
fn atan_inv(q: i64, wp: u32) -> BigReal {
    let x = BigReal::from_rational(&BigRational::new(1.into(), q.into()), wp);
    let x2 = &x * &x;
    let mut p = x.clone();
    let mut sum = x;
    let mut j = 1i64;
    loop {
        p = -&(&p * &x2);
        sum = &sum + &p.div_int(2 * j + 1);
        if p.mag().top() < -(wp as i64) - 4 {
            break;
        }
        j += 1;
    }
    sum.widen_dyadic(&p.mag())
}

pub(crate) fn decimal_string(v: &BigRational, digits: usize) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let neg = v.is_negative();
    let a = v.abs();
    let digits = digits.max(1);
    // estimate the decimal exponent, then correct it
    let approx = a.numer().bits() as f64 - a.denom().bits() as f64;
    let mut e10 = (approx * std::f64::consts::LOG10_2).floor() as i64;
    let ten = BigInt::from(10);
    let scaled = |e: i64| -> BigInt {
        let shift = digits as i64 - 1 - e;
        let r = if shift >= 0 {
            &a * BigRational::from_integer(ten.pow(shift as u32))
        } else {
            &a / BigRational::from_integer(ten.pow((-shift) as u32))
        };
        (r + BigRational::new(1.into(), 2.into())).floor().to_integer()
    };
    let lower = ten.pow(digits as u32 - 1);
    let upper = ten.pow(digits as u32);
    let mut m = scaled(e10);
    for _ in 0..4 {
        if m >= upper {
            e10 += 1;
        } else if m < lower {
            e10 -= 1;
        } else {
            break;
        }
        m = scaled(e10);
    }
    if m >= upper {
        m /= 10;
        e10 += 1;
    }
    let s = m.to_string();
    let body = if (-6..21).contains(&e10) {
        if e10 >= 0 {
            let int_len = (e10 + 1) as usize;
            if s.len() > int_len {
                format!("{}.{}", &s[..int_len], &s[int_len..])
            } else {
                format!("{}{}", s, "0".repeat(int_len - s.len()))
            }
        } else {
            format!("0.{}{}", "0".repeat((-e10 - 1) as usize), s)
        }
    } else if s.len() > 1 {
        format!("{}.{}e{}", &s[..1], &s[1..], e10)
    } else {
        format!("{}e{}", s, e10)
    };
    if neg {
        format!("-{}", body)
    } else {
        body
    }
}

impl Add for &BigReal {
    type Output = BigReal;
    fn add(self, o: &BigReal) -> BigReal {
        let prec = self.prec.max(o.prec);
        BigReal {
            lo: Dyadic::add_round(&self.lo, &o.lo, prec, false),
            hi: Dyadic::add_round(&self.hi, &o.hi, prec, true),
            prec,
        }
    }
}

impl Sub for &BigReal {
    type Output = BigReal;
    fn sub(self, o: &BigReal) -> BigReal {
        self + &(-o)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }
}

impl Mul for &BigReal {
    type Output = BigReal;
    fn mul(self, o: &BigReal) -> BigReal {
        let prec = self.prec.max(o.prec);
        let products = [
            Dyadic::mul_exact(&self.lo, &o.lo),
            Dyadic::mul_exact(&self.lo, &o.hi),
            Dyadic::mul_exact(&self.hi, &o.lo),
            Dyadic::mul_exact(&self.hi, &o.hi),
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        BigReal::from_bounds(lo, hi, prec)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec as f64) * std::f64::consts::LOG10_2).floor().clamp(1.0, 40.0) as usize;
        write!(f, "{} ± {:.1e}", self.to_decimal(digits), self.radius_f64())
    }
}

impl Serialize for BigReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BigReal", 2)?;
        st.serialize_field("value", &self.to_decimal(30))?;
        st.serialize_field("radius", &decimal_string(&self.radius(), 3))?;
        st.end()
    }
}
