//! Prime tables, `L_m = lcm(1..m)`, `Λ_m = gcd(m!, L_{rm})`, denominator
//! certificates and the growth sandwich for `Λ_m^(1/m)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::analytic::BigReal;
use crate::error::{Error, Result};
use crate::laurent::RationalSequence;
use crate::serde_util::ser_bigint;

pub fn primes_upto(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Largest `e` with `p^e <= x`.
fn floor_log(p: u64, x: u64) -> u32 {
    let mut e = 0;
    let mut v = p as u128;
    while v <= x as u128 {
        e += 1;
        v *= p as u128;
    }
    e
}

/// `v_p(m!)` by Legendre's formula.
fn legendre(p: u64, m: u64) -> u64 {
    let mut e = 0;
    let mut q = m;
    while q > 0 {
        q /= p;
        e += q;
    }
    e
}

/// Primes with `ln p` enclosures and cumulative `χ(m) = Σ_{p<=m} ln p`.
#[derive(Debug, Clone)]
pub struct ArithTables {
    limit: u64,
    prec: u32,
    primes: Vec<u64>,
    ln_p: Vec<BigReal>,
    chi: Vec<BigReal>,
}

impl ArithTables {
    pub fn new(limit: u64, prec: u32) -> Self {
        let primes = primes_upto(limit);
        let ln_p: Vec<BigReal> = primes.iter().map(|&p| BigReal::from_int(p, prec).ln().expect("p > 0")).collect();
        let mut chi = Vec::with_capacity(ln_p.len());
        let mut acc = BigReal::zero(prec);
        for l in &ln_p {
            acc = &acc + l;
            chi.push(acc.clone());
        }
        ArithTables { limit, prec, primes, ln_p, chi }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    fn check(&self, m: u64) {
        assert!(m <= self.limit, "index {} beyond sieve limit {}", m, self.limit);
    }

    /// `π(m)`.
    pub fn prime_count(&self, m: u64) -> usize {
        self.check(m);
        self.primes.partition_point(|&p| p <= m)
    }

    /// `χ(m)`.
    pub fn chi(&self, m: u64) -> BigReal {
        match self.prime_count(m) {
            0 => BigReal::zero(self.prec),
            k => self.chi[k - 1].clone(),
        }
    }

    pub fn lcm_upto(&self, m: u64) -> BigInt {
        self.check(m);
        self.primes.iter().take_while(|&&p| p <= m).fold(BigInt::one(), |acc, &p| acc * BigInt::from(p).pow(floor_log(p, m)))
    }

    /// Exponents `v_p(Λ_m) = min(v_p(m!), ⌊log_p(rm)⌋)` over the primes `p <= m`.
    fn lambda_exponents(&self, m: u64, r: u64) -> impl Iterator<Item = (usize, u64, u64)> + '_ {
        self.check(m);
        self.primes
            .iter()
            .enumerate()
            .take_while(move |(_, &p)| p <= m)
            .map(move |(i, &p)| (i, p, legendre(p, m).min(floor_log(p, r * m) as u64)))
    }

    pub fn lambda_gcd(&self, m: u64, r: u64) -> BigInt {
        self.lambda_exponents(m, r).fold(BigInt::one(), |acc, (_, p, e)| acc * BigInt::from(p).pow(e as u32))
    }

    pub fn ln_lambda(&self, m: u64, r: u64) -> BigReal {
        self.lambda_exponents(m, r).fold(BigReal::zero(self.prec), |acc, (i, _, e)| &acc + &self.ln_p[i].mul_int(e as i64))
    }

    pub fn sandwich(&self, m: u64, r: u64) -> Sandwich {
        assert!(m >= 2 && r >= 1);
        let mm = BigReal::from_int(m, self.prec);
        let lower = self.chi(m).div(&mm).unwrap().exp();
        let mid = self.ln_lambda(m, r).div(&mm).unwrap().exp();
        let pi_m = self.prime_count(m);
        let ln_rm = BigReal::from_int(r * m, self.prec).ln().unwrap();
        let upper = ln_rm.mul_int(pi_m as i64).div(&mm).unwrap().exp();
        let mut exact = false;
        let mut ok = lower.certainly_le(&mid) && mid.certainly_le(&upper);
        if !ok {
            // raise all three to the m-th power and compare integers
            exact = true;
            let primorial = self.primes.iter().take(pi_m).fold(BigInt::one(), |acc, &p| acc * p);
            let lambda = self.lambda_gcd(m, r);
            let top = BigInt::from(r * m).pow(pi_m as u32);
            ok = primorial <= lambda && lambda <= top;
        }
        Sandwich { m, r, lower, mid, upper, ok, exact }
    }
}

pub fn lcm_upto(m: u64) -> BigInt {
    ArithTables::new(m, 64).lcm_upto(m)
}

pub fn lambda_gcd(m: u64, r: u64) -> BigInt {
    ArithTables::new(m, 64).lambda_gcd(m, r)
}

/// `e^{χ(m)/m} <= Λ_m^{1/m} <= (rm)^{π(m)/m}`.
#[derive(Debug, Clone, Serialize)]
pub struct Sandwich {
    pub m: u64,
    pub r: u64,
    pub lower: BigReal,
    pub mid: BigReal,
    pub upper: BigReal,
    pub ok: bool,
    /// Decided by exact integer comparison after the enclosures overlapped.
    pub exact: bool,
}

pub fn sandwich_check(m: u64, r: u64, prec: u32) -> Sandwich {
    ArithTables::new(m, prec).sandwich(m, r)
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichSweep {
    pub r: u64,
    pub m_max: u64,
    pub checked: u64,
    pub exact_decisions: u64,
    pub failures: Vec<u64>,
    pub last: Sandwich,
}

/// Sandwich check for every `2 <= m <= m_max`.
pub fn sandwich_sweep(m_max: u64, r: u64, prec: u32) -> SandwichSweep {
    assert!(m_max >= 2);
    let t = ArithTables::new(m_max, prec);
    let mut failures = Vec::new();
    let mut exact_decisions = 0;
    let mut last = None;
    for m in 2..=m_max {
        let s = t.sandwich(m, r);
        if !s.ok {
            failures.push(m);
        }
        exact_decisions += s.exact as u64;
        last = Some(s);
    }
    SandwichSweep { r, m_max, checked: m_max - 1, exact_decisions, failures, last: last.unwrap() }
}

pub const EPSILON_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SplitCertificate {
    Certified {
        #[serde(serialize_with = "ser_bigint")]
        eps_b: BigInt,
        range: u64,
    },
    Fails {
        m: u64,
    },
}

impl SplitCertificate {
    pub fn eps(&self) -> Option<&BigInt> {
        match self {
            SplitCertificate::Certified { eps_b, .. } => Some(eps_b),
            SplitCertificate::Fails { .. } => None,
        }
    }
}

/// Smallest `ε_B` with `ε_B (m!)^n b_m ∈ ℤ` and `ε_B L_{rm}^n b_m ∈ ℤ` for
/// `1 <= m <= range`. That is the lcm of all residual denominators, so it is
/// computed directly; past `EPSILON_CAP` the first offending index is
/// reported.
pub fn denom_split_certificate(b: &RationalSequence, n: u32, r: u64, range: u64) -> Result<SplitCertificate> {
    let end = (b.start + b.len()) as u64;
    if range >= end {
        return Err(Error::InsufficientTerms { needed: range as usize + 1, available: b.len() });
    }
    let t = ArithTables::new(r * range.max(1), 64);
    let cap = BigInt::from(EPSILON_CAP);
    let mut eps = BigInt::one();
    let mut fact = BigInt::one();
    for m in 1..=range {
        fact *= m;
        if (m as usize) < b.start {
            continue;
        }
        let bm = b.get(m as usize).unwrap();
        let q = bm.denom();
        let f = Pow::pow(&fact, n);
        let l = t.lcm_upto(r * m).pow(n);
        eps = eps.lcm(&(q / q.gcd(&f))).lcm(&(q / q.gcd(&l)));
        if eps > cap {
            return Ok(SplitCertificate::Fails { m });
        }
    }
    Ok(SplitCertificate::Certified { eps_b: eps, range })
}

/// `ε_B Λ_m^n a_m P − B_m Q` with `B_m = ε_B Λ_m^n b_m`, for `1 <= m <= range`.
pub fn linear_form_terms(
    a: &RationalSequence,
    b: &RationalSequence,
    eps_b: &BigInt,
    n: u32,
    r: u64,
    p: &BigInt,
    q: &BigInt,
    range: u64,
) -> Result<Vec<BigInt>> {
    let t = ArithTables::new(range.max(1), 64);
    let mut out = Vec::with_capacity(range as usize);
    for m in 1..=range {
        let (am, bm) = match (a.get(m as usize), b.get(m as usize)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::InsufficientTerms { needed: m as usize + 1, available: a.len().min(b.len()) }),
        };
        let scale = BigRational::from_integer(eps_b * t.lambda_gcd(m, r).pow(n));
        let big_b = &scale * bm;
        if !big_b.is_integer() {
            return Err(Error::Invalid(format!("B_{} = {} is not an integer", m, big_b)));
        }
        let v = &scale * am * BigRational::from_integer(p.clone()) - big_b * BigRational::from_integer(q.clone());
        if !v.is_integer() {
            return Err(Error::Invalid(format!("linear form at m = {} is not an integer", m)));
        }
        out.push(v.to_integer());
    }
    Ok(out)
}

/// Rational proxy `ε_B Λ_m^n (a_m P/Q − b_m)` whose decay the contradiction needs.
pub fn linear_form_proxy(terms: &[BigInt], q: &BigInt) -> Vec<BigRational> {
    if q.is_zero() {
        return Vec::new();
    }
    terms.iter().map(|v| BigRational::new(v.clone(), q.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn apery_b(m: usize) -> RationalSequence {
        // m^3 u_m = (34m^3 - 51m^2 + 27m - 5) u_{m-1} - (m-1)^3 u_{m-2}
        let mut v = vec![BigRational::zero(), BigRational::from_integer(6.into())];
        for k in 2..=m as i64 {
            let c1 = BigRational::from_integer((34 * k * k * k - 51 * k * k + 27 * k - 5).into());
            let c2 = BigRational::from_integer(((k - 1) * (k - 1) * (k - 1)).into());
            let next = (c1 * &v[k as usize - 1] - c2 * &v[k as usize - 2]) / BigRational::from_integer((k * k * k).into());
            v.push(next);
        }
        RationalSequence::new(0, v)
    }

    #[test]
    fn lcm_and_lambda_values() {
        assert_eq!(lcm_upto(1), BigInt::one());
        assert_eq!(lcm_upto(4), 12.into());
        assert_eq!(lcm_upto(5), 60.into());
        assert_eq!(lcm_upto(8), 840.into());
        assert_eq!(lambda_gcd(1, 2), BigInt::one());
        assert_eq!(lambda_gcd(3, 2), 6.into());
        assert_eq!(lambda_gcd(10, 2), 5040.into());
    }

    #[test]
    fn lambda_matches_direct_gcd() {
        let t = ArithTables::new(120, 64);
        let mut fact = BigInt::one();
        for m in 1..=40u64 {
            fact *= m;
            for r in 1..=3 {
                assert_eq!(t.lambda_gcd(m, r), fact.gcd(&t.lcm_upto(r * m)), "m={} r={}", m, r);
            }
        }
    }

    #[test]
    fn table_counts() {
        let t = ArithTables::new(100, 64);
        assert_eq!(t.prime_count(10), 4);
        assert_eq!(t.prime_count(100), 25);
        assert!(t.chi(10).overlaps(&BigReal::from_int(210, 64).ln().unwrap()));
        assert!(t.ln_lambda(10, 2).overlaps(&BigReal::from_int(5040, 64).ln().unwrap()));
    }

    #[test]
    fn sandwich_samples() {
        let s = sandwich_check(10, 2, 128);
        assert!(s.ok && !s.exact);
        assert!((s.lower.to_f64() - 1.707).abs() < 1e-3);
        assert!((s.mid.to_f64() - 2.3456).abs() < 1e-3);
        assert!(s.mid.overlaps(&BigReal::from_int(5040, 128).ln().unwrap().div_int(10).exp()));
        assert!((s.upper.to_f64() - 3.314).abs() < 1e-3);
        // Λ_2 = 2 with r = 1: lower and mid are both √2
        let s = sandwich_check(2, 1, 128);
        assert!(s.ok && s.exact);
        assert!(s.lower.overlaps(&s.mid));
    }

    #[test]
    fn short_sweep() {
        let s = sandwich_sweep(500, 2, 96);
        assert!(s.failures.is_empty());
        assert_eq!(s.checked, 499);
    }

    #[test]
    fn apery_split_certificate() {
        let b = apery_b(60);
        assert_eq!(b.get(2).unwrap(), &BigRational::new(351.into(), 4.into()));
        let cert = denom_split_certificate(&b, 3, 2, 60).unwrap();
        let eps = cert.eps().unwrap().clone();
        assert!(eps <= BigInt::from(1000));
        assert!((BigInt::from(8) % 4u32).is_zero() && (BigInt::from(1728) % 4u32).is_zero());
        let t = ArithTables::new(120, 64);
        let mut fact = BigInt::one();
        for m in 1..=60u64 {
            fact *= m;
            let bm = b.get(m as usize).unwrap();
            let e = BigRational::from_integer(eps.clone());
            assert!((&e * BigRational::from_integer(Pow::pow(&fact, 3u32)) * bm).is_integer());
            assert!((&e * BigRational::from_integer(t.lcm_upto(2 * m).pow(3u32)) * bm).is_integer());
        }
    }

    #[test]
    fn split_certificate_edge_cases() {
        let ints = RationalSequence::from_integers(&(0..20).map(BigInt::from).collect::<Vec<_>>());
        assert_eq!(denom_split_certificate(&ints, 3, 2, 19).unwrap().eps(), Some(&BigInt::one()));
        let primes = primes_upto(200);
        let recip = RationalSequence::new(1, primes.iter().take(40).map(|&p| BigRational::new(1.into(), p.into())).collect());
        assert!(matches!(denom_split_certificate(&recip, 1, 1, 40).unwrap(), SplitCertificate::Fails { .. }));
        assert!(denom_split_certificate(&ints, 3, 2, 50).is_err());
    }

    #[test]
    fn linear_forms() {
        let b = apery_b(30);
        let a = RationalSequence::from_integers(
            &(0..=30u64)
                .map(|m| {
                    let binom = |n: u64, k: u64| -> BigInt { (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1)) };
                    (0..=m).map(|k| (binom(m, k) * binom(m + k, k)).pow(2u32)).sum()
                })
                .collect::<Vec<_>>(),
        );
        let zero = linear_form_terms(&a, &b, &BigInt::one(), 3, 2, &BigInt::zero(), &BigInt::one(), 20).unwrap();
        let t = ArithTables::new(20, 64);
        for (i, v) in zero.iter().enumerate() {
            let m = i as u64 + 1;
            let expect = -(BigRational::from_integer(t.lambda_gcd(m, 2).pow(3u32)) * b.get(m as usize).unwrap());
            assert_eq!(BigRational::from_integer(v.clone()), expect);
        }
        let same = linear_form_terms(&a, &a, &BigInt::one(), 3, 2, &BigInt::one(), &BigInt::one(), 20).unwrap();
        assert!(same.iter().all(|v| v.is_zero()));
        // P/Q = b_20/a_20: the proxy shrinks geometrically before m = 20
        let r = b.get(20).unwrap() / a.get(20).unwrap();
        let (p, q) = (r.numer().clone(), r.denom().clone());
        let terms = linear_form_terms(&a, &b, &BigInt::one(), 3, 2, &p, &q, 16).unwrap();
        let proxy: Vec<f64> = linear_form_proxy(&terms, &q).iter().map(|x| x.to_f64().unwrap().abs()).collect();
        let head = proxy[..4].iter().cloned().fold(0.0, f64::max);
        let tail = proxy[12..].iter().cloned().fold(0.0, f64::max);
        assert!(tail < head, "{:?}", proxy);
        let half = RationalSequence::new(0, vec![BigRational::new(1.into(), 7.into()); 5]);
        assert!(linear_form_terms(&a, &half, &BigInt::one(), 1, 1, &BigInt::one(), &BigInt::one(), 4).is_err());
    }
}
