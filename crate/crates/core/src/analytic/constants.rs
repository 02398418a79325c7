use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::real::{atanh, BigReal};

#[derive(Debug, Clone, Serialize)]
pub struct NamedConstant {
    pub name: String,
    pub value: BigReal,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        // Σ_{k<=m} C(m+1, k) B_k = 0
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `Σ_{k>=0} (a k + c)^(-s)` for `s >= 2`, by direct summation below `N` and
/// Euler-Maclaurin beyond, with the remainder bound
/// `|B_2p|/(2p)! · |f^(2p-1)(N)|` folded into the enclosure.
pub fn hurwitz_sum(a: u64, c: u64, s: u32, prec: u32) -> BigReal {
    assert!(s >= 2 && a >= 1 && c >= 1);
    let wp = prec + 32;
    let n = (wp / 6 + 10) as u64;
    let p = n as usize;
    let bern = bernoulli(2 * p);
    let a_r = BigRational::from_integer(a.into());
    let mut acc = BigRational::zero();
    for k in 0..n {
        acc += BigRational::new(1.into(), BigInt::from(a * k + c).pow(s));
    }
    let x = BigRational::from_integer(BigInt::from(a * n + c));
    let xpow = |e: u32| -> BigRational { BigRational::one() / BigRational::from_integer(x.numer().pow(e)) };
    // integral and half term
    acc += xpow(s - 1) / (&a_r * BigRational::from_integer((s - 1).into()));
    acc += xpow(s) / q(2, 1);
    // f^(r)(N) = (-1)^r a^r (s)_r x^(-s-r)
    let deriv = |r: usize| -> BigRational {
        let mut rising = BigInt::one();
        for i in 0..r {
            rising *= BigInt::from(s as usize + i);
        }
        let sign = if r % 2 == 1 { -1 } else { 1 };
        BigRational::from_integer(rising * BigInt::from(sign) * BigInt::from(a).pow(r as u32)) * xpow(s + r as u32)
    };
    let mut fact = BigInt::one();
    let mut facts = vec![BigInt::one()];
    for i in 1..=2 * p {
        fact *= BigInt::from(i);
        facts.push(fact.clone());
    }
    for j in 1..p {
        acc -= &bern[2 * j] / BigRational::from_integer(facts[2 * j].clone()) * deriv(2 * j - 1);
    }
    let err = (&bern[2 * p] / BigRational::from_integer(facts[2 * p].clone())).abs() * deriv(2 * p - 1).abs();
    BigReal::from_rational(&acc, wp).widen(&err).with_prec(prec)
}

pub fn zeta(s: u32, prec: u32) -> BigReal {
    hurwitz_sum(1, 1, s, prec)
}

/// `log((b+1)/b) = 2 atanh(1/(2b+1))`.
pub fn log_ratio(b: u64, prec: u32) -> BigReal {
    let wp = prec + 16;
    let z = BigReal::from_rational(&q(1, 2 * b as i64 + 1), wp);
    atanh(&z, wp).mul_int(2).with_prec(prec)
}

pub fn catalan(prec: u32) -> BigReal {
    let wp = prec + 16;
    (&hurwitz_sum(4, 1, 2, wp) - &hurwitz_sum(4, 3, 2, wp)).with_prec(prec)
}

/// `L(χ_{-3}, 3) = Σ (3k+1)^-3 - (3k+2)^-3`.
pub fn l_chi3_3(prec: u32) -> BigReal {
    let wp = prec + 16;
    (&hurwitz_sum(3, 1, 3, wp) - &hurwitz_sum(3, 2, 3, wp)).with_prec(prec)
}

/// Named constants for matching Apéry limits, computed at twice the
/// requested precision.
pub fn constant_catalog(prec: u32) -> Vec<NamedConstant> {
    let wp = 2 * prec;
    let pi = BigReal::pi(wp);
    let mut out = vec![
        NamedConstant { name: "zeta(2)".into(), value: (&pi * &pi).div_int(6) },
        NamedConstant { name: "zeta(3)".into(), value: zeta(3, wp) },
        NamedConstant { name: "catalan".into(), value: catalan(wp) },
        NamedConstant { name: "L(chi_-3,3)".into(), value: l_chi3_3(wp) },
    ];
    for b in 1..=16u64 {
        out.push(NamedConstant { name: format!("log({}/{})", b + 1, b), value: log_ratio(b, wp) });
    }
    out
}
