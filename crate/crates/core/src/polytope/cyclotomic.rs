use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Whether every complex root of `p` (coefficients in increasing degree)
/// is a root of unity, decided by Graeffe root squaring.
pub fn is_cyclotomic(p: &[BigInt]) -> Result<bool> {
    let lo = p.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroPolynomial)?;
    let hi = p.iter().rposition(|c| !c.is_zero()).unwrap();
    let mut q: Vec<BigInt> = p[lo..=hi].to_vec();
    let content = q.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    for c in q.iter_mut() {
        *c /= &content;
    }
    let d = q.len() - 1;
    if d == 0 {
        return Ok(true);
    }
    if !q[d].abs().is_one() || !q[0].abs().is_one() {
        return Ok(false);
    }
    normalize_sign(&mut q);
    let bounds: Vec<BigInt> = (0..=d).map(|i| binomial(d, i)).collect();
    let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
    let max_iter = (d * d).max(8);
    for _ in 0..=max_iter {
        if q.iter().zip(&bounds).any(|(c, b)| c.abs() > *b) {
            return Ok(false);
        }
        if !seen.insert(q.clone()) {
            return Ok(true);
        }
        q = graeffe(&q);
    }
    Ok(false)
}

fn normalize_sign(q: &mut [BigInt]) {
    if q.last().is_some_and(|c| c.is_negative()) {
        for c in q.iter_mut() {
            *c = -c.clone();
        }
    }
}

/// `g(x^2) = (-1)^d p(x) p(-x)`: roots of `g` are the squares of roots of `p`.
fn graeffe(p: &[BigInt]) -> Vec<BigInt> {
    let d = p.len() - 1;
    let pm: Vec<BigInt> = p.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
    let mut prod = vec![BigInt::zero(); 2 * d + 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in pm.iter().enumerate() {
            prod[i + j] += a * b;
        }
    }
    let mut g: Vec<BigInt> = prod.into_iter().step_by(2).collect();
    if d % 2 == 1 {
        for c in g.iter_mut() {
            *c = -c.clone();
        }
    }
    normalize_sign(&mut g);
    g
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// The k-th cyclotomic polynomial, coefficients in increasing degree.
pub fn cyclotomic_poly(k: usize) -> Vec<BigInt> {
    assert!(k >= 1);
    // x^k - 1 divided by Φ_d for every proper divisor d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); k + 1];
    num[0] = -BigInt::one();
    num[k] = BigInt::one();
    for d in 1..k {
        if k % d == 0 {
            num = div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (db..a.len()).rev() {
        let f = &r[i] / &b[db];
        for (j, c) in b.iter().enumerate() {
            r[i - db + j] -= &f * c;
        }
        q[i - db] = f;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_examples() {
        assert!(is_cyclotomic(&b(&[-1, 1])).unwrap());
        assert!(is_cyclotomic(&b(&[1, 1, 1])).unwrap());
        assert!(!is_cyclotomic(&b(&[-1, -1, 1])).unwrap());
        assert!(is_cyclotomic(&b(&[0, 0, 1, -2, 1])).unwrap());
        assert!(!is_cyclotomic(&b(&[2, 1])).unwrap());
        assert!(is_cyclotomic(&b(&[0])).is_err());
    }

    #[test]
    fn lehmer_polynomial_is_not_cyclotomic() {
        let l = b(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        assert!(!is_cyclotomic(&l).unwrap());
    }

    #[test]
    fn cyclotomic_table() {
        assert_eq!(cyclotomic_poly(1), b(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), b(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), b(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), b(&[1, 0, -1, 0, 1]));
        for k in 1..40 {
            assert!(is_cyclotomic(&cyclotomic_poly(k)).unwrap(), "Φ_{}", k);
        }
    }
}
