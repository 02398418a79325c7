use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{LaurentPoly, RationalSequence};

const PARALLEL_THRESHOLD: usize = 1 << 14;

/// `a_k = [φ^k]_0` for `k = 0..=m`.
pub fn constant_term_powers(phi: &LaurentPoly, m: usize) -> RationalSequence {
    constant_term_powers_with(phi, m, true)
}

/// As [`constant_term_powers`]; `parallel` selects the rayon path, which
/// gives identical results.
pub fn constant_term_powers_with(phi: &LaurentPoly, m: usize, parallel: bool) -> RationalSequence {
    let mut out = Vec::with_capacity(m + 1);
    out.push(BigRational::one());
    if m == 0 {
        return RationalSequence::new(0, out);
    }
    if phi.is_zero() {
        out.extend((0..m).map(|_| BigRational::zero()));
        return RationalSequence::new(0, out);
    }

    let n = phi.n();
    let den = phi.denominator_lcm();
    let terms: Vec<(Vec<i64>, BigInt)> = phi
        .terms()
        .map(|(e, c)| (e.0.clone(), (c * BigRational::from_integer(den.clone())).to_integer()))
        .collect();
    let bounds = phi.exponent_bounds();

    let mut cur = DenseBox { lo: vec![0; n], hi: vec![0; n], data: vec![BigInt::one()] };
    let mut den_pow = BigInt::one();
    let mut dead = false;
    for k in 1..=m {
        den_pow *= &den;
        if dead {
            out.push(BigRational::zero());
            continue;
        }
        let (k, rest) = (k as i64, (m - k) as i64);
        let lo: Vec<i64> = bounds.iter().map(|&(a, b)| (k * a).max(-rest * b)).collect();
        let hi: Vec<i64> = bounds.iter().map(|&(a, b)| (k * b).min(-rest * a)).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            dead = true;
            out.push(BigRational::zero());
            continue;
        }
        cur = cur.step(&terms, lo, hi, parallel);
        let c = cur.get(&vec![0; n]).cloned().unwrap_or_default();
        out.push(BigRational::new(c, den_pow.clone()));
    }
    RationalSequence::new(0, out)
}

struct DenseBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
    data: Vec<BigInt>,
}

impl DenseBox {
    fn widths(lo: &[i64], hi: &[i64]) -> Vec<usize> {
        lo.iter().zip(hi).map(|(l, h)| (h - l + 1) as usize).collect()
    }

    fn index(&self, p: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for i in 0..p.len() {
            if p[i] < self.lo[i] || p[i] > self.hi[i] {
                return None;
            }
            let w = (self.hi[i] - self.lo[i] + 1) as usize;
            idx = idx * w + (p[i] - self.lo[i]) as usize;
        }
        Some(idx)
    }

    fn get(&self, p: &[i64]) -> Option<&BigInt> {
        self.index(p).map(|i| &self.data[i])
    }

    fn step(&self, terms: &[(Vec<i64>, BigInt)], lo: Vec<i64>, hi: Vec<i64>, parallel: bool) -> DenseBox {
        let widths = Self::widths(&lo, &hi);
        let size: usize = widths.iter().product();
        let n = lo.len();
        let pull = |flat: usize| -> BigInt {
            let mut p = vec![0i64; n];
            let mut r = flat;
            for i in (0..n).rev() {
                p[i] = lo[i] + (r % widths[i]) as i64;
                r /= widths[i];
            }
            let mut acc = BigInt::zero();
            let mut q = vec![0i64; n];
            for (e, c) in terms {
                for i in 0..n {
                    q[i] = p[i] - e[i];
                }
                if let Some(v) = self.get(&q) {
                    if !v.is_zero() {
                        acc += c * v;
                    }
                }
            }
            acc
        };
        let data: Vec<BigInt> = if parallel && size >= PARALLEL_THRESHOLD {
            (0..size).into_par_iter().map(pull).collect()
        } else {
            (0..size).map(pull).collect()
        };
        DenseBox { lo, hi, data }
    }
}
