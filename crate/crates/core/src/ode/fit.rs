use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::DeltaOperator;
use crate::error::{Error, Result};
use crate::laurent::RationalSequence;
use crate::linalg::nullspace;
use crate::poly::Poly;

pub const SAFETY: usize = 10;

/// Least operator (by order, then degree) annihilating the generating
/// series of `a`, with `SAFETY` surplus equations and `SAFETY` held-out
/// checks.
pub fn fit_operator(a: &RationalSequence, max_order: usize, max_degree: usize) -> Result<DeltaOperator> {
    fit_operator_with(a, max_order, max_degree, SAFETY)
}

pub fn fit_operator_with(
    a: &RationalSequence,
    max_order: usize,
    max_degree: usize,
    safety: usize,
) -> Result<DeltaOperator> {
    if a.start != 0 {
        return Err(Error::Invalid("sequence must start at index 0".into()));
    }
    let len = a.len();
    for r in 0..=max_order {
        for d in 0..=max_degree {
            let unknowns = (r + 1) * (d + 1);
            let needed = unknowns + 2 * safety;
            if len < needed {
                return Err(Error::InsufficientTerms { needed, available: len });
            }
            if let Some(op) = fit_exact(&a.values, r, d, len - safety) {
                if op.apply(&a.values).iter().all(Zero::is_zero) {
                    return Ok(op);
                }
            }
        }
    }
    Err(Error::NoOperatorFound { max_order, max_degree })
}

/// Unknown `p_k[j]` ordered by (k + j, k, j); the returned nullvector has
/// the smallest possible last unknown.
fn fit_exact(a: &[BigRational], r: usize, d: usize, eqs: usize) -> Option<DeltaOperator> {
    let mut cols: Vec<(usize, usize)> = (0..=r).flat_map(|k| (0..=d).map(move |j| (k, j))).collect();
    cols.sort_by_key(|&(k, j)| (k + j, k, j));
    let rows: Vec<Vec<BigRational>> = (0..eqs)
        .map(|m| {
            cols.iter()
                .map(|&(k, j)| {
                    if j > m || a[m - j].is_zero() {
                        return BigRational::zero();
                    }
                    let w = BigInt::from(m - j).pow(k as u32);
                    BigRational::from_integer(w) * &a[m - j]
                })
                .collect()
        })
        .collect();
    let ns = nullspace(&rows, cols.len());
    let v = ns.into_iter().next()?;
    let mut coeffs = vec![vec![BigRational::zero(); d + 1]; r + 1];
    for (&(k, j), x) in cols.iter().zip(v) {
        coeffs[k][j] = x;
    }
    let op = DeltaOperator::new(coeffs.into_iter().map(Poly::new).collect());
    (op.order() == r).then_some(op)
}
