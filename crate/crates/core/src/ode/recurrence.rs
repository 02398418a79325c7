use num_rational::BigRational;
use num_traits::Zero;

use super::DeltaOperator;
use crate::error::{Error, Result};
use crate::laurent::RationalSequence;
use crate::poly::Poly;

/// `Σ_{i=0}^{s} q_i(m) u_{m-i} = rhs_m` for all `m >= 0`, with `u_k = 0`
/// for negative `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialRecurrence {
    pub q: Vec<Poly>,
    pub rhs: Vec<BigRational>,
}

impl PolynomialRecurrence {
    pub fn span(&self) -> usize {
        self.q.len().saturating_sub(1)
    }

    pub fn rhs_at(&self, m: usize) -> BigRational {
        self.rhs.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Residual of the `m`-th equation for the given values.
    pub fn residual(&self, u: &[BigRational], m: usize) -> BigRational {
        let mut acc = -self.rhs_at(m);
        for (i, qi) in self.q.iter().enumerate() {
            if i > m {
                break;
            }
            acc += qi.eval_int(m as i64) * &u[m - i];
        }
        acc
    }
}

/// Coefficient of `t^m` in `D(Σ u_m t^m) = rhs`; writing `D = Σ_j t^j Q_j(δ)`
/// gives `q_j(m) = Q_j(m - j)`.
pub fn operator_to_recurrence(d: &DeltaOperator, rhs: &[BigRational]) -> PolynomialRecurrence {
    let q = d
        .t_slices()
        .iter()
        .enumerate()
        .map(|(j, qj)| qj.shift(&BigRational::from_integer((-(j as i64)).into())))
        .collect();
    PolynomialRecurrence { q, rhs: rhs.to_vec() }
}

/// Values `u_0..=u_m`; `seeds` fix a prefix, every later index must have
/// `q_0(m) != 0`.
pub fn solve_recurrence(rec: &PolynomialRecurrence, seeds: &[BigRational], m: usize) -> Result<RationalSequence> {
    let mut u: Vec<BigRational> = Vec::with_capacity(m + 1);
    for k in 0..=m {
        if let Some(s) = seeds.get(k) {
            u.push(s.clone());
            continue;
        }
        let q0 = rec.q.first().map(|p| p.eval_int(k as i64)).unwrap_or_else(BigRational::zero);
        if q0.is_zero() {
            return Err(Error::SingularRecurrence { m: k });
        }
        let mut acc = rec.rhs_at(k);
        for (i, qi) in rec.q.iter().enumerate().skip(1) {
            if i > k {
                break;
            }
            if !u[k - i].is_zero() {
                acc -= qi.eval_int(k as i64) * &u[k - i];
            }
        }
        u.push(acc / q0);
    }
    Ok(RationalSequence::new(0, u))
}
