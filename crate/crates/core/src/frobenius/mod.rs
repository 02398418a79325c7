//! Frobenius bases at a point of maximal unipotent monodromy and the GKZ
//! coefficient engine.

mod gkz;
mod jet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{ArithTables, EPSILON_CAP};
use crate::error::{Error, Result};
use crate::ode::DeltaOperator;
use crate::poly::Poly;
use crate::serde_util::ser_bigint;

pub use gkz::{gkz_coefficient, gkz_divisibility_check, GkzCoefficient, GkzKind};
pub use jet::JetSeries;

/// `f[j][m] = f^(j)_m`, the coefficient of `s^j` in `c_m(s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusBasis {
    pub n: usize,
    pub f: Vec<Vec<BigRational>>,
}

impl FrobeniusBasis {
    /// Number of stored coefficients per series.
    pub fn truncation(&self) -> usize {
        self.f.first().map_or(0, Vec::len)
    }

    pub fn holomorphic(&self) -> &[BigRational] {
        &self.f[0]
    }
}

impl Serialize for FrobeniusBasis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FrobeniusBasis", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("M", &self.truncation())?;
        let f: Vec<Vec<String>> = self.f.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
        st.serialize_field("f", &f)?;
        st.end()
    }
}

/// `p(a + s)` as a jet in `s`.
fn shifted_jet(p: &Poly, a: i64, order: u32) -> JetSeries {
    let sh = p.shift(&BigRational::from_integer(a.into()));
    let mut out = JetSeries::zero(1, order);
    for (k, c) in sh.coeffs().iter().enumerate().take(order as usize + 1) {
        out = out.add(&JetSeries::one(1, order).mul(&JetSeries::linear_int(order, 0, &[1]).pow(k as u32)).scale(c));
    }
    out
}

/// Deformed solution `Σ c_m(s) t^(m+s)` with `c_0 = 1`, each `c_m` a jet of
/// order `n-1` in `s`; `m` runs over `0..terms`.
pub fn frobenius_solutions(d: &DeltaOperator, terms: usize) -> Result<FrobeniusBasis> {
    let n = d.order();
    let slices = d.t_slices();
    let q0 = &slices[0];
    // indicial polynomial must be κ x^n
    if n == 0 || q0.degree() != Some(n) || (0..n).any(|k| !q0.coeff(k).is_zero()) {
        return Err(Error::NotMum);
    }
    let order = (n - 1) as u32;
    let mut c: Vec<JetSeries> = Vec::with_capacity(terms);
    if terms > 0 {
        c.push(JetSeries::one(1, order));
    }
    for m in 1..terms {
        let mut acc = JetSeries::zero(1, order);
        for (j, qj) in slices.iter().enumerate().skip(1) {
            if j > m || qj.is_zero() || c[m - j].is_zero() {
                continue;
            }
            acc = acc.add(&shifted_jet(qj, (m - j) as i64, order).mul(&c[m - j]));
        }
        let lead = shifted_jet(q0, m as i64, order).inverse().ok_or(Error::SingularRecurrence { m })?;
        c.push(acc.mul(&lead).scale(&-BigRational::one()));
    }
    let f = (0..n).map(|j| c.iter().map(|cm| cm.coeff(&[j as u32])).collect()).collect();
    Ok(FrobeniusBasis { n, f })
}

/// Apply `D` to `Π_l = Σ_{j<=l} log^j/j! · f^(l-j)` with `log` kept formal
/// (`δ log = log δ + 1`) and test that every log-component vanishes.
pub fn frobenius_identity_check(d: &DeltaOperator, basis: &FrobeniusBasis) -> bool {
    let len = basis.truncation();
    let slices = d.t_slices();
    // v[j][m]: coefficient of t^m log^j/j!
    let delta = |v: &Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
        (0..v.len())
            .map(|j| {
                (0..len)
                    .map(|m| {
                        let mut x = BigRational::from_integer(m.into()) * &v[j][m];
                        if j + 1 < v.len() {
                            x += &v[j + 1][m];
                        }
                        x
                    })
                    .collect()
            })
            .collect()
    };
    for l in 0..basis.n {
        let pi: Vec<Vec<BigRational>> = (0..=l).map(|j| basis.f[l - j].clone()).collect();
        let mut total = vec![vec![BigRational::zero(); len]; l + 1];
        for (i, qi) in slices.iter().enumerate() {
            // Horner for Q_i(δ) on the log-vector
            let mut acc = vec![vec![BigRational::zero(); len]; l + 1];
            for c in qi.coeffs().iter().rev() {
                acc = delta(&acc);
                for (a, p) in acc.iter_mut().zip(&pi) {
                    for (x, y) in a.iter_mut().zip(p) {
                        *x += c * y;
                    }
                }
            }
            for (t, a) in total.iter_mut().zip(&acc) {
                for m in i..len {
                    t[m] += &a[m - i];
                }
            }
        }
        if total.iter().any(|v| v.iter().any(|x| !x.is_zero())) {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FrobeniusCertificate {
    Certified {
        #[serde(serialize_with = "ser_bigint")]
        eps: BigInt,
        range: usize,
    },
    Fails {
        m: usize,
        j: usize,
    },
}

impl FrobeniusCertificate {
    pub fn eps(&self) -> Option<&BigInt> {
        match self {
            FrobeniusCertificate::Certified { eps, .. } => Some(eps),
            FrobeniusCertificate::Fails { .. } => None,
        }
    }
}

/// Smallest `ε` with `ε L_m^j f^(j)_m ∈ ℤ` for `m <= range`, `j < n`, which is
/// the lcm of the residual denominators. `L_0 = 1`.
pub fn frobenius_denominator_certificate(basis: &FrobeniusBasis, range: usize) -> Result<FrobeniusCertificate> {
    if basis.truncation() <= range {
        return Err(Error::InsufficientTerms { needed: range + 1, available: basis.truncation() });
    }
    let t = ArithTables::new(range.max(1) as u64, 64);
    let cap = BigInt::from(EPSILON_CAP);
    let mut eps = BigInt::one();
    for m in 0..=range {
        let l = t.lcm_upto(m as u64);
        let mut lj = BigInt::one();
        for j in 0..basis.n {
            let q = basis.f[j][m].denom();
            eps = eps.lcm(&(q / q.gcd(&lj)));
            if eps > cap {
                return Ok(FrobeniusCertificate::Fails { m, j });
            }
            lj *= &l;
        }
    }
    Ok(FrobeniusCertificate::Certified { eps, range })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{constant_term_powers, parse_laurent};

    fn apery_op() -> DeltaOperator {
        DeltaOperator::from_int_coeffs(&[&[0, -5, 1], &[0, -27, 3], &[0, -51, 3], &[1, -34, 1]])
    }

    fn baby_op() -> DeltaOperator {
        DeltaOperator::from_int_coeffs(&[&[0, 3, 1], &[0, 11, 2], &[-1, 11, 1]])
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn holomorphic_solution_is_the_period_sequence() {
        let b = frobenius_solutions(&apery_op(), 30).unwrap();
        assert_eq!(b.n, 3);
        let ints: Vec<BigRational> = [1, 5, 73, 1445].iter().map(|&v| q(v, 1)).collect();
        assert_eq!(&b.f[0][..4], &ints[..]);
        assert!(b.f[1][0].is_zero() && b.f[2][0].is_zero());
        let phi = parse_laurent("x1^-1*x2^-1*(1-x1)*(1-x2)*(1-x1-x2)", 2).unwrap();
        let a = constant_term_powers(&phi, 20);
        let bb = frobenius_solutions(&baby_op(), 21).unwrap();
        assert_eq!(bb.f[0], a.values);
    }

    #[test]
    fn first_log_coefficients() {
        // c_1(s) = (5 + 27 s + 51 s^2 + 34 s^3 + ...)/(1+s)^3 for the Apéry operator
        let b = frobenius_solutions(&apery_op(), 3).unwrap();
        assert_eq!(b.f[0][1], q(5, 1));
        assert_eq!(b.f[1][1], q(12, 1));
        assert_eq!(b.f[2][1], q(0, 1));
    }

    #[test]
    fn defining_identity() {
        for d in [apery_op(), baby_op()] {
            let b = frobenius_solutions(&d, 25).unwrap();
            assert!(frobenius_identity_check(&d, &b));
            let mut broken = b.clone();
            broken.f[b.n - 1][7] += BigRational::one();
            assert!(!frobenius_identity_check(&d, &broken));
        }
    }

    #[test]
    fn order_one_and_non_mum() {
        let d = DeltaOperator::from_int_coeffs(&[&[0, -3], &[1, -3, 2]]);
        let b = frobenius_solutions(&d, 10).unwrap();
        assert_eq!(b.n, 1);
        assert_eq!(b.f.len(), 1);
        let bad = DeltaOperator::from_int_coeffs(&[&[1, 1], &[0, 1], &[1]]);
        assert!(matches!(frobenius_solutions(&bad, 5), Err(Error::NotMum)));
    }

    #[test]
    fn certificates() {
        for d in [apery_op(), baby_op()] {
            let b = frobenius_solutions(&d, 41).unwrap();
            let c = frobenius_denominator_certificate(&b, 40).unwrap();
            assert!(c.eps().is_some(), "{:?}", c);
        }
        let ints = FrobeniusBasis { n: 1, f: vec![(0..5).map(|v| q(v, 1)).collect()] };
        assert_eq!(frobenius_denominator_certificate(&ints, 4).unwrap().eps(), Some(&BigInt::one()));
        let mut art = FrobeniusBasis { n: 2, f: vec![vec![q(1, 1); 4], vec![q(0, 1); 4]] };
        art.f[1][2] = q(1, 7);
        assert_eq!(frobenius_denominator_certificate(&art, 3).unwrap().eps(), Some(&BigInt::from(7)));
        art.f[1][3] = q(1, 1_000_003);
        assert_eq!(frobenius_denominator_certificate(&art, 3).unwrap(), FrobeniusCertificate::Fails { m: 3, j: 1 });
    }

    #[test]
    fn basis_json() {
        let b = frobenius_solutions(&baby_op(), 3).unwrap();
        let v = serde_json::to_value(&b).unwrap();
        assert_eq!(v["n"], 2);
        assert_eq!(v["M"], 3);
        assert_eq!(v["f"][0][0], "1");
    }
}
