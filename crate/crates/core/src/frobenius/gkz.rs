use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::jet::JetSeries;
use crate::arith::lcm_upto;
use crate::error::{Error, Result};
use crate::polytope::MoriData;
use crate::serde_util::ser_rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GkzKind {
    Effective,
    QuasiEffective,
    /// More than one negative entry; the value is still computed from the
    /// formula but carries no divisibility guarantee.
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GkzCoefficient {
    pub ell: Vec<i64>,
    pub kappa: Vec<u32>,
    pub kind: GkzKind,
    /// Taylor coefficient of `J^κ`.
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
    /// `∂_J^κ` at `0`, i.e. `κ!` times `value`.
    #[serde(serialize_with = "ser_rational")]
    pub derivative: BigRational,
}

fn factorial(k: i64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// `H_k^(p) = Σ_{j<=k} j^-p`.
fn harmonic(k: i64, p: u32) -> BigRational {
    (1..=k).fold(BigRational::zero(), |acc, j| acc + BigRational::new(BigInt::one(), BigInt::from(j).pow(p)))
}

/// `Σ_{p<=order} c_p H_k^(p) D^p / p` with `c_p = sign^(p+1)`.
fn log_jet(d: &JetSeries, k: i64, alternating: bool) -> JetSeries {
    let mut out = JetSeries::zero(d.nvars(), d.order());
    let mut dp = JetSeries::one(d.nvars(), d.order());
    for p in 1..=d.order() {
        dp = dp.mul(d);
        let mut c = harmonic(k, p) / BigRational::from_integer(p.into());
        if alternating && p % 2 == 0 {
            c = -c;
        }
        out = out.add(&dp.scale(&c));
    }
    out
}

pub fn classify(ell: &[i64]) -> GkzKind {
    match ell[1..].iter().filter(|&&v| v < 0).count() {
        0 => GkzKind::Effective,
        1 => GkzKind::QuasiEffective,
        _ => GkzKind::Neither,
    }
}

/// Taylor coefficient of `𝓑_ℓ(D)` at `J^κ`, with `D_i = Σ_k ℓ_i^(k) J_k`.
///
/// Falling factors `D - j` are taken as `j - D`, which fixes the overall
/// sign so that `κ = 0` gives the multinomial `(-ℓ_0)!/Π ℓ_i!`. Then
/// `Π_{j=1}^{k}(j - D) = k! exp(-Σ_p H_k^(p) D^p/p)` and
/// `Π_{j=1}^{k}(j + D) = k! exp(Σ_p (-1)^(p+1) H_k^(p) D^p/p)`.
pub fn gkz_coefficient(ell: &[i64], mori: &MoriData, kappa: &[u32]) -> Result<GkzCoefficient> {
    let npts = mori.points.len();
    if ell.len() != npts + 1 {
        return Err(Error::DimensionMismatch { expected: npts + 1, found: ell.len() });
    }
    if kappa.len() != mori.rank() {
        return Err(Error::DimensionMismatch { expected: mori.rank(), found: kappa.len() });
    }
    if ell[0] > 0 {
        return Err(Error::Invalid(format!("l_0 = {} > 0 puts a pole at J = 0", ell[0])));
    }
    let order: u32 = kappa.iter().sum();
    let nv = mori.rank();
    let d: Vec<JetSeries> = (0..=npts)
        .map(|i| {
            let a: Vec<i64> = mori.generators.iter().map(|g| g[i]).collect();
            JetSeries::linear_int(order, 0, &a)
        })
        .collect();

    let mut constant = BigRational::from_integer(factorial(-ell[0]));
    let mut lambda = log_jet(&d[0], -ell[0], false).scale(&-BigRational::one());
    let mut prefactor = JetSeries::one(nv, order);
    for i in 1..=npts {
        let l = ell[i];
        if l > 0 {
            constant /= BigRational::from_integer(factorial(l));
            lambda = lambda.sub(&log_jet(&d[i], l, true));
        } else if l < 0 {
            constant *= BigRational::from_integer(factorial(-l - 1));
            lambda = lambda.sub(&log_jet(&d[i], -l - 1, false));
            prefactor = prefactor.mul(&d[i]);
        }
    }
    let b = prefactor.mul(&lambda.exp()).scale(&constant);
    let value = b.coeff(kappa);
    let kfact = kappa.iter().fold(BigInt::one(), |acc, &k| acc * factorial(k as i64));
    let derivative = &value * BigRational::from_integer(kfact);
    Ok(GkzCoefficient { ell: ell.to_vec(), kappa: kappa.to_vec(), kind: classify(ell), value, derivative })
}

/// Whether the reduced denominator of the coefficient divides `L_s^|κ|`,
/// `s = |ℓ_0|` for effective `ℓ` and `s = |ℓ|⁺` otherwise.
pub fn gkz_divisibility_check(ell: &[i64], mori: &MoriData, kappa: &[u32]) -> Result<bool> {
    let c = gkz_coefficient(ell, mori, kappa)?;
    let s = match c.kind {
        GkzKind::Effective => ell[0].unsigned_abs(),
        _ => ell[1..].iter().filter(|&&v| v > 0).sum::<i64>() as u64,
    };
    let k: u32 = kappa.iter().sum();
    let bound = lcm_upto(s.max(1)).pow(k);
    Ok((bound % c.value.denom()).is_zero())
}
