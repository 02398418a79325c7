//! Differential operators in `δ = t d/dt` with polynomial coefficients.

mod fit;
mod recurrence;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Poly;

pub use fit::{fit_operator, fit_operator_with};
pub use recurrence::{operator_to_recurrence, solve_recurrence, PolynomialRecurrence};

/// `scale * Σ_k p_k(t) δ^k` with the `p_k` integral, of joint content 1,
/// and signed so that the leading coefficient is positive at `t = 0`
/// (or has positive leading coefficient when it vanishes there).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaOperator {
    pub var: String,
    coeffs: Vec<Poly>,
    scale: BigRational,
}

impl DeltaOperator {
    pub fn new(coeffs: Vec<Poly>) -> Self {
        Self::with_var("t", coeffs)
    }

    pub fn with_var(var: &str, mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return DeltaOperator { var: var.into(), coeffs, scale: BigRational::zero() };
        }
        let den = coeffs
            .iter()
            .flat_map(|p| p.coeffs().iter())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let den = BigRational::from_integer(den);
        let ints: Vec<Poly> = coeffs.iter().map(|p| p.scale(&den)).collect();
        let g = ints
            .iter()
            .flat_map(|p| p.coeffs().iter())
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        let lead = ints.last().unwrap();
        let c0 = lead.coeff(0);
        let negative = if c0.is_zero() { lead.leading().is_negative() } else { c0.is_negative() };
        let mut unit = BigRational::from_integer(g);
        if negative {
            unit = -unit;
        }
        let inv = unit.recip();
        let normalized: Vec<Poly> = ints.iter().map(|p| p.scale(&inv)).collect();
        DeltaOperator { var: var.into(), coeffs: normalized, scale: unit / den }
    }

    pub fn from_int_coeffs(coeffs: &[&[i64]]) -> Self {
        DeltaOperator::new(coeffs.iter().map(|c| Poly::from_ints(c)).collect())
    }

    pub fn zero() -> Self {
        DeltaOperator::new(vec![])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest δ power; 0 for the zero operator.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Normalized coefficient of `δ^k`.
    pub fn coeff(&self, k: usize) -> Poly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn leading(&self) -> Poly {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Maximum t-degree over all coefficients.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    /// Equal up to a nonzero rational unit.
    pub fn same_up_to_unit(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }

    /// Same operator with the rational scale dropped.
    pub fn normalized(&self) -> Self {
        DeltaOperator { var: self.var.clone(), coeffs: self.coeffs.clone(), scale: BigRational::one() }
    }

    /// Unnormalized coefficients `scale * p_k`.
    pub fn raw_coeffs(&self) -> Vec<Poly> {
        self.coeffs.iter().map(|p| p.scale(&self.scale)).collect()
    }

    /// `Q_j(x) = Σ_k [t^j]p_k · x^k` so that `D = Σ_j t^j Q_j(δ)`.
    pub fn t_slices(&self) -> Vec<Poly> {
        let raw = self.raw_coeffs();
        (0..=self.degree())
            .map(|j| Poly::new(raw.iter().map(|p| p.coeff(j)).collect()))
            .collect()
    }

    pub fn to_nc(&self) -> NcOperator {
        let mut op = NcOperator::default();
        for (k, p) in self.raw_coeffs().iter().enumerate() {
            for (j, c) in p.coeffs().iter().enumerate() {
                op.add(j as i64, k, c.clone());
            }
        }
        op
    }

    /// Apply to a truncated power series. The image is exact up to the
    /// input length since `δ` preserves degree.
    pub fn apply(&self, f: &[BigRational]) -> Vec<BigRational> {
        let slices = self.t_slices();
        (0..f.len())
            .map(|m| {
                let mut acc = BigRational::zero();
                for (j, q) in slices.iter().enumerate() {
                    if j > m || q.is_zero() || f[m - j].is_zero() {
                        continue;
                    }
                    acc += q.eval_int((m - j) as i64) * &f[m - j];
                }
                acc
            })
            .collect()
    }

    /// The operator obtained by `t -> sign/(c t)`, `δ -> -δ`, cleared of
    /// negative and common powers of `t` by left multiplication.
    pub fn substitute_reciprocal(&self, c: i64, sign: i8) -> Result<Self> {
        if c == 0 {
            return Err(Error::Invalid("c must be nonzero".into()));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::Invalid("sign must be 1 or -1".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let k = BigRational::new(BigInt::from(sign), BigInt::from(c));
        let d = self.degree();
        let raw = self.raw_coeffs();
        let mut out = Vec::with_capacity(raw.len());
        for (pow, p) in raw.iter().enumerate() {
            let sgn = if pow % 2 == 1 { -BigRational::one() } else { BigRational::one() };
            let mut c = vec![BigRational::zero(); d + 1];
            for (j, a) in p.coeffs().iter().enumerate() {
                c[d - j] = a * num_traits::pow(k.clone(), j) * &sgn;
            }
            out.push(Poly::new(c));
        }
        let v = out.iter().filter_map(Poly::valuation).min().unwrap_or(0);
        let out = out.into_iter().map(|p| Poly::new(p.coeffs().iter().skip(v).cloned().collect())).collect();
        Ok(DeltaOperator::with_var(&self.var, out))
    }

    /// Whether `substitute_reciprocal(c, sign) ∘ t = q t^e ∘ D` for some
    /// rational `q` and integer `e`.
    pub fn involutive_symmetry(&self, c: i64, sign: i8) -> Result<Option<(BigRational, i64)>> {
        let s = self.substitute_reciprocal(c, sign)?.to_nc();
        let lhs = s.mul(&NcOperator::t_power(1));
        let rhs = self.to_nc();
        Ok(lhs.unit_multiple_of(&rhs))
    }

    pub fn involutive_symmetry_check(&self, c: i64, sign: i8) -> Result<bool> {
        Ok(self.involutive_symmetry(c, sign)?.is_some())
    }

    pub fn structural_checks(&self, n: usize) -> StructuralReport {
        structural_checks(self, n)
    }
}

impl fmt::Display for DeltaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (k, p) in self.coeffs.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            let d = match k {
                0 => String::new(),
                1 => "*δ".to_string(),
                _ => format!("*δ^{}", k),
            };
            parts.push(format!("({}){}", p.fmt_var(&self.var), d));
        }
        let body = parts.join(" + ");
        if self.scale.is_one() {
            write!(f, "{}", body)
        } else {
            write!(f, "{} * [{}]", self.scale, body)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    var: String,
    coeffs: Vec<Vec<String>>,
    scale: String,
}

impl Serialize for DeltaOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorJson {
            var: self.var.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|p| p.coeffs().iter().map(|c| c.to_string()).collect())
                .collect(),
            scale: self.scale.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DeltaOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = OperatorJson::deserialize(d)?;
        let scale: BigRational = j.scale.parse().map_err(D::Error::custom)?;
        let mut coeffs = Vec::new();
        for row in j.coeffs {
            let mut c = Vec::new();
            for s in row {
                c.push(s.parse::<BigRational>().map_err(D::Error::custom)? * &scale);
            }
            coeffs.push(Poly::new(c));
        }
        Ok(DeltaOperator::with_var(&j.var, coeffs))
    }
}

/// Noncommutative operator `Σ c_{a,b} t^a δ^b` with `a` possibly negative,
/// kept in the normal form with `t`-powers on the left.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NcOperator {
    terms: BTreeMap<(i64, usize), BigRational>,
}

impl NcOperator {
    pub fn t_power(a: i64) -> Self {
        let mut op = NcOperator::default();
        op.add(a, 0, BigRational::one());
        op
    }

    pub fn delta_power(b: usize) -> Self {
        let mut op = NcOperator::default();
        op.add(0, b, BigRational::one());
        op
    }

    pub fn add(&mut self, a: i64, b: usize, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, usize), &BigRational)> {
        self.terms.iter()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add(a, b, -c.clone());
        }
        out
    }

    /// Product using `δ^b t^c = t^c (δ + c)^b`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = NcOperator::default();
        for (&(a, b), c1) in &self.terms {
            for (&(c, d), c2) in &other.terms {
                let base = c1 * c2;
                let cc = BigInt::from(c);
                let mut binom = BigInt::one();
                for i in 0..=b {
                    let coeff = &binom * num_traits::pow(cc.clone(), b - i);
                    out.add(a + c, i + d, &base * BigRational::from_integer(coeff));
                    binom = binom * BigInt::from(b - i) / BigInt::from(i + 1);
                }
            }
        }
        out
    }

    /// `Some((q, e))` if `self = q t^e other`.
    pub fn unit_multiple_of(&self, other: &Self) -> Option<(BigRational, i64)> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        let (&(a1, b1), c1) = self.terms.iter().next()?;
        let (&(a2, b2), c2) = other.terms.iter().next()?;
        if b1 != b2 || self.terms.len() != other.terms.len() {
            return None;
        }
        let e = a1 - a2;
        let q = c1 / c2;
        let shifted = NcOperator::t_power(e).mul(other);
        let mut scaled = NcOperator::default();
        for (&(a, b), c) in &shifted.terms {
            scaled.add(a, b, c * &q);
        }
        (scaled == *self).then_some((q, e))
    }

    /// Apply to a Laurent-free power series given by coefficients; negative
    /// `t` powers must not occur.
    pub fn apply(&self, f: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); f.len()];
        for (&(a, b), c) in &self.terms {
            assert!(a >= 0, "negative t-power");
            let a = a as usize;
            for m in 0..f.len().saturating_sub(a) {
                if f[m].is_zero() {
                    continue;
                }
                let w = BigRational::from_integer(BigInt::from(m).pow(b as u32));
                out[m + a] += c * w * &f[m];
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub order: usize,
    pub integral: bool,
    pub mum: bool,
    pub conifold_shape: bool,
    pub delta_phi: usize,
}

impl StructuralReport {
    pub fn delta_phi_ok(&self) -> bool {
        self.delta_phi == 2
    }
}

pub fn structural_checks(d: &DeltaOperator, n: usize) -> StructuralReport {
    let p = d.leading();
    let p0 = p.coeff(0);
    // with content 1, scaling to P(0) = 1 keeps integrality iff |P(0)| = 1
    let integral = p0.is_zero() || p0.abs().is_one();
    let lower_vanish = (0..d.order()).all(|k| d.coeff(k).coeff(0).is_zero());
    let mum = !d.is_zero() && d.order() == n && p0.abs().is_one() && lower_vanish;
    let delta_phi = p.degree().unwrap_or(0);
    let conifold_shape = delta_phi == 2
        && (0..d.order()).all(|k| {
            let f = d.coeff(k);
            f.coeff(0).is_zero() && f.degree().is_none_or(|g| g <= 2)
        });
    StructuralReport { order: d.order(), integral, mum, conifold_shape, delta_phi }
}
