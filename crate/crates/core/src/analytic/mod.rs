//! Interval reals, radii, gates, Apéry limits and constant recognition.

mod constants;
mod real;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::laurent::RationalSequence;
use crate::poly::Poly;

pub use constants::{bernoulli, catalan, constant_catalog, hurwitz_sum, l_chi3_3, log_ratio, zeta, NamedConstant};
pub use real::{BigReal, DEFAULT_PRECISION};

/// `(p + q√d)/e` with `d` squarefree (or `d = 1`, `q = 0`) and `e > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    pub p: BigInt,
    pub q: BigInt,
    pub d: BigInt,
    pub e: BigInt,
}

impl Surd {
    fn normalized(mut self) -> Self {
        if self.d.is_one() {
            self.p += &self.q;
            self.q = BigInt::zero();
        }
        if self.e.is_negative() {
            self.p = -self.p;
            self.q = -self.q;
            self.e = -self.e;
        }
        let g = self.p.gcd(&self.q).gcd(&self.e);
        if !g.is_zero() && !g.is_one() {
            self.p /= &g;
            self.q /= &g;
            self.e /= &g;
        }
        self
    }

    pub fn value(&self, prec: u32) -> BigReal {
        let root = BigReal::from_int(self.d.clone(), prec + 8).sqrt().expect("d >= 0");
        let num = &BigReal::from_int(self.p.clone(), prec + 8) + &(&root * &BigReal::from_int(self.q.clone(), prec + 8));
        num.div(&BigReal::from_int(self.e.clone(), prec + 8)).expect("e > 0").with_prec(prec)
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }
}

impl std::fmt::Display for Surd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let num = if self.q.is_zero() {
            self.p.to_string()
        } else {
            let sign = if self.q.is_negative() { "-" } else { "+" };
            let qa = self.q.abs();
            let qs = if qa.is_one() { String::new() } else { qa.to_string() };
            if self.p.is_zero() {
                format!("{}{}√{}", if self.q.is_negative() { "-" } else { "" }, qs, self.d)
            } else {
                format!("{} {} {}√{}", self.p, sign, qs, self.d)
            }
        };
        if self.e.is_one() {
            write!(f, "{}", num)
        } else if self.q.is_zero() {
            write!(f, "{}/{}", num, self.e)
        } else {
            write!(f, "({})/{}", num, self.e)
        }
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Surd", 4)?;
        st.serialize_field("p", &self.p.to_string())?;
        st.serialize_field("q", &self.q.to_string())?;
        st.serialize_field("d", &self.d.to_string())?;
        st.serialize_field("e", &self.e.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            p: String,
            q: String,
            d: String,
            e: String,
        }
        let r = Raw::deserialize(d)?;
        let int = |s: &str| s.trim().parse::<BigInt>().map_err(D::Error::custom);
        Ok(Surd { p: int(&r.p)?, q: int(&r.q)?, d: int(&r.d)?, e: int(&r.e)? })
    }
}

/// Split `n > 0` as `s^2 * d`, extracting square factors up to `10^6`.
fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    let mut d = n.clone();
    let mut k = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &k * &k <= d && k <= limit {
        let k2 = &k * &k;
        while (&d % &k2).is_zero() {
            d /= &k2;
            s *= &k;
        }
        k += 1;
    }
    let r = d.sqrt();
    if &r * &r == d {
        s *= r;
        d = BigInt::one();
    }
    (s, d)
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadraticRoot {
    /// `None` for complex roots.
    pub surd: Option<Surd>,
    /// Modulus of the root.
    pub value: BigReal,
    pub complex: bool,
}

/// Root of smaller modulus of an integer quadratic.
pub fn quadratic_smallest_root(p: &Poly, prec: u32) -> Result<QuadraticRoot> {
    if p.degree() != Some(2) {
        return Err(Error::Invalid(format!("expected a quadratic, got degree {:?}", p.degree())));
    }
    let (c, _) = p.primitive_part();
    let (c0, b, a) = (c[0].clone(), c[1].clone(), c[2].clone());
    let disc = &b * &b - BigInt::from(4) * &a * &c0;
    if disc.is_negative() {
        let modulus = BigReal::from_rational(&BigRational::new(c0, a), prec + 8).abs().sqrt()?.with_prec(prec);
        return Ok(QuadraticRoot { surd: None, value: modulus, complex: true });
    }
    let (s, d) = if disc.is_zero() { (BigInt::zero(), BigInt::one()) } else { square_split(&disc) };
    // the conjugate with the sign of -b has the larger modulus
    let q = if b.is_negative() { -s } else { s };
    let surd = Surd { p: -b, q, d, e: BigInt::from(2) * a }.normalized();
    let value = surd.value(prec).abs();
    Ok(QuadraticRoot { surd: Some(surd), value, complex: false })
}

/// Root-test estimate of `(limsup |a_m|^(1/m))^(-1)` from the tail of `a`.
/// The enclosure width is a heuristic error bar, not a bound.
pub fn radius_estimate(a: &RationalSequence) -> Result<BigReal> {
    let len = a.len();
    if len < 30 {
        return Err(Error::InsufficientTerms { needed: 30, available: len });
    }
    let prec = 128;
    let start = a.start;
    let last = start + len - 1;
    let step = (len / 8).max(2);
    // s_m = log|a_m / a_{m-1}| = L + c1/m + c2/m^2 + ...
    let s = |m: usize| -> Result<BigReal> {
        let (x, y) = (a.get(m).unwrap(), a.get(m - 1).unwrap());
        if x.is_zero() || y.is_zero() {
            return Err(Error::NoConvergence(format!("zero term near index {}", m)));
        }
        BigReal::from_rational(&(x / y).abs(), prec).ln()
    };
    let nodes: Vec<usize> = (0..4).map(|i| last - i * step).collect();
    let vals: Vec<BigReal> = nodes.iter().map(|&m| s(m)).collect::<Result<_>>()?;
    let h: Vec<BigReal> = nodes.iter().map(|&m| BigReal::from_rational(&BigRational::new(1.into(), (m as i64).into()), prec)).collect();
    let extrapolate = |k: usize| -> BigReal {
        // Neville's scheme evaluated at h = 0 on the first k nodes
        let mut p: Vec<BigReal> = vals[..k].to_vec();
        for lvl in 1..k {
            for i in 0..k - lvl {
                let num = &(&h[i + lvl] * &p[i]) - &(&h[i] * &p[i + 1]);
                p[i] = num.div(&(&h[i + lvl] - &h[i])).expect("distinct nodes");
            }
        }
        p[0].clone()
    };
    let l4 = extrapolate(4);
    let l3 = extrapolate(3);
    let err = (&l4 - &l3).abs().hi();
    let r = (-&l4).exp();
    let bar = &err * &r.hi() * BigRational::from_integer(2.into());
    Ok(r.widen(&bar))
}

#[derive(Debug, Clone, Serialize)]
pub struct GateResult {
    pub r_phi: BigReal,
    pub n: u32,
    #[serde(rename = "C")]
    pub c: i64,
    /// `r_phi · |C|`.
    pub r_times_c: BigReal,
    /// `r_phi · |C| · e^n`, rounded upward for the verdict.
    pub product: BigReal,
    pub pass: bool,
}

pub fn gate_check(r_phi: &BigReal, n: u32, c: i64) -> GateResult {
    let prec = r_phi.prec();
    let rc = r_phi.mul_int(c.abs());
    let en = BigReal::from_int(n, prec).exp();
    let product = &rc * &en;
    let pass = product.certainly_below(&BigRational::one());
    GateResult { r_phi: r_phi.clone(), n, c, r_times_c: rc, product, pass }
}

#[derive(Debug, Clone, Serialize)]
pub struct AperyLimit {
    /// `b_M/a_M` widened by the last ratio difference.
    pub value: BigReal,
    pub m_used: usize,
    pub certified: bool,
}

/// Tail-ratio estimate of `lim b_m/a_m`. Stops at the first `M` whose ratio
/// difference is below `2^-prec`.
pub fn apery_limit(a: &RationalSequence, b: &RationalSequence, prec: u32) -> Result<AperyLimit> {
    let end = (a.start + a.len()).min(b.start + b.len());
    let begin = a.start.max(b.start);
    let target = BigRational::new(BigInt::one(), BigInt::one() << prec);
    let mut prev: Option<BigRational> = None;
    let mut first_diff: Option<BigRational> = None;
    let mut last: Option<(usize, BigRational, BigRational)> = None;
    for m in begin..end {
        let am = a.get(m).unwrap();
        if am.is_zero() {
            continue;
        }
        let r = b.get(m).unwrap() / am;
        if let Some(p) = &prev {
            let diff = (&r - p).abs();
            if first_diff.is_none() {
                first_diff = Some(diff.clone());
            }
            let done = diff < target;
            last = Some((m, r.clone(), diff));
            if done {
                break;
            }
        }
        prev = Some(r);
    }
    let (m, r, diff) = last.ok_or_else(|| Error::InsufficientTerms { needed: 2, available: end.saturating_sub(begin) })?;
    let first = first_diff.unwrap();
    if !diff.is_zero() && diff >= first {
        return Err(Error::NoConvergence(format!("ratio differences do not decay (index {})", m)));
    }
    Ok(AperyLimit { value: BigReal::from_rational(&r, prec).widen(&diff), m_used: m, certified: false })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantMatch {
    pub name: String,
    #[serde(serialize_with = "crate::serde_util::ser_rational")]
    pub multiple: BigRational,
    pub residual: f64,
}

/// Best `v ≈ (p/q)·κ` with `|p|, q <= max_denominator`. Requires at least 10
/// significant digits in `v` and agreement within ten times its error bar.
pub fn match_constant(v: &BigReal, catalog: &[NamedConstant], max_denominator: u64) -> Option<ConstantMatch> {
    if v.contains_zero() {
        return None;
    }
    let vm = v.mid();
    let vr = v.radius();
    if vr > vm.abs() * BigRational::new(1.into(), BigInt::from(10).pow(10)) {
        return None;
    }
    let ten = BigRational::from_integer(10.into());
    let mut best: Option<(BigRational, ConstantMatch)> = None;
    for k in catalog {
        if k.value.contains_zero() {
            continue;
        }
        let km = k.value.mid();
        let kr = k.value.radius();
        for q in 1..=max_denominator {
            let qr = BigRational::from_integer(q.into());
            let p = (&vm * &qr / &km).round();
            if p.is_zero() || p.abs() > BigRational::from_integer(max_denominator.into()) {
                continue;
            }
            let c = p / &qr;
            let residual = (&vm - &c * &km).abs();
            let tol = &ten * (&vr + c.abs() * &kr);
            if residual > tol {
                continue;
            }
            if best.as_ref().is_none_or(|(r, _)| residual < *r) {
                let rel = (&residual / vm.abs()).to_f64().unwrap_or(0.0);
                best = Some((residual, ConstantMatch { name: k.name.clone(), multiple: c, residual: rel }));
            }
        }
    }
    best.map(|(_, m)| m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegulatorKind {
    /// `-∫_0^1 log(1-s) ds/s`
    Dilog,
    /// `-2 ∫_0^1 log(1-r) log(r) dr/r`
    Zeta3,
}

/// The reduced regulator integrals, integrated termwise: expanding
/// `-log(1-r) = Σ r^k/k` and using `∫_0^1 r^(k-1) log(r)^j dr = (-1)^j j!/k^(j+1)`
/// leaves a sum `c Σ k^(-s)`.
pub fn regulator_integral(kind: RegulatorKind, prec: u32) -> BigReal {
    let (j, scale) = match kind {
        RegulatorKind::Dilog => (0u32, 1i64),
        RegulatorKind::Zeta3 => (1u32, 2i64),
    };
    let moment_sign = if j % 2 == 0 { 1 } else { -1 };
    let factorial: i64 = (1..=j as i64).product();
    // Σ_k (1/k) · (-1)^j j!/k^(j+1)
    hurwitz_sum(1, 1, j + 2, prec).mul_int(scale * moment_sign * factorial)
}
